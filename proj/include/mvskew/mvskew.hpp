#ifndef MVSKEW_MVSKEW_HPP
#define MVSKEW_MVSKEW_HPP

// Umbrella header for the sparse mean-variance-skewness portfolio solver.

#include "mvskew/errors.hpp"
#include "mvskew/moments.hpp"
#include "mvskew/objective.hpp"
#include "mvskew/surrogate.hpp"
#include "mvskew/inner_solver.hpp"
#include "mvskew/sca.hpp"
#include "mvskew/synthetic.hpp"

#endif // MVSKEW_MVSKEW_HPP
