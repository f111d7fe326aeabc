#pragma once

// Umbrella header for the varineq library: weighted finite samples, power
// variance monotonicity, AM-GM gap variance bounds, positive/negative part
// variance decomposition, and the randomized stress harness.

#include "varineq/errors.hpp"
#include "varineq/sum.hpp"
#include "varineq/weighted_sample.hpp"
#include "varineq/stats.hpp"
#include "varineq/power_variance.hpp"
#include "varineq/amgm.hpp"
#include "varineq/sign_decomposition.hpp"
#include "varineq/stress.hpp"
#include "varineq/io.hpp"
