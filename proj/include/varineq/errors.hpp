#pragma once

#include <stdexcept>
#include <string>

namespace varineq {

// Construction-time failures of weighted_sample (bad weights, non-finite values).
struct invalid_sample_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A value is negative where only nonnegative values are admissible.
struct negative_value_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A value is zero or negative where strictly positive values are required.
struct nonpositive_value_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Exponent must be strictly positive.
struct nonpositive_exponent_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Exponents violate the required strict ordering (e.g. r < s < p).
struct exponent_order_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Exponent lies outside the admissible range of the bound family.
struct exponent_range_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation needs a sample that is not identically zero.
struct zero_sample_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation needs at least two sample points.
struct too_few_points_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Hill-climb start sample fails the target inequality's preconditions.
struct invalid_start_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace varineq
