#pragma once

#include <cmath>
#include <vector>

#include "varineq/weighted_sample.hpp"

namespace varineq {

/// Weighted arithmetic mean, sum alpha_i * x_i.
inline double mean(const weighted_sample& x) {
    kbn_sum acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc.add(x.weight(i) * x.value(i));
    }
    return acc.value();
}

/// Weighted variance, sum alpha_i * (x_i - mean)^2, two-pass centered form.
/// Negative round-off is clamped to zero so downstream 1/s powers stay defined.
inline double variance(const weighted_sample& x) {
    const double m = mean(x);
    kbn_sum acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.value(i) - m;
        acc.add(x.weight(i) * d * d);
    }
    const double v = acc.value();
    return v > 0.0 ? v : 0.0;
}

/// Weighted geometric mean prod x_i^{alpha_i}, evaluated in the log domain.
/// A zero value makes the product exactly zero without touching ln 0.
inline double geometric_mean(const weighted_sample& x) {
    detail::require_nonnegative(x, "geometric_mean");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.value(i) == 0.0) {
            return 0.0;
        }
    }
    kbn_sum acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc.add(x.weight(i) * std::log(x.value(i)));
    }
    return std::exp(acc.value());
}

/// Pointwise power x_i^s with the weights kept; requires s > 0 and x >= 0.
inline weighted_sample power_transform(const weighted_sample& x, double s) {
    detail::require_positive_exponent(s, "power_transform");
    detail::require_nonnegative(x, "power_transform");
    std::vector<double> values(x.values().begin(), x.values().end());
    std::vector<double> weights(x.weights().begin(), x.weights().end());
    if (s != 1.0) {
        for (double& v : values) {
            v = std::pow(v, s);
        }
    }
    return weighted_sample(std::move(values), std::move(weights));
}

/// Weighted Lq norm (sum alpha_i x_i^q)^{1/q}. The maximum value is factored
/// out before powering so large samples neither overflow nor underflow.
inline double lp_norm(const weighted_sample& x, double q) {
    detail::require_positive_exponent(q, "lp_norm");
    detail::require_nonnegative(x, "lp_norm");
    const double top = x.max_value();
    if (top == 0.0) {
        return 0.0;
    }
    kbn_sum acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc.add(x.weight(i) * std::pow(x.value(i) / top, q));
    }
    return top * std::pow(acc.value(), 1.0 / q);
}

}  // namespace varineq
