#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "varineq/stats.hpp"
#include "varineq/weighted_sample.hpp"

namespace varineq {

// Sentinel for log Var(X^s)^{1/s} when the variance vanishes.
inline constexpr double neg_infinity = -std::numeric_limits<double>::infinity();

/// (1/s) * ln Var(X^s), or -infinity when Var(X^s) = 0.
///
/// The computation factors out the largest value M, so only the bounded
/// sample (X/M)^s is ever powered:
///   (1/s) ln Var(X^s) = 2 ln M + (1/s) ln Var((X/M)^s).
/// Var(X^s)^{1/s} underflows catastrophically for small s; every comparison
/// downstream therefore happens on this log channel.
inline double log_power_variance(const weighted_sample& x, double s) {
    detail::require_positive_exponent(s, "log_power_variance");
    detail::require_nonnegative(x, "log_power_variance");
    const double top = x.max_value();
    if (top == 0.0 || x.constant()) {
        return neg_infinity;
    }
    std::vector<double> scaled(x.values().begin(), x.values().end());
    for (double& v : scaled) {
        v = std::pow(v / top, s);
    }
    const double v = variance(weighted_sample(
        std::move(scaled), std::vector<double>(x.weights().begin(), x.weights().end())));
    if (v == 0.0) {
        return neg_infinity;
    }
    return 2.0 * std::log(top) + std::log(v) / s;
}

/// Var(X^s)^{1/s}; zero when X is constant. Homogeneous of order 2 in X.
inline double power_variance(const weighted_sample& x, double s) {
    detail::require_positive_exponent(s, "power_variance");
    detail::require_nonnegative(x, "power_variance");
    if (s == 1.0) {
        return variance(x);
    }
    const double lv = log_power_variance(x, s);
    return lv == neg_infinity ? 0.0 : std::exp(lv);
}

/// Evaluations of s -> (1/s) ln Var(X^s) over an ascending exponent grid.
struct power_variance_curve {
    std::vector<double> grid;
    std::vector<double> log_v;  // same length as grid; -infinity marks Var = 0
};

/// count log-spaced exponents covering [lo, hi], endpoints included.
inline std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count) {
    detail::require_positive_exponent(lo, "log_spaced_grid");
    if (!(hi > lo) || count < 2) {
        throw exponent_order_error("log_spaced_grid: need hi > lo > 0 and count >= 2");
    }
    std::vector<double> grid(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t j = 0; j < count; ++j) {
        grid[j] = std::exp(llo + (lhi - llo) * static_cast<double>(j) /
                                     static_cast<double>(count - 1));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

/// Default 34-point grid on [0.05, 1]: 32 log-spaced interior exponents plus
/// both endpoints. Log spacing resolves the small-s regime where the plain
/// power Var(X^s)^{1/s} would underflow.
inline std::vector<double> default_grid() { return log_spaced_grid(0.05, 1.0, 34); }

inline power_variance_curve curve(const weighted_sample& x, const std::vector<double>& grid) {
    if (grid.empty()) {
        throw nonpositive_exponent_error("curve: empty exponent grid");
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
        detail::require_positive_exponent(grid[j], "curve");
        if (j > 0 && !(grid[j] > grid[j - 1])) {
            throw exponent_order_error("curve: grid must be strictly ascending");
        }
    }
    power_variance_curve c;
    c.grid = grid;
    c.log_v.reserve(grid.size());
    for (double s : grid) {
        c.log_v.push_back(log_power_variance(x, s));
    }
    return c;
}

struct monotonicity_verdict {
    bool monotone = true;
    double worst_gap = 0.0;      // largest positive drop in log units, 0 when none
    std::size_t worst_index = 0; // left index of the worst adjacent pair
};

/// Checks log V(s) is nondecreasing along the grid. A pair passes when
/// log_v[j] <= log_v[j+1] + rel tol scaled by max(1, |log_v[j+1]|);
/// -infinity is below everything.
inline monotonicity_verdict check_monotone(const power_variance_curve& c, tolerance tol = {}) {
    monotonicity_verdict verdict;
    for (std::size_t j = 0; j + 1 < c.log_v.size(); ++j) {
        const double a = c.log_v[j];
        const double b = c.log_v[j + 1];
        if (a == neg_infinity) {
            continue;  // -inf <= anything
        }
        const double gap = b == neg_infinity ? std::numeric_limits<double>::infinity() : a - b;
        if (gap > verdict.worst_gap) {
            verdict.worst_gap = gap;
            verdict.worst_index = j;
        }
        const double allowance =
            b == neg_infinity ? 0.0 : tol.rel * std::max(1.0, std::abs(b));
        if (gap > allowance) {
            verdict.monotone = false;
        }
    }
    return verdict;
}

/// Witness of the intermediate-norm bound ||X||_s <= ||X||_r^{1-t} ||X||_p^t
/// with t solving 1/s = (1-t)/r + t/p.
struct interpolation_witness {
    double r = 0.0;
    double s = 0.0;
    double p = 0.0;
    double t = 0.0;
    double lhs = 0.0;  // ||X||_s
    double rhs = 0.0;  // ||X||_r^{1-t} * ||X||_p^t
};

inline interpolation_witness interpolated_norm_bound(const weighted_sample& x, double r,
                                                     double s, double p) {
    if (!(0.0 < r && r < s && s < p)) {
        throw exponent_order_error("interpolated_norm_bound: need 0 < r < s < p");
    }
    detail::require_nonnegative(x, "interpolated_norm_bound");
    if (x.max_value() == 0.0) {
        throw zero_sample_error("interpolated_norm_bound: sample is identically zero");
    }
    interpolation_witness w;
    w.r = r;
    w.s = s;
    w.p = p;
    w.t = (1.0 / r - 1.0 / s) / (1.0 / r - 1.0 / p);
    w.lhs = lp_norm(x, s);
    w.rhs = std::pow(lp_norm(x, r), 1.0 - w.t) * std::pow(lp_norm(x, p), w.t);
    return w;
}

}  // namespace varineq
