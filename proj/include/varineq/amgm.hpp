#pragma once

#include <cmath>
#include <optional>

#include "varineq/power_variance.hpp"
#include "varineq/stats.hpp"
#include "varineq/weighted_sample.hpp"

namespace varineq {

namespace detail {
inline void require_two_points(const weighted_sample& x, const char* where) {
    if (x.size() < 2) {
        throw too_few_points_error(std::string(where) + ": need at least 2 points");
    }
}
}  // namespace detail

/// E X - GM(X), the nonnegative spread between arithmetic and geometric mean.
inline double amgm_gap(const weighted_sample& x) {
    detail::require_nonnegative(x, "amgm_gap");
    detail::require_two_points(x, "amgm_gap");
    const double gap = mean(x) - geometric_mean(x);
    return gap > 0.0 ? gap : 0.0;
}

struct gap_bounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Two-sided bound on the AM-GM gap built from powered variances of sqrt(X):
///   Var(X^{r/2})^{1/r} / (1 - alpha_min)  <=  gap  <=  Var(X^{s/2})^{1/s} / alpha_min
/// for r in (0,1] and s in [1,inf). By monotonicity of Var(X^u)^{1/u} the
/// lower bound is best at r = 1 and the upper bound at s = 1.
inline gap_bounds gap_variance_bounds(const weighted_sample& x, double r, double s) {
    detail::require_nonnegative(x, "gap_variance_bounds");
    detail::require_two_points(x, "gap_variance_bounds");
    if (!(r > 0.0 && r <= 1.0)) {
        throw exponent_range_error("gap_variance_bounds: r must lie in (0, 1]");
    }
    if (!(s >= 1.0) || !std::isfinite(s)) {
        throw exponent_range_error("gap_variance_bounds: s must lie in [1, inf)");
    }
    const weighted_sample root = power_transform(x, 0.5);
    const double amin = x.min_weight();
    gap_bounds b;
    b.lower = power_variance(root, r) / (1.0 - amin);
    b.upper = power_variance(root, s) / amin;
    return b;
}

/// Cartwright-Field sandwich Var(X)/(2 X_max) <= gap <= Var(X)/(2 X_min),
/// defined only for strictly positive samples.
inline gap_bounds cartwright_field_bounds(const weighted_sample& x) {
    detail::require_two_points(x, "cartwright_field_bounds");
    if (!(x.min_value() > 0.0)) {
        throw nonpositive_value_error("cartwright_field_bounds: values must be > 0");
    }
    const double v = variance(x);
    return {v / (2.0 * x.max_value()), v / (2.0 * x.min_value())};
}

/// The plain lower bound Var(X^{1/2}) <= gap. Asymptotically as sharp as the
/// r = 1 variance-power bound, which improves it by the factor 1/(1 - alpha_min).
inline double sqrt_variance_lower_bound(const weighted_sample& x) {
    detail::require_nonnegative(x, "sqrt_variance_lower_bound");
    detail::require_two_points(x, "sqrt_variance_lower_bound");
    return variance(power_transform(x, 0.5));
}

enum class bound_family { variance_power, cartwright_field, sqrt_variance };

inline const char* bound_family_name(bound_family f) {
    switch (f) {
        case bound_family::variance_power: return "variance-power";
        case bound_family::cartwright_field: return "cartwright-field";
        case bound_family::sqrt_variance: return "sqrt-variance";
    }
    return "?";
}

/// All gap bounds for one sample. Cartwright-Field entries are absent
/// (not zero or infinite) when X_min = 0, where that theorem does not apply.
struct amgm_gap_report {
    double gap = 0.0;
    double var_lower = 0.0;  // variance-power lower bound at exponent r
    double var_upper = 0.0;  // variance-power upper bound at exponent s
    double r = 1.0;
    double s = 1.0;
    std::optional<gap_bounds> cartwright_field;
    double sqrt_var_lower = 0.0;
    double alpha_min = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    bound_family tightest_lower = bound_family::variance_power;
    bound_family tightest_upper = bound_family::variance_power;
};

inline amgm_gap_report full_gap_report(const weighted_sample& x, double r = 1.0,
                                       double s = 1.0) {
    amgm_gap_report rep;
    rep.gap = amgm_gap(x);
    rep.r = r;
    rep.s = s;
    const gap_bounds vb = gap_variance_bounds(x, r, s);
    rep.var_lower = vb.lower;
    rep.var_upper = vb.upper;
    rep.sqrt_var_lower = sqrt_variance_lower_bound(x);
    rep.alpha_min = x.min_weight();
    rep.x_min = x.min_value();
    rep.x_max = x.max_value();
    if (rep.x_min > 0.0) {
        rep.cartwright_field = cartwright_field_bounds(x);
    }

    // Ties prefer variance-power, then Cartwright-Field, then sqrt-variance.
    rep.tightest_lower = bound_family::variance_power;
    double best_lower = rep.var_lower;
    if (rep.cartwright_field && rep.cartwright_field->lower > best_lower) {
        best_lower = rep.cartwright_field->lower;
        rep.tightest_lower = bound_family::cartwright_field;
    }
    if (rep.sqrt_var_lower > best_lower) {
        rep.tightest_lower = bound_family::sqrt_variance;
    }
    rep.tightest_upper = bound_family::variance_power;
    if (rep.cartwright_field && rep.cartwright_field->upper < rep.var_upper) {
        rep.tightest_upper = bound_family::cartwright_field;
    }
    return rep;
}

}  // namespace varineq
