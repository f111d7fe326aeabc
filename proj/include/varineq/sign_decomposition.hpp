#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "varineq/power_variance.hpp"
#include "varineq/stats.hpp"
#include "varineq/weighted_sample.hpp"

namespace varineq {

/// Positive and negative parts of a real-valued sample:
/// pos_i = max(x_i, 0), neg_i = -min(x_i, 0), both keeping the weights.
struct sign_parts {
    weighted_sample pos;
    weighted_sample neg;
};

inline sign_parts split_parts(const weighted_sample& x) {
    std::vector<double> pos(x.size());
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x.value(i);
        pos[i] = v > 0.0 ? v : 0.0;
        neg[i] = v < 0.0 ? -v : 0.0;
    }
    std::vector<double> w(x.weights().begin(), x.weights().end());
    return {weighted_sample(pos, w), weighted_sample(neg, std::move(w))};
}

/// Conditioning partitions. `three_way` separates {X>0}, {X=0}, {X<0};
/// the two-atom variants merge the zero set into one of the sides.
enum class sign_algebra {
    three_way,       // {X>0}, {X=0}, {X<0}
    zero_with_pos,   // {X>=0}, {X<0}
    zero_with_neg,   // {X>0}, {X<=0}
};

inline const char* sign_algebra_name(sign_algebra a) {
    switch (a) {
        case sign_algebra::three_way: return "b";
        case sign_algebra::zero_with_pos: return "b1";
        case sign_algebra::zero_with_neg: return "b2";
    }
    return "?";
}

inline std::optional<sign_algebra> parse_sign_algebra(const std::string& name) {
    for (sign_algebra a : {sign_algebra::three_way, sign_algebra::zero_with_pos,
                           sign_algebra::zero_with_neg}) {
        if (name == sign_algebra_name(a)) {
            return a;
        }
    }
    return std::nullopt;
}

/// Mass and conditional means of the strict-sign partition. Sign
/// classification is exact comparison with zero; no epsilon, since an
/// epsilon would silently move mass between atoms.
struct sign_atoms {
    double p_pos = 0.0;
    double p_zero = 0.0;
    double p_neg = 0.0;
    std::optional<double> mean_pos;  // E(X | X>0), defined iff p_pos > 0
    std::optional<double> mean_neg;  // E(-X | X<0), defined iff p_neg > 0

    sign_atoms() = default;

    explicit sign_atoms(const weighted_sample& x) {
        kbn_sum wp, wz, wn, sp, sn;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double v = x.value(i);
            const double w = x.weight(i);
            if (v > 0.0) {
                wp.add(w);
                sp.add(w * v);
            } else if (v < 0.0) {
                wn.add(w);
                sn.add(w * -v);
            } else {
                wz.add(w);
            }
        }
        p_pos = wp.value();
        p_zero = wz.value();
        p_neg = wn.value();
        if (p_pos > 0.0) {
            mean_pos = sp.value() / p_pos;
        }
        if (p_neg > 0.0) {
            mean_neg = sn.value() / p_neg;
        }
    }
};

namespace detail {

// Atom index of a value under an algebra: 0 positive side, 1 zero, 2 negative
// side. The merged algebras never emit 1.
inline int atom_of(double v, sign_algebra a) {
    if (v > 0.0) {
        return 0;
    }
    if (v < 0.0) {
        return 2;
    }
    switch (a) {
        case sign_algebra::three_way: return 1;
        case sign_algebra::zero_with_pos: return 0;
        case sign_algebra::zero_with_neg: return 2;
    }
    return 1;
}

struct conditional_stats {
    std::array<double, 3> mass{};        // P(atom)
    std::array<double, 3> cond_mean{};   // E(g | atom), 0 for empty atoms
    double var_cond = 0.0;               // Var(E(g | algebra))
    double mean_within_var = 0.0;        // E(Var(g | algebra))
};

// Conditional mean/variance bookkeeping of the function g (given pointwise)
// under the sign partition of x.
inline conditional_stats condition_on_signs(const weighted_sample& x,
                                            const std::vector<double>& g,
                                            sign_algebra algebra) {
    conditional_stats st;
    std::array<kbn_sum, 3> mass;
    std::array<kbn_sum, 3> gsum;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int k = atom_of(x.value(i), algebra);
        mass[k].add(x.weight(i));
        gsum[k].add(x.weight(i) * g[i]);
    }
    kbn_sum total_mean;
    for (int k = 0; k < 3; ++k) {
        st.mass[k] = mass[k].value();
        if (st.mass[k] > 0.0) {
            st.cond_mean[k] = gsum[k].value() / st.mass[k];
            total_mean.add(st.mass[k] * st.cond_mean[k]);
        }
    }
    const double eg = total_mean.value();
    kbn_sum between, within;
    std::array<kbn_sum, 3> wv;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int k = atom_of(x.value(i), algebra);
        const double d = g[i] - st.cond_mean[k];
        wv[k].add(x.weight(i) * d * d);
    }
    for (int k = 0; k < 3; ++k) {
        if (st.mass[k] > 0.0) {
            const double d = st.cond_mean[k] - eg;
            between.add(st.mass[k] * d * d);
            within.add(wv[k].value());
        }
    }
    st.var_cond = std::max(between.value(), 0.0);
    st.mean_within_var = std::max(within.value(), 0.0);
    return st;
}

}  // namespace detail

/// The five variances of the positive/negative-part chain
///   Var(X+) + Var(X-)  <=  Var(X)
///   <=  Var(X+) + Var(X-) + Var(E(X+|B)) + Var(E(X-|B))
///   <=  2 (Var(X+) + Var(X-)),
/// with equality flags decided at a relative tolerance scaled by max(1, Var X).
struct decomposition_report {
    double var_x = 0.0;
    double var_pos = 0.0;
    double var_neg = 0.0;
    double var_cond_pos = 0.0;
    double var_cond_neg = 0.0;
    sign_algebra algebra = sign_algebra::three_way;
    bool eq_first = false;
    bool eq_middle = false;
    bool eq_third = false;
    double slack_first = 0.0;   // Var(X) - Var(X+) - Var(X-)
    double slack_middle = 0.0;  // middle sum - Var(X)
    double slack_third = 0.0;   // E Var(X+|B) + E Var(X-|B)
    double mean_pos_part = 0.0; // E X+
    double mean_neg_part = 0.0; // E X-
};

inline decomposition_report decompose(const weighted_sample& x,
                                      sign_algebra algebra = sign_algebra::three_way,
                                      tolerance tol = {}) {
    decomposition_report rep;
    rep.algebra = algebra;
    rep.var_x = variance(x);
    const sign_parts parts = split_parts(x);
    rep.var_pos = variance(parts.pos);
    rep.var_neg = variance(parts.neg);
    rep.mean_pos_part = mean(parts.pos);
    rep.mean_neg_part = mean(parts.neg);

    const std::vector<double> gpos(parts.pos.values().begin(), parts.pos.values().end());
    const std::vector<double> gneg(parts.neg.values().begin(), parts.neg.values().end());
    const auto cpos = detail::condition_on_signs(x, gpos, algebra);
    const auto cneg = detail::condition_on_signs(x, gneg, algebra);
    rep.var_cond_pos = cpos.var_cond;
    rep.var_cond_neg = cneg.var_cond;

    const double part_sum = rep.var_pos + rep.var_neg;
    const double middle = part_sum + rep.var_cond_pos + rep.var_cond_neg;
    rep.slack_first = rep.var_x - part_sum;
    rep.slack_middle = middle - rep.var_x;
    rep.slack_third = cpos.mean_within_var + cneg.mean_within_var;

    const double scale = std::max(1.0, rep.var_x);
    rep.eq_first = std::min(rep.mean_pos_part, rep.mean_neg_part) <= tol.rel * scale;
    rep.eq_middle = rep.slack_middle <= tol.rel * scale;
    rep.eq_third = rep.slack_third <= tol.rel * scale;
    return rep;
}

/// Both sides of the law of total variance
///   Var(X) = Var(E(X|B)) + E(Var(X|B))
/// evaluated independently; they agree up to round-off.
struct variance_identity {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline variance_identity total_variance_identity(const weighted_sample& x,
                                                 sign_algebra algebra = sign_algebra::three_way) {
    const std::vector<double> id(x.values().begin(), x.values().end());
    const auto c = detail::condition_on_signs(x, id, algebra);
    return {variance(x), c.var_cond + c.mean_within_var};
}

/// Powered version of the chain endpoints, valid for 0 < r <= 2 <= s:
///   Var(X+^{r/2})^{2/r} + Var(X-^{r/2})^{2/r} <= Var(X)
///   <= 2 (Var(X+^{s/2})^{2/s} + Var(X-^{s/2})^{2/s}).
/// r = s = 2 reproduces the first and third chain inequalities exactly.
struct power_chain_bounds {
    double lower = 0.0;
    double var_x = 0.0;
    double upper = 0.0;
};

inline power_chain_bounds power_decomposition_bounds(const weighted_sample& x, double r,
                                                     double s) {
    if (!(r > 0.0 && r <= 2.0)) {
        throw exponent_range_error("power_decomposition_bounds: r must lie in (0, 2]");
    }
    if (!(s >= 2.0) || !std::isfinite(s)) {
        throw exponent_range_error("power_decomposition_bounds: s must lie in [2, inf)");
    }
    const sign_parts parts = split_parts(x);
    power_chain_bounds b;
    b.var_x = variance(x);
    b.lower = power_variance(parts.pos, r / 2.0) + power_variance(parts.neg, r / 2.0);
    b.upper = 2.0 * (power_variance(parts.pos, s / 2.0) + power_variance(parts.neg, s / 2.0));
    return b;
}

}  // namespace varineq
