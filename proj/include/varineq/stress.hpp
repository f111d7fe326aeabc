#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "varineq/amgm.hpp"
#include "varineq/power_variance.hpp"
#include "varineq/sign_decomposition.hpp"
#include "varineq/stats.hpp"
#include "varineq/weighted_sample.hpp"

namespace varineq::stress {

/// SplitMix64 (Steele/Lea/Flood). The full recurrence, so findings reproduce
/// bit-for-bit in any language:
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
/// Trial streams are counter-based: the stream for trial i starts at
/// scramble(seed + scramble(i + 1)) where scramble is the same finalizer.
class splitmix64 {
  public:
    explicit splitmix64(std::uint64_t state) : state_(state) {}

    static splitmix64 for_trial(std::uint64_t seed, std::uint64_t trial_index) {
        return splitmix64(scramble(seed + scramble(trial_index + 1)));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return scramble(state_);
    }

    // Uniform in the open interval (0, 1).
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [lo, hi]. Modulo bias is irrelevant at our range
    // sizes and keeps the recurrence trivially portable.
    std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) {
        return lo + next() % (hi - lo + 1);
    }

  private:
    static std::uint64_t scramble(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

enum class value_model {
    uniform01,       // values in (0,1)
    heavytail,       // U^{-kappa}, values in (1, inf)
    dyadic,          // {0} and exact powers of two 2^-8 .. 2^8
    signed_mixture,  // zero with probability 1/8, else +-uniform(0,1)
};

enum class weight_model {
    uniform,        // alpha_i = 1/n
    random_simplex, // Dirichlet(1,..,1) via normalized exponentials
};

inline const char* value_model_name(value_model m) {
    switch (m) {
        case value_model::uniform01: return "uniform01";
        case value_model::heavytail: return "heavytail";
        case value_model::dyadic: return "dyadic";
        case value_model::signed_mixture: return "signed";
    }
    return "?";
}

inline const char* weight_model_name(weight_model m) {
    switch (m) {
        case weight_model::uniform: return "uniform";
        case weight_model::random_simplex: return "simplex";
    }
    return "?";
}

/// Inequality families the harness can aim at.
enum class stress_target { all, monotonicity, thm4, cf, a2, interpolation, chain, corollary };

inline const char* stress_target_name(stress_target t) {
    switch (t) {
        case stress_target::all: return "all";
        case stress_target::monotonicity: return "monotonicity";
        case stress_target::thm4: return "thm4";
        case stress_target::cf: return "cf";
        case stress_target::a2: return "a2";
        case stress_target::interpolation: return "interpolation";
        case stress_target::chain: return "chain";
        case stress_target::corollary: return "corollary";
    }
    return "?";
}

inline std::optional<stress_target> parse_stress_target(const std::string& name) {
    for (stress_target t :
         {stress_target::all, stress_target::monotonicity, stress_target::thm4,
          stress_target::cf, stress_target::a2, stress_target::interpolation,
          stress_target::chain, stress_target::corollary}) {
        if (name == stress_target_name(t)) {
            return t;
        }
    }
    return std::nullopt;
}

struct stress_config {
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::size_t n_min = 2;
    std::size_t n_max = 16;
    value_model values = value_model::uniform01;
    double heavytail_kappa = 1.0;
    weight_model weights = weight_model::uniform;
    stress_target target = stress_target::all;
    std::vector<double> r_grid = {0.25, 0.5, 0.75, 1.0};       // lower-bound exponents
    std::vector<double> s_grid = {1.0, 2.0, 4.0, 8.0};         // upper-bound exponents
    std::vector<double> curve_grid = default_grid();
    std::vector<std::pair<double, double>> chain_exponents = {{2.0, 2.0}, {1.0, 4.0}, {0.5, 2.0}};
    tolerance tol{};
    double near_tol = 1e-6;  // near-equality threshold, times the inequality's scale

    void validate() const {
        if (trials < 1) {
            throw invalid_sample_error("stress_config: trials must be >= 1");
        }
        if (n_min < 2 || n_max < n_min) {
            throw invalid_sample_error("stress_config: need 2 <= n_min <= n_max");
        }
        if (!(heavytail_kappa > 0.0)) {
            throw invalid_sample_error("stress_config: heavytail kappa must be > 0");
        }
    }
};

/// Deterministic sample for (seed, trial_index). Draw order: n, then the n
/// values, then the weights.
inline weighted_sample generate(const stress_config& cfg, std::size_t trial_index,
                                splitmix64* continue_rng = nullptr) {
    auto rng = splitmix64::for_trial(cfg.seed, trial_index);
    const std::size_t n = static_cast<std::size_t>(rng.next_in(cfg.n_min, cfg.n_max));
    std::vector<double> values(n);
    for (double& v : values) {
        switch (cfg.values) {
            case value_model::uniform01:
                v = rng.next_unit();
                break;
            case value_model::heavytail:
                v = std::pow(rng.next_unit(), -cfg.heavytail_kappa);
                break;
            case value_model::dyadic: {
                const std::uint64_t j = rng.next() % 18;  // 0, 2^-8 .. 2^8
                v = j == 0 ? 0.0 : std::ldexp(1.0, static_cast<int>(j) - 9);
                break;
            }
            case value_model::signed_mixture: {
                if (rng.next() % 8 == 0) {
                    v = 0.0;
                } else {
                    const double m = rng.next_unit();
                    v = (rng.next() & 1) ? -m : m;
                }
                break;
            }
        }
    }
    std::vector<double> weights(n, 1.0);
    if (cfg.weights == weight_model::random_simplex) {
        for (double& w : weights) {
            w = -std::log(rng.next_unit());
        }
    }
    if (continue_rng != nullptr) {
        *continue_rng = rng;
    }
    return weighted_sample(std::move(values), std::move(weights));
}

enum class finding_kind { violation, near_equality };

struct stress_finding {
    finding_kind kind = finding_kind::near_equality;
    std::string inequality_id;
    weighted_sample sample;
    std::vector<double> parameters;  // exponents / algebra code, see README
    double slack = 0.0;
    std::size_t trial_index = 0;
};

struct slack_record {
    double slack = std::numeric_limits<double>::infinity();
    std::size_t trial = 0;
    std::vector<double> parameters;
    std::optional<weighted_sample> sample;
};

struct stress_summary {
    std::size_t trials = 0;
    std::size_t violations = 0;
    std::map<std::string, slack_record> min_slack;
};

struct stress_result {
    std::vector<stress_finding> findings;
    stress_summary summary;
};

namespace detail {

struct check_outcome {
    const char* id;
    double slack;
    double scale;
    std::vector<double> parameters;
    bool violation;
    bool near_eligible = true;  // identities report violations only
};

inline bool wants(stress_target cfg_target, stress_target t) {
    return cfg_target == stress_target::all || cfg_target == t;
}

inline weighted_sample magnitudes(const weighted_sample& x) {
    if (x.nonnegative()) {
        return x;
    }
    std::vector<double> v(x.values().begin(), x.values().end());
    for (double& a : v) {
        a = std::abs(a);
    }
    return weighted_sample(std::move(v), std::vector<double>(x.weights().begin(), x.weights().end()));
}

// Minimum adjacent rise of log V along the curve; 0 for pairs that are both
// at the -inf sentinel, so constant samples count as exactly tight.
inline double curve_min_rise(const power_variance_curve& c) {
    double min_rise = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < c.log_v.size(); ++j) {
        const double a = c.log_v[j];
        const double b = c.log_v[j + 1];
        double rise;
        if (a == neg_infinity) {
            rise = b == neg_infinity ? 0.0 : std::numeric_limits<double>::infinity();
        } else if (b == neg_infinity) {
            rise = -std::numeric_limits<double>::infinity();
        } else {
            rise = b - a;
        }
        min_rise = std::min(min_rise, rise);
    }
    return min_rise;
}

inline void evaluate_trial(const stress_config& cfg, std::size_t trial,
                           std::vector<check_outcome>& out) {
    splitmix64 rng = splitmix64::for_trial(cfg.seed, trial);
    const weighted_sample sample = generate(cfg, trial, &rng);
    const weighted_sample nonneg = magnitudes(sample);
    const double rel = cfg.tol.rel;

    auto push = [&](const char* id, double slack, double scale, std::vector<double> params,
                    bool near_eligible = true) {
        out.push_back({id, slack, scale, std::move(params), slack < -rel * scale, near_eligible});
    };

    if (wants(cfg.target, stress_target::monotonicity)) {
        const power_variance_curve c = curve(nonneg, cfg.curve_grid);
        const auto verdict = check_monotone(c, cfg.tol);
        double mag = 1.0;
        for (double lv : c.log_v) {
            if (lv != neg_infinity) {
                mag = std::max(mag, std::abs(lv));
            }
        }
        out.push_back({"curve_monotone", curve_min_rise(c), mag, {}, !verdict.monotone, true});
    }

    const bool needs_gap = wants(cfg.target, stress_target::thm4) ||
                           wants(cfg.target, stress_target::cf) ||
                           wants(cfg.target, stress_target::a2);
    if (needs_gap && nonneg.size() >= 2) {
        const double gap = amgm_gap(nonneg);
        if (wants(cfg.target, stress_target::thm4)) {
            const weighted_sample root = power_transform(nonneg, 0.5);
            const double amin = nonneg.min_weight();
            for (double r : cfg.r_grid) {
                if (r <= 0.0 || r > 1.0) {
                    continue;
                }
                const double lower = power_variance(root, r) / (1.0 - amin);
                push("thm4_lower", gap - lower, std::max({1.0, gap, lower}), {r});
            }
            for (double s : cfg.s_grid) {
                if (s < 1.0) {
                    continue;
                }
                const double upper = power_variance(root, s) / amin;
                push("thm4_upper", upper - gap, std::max({1.0, gap, upper}), {s});
            }
        }
        if (wants(cfg.target, stress_target::cf) && nonneg.min_value() > 0.0) {
            const gap_bounds cf = cartwright_field_bounds(nonneg);
            push("cf_lower", gap - cf.lower, std::max({1.0, gap, cf.lower}), {});
            push("cf_upper", cf.upper - gap, std::max({1.0, gap, cf.upper}), {});
        }
        if (wants(cfg.target, stress_target::a2)) {
            const double lb = sqrt_variance_lower_bound(nonneg);
            push("a2_lower", gap - lb, std::max({1.0, gap, lb}), {});
        }
    }

    if (wants(cfg.target, stress_target::interpolation) && nonneg.max_value() > 0.0) {
        // Norm interpolation is scale-invariant; evaluate on X / X_max so the
        // slack floor is meaningful for huge values.
        std::vector<double> scaled(nonneg.values().begin(), nonneg.values().end());
        const double top = nonneg.max_value();
        for (double& v : scaled) {
            v /= top;
        }
        const weighted_sample unit(std::move(scaled),
                                   std::vector<double>(nonneg.weights().begin(), nonneg.weights().end()));
        std::array<double, 3> e{};
        do {
            for (double& exponent : e) {
                exponent = 0.05 * std::pow(16.0 / 0.05, rng.next_unit());
            }
            std::sort(e.begin(), e.end());
        } while (!(e[0] < e[1] && e[1] < e[2]));
        const auto w = interpolated_norm_bound(unit, e[0], e[1], e[2]);
        push("interp_norm", w.rhs - w.lhs, std::max(1.0, w.rhs), {e[0], e[1], e[2]});

        // Moment inequalities for X normalized to ||X||_2 = 1 and s in (0,1).
        const double l2 = lp_norm(nonneg, 2.0);
        std::vector<double> normalized(nonneg.values().begin(), nonneg.values().end());
        for (double& v : normalized) {
            v /= l2;
        }
        const weighted_sample unit2(std::move(normalized),
                                    std::vector<double>(nonneg.weights().begin(), nonneg.weights().end()));
        const double s = rng.next_unit();
        kbn_sum ms, m2s, m1;
        for (std::size_t i = 0; i < unit2.size(); ++i) {
            const double ys = std::pow(unit2.value(i), s);
            ms.add(unit2.weight(i) * ys);
            m2s.add(unit2.weight(i) * ys * ys);
            m1.add(unit2.weight(i) * unit2.value(i));
        }
        push("interp_moment_2s", std::pow(ms.value(), (2.0 - 2.0 * s) / (2.0 - s)) - m2s.value(),
             1.0, {s});
        push("interp_moment_1", std::pow(ms.value(), 1.0 / (2.0 - s)) - m1.value(), 1.0, {s});
    }

    if (wants(cfg.target, stress_target::chain)) {
        for (sign_algebra algebra : {sign_algebra::three_way, sign_algebra::zero_with_pos,
                                     sign_algebra::zero_with_neg}) {
            const auto code = static_cast<double>(algebra);
            const decomposition_report rep = decompose(sample, algebra, cfg.tol);
            const double scale = std::max(1.0, rep.var_x);
            push("chain_first", rep.slack_first, scale, {code});
            push("chain_middle", rep.slack_middle, scale, {code});
            push("chain_third", rep.slack_third, scale, {code});
            const auto identity = total_variance_identity(sample, algebra);
            push("total_variance", -std::abs(identity.lhs - identity.rhs), scale, {code},
                 /*near_eligible=*/false);
        }
    }

    if (wants(cfg.target, stress_target::corollary)) {
        for (const auto& [r, s] : cfg.chain_exponents) {
            const power_chain_bounds b = power_decomposition_bounds(sample, r, s);
            const double scale = std::max(1.0, b.var_x);
            push("corollary_lower", b.var_x - b.lower, std::max(scale, b.lower), {r, s});
            push("corollary_upper", b.upper - b.var_x, std::max(scale, b.upper), {r, s});
        }
    }
}

}  // namespace detail

/// Evaluates every targeted inequality on `trials` generated samples.
/// Findings come back in trial order; the summary tracks, per inequality,
/// the minimum slack seen together with the witnessing sample. Output is
/// identical for any thread count.
inline stress_result run(const stress_config& cfg, unsigned threads = 1) {
    cfg.validate();
    constexpr std::size_t near_cap = 64;  // near-equality findings kept per inequality

    struct chunk_result {
        std::vector<stress_finding> findings;
        std::map<std::string, slack_record> min_slack;
        std::size_t violations = 0;
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials)));
    std::vector<chunk_result> chunks(workers);

    auto work = [&](unsigned worker) {
        chunk_result& local = chunks[worker];
        std::map<std::string, std::size_t> near_counts;
        std::vector<detail::check_outcome> outcomes;
        const std::size_t begin = cfg.trials * worker / workers;
        const std::size_t end = cfg.trials * (worker + 1) / workers;
        for (std::size_t trial = begin; trial < end; ++trial) {
            outcomes.clear();
            weighted_sample sample = generate(cfg, trial);
            detail::evaluate_trial(cfg, trial, outcomes);
            for (const auto& oc : outcomes) {
                auto& record = local.min_slack[oc.id];
                if (oc.slack < record.slack) {
                    record.slack = oc.slack;
                    record.trial = trial;
                    record.parameters = oc.parameters;
                    record.sample = sample;
                }
                if (oc.violation) {
                    ++local.violations;
                    local.findings.push_back({finding_kind::violation, oc.id, sample,
                                              oc.parameters, oc.slack, trial});
                } else if (oc.near_eligible && oc.slack >= 0.0 &&
                           oc.slack <= cfg.near_tol * oc.scale &&
                           near_counts[oc.id] < near_cap) {
                    ++near_counts[oc.id];
                    local.findings.push_back({finding_kind::near_equality, oc.id, sample,
                                              oc.parameters, oc.slack, trial});
                }
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    stress_result result;
    result.summary.trials = cfg.trials;
    std::map<std::string, std::size_t> near_counts;
    for (const chunk_result& chunk : chunks) {
        result.summary.violations += chunk.violations;
        for (const stress_finding& f : chunk.findings) {
            if (f.kind == finding_kind::near_equality) {
                if (near_counts[f.inequality_id] >= near_cap) {
                    continue;
                }
                ++near_counts[f.inequality_id];
            }
            result.findings.push_back(f);
        }
        for (const auto& [id, record] : chunk.min_slack) {
            auto& global = result.summary.min_slack[id];
            if (record.slack < global.slack ||
                (record.slack == global.slack && record.trial < global.trial &&
                 global.sample.has_value())) {
                global = record;
            }
        }
    }
    return result;
}

/// Coordinate-wise multiplicative hill climb toward the equality set of one
/// inequality: perturb a single value or weight by 1+delta, keep the move if
/// the slack drops, stop when no move improves. Deterministic sweep order.
inline stress_finding tighten(const stress_config& cfg, const std::string& inequality_id,
                              const weighted_sample& start) {
    static constexpr double deltas[] = {0.1, -0.1, 0.01, -0.01, 0.001, -0.001};
    constexpr std::size_t max_sweeps = 500;

    auto slack_of = [&](const weighted_sample& x) -> double {
        if (inequality_id == "curve_monotone") {
            return detail::curve_min_rise(curve(detail::magnitudes(x), cfg.curve_grid));
        }
        if (inequality_id == "thm4_lower" || inequality_id == "thm4_upper") {
            const weighted_sample m = detail::magnitudes(x);
            const double gap = amgm_gap(m);
            const gap_bounds b = gap_variance_bounds(m, 1.0, 1.0);
            return inequality_id == "thm4_lower" ? gap - b.lower : b.upper - gap;
        }
        if (inequality_id == "cf_lower" || inequality_id == "cf_upper") {
            const double gap = amgm_gap(x);
            const gap_bounds b = cartwright_field_bounds(x);
            return inequality_id == "cf_lower" ? gap - b.lower : b.upper - gap;
        }
        if (inequality_id == "a2_lower") {
            const weighted_sample m = detail::magnitudes(x);
            return amgm_gap(m) - sqrt_variance_lower_bound(m);
        }
        if (inequality_id == "interp_norm") {
            const auto w = interpolated_norm_bound(detail::magnitudes(x), 1.0, 2.0, 4.0);
            return w.rhs - w.lhs;
        }
        if (inequality_id == "chain_first" || inequality_id == "chain_middle" ||
            inequality_id == "chain_third") {
            const decomposition_report rep = decompose(x, sign_algebra::three_way, cfg.tol);
            if (inequality_id == "chain_first") {
                return rep.slack_first;
            }
            return inequality_id == "chain_middle" ? rep.slack_middle : rep.slack_third;
        }
        if (inequality_id == "corollary_lower" || inequality_id == "corollary_upper") {
            const power_chain_bounds b = power_decomposition_bounds(x, 2.0, 2.0);
            return inequality_id == "corollary_lower" ? b.var_x - b.lower : b.upper - b.var_x;
        }
        throw invalid_start_error("tighten: unknown inequality id '" + inequality_id + "'");
    };

    double best;
    try {
        best = slack_of(start);
    } catch (const std::exception& e) {
        throw invalid_start_error(std::string("tighten: start sample rejected: ") + e.what());
    }

    weighted_sample current = start;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        weighted_sample best_move = current;
        const std::size_t n = current.size();
        for (std::size_t i = 0; i < 2 * n; ++i) {
            for (double delta : deltas) {
                std::vector<double> values(current.values().begin(), current.values().end());
                std::vector<double> weights(current.weights().begin(), current.weights().end());
                if (i < n) {
                    if (values[i] == 0.0) {
                        continue;
                    }
                    values[i] *= 1.0 + delta;
                } else {
                    weights[i - n] *= 1.0 + delta;
                }
                try {
                    weighted_sample candidate(std::move(values), std::move(weights));
                    const double candidate_slack = slack_of(candidate);
                    if (candidate_slack < best) {
                        best = candidate_slack;
                        best_move = std::move(candidate);
                        improved = true;
                    }
                } catch (const std::exception&) {
                    // move left the inequality's domain
                }
            }
        }
        if (!improved) {
            break;
        }
        current = best_move;
    }
    return {finding_kind::near_equality, inequality_id, current, {}, best, 0};
}

}  // namespace varineq::stress
