// varineq: report / curve / decompose / stress front end for the variance
// inequality library. Exit codes: 0 ok, 2 bad input or flags, 3 monotonicity
// violation detected by `curve`, 4 stress violations.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varineq/varineq.hpp"

namespace {

using namespace varineq;

constexpr int exit_ok = 0;
constexpr int exit_bad_input = 2;
constexpr int exit_monotonicity_violation = 3;
constexpr int exit_stress_violations = 4;

weighted_sample load_sample(const std::string& input_path) {
    io::input_document doc;
    if (input_path.empty() || input_path == "-") {
        doc = io::parse_auto(std::cin);
    } else {
        std::ifstream in(input_path);
        if (!in) {
            throw io::parse_error("cannot open input file '" + input_path + "'");
        }
        doc = io::parse_auto(in);
    }
    return io::to_sample(doc);
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty() || output_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') {
            std::cout << '\n';
        }
    } else {
        std::ofstream out(output_path);
        if (!out) {
            throw io::parse_error("cannot open output file '" + output_path + "'");
        }
        out << text;
        if (!text.empty() && text.back() != '\n') {
            out << '\n';
        }
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) {
        try {
            std::size_t pos = 0;
            grid.push_back(std::stod(field, &pos));
            if (pos != field.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw io::parse_error("--grid: bad number '" + field + "'");
        }
    }
    if (grid.empty()) {
        throw io::parse_error("--grid: empty grid");
    }
    return grid;
}

int cmd_report(const std::string& input, const std::string& format, double r, double s,
               tolerance /*tol*/) {
    const weighted_sample x = load_sample(input);
    const amgm_gap_report rep = full_gap_report(x, r, s);
    if (format == "json") {
        std::cout << io::to_json(rep, x).dump(2) << '\n';
        return exit_ok;
    }
    std::cout << "sample: n=" << x.size() << "  alpha_min=" << format_double(rep.alpha_min)
              << "  x_min=" << format_double(rep.x_min)
              << "  x_max=" << format_double(rep.x_max) << '\n';
    std::cout << "gap (mean - geometric mean): " << format_double(rep.gap) << '\n';
    std::cout << "variance-power lower (r=" << format_double(rep.r)
              << "): " << format_double(rep.var_lower) << '\n';
    std::cout << "variance-power upper (s=" << format_double(rep.s)
              << "): " << format_double(rep.var_upper) << '\n';
    if (rep.cartwright_field.has_value()) {
        std::cout << "cartwright-field lower: " << format_double(rep.cartwright_field->lower)
                  << '\n';
        std::cout << "cartwright-field upper: " << format_double(rep.cartwright_field->upper)
                  << '\n';
    } else {
        std::cout << "cartwright-field bounds: n/a (requires X_min > 0)\n";
    }
    std::cout << "sqrt-variance lower: " << format_double(rep.sqrt_var_lower) << '\n';
    std::cout << "tightest lower: " << bound_family_name(rep.tightest_lower) << '\n';
    std::cout << "tightest upper: " << bound_family_name(rep.tightest_upper) << '\n';
    return exit_ok;
}

int cmd_curve(const std::string& input, const std::string& format,
              const std::vector<double>& grid, tolerance tol) {
    const weighted_sample x = load_sample(input);
    const power_variance_curve c = curve(x, grid);
    const monotonicity_verdict verdict = check_monotone(c, tol);
    if (format == "json") {
        std::cout << io::to_json(c, verdict).dump(2) << '\n';
    } else {
        std::cout << "        s                log V                    V\n";
        for (std::size_t i = 0; i < c.grid.size(); ++i) {
            const double lv = c.log_v[i];
            std::ostringstream line;
            line.precision(12);
            line << std::setw(9) << c.grid[i] << "  ";
            if (lv == neg_infinity) {
                line << std::setw(19) << "-inf" << "  " << std::setw(19) << 0.0;
            } else {
                line << std::setw(19) << lv << "  " << std::setw(19) << std::exp(lv);
            }
            std::cout << line.str() << '\n';
        }
        if (verdict.monotone) {
            std::cout << "verdict: monotone\n";
        } else {
            std::cout << "verdict: violation at grid index " << verdict.worst_index << " (s="
                      << format_double(c.grid[verdict.worst_index])
                      << ", drop=" << format_double(verdict.worst_gap) << ")\n";
        }
    }
    return verdict.monotone ? exit_ok : exit_monotonicity_violation;
}

int cmd_decompose(const std::string& input, const std::string& format,
                  const std::string& algebra_name, tolerance tol) {
    const weighted_sample x = load_sample(input);
    std::optional<sign_algebra> algebra = parse_sign_algebra(algebra_name);
    if (!algebra.has_value()) {
        throw io::parse_error("--algebra: expected b, b1 or b2, got '" + algebra_name + "'");
    }
    const decomposition_report rep = decompose(x, *algebra, tol);
    if (format == "json") {
        std::cout << io::to_json(rep).dump(2) << '\n';
        return exit_ok;
    }
    const double part_sum = rep.var_pos + rep.var_neg;
    const double middle = part_sum + rep.var_cond_pos + rep.var_cond_neg;
    std::cout << "algebra: " << sign_algebra_name(rep.algebra) << '\n';
    std::cout << "var(X):        " << format_double(rep.var_x) << '\n';
    std::cout << "var(X+):       " << format_double(rep.var_pos) << '\n';
    std::cout << "var(X-):       " << format_double(rep.var_neg) << '\n';
    std::cout << "var(E(X+|B)):  " << format_double(rep.var_cond_pos) << '\n';
    std::cout << "var(E(X-|B)):  " << format_double(rep.var_cond_neg) << '\n';
    std::cout << "chain: " << format_double(part_sum) << " <= " << format_double(rep.var_x)
              << " <= " << format_double(middle) << " <= " << format_double(2.0 * part_sum)
              << '\n';
    std::cout << "eq_first:  " << (rep.eq_first ? "yes (X >= 0 or X <= 0: one sign part vanishes)"
                                                : "no")
              << '\n';
    std::cout << "eq_middle: "
              << (rep.eq_middle
                      ? "yes (single-signed, or both sign atoms carry equal conditional means "
                        "with no mass at 0)"
                      : "no")
              << '\n';
    std::cout << "eq_third:  " << (rep.eq_third ? "yes (X is ℬ-measurable: X = E(X|ℬ))"
                                                : "no")
              << '\n';
    return exit_ok;
}

int cmd_stress(stress::stress_config cfg, unsigned threads, const std::string& format,
               const std::string& output_path) {
    const stress::stress_result result = stress::run(cfg, threads);
    const nlohmann::json doc = io::to_json(result, cfg);
    if (!output_path.empty()) {
        emit(doc.dump(2), output_path);
    }
    if (format == "json") {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << "seed: " << cfg.seed << "  trials: " << cfg.trials
                  << "  target: " << stress::stress_target_name(cfg.target)
                  << "  values: " << stress::value_model_name(cfg.values)
                  << "  weights: " << stress::weight_model_name(cfg.weights) << '\n';
        std::cout << "violations: " << result.summary.violations << '\n';
        std::cout << "min slack per inequality:\n";
        for (const auto& [id, record] : result.summary.min_slack) {
            std::cout << "  " << id << ": " << format_double(record.slack) << " (trial "
                      << record.trial << ")\n";
        }
        std::size_t near = 0;
        for (const auto& f : result.findings) {
            if (f.kind == stress::finding_kind::near_equality) {
                ++near;
            }
        }
        std::cout << "findings: " << near << " near-equality, " << result.summary.violations
                  << " violation(s)\n";
    }
    return result.summary.violations == 0 ? exit_ok : exit_stress_violations;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variance inequality toolkit: AM-GM gap bounds, power-variance monotonicity, "
                 "sign decomposition, and a randomized stress harness."};
    app.require_subcommand(1);

    std::string input = "-";
    std::string format = "text";
    std::string output_path;
    double tol_rel = tolerance{}.rel;

    auto add_common = [&](CLI::App* sub, bool with_input = true) {
        if (with_input) {
            sub->add_option("--input", input, "input file (CSV or JSON), '-' for stdin");
        }
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--tol", tol_rel, "relative tolerance for verdicts");
    };

    // report
    auto* report = app.add_subcommand("report", "AM-GM gap with all variance bounds");
    double r = 1.0;
    double s = 1.0;
    add_common(report);
    report->add_option("--r", r, "lower-bound exponent in (0,1]");
    report->add_option("--s", s, "upper-bound exponent in [1,inf)");

    // curve
    auto* curve_cmd = app.add_subcommand("curve", "power-variance curve and monotonicity verdict");
    std::string grid_text;
    add_common(curve_cmd);
    curve_cmd->add_option("--grid", grid_text, "comma-separated exponent grid (default: 34 "
                                               "log-spaced points in [0.05,1])");

    // decompose
    auto* decompose_cmd =
        app.add_subcommand("decompose", "positive/negative part variance decomposition");
    std::string algebra_name = "b";
    add_common(decompose_cmd);
    decompose_cmd->add_option("--algebra", algebra_name, "conditioning algebra: b, b1 or b2");

    // stress
    auto* stress_cmd = app.add_subcommand("stress", "randomized inequality stress campaign");
    stress::stress_config cfg;
    std::string n_range = "2,16";
    std::string model_name = "uniform01";
    std::string weights_name = "uniform";
    std::string target_name = "all";
    unsigned threads = 1;
    add_common(stress_cmd, /*with_input=*/false);
    stress_cmd->add_option("--seed", cfg.seed, "RNG seed");
    stress_cmd->add_option("--trials", cfg.trials, "number of trials");
    stress_cmd->add_option("--n", n_range, "sample size MIN or MIN,MAX");
    stress_cmd->add_option("--model", model_name, "value model")
        ->check(CLI::IsMember({"uniform01", "heavytail", "dyadic", "signed"}));
    stress_cmd->add_option("--kappa", cfg.heavytail_kappa, "heavytail exponent");
    stress_cmd->add_option("--weights", weights_name, "weight model")
        ->check(CLI::IsMember({"uniform", "simplex"}));
    stress_cmd->add_option("--target", target_name, "inequality family")
        ->check(CLI::IsMember({"all", "monotonicity", "thm4", "cf", "a2", "interpolation",
                               "chain", "corollary"}));
    stress_cmd->add_option("--threads", threads, "worker threads (output is thread-count "
                                                 "independent)");
    stress_cmd->add_option("--output", output_path, "write findings JSON to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_bad_input;
    }

    try {
        tolerance tol;
        tol.rel = tol_rel;
        if (report->parsed()) {
            return cmd_report(input, format, r, s, tol);
        }
        if (curve_cmd->parsed()) {
            const std::vector<double> grid =
                grid_text.empty() ? default_grid() : parse_grid(grid_text);
            return cmd_curve(input, format, grid, tol);
        }
        if (decompose_cmd->parsed()) {
            return cmd_decompose(input, format, algebra_name, tol);
        }
        if (stress_cmd->parsed()) {
            cfg.tol = tol;
            const std::size_t comma = n_range.find(',');
            try {
                if (comma == std::string::npos) {
                    cfg.n_min = cfg.n_max = std::stoul(n_range);
                } else {
                    cfg.n_min = std::stoul(n_range.substr(0, comma));
                    cfg.n_max = std::stoul(n_range.substr(comma + 1));
                }
            } catch (const std::exception&) {
                throw io::parse_error("--n: expected MIN or MIN,MAX, got '" + n_range + "'");
            }
            if (model_name == "uniform01") {
                cfg.values = stress::value_model::uniform01;
            } else if (model_name == "heavytail") {
                cfg.values = stress::value_model::heavytail;
            } else if (model_name == "dyadic") {
                cfg.values = stress::value_model::dyadic;
            } else {
                cfg.values = stress::value_model::signed_mixture;
            }
            cfg.weights = weights_name == "simplex" ? stress::weight_model::random_simplex
                                                    : stress::weight_model::uniform;
            cfg.target = *stress::parse_stress_target(target_name);
            cfg.validate();
            return cmd_stress(cfg, threads, format, output_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
    return exit_bad_input;
}
