#pragma once

#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "varineq/amgm.hpp"
#include "varineq/power_variance.hpp"
#include "varineq/sign_decomposition.hpp"
#include "varineq/stress.hpp"
#include "varineq/weighted_sample.hpp"

namespace varineq::io {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct input_document {
    std::vector<double> values;
    std::optional<std::vector<double>> weights;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return s.substr(b, e - b);
}

inline double parse_number(const std::string& field, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw parse_error("csv: line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
}

}  // namespace detail

/// CSV with a mandatory header line, either `value` or `value,weight`.
inline input_document parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool with_weights = false;
    if (!std::getline(in, line)) {
        throw parse_error("csv: empty input");
    }
    ++line_no;
    const std::string header = detail::trim(line);
    if (header == "value") {
        with_weights = false;
    } else if (header == "value,weight") {
        with_weights = true;
    } else {
        throw parse_error("csv: header must be 'value' or 'value,weight', got '" + header + "'");
    }

    input_document doc;
    if (with_weights) {
        doc.weights.emplace();
    }
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = detail::trim(line);
        if (row.empty()) {
            continue;
        }
        const std::size_t comma = row.find(',');
        if (with_weights) {
            if (comma == std::string::npos) {
                throw parse_error("csv: line " + std::to_string(line_no) +
                                  ": expected 'value,weight'");
            }
            doc.values.push_back(detail::parse_number(detail::trim(row.substr(0, comma)), line_no));
            doc.weights->push_back(
                detail::parse_number(detail::trim(row.substr(comma + 1)), line_no));
        } else {
            if (comma != std::string::npos) {
                throw parse_error("csv: line " + std::to_string(line_no) +
                                  ": unexpected second column");
            }
            doc.values.push_back(detail::parse_number(row, line_no));
        }
    }
    return doc;
}

/// JSON object {"values": [...]} with an optional parallel "weights" array.
inline input_document parse_json(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("values") || !j["values"].is_array()) {
        throw parse_error("json: expected an object with a 'values' array");
    }
    input_document doc;
    for (const auto& v : j["values"]) {
        if (!v.is_number()) {
            throw parse_error("json: 'values' must contain numbers only");
        }
        doc.values.push_back(v.get<double>());
    }
    if (j.contains("weights") && !j["weights"].is_null()) {
        if (!j["weights"].is_array()) {
            throw parse_error("json: 'weights' must be an array");
        }
        doc.weights.emplace();
        for (const auto& w : j["weights"]) {
            if (!w.is_number()) {
                throw parse_error("json: 'weights' must contain numbers only");
            }
            doc.weights->push_back(w.get<double>());
        }
    }
    return doc;
}

/// Sniffs the format: a document whose first non-space byte is '{' is JSON,
/// anything else is treated as CSV.
inline input_document parse_auto(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            continue;
        }
        std::istringstream replay(text);
        if (c == '{') {
            return parse_json(replay);
        }
        return parse_csv(replay);
    }
    throw parse_error("input: empty document");
}

inline weighted_sample to_sample(const input_document& doc) {
    if (doc.weights.has_value()) {
        return weighted_sample(doc.values, *doc.weights);
    }
    return weighted_sample::uniform(doc.values);
}

// ---------------------------------------------------------------------------
// JSON rendering. Key names below are part of the tool's output contract.
// ---------------------------------------------------------------------------

inline nlohmann::json sample_json(const weighted_sample& x) {
    return {
        {"n", x.size()},
        {"alpha_min", x.min_weight()},
        {"x_min", x.min_value()},
        {"x_max", x.max_value()},
    };
}

inline nlohmann::json to_json(const amgm_gap_report& rep, const weighted_sample& x) {
    nlohmann::json cf = nullptr;
    if (rep.cartwright_field.has_value()) {
        cf = {{"lower", rep.cartwright_field->lower}, {"upper", rep.cartwright_field->upper}};
    }
    return {
        {"gap", rep.gap},
        {"bounds",
         {
             {"thm4",
              {{"lower", rep.var_lower}, {"upper", rep.var_upper}, {"r", rep.r}, {"s", rep.s}}},
             {"cartwright_field", cf},
             {"a2_lower", rep.sqrt_var_lower},
         }},
        {"tightest",
         {{"lower", bound_family_name(rep.tightest_lower)},
          {"upper", bound_family_name(rep.tightest_upper)}}},
        {"sample", sample_json(x)},
    };
}

inline nlohmann::json to_json(const power_variance_curve& c, const monotonicity_verdict& verdict) {
    nlohmann::json log_v = nlohmann::json::array();
    for (double lv : c.log_v) {
        if (lv == neg_infinity) {
            log_v.push_back(nullptr);
        } else {
            log_v.push_back(lv);
        }
    }
    return {{"curve",
             {
                 {"grid", c.grid},
                 {"log_v", log_v},
                 {"monotone", verdict.monotone},
             }}};
}

inline nlohmann::json to_json(const decomposition_report& rep) {
    return {{"decomposition",
             {
                 {"var_x", rep.var_x},
                 {"var_pos", rep.var_pos},
                 {"var_neg", rep.var_neg},
                 {"var_cond_pos", rep.var_cond_pos},
                 {"var_cond_neg", rep.var_cond_neg},
                 {"eq_first", rep.eq_first},
                 {"eq_middle", rep.eq_middle},
                 {"eq_third", rep.eq_third},
                 {"algebra", sign_algebra_name(rep.algebra)},
             }}};
}

inline nlohmann::json to_json(const stress::stress_finding& f) {
    return {
        {"kind", f.kind == stress::finding_kind::violation ? "violation" : "near_equality"},
        {"inequality_id", f.inequality_id},
        {"slack", f.slack},
        {"trial", f.trial_index},
        {"parameters", f.parameters},
        {"sample",
         {{"values", f.sample.values()}, {"weights", f.sample.weights()}}},
    };
}

inline nlohmann::json to_json(const stress::stress_result& result,
                              const stress::stress_config& cfg) {
    nlohmann::json min_slack = nlohmann::json::object();
    for (const auto& [id, record] : result.summary.min_slack) {
        nlohmann::json entry = {
            {"slack", record.slack},
            {"trial", record.trial},
            {"parameters", record.parameters},
        };
        if (record.sample.has_value()) {
            entry["sample"] = {{"values", record.sample->values()},
                               {"weights", record.sample->weights()}};
        }
        min_slack[id] = std::move(entry);
    }
    nlohmann::json findings = nlohmann::json::array();
    for (const auto& f : result.findings) {
        findings.push_back(to_json(f));
    }
    return {
        {"seed", cfg.seed},
        {"trials", cfg.trials},
        {"target", stress::stress_target_name(cfg.target)},
        {"values", stress::value_model_name(cfg.values)},
        {"weights", stress::weight_model_name(cfg.weights)},
        {"summary",
         {{"trials", result.summary.trials},
          {"violations", result.summary.violations},
          {"min_slack", min_slack}}},
        {"findings", findings},
    };
}

}  // namespace varineq::io
