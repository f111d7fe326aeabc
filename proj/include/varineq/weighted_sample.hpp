#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varineq/errors.hpp"
#include "varineq/sum.hpp"

namespace varineq {

// Relative/absolute tolerance pair used by all inequality verdicts.
struct tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
};

/// A finite real-valued random variable: values x_1..x_n carried by strictly
/// positive probability weights. Weights are normalized to sum to one at
/// construction; the object is immutable afterwards.
class weighted_sample {
  public:
    weighted_sample(std::vector<double> values, std::vector<double> weights)
        : values_(std::move(values)), weights_(std::move(weights)) {
        if (values_.empty()) {
            throw invalid_sample_error("weighted_sample: need at least one point");
        }
        if (values_.size() != weights_.size()) {
            throw invalid_sample_error("weighted_sample: values/weights length mismatch");
        }
        for (double x : values_) {
            if (!std::isfinite(x)) {
                throw invalid_sample_error("weighted_sample: non-finite value");
            }
        }
        kbn_sum total;
        for (double w : weights_) {
            if (!std::isfinite(w) || w <= 0.0) {
                throw invalid_sample_error("weighted_sample: weights must be finite and > 0");
            }
            total.add(w);
        }
        const double sum = total.value();
        if (!std::isfinite(sum) || sum <= 0.0) {
            throw invalid_sample_error("weighted_sample: weight sum must be finite and > 0");
        }
        for (double& w : weights_) {
            w /= sum;
        }
    }

    // Equal weights 1/n.
    static weighted_sample uniform(std::vector<double> values) {
        std::vector<double> w(values.size(), 1.0);
        return weighted_sample(std::move(values), std::move(w));
    }

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<const double> weights() const { return weights_; }
    double value(std::size_t i) const { return values_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
    double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
    double min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

    bool nonnegative() const {
        return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
    }

    bool constant() const {
        return std::all_of(values_.begin(), values_.end(),
                           [this](double x) { return x == values_.front(); });
    }

  private:
    std::vector<double> values_;
    std::vector<double> weights_;
};

namespace detail {

inline void require_nonnegative(const weighted_sample& x, const char* where) {
    if (!x.nonnegative()) {
        throw negative_value_error(std::string(where) + ": values must be >= 0");
    }
}

inline void require_positive_exponent(double s, const char* where) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw nonpositive_exponent_error(std::string(where) + ": exponent must be > 0");
    }
}

}  // namespace detail

}  // namespace varineq
