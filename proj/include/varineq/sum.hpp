#pragma once

#include <cmath>

namespace varineq {

// Kahan-Babuska-Neumaier compensated accumulator. Keeps weighted sums
// accurate to a few ulps independently of the number of terms.
class kbn_sum {
  public:
    kbn_sum() = default;

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace varineq
