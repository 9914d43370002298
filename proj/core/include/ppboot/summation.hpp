#pragma once

#include <cmath>
#include <span>

namespace ppboot {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

/// Two-pass mean and unbiased sample variance.
struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
};

inline SampleMoments sample_moments(std::span<const double> values) noexcept {
  SampleMoments m;
  if (values.empty()) return m;
  m.mean = compensated_sum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return m;
  CompensatedSum sq;
  for (double v : values) {
    const double d = v - m.mean;
    sq.add(d * d);
  }
  m.variance = sq.value() / static_cast<double>(values.size() - 1);
  return m;
}

}  // namespace ppboot
