#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace poincare {

/// Neumaier's variant of Kahan summation: the running compensation also
/// captures the low-order bits of the accumulator when a summand dominates.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<double> x) noexcept {
    re_ += x.real();
    im_ += x.imag();
    return *this;
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

inline std::complex<double> compensated_sum(std::span<const std::complex<double>> xs) noexcept {
  CompensatedComplexSum s;
  for (auto x : xs) s += x;
  return s.value();
}

}  // namespace poincare
