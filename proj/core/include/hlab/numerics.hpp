#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hlab {

/// (1 - exp(-a)) / a, continuous through a = 0.
inline double expm1_ratio(double a) {
  if (a == 0.0) return 1.0;
  return -std::expm1(-a) / a;
}

/// Integral of exp(-c*t) over [0, T], stable for c near 0.
inline double integral_exp_decay(double c, double T) {
  return T * expm1_ratio(c * T);
}

/// Deterministic pairwise (cascade) summation over a fixed index order.
/// The reduction tree depends only on the array length, so the result is
/// identical no matter how many workers filled the array.
double pairwise_sum(std::span<const double> values);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n-1 denominator)
};

/// Mean and sample standard deviation via pairwise sums.
MeanStd mean_and_stddev(std::span<const double> values);

/// Composite Simpson rule with n panels (rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace hlab
