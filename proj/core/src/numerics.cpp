#include "hlab/numerics.hpp"

namespace hlab {

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

MeanStd mean_and_stddev(std::span<const double> values) {
  const std::size_t n = values.size();
  MeanStd out;
  if (n == 0) return out;

  // Constant data has zero spread exactly; skip the summation roundoff.
  bool all_equal = true;
  for (std::size_t i = 1; i < n && all_equal; ++i) all_equal = values[i] == values[0];
  if (all_equal) {
    out.mean = values[0];
    return out;
  }

  out.mean = pairwise_sum(values) / static_cast<double>(n);
  if (n < 2) return out;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  out.stddev = std::sqrt(pairwise_sum(sq) / static_cast<double>(n - 1));
  return out;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  // Simpson weights 1,4,2,4,...,2,4,1; accumulate in index buckets so the
  // sum order is fixed.
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < panels; i += 2) odd += f(a + i * h);
  for (int i = 2; i < panels; i += 2) even += f(a + i * h);
  return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace hlab
