#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace hlab {

/// Seeded Gaussian increment source. One stream per simulated path:
/// identical (seed, stream_id) reproduce the increment sequence bit for
/// bit, distinct stream_ids give statistically independent streams, so
/// path-level work can be farmed out to any number of workers without
/// changing results.
///
/// xoshiro256++ core, state derived from (seed, stream_id) by splitmix64
/// mixing; normals by Box-Muller on 53-bit uniforms.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  /// Uniform in (0, 1].
  double uniform01();

  /// Standard normal.
  double gaussian();

  /// Fill a vector with i.i.d. standard normals (coordinate order).
  void gaussian_fill(Eigen::Ref<Eigen::VectorXd> out);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hlab
