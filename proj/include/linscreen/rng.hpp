#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace linscreen {

/// Hierarchical stream identifier: a master seed plus a path of nonnegative
/// integers. Distinct paths yield independent substreams; the same
/// (master, path) yields the identical stream on every platform, run and
/// thread schedule. Derivation folds path components through splitmix64, so
/// any substream is reachable in O(path length) without sequential jumping.
struct SeedPath {
  std::uint64_t master = 0;
  std::vector<std::uint64_t> path;

  SeedPath child(std::uint64_t component) const {
    SeedPath out = *this;
    out.path.push_back(component);
    return out;
  }

  /// Mixed 64-bit seed for this path.
  std::uint64_t fold() const;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Inverse of the standard normal CDF (Wichura's AS241 rational
/// approximation, double precision). Domain (0,1).
double inverse_normal_cdf(double u);

/// Deterministic random stream. The engine is mt19937_64, whose output
/// sequence is pinned by the standard; uniforms use an explicit 53-bit
/// conversion and normals go through inverse_normal_cdf, so draws are
/// identical across compilers and platforms.
class RngStream {
 public:
  explicit RngStream(const SeedPath& seed) : engine_(seed.fold()) {}
  explicit RngStream(std::uint64_t raw_seed) : engine_(raw_seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0,1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return inverse_normal_cdf(next_uniform()); }

  /// Uniform integer in [0, bound). bound must be positive. Rejection
  /// sampling keeps the draw unbiased and deterministic.
  std::uint64_t next_index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace linscreen
