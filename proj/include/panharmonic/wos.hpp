#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "panharmonic/fields.hpp"
#include "panharmonic/geometry.hpp"

namespace panharmonic {

struct WosConfig {
  std::int64_t n_paths = 100000;
  /// Paths are absorbed once closer than this to the boundary.
  double epsilon_shell = 1e-4;
  std::int64_t max_steps = 10000;
  std::uint64_t seed = 1;
  /// Step radius as a fraction of the distance to the boundary.
  double radius_fraction = 1.0;
};

struct WosEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  /// Paths launched; mean and standard error use the n_paths - truncated absorbed ones.
  std::int64_t n_paths = 0;
  double average_steps = 0.0;
  std::int64_t truncated = 0;
};

/// Counter-based stream: draw k of stream s is a SplitMix64 finalizer of
/// (key(seed, s) + k * golden gamma). Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Walk on spheres for lap u = mu^2 u in `domain`, u = boundary_data on the
/// boundary. Each jump to S_r(x) multiplies the path weight by 1/a°(mu r).
/// `stream` separates independent runs that share a seed.
WosEstimate wos_solve(const Domain& domain, const ScalarField& boundary_data, double mu,
                      const Point& x, const WosConfig& config, std::uint64_t stream = 0);

struct WosScanEntry {
  Point x;
  std::optional<WosEstimate> estimate;
  std::string error;
};

/// wos_solve at each point on its own stream; per-point failures are recorded.
std::vector<WosScanEntry> wos_field_scan(const Domain& domain, const ScalarField& boundary_data,
                                         double mu, const std::vector<Point>& points,
                                         const WosConfig& config);

}  // namespace panharmonic
