#include "panharmonic/wos.hpp"

#include <cmath>
#include <random>

#include "panharmonic/specfun.hpp"

namespace panharmonic {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(mix(seed + kGamma) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

CounterRng::result_type CounterRng::operator()() { return mix(key_ + (++counter_) * kGamma); }

WosEstimate wos_solve(const Domain& domain, const ScalarField& boundary_data, double mu,
                      const Point& x, const WosConfig& config, std::uint64_t stream) {
  const int m = domain.dim();
  if (boundary_data.dim() != m || x.size() != m) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  if (!(mu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be >= 0");
  if (config.n_paths < 1) throw Error(ErrorKind::InvalidArgument, "need at least one path");
  if (!(config.epsilon_shell > 0.0) || !(config.epsilon_shell < domain.diameter()))
    throw Error(ErrorKind::InvalidArgument, "epsilon shell must lie in (0, diameter)");
  if (!(config.radius_fraction > 0.0 && config.radius_fraction <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "radius fraction must lie in (0, 1]");
  if (!(domain.signed_distance(x) > 0.0)) throw Error(ErrorKind::StartOutside, "start point is not inside");

  const Dimension dim(m);
  WosEstimate est;
  est.n_paths = config.n_paths;
  double mean = 0.0, m2 = 0.0;
  std::int64_t scored = 0;
  std::int64_t total_steps = 0;
  Point pos(m), dir(m);
  const std::uint64_t stream_base = stream * static_cast<std::uint64_t>(config.n_paths);

  for (std::int64_t path = 0; path < config.n_paths; ++path) {
    CounterRng rng(config.seed, stream_base + static_cast<std::uint64_t>(path));
    std::normal_distribution<double> gauss;
    pos = x;
    double weight = 1.0;
    std::int64_t steps = 0;
    bool absorbed = false;
    while (true) {
      const double d = domain.signed_distance(pos);
      if (d < config.epsilon_shell) {
        absorbed = true;
        break;
      }
      if (steps == config.max_steps) break;
      const double r = config.radius_fraction * d;
      if (mu > 0.0) weight /= specfun::a_sphere(dim, mu * r);
      double norm = 0.0;
      while (norm == 0.0) {
        for (int i = 0; i < m; ++i) dir[i] = gauss(rng);
        norm = dir.norm();
      }
      pos += (r / norm) * dir;
      ++steps;
    }
    total_steps += steps;
    if (!absorbed) {
      ++est.truncated;
      continue;
    }
    const double score = weight * boundary_data(domain.nearest_boundary_point(pos));
    ++scored;
    const double delta = score - mean;
    mean += delta / static_cast<double>(scored);
    m2 += delta * (score - mean);
  }
  if (scored == 0) throw Error(ErrorKind::AllPathsTruncated, "every path hit max_steps");

  est.mean = mean;
  const double variance = scored > 1 ? m2 / static_cast<double>(scored - 1) : 0.0;
  est.standard_error = std::sqrt(variance / static_cast<double>(scored));
  est.average_steps = static_cast<double>(total_steps) / static_cast<double>(config.n_paths);
  return est;
}

std::vector<WosScanEntry> wos_field_scan(const Domain& domain, const ScalarField& boundary_data, double mu,
                                         const std::vector<Point>& points, const WosConfig& config) {
  std::vector<WosScanEntry> out;
  out.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    WosScanEntry entry{points[k], std::nullopt, {}};
    try {
      entry.estimate = wos_solve(domain, boundary_data, mu, points[k], config, k);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace panharmonic
