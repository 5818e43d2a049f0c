#include "panharmonic/mean_values.hpp"

#include <cmath>
#include <random>

#include "panharmonic/specfun.hpp"

namespace panharmonic {

namespace {

void check_admissible(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule,
                      RuleKind kind) {
  if (rule.kind != kind) throw Error(ErrorKind::InvalidArgument, "quadrature rule of the wrong kind");
  if (rule.m != field.dim() || x.size() != field.dim())
    throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0");
  if (!(field.smooth_region().clearance(x) > r))
    throw Error(ErrorKind::InadmissibleBall, "closed ball leaves the field's smooth region");
}

double weighted_mean(const ScalarField& field, const Point& x, double r,
                     const QuadratureRule& rule) {
  double sum = 0.0;
  double total = 0.0;
  Point y(x.size());
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    y.noalias() = x + r * rule.nodes.col(i);
    sum += rule.weights[i] * field(y);
    total += rule.weights[i];
  }
  return sum / total;
}

}  // namespace

MeanRules MeanRules::deterministic(int m, int level) {
  return {sphere_rule(m, level), ball_rule(m, level)};
}

double sphere_mean(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule) {
  check_admissible(field, x, r, rule, RuleKind::Sphere);
  return weighted_mean(field, x, r, rule);
}

double ball_mean(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule) {
  check_admissible(field, x, r, rule, RuleKind::Ball);
  return weighted_mean(field, x, r, rule);
}

CouplingSample coupling(const ScalarField& field, const Point& x, double r, double mu,
                        const MeanRules& rules) {
  if (!(mu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be >= 0");
  const Dimension dim(field.dim());
  const double ms = sphere_mean(field, x, r, rules.sphere);
  const double mb = ball_mean(field, x, r, rules.ball);
  const double t = std::abs(mu) * r;
  const double residual =
      (specfun::a_sphere(dim, t) * mb - specfun::a_ball(dim, t) * ms) / (std::abs(ms) + std::abs(mb) + 1.0);
  return {ms, mb, residual};
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Panharmonic: return "panharmonic";
    case Verdict::Rejected: return "rejected";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DetectionReport detect_panharmonic(const ScalarField& field, const Domain& domain, double mu,
                                   const DetectionConfig& config) {
  if (field.dim() != domain.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  if (config.centers < 1 || config.radii < 1 || !(config.tolerance > 0.0))
    throw Error(ErrorKind::InvalidArgument, "detection config needs centers, radii, tolerance > 0");
  const int m = field.dim();
  const MeanRules rules = MeanRules::deterministic(m, config.level);

  std::mt19937_64 rng(config.seed);
  const auto [lo, hi] = domain.bounds();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  DetectionReport report;
  report.mu = mu;
  report.tolerance = config.tolerance;

  int found = 0;
  const int max_draws = 1000 * config.centers;
  for (int draw = 0; draw < max_draws && found < config.centers; ++draw) {
    Point x(m);
    for (int i = 0; i < m; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    const double reach = std::min(domain.signed_distance(x), field.smooth_region().clearance(x));
    if (!(reach / 2.0 > config.radius_floor)) continue;
    ++found;
    for (int k = 1; k <= config.radii; ++k) {
      const double r = reach * std::ldexp(1.0, -k);
      if (r <= config.radius_floor) break;
      const CouplingSample c = coupling(field, x, r, mu, rules);
      report.samples.push_back(
          {x, r, c.m_sphere, c.m_ball, c.residual, rules.sphere.size(), rules.ball.size()});
    }
  }
  if (report.samples.empty())
    throw Error(ErrorKind::DomainTooThin, "no admissible radius above the resolution floor");

  double sum = 0.0;
  for (const MeanSample& s : report.samples) {
    report.max_residual = std::max(report.max_residual, std::abs(s.residual));
    sum += std::abs(s.residual);
  }
  report.mean_residual = sum / static_cast<double>(report.samples.size());
  if (report.max_residual <= config.tolerance)
    report.verdict = Verdict::Panharmonic;
  else if (report.max_residual > 10.0 * config.tolerance)
    report.verdict = Verdict::Rejected;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

double estimate_mu(const ScalarField& field, const Point& x, double r, const QuadratureRule& rule) {
  const double u = field(x);
  if (std::abs(u) <= 1e-12) throw Error(ErrorKind::DegenerateCenter, "u(x) vanishes at the center");
  const double ratio = sphere_mean(field, x, r, rule) / u;
  if (!(ratio > 1.0 + 1e-12))
    throw Error(ErrorKind::NotPositiveType, "sphere mean ratio is not above 1");

  const Dimension dim(field.dim());
  double lo = 0.0;
  double hi = 1.0;
  while (specfun::a_sphere(dim, hi) < ratio) {
    lo = hi;
    hi *= 2.0;
    if (hi > 700.0) throw Error(ErrorKind::Overflow, "ratio beyond the coefficient range");
  }
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (specfun::a_sphere(dim, mid) < ratio)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) / r;
}

}  // namespace panharmonic
