#include "panharmonic/specs.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <set>

namespace panharmonic {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double number(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    fail("'" + token + "' is not a finite number");
  return v;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

class Params {
 public:
  Params(const Spec& spec, std::set<std::string> allowed) : spec_(spec) {
    allowed.insert("scale");
    allowed.insert("shift");
    for (const auto& [key, _] : spec.params)
      if (!allowed.count(key)) fail("'" + spec.name + "' does not take '" + key + "'");
  }

  double scalar(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const auto it = spec_.params.find(key);
    if (it == spec_.params.end()) {
      if (!fallback) fail("'" + spec_.name + "' needs " + key + "=");
      return *fallback;
    }
    if (it->second.size() != 1) fail(key + " takes a single value");
    return it->second.front();
  }

  Point vector(const std::string& key, int m, std::optional<Point> fallback = std::nullopt) const {
    const auto it = spec_.params.find(key);
    if (it == spec_.params.end()) {
      if (!fallback) fail("'" + spec_.name + "' needs " + key + "=");
      return *fallback;
    }
    if (static_cast<int>(it->second.size()) != m)
      fail(key + " needs " + std::to_string(m) + " components, got " + std::to_string(it->second.size()));
    return Eigen::Map<const Eigen::VectorXd>(it->second.data(), m);
  }

  int axis(const std::string& key, int m, int fallback) const {
    const double v = scalar(key, fallback);
    if (v != std::floor(v) || v < 1 || v > m) fail(key + " must be an axis number in 1.." + std::to_string(m));
    return static_cast<int>(v) - 1;
  }

 private:
  const Spec& spec_;
};

double positive_mu(const Params& p) {
  const double mu = p.scalar("mu");
  if (!(mu > 0.0)) fail("mu must be > 0");
  return mu;
}

Point unit_direction(const Params& p, int m) {
  Point d = p.vector("dir", m, Point(Point::Unit(m, 0)));
  const double n = d.norm();
  if (!(n > 0.0)) fail("dir must be nonzero");
  return d / n;
}

}  // namespace

Spec Spec::parse(const std::string& text) {
  Spec spec;
  const std::size_t colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (!is_identifier(spec.name)) fail("bad spec name in '" + text + "'");
  if (colon == std::string::npos) return spec;
  const std::string body = text.substr(colon + 1);
  if (body.empty()) fail("empty parameter list in '" + text + "'");
  std::string current;
  for (const std::string& token : split(body, ',')) {
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      if (current.empty()) fail("value '" + token + "' has no key in '" + text + "'");
      spec.params[current].push_back(number(token));
      continue;
    }
    current = token.substr(0, eq);
    if (!is_identifier(current)) fail("bad key '" + current + "' in '" + text + "'");
    if (spec.params.count(current)) fail("duplicate key '" + current + "' in '" + text + "'");
    spec.params[current].push_back(number(token.substr(eq + 1)));
  }
  return spec;
}

ScalarField parse_field(const std::string& text, int m) {
  if (m < 2) fail("dimension must be >= 2");
  const Spec spec = Spec::parse(text);
  const std::string& n = spec.name;

  auto base = [&]() -> ScalarField {
    if (n == "plane" || n == "cosh") {
      const Params p(spec, {"mu", "dir"});
      return n == "plane" ? make_plane_panharmonic(m, positive_mu(p), unit_direction(p, m))
                          : make_cosh_panharmonic(m, positive_mu(p), unit_direction(p, m));
    }
    if (n == "radial") {
      const Params p(spec, {"mu", "center"});
      return make_radial_panharmonic(m, positive_mu(p), p.vector("center", m, Point(Point::Zero(m))));
    }
    if (n == "const") {
      const Params p(spec, {"value"});
      return make_constant(m, p.scalar("value", 1.0));
    }
    if (n == "linear") {
      const Params p(spec, {"coef", "offset"});
      return make_linear(p.vector("coef", m), p.scalar("offset", 0.0));
    }
    if (n == "product" || n == "difference") {
      const Params p(spec, {"i", "j"});
      const int i = p.axis("i", m, 1), j = p.axis("j", m, 2);
      if (i == j) fail("i and j must differ");
      return n == "product" ? make_product_harmonic(m, i, j) : make_difference_harmonic(m, i, j);
    }
    if (n == "fundamental") {
      const Params p(spec, {"pole"});
      return make_fundamental(p.vector("pole", m));
    }
    fail("unknown field '" + n + "'");
  };

  ScalarField field = base();
  const Params common(spec, {"mu", "dir", "center", "value", "coef", "offset", "i", "j", "pole"});
  const double scale = common.scalar("scale", 1.0);
  const double shift = common.scalar("shift", 0.0);
  if (scale == 1.0 && shift == 0.0) return field;

  FieldLabel label = field.label();
  if (shift != 0.0 && label.kind == FieldClass::Panharmonic) label = FieldLabel::generic();
  const std::string name = field.name();
  return ScalarField(
      m, [field, scale, shift](const Point& x) { return scale * field(x) + shift; }, label,
      field.smooth_region(), name);
}

Domain parse_domain(const std::string& text, int m) {
  if (m < 2) fail("dimension must be >= 2");
  const Spec spec = Spec::parse(text);
  for (const auto& key : {"scale", "shift"})
    if (spec.params.count(key)) fail("domains do not take '" + std::string(key) + "'");
  if (spec.name == "ball") {
    const Params p(spec, {"r", "c"});
    const double r = p.scalar("r", 1.0);
    if (!(r > 0.0)) fail("ball radius must be > 0");
    return Domain(BallSpec{p.vector("c", m, Point(Point::Zero(m))), r});
  }
  if (spec.name == "box") {
    const Params p(spec, {"lo", "hi"});
    const Point lo = p.vector("lo", m, Point(Point::Zero(m)));
    const Point hi = p.vector("hi", m, Point(Point::Ones(m)));
    if (!((hi - lo).array() > 0.0).all()) fail("box needs lo < hi on every axis");
    return Domain(BoxSpec{lo, hi});
  }
  fail("unknown domain '" + spec.name + "'");
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double a = number(parts[0]), b = number(parts[1]), count = number(parts[2]);
    if (count != std::floor(count) || count < 1 || count > 1e6) fail("grid count must be an integer in 1..1e6");
    if (count == 1) {
      if (a != b) fail("a single-point grid needs a == b");
      return {a};
    }
    if (!(b > a)) fail("grid needs a < b");
    const int n = static_cast<int>(count);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
    return out;
  }
  if (parts.size() != 1) fail("grid is a:b:n or a comma list");
  std::vector<double> out;
  for (const std::string& token : split(text, ',')) out.push_back(number(token));
  return out;
}

std::vector<Point> parse_points(const std::string& text, int m) {
  std::vector<Point> out;
  if (text.empty()) return out;
  for (const std::string& chunk : split(text, ';')) {
    const auto tokens = split(chunk, ',');
    if (static_cast<int>(tokens.size()) != m)
      fail("point '" + chunk + "' needs " + std::to_string(m) + " coordinates");
    Point x(m);
    for (int i = 0; i < m; ++i) x[i] = number(tokens[static_cast<std::size_t>(i)]);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace panharmonic
