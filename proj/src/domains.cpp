#include "polymv/domains.hpp"

#include "polymv/quadrature.hpp"
#include "polymv/random.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polymv {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first < last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw std::invalid_argument("bad number '" + std::string(text) + "'");
  return value;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

// Extremum of eps * P_k(t) on [-1, 1]: dense scan, then golden-section polish.
double profile_extremum(int k, double eps, bool want_min) {
  auto value = [&](double t) {
    const double v = eps * legendre(k, t);
    return want_min ? v : -v;
  };
  constexpr int samples = 4000;
  int best = 0;
  double best_value = value(-1.0);
  for (int i = 1; i <= samples; ++i) {
    const double t = -1.0 + 2.0 * i / samples;
    if (const double v = value(t); v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = std::max(-1.0, -1.0 + 2.0 * (best - 1) / samples);
  double hi = std::min(1.0, -1.0 + 2.0 * (best + 1) / samples);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double a = hi - golden * (hi - lo);
    const double b = lo + golden * (hi - lo);
    if (value(a) <= value(b)) hi = b;
    else lo = a;
  }
  const double mid = 0.5 * (lo + hi);
  // The endpoints are candidates as well.
  double t = mid;
  if (value(-1.0) < value(t)) t = -1.0;
  if (value(1.0) < value(t)) t = 1.0;
  return t;
}

double angle_of(std::span<const double> d) { return std::atan2(d[1], d[0]); }

}  // namespace

double legendre(int k, double t) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0) * t * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

StarDomain::StarDomain(DomainKind kind, int n, Point center, std::vector<double> params, int freq)
    : kind_(kind), n_(n), center_(std::move(center)), params_(std::move(params)), freq_(freq) {
  if (n_ < 1) throw std::invalid_argument("domain dimension must be positive");
  if (center_.empty()) center_.assign(static_cast<std::size_t>(n_), 0.0);
  if (static_cast<int>(center_.size()) != n_) throw std::invalid_argument("center dimension mismatch");
}

StarDomain StarDomain::ball(int n, double r, Point center) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ball radius must be positive");
  return StarDomain(DomainKind::ball, n, std::move(center), {r}, 0);
}

StarDomain StarDomain::ellipsoid(std::vector<double> semi_axes, Point center) {
  if (semi_axes.empty()) throw std::invalid_argument("ellipsoid needs semi-axes");
  for (double a : semi_axes) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("semi-axes must be positive");
  }
  const int n = static_cast<int>(semi_axes.size());
  return StarDomain(DomainKind::ellipsoid, n, std::move(center), std::move(semi_axes), 0);
}

StarDomain StarDomain::bump(int n, double r, double eps, int freq, Point center) {
  if (!(r > 0.0)) throw std::invalid_argument("bump radius must be positive");
  if (!(std::abs(eps) < 1.0)) throw std::invalid_argument("bump needs |eps| < 1 to keep rho positive");
  if (freq < 1) throw std::invalid_argument("bump frequency must be at least 1");
  if (n < 2) throw std::invalid_argument("bump needs n >= 2");
  return StarDomain(DomainKind::bump, n, std::move(center), {r, eps}, freq);
}

StarDomain StarDomain::table(std::vector<double> radii, Point center) {
  if (radii.size() < 3) throw std::invalid_argument("radial table needs at least 3 samples");
  for (double v : radii) {
    if (!(v > 0.0)) throw std::invalid_argument("radial table entries must be positive");
  }
  return StarDomain(DomainKind::table, 2, std::move(center), std::move(radii), 0);
}

StarDomain StarDomain::parse(std::string_view line, int n) {
  std::istringstream in{std::string(line)};
  std::string kind;
  in >> kind;
  if (kind.empty()) throw std::invalid_argument("empty domain description");
  std::vector<std::pair<std::string, std::string>> fields;
  for (std::string token; in >> token;) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + token + "'");
    fields.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    for (auto it = fields.begin(); it != fields.end(); ++it) {
      if (it->first == key) {
        std::string v = it->second;
        fields.erase(it);
        return v;
      }
    }
    return std::nullopt;
  };
  auto need = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw std::invalid_argument("domain '" + kind + "' needs " + key + "=");
    return *v;
  };
  Point center;
  if (auto c = take("center")) center = parse_number_list(*c);

  auto finish = [&](StarDomain d) {
    if (!fields.empty()) throw std::invalid_argument("unknown domain field '" + fields.front().first + "'");
    if (d.dim() != n) {
      throw std::invalid_argument("domain '" + kind + "' has dimension " + std::to_string(d.dim()) +
                                  " but n=" + std::to_string(n));
    }
    return d;
  };

  if (kind == "ball") return finish(ball(n, parse_number(need("r")), center));
  if (kind == "ellipse") {
    if (n != 2) throw std::invalid_argument("'ellipse' is two-dimensional; use 'ellipsoid axes=...'");
    const double a = parse_number(need("a"));
    const double b = parse_number(need("b"));
    return finish(ellipsoid({a, b}, center));
  }
  if (kind == "ellipsoid") return finish(ellipsoid(parse_number_list(need("axes")), center));
  if (kind == "bump") {
    const double r = parse_number(need("r"));
    const double eps = parse_number(need("eps"));
    const double freq = parse_number(need("freq"));
    if (freq != std::floor(freq)) throw std::invalid_argument("bump freq must be an integer");
    return finish(bump(n, r, eps, static_cast<int>(freq), center));
  }
  if (kind == "table") return finish(table(parse_number_list(need("radii")), center));
  throw std::invalid_argument("unknown domain kind '" + kind + "'");
}

std::string StarDomain::describe() const {
  std::vector<double> p = params_;
  std::string out;
  switch (kind_) {
    case DomainKind::ball:
      out = "ball r=" + format_double(scale_ * p[0]);
      break;
    case DomainKind::ellipsoid:
      for (auto& v : p) v *= scale_;
      if (n_ == 2) out = "ellipse a=" + format_double(p[0]) + " b=" + format_double(p[1]);
      else out = "ellipsoid axes=" + join(p);
      break;
    case DomainKind::bump:
      out = "bump r=" + format_double(scale_ * p[0]) + " eps=" + format_double(p[1]) + " freq=" + std::to_string(freq_);
      break;
    case DomainKind::table:
      for (auto& v : p) v *= scale_;
      out = "table radii=" + join(p);
      break;
  }
  if (std::any_of(center_.begin(), center_.end(), [](double c) { return c != 0.0; })) out += " center=" + join(center_);
  return out;
}

double StarDomain::base_radial(std::span<const double> d) const {
  switch (kind_) {
    case DomainKind::ball:
      return params_[0];
    case DomainKind::ellipsoid: {
      double s = 0.0;
      for (std::size_t i = 0; i < params_.size(); ++i) s += (d[i] / params_[i]) * (d[i] / params_[i]);
      return 1.0 / std::sqrt(s);
    }
    case DomainKind::bump: {
      const double g = n_ == 2 ? std::cos(freq_ * angle_of(d)) : legendre(freq_, d[static_cast<std::size_t>(n_ - 1)]);
      return params_[0] * (1.0 + params_[1] * g);
    }
    case DomainKind::table: {
      const double two_pi = 2.0 * M_PI;
      double angle = std::fmod(angle_of(d), two_pi);
      if (angle < 0.0) angle += two_pi;
      const auto count = params_.size();
      const double pos = angle / two_pi * static_cast<double>(count);
      const auto i = static_cast<std::size_t>(std::floor(pos)) % count;
      const double frac = pos - std::floor(pos);
      return (1.0 - frac) * params_[i] + frac * params_[(i + 1) % count];
    }
  }
  return 0.0;
}

double StarDomain::radial(std::span<const double> unit_direction) const {
  if (static_cast<int>(unit_direction.size()) != n_) throw std::invalid_argument("direction dimension mismatch");
  return scale_ * base_radial(unit_direction);
}

double StarDomain::radial_angle(double theta) const {
  if (n_ != 2) throw std::logic_error("radial_angle is only defined for n = 2");
  const double d[2] = {std::cos(theta), std::sin(theta)};
  return radial(d);
}

bool StarDomain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point dimension mismatch");
  Point d(x.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = x[i] - center_[i];
    norm2 += d[i] * d[i];
  }
  if (norm2 == 0.0) return true;
  const double norm = std::sqrt(norm2);
  for (auto& v : d) v /= norm;
  return norm < radial(d);
}

StarDomain StarDomain::rescaled(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("rescaling factor must be positive");
  StarDomain out = *this;
  out.scale_ = scale_ * lambda;
  return out;
}

double StarDomain::max_radial() const {
  switch (kind_) {
    case DomainKind::ball:
      return scale_ * params_[0];
    case DomainKind::ellipsoid:
      return scale_ * *std::max_element(params_.begin(), params_.end());
    case DomainKind::bump: {
      if (n_ == 2) return scale_ * params_[0] * (1.0 + std::abs(params_[1]));
      const double t = profile_extremum(freq_, params_[1], false);
      return scale_ * params_[0] * (1.0 + params_[1] * legendre(freq_, t));
    }
    case DomainKind::table:
      return scale_ * *std::max_element(params_.begin(), params_.end());
  }
  return 0.0;
}

StarDomain rescale(const StarDomain& domain, double lambda) { return domain.rescaled(lambda); }

bool contains(const StarDomain& domain, std::span<const double> x) { return domain.contains(x); }

Inradius inradius(const StarDomain& domain) {
  const int n = domain.dim();
  Point dir(static_cast<std::size_t>(n), 0.0);
  const auto& p = domain.parameters();
  switch (domain.kind()) {
    case DomainKind::ball:
      dir[0] = 1.0;
      break;
    case DomainKind::ellipsoid: {
      const auto it = std::min_element(p.begin(), p.end());
      dir[static_cast<std::size_t>(it - p.begin())] = 1.0;
      break;
    }
    case DomainKind::bump: {
      const double eps = p[1];
      if (n == 2) {
        // cos(k theta) is minimal at theta = pi/k, maximal at 0.
        const double theta = eps > 0.0 ? M_PI / domain.frequency() : 0.0;
        dir[0] = std::cos(theta);
        dir[1] = std::sin(theta);
      } else {
        const double t = eps == 0.0 ? 1.0 : profile_extremum(domain.frequency(), eps, true);
        dir[0] = std::sqrt(std::max(0.0, 1.0 - t * t));
        dir[static_cast<std::size_t>(n - 1)] = t;
      }
      break;
    }
    case DomainKind::table: {
      const auto count = p.size();
      const auto i = static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin());
      const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(count);
      dir[0] = std::cos(theta);
      dir[1] = std::sin(theta);
      break;
    }
  }
  Inradius out;
  out.r = domain.radial(dir);
  out.direction = dir;
  out.nearest.resize(dir.size());
  for (std::size_t i = 0; i < dir.size(); ++i) out.nearest[i] = domain.center()[i] + out.r * dir[i];
  return out;
}

int default_diameter_resolution(int n) { return n == 2 ? 720 : (n == 3 ? 64 : 256); }

DiameterEstimate diameter(const StarDomain& domain, int resolution) {
  const int n = domain.dim();
  if (resolution < 8) throw std::invalid_argument("diameter resolution must be at least 8");
  std::vector<Point> boundary;
  auto push = [&](const Point& dir) {
    const double rho = domain.radial(dir);
    Point x(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) x[i] = domain.center()[i] + rho * dir[i];
    boundary.push_back(std::move(x));
  };
  if (n == 1) {
    push({1.0});
    push({-1.0});
  } else if (n == 2) {
    for (int i = 0; i < resolution; ++i) {
      const double theta = 2.0 * M_PI * i / resolution;
      push({std::cos(theta), std::sin(theta)});
    }
  } else if (n == 3) {
    // Latitude/longitude grid; doubling the resolution keeps every old node.
    const int rows = resolution / 2;
    for (int i = 0; i <= rows; ++i) {
      const double psi = M_PI * i / rows;
      const int cols = (i == 0 || i == rows) ? 1 : resolution;
      for (int j = 0; j < cols; ++j) {
        const double phi = 2.0 * M_PI * j / resolution;
        push({std::sin(psi) * std::cos(phi), std::sin(psi) * std::sin(phi), std::cos(psi)});
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (double s : {1.0, -1.0}) {
        Point dir(static_cast<std::size_t>(n), 0.0);
        dir[static_cast<std::size_t>(i)] = s;
        push(dir);
      }
    }
    Rng rng(0x5eedULL);
    for (int k = 0; k < resolution; ++k) {
      Point dir(static_cast<std::size_t>(n));
      double norm = 0.0;
      for (auto& v : dir) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (auto& v : dir) v /= norm;
      push(dir);
    }
  }
  double best2 = 0.0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    for (std::size_t j = i + 1; j < boundary.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < boundary[i].size(); ++c) {
        const double d = boundary[i][c] - boundary[j][c];
        d2 += d * d;
      }
      best2 = std::max(best2, d2);
    }
  }
  return {std::sqrt(best2), resolution};
}

DiameterEstimate diameter(const StarDomain& domain) {
  return diameter(domain, default_diameter_resolution(domain.dim()));
}

double ball_volume(int n, double r) {
  return std::pow(M_PI, 0.5 * n) * std::pow(r, n) / std::tgamma(0.5 * n + 1.0);
}

double volume(const StarDomain& domain, const QuadratureSpec& spec) {
  return integrate([](std::span<const double>) { return 1.0; }, domain, spec).value;
}

bool inclusion_check(const StarDomain& domain, std::span<const double> alphas, double r) {
  if (alphas.size() < 2) throw std::invalid_argument("inclusion check needs at least two alphas");
  constexpr double slack = 1e-12;
  const double rho_min = inradius(domain).r;
  const double rho_max = domain.max_radial();
  // Lower inclusion B_{a_k r} in Omega_{a_k} is a_k r <= a_k rho_min.
  if (r > rho_min * (1.0 + slack)) return false;
  for (std::size_t k = 0; k + 1 < alphas.size(); ++k) {
    if (alphas[k] * rho_max > alphas[k + 1] * r * (1.0 + slack)) return false;
  }
  return true;
}

GeometryReport geometry(const StarDomain& domain, const QuadratureSpec& spec) {
  GeometryReport g;
  const auto in = inradius(domain);
  const auto d = diameter(domain);
  g.r = in.r;
  g.nearest = in.nearest;
  g.diameter = d.value;
  g.diameter_resolution = d.resolution;
  g.volume = volume(domain, spec);
  g.tolerance = spec.tolerance;
  return g;
}

}  // namespace polymv
