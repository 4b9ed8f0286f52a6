#include "polymv/gap.hpp"

#include "polymv/random.hpp"
#include "polymv/rational.hpp"
#include "polymv/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace polymv {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void require_alphas(const std::vector<double>& alphas) {
  AlphaVector<double> check(alphas);
  (void)check;
}

// Fixed interior directions for the guard grid.
std::vector<Point> guard_directions(int n) {
  std::vector<Point> out;
  if (n == 2) {
    for (int j = 0; j < 64; ++j) {
      const double theta = 2.0 * M_PI * (j + 0.5) / 64.0;
      out.push_back({std::cos(theta), std::sin(theta)});
    }
    return out;
  }
  if (n == 3) {
    const int count = 128;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double s = std::sqrt(1.0 - z * z);
      out.push_back({s * std::cos(golden * j), s * std::sin(golden * j), z});
    }
    return out;
  }
  Rng rng(0x5eed);
  for (int j = 0; j < 256; ++j) {
    Point d(static_cast<std::size_t>(n));
    for (auto& v : d) v = rng.normal();
    const double l = norm(d);
    for (auto& v : d) v /= l;
    out.push_back(std::move(d));
  }
  return out;
}

// y -> sum_k (-1)^(k+1) c_k u(x0 + a_k (y - x0))
constexpr double kCancellationFloor = 64.0 * std::numeric_limits<double>::epsilon();

Integrand combination(const Candidate& u, const Point& x0, const std::vector<double>& alphas) {
  const auto c = float_coefficients(alphas);
  std::vector<double> weights(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) weights[k] = k % 2 == 0 ? c[k] : -c[k];
  Integrand eval = u.eval;
  Point buffer(x0.size());
  return [eval, x0, alphas, weights, buffer](std::span<const double> y) mutable {
    CompensatedSum sum;
    double magnitude = 0.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      double term;
      if (alphas[k] == 1.0) {
        term = weights[k] * eval(y);
      } else {
        for (std::size_t i = 0; i < x0.size(); ++i) buffer[i] = x0[i] + alphas[k] * (y[i] - x0[i]);
        term = weights[k] * eval(buffer);
      }
      sum.add(term);
      magnitude += std::abs(term);
    }
    // Cancellation down to rounding level is an exact zero; the adaptive rules
    // would otherwise chase the noise.
    const double value = sum.value();
    return std::abs(value) <= kCancellationFloor * magnitude ? 0.0 : value;
  };
}

// Poles of the dilated terms that can reach the closed domain.
std::vector<Point> combination_poles(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas) {
  const auto& x0 = domain.center();
  const double reach = domain.max_radial() * (1.0 + 1e-12);
  std::vector<Point> out;
  for (const auto& p : u.poles) {
    for (double a : alphas) {
      Point q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) q[i] = x0[i] + (p[i] - x0[i]) / a;
      Point w(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) w[i] = q[i] - x0[i];
      if (norm(w) <= reach) out.push_back(std::move(q));
    }
  }
  return out;
}

void require_cap(const StarDomain& domain, const std::vector<double>& alphas, const GapGeometry& g) {
  require_alphas(alphas);
  if (alphas.back() != 1.0) throw std::invalid_argument("the domain identity needs alpha_m = 1");
  const double cap = g.inradius.r / g.diameter;
  const double a = alphas[alphas.size() - 2];
  if (a > cap * (1.0 + 1e-12)) {
    throw std::invalid_argument("alpha_{m-1} = " + format_double(a) + " exceeds r/d = " + format_double(cap) + " on " +
                                domain.describe());
  }
}

}  // namespace

Candidate kuran_candidate(const Point& center, double r, const Point& pole, const std::vector<double>& alphas) {
  require_alphas(alphas);
  if (alphas.back() != 1.0) throw std::invalid_argument("the test function needs alpha_m = 1");
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const int n = static_cast<int>(center.size());
  Point z(center.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = pole[i] - center[i];
  std::vector<double> shells;  // a_k^2 r^2, k = 2..m-1
  for (std::size_t k = 1; k + 1 < alphas.size(); ++k) shells.push_back(alphas[k] * alphas[k] * r * r);
  const double r2 = r * r;
  Candidate out;
  out.id = "kuran";
  out.poles = {pole};
  out.eval = [center, z, shells, r2, n](std::span<const double> x) {
    double s = 0.0;
    double dist2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double w = x[i] - center[i];
      s += w * w;
      dist2 += (w - z[i]) * (w - z[i]);
    }
    double v = s * (r2 - s);
    for (double shell : shells) v *= shell - s;
    const double dist = std::sqrt(dist2);
    return v / std::pow(dist, n);
  };
  return out;
}

Candidate kuran_candidate(const StarDomain& domain, const std::vector<double>& alphas) {
  const auto in = inradius(domain);
  return kuran_candidate(domain.center(), in.r, in.nearest, alphas);
}

Candidate polynomial_candidate(std::string id, const MultiPoly& p) {
  Candidate out;
  out.id = std::move(id);
  auto compiled = std::make_shared<CompiledPoly>(p);
  out.eval = [compiled](std::span<const double> x) { return (*compiled)(x); };
  return out;
}

Candidate almansi_candidate(int m, int n, int degree, std::uint64_t seed) {
  return polynomial_candidate("almansi(" + std::to_string(seed) + ")", almansi_sample(m, n, degree, seed));
}

std::vector<double> float_coefficients(const std::vector<double>& alphas) {
  std::vector<Rational> exact;
  exact.reserve(alphas.size());
  for (double a : alphas) exact.push_back(exact_from_double(a));
  const auto c = coefficients(AlphaVector<Rational>(std::move(exact)));
  std::vector<double> out;
  for (const auto& v : c.c) out.push_back(to_double(v));
  return out;
}

QuadratureResult combination_integral(const Candidate& u, const StarDomain& domain,
                                      const std::vector<double>& alphas, const QuadratureSpec& spec) {
  require_alphas(alphas);
  const auto poles = combination_poles(u, domain, alphas);
  return integrate(combination(u, domain.center(), alphas), domain, spec, poles);
}

double mvp_residual(const Candidate& u, const Point& x0, double r, const std::vector<double>& alphas,
                    const QuadratureSpec& spec) {
  const int n = static_cast<int>(x0.size());
  const auto ball = StarDomain::ball(n, r, x0);
  const auto q = combination_integral(u, ball, alphas, spec);
  return std::abs(u.eval(x0) - q.value / ball_volume(n, r));
}

GapGeometry gap_geometry(const StarDomain& domain, const QuadratureSpec& spec) {
  GapGeometry g;
  g.inradius = inradius(domain);
  g.diameter = diameter(domain).value;
  g.volume = volume(domain, spec);
  return g;
}

double domain_mvp_residual(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
                           const QuadratureSpec& spec) {
  const auto g = gap_geometry(domain, spec);
  require_cap(domain, alphas, g);
  const auto q = combination_integral(u, domain, alphas, spec);
  return std::abs(u.eval(domain.center()) - q.value / g.volume);
}

double m_alpha(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
               const QuadratureSpec& spec) {
  const auto q = combination_integral(u, domain, alphas, spec);
  return q.abs_value / volume(domain, spec);
}

double sampled_sup(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas) {
  auto g = combination(u, domain.center(), alphas);
  const auto& x0 = domain.center();
  Point x(x0.size());
  double sup = 0.0;
  for (const auto& dir : guard_directions(domain.dim())) {
    const double reach = domain.radial(dir);
    for (int j = 1; j <= 9; ++j) {
      const double t = 0.1 * j * reach;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i] + t * dir[i];
      const double v = std::abs(g(x));
      if (std::isfinite(v)) sup = std::max(sup, v);
    }
  }
  return sup;
}

GapReport gap_term(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
                   const QuadratureSpec& spec) {
  return gap_term(u, domain, alphas, spec, gap_geometry(domain, spec));
}

GapReport gap_term(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
                   const QuadratureSpec& spec, const GapGeometry& geometry) {
  require_cap(domain, alphas, geometry);
  const int m = static_cast<int>(alphas.size());
  const int n = domain.dim();
  GapReport rep;
  rep.m = m;
  rep.n = n;
  rep.domain = domain.describe();
  rep.r = geometry.inradius.r;
  rep.diameter = geometry.diameter;
  rep.volume = geometry.volume;
  rep.alphas = alphas;
  rep.candidate = u.id;
  rep.spec = spec;

  const auto q = combination_integral(u, domain, alphas, spec);
  rep.quadrature_levels = q.levels;
  rep.quadrature_error = q.error;
  rep.u_x0 = u.eval(domain.center());
  rep.mean = q.value / rep.volume;
  rep.residual = std::abs(rep.u_x0 - rep.mean);
  rep.m_alpha = q.abs_value / rep.volume;
  const double sup = sampled_sup(u, domain, alphas);
  if (!(sup > 0.0) || !(rep.m_alpha > kGuardFactor * sup)) {
    throw DegenerateCandidate("M_alpha = " + format_double(rep.m_alpha) + " is below the guard for candidate " +
                              u.id + " on " + rep.domain);
  }
  rep.gap = rep.residual / rep.m_alpha;

  const double ball = ball_volume(n, rep.r);
  rep.finiteness_bound = rep.volume / ball + 1.0;
  rep.bound_factor = std::pow(rep.diameter / rep.r, m * m - m);
  const double outside = rep.volume - ball;
  if (outside <= kExactBallTolerance * rep.volume) {
    rep.exact_ball = true;
    rep.outside_volume = 0.0;
    rep.vol_ratio = 0.0;
  } else {
    rep.outside_volume = outside;
    rep.vol_ratio = outside / rep.volume;
    if (rep.gap > 0.0) rep.stability_ratio = rep.vol_ratio / (rep.bound_factor * rep.gap);
  }
  return rep;
}

std::vector<std::vector<double>> alpha_grid(int m, double r, double d) {
  if (m < 2) throw std::invalid_argument("alpha grid needs m >= 2");
  if (!(r > 0.0) || !(d > r)) throw std::invalid_argument("alpha grid needs 0 < r < d");
  std::vector<std::vector<double>> out;
  for (double x : {r / (2.0 * d), r / (1.5 * d), r / d}) {
    std::vector<double> tuple;
    for (int k = 1; k <= m; ++k) tuple.push_back(k == m ? 1.0 : std::pow(x, m - k));
    out.push_back(std::move(tuple));
  }
  return out;
}

GapReport gm_lower_bound(const StarDomain& domain, int m, const CandidateSet& candidates,
                         const std::vector<std::vector<double>>& grid, const QuadratureSpec& spec,
                         std::vector<GapReport>* all) {
  const auto geometry = gap_geometry(domain, spec);
  std::vector<Candidate> fixed;
  for (auto seed : candidates.almansi_seeds) {
    fixed.push_back(almansi_candidate(m, domain.dim(), candidates.almansi_degree, seed));
  }
  for (const auto& c : candidates.user) fixed.push_back(c);
  if (!candidates.kuran && fixed.empty()) throw std::invalid_argument("candidate set is empty");
  if (grid.empty()) throw std::invalid_argument("alpha grid is empty");

  std::optional<GapReport> best;
  auto consider = [&](const Candidate& u, const std::vector<double>& alphas) {
    try {
      GapReport rep = gap_term(u, domain, alphas, spec, geometry);
      if (all) all->push_back(rep);
      if (!best || rep.gap > best->gap) best = std::move(rep);
    } catch (const DegenerateCandidate&) {
    }
  };
  for (const auto& alphas : grid) {
    if (static_cast<int>(alphas.size()) != m) throw std::invalid_argument("alpha tuple length differs from m");
    if (candidates.kuran) {
      consider(kuran_candidate(domain.center(), geometry.inradius.r, geometry.inradius.nearest, alphas), alphas);
    }
    for (const auto& c : fixed) consider(c, alphas);
  }
  if (!best) throw DegenerateCandidate("all candidates are degenerate on " + domain.describe());
  return *best;
}

GapReport stability_check(const StarDomain& domain, int m, const QuadratureSpec& spec, std::vector<GapReport>* all) {
  const auto in = inradius(domain);
  const double d = diameter(domain).value;
  GapReport rep = gm_lower_bound(domain, m, CandidateSet{}, alpha_grid(m, in.r, d), spec, all);
  if (!rep.exact_ball && !(rep.gap > 0.0)) {
    throw DegenerateCandidate("gap lower bound vanishes on the non-ball domain " + rep.domain);
  }
  return rep;
}

std::vector<double> annulus_contributions(const Candidate& u, const StarDomain& domain,
                                          const std::vector<double>& alphas, const QuadratureSpec& spec) {
  require_alphas(alphas);
  const int n = domain.dim();
  const auto& x0 = domain.center();
  const auto in = inradius(domain);
  const auto ball = StarDomain::ball(n, in.r, x0);
  std::vector<double> out;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double a = alphas[k];
    Candidate dilated;
    dilated.eval = [eval = u.eval, x0, a, buffer = Point(x0.size())](std::span<const double> y) mutable {
      for (std::size_t i = 0; i < x0.size(); ++i) buffer[i] = x0[i] + a * (y[i] - x0[i]);
      return eval(buffer);
    };
    for (const auto& p : u.poles) {
      Point q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) q[i] = x0[i] + (p[i] - x0[i]) / a;
      dilated.poles.push_back(std::move(q));
    }
    const double outer = integrate(dilated.eval, domain, spec, dilated.poles).value;
    const double inner = integrate(dilated.eval, ball, spec, dilated.poles).value;
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    out.push_back(sign * std::pow(a, n) * (outer - inner));
  }
  return out;
}

}  // namespace polymv
