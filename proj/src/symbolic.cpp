#include "polymv/symbolic.hpp"

#include "polymv/domains.hpp"
#include "polymv/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polymv {

bool is_polyharmonic(const PoleFunction& f, int m) {
  if (m < 1) throw std::invalid_argument("polyharmonic order must be at least 1");
  PoleFunction g = f.normalized();
  for (int i = 0; i < m && !g.terms().empty(); ++i) g = g.laplacian().normalized();
  return g.terms().empty();
}

bool is_polyharmonic(const MultiPoly& p, int m) {
  if (m < 1) throw std::invalid_argument("polyharmonic order must be at least 1");
  MultiPoly g = p;
  for (int i = 0; i < m && !g.is_zero(); ++i) g = g.laplacian();
  return g.is_zero();
}

namespace {

void require_nonzero_pole(const RationalPoint& z) {
  if (z.empty()) throw std::invalid_argument("pole needs a positive dimension");
  for (const auto& c : z) {
    if (c != 0) return;
  }
  throw std::invalid_argument("the pole z must be non-zero");
}

}  // namespace

MultiPoly build_h(const RationalPoint& z, const std::vector<Rational>& lambdas) {
  require_nonzero_pole(z);
  const int n = static_cast<int>(z.size());
  const Rational zz = dot(z, z);
  const MultiPoly zx = MultiPoly::linear(z);
  const MultiPoly xx = MultiPoly::norm_squared(n);
  MultiPoly h = zx;
  for (const auto& lambda : lambdas) {
    const Rational l2 = lambda * lambda;
    const Rational minus = l2 - zz;
    const Rational plus = l2 + zz;
    MultiPoly factor = xx * minus;
    factor -= zx * Rational(2 * plus);
    factor += MultiPoly::constant(n, minus * zz);
    h *= factor;
  }
  return h;
}

MultiPoly build_h_factored(const RationalPoint& z, const std::vector<Rational>& lambdas) {
  require_nonzero_pole(z);
  const Rational zz = dot(z, z);
  const MultiPoly zx = MultiPoly::linear(z);
  const MultiPoly dist = MultiPoly::distance_squared(z);
  MultiPoly h = zx;
  for (const auto& lambda : lambdas) {
    MultiPoly factor = dist * Rational(lambda * lambda - zz);
    factor -= zx * Rational(4 * zz);
    h *= factor;
  }
  return h;
}

PoleFunction kelvin_transform(const MultiPoly& h, const RationalPoint& z, int m) {
  require_nonzero_pole(z);
  const int n = static_cast<int>(z.size());
  if (h.dim() != n) throw std::invalid_argument("polynomial and pole dimensions differ");
  const Rational radius2 = 2 * dot(z, z);
  const MultiPoly shifted = h.shifted(z);  // t -> h(z + t)
  const int deg = std::max(shifted.degree(), 0);

  // (x_i - z_i)^k
  std::vector<std::vector<MultiPoly>> offset_powers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = offset_powers[static_cast<std::size_t>(i)];
    row.push_back(MultiPoly::constant(n, 1));
    const MultiPoly lin = MultiPoly::variable(n, i) - MultiPoly::constant(n, z[static_cast<std::size_t>(i)]);
    for (int k = 1; k <= deg; ++k) row.push_back(row.back() * lin);
  }

  PoleFunction out(z);
  for (const auto& [beta, c] : shifted.terms()) {
    int order = 0;
    MultiPoly term = MultiPoly::constant(n, c);
    for (std::size_t i = 0; i < beta.size(); ++i) {
      order += beta[i];
      if (beta[i] > 0) term *= offset_powers[i][static_cast<std::size_t>(beta[i])];
    }
    term *= pow(radius2, order);
    out.add_term(term, 2 * m - n - 2 * order);
  }
  return out.normalized();
}

PoleFunction kelvin_closed_form(const RationalPoint& z, const std::vector<Rational>& lambdas) {
  require_nonzero_pole(z);
  const int n = static_cast<int>(z.size());
  const int m = static_cast<int>(lambdas.size()) + 1;
  const Rational zz = dot(z, z);
  const MultiPoly xx = MultiPoly::norm_squared(n);
  // 4^(m-1) |z|^(2 + 4(m-1)) = 4^(m-1) (|z|^2)^(2m-1)
  const Rational prefactor = pow(Rational(4), m - 1) * pow(zz, 2 * m - 1);
  MultiPoly p = (xx - MultiPoly::constant(n, zz)) * prefactor;
  for (const auto& lambda : lambdas) p *= MultiPoly::constant(n, lambda * lambda) - xx;
  return PoleFunction::term(p, -n, z).normalized();
}

PoleFunction kuran_function(const Rational& r, const RationalPoint& z, const AlphaVector<Rational>& alphas) {
  if (!(r > 0)) throw std::invalid_argument("radius must be positive");
  if (dot(z, z) != r * r) throw std::invalid_argument("the pole must satisfy |z| = r");
  if (!alphas.ends_at_one()) throw std::invalid_argument("the test function needs alpha_m = 1");
  const int n = static_cast<int>(z.size());
  const Rational r2 = r * r;
  const MultiPoly xx = MultiPoly::norm_squared(n);
  MultiPoly p = xx * (MultiPoly::constant(n, r2) - xx);
  for (std::size_t k = 1; k + 1 < alphas.size(); ++k) {
    p *= MultiPoly::constant(n, alphas[k] * alphas[k] * r2) - xx;
  }
  return PoleFunction::term(p, -n, z);
}

MultiPoly harmonic_projection(const MultiPoly& homogeneous) {
  const int n = homogeneous.dim();
  if (homogeneous.is_zero()) return homogeneous;
  const int d = homogeneous.degree();
  for (const auto& [e, c] : homogeneous.terms()) {
    int total = 0;
    for (int v : e) total += v;
    if (total != d) throw std::invalid_argument("harmonic projection needs a homogeneous polynomial");
  }
  const MultiPoly xx = MultiPoly::norm_squared(n);
  MultiPoly out = homogeneous;
  MultiPoly lap = homogeneous;
  MultiPoly radial = MultiPoly::constant(n, 1);
  Rational c = 1;
  for (int j = 0;; ++j) {
    lap = lap.laplacian();
    if (lap.is_zero()) break;
    const int denom = 2 * (j + 1) * (n + 2 * d - 2 * j - 4);
    if (denom == 0) throw std::logic_error("degenerate harmonic projection");
    c = -c / denom;
    radial *= xx;
    out += radial * lap * c;
  }
  return out;
}

MultiPoly almansi_compose(const std::vector<MultiPoly>& harmonics) {
  if (harmonics.empty()) throw std::invalid_argument("need at least one harmonic component");
  const int n = harmonics.front().dim();
  const MultiPoly xx = MultiPoly::norm_squared(n);
  MultiPoly out(n);
  MultiPoly radial = MultiPoly::constant(n, 1);
  for (const auto& h : harmonics) {
    out += radial * h;
    radial *= xx;
  }
  return out;
}

MultiPoly almansi_sample(int m, int n, int degree, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("polyharmonic order must be at least 1");
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  Rng rng(seed);
  auto random_coefficient = [&] {
    long num = 0;
    while (num == 0) num = rng.uniform_int(-4, 4);
    return ratio(num, rng.uniform_int(1, 4));
  };
  std::vector<MultiPoly> harmonics;
  for (int j = 0; j < m; ++j) {
    MultiPoly h(n);
    for (int d = 0; d <= degree; ++d) {
      MultiPoly p(n);
      for (int t = 0; t < 2; ++t) {
        Exponent e(static_cast<std::size_t>(n), 0);
        for (int unit = 0; unit < d; ++unit) e[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] += 1;
        p.add_term(e, random_coefficient());
      }
      h += harmonic_projection(p);
    }
    if (j == m - 1 && h.is_zero()) h = MultiPoly::constant(n, 1);
    harmonics.push_back(std::move(h));
  }
  MultiPoly u = almansi_compose(harmonics);
  if (!is_polyharmonic(u, m)) throw std::logic_error("Almansi sample failed its polyharmonic certificate");
  return u;
}

bool SignPatternReport::passed() const {
  if (boundary_failures > 0) return false;
  for (const auto& region : regions) {
    if (region.violations > 0) return false;
  }
  return true;
}

SignPatternReport sign_pattern_check(const PoleFunction& u, const Rational& r, const AlphaVector<Rational>& alphas,
                                     std::size_t sample_budget, std::uint64_t seed, const StarDomain* domain) {
  const int n = u.dim();
  const std::size_t m = alphas.size();
  if (n < 2) throw std::invalid_argument("sign pattern check needs n >= 2");
  if (domain) {
    if (domain->dim() != n) throw std::invalid_argument("domain dimension mismatch");
    for (double c : domain->center()) {
      if (c != 0.0) throw std::invalid_argument("sign pattern check expects a domain centered at the origin");
    }
  }
  Rng rng(seed);
  const double r_d = to_double(r);
  const std::size_t per_region = std::max<std::size_t>(1, sample_budget / m);

  auto random_direction = [&] {
    Point dir(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : dir) v /= norm;
    return dir;
  };

  SignPatternReport report;
  auto probe = [&](SignRegion& region, const Point& x) {
    const RationalPoint xq = [&] {
      RationalPoint q;
      for (double v : x) q.push_back(exact_from_double(v));
      return q;
    }();
    if (xq == u.pole()) return;
    region.samples += 1;
    const double value = region.expected_sign * u.evaluate(x);
    region.min_signed_value = std::min(region.min_signed_value, value);
    const auto s = u.exact_sign(xq);
    if (!s) region.undecided += 1;
    else if (*s * region.expected_sign < 0) region.violations += 1;
  };

  // Sample in { scale * w : w in Omega, r_lo < |w| < r_hi(w) }.
  auto sample_region = [&](SignRegion& region, double scale, double inner, std::optional<double> outer) {
    region.min_signed_value = std::numeric_limits<double>::infinity();
    const std::size_t attempts = 4 * per_region;
    for (std::size_t a = 0; a < attempts && region.samples < per_region; ++a) {
      const Point dir = random_direction();
      const double hi = outer ? *outer : domain->radial(dir);
      if (!(hi > inner * (1.0 + 1e-12))) continue;
      const double t = rng.uniform(inner, hi);
      if (!(t > inner)) continue;
      Point x(dir.size());
      for (std::size_t i = 0; i < dir.size(); ++i) x[i] = scale * t * dir[i];
      probe(region, x);
    }
    if (region.samples == 0) region.min_signed_value = 0.0;
  };

  for (std::size_t k = 1; k < m; ++k) {
    SignRegion region;
    region.expected_sign = k % 2 == 1 ? 1 : -1;  // (-1)^(k+1), k 1-based
    const double ak = to_double(alphas[k - 1]);
    if (domain) {
      region.label = "Omega_a" + std::to_string(k) + " minus B_a" + std::to_string(k) + "r";
      sample_region(region, ak, r_d, std::nullopt);
    } else {
      region.label = "B_a" + std::to_string(k + 1) + "r minus B_a" + std::to_string(k) + "r";
      sample_region(region, 1.0, ak * r_d, to_double(alphas[k]) * r_d);
    }
    report.regions.push_back(region);
  }
  {
    SignRegion region;
    region.expected_sign = m % 2 == 1 ? 1 : -1;  // (-1)^(m+1)
    if (domain) {
      region.label = "Omega minus B_r";
      sample_region(region, 1.0, r_d, std::nullopt);
    } else {
      region.label = "B_2r minus B_r";
      sample_region(region, 1.0, r_d, 2.0 * r_d);
    }
    report.regions.push_back(region);
  }

  // u vanishes on the spheres |x| = a_k r, k = 2..m.
  for (std::size_t k = 1; k < m; ++k) {
    const Rational radius = alphas[k] * r;
    for (const auto& [a, b] : {std::pair{Rational(5, 13), Rational(12, 13)}, std::pair{Rational(12, 13), Rational(5, 13)}}) {
      RationalPoint x(static_cast<std::size_t>(n), Rational(0));
      x[0] = radius * a;
      x[1] = radius * b;
      if (x == u.pole()) continue;
      report.boundary_checks += 1;
      const auto s = u.exact_sign(x);
      if (!s || *s != 0) report.boundary_failures += 1;
      break;
    }
  }
  return report;
}

}  // namespace polymv
