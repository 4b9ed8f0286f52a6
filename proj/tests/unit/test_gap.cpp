#include "oracles.hpp"
#include "support.hpp"

#include "polymv/gap.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace polymv;

namespace {

QuadratureSpec fast_spec() {
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  return spec;
}

std::size_t count_fields(const std::string& line) {
  std::size_t fields = 1;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) ++fields;
  }
  return fields;
}

}  // namespace

TEST_CASE("float coefficients match exact values") {
  const auto c = float_coefficients({0.25, 0.5, 1.0});
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(64.0 / 45.0).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(c[2] == doctest::Approx(1.0 / 45.0).epsilon(1e-15));
  CHECK_THROWS_AS(float_coefficients({0.5, 0.25}), std::invalid_argument);
}

TEST_CASE("ball residuals of radial powers") {
  const auto spec = fast_spec();
  const Point x0 = {0.0, 0.0};
  // |x|^(2j) with j < m is reproduced exactly by the combination.
  const auto r2 = polynomial_candidate("r2", MultiPoly::norm_squared(2));
  CHECK(mvp_residual(r2, x0, 1.3, {0.3, 0.7, 1.0}, spec) <= 1e-12);
  // |x|^4 with m = 2 leaves sum_k s_k c_k a_k^4 avg_{B_r}|x|^4.
  const auto r4 = polynomial_candidate("r4", MultiPoly::norm_squared(2).pow(2));
  const std::vector<double> alphas = {0.5, 1.0};
  const auto c = oracle::moment_coefficients({Rational(1, 2), Rational(1)});
  const double combo = c[0].get_d() * std::pow(0.5, 4) - c[1].get_d();
  const double expected = std::abs(combo * oracle::ball_moment(2, 1.0, 2));
  CHECK(mvp_residual(r4, x0, 1.0, alphas, spec) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("constant and zero candidates on a domain") {
  const auto spec = fast_spec();
  const auto e = StarDomain::ellipsoid({1.0, 1.2});
  const std::vector<double> alphas = {0.3, 1.0};
  const auto one = polynomial_candidate("one", MultiPoly::constant(2, 1));
  const auto rep = gap_term(one, e, alphas, spec);
  CHECK(rep.residual <= 1e-12);
  CHECK(rep.m_alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.vol_ratio == doctest::Approx(1.0 - 1.0 / 1.2).epsilon(1e-10));
  CHECK(rep.finiteness_bound == doctest::Approx(2.2).epsilon(1e-10));
  CHECK(rep.within_finiteness_bound(1e-9));
  const auto zero = polynomial_candidate("zero", MultiPoly(2));
  CHECK_THROWS_AS(gap_term(zero, e, alphas, spec), DegenerateCandidate);
}

TEST_CASE("Kuran gap vanishes on the ball") {
  const auto spec = fast_spec();
  for (const auto& [m, n] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
    const auto ball = StarDomain::ball(n, 1.0);
    const auto rep = stability_check(ball, m, spec);
    CHECK(rep.exact_ball);
    CHECK_FALSE(rep.stability_ratio.has_value());
    CHECK(rep.gap <= 1e-6);
  }
}

TEST_CASE("ellipse gap agrees with an independent polar integrator") {
  // Kuran candidate, m = 2, alphas (r/(2d), 1) on the ellipse with semi-axes 1, 1.2.
  const double a = 1.0, b = 1.2;
  const double x = 1.0 / (2.0 * 2.0 * b);
  const auto c = oracle::moment_coefficients({Rational(x), Rational(1)});
  const double c1 = c[0].get_d(), c2 = c[1].get_d();
  // u = |x|^2 (1 - |x|^2) / |x - z|^2 with z = (1, 0) in the plane.
  auto u = [](double px, double py) {
    const double s = px * px + py * py;
    return s * (1.0 - s) / ((px - 1.0) * (px - 1.0) + py * py);
  };
  auto g = [&](double px, double py) { return c1 * u(x * px, x * py) - c2 * u(px, py); };
  auto rho = [&](double t) { return 1.0 / std::sqrt(std::pow(std::cos(t) / a, 2) + std::pow(std::sin(t) / b, 2)); };
  const double area = M_PI * a * b;
  const int level = 5;
  const double mean = oracle::polar_integral(g, rho, 0.0, 1.0, level) / area;
  const double abs_mean =
      oracle::polar_integral([&](double px, double py) { return std::abs(g(px, py)); }, rho, 0.0, 1.0, level) / area;
  const double oracle_gap = std::abs(mean) / abs_mean;
  CHECK(oracle_gap == doctest::Approx(0.29693855).epsilon(1e-5));

  const auto e = StarDomain::ellipsoid({a, b});
  const std::vector<double> alphas = {x, 1.0};
  const auto rep = gap_term(kuran_candidate(e, alphas), e, alphas, fast_spec());
  CHECK(rep.gap == doctest::Approx(0.29693855).epsilon(1e-5));
  CHECK(rep.u_x0 == 0.0);
  CHECK(rep.within_finiteness_bound(1e-9));
}

TEST_CASE("residual reduces to annulus contributions") {
  const auto spec = fast_spec();
  const auto bump = StarDomain::bump(2, 1.0, 0.2, 4);
  const auto in = inradius(bump);
  const double d = diameter(bump).value;
  const auto alphas = alpha_grid(3, in.r, d)[0];
  const auto u = kuran_candidate(bump, alphas);
  const auto contrib = annulus_contributions(u, bump, alphas, spec);
  const auto c = float_coefficients(alphas);
  double sum = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) sum += c[k] * std::pow(alphas[k], -2) * contrib[k];
  const double vol = volume(bump, spec);
  const double residual = domain_mvp_residual(u, bump, alphas, spec);
  CHECK(residual == doctest::Approx(std::abs(sum) / vol).epsilon(1e-6));
}

TEST_CASE("alpha cap is enforced") {
  const auto e = StarDomain::ellipsoid({1.0, 1.2});
  const auto u = polynomial_candidate("one", MultiPoly::constant(2, 1));
  CHECK_THROWS_AS(gap_term(u, e, {0.5, 1.0}, fast_spec()), std::invalid_argument);
  CHECK_THROWS_AS(gap_term(u, e, {0.2, 0.9}, fast_spec()), std::invalid_argument);
}

TEST_CASE("alpha grid") {
  const auto grid = alpha_grid(3, 1.0, 2.0);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0][0] == doctest::Approx(1.0 / 16.0));
  CHECK(grid[0][1] == doctest::Approx(0.25));
  CHECK(grid[2][1] == doctest::Approx(0.5));
  for (const auto& t : grid) CHECK(t.back() == 1.0);
  CHECK_THROWS_AS(alpha_grid(1, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_grid(2, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("gap is scale invariant") {
  const auto spec = fast_spec();
  const auto bump = StarDomain::bump(2, 1.0, 0.2, 4);
  const auto big = rescale(bump, 3.0);
  const auto a = stability_check(bump, 2, spec);
  const auto b = stability_check(big, 2, spec);
  CHECK(b.r == doctest::Approx(3.0 * a.r).epsilon(1e-12));
  CHECK(b.gap == doctest::Approx(a.gap).epsilon(1e-8));
  CHECK(b.vol_ratio == doctest::Approx(a.vol_ratio).epsilon(1e-8));
}

TEST_CASE("extra candidates never lower the bound") {
  const auto spec = fast_spec();
  const auto e = StarDomain::ellipsoid({1.0, 1.2});
  const auto in = inradius(e);
  const auto grid = alpha_grid(2, in.r, diameter(e).value);
  const auto kuran_only = gm_lower_bound(e, 2, CandidateSet{}, grid, spec);
  CandidateSet more;
  more.almansi_seeds = {1, 2};
  std::vector<GapReport> all;
  const auto with_almansi = gm_lower_bound(e, 2, more, grid, spec, &all);
  CHECK(with_almansi.gap >= kuran_only.gap);
  CHECK(all.size() == 9);
  for (const auto& rep : all) CHECK(rep.within_finiteness_bound(1e-9));
}

TEST_CASE("report serialization") {
  const auto rep = stability_check(StarDomain::ellipsoid({1.0, 1.2}), 2, fast_spec());
  CHECK(count_fields(csv_header()) == count_fields(csv_row(rep)));
  const auto j = nlohmann::json::parse(to_json(rep));
  CHECK(j.at("m") == 2);
  CHECK(j.at("gap_lower_bound").get<double>() == doctest::Approx(rep.gap));
  CHECK(j.at("alphas").size() == 2);
}

TEST_CASE("annulus contributions of the Kuran candidate are non-negative") {
  const auto spec = fast_spec();
  for (const auto& domain : {StarDomain::bump(2, 1.0, 0.2, 4), StarDomain::ellipsoid({1.0, 1.2})}) {
    const auto in = inradius(domain);
    const double d = diameter(domain).value;
    for (int m = 2; m <= 3; ++m) {
      const auto alphas = alpha_grid(m, in.r, d)[0];
      const auto contrib = annulus_contributions(kuran_candidate(domain, alphas), domain, alphas, spec);
      double scale = 0.0;
      for (double v : contrib) scale = std::max(scale, std::abs(v));
      CHECK(scale > 0.0);
      for (double v : contrib) CHECK(v >= -1e-8 * scale);
    }
  }
}
