#pragma once

// Exact constructions for the rigidity argument: the polynomial h, its Kelvin
// transform with pole z, the sign-alternating test function with a pole on the
// sphere |x| = r, and random m-polyharmonic polynomials of Almansi type.

#include "polymv/coefficients.hpp"
#include "polymv/multipoly.hpp"
#include "polymv/pole_function.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polymv {

class StarDomain;

/// Delta^m f == 0 exactly (canonical form after every application).
bool is_polyharmonic(const PoleFunction& f, int m);
bool is_polyharmonic(const MultiPoly& p, int m);

/// h(x) = (z.x) prod_k ((l_k^2 - |z|^2)|x|^2 - 2(l_k^2 + |z|^2) z.x + (l_k^2 - |z|^2)|z|^2),
/// with m - 1 = lambdas.size() factors; degree 2m - 1.
MultiPoly build_h(const RationalPoint& z, const std::vector<Rational>& lambdas);

/// Same polynomial through the factors (l_k^2 - |z|^2)|x - z|^2 - 4|z|^2 z.x.
MultiPoly build_h_factored(const RationalPoint& z, const std::vector<Rational>& lambdas);

/// Kh(x) = |x - z|^(2m-n) h(z + 2|z|^2 (x - z)/|x - z|^2), returned in canonical form.
PoleFunction kelvin_transform(const MultiPoly& h, const RationalPoint& z, int m);

/// 4^(m-1) |z|^(2+4(m-1)) (|x|^2 - |z|^2) prod_k (l_k^2 - |x|^2) / |x - z|^n.
PoleFunction kelvin_closed_form(const RationalPoint& z, const std::vector<Rational>& lambdas);

/// u(x) = |x|^2 (r^2 - |x|^2) prod_{k=2}^{m-1} (a_k^2 r^2 - |x|^2) / |x - z|^n
/// with |z| = r and a_m = 1 (m = alphas.size()).
PoleFunction kuran_function(const Rational& r, const RationalPoint& z, const AlphaVector<Rational>& alphas);

/// Harmonic part of a homogeneous polynomial p of degree d:
///   H = sum_j c_j |x|^(2j) Delta^j p,  c_{j+1} = -c_j / (2(j+1)(n + 2d - 2j - 4)).
MultiPoly harmonic_projection(const MultiPoly& homogeneous);

/// sum_j |x|^(2j) h_j for the given harmonic h_0, h_1, ...
MultiPoly almansi_compose(const std::vector<MultiPoly>& harmonics);

/// Random m-polyharmonic polynomial sum_{j<m} |x|^(2j) h_j with harmonic h_j of
/// degree <= `degree`.  The result is certified (Delta^m = 0) before return.
MultiPoly almansi_sample(int m, int n, int degree, std::uint64_t seed);

struct SignRegion {
  std::string label;
  int expected_sign = 1;       // (-1)^(k+1) or (-1)^(m+1)
  std::size_t samples = 0;
  double min_signed_value = 0.0;  // min of expected_sign * u over samples
  std::size_t violations = 0;     // exact sign opposite to expected
  std::size_t undecided = 0;      // no exact sign available
};

struct SignPatternReport {
  std::vector<SignRegion> regions;
  std::size_t boundary_checks = 0;
  std::size_t boundary_failures = 0;  // |x| = a_k r points where u != 0
  bool passed() const;
};

/// Samples each region where the test function has a fixed sign and checks the
/// sign exactly at rational points.  Without a domain the regions are the
/// annuli a_k r < |x| < a_{k+1} r and the shell r < |x| < 2r; with a domain
/// (centered at the origin) they are Omega_{a_k} \ B_{a_k r} and Omega \ B_r.
SignPatternReport sign_pattern_check(const PoleFunction& u, const Rational& r, const AlphaVector<Rational>& alphas,
                                     std::size_t sample_budget, std::uint64_t seed,
                                     const StarDomain* domain = nullptr);

}  // namespace polymv
