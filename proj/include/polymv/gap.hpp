#pragma once

// Mean-value residuals over balls and star-shaped domains, the normalizer
// M_alpha, and lower bounds for the Gauss mean value gap.  All computed gaps
// are lower bounds for the supremum over candidates and alpha tuples.

#include "polymv/coefficients.hpp"
#include "polymv/domains.hpp"
#include "polymv/multipoly.hpp"
#include "polymv/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymv {

/// A test function in absolute coordinates.  `poles` lists the points where it
/// is singular; they become quadrature breakpoints.
struct Candidate {
  std::string id;
  Integrand eval;
  std::vector<Point> poles;
};

class DegenerateCandidate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kuran-type test function for `domain`: pole at the boundary point nearest to
/// the center, r the inradius, alphas(m) with alphas.back() == 1.
Candidate kuran_candidate(const StarDomain& domain, const std::vector<double>& alphas);

/// Same with an explicit radius and pole (absolute coordinates).
Candidate kuran_candidate(const Point& center, double r, const Point& pole, const std::vector<double>& alphas);

Candidate polynomial_candidate(std::string id, const MultiPoly& p);

/// Certified Almansi sample (see almansi_sample), id "almansi(seed)".
Candidate almansi_candidate(int m, int n, int degree, std::uint64_t seed);

/// Mean-value coefficients for floating alphas, computed exactly from the
/// binary values and rounded once.
std::vector<double> float_coefficients(const std::vector<double>& alphas);

/// |u(x0) - sum_k (-1)^(k+1) c_k avg_{B_{a_k r}(x0)} u|, evaluated as one
/// average over B_r(x0) of the dilated combination.
double mvp_residual(const Candidate& u, const Point& x0, double r, const std::vector<double>& alphas,
                    const QuadratureSpec& spec);

/// Integral of g(y) = (-1)^(m+1) c_m u(y) + sum_{k<m} (-1)^(k+1) c_k u(x0 + a_k (y - x0))
/// over the domain; alphas has m entries and alphas.back() is a_m.
QuadratureResult combination_integral(const Candidate& u, const StarDomain& domain,
                                      const std::vector<double>& alphas, const QuadratureSpec& spec);

/// |u(x0) - avg_Omega g|.  Throws if a_{m-1} exceeds the cap r/d.
double domain_mvp_residual(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
                           const QuadratureSpec& spec);

/// avg_Omega |g|.
double m_alpha(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
               const QuadratureSpec& spec);

/// Largest |g| on a fixed interior sample grid (the M_alpha guard scale).
double sampled_sup(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas);

inline constexpr double kGuardFactor = 1e-12;
inline constexpr double kExactBallTolerance = 1e-12;

struct GapReport {
  int m = 0;
  int n = 0;
  std::string domain;
  double r = 0.0;
  double diameter = 0.0;
  double volume = 0.0;
  double outside_volume = 0.0;  // |Omega \ B_r| = |Omega| - |B_r|
  std::vector<double> alphas;
  std::string candidate;
  double u_x0 = 0.0;
  double mean = 0.0;  // avg_Omega g
  double residual = 0.0;
  double m_alpha = 0.0;
  double gap = 0.0;  // lower bound for G_m
  double finiteness_bound = 0.0;
  double vol_ratio = 0.0;
  double bound_factor = 0.0;  // (d/r)^(m^2 - m)
  std::optional<double> stability_ratio;  // empty on an exact ball
  bool exact_ball = false;
  QuadratureSpec spec;
  int quadrature_levels = 0;
  double quadrature_error = 0.0;

  bool within_finiteness_bound(double tol) const { return gap <= finiteness_bound + tol; }
};

/// Domain geometry shared by every gap term on one domain.
struct GapGeometry {
  Inradius inradius;
  double diameter = 0.0;
  double volume = 0.0;
};

GapGeometry gap_geometry(const StarDomain& domain, const QuadratureSpec& spec);

GapReport gap_term(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
                   const QuadratureSpec& spec);
GapReport gap_term(const Candidate& u, const StarDomain& domain, const std::vector<double>& alphas,
                   const QuadratureSpec& spec, const GapGeometry& geometry);

/// Geometric tuples x^(m-k), k = 1..m, for x in {r/(2d), r/(1.5d), r/d}.
std::vector<std::vector<double>> alpha_grid(int m, double r, double d);

struct CandidateSet {
  bool kuran = true;
  std::vector<std::uint64_t> almansi_seeds;
  int almansi_degree = 4;
  std::vector<Candidate> user;
};

/// Largest gap_term over candidates x alpha grid; the Kuran candidate is rebuilt
/// for each tuple.  Degenerate candidates are skipped.  Every evaluated report
/// is appended to `all` when given.
GapReport gm_lower_bound(const StarDomain& domain, int m, const CandidateSet& candidates,
                         const std::vector<std::vector<double>>& grid, const QuadratureSpec& spec,
                         std::vector<GapReport>* all = nullptr);

/// gm_lower_bound with the Kuran candidate over the default grid.  Throws
/// DegenerateCandidate when the gap is not positive on a non-ball domain.
GapReport stability_check(const StarDomain& domain, int m, const QuadratureSpec& spec,
                          std::vector<GapReport>* all = nullptr);

/// (-1)^(k+1) int_{Omega_{a_k} \ B_{a_k r}} u for k = 1..m, with a_m = 1.
std::vector<double> annulus_contributions(const Candidate& u, const StarDomain& domain,
                                          const std::vector<double>& alphas, const QuadratureSpec& spec);

// Serialization.
std::string csv_header();
std::string csv_row(const GapReport& report);
std::string to_json(const GapReport& report);  // one JSON object

}  // namespace polymv
