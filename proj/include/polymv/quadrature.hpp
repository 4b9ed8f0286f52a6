#pragma once

// Deterministic integration over star-shaped domains in polar form:
//
//   int_Omega f = int_{S^{n-1}} int_0^{rho(theta)} f(x0 + t theta) t^(n-1) dt dtheta.
//
// n = 2 and n = 3 use nested globally adaptive Gauss-Kronrod (7/15) rules;
// n >= 4 uses seeded Monte Carlo directions with an adaptive radial rule and
// reports a statistical error only.  Every rule has interior nodes, so an
// integrable pole on the boundary is never evaluated.  Optional singular
// points become breakpoints: the angular direction of each point and its
// projection onto every ray.

#include "polymv/domains.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polymv {

struct QuadratureSpec {
  int radial_panels = 2;    // initial radial panels per ray
  int angular_cells = 16;   // initial angular panels (n = 2: in theta; n = 3: in azimuth)
  double tolerance = 1e-10; // relative to int |f|
  int max_refinements = 3;  // resolution doublings after the base level
  int max_intervals = 2000; // per adaptive 1-D integral
  std::size_t mc_samples = 4096;
  std::uint64_t seed = 1;

  /// Same rule with every resolution parameter doubled.
  QuadratureSpec doubled() const;
  /// "radial_panels=2;angular_cells=16;tol=1e-10;..." (';' keeps it CSV safe).
  std::string to_string() const;
  static QuadratureSpec parse(std::string_view text);

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_value = 0.0;  // int |f|, the scale for every tolerance
  double error = 0.0;      // |last - previous| (Monte Carlo: standard error)
  double previous = 0.0;
  int levels = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult result)
      : std::runtime_error(what), result_(result) {}
  const QuadratureResult& result() const { return result_; }

 private:
  QuadratureResult result_;
};

using Integrand = std::function<double(std::span<const double>)>;

/// Refines until two successive levels differ by less than tolerance * int|f|.
/// Throws QuadratureError with both estimates after max_refinements.
QuadratureResult integrate(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                           std::span<const Point> singular_points = {});

/// integrate(f) / integrate(1); same error policy.
double average(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
               std::span<const Point> singular_points = {});

/// One pass at a fixed resolution level (no refinement loop); exposed for tests.
QuadratureResult integrate_level(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                                 std::span<const Point> singular_points, double rel_tol);

/// Surface area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

/// Running compensated (Kahan-Babuska) sum in a fixed order.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace polymv
