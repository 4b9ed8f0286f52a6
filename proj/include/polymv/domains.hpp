#pragma once

// Star-shaped domains given by a positive radial boundary function around a
// center x0:  Omega = { x0 + t*theta : |theta| = 1, 0 <= t < rho(theta) }.

#include "polymv/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polymv {

struct QuadratureSpec;

enum class DomainKind { ball, ellipsoid, bump, table };

class StarDomain {
 public:
  static StarDomain ball(int n, double r, Point center = {});
  static StarDomain ellipsoid(std::vector<double> semi_axes, Point center = {});
  /// rho = r (1 + eps g); g = cos(freq * angle) for n = 2 and the Legendre
  /// polynomial P_freq of the last coordinate of the direction for n >= 3.
  static StarDomain bump(int n, double r, double eps, int freq, Point center = {});
  /// n = 2 only: radii at equally spaced angles 2*pi*i/N, linear in between.
  static StarDomain table(std::vector<double> radii, Point center = {});

  /// One-line text form: "ball r=1", "ellipse a=1 b=1.2", "ellipsoid axes=1,1.2,1.1",
  /// "bump r=1 eps=0.2 freq=4", "table radii=1,1.1,...", optionally "center=x,y".
  static StarDomain parse(std::string_view line, int n);
  std::string describe() const;

  int dim() const { return n_; }
  DomainKind kind() const { return kind_; }
  const Point& center() const { return center_; }
  /// Accumulated dilation factor relative to the constructed shape.
  double scale() const { return scale_; }

  double radial(std::span<const double> unit_direction) const;
  /// n = 2 convenience: direction (cos theta, sin theta).
  double radial_angle(double theta) const;
  bool contains(std::span<const double> x) const;

  /// Omega_lambda(x0) = { x0 + lambda (x - x0) : x in Omega }.
  StarDomain rescaled(double lambda) const;

  /// Largest value of the radial function (exact for the analytic families).
  double max_radial() const;

  // Constructor parameters (before scaling).
  const std::vector<double>& parameters() const { return params_; }
  int frequency() const { return freq_; }

  friend bool operator==(const StarDomain&, const StarDomain&) = default;

 private:
  StarDomain(DomainKind kind, int n, Point center, std::vector<double> params, int freq);
  double base_radial(std::span<const double> unit_direction) const;

  DomainKind kind_;
  int n_;
  Point center_;
  std::vector<double> params_;
  int freq_ = 0;
  double scale_ = 1.0;
};

StarDomain rescale(const StarDomain& domain, double lambda);

struct Inradius {
  double r = 0.0;
  Point nearest;    // boundary point z with |z - x0| = r
  Point direction;  // unit vector from x0 towards z
};

/// dist(x0, boundary) = min over directions of rho.
Inradius inradius(const StarDomain& domain);

struct DiameterEstimate {
  double value = 0.0;
  int resolution = 0;
};

/// Default sampling resolution for diameter estimates in dimension n.
int default_diameter_resolution(int n);

/// Largest pairwise distance among boundary samples.  Nested grids make the
/// estimate non-decreasing when the resolution is doubled.
DiameterEstimate diameter(const StarDomain& domain, int resolution);
DiameterEstimate diameter(const StarDomain& domain);

/// |B_r| = pi^(n/2) r^n / Gamma(n/2 + 1)
double ball_volume(int n, double r);

/// Volume by quadrature of the constant 1.
double volume(const StarDomain& domain, const QuadratureSpec& spec);

bool contains(const StarDomain& domain, std::span<const double> x);

/// Checks B_{a_k r} in Omega_{a_k} in B_{a_{k+1} r} for k = 1..m-1 using the
/// radial function directly (a_m is taken from the alpha list).
bool inclusion_check(const StarDomain& domain, std::span<const double> alphas, double r);

struct GeometryReport {
  double r = 0.0;
  double diameter = 0.0;
  double volume = 0.0;
  Point nearest;
  int diameter_resolution = 0;
  double tolerance = 0.0;
};

GeometryReport geometry(const StarDomain& domain, const QuadratureSpec& spec);

/// Legendre polynomial P_k(t) by the three-term recurrence.
double legendre(int k, double t);

}  // namespace polymv
