#pragma once

#include "polymv/rational.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polymv {

/// Exponent multi-index; entry i is the power of x_{i+1}.
using Exponent = std::vector<int>;

/// Multivariate polynomial in n variables with exact rational coefficients.
/// Terms are kept in lexicographic exponent order (x_1 most significant) and
/// zero coefficients are never stored.
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, Rational>;

  explicit MultiPoly(int n);

  static MultiPoly constant(int n, const Rational& c);
  static MultiPoly variable(int n, int index);
  static MultiPoly monomial(const Exponent& e, const Rational& c);
  /// |x|^2
  static MultiPoly norm_squared(int n);
  /// z . x
  static MultiPoly linear(const RationalPoint& z);
  /// |x - z|^2
  static MultiPoly distance_squared(const RationalPoint& z);

  int dim() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  int degree() const;
  Rational coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const MultiPoly& b) { return a *= b; }
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  MultiPoly operator-() const;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

  MultiPoly pow(int exponent) const;
  MultiPoly derivative(int index) const;
  MultiPoly laplacian() const;
  /// x -> p(x + shift)
  MultiPoly shifted(const RationalPoint& shift) const;

  /// Exact quotient by `divisor` when it divides this polynomial, nullopt otherwise.
  std::optional<MultiPoly> divide_exact(const MultiPoly& divisor) const;

  Rational evaluate(const RationalPoint& x) const;
  double evaluate(std::span<const double> x) const;

  /// Canonical text: "c*x1^a*x2^b + ..." in descending lex order, exact fractions.
  std::string to_string() const;

 private:
  int n_;
  TermMap terms_;
};

MultiPoly laplacian_poly(const MultiPoly& p);

/// Double-precision evaluator with the monomials flattened for repeated calls.
class CompiledPoly {
 public:
  explicit CompiledPoly(const MultiPoly& p);
  double operator()(std::span<const double> x) const;
  int dim() const { return n_; }

 private:
  int n_;
  int max_power_;
  std::vector<int> exponents_;  // term-major, n entries per term
  std::vector<double> coeffs_;
};

}  // namespace polymv
