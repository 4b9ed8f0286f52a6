#pragma once

#include "polymv/multipoly.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>

namespace polymv {

/// Finite sum  sum_e P_e(x) |x - z|^e  with integer exponents e and a fixed
/// rational pole z.  Terms with equal exponent are merged and zero P_e are
/// dropped, but exponents of the same parity are only combined by
/// normalized(), which produces the canonical form used for equality.
class PoleFunction {
 public:
  using TermMap = std::map<int, MultiPoly>;

  explicit PoleFunction(RationalPoint pole);
  static PoleFunction term(const MultiPoly& p, int exponent, const RationalPoint& pole);
  static PoleFunction from_poly(const MultiPoly& p, const RationalPoint& pole) { return term(p, 0, pole); }

  int dim() const { return static_cast<int>(pole_.size()); }
  const RationalPoint& pole() const { return pole_; }
  const TermMap& terms() const { return terms_; }
  bool has_negative_exponent() const;

  void add_term(const MultiPoly& p, int exponent);

  PoleFunction& operator+=(const PoleFunction& other);
  PoleFunction& operator-=(const PoleFunction& other);
  PoleFunction& operator*=(const MultiPoly& p);
  PoleFunction& operator*=(const Rational& c);
  friend PoleFunction operator+(PoleFunction a, const PoleFunction& b) { return a += b; }
  friend PoleFunction operator-(PoleFunction a, const PoleFunction& b) { return a -= b; }
  friend PoleFunction operator*(PoleFunction a, const MultiPoly& p) { return a *= p; }
  friend PoleFunction operator*(PoleFunction a, const Rational& c) { return a *= c; }

  /// Delta(P rho^a) = (Delta P) rho^a + 2a (grad P . (x-z)) rho^(a-2) + a(a+n-2) P rho^(a-2).
  /// Exponents only move from e to {e, e-2}; no normalization is applied.
  PoleFunction laplacian() const;

  /// Canonical form: per exponent parity, all terms are gathered at the lowest
  /// exponent and then every exact factor |x-z|^2 is divided back out.
  /// At most two terms remain (one per parity); the zero function has none.
  PoleFunction normalized() const;
  bool is_zero() const { return normalized().terms_.empty(); }

  /// Exact value when every exponent is even; nullopt if an odd power of
  /// |x - z| makes the value irrational.  Throws at the pole when needed.
  std::optional<Rational> evaluate_exact(const RationalPoint& x) const;
  /// Exact sign (-1, 0, 1) whenever all exponents share one parity.
  std::optional<int> exact_sign(const RationalPoint& x) const;
  double evaluate(std::span<const double> x) const;

  /// "[e=-2] <poly> ; [e=0] <poly>" in ascending exponent order.
  std::string to_string() const;

  /// Structural equality of the stored representations (use equivalent() for math equality).
  friend bool operator==(const PoleFunction& a, const PoleFunction& b) {
    return a.pole_ == b.pole_ && a.terms_ == b.terms_;
  }

 private:
  RationalPoint pole_;
  TermMap terms_;
};

/// Mathematical equality: the canonical forms coincide.
bool equivalent(const PoleFunction& a, const PoleFunction& b);

PoleFunction laplacian_pole(const PoleFunction& f);

}  // namespace polymv
