#pragma once

// Mean-value coefficients for m-polyharmonic functions.
//
// For radii 0 < a_1 < ... < a_m <= 1 the solid mean value formula reads
//
//   u(x0) = sum_k (-1)^(k+1) c_k  avg_{B(x0, a_k r)} u,
//
// with c_k = v_{k,1} / det V, where V = [a_i^(2j)] (i = 1..m, j = 0..m-1) and
// v_{k,1} is the minor of V with row k and the first column removed.
//
// Every routine is templated on the scalar: Rational gives exact results,
// double gives the float path (machine epsilon 2^-52).

#include "polymv/rational.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace polymv {

enum class ArithmeticMode { exact, floating };

template <class T>
inline constexpr bool is_exact_scalar_v = std::is_same_v<T, Rational>;

template <class T>
constexpr ArithmeticMode arithmetic_mode_of() {
  return is_exact_scalar_v<T> ? ArithmeticMode::exact : ArithmeticMode::floating;
}

namespace detail {

template <class T>
T ipow(const T& base, int exponent) {
  if constexpr (is_exact_scalar_v<T>) {
    return polymv::pow(base, exponent);
  } else {
    T out = 1;
    T b = base;
    int e = exponent < 0 ? -exponent : exponent;
    while (e > 0) {
      if (e & 1) out *= b;
      b *= b;
      e >>= 1;
    }
    return exponent < 0 ? T(1) / out : out;
  }
}

template <class T>
std::string scalar_string(const T& v) {
  if constexpr (is_exact_scalar_v<T>) {
    return to_string(v);
  } else {
    return format_double(static_cast<double>(v));
  }
}

}  // namespace detail

/// Strictly increasing radii 0 < a_1 < ... < a_m <= 1, m >= 2.
/// The optional cap bounds a_{m-1} (the r/d constraint of the domain version).
template <class T>
class AlphaVector {
 public:
  explicit AlphaVector(std::vector<T> values, std::optional<T> cap = std::nullopt)
      : values_(std::move(values)), cap_(std::move(cap)) {
    if (values_.size() < 2) throw std::invalid_argument("alpha vector needs m >= 2 entries");
    if (!(values_.front() > 0)) throw std::invalid_argument("alpha_1 must be positive");
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (!(values_[i - 1] < values_[i])) {
        throw std::invalid_argument("alphas must be strictly increasing (entry " + std::to_string(i + 1) +
                                    " = " + detail::scalar_string(values_[i]) + ")");
      }
    }
    if (values_.back() > 1) throw std::invalid_argument("alpha_m must not exceed 1");
    if (cap_ && values_[values_.size() - 2] > *cap_) {
      throw std::invalid_argument("alpha_{m-1} = " + detail::scalar_string(values_[values_.size() - 2]) +
                                  " exceeds the cap " + detail::scalar_string(*cap_));
    }
  }

  std::size_t size() const { return values_.size(); }
  const T& operator[](std::size_t i) const { return values_[i]; }
  std::span<const T> values() const { return values_; }
  const std::optional<T>& cap() const { return cap_; }
  bool ends_at_one() const { return values_.back() == T(1); }

  friend bool operator==(const AlphaVector& a, const AlphaVector& b) { return a.values_ == b.values_; }

 private:
  std::vector<T> values_;
  std::optional<T> cap_;
};

template <class T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}
  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

template <class T>
struct CoefficientSet {
  std::vector<T> c;
  ArithmeticMode mode = arithmetic_mode_of<T>();

  std::size_t size() const { return c.size(); }

  /// sum_k (-1)^(k+1) c_k; equals 1 for every valid alpha vector.
  T alternating_sum() const {
    T sum = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k % 2 == 0) sum += c[k];
      else sum -= c[k];
    }
    return sum;
  }

  /// (-1)^(k+1) c_k with k 1-based, i.e. the weight multiplying the k-th average.
  T signed_weight(std::size_t k0) const { return k0 % 2 == 0 ? c[k0] : T(-c[k0]); }
};

/// Entry (i, j) is alpha_i^(2j), both 0-based here.
template <class T>
Matrix<T> build_vandermonde(const AlphaVector<T>& alphas) {
  const std::size_t m = alphas.size();
  Matrix<T> v(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const T sq = alphas[i] * alphas[i];
    T entry = 1;
    for (std::size_t j = 0; j < m; ++j) {
      v(i, j) = entry;
      entry *= sq;
    }
  }
  return v;
}

/// Fraction-free (Bareiss) elimination in exact mode; partial pivoting LU for floats.
template <class T>
T determinant(Matrix<T> a) {
  if (a.rows != a.cols) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = a.rows;
  if (n == 0) return T(1);
  if constexpr (is_exact_scalar_v<T>) {
    T sign = 1;
    T prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (a(k, k) == 0) {
        std::size_t swap_row = k + 1;
        while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
        if (swap_row == n) return T(0);
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap_row, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          T value = a(i, j) * a(k, k) - a(i, k) * a(k, j);
          a(i, j) = value / prev;
        }
        a(i, k) = 0;
      }
      prev = a(k, k);
    }
    return T(sign * a(n - 1, n - 1));
  } else {
    T det = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t pivot = k;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
      }
      if (a(pivot, k) == T(0)) return T(0);
      if (pivot != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
        det = -det;
      }
      det *= a(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T factor = a(i, k) / a(k, k);
        for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
      }
    }
    return det;
  }
}

/// Product over i < j of (alpha_j^2 - alpha_i^2).
template <class T>
T det_vandermonde_closed(const AlphaVector<T>& alphas) {
  T det = 1;
  for (std::size_t j = 1; j < alphas.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) det *= alphas[j] * alphas[j] - alphas[i] * alphas[i];
  }
  return det;
}

/// Minor of V with row k (1-based) and the first column removed.
template <class T>
T minor_v_k1(const AlphaVector<T>& alphas, std::size_t k) {
  const std::size_t m = alphas.size();
  if (k < 1 || k > m) throw std::out_of_range("minor index k=" + std::to_string(k) + " outside 1.." + std::to_string(m));
  const Matrix<T> v = build_vandermonde(alphas);
  Matrix<T> sub(m - 1, m - 1);
  std::size_t row = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == k - 1) continue;
    for (std::size_t j = 1; j < m; ++j) sub(row, j - 1) = v(i, j);
    ++row;
  }
  return determinant(std::move(sub));
}

/// c_k = v_{k,1} / det V, with det V from elimination (the closed form is a cross-check).
template <class T>
CoefficientSet<T> coefficients(const AlphaVector<T>& alphas) {
  const T det = determinant(build_vandermonde(alphas));
  CoefficientSet<T> out;
  out.c.reserve(alphas.size());
  for (std::size_t k = 1; k <= alphas.size(); ++k) out.c.push_back(T(minor_v_k1(alphas, k) / det));
  return out;
}

/// The m = 2 closed form (1/(1-a^2), a^2/(1-a^2)).
template <class T>
std::pair<T, T> biharmonic_coefficients(const T& alpha) {
  if (!(alpha > 0) || !(alpha < 1)) throw std::invalid_argument("biharmonic alpha must lie in (0,1)");
  const T sq = alpha * alpha;
  const T denom = T(1) - sq;
  return {T(T(1) / denom), T(sq / denom)};
}

/// alpha_k = x^(m-k) with x = r / (2 d), alpha_m = 1.
template <class T>
AlphaVector<T> geometric_alphas(int m, const T& r, const T& d) {
  if (m < 2) throw std::invalid_argument("geometric alphas need m >= 2");
  if (!(r > 0)) throw std::invalid_argument("inradius must be positive");
  if (T(2) * r > d) throw std::invalid_argument("geometric alphas need 2r <= d");
  const T x = r / (T(2) * d);
  std::vector<T> values;
  values.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) values.push_back(detail::ipow(x, m - k));
  return AlphaVector<T>(std::move(values));
}

/// Geometric tuple (x^(m-1), ..., x, 1) for an arbitrary ratio x in (0,1).
template <class T>
AlphaVector<T> geometric_tuple(int m, const T& x) {
  if (m < 2) throw std::invalid_argument("geometric tuple needs m >= 2");
  if (!(x > 0) || !(x < 1)) throw std::invalid_argument("geometric ratio must lie in (0,1)");
  std::vector<T> values;
  for (int k = 1; k <= m; ++k) values.push_back(detail::ipow(x, m - k));
  return AlphaVector<T>(std::move(values));
}

/// Closed form for the geometric tuple:
///   c_k = x^(k^2-k) / ( prod_{i<k} (1 - x^(2(k-i))) * prod_{j>k} (1 - x^(2(j-k))) ).
template <class T>
CoefficientSet<T> geometric_coefficients(int m, const T& x) {
  if (m < 2) throw std::invalid_argument("geometric coefficients need m >= 2");
  if (!(x > 0) || !(x < 1)) throw std::invalid_argument("geometric ratio must lie in (0,1)");
  CoefficientSet<T> out;
  for (int k = 1; k <= m; ++k) {
    T denom = 1;
    for (int i = 1; i < k; ++i) denom *= T(1) - detail::ipow(x, 2 * (k - i));
    for (int j = k + 1; j <= m; ++j) denom *= T(1) - detail::ipow(x, 2 * (j - k));
    out.c.push_back(T(detail::ipow(x, k * k - k) / denom));
  }
  return out;
}

/// Upper bound x^(k^2-k) / (1-x^2)^(m-1) on the k-th geometric coefficient (1-based k).
template <class T>
T geometric_coefficient_bound(int m, const T& x, int k) {
  return detail::ipow(x, k * k - k) / detail::ipow(T(T(1) - x * x), m - 1);
}

/// True iff every c_k for x = r/(2d) obeys c_k <= 2^(m-1) (r/d)^(k^2-k).
template <class T>
bool coefficient_bound_check(int m, const T& r, const T& d) {
  if (T(2) * r > d) throw std::invalid_argument("coefficient bound needs 2r <= d");
  const T x = r / (T(2) * d);
  const auto coeffs = geometric_coefficients(m, x);
  const T ratio = r / d;
  for (int k = 1; k <= m; ++k) {
    const T bound = detail::ipow(T(2), m - 1) * detail::ipow(ratio, k * k - k);
    if (coeffs.c[static_cast<std::size_t>(k - 1)] > bound) return false;
  }
  return true;
}

/// Exponent 3m + k^2 - 6k - 1 that appears when the stability estimate collapses
/// the sum over k; it is non-negative for 1 <= k <= m-1.
constexpr int stability_collapse_exponent(int m, int k) { return 3 * m + k * k - 6 * k - 1; }

}  // namespace polymv
