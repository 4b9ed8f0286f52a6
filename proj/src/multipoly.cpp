#include "polymv/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace polymv {

namespace {

void check_dim(int a, int b) {
  if (a != b) throw std::invalid_argument("polynomial dimension mismatch");
}

}  // namespace

MultiPoly::MultiPoly(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("polynomial dimension must be positive");
}

MultiPoly MultiPoly::constant(int n, const Rational& c) {
  MultiPoly p(n);
  p.add_term(Exponent(static_cast<std::size_t>(n), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int n, int index) {
  if (index < 0 || index >= n) throw std::out_of_range("variable index out of range");
  Exponent e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(index)] = 1;
  return monomial(e, 1);
}

MultiPoly MultiPoly::monomial(const Exponent& e, const Rational& c) {
  MultiPoly p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

MultiPoly MultiPoly::norm_squared(int n) {
  MultiPoly p(n);
  for (int i = 0; i < n; ++i) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 2;
    p.add_term(e, 1);
  }
  return p;
}

MultiPoly MultiPoly::linear(const RationalPoint& z) {
  const int n = static_cast<int>(z.size());
  MultiPoly p(n);
  for (int i = 0; i < n; ++i) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, z[static_cast<std::size_t>(i)]);
  }
  return p;
}

MultiPoly MultiPoly::distance_squared(const RationalPoint& z) {
  const int n = static_cast<int>(z.size());
  MultiPoly p = norm_squared(n);
  p -= linear(z) * Rational(2);
  p += constant(n, dot(z, z));
  return p;
}

int MultiPoly::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int total = 0;
    for (int v : e) total += v;
    deg = std::max(deg, total);
  }
  return deg;
}

Rational MultiPoly::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent length does not match dimension");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check_dim(n_, other.n_);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  check_dim(n_, other.n_);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) {
  check_dim(n_, other.n_);
  MultiPoly out(n_);
  Exponent e(static_cast<std::size_t>(n_));
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly MultiPoly::pow(int exponent) const {
  if (exponent < 0) throw std::invalid_argument("negative polynomial power");
  MultiPoly out = constant(n_, 1);
  MultiPoly base = *this;
  while (exponent > 0) {
    if (exponent & 1) out *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return out;
}

MultiPoly MultiPoly::derivative(int index) const {
  if (index < 0 || index >= n_) throw std::out_of_range("derivative index out of range");
  const auto i = static_cast<std::size_t>(index);
  MultiPoly out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent d = e;
    d[i] -= 1;
    out.add_term(d, c * e[i]);
  }
  return out;
}

MultiPoly MultiPoly::laplacian() const {
  MultiPoly out(n_);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 2) continue;
      Exponent d = e;
      d[i] -= 2;
      out.add_term(d, c * (e[i] * (e[i] - 1)));
    }
  }
  return out;
}

MultiPoly MultiPoly::shifted(const RationalPoint& shift) const {
  if (static_cast<int>(shift.size()) != n_) throw std::invalid_argument("shift dimension mismatch");
  // (x_i + s_i)^k expanded once per variable and power.
  std::vector<std::vector<MultiPoly>> powers(static_cast<std::size_t>(n_));
  const int deg = std::max(degree(), 0);
  for (int i = 0; i < n_; ++i) {
    auto& row = powers[static_cast<std::size_t>(i)];
    row.push_back(constant(n_, 1));
    const MultiPoly lin = variable(n_, i) + constant(n_, shift[static_cast<std::size_t>(i)]);
    for (int k = 1; k <= deg; ++k) row.push_back(row.back() * lin);
  }
  MultiPoly out(n_);
  for (const auto& [e, c] : terms_) {
    MultiPoly term = constant(n_, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) term *= powers[i][static_cast<std::size_t>(e[i])];
    }
    out += term;
  }
  return out;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& divisor) const {
  check_dim(n_, divisor.n_);
  if (divisor.is_zero()) throw std::domain_error("division by the zero polynomial");
  // Single divisor: the division remainder vanishes iff the divisor divides.
  // Leading terms are the lexicographic maxima, i.e. the last map entries.
  const auto& [lead_e, lead_c] = *divisor.terms_.rbegin();
  MultiPoly rest = *this;
  MultiPoly quotient(n_);
  Exponent q_e(static_cast<std::size_t>(n_));
  while (!rest.is_zero()) {
    const auto [top_e, top_c] = *rest.terms_.rbegin();
    for (std::size_t i = 0; i < q_e.size(); ++i) {
      q_e[i] = top_e[i] - lead_e[i];
      if (q_e[i] < 0) return std::nullopt;
    }
    const Rational q_c = top_c / lead_c;
    quotient.add_term(q_e, q_c);
    for (const auto& [de, dc] : divisor.terms_) {
      Exponent e(static_cast<std::size_t>(n_));
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = de[i] + q_e[i];
      rest.add_term(e, -q_c * dc);
    }
  }
  return quotient;
}

Rational MultiPoly::evaluate(const RationalPoint& x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("evaluation point dimension mismatch");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) term *= polymv::pow(x[i], e[i]);
    }
    sum += term;
  }
  return sum;
}

double MultiPoly::evaluate(std::span<const double> x) const {
  return CompiledPoly(*this)(x);
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*x" << (i + 1);
      if (e[i] > 1) os << '^' << e[i];
    }
  }
  return os.str();
}

MultiPoly laplacian_poly(const MultiPoly& p) { return p.laplacian(); }

CompiledPoly::CompiledPoly(const MultiPoly& p) : n_(p.dim()), max_power_(0) {
  for (const auto& [e, c] : p.terms()) {
    for (int v : e) {
      exponents_.push_back(v);
      max_power_ = std::max(max_power_, v);
    }
    coeffs_.push_back(c.get_d());
  }
}

double CompiledPoly::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("evaluation point dimension mismatch");
  const auto stride = static_cast<std::size_t>(max_power_ + 1);
  // Small fixed buffer covers every practical case without heap traffic.
  double stack_buf[256];
  std::vector<double> heap_buf;
  double* powers = stack_buf;
  const std::size_t needed = stride * static_cast<std::size_t>(n_);
  if (needed > 256) {
    heap_buf.resize(needed);
    powers = heap_buf.data();
  }
  for (int i = 0; i < n_; ++i) {
    double* row = powers + static_cast<std::size_t>(i) * stride;
    row[0] = 1.0;
    for (std::size_t k = 1; k < stride; ++k) row[k] = row[k - 1] * x[static_cast<std::size_t>(i)];
  }
  double sum = 0.0;
  const auto n = static_cast<std::size_t>(n_);
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double term = coeffs_[t];
    const int* e = exponents_.data() + t * n;
    for (std::size_t i = 0; i < n; ++i) term *= powers[i * stride + static_cast<std::size_t>(e[i])];
    sum += term;
  }
  return sum;
}

}  // namespace polymv
