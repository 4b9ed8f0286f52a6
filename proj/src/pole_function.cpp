#include "polymv/pole_function.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polymv {

namespace {

int floor_mod2(int e) { return ((e % 2) + 2) % 2; }

}  // namespace

PoleFunction::PoleFunction(RationalPoint pole) : pole_(std::move(pole)) {
  if (pole_.empty()) throw std::invalid_argument("pole needs a positive dimension");
}

PoleFunction PoleFunction::term(const MultiPoly& p, int exponent, const RationalPoint& pole) {
  PoleFunction f(pole);
  f.add_term(p, exponent);
  return f;
}

bool PoleFunction::has_negative_exponent() const {
  return !terms_.empty() && terms_.begin()->first < 0;
}

void PoleFunction::add_term(const MultiPoly& p, int exponent) {
  if (p.dim() != dim()) throw std::invalid_argument("term dimension does not match pole");
  if (p.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exponent, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PoleFunction& PoleFunction::operator+=(const PoleFunction& other) {
  if (other.pole_ != pole_) throw std::invalid_argument("pole functions with different poles");
  for (const auto& [e, p] : other.terms_) add_term(p, e);
  return *this;
}

PoleFunction& PoleFunction::operator-=(const PoleFunction& other) {
  if (other.pole_ != pole_) throw std::invalid_argument("pole functions with different poles");
  for (const auto& [e, p] : other.terms_) add_term(-p, e);
  return *this;
}

PoleFunction& PoleFunction::operator*=(const MultiPoly& p) {
  TermMap out;
  for (auto& [e, q] : terms_) {
    MultiPoly prod = q * p;
    if (!prod.is_zero()) out.emplace(e, std::move(prod));
  }
  terms_ = std::move(out);
  return *this;
}

PoleFunction& PoleFunction::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, q] : terms_) q *= c;
  return *this;
}

PoleFunction PoleFunction::laplacian() const {
  const int n = dim();
  PoleFunction out(pole_);
  // (x - z) components as polynomials
  std::vector<MultiPoly> offset;
  for (int i = 0; i < n; ++i) {
    offset.push_back(MultiPoly::variable(n, i) - MultiPoly::constant(n, pole_[static_cast<std::size_t>(i)]));
  }
  for (const auto& [a, p] : terms_) {
    out.add_term(p.laplacian(), a);
    if (a == 0) continue;
    MultiPoly radial(n);
    for (int i = 0; i < n; ++i) radial += p.derivative(i) * offset[static_cast<std::size_t>(i)];
    MultiPoly lower = radial * Rational(2 * a);
    lower += p * Rational(a * (a + n - 2));
    out.add_term(lower, a - 2);
  }
  return out;
}

PoleFunction PoleFunction::normalized() const {
  const MultiPoly rho2 = MultiPoly::distance_squared(pole_);
  PoleFunction out(pole_);
  for (int parity = 0; parity < 2; ++parity) {
    std::optional<int> lowest;
    for (const auto& [e, p] : terms_) {
      if (floor_mod2(e) != parity) continue;
      if (!lowest) lowest = e;
    }
    if (!lowest) continue;
    MultiPoly gathered(dim());
    for (const auto& [e, p] : terms_) {
      if (floor_mod2(e) != parity) continue;
      gathered += p * rho2.pow((e - *lowest) / 2);
    }
    int exponent = *lowest;
    while (!gathered.is_zero()) {
      auto quotient = gathered.divide_exact(rho2);
      if (!quotient) break;
      gathered = std::move(*quotient);
      exponent += 2;
    }
    out.add_term(gathered, exponent);
  }
  return out;
}

std::optional<Rational> PoleFunction::evaluate_exact(const RationalPoint& x) const {
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("evaluation point dimension mismatch");
  RationalPoint diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - pole_[i];
  const Rational rho2 = dot(diff, diff);
  Rational sum = 0;
  for (const auto& [e, p] : terms_) {
    if (floor_mod2(e) != 0) return std::nullopt;
    if (e < 0 && rho2 == 0) throw std::domain_error("evaluation at the pole");
    sum += p.evaluate(x) * polymv::pow(rho2, e / 2);
  }
  return sum;
}

std::optional<int> PoleFunction::exact_sign(const RationalPoint& x) const {
  if (terms_.empty()) return 0;
  const int parity = floor_mod2(terms_.begin()->first);
  for (const auto& [e, p] : terms_) {
    if (floor_mod2(e) != parity) return std::nullopt;
  }
  RationalPoint diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - pole_[i];
  const Rational rho2 = dot(diff, diff);
  if (rho2 == 0 && has_negative_exponent()) throw std::domain_error("evaluation at the pole");
  // Multiplying by the positive factor rho^parity leaves only even powers.
  Rational sum = 0;
  for (const auto& [e, p] : terms_) sum += p.evaluate(x) * polymv::pow(rho2, (e + parity) / 2);
  return sgn(sum);
}

double PoleFunction::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("evaluation point dimension mismatch");
  double rho2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - pole_[i].get_d();
    rho2 += d * d;
  }
  if (rho2 == 0.0 && has_negative_exponent()) throw std::domain_error("evaluation at the pole");
  const double rho = std::sqrt(rho2);
  double sum = 0.0;
  for (const auto& [e, p] : terms_) sum += p.evaluate(x) * std::pow(rho, e);
  return sum;
}

std::string PoleFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, p] : terms_) {
    if (!first) os << " ; ";
    first = false;
    os << "[e=" << e << "] " << p.to_string();
  }
  return os.str();
}

bool equivalent(const PoleFunction& a, const PoleFunction& b) { return (a - b).is_zero(); }

PoleFunction laplacian_pole(const PoleFunction& f) { return f.laplacian(); }

}  // namespace polymv
