#include "polymv/quadrature.hpp"

#include "polymv/random.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace polymv {

namespace {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Integral of f together with the integral of |f|.
struct Accum {
  double v = 0.0;
  double a = 0.0;
};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  double v = 0.0;
  double a = 0.0;
  double err = 0.0;
};

struct AdaptiveResult {
  double v = 0.0;
  double a = 0.0;
  double err = 0.0;
  bool converged = false;
};

template <class F>
Segment gauss_kronrod(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const Accum fc = f(center);
  double resk = kWgk[7] * fc.v;
  double resg = kWg[3] * fc.v;
  double resabs = kWgk[7] * fc.a;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Accum f1 = f(center - dx);
    const Accum f2 = f(center + dx);
    resk += kWgk[j] * (f1.v + f2.v);
    resabs += kWgk[j] * (f1.a + f2.a);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1.v + f2.v);
  }
  return {lo, hi, resk * half, resabs * half, std::abs((resk - resg) * half)};
}

// Globally adaptive bisection over the panels delimited by `breaks` (sorted).
// Stops once the summed error estimate drops below rel_tol * int|f|.
template <class F>
AdaptiveResult adaptive(F&& f, const std::vector<double>& breaks, double rel_tol, int max_intervals) {
  auto worse = [](const Segment& x, const Segment& y) {
    if (x.err != y.err) return x.err < y.err;
    return x.lo > y.lo;  // deterministic tie-break
  };
  std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> heap(worse);
  std::vector<Segment> frozen;
  double total_err = 0.0;
  double total_abs = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Segment s = gauss_kronrod(f, breaks[i], breaks[i + 1]);
    total_err += s.err;
    total_abs += s.a;
    heap.push(s);
    ++count;
  }
  bool converged = false;
  while (true) {
    if (total_err <= rel_tol * total_abs) {
      converged = true;
      break;
    }
    if (heap.empty() || count >= max_intervals) break;
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (!(mid > worst.lo) || !(mid < worst.hi) || worst.hi - worst.lo <= 1e-12 * scale) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.lo, mid);
    const Segment right = gauss_kronrod(f, mid, worst.hi);
    total_err += left.err + right.err - worst.err;
    total_abs += left.a + right.a - worst.a;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  std::vector<Segment> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  CompensatedSum v, a, e;
  for (const auto& s : all) {
    v.add(s.v);
    a.add(s.a);
    e.add(s.err);
  }
  return {v.value(), a.value(), e.value(), converged};
}

std::vector<double> uniform_breaks(double lo, double hi, int panels) {
  std::vector<double> out;
  panels = std::max(panels, 1);
  for (int i = 0; i <= panels; ++i) out.push_back(lo + (hi - lo) * i / panels);
  out.back() = hi;
  return out;
}

void insert_break(std::vector<double>& breaks, double x) {
  if (!(x > breaks.front()) || !(x < breaks.back())) return;
  breaks.push_back(x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
}

struct RayIntegrator {
  const Integrand& f;
  const StarDomain& domain;
  std::span<const Point> singular;
  int panels;
  double rel_tol;
  int max_intervals;
  mutable Point x;

  Accum operator()(std::span<const double> dir) const {
    const int n = domain.dim();
    const double reach = domain.radial(dir);
    const auto& x0 = domain.center();
    auto breaks = uniform_breaks(0.0, reach, panels);
    for (const auto& s : singular) {
      double proj = 0.0;
      for (std::size_t i = 0; i < dir.size(); ++i) proj += (s[i] - x0[i]) * dir[i];
      insert_break(breaks, proj);
    }
    x.resize(dir.size());
    auto radial = [&](double t) {
      for (std::size_t i = 0; i < dir.size(); ++i) x[i] = x0[i] + t * dir[i];
      const double v = f(x) * std::pow(t, n - 1);
      return Accum{v, std::abs(v)};
    };
    const auto r = adaptive(radial, breaks, rel_tol, max_intervals);
    return {r.v, r.a};
  }
};

// Orthonormal frame whose last vector points at `axis`.
std::vector<Point> frame_towards(const Point& axis) {
  const std::size_t n = axis.size();
  std::vector<Point> basis;
  basis.push_back(axis);
  for (std::size_t k = 0; k < n && basis.size() < n; ++k) {
    Point e(n, 0.0);
    e[k] = 1.0;
    for (const auto& b : basis) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += e[i] * b[i];
      for (std::size_t i = 0; i < n; ++i) e[i] -= proj * b[i];
    }
    double norm = 0.0;
    for (double v : e) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (auto& v : e) v /= norm;
    basis.push_back(e);
  }
  // reorder: the two complementary vectors first, axis last
  return {basis[1], basis[2], basis[0]};
}

Point unit_towards(const Point& from, const Point& to) {
  Point d(from.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = to[i] - from[i];
    norm += d[i] * d[i];
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) return {};
  for (auto& v : d) v /= norm;
  return d;
}

QuadratureResult integrate_2d(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                              std::span<const Point> singular, double rel_tol) {
  const auto& x0 = domain.center();
  std::vector<double> directions;
  for (const auto& s : singular) {
    const Point d = unit_towards(x0, s);
    if (!d.empty()) directions.push_back(std::atan2(d[1], d[0]));
  }
  const double start = directions.empty() ? 0.0 : directions.front();
  auto breaks = uniform_breaks(start, start + 2.0 * M_PI, spec.angular_cells);
  for (double theta : directions) {
    double shifted = theta;
    while (shifted <= start) shifted += 2.0 * M_PI;
    while (shifted >= start + 2.0 * M_PI) shifted -= 2.0 * M_PI;
    insert_break(breaks, shifted);
  }
  RayIntegrator ray{f, domain, singular, spec.radial_panels, 0.1 * rel_tol, spec.max_intervals, {}};
  double dir[2];
  auto outer = [&](double theta) {
    dir[0] = std::cos(theta);
    dir[1] = std::sin(theta);
    return ray(dir);
  };
  const auto r = adaptive(outer, breaks, rel_tol, spec.max_intervals);
  QuadratureResult out;
  out.value = r.v;
  out.abs_value = r.a;
  out.error = r.err;
  out.converged = r.converged;
  return out;
}

QuadratureResult integrate_3d(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                              std::span<const Point> singular, double rel_tol) {
  const auto& x0 = domain.center();
  Point axis = {0.0, 0.0, 1.0};
  if (!singular.empty()) {
    if (auto d = unit_towards(x0, singular.front()); !d.empty()) axis = d;
  }
  const auto frame = frame_towards(axis);
  RayIntegrator ray{f, domain, singular, spec.radial_panels, 0.01 * rel_tol, spec.max_intervals, {}};
  double dir[3];
  auto azimuthal = [&](double psi) {
    const double sp = std::sin(psi);
    const double cp = std::cos(psi);
    auto inner = [&](double phi) {
      const double a = sp * std::cos(phi);
      const double b = sp * std::sin(phi);
      for (int i = 0; i < 3; ++i) dir[i] = a * frame[0][i] + b * frame[1][i] + cp * frame[2][i];
      return ray(dir);
    };
    const auto r = adaptive(inner, uniform_breaks(0.0, 2.0 * M_PI, std::max(1, spec.angular_cells / 4)), 0.1 * rel_tol,
                            spec.max_intervals);
    return Accum{r.v * sp, r.a * sp};
  };
  const auto r = adaptive(azimuthal, uniform_breaks(0.0, M_PI, std::max(1, spec.angular_cells / 8)), rel_tol,
                          spec.max_intervals);
  QuadratureResult out;
  out.value = r.v;
  out.abs_value = r.a;
  out.error = r.err;
  out.converged = r.converged;
  return out;
}

QuadratureResult integrate_monte_carlo(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                                       std::span<const Point> singular, double rel_tol) {
  const int n = domain.dim();
  RayIntegrator ray{f, domain, singular, spec.radial_panels, 0.1 * rel_tol, spec.max_intervals, {}};
  Rng rng(spec.seed);
  CompensatedSum sum, sum_sq, sum_abs;
  Point dir(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < spec.mc_samples; ++s) {
    double norm = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : dir) v /= norm;
    const Accum a = ray(dir);
    sum.add(a.v);
    sum_sq.add(a.v * a.v);
    sum_abs.add(a.a);
  }
  const double count = static_cast<double>(spec.mc_samples);
  const double area = unit_sphere_area(n);
  const double mean = sum.value() / count;
  const double var = std::max(0.0, sum_sq.value() / count - mean * mean);
  QuadratureResult out;
  out.value = area * mean;
  out.abs_value = area * sum_abs.value() / count;
  out.error = area * std::sqrt(var / count);
  out.converged = true;
  return out;
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
  else comp_ += (x - t) + sum_;
  sum_ = t;
}

double unit_sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec out = *this;
  out.radial_panels *= 2;
  out.angular_cells *= 2;
  out.mc_samples *= 2;
  return out;
}

std::string QuadratureSpec::to_string() const {
  std::ostringstream os;
  os << "radial_panels=" << radial_panels << ";angular_cells=" << angular_cells << ";tol=" << format_double(tolerance)
     << ";max_refine=" << max_refinements << ";max_intervals=" << max_intervals << ";mc_samples=" << mc_samples
     << ";seed=" << seed;
  return os.str();
}

QuadratureSpec QuadratureSpec::parse(std::string_view text) {
  QuadratureSpec spec;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find_first_of(";, ", start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("quadrature field needs key=value: " + std::string(item));
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    if (key == "radial_panels") spec.radial_panels = std::stoi(value);
    else if (key == "angular_cells") spec.angular_cells = std::stoi(value);
    else if (key == "tol") spec.tolerance = std::stod(value);
    else if (key == "max_refine") spec.max_refinements = std::stoi(value);
    else if (key == "max_intervals") spec.max_intervals = std::stoi(value);
    else if (key == "mc_samples") spec.mc_samples = std::stoul(value);
    else if (key == "seed") spec.seed = std::stoull(value);
    else throw std::invalid_argument("unknown quadrature field '" + key + "'");
  }
  if (spec.radial_panels < 1 || spec.angular_cells < 1 || !(spec.tolerance > 0.0) || spec.max_refinements < 1) {
    throw std::invalid_argument("invalid quadrature spec");
  }
  return spec;
}

QuadratureResult integrate_level(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                                 std::span<const Point> singular_points, double rel_tol) {
  switch (domain.dim()) {
    case 1:
      throw std::invalid_argument("quadrature needs n >= 2");
    case 2:
      return integrate_2d(f, domain, spec, singular_points, rel_tol);
    case 3:
      return integrate_3d(f, domain, spec, singular_points, rel_tol);
    default:
      return integrate_monte_carlo(f, domain, spec, singular_points, rel_tol);
  }
}

QuadratureResult integrate(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
                           std::span<const Point> singular_points) {
  QuadratureSpec level_spec = spec;
  double level_tol = 0.1 * spec.tolerance;
  QuadratureResult prev = integrate_level(f, domain, level_spec, singular_points, level_tol);
  const bool monte_carlo = domain.dim() >= 4;
  for (int level = 1; level <= spec.max_refinements; ++level) {
    level_spec = level_spec.doubled();
    level_tol *= 0.5;
    QuadratureResult cur = integrate_level(f, domain, level_spec, singular_points, level_tol);
    const double diff = std::abs(cur.value - prev.value);
    double bound = spec.tolerance * cur.abs_value;
    if (monte_carlo) bound = std::max(bound, 3.0 * std::hypot(cur.error, prev.error));
    cur.previous = prev.value;
    cur.levels = level + 1;
    if (!monte_carlo) cur.error = diff;
    if (diff <= bound) {
      cur.converged = true;
      return cur;
    }
    prev = cur;
  }
  std::ostringstream os;
  os.precision(17);
  os << "quadrature did not converge after " << spec.max_refinements << " refinements: last=" << prev.value
     << " previous=" << prev.previous << " scale=" << prev.abs_value;
  prev.converged = false;
  throw QuadratureError(os.str(), prev);
}

double average(const Integrand& f, const StarDomain& domain, const QuadratureSpec& spec,
               std::span<const Point> singular_points) {
  const auto num = integrate(f, domain, spec, singular_points);
  const auto den = integrate([](std::span<const double>) { return 1.0; }, domain, spec);
  return num.value / den.value;
}

}  // namespace polymv
