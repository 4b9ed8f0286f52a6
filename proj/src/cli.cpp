#include "polymv/cli.hpp"

#include "polymv/coefficients.hpp"
#include "polymv/random.hpp"
#include "polymv/rational.hpp"
#include "polymv/symbolic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace polymv {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
std::string join(const std::vector<T>& values, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << sep;
    if constexpr (std::is_same_v<T, double>) os << format_double(values[i]);
    else if constexpr (std::is_same_v<T, Rational>) os << to_string(values[i]);
    else os << values[i];
  }
  return os.str();
}

std::string fraction_line(const Rational& q) { return to_string(q) + " = " + format_decimal17(to_double(q)); }

void write_json_array(const std::string& path, const std::vector<GapReport>& reports) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  file << "[";
  for (std::size_t i = 0; i < reports.size(); ++i) file << (i ? ",\n" : "\n") << to_json(reports[i]);
  file << "\n]\n";
}

QuadratureSpec make_spec(const std::string& text, double tol, std::uint64_t seed) {
  QuadratureSpec spec = text.empty() ? QuadratureSpec{} : QuadratureSpec::parse(text);
  spec.tolerance = tol;
  spec.seed = seed;
  return spec;
}

// ---- coeffs ----------------------------------------------------------------

struct CoeffsArgs {
  std::optional<int> m;
  std::string alphas;
  std::vector<std::string> geometric;
  bool csv = false;
};

int cmd_coeffs(const CoeffsArgs& a, std::ostream& out) {
  if (a.alphas.empty() == a.geometric.empty()) throw UsageError("give exactly one of --alphas or --geometric");
  std::optional<AlphaVector<Rational>> alphas;
  RunConfig config;
  config.subcommand = "coeffs";
  if (!a.alphas.empty()) {
    auto values = parse_rational_list(a.alphas);
    if (a.m && *a.m != static_cast<int>(values.size())) {
      throw UsageError("-m " + std::to_string(*a.m) + " but " + std::to_string(values.size()) + " alphas given");
    }
    alphas.emplace(std::move(values));
    config.fields["alphas"] = a.alphas;
  } else {
    if (!a.m) throw UsageError("--geometric needs -m");
    alphas.emplace(geometric_alphas<Rational>(*a.m, parse_rational(a.geometric[0]), parse_rational(a.geometric[1])));
    config.fields["geometric"] = a.geometric[0] + "," + a.geometric[1];
  }
  const int m = static_cast<int>(alphas->size());
  config.fields["m"] = std::to_string(m);
  const auto c = coefficients(*alphas);
  const Rational sum = c.alternating_sum();
  const bool positive = std::all_of(c.c.begin(), c.c.end(), [](const Rational& v) { return v > 0; });

  out << reproducibility_header(config);
  if (a.csv) {
    out << "k,alpha,c\n";
    for (int k = 0; k < m; ++k) {
      out << k + 1 << ',' << format_decimal17(to_double((*alphas)[k])) << ','
          << format_decimal17(to_double(c.c[static_cast<std::size_t>(k)])) << '\n';
    }
  } else {
    out << "m = " << m << '\n';
    out << "alphas = " << join(std::vector<Rational>(alphas->values().begin(), alphas->values().end()), ", ") << '\n';
    out << "det V = " << fraction_line(determinant(build_vandermonde(*alphas))) << '\n';
    for (int k = 0; k < m; ++k) out << "c_" << k + 1 << " = " << fraction_line(c.c[static_cast<std::size_t>(k)]) << '\n';
  }
  out << "# alternating sum = " << to_string(sum) << (sum == 1 ? " [exact]" : " [MISMATCH]") << '\n';
  if (!positive) out << "# non-positive coefficient\n";
  return sum == 1 && positive ? kExitOk : kExitCertificate;
}

// ---- kelvin ----------------------------------------------------------------

struct KelvinArgs {
  int m = 2;
  int n = 2;
  std::string z;
  std::string lambdas;
  bool self_test = false;
};

int cmd_kelvin(const KelvinArgs& a, std::ostream& out) {
  if (a.m < 2) throw UsageError("kelvin needs m >= 2");
  if (a.n < 2) throw UsageError("kelvin needs n >= 2");
  RationalPoint z(static_cast<std::size_t>(a.n), Rational(0));
  if (a.z.empty()) z[0] = 1;
  else z = parse_rational_list(a.z);
  if (static_cast<int>(z.size()) != a.n) throw UsageError("--z must have n entries");
  std::vector<Rational> lambdas;
  if (a.lambdas.empty()) {
    for (int k = 1; k < a.m; ++k) lambdas.emplace_back(1, k + 1);
  } else {
    lambdas = parse_rational_list(a.lambdas);
  }
  if (static_cast<int>(lambdas.size()) != a.m - 1) throw UsageError("--lambdas must have m-1 entries");

  RunConfig config;
  config.subcommand = "kelvin";
  config.fields["m"] = std::to_string(a.m);
  config.fields["n"] = std::to_string(a.n);
  config.fields["z"] = join(z);
  config.fields["lambdas"] = join(lambdas);
  config.fields["self_test"] = a.self_test ? "1" : "0";
  out << reproducibility_header(config);

  MultiPoly h = build_h(z, lambdas);
  out << "h: degree " << h.degree() << ", " << h.term_count() << " terms\n";
  if (a.self_test) {
    const auto& [e, c] = *h.terms().begin();
    h.add_term(e, Rational(1));
    out << "self-test: coefficient of the first monomial changed by +1\n";
  }
  const PoleFunction kh = kelvin_transform(h, z, a.m);
  const PoleFunction closed = kelvin_closed_form(z, lambdas);
  const bool equal = kh == closed;
  out << "K(h) == closed form: " << (equal ? "PASS" : "FAIL") << '\n';
  if (!equal) out << "  difference: " << (kh - closed).normalized().to_string() << '\n';
  const bool harmonic = is_polyharmonic(kh, a.m);
  out << "Delta^" << a.m << " K(h) == 0: " << (harmonic ? "PASS" : "FAIL") << '\n';
  return equal && harmonic ? kExitOk : kExitCertificate;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  int m = 2;
  int n = 2;
  int samples = 20;
  int tuples = 3;
  int degree = 4;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;
  double quad_tol = 1e-10;
  std::string quad;
};

std::vector<double> random_alphas(Rng& rng, int m) {
  while (true) {
    std::vector<double> a;
    for (int k = 0; k < m; ++k) a.push_back(rng.uniform(0.1, 1.0));
    std::sort(a.begin(), a.end());
    bool spaced = true;
    for (int k = 1; k < m; ++k) spaced = spaced && a[static_cast<std::size_t>(k)] - a[static_cast<std::size_t>(k - 1)] > 0.05;
    if (spaced) return a;
  }
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.m < 2) throw UsageError("verify needs m >= 2");
  if (a.n < 2) throw UsageError("verify needs n >= 2");
  if (a.samples < 1 || a.tuples < 1) throw UsageError("samples and tuples must be positive");
  const QuadratureSpec spec = make_spec(a.quad, a.quad_tol, a.seed);
  RunConfig config;
  config.subcommand = "verify";
  config.fields["m"] = std::to_string(a.m);
  config.fields["n"] = std::to_string(a.n);
  config.fields["samples"] = std::to_string(a.samples);
  config.fields["tuples"] = std::to_string(a.tuples);
  config.fields["degree"] = std::to_string(a.degree);
  config.fields["tolerance"] = format_double(a.tolerance);
  config.spec = spec;
  config.has_spec = true;
  config.seed = a.seed;
  out << reproducibility_header(config);
  out << "candidate,tuple,x0,r,alphas,residual,verdict\n";

  Rng rng(a.seed);
  std::size_t failures = 0;
  double worst = 0.0;
  for (int s = 0; s < a.samples; ++s) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(s);
    const Candidate u = almansi_candidate(a.m, a.n, a.degree, seed);
    for (int t = 0; t < a.tuples; ++t) {
      Point x0(static_cast<std::size_t>(a.n));
      for (auto& v : x0) v = rng.uniform(-1.0, 1.0);
      const double r = rng.uniform(0.5, 1.5);
      const auto alphas = random_alphas(rng, a.m);
      const double res = mvp_residual(u, x0, r, alphas, spec);
      const bool ok = res <= a.tolerance;
      failures += ok ? 0 : 1;
      worst = std::max(worst, res);
      out << u.id << ',' << t << ',' << join(x0, ";") << ',' << format_double(r) << ',' << join(alphas, ";") << ','
          << format_decimal17(res) << ',' << (ok ? "PASS" : "FAIL") << '\n';
    }
  }

  // |x|^(2m) is (m+1)-polyharmonic but not m-polyharmonic.
  const Candidate control = polynomial_candidate("|x|^" + std::to_string(2 * a.m), MultiPoly::norm_squared(a.n).pow(a.m));
  std::vector<double> control_alphas;
  for (int k = 1; k <= a.m; ++k) control_alphas.push_back(std::ldexp(1.0, k - a.m));
  const double control_res = mvp_residual(control, Point(static_cast<std::size_t>(a.n), 0.0), 1.0, control_alphas, spec);
  const bool control_ok = control_res >= 1e-3;
  out << "# negative control " << control.id << " alphas=" << join(control_alphas, ";")
      << " residual=" << format_decimal17(control_res) << (control_ok ? " [nonzero as expected]" : " [UNEXPECTED]")
      << '\n';
  out << "# max residual = " << format_decimal17(worst) << "; failures = " << failures << " of "
      << a.samples * a.tuples << '\n';
  return failures == 0 && control_ok ? kExitOk : kExitCertificate;
}

// ---- rigidity --------------------------------------------------------------

struct RigidityArgs {
  std::string domain;
  int m = 2;
  int n = 2;
  int almansi = 0;
  int degree = 4;
  std::uint64_t seed = 1;
  double quad_tol = 1e-8;
  std::string quad;
  std::string json;
};

int cmd_rigidity(const RigidityArgs& a, std::ostream& out) {
  if (a.m < 2) throw UsageError("rigidity needs m >= 2");
  const StarDomain domain = StarDomain::parse(a.domain, a.n);
  const QuadratureSpec spec = make_spec(a.quad, a.quad_tol, a.seed);
  RunConfig config;
  config.subcommand = "rigidity";
  config.fields["domain"] = a.domain;
  config.fields["m"] = std::to_string(a.m);
  config.fields["n"] = std::to_string(a.n);
  config.fields["almansi"] = std::to_string(a.almansi);
  config.fields["degree"] = std::to_string(a.degree);
  config.spec = spec;
  config.has_spec = true;
  config.seed = a.seed;

  CandidateSet candidates;
  candidates.almansi_degree = a.degree;
  for (int i = 0; i < a.almansi; ++i) candidates.almansi_seeds.push_back(a.seed + static_cast<std::uint64_t>(i));

  const auto in = inradius(domain);
  const StarDomain ball = StarDomain::ball(a.n, in.r, domain.center());
  std::vector<GapReport> reports;
  for (const StarDomain* d : {&domain, &ball}) {
    const auto grid = alpha_grid(a.m, inradius(*d).r, diameter(*d).value);
    reports.push_back(gm_lower_bound(*d, a.m, candidates, grid, spec));
  }
  out << reproducibility_header(config);
  out << csv_header() << '\n';
  for (const auto& rep : reports) out << csv_row(rep) << '\n';
  const double ratio = reports[1].gap > 0.0 ? reports[0].gap / reports[1].gap : INFINITY;
  out << "# gap lower bound: domain=" << format_decimal17(reports[0].gap)
      << " matched ball=" << format_decimal17(reports[1].gap) << " ratio=" << format_double(ratio) << '\n';
  if (!a.json.empty()) write_json_array(a.json, reports);
  bool bounded = true;
  for (const auto& rep : reports) bounded = bounded && rep.within_finiteness_bound(1e-6);
  return bounded ? kExitOk : kExitCertificate;
}

// ---- stability -------------------------------------------------------------

struct StabilityArgs {
  std::string family = "bump";
  std::vector<double> eps = {0.05, 0.1, 0.2, 0.3, 0.4};
  std::vector<int> m = {2, 3};
  int n = 2;
  double r = 1.0;
  int freq = 4;
  std::uint64_t seed = 1;
  double quad_tol = 1e-8;
  std::string quad;
  std::string out_path;
  std::string json;
  int threads = 0;
};

int cmd_stability(const StabilityArgs& a, std::ostream& out) {
  for (int m : a.m) {
    if (m < 2) throw UsageError("stability needs m >= 2");
  }
  if (a.family != "bump" && a.family != "ellipse") throw UsageError("--family must be bump or ellipse");
  const QuadratureSpec spec = make_spec(a.quad, a.quad_tol, a.seed);
  RunConfig config;
  config.subcommand = "stability";
  config.fields["family"] = a.family;
  config.fields["eps"] = join(a.eps);
  config.fields["m"] = join(a.m);
  config.fields["n"] = std::to_string(a.n);
  config.fields["r"] = format_double(a.r);
  if (a.family == "bump") config.fields["freq"] = std::to_string(a.freq);
  config.spec = spec;
  config.has_spec = true;
  config.seed = a.seed;

  const int threads = a.threads > 0 ? a.threads : default_thread_count();
  const auto rows = stability_sweep(a.family, a.eps, a.m, a.n, a.r, a.freq, spec, threads);

  std::ostringstream csv;
  csv << reproducibility_header(config) << stability_csv_header() << '\n';
  bool nonconvergence = false;
  bool failed = false;
  std::map<int, double> c_hat;
  std::vector<GapReport> reports;
  for (const auto& row : rows) {
    csv << stability_csv_row(row) << '\n';
    nonconvergence = nonconvergence || row.nonconvergence;
    failed = failed || !row.failure.empty();
    if (!row.report) continue;
    reports.push_back(*row.report);
    failed = failed || !row.report->within_finiteness_bound(1e-6);
    if (row.report->stability_ratio) {
      auto& best = c_hat[row.m];
      best = std::max(best, *row.report->stability_ratio);
    }
  }
  for (const auto& [m, value] : c_hat) {
    csv << "# C_hat(n=" << a.n << ",m=" << m << ") = " << format_decimal17(value) << " (max stability ratio)\n";
  }
  if (a.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(a.out_path);
    if (!file) throw UsageError("cannot open '" + a.out_path + "' for writing");
    file << csv.str();
    out << "wrote " << rows.size() << " rows to " << a.out_path << '\n';
  }
  if (!a.json.empty()) write_json_array(a.json, reports);
  if (nonconvergence) return kExitNonConvergence;
  return failed ? kExitCertificate : kExitOk;
}

}  // namespace

std::string reproducibility_header(const RunConfig& config) {
  std::ostringstream os;
  os << "# polymv " << kVersion << '\n';
  os << "# command: " << config.subcommand << '\n';
  for (const auto& [key, value] : config.fields) os << "# " << key << "=" << value << '\n';
  if (config.has_spec) {
    os << "# quad_spec=" << config.spec.to_string() << '\n';
    os << "# seed=" << config.seed << '\n';
  }
  return os.str();
}

int default_thread_count() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

StarDomain family_domain(const std::string& family, int n, double r, double eps, int freq) {
  if (family == "bump") return StarDomain::bump(n, r, eps, freq);
  if (family == "ellipse") {
    std::vector<double> axes(static_cast<std::size_t>(n), r);
    axes.back() = r * (1.0 + eps);
    return StarDomain::ellipsoid(axes);
  }
  throw std::invalid_argument("unknown family '" + family + "'");
}

std::vector<SweepRow> stability_sweep(const std::string& family, const std::vector<double>& eps_list,
                                      const std::vector<int>& m_list, int n, double r, int freq,
                                      const QuadratureSpec& spec, int threads) {
  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    for (int m : m_list) {
      SweepRow row;
      row.family = family;
      row.eps = eps;
      row.m = m;
      row.n = n;
      row.seed = spec.seed;
      rows.push_back(std::move(row));
    }
  }
  // Domains are built up front so that parameter errors surface as usage errors.
  std::vector<StarDomain> domains;
  for (const auto& row : rows) domains.push_back(family_domain(family, n, r, row.eps, freq));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      auto& row = rows[i];
      try {
        row.report = stability_check(domains[i], row.m, spec, &row.evaluated);
      } catch (const QuadratureError& e) {
        row.failure = "quadrature-failure";
        row.nonconvergence = true;
      } catch (const DegenerateCandidate& e) {
        row.failure = "degenerate";
      }
    }
  };
  const int count = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::string stability_csv_header() {
  return "family,eps,m,n,r,diam,vol_ratio,gap_lower,bound_factor,stability_ratio,quad_spec,seed";
}

std::string stability_csv_row(const SweepRow& row) {
  std::ostringstream os;
  os << row.family << ',' << format_double(row.eps) << ',' << row.m << ',' << row.n << ',';
  if (!row.report) {
    os << "nan,nan,nan,nan,nan," << row.failure;
  } else {
    const auto& rep = *row.report;
    os << format_decimal17(rep.r) << ',' << format_decimal17(rep.diameter) << ',' << format_decimal17(rep.vol_ratio)
       << ',' << format_decimal17(rep.gap) << ',' << format_decimal17(rep.bound_factor) << ','
       << (rep.exact_ball ? std::string("exact-ball")
                          : rep.stability_ratio ? format_decimal17(*rep.stability_ratio) : std::string("undefined"));
  }
  QuadratureSpec spec = row.report ? row.report->spec : QuadratureSpec{};
  os << ',' << spec.to_string() << ',' << row.seed;
  return os.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polyharmonic mean-value coefficients, Kelvin certificates and Gauss mean value gaps", "polymv"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CoeffsArgs coeffs;
  auto* c = app.add_subcommand("coeffs", "exact mean-value coefficients");
  c->add_option("-m", coeffs.m, "number of radii");
  c->add_option("--alphas", coeffs.alphas, "comma separated radii, e.g. 1/4,1/2,1");
  c->add_option("--geometric", coeffs.geometric, "r d: radii (r/(2d))^(m-k)")->expected(2);
  c->add_flag("--csv", coeffs.csv, "decimal CSV instead of fractions");

  KelvinArgs kelvin;
  auto* k = app.add_subcommand("kelvin", "exact Kelvin transform certificate");
  k->add_option("-m", kelvin.m, "polyharmonic order")->capture_default_str();
  k->add_option("-n", kelvin.n, "dimension")->capture_default_str();
  k->add_option("--z", kelvin.z, "pole (default e_1)");
  k->add_option("--lambdas", kelvin.lambdas, "m-1 radii (default 1/2,1/3,...)");
  k->add_flag("--self-test", kelvin.self_test, "tamper with h; the certificate must fail");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "mean-value identity on random polyharmonic polynomials");
  v->add_option("-m", verify.m, "polyharmonic order")->capture_default_str();
  v->add_option("-n", verify.n, "dimension")->capture_default_str();
  v->add_option("--samples", verify.samples, "number of candidates")->capture_default_str();
  v->add_option("--tuples", verify.tuples, "alpha tuples per candidate")->capture_default_str();
  v->add_option("--degree", verify.degree, "degree of the harmonic components")->capture_default_str();
  v->add_option("--seed", verify.seed, "base seed")->capture_default_str();
  v->add_option("--tol", verify.tolerance, "residual tolerance")->capture_default_str();
  v->add_option("--quad-tol", verify.quad_tol, "quadrature tolerance")->capture_default_str();
  v->add_option("--quad", verify.quad, "quadrature spec key=value;...");

  RigidityArgs rigidity;
  auto* g = app.add_subcommand("rigidity", "gap lower bound on a domain and its inscribed ball");
  g->add_option("--domain", rigidity.domain, "e.g. \"ellipse a=1 b=1.2\"")->required();
  g->add_option("-m", rigidity.m, "polyharmonic order")->capture_default_str();
  g->add_option("-n", rigidity.n, "dimension")->capture_default_str();
  g->add_option("--almansi", rigidity.almansi, "extra random polyharmonic candidates")->capture_default_str();
  g->add_option("--degree", rigidity.degree, "degree of those candidates")->capture_default_str();
  g->add_option("--seed", rigidity.seed, "seed")->capture_default_str();
  g->add_option("--quad-tol", rigidity.quad_tol, "quadrature tolerance")->capture_default_str();
  g->add_option("--quad", rigidity.quad, "quadrature spec key=value;...");
  g->add_option("--json", rigidity.json, "write the reports as a JSON array");

  StabilityArgs stability;
  auto* s = app.add_subcommand("stability", "stability ratio sweep over a domain family");
  s->add_option("--family", stability.family, "bump | ellipse")->capture_default_str();
  s->add_option("--eps", stability.eps, "perturbation sizes")->delimiter(',')->capture_default_str();
  s->add_option("-m", stability.m, "polyharmonic orders")->delimiter(',')->capture_default_str();
  s->add_option("-n", stability.n, "dimension")->capture_default_str();
  s->add_option("--r", stability.r, "base radius")->capture_default_str();
  s->add_option("--freq", stability.freq, "bump frequency")->capture_default_str();
  s->add_option("--seed", stability.seed, "seed")->capture_default_str();
  s->add_option("--quad-tol", stability.quad_tol, "quadrature tolerance")->capture_default_str();
  s->add_option("--quad", stability.quad, "quadrature spec key=value;...");
  s->add_option("--out", stability.out_path, "CSV path (default stdout)");
  s->add_option("--json", stability.json, "write the reports as a JSON array");
  s->add_option("--threads", stability.threads, std::string("worker threads (default $") + kThreadsEnv + ")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_coeffs(coeffs, out);
    if (k->parsed()) return cmd_kelvin(kelvin, out);
    if (v->parsed()) return cmd_verify(verify, out);
    if (g->parsed()) return cmd_rigidity(rigidity, out);
    if (s->parsed()) return cmd_stability(stability, out);
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const DegenerateCandidate& e) {
    err << "error: " << e.what() << '\n';
    return kExitCertificate;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace polymv
