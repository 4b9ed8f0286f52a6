#include "polymv/gap.hpp"
#include "polymv/rational.hpp"

#include <json.hpp>

#include <sstream>

namespace polymv {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_alphas(const std::vector<double>& alphas) {
  std::string out;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (i) out += ';';
    out += format_decimal17(alphas[i]);
  }
  return out;
}

}  // namespace

std::string csv_header() {
  return "m,n,domain,candidate,r,diam,volume,outside_volume,alphas,u_x0,mean,residual,m_alpha,gap_lower,"
         "finiteness_bound,vol_ratio,bound_factor,stability_ratio,quad_levels,quad_error,quad_spec";
}

std::string csv_row(const GapReport& rep) {
  std::ostringstream os;
  os << rep.m << ',' << rep.n << ',' << csv_field(rep.domain) << ',' << csv_field(rep.candidate) << ','
     << format_decimal17(rep.r) << ',' << format_decimal17(rep.diameter) << ',' << format_decimal17(rep.volume) << ','
     << format_decimal17(rep.outside_volume) << ',' << join_alphas(rep.alphas) << ',' << format_decimal17(rep.u_x0)
     << ',' << format_decimal17(rep.mean) << ',' << format_decimal17(rep.residual) << ','
     << format_decimal17(rep.m_alpha) << ',' << format_decimal17(rep.gap) << ','
     << format_decimal17(rep.finiteness_bound) << ',' << format_decimal17(rep.vol_ratio) << ','
     << format_decimal17(rep.bound_factor) << ','
     << (rep.exact_ball ? std::string("exact-ball")
                        : rep.stability_ratio ? format_decimal17(*rep.stability_ratio) : std::string("undefined"))
     << ',' << rep.quadrature_levels << ',' << format_decimal17(rep.quadrature_error) << ','
     << csv_field(rep.spec.to_string());
  return os.str();
}

std::string to_json(const GapReport& rep) {
  nlohmann::ordered_json j;
  j["m"] = rep.m;
  j["n"] = rep.n;
  j["domain"] = rep.domain;
  j["candidate"] = rep.candidate;
  j["r"] = rep.r;
  j["diameter"] = rep.diameter;
  j["volume"] = rep.volume;
  j["outside_volume"] = rep.outside_volume;
  j["alphas"] = rep.alphas;
  j["u_x0"] = rep.u_x0;
  j["mean"] = rep.mean;
  j["residual"] = rep.residual;
  j["m_alpha"] = rep.m_alpha;
  j["gap_lower_bound"] = rep.gap;
  j["finiteness_bound"] = rep.finiteness_bound;
  j["vol_ratio"] = rep.vol_ratio;
  j["bound_factor"] = rep.bound_factor;
  if (rep.stability_ratio) j["stability_ratio"] = *rep.stability_ratio;
  else j["stability_ratio"] = nullptr;
  j["exact_ball"] = rep.exact_ball;
  j["quadrature"] = {{"spec", rep.spec.to_string()},
                     {"levels", rep.quadrature_levels},
                     {"error", rep.quadrature_error}};
  return j.dump();
}

}  // namespace polymv
