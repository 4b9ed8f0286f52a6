#pragma once

// Command-line front end: coeffs, kelvin, verify, rigidity, stability.
// Exit codes: 0 success, 2 usage, 3 certificate or assertion failure,
// 4 numerical non-convergence.

#include "polymv/gap.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polymv {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kThreadsEnv = "POLYMV_THREADS";

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitCertificate = 3, kExitNonConvergence = 4 };

/// Everything that determines an output artifact, echoed as '#' lines.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> fields;  // sorted, so the echo is stable
  QuadratureSpec spec;
  std::uint64_t seed = 1;
  bool has_spec = false;
};

std::string reproducibility_header(const RunConfig& config);

/// POLYMV_THREADS if set and positive, else the hardware concurrency (>= 1).
int default_thread_count();

/// Members of the sweep families: "bump" (radius r, frequency freq) and
/// "ellipse" (semi-axes r and r (1 + eps)); eps = 0 gives the ball.
StarDomain family_domain(const std::string& family, int n, double r, double eps, int freq);

struct SweepRow {
  std::string family;
  double eps = 0.0;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<GapReport> report;
  std::vector<GapReport> evaluated;  // every gap term behind the row
  std::string failure;               // set when the row did not complete
  bool nonconvergence = false;
};

/// One stability_check per (eps, m) pair, eps-major.  Rows come back in sweep
/// order whatever the thread count.
std::vector<SweepRow> stability_sweep(const std::string& family, const std::vector<double>& eps_list,
                                      const std::vector<int>& m_list, int n, double r, int freq,
                                      const QuadratureSpec& spec, int threads);

std::string stability_csv_header();
std::string stability_csv_row(const SweepRow& row);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polymv
