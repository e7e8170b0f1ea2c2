#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgmin/cgm.hpp"
#include "cgmin/cubic.hpp"

namespace cgmin::harness {

enum class Variant : std::uint8_t { PowellRestarts, NoPowell, HybridCubic };

const char* to_string(Variant v);
/// Accepts "powell", "nopowell", "hybrid" (and the enum names above).
Variant variant_from_string(const std::string& s);

/// A problem selector is either a registered analytic name ("rosenbr",
/// "watson@9" to resize a family), a generator spec
/// ("huber:m=500,n=100" / "glasso:m=800,N=4,K=50", seed supplied per run),
/// or a path to a saved instance file.
Problem make_problem(const std::string& selector, std::uint64_t seed);
/// True when the selector draws a fresh instance per seed.
bool selector_is_generated(const std::string& selector);

struct BenchConfig {
  std::vector<Variant> variants;
  std::vector<std::string> problems;
  std::vector<std::uint64_t> seeds = {0}; // used by generated selectors only
  int iteration_cap = 10000;
  double time_cap = 0.0; ///< seconds per solve, 0 = unlimited
  std::string output;
  std::string format = "csv";
  double eps = 1e-5;
  std::optional<double> eps_abs;
  bool near_exact_ls = false;
  int threads = 1;
};

/// Reads a config written either as flat TOML (key = value with string,
/// number, boolean, and array values) or as JSON, chosen by extension.
BenchConfig load_config(const std::string& path);

struct BenchRow {
  std::string problem;
  Variant variant = Variant::PowellRestarts;
  std::uint64_t seed = 0;
  bool generated = false;
  SolveStatus status = SolveStatus::IterationLimit;
  int iters = 0;
  double time = 0.0;
  double f_star = 0.0;
  double gnorm = 0.0;
  long n_beale = 0;
  long n_powell = 0;
  long n_cubic = 0;
  long n_doublings = 0;
  double phi = 0.0;
  long f_evals = 0;
};

/// One row per (problem, variant[, seed]); failures are recorded per row and
/// never abort the sweep. Rows are ordered by (problem, seed, variant)
/// regardless of worker scheduling, and all non-timing columns are
/// deterministic under a fixed config.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

std::string rows_to_csv(const std::vector<BenchRow>& rows);
void write_rows_csv(const std::vector<BenchRow>& rows, const std::string& path);
std::vector<BenchRow> read_rows_csv(const std::string& path);

/// Fraction of iterations that were Powell-restart iterations. Throws
/// NoTrace on an empty trace.
double compute_phi(const std::vector<TraceRecord>& trace);

/// Performance profiles over the per-(problem, seed) best of each solver.
struct ProfileData {
  std::vector<double> taus;
  std::vector<std::string> solvers;
  std::vector<std::vector<double>> rho; ///< rho[s][i] at taus[i]
};

ProfileData compute_profiles(const std::vector<BenchRow>& rows,
                             const std::string& metric); // "iters" | "time"
std::string profile_to_csv(const ProfileData& data);

/// Runs the capture on `problem` and evaluates the repair fraction over the
/// lambda grid. Empty result when the run never triggers the criterion.
std::vector<std::pair<double, double>> lambda_curve(
    const Problem& problem, const SolveOptions& opts,
    const std::vector<double>& lambdas);

} // namespace cgmin::harness
