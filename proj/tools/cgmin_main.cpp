#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgmin/harness.hpp"
#include "cgmin/instances.hpp"

namespace {

using namespace cgmin;

constexpr int kExitSolverFailure = 2;
constexpr int kExitConfigError = 3;

const char* kind_name(StepKind k) {
  switch (k) {
    case StepKind::SteepestDescent: return "sd";
    case StepKind::Scaled: return "scaled";
    case StepKind::Beale: return "beale";
    case StepKind::Powell: return "powell";
    case StepKind::Cubic: return "cubic";
  }
  return "?";
}

nlohmann::json report_to_json(const SolveReport& rep) {
  nlohmann::json j{{"status", to_string(rep.status)},
                   {"iters", rep.iters},
                   {"f_star", rep.f_star},
                   {"gnorm", rep.gnorm},
                   {"n_beale", rep.n_beale},
                   {"n_powell", rep.n_powell},
                   {"n_cubic", rep.n_cubic_invocations},
                   {"n_doublings", rep.n_lambda_doublings},
                   {"phi", rep.phi},
                   {"wall_time", rep.wall_time},
                   {"f_evals", rep.f_evals},
                   {"g_evals", rep.g_evals}};
  auto arr = nlohmann::json::array();
  for (const auto& rec : rep.trace) {
    arr.push_back({{"k", rec.k},
                   {"f", rec.f},
                   {"gnorm", rec.gnorm},
                   {"kind", kind_name(rec.kind)},
                   {"fraction", rec.powell_fraction},
                   {"lambda", rec.lambda},
                   {"trials", rec.lambda_trials}});
  }
  j["trace"] = arr;
  return j;
}

std::vector<double> parse_grid(const std::string& spec) {
  double start = 0.0, stop = 0.0, step = 0.0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0 || stop < start)
    throw CLI::ValidationError("--grid expects start:stop:step");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-12 * step; v += step)
    grid.push_back(v);
  return grid;
}

struct SolveArgs {
  std::string problem;
  std::string variant = "powell";
  double eps = 1e-5;
  std::optional<double> eps_abs;
  int max_iters = 10000;
  std::optional<int> n;
  std::uint64_t seed = 0;
  bool near_exact = false;
  bool exact = false;
  std::string trace_path;
};

SolveOptions make_options(double eps, std::optional<double> eps_abs,
                          int max_iters, bool near_exact, bool exact) {
  SolveOptions opts;
  opts.eps = eps;
  opts.eps_abs = eps_abs;
  opts.max_iters = max_iters;
  if (exact)
    opts.ls = LineSearchParams::exact();
  else if (near_exact)
    opts.ls = LineSearchParams::near_exact();
  return opts;
}

Problem resolve_problem(const std::string& selector, std::optional<int> n,
                        std::uint64_t seed) {
  if (n && !harness::selector_is_generated(selector))
    return problems::make_analytic(selector, n);
  return harness::make_problem(selector, seed);
}

int run_solve(const SolveArgs& args) {
  Problem problem = resolve_problem(args.problem, args.n, args.seed);
  SolveOptions opts = make_options(args.eps, args.eps_abs, args.max_iters,
                                   args.near_exact, args.exact);
  opts.record_trace = !args.trace_path.empty();
  const auto variant = harness::variant_from_string(args.variant);
  SolveReport rep;
  switch (variant) {
    case harness::Variant::PowellRestarts:
      rep = solve_cgm(problem, problem.x0, opts, true);
      break;
    case harness::Variant::NoPowell:
      rep = solve_cgm(problem, problem.x0, opts, false);
      break;
    case harness::Variant::HybridCubic:
      rep = solve_hybrid(problem, problem.x0, opts);
      break;
  }
  std::cout << problem.name << " [" << args.variant << "] "
            << to_string(rep.status) << "  iters=" << rep.iters
            << "  f=" << rep.f_star << "  |g|=" << rep.gnorm
            << "  beale=" << rep.n_beale << "  powell=" << rep.n_powell
            << "  cubic=" << rep.n_cubic_invocations
            << "  doublings=" << rep.n_lambda_doublings
            << "  phi=" << rep.phi << "  time=" << rep.wall_time << "s\n";
  if (!args.trace_path.empty()) {
    nlohmann::json j = report_to_json(rep);
    j["problem"] = problem.name;
    j["variant"] = args.variant;
    std::ofstream os(args.trace_path);
    if (!os) throw std::runtime_error("cannot write " + args.trace_path);
    os << j.dump(2) << '\n';
  }
  return rep.status == SolveStatus::Converged ? 0 : kExitSolverFailure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memoryless-BFGS conjugate gradient minimizer with hybrid "
               "cubic regularization"};
  app.require_subcommand(1);

  SolveArgs sargs;
  auto* solve = app.add_subcommand("solve", "Solve a single problem");
  solve->add_option("problem", sargs.problem,
                    "Problem name, name@n, generator spec, or instance file")
      ->required();
  solve->add_option("--variant", sargs.variant, "powell|nopowell|hybrid")
      ->check(CLI::IsMember({"powell", "nopowell", "hybrid"}));
  solve->add_option("--eps", sargs.eps, "Scaled gradient tolerance");
  double eps_abs_val = 0.0;
  auto* abs_opt =
      solve->add_option("--eps-abs", eps_abs_val, "Absolute gradient tolerance");
  solve->add_option("--max-iters", sargs.max_iters, "Iteration cap");
  int n_val = 0;
  auto* n_opt = solve->add_option("--n", n_val, "Family size override");
  solve->add_option("--seed", sargs.seed, "Seed for generated problems");
  solve->add_flag("--near-exact", sargs.near_exact,
                  "Near-exact line search (c2 = 0.1)");
  solve->add_flag("--exact", sargs.exact, "Exact-mode line search");
  solve->add_option("--trace", sargs.trace_path, "Write a JSON trace here");

  std::string cfg_path, out_path;
  int bench_threads = 0, bench_limit = 0;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("--config", cfg_path, "TOML or JSON config")->required();
  bench->add_option("--out", out_path, "Output CSV (overrides config)");
  bench->add_option("--threads", bench_threads, "Worker threads");
  bench->add_option("--limit", bench_limit, "Iteration cap override");

  std::string prof_in, prof_metric = "iters", prof_out;
  auto* profile = app.add_subcommand("profile", "Performance profiles");
  profile->add_option("--in", prof_in, "Results CSV from bench")->required();
  profile->add_option("--metric", prof_metric, "iters|time")
      ->check(CLI::IsMember({"iters", "time"}));
  profile->add_option("--out", prof_out, "Output CSV")->required();

  std::string lc_problem, lc_grid = "0:600:50", lc_out;
  double lc_eps = 1e-5;
  bool lc_near_exact = false;
  auto* lcurve = app.add_subcommand(
      "lambda-curve", "Powell fraction of the repair step over a lambda grid");
  lcurve->add_option("--problem", lc_problem, "Problem selector")->required();
  lcurve->add_option("--grid", lc_grid, "start:stop:step");
  lcurve->add_option("--out", lc_out, "Output CSV")->required();
  lcurve->add_option("--eps", lc_eps, "Scaled gradient tolerance");
  lcurve->add_flag("--near-exact", lc_near_exact, "Near-exact line search");

  std::string gen_kind, gen_out;
  std::uint64_t gen_m = 0, gen_n = 0, gen_N = 0, gen_K = 0, gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate and save a random instance");
  gen->add_option("kind", gen_kind, "huber|glasso")
      ->required()
      ->check(CLI::IsMember({"huber", "glasso"}));
  gen->add_option("--m", gen_m, "Rows of A")->required();
  gen->add_option("--n", gen_n, "Columns of A (huber)");
  gen->add_option("--N", gen_N, "Number of groups (glasso)");
  gen->add_option("--K", gen_K, "Maximum group size (glasso)");
  gen->add_option("--seed", gen_seed, "Instance seed");
  gen->add_option("--out", gen_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*solve) {
      if (*abs_opt) sargs.eps_abs = eps_abs_val;
      if (*n_opt) sargs.n = n_val;
      return run_solve(sargs);
    }
    if (*bench) {
      harness::BenchConfig cfg = harness::load_config(cfg_path);
      if (!out_path.empty()) cfg.output = out_path;
      if (cfg.output.empty())
        throw std::invalid_argument("no output path (config `output` or --out)");
      if (bench_threads > 0) cfg.threads = bench_threads;
      if (bench_limit > 0) cfg.iteration_cap = bench_limit;
      for (const auto& sel : cfg.problems)
        if (!harness::selector_is_generated(sel))
          harness::make_problem(sel, 0); // validate selectors up front
      const auto rows = harness::run_bench(cfg);
      harness::write_rows_csv(rows, cfg.output);
      long failures = 0;
      for (const auto& r : rows)
        if (r.status != SolveStatus::Converged) ++failures;
      std::cout << rows.size() << " rows -> " << cfg.output << "  ("
                << failures << " unsolved)\n";
      return 0;
    }
    if (*profile) {
      const auto rows = harness::read_rows_csv(prof_in);
      const auto data = harness::compute_profiles(rows, prof_metric);
      std::ofstream os(prof_out);
      if (!os) throw std::runtime_error("cannot write " + prof_out);
      os << harness::profile_to_csv(data);
      std::cout << "profile (" << prof_metric << ") -> " << prof_out << '\n';
      return 0;
    }
    if (*lcurve) {
      Problem problem = harness::make_problem(lc_problem, 0);
      SolveOptions opts = make_options(lc_eps, {}, 10000, lc_near_exact, false);
      const auto curve =
          harness::lambda_curve(problem, opts, parse_grid(lc_grid));
      if (curve.empty()) {
        std::cerr << "the run never satisfied the restart criterion; no curve\n";
        return kExitSolverFailure;
      }
      std::ofstream os(lc_out);
      if (!os) throw std::runtime_error("cannot write " + lc_out);
      os << "lambda,fraction\n";
      os.precision(17);
      for (const auto& [lam, frac] : curve) os << lam << ',' << frac << '\n';
      std::cout << curve.size() << " points -> " << lc_out << '\n';
      return 0;
    }
    if (*gen) {
      if (gen_kind == "huber") {
        if (gen_n == 0) throw std::invalid_argument("gen huber needs --n");
        save_instance(gen_huber(gen_m, gen_n, gen_seed), gen_out);
      } else {
        if (gen_N == 0 || gen_K == 0)
          throw std::invalid_argument("gen glasso needs --N and --K");
        save_instance(gen_glasso(gen_m, gen_N, gen_K, gen_seed), gen_out);
      }
      std::cout << gen_kind << " instance -> " << gen_out << '\n';
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitConfigError;
}
