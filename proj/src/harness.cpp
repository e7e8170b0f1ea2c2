#include "cgmin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cgmin/errors.hpp"
#include "cgmin/instances.hpp"

namespace cgmin::harness {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::PowellRestarts: return "powell";
    case Variant::NoPowell: return "nopowell";
    case Variant::HybridCubic: return "hybrid";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "powell" || s == "PowellRestarts") return Variant::PowellRestarts;
  if (s == "nopowell" || s == "NoPowell") return Variant::NoPowell;
  if (s == "hybrid" || s == "HybridCubic") return Variant::HybridCubic;
  throw std::invalid_argument("unknown variant: " + s);
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad selector parameter: " + item);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

std::uint64_t kv_u64(const std::map<std::string, std::string>& kv,
                     const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("selector missing parameter: " + key);
  return std::stoull(it->second);
}

} // namespace

bool selector_is_generated(const std::string& selector) {
  return selector.starts_with("huber:") || selector.starts_with("glasso:");
}

Problem make_problem(const std::string& selector, std::uint64_t seed) {
  if (selector.starts_with("huber:")) {
    const auto kv = parse_kv(selector.substr(6));
    return cgmin::make_problem(
        gen_huber(kv_u64(kv, "m"), kv_u64(kv, "n"), seed));
  }
  if (selector.starts_with("glasso:")) {
    const auto kv = parse_kv(selector.substr(7));
    return cgmin::make_problem(
        gen_glasso(kv_u64(kv, "m"), kv_u64(kv, "N"), kv_u64(kv, "K"), seed));
  }
  const auto at = selector.find('@');
  if (at != std::string::npos) {
    const std::string name = selector.substr(0, at);
    return problems::make_analytic(name, std::stoi(selector.substr(at + 1)));
  }
  const auto& names = problems::analytic_names();
  if (std::find(names.begin(), names.end(), selector) != names.end())
    return problems::make_analytic(selector);
  if (std::filesystem::exists(selector)) return load_instance_problem(selector);
  throw std::invalid_argument("unknown problem selector: " + selector);
}

// ---------------------------------------------------------------------------
// Config parsing: JSON via nlohmann, or a flat TOML subset (string, number,
// boolean, homogeneous arrays; '#' comments).

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

nlohmann::json toml_value(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw std::invalid_argument("config: empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw std::invalid_argument("config: unterminated string " + v);
    return v.substr(1, v.size() - 2);
  }
  if (v.front() == '[') {
    if (v.back() != ']')
      throw std::invalid_argument("config: unterminated array " + v);
    auto arr = nlohmann::json::array();
    std::string body = v.substr(1, v.size() - 2);
    int depth = 0;
    bool in_str = false;
    std::string cur;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (!in_str) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
          if (!trim(cur).empty()) arr.push_back(toml_value(cur));
          cur.clear();
          continue;
        }
      }
      cur += c;
    }
    if (!trim(cur).empty()) arr.push_back(toml_value(cur));
    return arr;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    if (v.find_first_of(".eE") == std::string::npos &&
        v.find("inf") == std::string::npos)
      return std::stoll(v);
    return std::stod(v);
  } catch (...) {
    throw std::invalid_argument("config: cannot parse value " + v);
  }
}

nlohmann::json parse_flat_toml(std::istream& is) {
  nlohmann::json j = nlohmann::json::object();
  std::string line;
  while (std::getline(is, line)) {
    // strip comments outside strings
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[')
      throw std::invalid_argument("config: tables are not supported: " + line);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value: " + line);
    j[trim(line.substr(0, eq))] = toml_value(line.substr(eq + 1));
  }
  return j;
}

} // namespace

BenchConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config: " + path);
  nlohmann::json j;
  if (path.ends_with(".json")) {
    is >> j;
  } else {
    j = parse_flat_toml(is);
  }

  BenchConfig cfg;
  if (!j.contains("variants") || !j.contains("problems"))
    throw std::invalid_argument("config must list variants and problems");
  for (const auto& v : j["variants"])
    cfg.variants.push_back(variant_from_string(v.get<std::string>()));
  for (const auto& p : j["problems"])
    cfg.problems.push_back(p.get<std::string>());
  if (cfg.variants.empty() || cfg.problems.empty())
    throw std::invalid_argument("config: variants and problems must be nonempty");
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (cfg.seeds.empty()) throw std::invalid_argument("config: empty seeds");
  }
  cfg.iteration_cap = j.value("iteration_cap", cfg.iteration_cap);
  cfg.time_cap = j.value("time_cap", cfg.time_cap);
  cfg.output = j.value("output", cfg.output);
  cfg.format = j.value("format", cfg.format);
  cfg.eps = j.value("eps", cfg.eps);
  if (j.contains("eps_abs")) cfg.eps_abs = j["eps_abs"].get<double>();
  cfg.near_exact_ls = j.value("near_exact_ls", cfg.near_exact_ls);
  cfg.threads = j.value("threads", cfg.threads);
  return cfg;
}

// ---------------------------------------------------------------------------
// Bench sweep.

namespace {

SolveOptions options_from(const BenchConfig& cfg) {
  SolveOptions opts;
  opts.eps = cfg.eps;
  opts.eps_abs = cfg.eps_abs;
  opts.max_iters = cfg.iteration_cap;
  opts.time_cap = cfg.time_cap;
  opts.ls = cfg.near_exact_ls ? LineSearchParams::near_exact()
                              : LineSearchParams::wolfe();
  return opts;
}

} // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.variants.empty() || cfg.problems.empty() || cfg.seeds.empty())
    throw std::invalid_argument("run_bench: empty config");
  struct Task {
    std::string selector;
    std::uint64_t seed;
    bool generated;
    Variant variant;
  };
  std::vector<Task> tasks;
  for (const auto& sel : cfg.problems) {
    const bool gen = selector_is_generated(sel);
    const std::vector<std::uint64_t> seeds =
        gen ? cfg.seeds : std::vector<std::uint64_t>{0};
    for (auto seed : seeds)
      for (auto variant : cfg.variants)
        tasks.push_back({sel, seed, gen, variant});
  }

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      BenchRow& row = rows[i];
      row.problem = task.selector;
      row.variant = task.variant;
      row.seed = task.seed;
      row.generated = task.generated;
      SolveOptions opts = options_from(cfg);
      try {
        const Problem problem = make_problem(task.selector, task.seed);
        SolveReport rep;
        switch (task.variant) {
          case Variant::PowellRestarts:
            rep = solve_cgm(problem, problem.x0, opts, true);
            break;
          case Variant::NoPowell:
            rep = solve_cgm(problem, problem.x0, opts, false);
            break;
          case Variant::HybridCubic:
            rep = solve_hybrid(problem, problem.x0, opts);
            break;
        }
        row.status = rep.status;
        row.iters = rep.iters;
        row.time = rep.wall_time;
        row.f_star = rep.f_star;
        row.gnorm = rep.gnorm;
        row.n_beale = rep.n_beale;
        row.n_powell = rep.n_powell;
        row.n_cubic = rep.n_cubic_invocations;
        row.n_doublings = rep.n_lambda_doublings;
        row.phi = rep.phi;
        row.f_evals = rep.f_evals;
      } catch (const std::exception&) {
        row.status = SolveStatus::EvalError;
      }
    }
  };
  const int n_threads = std::max(1, cfg.threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV.

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "problem,variant,seed,status,iters,time,f_star,gnorm,n_beale,"
        "n_powell,n_cubic,n_doublings,phi,f_evals\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << to_string(r.variant) << ',' << r.seed << ','
       << to_string(r.status) << ',' << r.iters << ',' << fmt_double(r.time)
       << ',' << fmt_double(r.f_star) << ',' << fmt_double(r.gnorm) << ','
       << r.n_beale << ',' << r.n_powell << ',' << r.n_cubic << ','
       << r.n_doublings << ',' << fmt_double(r.phi) << ',' << r.f_evals
       << '\n';
  }
  return os.str();
}

void write_rows_csv(const std::vector<BenchRow>& rows,
                    const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << rows_to_csv(rows);
}

std::vector<BenchRow> read_rows_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open results: " + path);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty results file: " + path);
  std::vector<BenchRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    // generated selectors contain commas; re-join the leading columns
    while (cols.size() > 14) {
      cols[0] += "," + cols[1];
      cols.erase(cols.begin() + 1);
    }
    if (cols.size() != 14)
      throw std::runtime_error("malformed results row: " + line);
    BenchRow r;
    r.problem = cols[0];
    r.variant = variant_from_string(cols[1]);
    r.seed = std::stoull(cols[2]);
    r.generated = selector_is_generated(r.problem);
    if (cols[3] == "Converged") r.status = SolveStatus::Converged;
    else if (cols[3] == "IterationLimit") r.status = SolveStatus::IterationLimit;
    else if (cols[3] == "LineSearchFailure") r.status = SolveStatus::LineSearchFailure;
    else r.status = SolveStatus::EvalError;
    r.iters = std::stoi(cols[4]);
    r.time = std::stod(cols[5]);
    r.f_star = std::stod(cols[6]);
    r.gnorm = std::stod(cols[7]);
    r.n_beale = std::stol(cols[8]);
    r.n_powell = std::stol(cols[9]);
    r.n_cubic = std::stol(cols[10]);
    r.n_doublings = std::stol(cols[11]);
    r.phi = std::stod(cols[12]);
    r.f_evals = std::stol(cols[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Statistics.

double compute_phi(const std::vector<TraceRecord>& trace) {
  if (trace.empty()) throw NoTrace("compute_phi: run recorded no trace");
  long powell = 0;
  for (const auto& rec : trace)
    if (rec.kind == StepKind::Powell) ++powell;
  return static_cast<double>(powell) / static_cast<double>(trace.size());
}

ProfileData compute_profiles(const std::vector<BenchRow>& rows,
                             const std::string& metric) {
  if (metric != "iters" && metric != "time")
    throw std::invalid_argument("compute_profiles: metric must be iters|time");
  ProfileData data;
  std::set<std::string> solver_set;
  for (const auto& r : rows) solver_set.insert(to_string(r.variant));
  data.solvers.assign(solver_set.begin(), solver_set.end());

  // key = problem + seed; value: metric per solver (inf on failure)
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::map<std::string, std::map<std::string, double>> table;
  for (const auto& r : rows) {
    const std::string key = r.problem + "#" + std::to_string(r.seed);
    double v = kInf;
    if (r.status == SolveStatus::Converged)
      v = metric == "iters" ? std::max(1.0, static_cast<double>(r.iters))
                            : std::max(1e-9, r.time);
    table[key][to_string(r.variant)] = v;
  }

  std::vector<std::vector<double>> ratios(data.solvers.size());
  for (const auto& [key, per_solver] : table) {
    double best = kInf;
    for (const auto& [s, v] : per_solver) best = std::min(best, v);
    for (std::size_t si = 0; si < data.solvers.size(); ++si) {
      auto it = per_solver.find(data.solvers[si]);
      const double v = it == per_solver.end() ? kInf : it->second;
      ratios[si].push_back(best == kInf ? kInf : v / best);
    }
  }
  const std::size_t n_problems = table.size();
  if (n_problems == 0) return data;

  std::set<double> tau_set = {1.0};
  for (const auto& rs : ratios)
    for (double r : rs)
      if (std::isfinite(r)) tau_set.insert(r);
  data.taus.assign(tau_set.begin(), tau_set.end());

  data.rho.resize(data.solvers.size());
  for (std::size_t si = 0; si < data.solvers.size(); ++si) {
    for (double tau : data.taus) {
      long count = 0;
      for (double r : ratios[si])
        if (r <= tau) ++count;
      data.rho[si].push_back(static_cast<double>(count) /
                             static_cast<double>(n_problems));
    }
  }
  return data;
}

std::string profile_to_csv(const ProfileData& data) {
  std::ostringstream os;
  os << "tau";
  for (const auto& s : data.solvers) os << ',' << s;
  os << '\n';
  for (std::size_t i = 0; i < data.taus.size(); ++i) {
    os << fmt_double(data.taus[i]);
    for (std::size_t si = 0; si < data.solvers.size(); ++si)
      os << ',' << fmt_double(data.rho[si][i]);
    os << '\n';
  }
  return os.str();
}

std::vector<std::pair<double, double>> lambda_curve(
    const Problem& problem, const SolveOptions& opts,
    const std::vector<double>& lambdas) {
  const auto state = capture_powell_trigger(problem, problem.x0, opts);
  if (!state) return {};
  // Trials pick an effectively optimal steplength, like the solver's repairs.
  return powell_fraction_curve(problem, *state, lambdas,
                               CubicOptions{}.repair_ls);
}

} // namespace cgmin::harness
