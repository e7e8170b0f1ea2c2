#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cgmin/harness.hpp"
#include "cgmin/instances.hpp"

namespace py = pybind11;
using namespace cgmin;

namespace {

DenseVector to_vec(const py::array_t<double, py::array::c_style |
                                                 py::array::forcecast>& arr) {
  if (arr.ndim() != 1) throw py::value_error("expected a 1-D float array");
  return DenseVector(arr.data(), arr.data() + arr.size());
}

py::array_t<double> to_array(const DenseVector& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

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

SolveOptions build_options(double eps, std::optional<double> eps_abs,
                           int max_iters, const std::string& linesearch,
                           bool trace) {
  SolveOptions opts;
  opts.eps = eps;
  opts.eps_abs = eps_abs;
  opts.max_iters = max_iters;
  if (linesearch == "wolfe")
    opts.ls = LineSearchParams::wolfe();
  else if (linesearch == "near_exact")
    opts.ls = LineSearchParams::near_exact();
  else if (linesearch == "exact")
    opts.ls = LineSearchParams::exact();
  else
    throw py::value_error("linesearch must be wolfe|near_exact|exact");
  opts.record_trace = trace;
  return opts;
}

py::dict report_to_dict(const SolveReport& rep, bool with_trace) {
  py::dict d;
  d["status"] = to_string(rep.status);
  d["converged"] = rep.status == SolveStatus::Converged;
  d["iters"] = rep.iters;
  d["f_star"] = rep.f_star;
  d["gnorm"] = rep.gnorm;
  d["n_beale"] = rep.n_beale;
  d["n_powell"] = rep.n_powell;
  d["n_cubic"] = rep.n_cubic_invocations;
  d["n_doublings"] = rep.n_lambda_doublings;
  d["phi"] = rep.phi;
  d["wall_time"] = rep.wall_time;
  d["f_evals"] = rep.f_evals;
  if (with_trace) {
    py::list tr;
    for (const auto& rec : rep.trace) {
      py::dict r;
      r["k"] = rec.k;
      r["f"] = rec.f;
      r["gnorm"] = rec.gnorm;
      r["kind"] = kind_name(rec.kind);
      r["fraction"] = rec.powell_fraction;
      r["lambda"] = rec.lambda;
      r["trials"] = rec.lambda_trials;
      tr.append(r);
    }
    d["trace"] = tr;
  }
  return d;
}

} // namespace

PYBIND11_MODULE(_cgmin, m) {
  m.doc() = "Matrix-free conjugate gradient minimization (memoryless BFGS "
            "with optional cubic-regularized step repair)";

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("dim", &Problem::dim)
      .def_property_readonly(
          "x0", [](const Problem& p) { return to_array(p.x0); })
      .def_property_readonly("known_f_star",
                             [](const Problem& p) { return p.known_f_star; })
      .def("f",
           [](const Problem& p, const py::array_t<double>& x) {
             return p.eval_f(to_vec(x));
           })
      .def("grad",
           [](const Problem& p, const py::array_t<double>& x) {
             return to_array(p.eval_grad(to_vec(x)));
           })
      .def("__repr__", [](const Problem& p) {
        return "<Problem " + p.name + " dim=" + std::to_string(p.dim) + ">";
      });

  m.def("problem_names", [] { return problems::analytic_names(); });
  m.def(
      "make_problem",
      [](const std::string& selector, std::optional<int> n,
         std::uint64_t seed) {
        if (n) return problems::make_analytic(selector, n);
        return harness::make_problem(selector, seed);
      },
      py::arg("selector"), py::arg("n") = std::nullopt, py::arg("seed") = 0,
      "Build an analytic problem by name (optionally resized), a generated "
      "instance from a 'huber:...'/'glasso:...' spec, or a saved instance "
      "file");

  m.def(
      "gen_huber",
      [](std::size_t mm, std::size_t nn, std::uint64_t seed, bool save,
         const std::string& path) {
        auto inst = gen_huber(mm, nn, seed);
        if (save) save_instance(inst, path);
        return cgmin::make_problem(std::move(inst));
      },
      py::arg("m"), py::arg("n"), py::arg("seed") = 0, py::arg("save") = false,
      py::arg("path") = "");
  m.def(
      "gen_glasso",
      [](std::size_t mm, std::size_t n_groups, std::size_t max_size,
         std::uint64_t seed, bool save, const std::string& path) {
        auto inst = gen_glasso(mm, n_groups, max_size, seed);
        if (save) save_instance(inst, path);
        return cgmin::make_problem(std::move(inst));
      },
      py::arg("m"), py::arg("N"), py::arg("K"), py::arg("seed") = 0,
      py::arg("save") = false, py::arg("path") = "");
  m.def("load_instance", &load_instance_problem, py::arg("path"));

  m.def(
      "solve",
      [](const Problem& problem, const std::string& variant, double eps,
         std::optional<double> eps_abs, int max_iters,
         const std::string& linesearch, bool trace,
         std::optional<py::array_t<double>> x0,
         std::optional<double> repair_c2, std::optional<int> repair_trials,
         int max_lambda_trials, std::optional<double> c2) {
        SolveOptions opts =
            build_options(eps, eps_abs, max_iters, linesearch, trace);
        if (c2) opts.ls.c2 = *c2;
        const DenseVector start = x0 ? to_vec(*x0) : problem.x0;
        CubicOptions copts;
        copts.max_lambda_trials = max_lambda_trials;
        if (repair_c2) {
          copts.repair_ls = opts.ls;
          copts.repair_ls.c1 = std::min(opts.ls.c1, *repair_c2 / 2.0);
          copts.repair_ls.c2 = *repair_c2;
        }
        if (repair_trials) copts.repair_ls.max_trials = *repair_trials;
        SolveReport rep;
        switch (harness::variant_from_string(variant)) {
          case harness::Variant::PowellRestarts:
            rep = solve_cgm(problem, start, opts, true);
            break;
          case harness::Variant::NoPowell:
            rep = solve_cgm(problem, start, opts, false);
            break;
          case harness::Variant::HybridCubic:
            rep = solve_hybrid(problem, start, opts, copts);
            break;
        }
        return report_to_dict(rep, trace);
      },
      py::arg("problem"), py::arg("variant") = "powell", py::arg("eps") = 1e-5,
      py::arg("eps_abs") = std::nullopt, py::arg("max_iters") = 10000,
      py::arg("linesearch") = "wolfe", py::arg("trace") = false,
      py::arg("x0") = std::nullopt, py::arg("repair_c2") = std::nullopt,
      py::arg("repair_trials") = std::nullopt,
      py::arg("max_lambda_trials") = 30, py::arg("c2") = std::nullopt,
      "Run one solve; variant is powell|nopowell|hybrid");

  m.def(
      "line_search",
      [](const Problem& problem, const py::array_t<double>& x,
         const py::array_t<double>& dx, const std::string& mode) {
        const DenseVector xv = to_vec(x), dv = to_vec(dx);
        DenseVector g(xv.size());
        const double f0 = problem.value_grad(xv, g);
        LineSearchParams params;
        if (mode == "near_exact") params = LineSearchParams::near_exact();
        if (mode == "exact") params = LineSearchParams::exact();
        const auto r = line_search(problem, xv, dv, f0, g, params);
        py::dict d;
        d["ok"] = r.status == LineSearchStatus::Success;
        d["alpha"] = r.alpha;
        d["f_new"] = r.f_new;
        d["evals"] = r.evals;
        return d;
      },
      py::arg("problem"), py::arg("x"), py::arg("dx"),
      py::arg("mode") = "wolfe");

  m.def(
      "lambda_curve",
      [](const Problem& problem, const std::vector<double>& lambdas,
         double eps, const std::string& linesearch) {
        SolveOptions opts = build_options(eps, {}, 10000, linesearch, false);
        return harness::lambda_curve(problem, opts, lambdas);
      },
      py::arg("problem"), py::arg("lambdas"), py::arg("eps") = 1e-5,
      py::arg("linesearch") = "wolfe",
      "(lambda, Powell fraction) pairs of the repair step at the first "
      "trigger; empty when the criterion never fires");

  m.def(
      "run_bench",
      [](const std::vector<std::string>& problems_,
         const std::vector<std::string>& variants,
         const std::vector<std::uint64_t>& seeds, int iteration_cap,
         double eps, bool near_exact_ls, int threads) {
        harness::BenchConfig cfg;
        for (const auto& v : variants)
          cfg.variants.push_back(harness::variant_from_string(v));
        cfg.problems = problems_;
        if (!seeds.empty()) cfg.seeds = seeds;
        cfg.iteration_cap = iteration_cap;
        cfg.eps = eps;
        cfg.near_exact_ls = near_exact_ls;
        cfg.threads = threads;
        const auto rows = harness::run_bench(cfg);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["problem"] = r.problem;
          d["variant"] = harness::to_string(r.variant);
          d["seed"] = r.seed;
          d["status"] = to_string(r.status);
          d["iters"] = r.iters;
          d["time"] = r.time;
          d["f_star"] = r.f_star;
          d["n_powell"] = r.n_powell;
          d["n_cubic"] = r.n_cubic;
          d["phi"] = r.phi;
          out.append(d);
        }
        return out;
      },
      py::arg("problems"), py::arg("variants"),
      py::arg("seeds") = std::vector<std::uint64_t>{},
      py::arg("iteration_cap") = 10000, py::arg("eps") = 1e-5,
      py::arg("near_exact_ls") = false, py::arg("threads") = 1);
}
