#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgmin/vec.hpp"

namespace cgmin {

/// An unconstrained objective with its gradient and standard initial point.
///
/// `value_grad` evaluates f(x) and writes the gradient into `grad` (already
/// sized to `dim`). Evaluators are pure and safe to call concurrently.
struct Problem {
  std::string name;
  int dim = 0;
  DenseVector x0;
  std::optional<double> known_f_star;
  std::function<double(std::span<const double> x, std::span<double> grad)>
      value_grad;

  double eval_f(std::span<const double> x) const;
  DenseVector eval_grad(std::span<const double> x) const;
};

namespace problems {

// Analytic test set. Families take their dimension as a parameter; the
// default matches the size used in the reference results.
Problem rosenbr();
Problem s201();
Problem s206();
Problem s211();
Problem cube();
Problem beale();
Problem brownbs();
Problem sineval();
Problem powellsg();
Problem watson(int n = 31);
Problem dixmaan(char variant, int n = 3000); // variant in 'a'..'l', n % 3 == 0
Problem dqdrtic(int n = 5000);
Problem hilberta(int n = 10);
Problem tridia(int n = 10000);

/// Registered analytic problem names, in a fixed order.
const std::vector<std::string>& analytic_names();

/// Quadratic programs in the set (restart statistics are reported for the
/// nonlinear problems only).
bool is_quadratic(const std::string& name);

/// Build a registered problem by name; `n` overrides the family size where
/// the family is sized, and is ignored otherwise.
Problem make_analytic(const std::string& name, std::optional<int> n = {});

} // namespace problems
} // namespace cgmin
