#include "cgmin/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace cgmin {

double Problem::eval_f(std::span<const double> x) const {
  DenseVector g(static_cast<std::size_t>(dim));
  return value_grad(x, g);
}

DenseVector Problem::eval_grad(std::span<const double> x) const {
  DenseVector g(static_cast<std::size_t>(dim));
  value_grad(x, g);
  return g;
}

namespace problems {

namespace {

Problem make(std::string name, DenseVector x0, std::optional<double> f_star,
             std::function<double(std::span<const double>, std::span<double>)> vg) {
  Problem p;
  p.name = std::move(name);
  p.dim = static_cast<int>(x0.size());
  p.x0 = std::move(x0);
  p.known_f_star = f_star;
  p.value_grad = std::move(vg);
  return p;
}

double sq(double v) { return v * v; }

} // namespace

Problem rosenbr() {
  return make("rosenbr", {-1.2, 1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double a = x[1] - sq(x[0]);
                const double b = 1.0 - x[0];
                g[0] = -400.0 * a * x[0] - 2.0 * b;
                g[1] = 200.0 * a;
                return 100.0 * sq(a) + sq(b);
              });
}

Problem s201() {
  return make("s201", {8.0, 9.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                g[0] = 8.0 * (x[0] - 5.0);
                g[1] = 2.0 * (x[1] - 6.0);
                return 4.0 * sq(x[0] - 5.0) + sq(x[1] - 6.0);
              });
}

Problem s206() {
  return make("s206", {-1.2, 1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double a = x[1] - sq(x[0]);
                const double b = 1.0 - x[0];
                g[0] = -4.0 * a * x[0] - 200.0 * b;
                g[1] = 2.0 * a;
                return sq(a) + 100.0 * sq(b);
              });
}

Problem cube() {
  return make("cube", {-1.2, 1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double a = x[1] - x[0] * x[0] * x[0];
                const double b = 1.0 - x[0];
                g[0] = -600.0 * a * sq(x[0]) - 2.0 * b;
                g[1] = 200.0 * a;
                return 100.0 * sq(a) + sq(b);
              });
}

Problem s211() {
  Problem p = cube();
  p.name = "s211";
  return p;
}

Problem beale() {
  return make("beale", {1.0, 1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double c[3] = {1.5, 2.25, 2.625};
                double f = 0.0;
                g[0] = g[1] = 0.0;
                double yim1 = 1.0; // x2^(i-1)
                for (int i = 1; i <= 3; ++i) {
                  const double yi = yim1 * x[1];
                  const double r = c[i - 1] - x[0] * (1.0 - yi);
                  f += sq(r);
                  g[0] += 2.0 * r * (yi - 1.0);
                  g[1] += 2.0 * r * x[0] * i * yim1;
                  yim1 = yi;
                }
                return f;
              });
}

Problem brownbs() {
  return make("brownbs", {1.0, 1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double r1 = x[0] - 1e6;
                const double r2 = x[1] - 2e-6;
                const double r3 = x[0] * x[1] - 2.0;
                g[0] = 2.0 * r1 + 2.0 * r3 * x[1];
                g[1] = 2.0 * r2 + 2.0 * r3 * x[0];
                return sq(r1) + sq(r2) + sq(r3);
              });
}

Problem sineval() {
  // Sine valley: steep quadratic trough along x2 = sin(x1).
  return make("sineval", {4.712389, -1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double r = x[1] - std::sin(x[0]);
                g[0] = -2e4 * r * std::cos(x[0]) + 0.5 * x[0];
                g[1] = 2e4 * r;
                return 1e4 * sq(r) + 0.25 * sq(x[0]);
              });
}

Problem powellsg() {
  // Powell singular function; the Hessian is singular at the solution.
  return make("powellsg", {3.0, -1.0, 0.0, 1.0}, 0.0,
              [](std::span<const double> x, std::span<double> g) {
                const double r1 = x[0] + 10.0 * x[1];
                const double r2 = x[2] - x[3];
                const double r3 = x[1] - 2.0 * x[2];
                const double r4 = x[0] - x[3];
                const double r3c = r3 * sq(r3);
                const double r4c = r4 * sq(r4);
                g[0] = 2.0 * r1 + 40.0 * r4c;
                g[1] = 20.0 * r1 + 4.0 * r3c;
                g[2] = 10.0 * r2 - 8.0 * r3c;
                g[3] = -10.0 * r2 - 40.0 * r4c;
                return sq(r1) + 5.0 * sq(r2) + sq(sq(r3)) + 10.0 * sq(sq(r4));
              });
}

Problem watson(int n) {
  if (n < 2) throw std::invalid_argument("watson: n must be >= 2");
  return make(
      "watson", DenseVector(static_cast<std::size_t>(n), 0.0), {},
      [n](std::span<const double> x, std::span<double> g) {
        for (auto& v : g) v = 0.0;
        double f = 0.0;
        for (int i = 1; i <= 29; ++i) {
          const double t = static_cast<double>(i) / 29.0;
          // s1 = sum_l l*x[l]*t^(l-1), s2 = sum_l x[l]*t^l (0-based l)
          double s1 = 0.0, s2 = x[0];
          double tp = 1.0; // t^(l-1)
          for (int l = 1; l < n; ++l) {
            s1 += l * x[static_cast<std::size_t>(l)] * tp;
            tp *= t;
            s2 += x[static_cast<std::size_t>(l)] * tp;
          }
          const double r = s1 - sq(s2) - 1.0;
          f += sq(r);
          double tl = 1.0; // t^l
          g[0] += 2.0 * r * (-2.0 * s2 * tl);
          for (int l = 1; l < n; ++l) {
            const double dl = l * tl; // l * t^(l-1)
            tl *= t;
            g[static_cast<std::size_t>(l)] += 2.0 * r * (dl - 2.0 * s2 * tl);
          }
        }
        const double b = x[1] - sq(x[0]) - 1.0;
        f += sq(x[0]) + sq(b);
        g[0] += 2.0 * x[0] - 4.0 * b * x[0];
        g[1] += 2.0 * b;
        return f;
      });
}

Problem dixmaan(char variant, int n) {
  if (variant < 'a' || variant > 'l')
    throw std::invalid_argument("dixmaan: variant must be in 'a'..'l'");
  if (n < 3 || n % 3 != 0)
    throw std::invalid_argument("dixmaan: n must be a positive multiple of 3");
  struct Coef {
    double alpha, beta, gamma, delta;
    int k1, k2, k3, k4;
  };
  static constexpr Coef kCoef[12] = {
      {1.0, 0.0, 0.125, 0.125, 0, 0, 0, 0},      // a
      {1.0, 0.0625, 0.0625, 0.0625, 0, 0, 0, 1}, // b
      {1.0, 0.125, 0.125, 0.125, 0, 0, 0, 0},    // c
      {1.0, 0.26, 0.26, 0.26, 0, 0, 0, 0},       // d
      {1.0, 0.0, 0.125, 0.125, 1, 0, 0, 1},      // e
      {1.0, 0.0625, 0.0625, 0.0625, 1, 0, 0, 1}, // f
      {1.0, 0.125, 0.125, 0.125, 1, 0, 0, 1},    // g
      {1.0, 0.26, 0.26, 0.26, 1, 0, 0, 1},       // h
      {1.0, 0.0, 0.125, 0.125, 2, 0, 0, 2},      // i
      {1.0, 0.0625, 0.0625, 0.0625, 2, 0, 0, 2}, // j
      {1.0, 0.125, 0.125, 0.125, 2, 0, 0, 2},    // k
      {1.0, 0.26, 0.26, 0.26, 2, 0, 0, 2},       // l
  };
  const Coef c = kCoef[variant - 'a'];
  const int m = n / 3;
  auto ratio_pow = [n](int i, int k) { // ((i+1)/n)^k with 0-based i
    if (k == 0) return 1.0;
    const double r = static_cast<double>(i + 1) / static_cast<double>(n);
    return k == 1 ? r : r * r;
  };
  return make(
      std::string("dixmaan") + variant,
      DenseVector(static_cast<std::size_t>(n), 2.0), 1.0,
      [c, n, m, ratio_pow](std::span<const double> x, std::span<double> g) {
        for (auto& v : g) v = 0.0;
        double f = 1.0;
        for (int i = 0; i < n; ++i) {
          const double w = c.alpha * ratio_pow(i, c.k1);
          f += w * sq(x[static_cast<std::size_t>(i)]);
          g[static_cast<std::size_t>(i)] += 2.0 * w * x[static_cast<std::size_t>(i)];
        }
        if (c.beta != 0.0) {
          for (int i = 0; i + 1 < n; ++i) {
            const double w = c.beta * ratio_pow(i, c.k2);
            const double xi = x[static_cast<std::size_t>(i)];
            const double xn = x[static_cast<std::size_t>(i + 1)];
            const double s = xn + sq(xn);
            f += w * sq(xi) * sq(s);
            g[static_cast<std::size_t>(i)] += 2.0 * w * xi * sq(s);
            g[static_cast<std::size_t>(i + 1)] +=
                2.0 * w * sq(xi) * s * (1.0 + 2.0 * xn);
          }
        }
        for (int i = 0; i < 2 * m; ++i) {
          const double w = c.gamma * ratio_pow(i, c.k3);
          const double xi = x[static_cast<std::size_t>(i)];
          const double xm = x[static_cast<std::size_t>(i + m)];
          f += w * sq(xi) * sq(sq(xm));
          g[static_cast<std::size_t>(i)] += 2.0 * w * xi * sq(sq(xm));
          g[static_cast<std::size_t>(i + m)] += 4.0 * w * sq(xi) * xm * sq(xm);
        }
        for (int i = 0; i < m; ++i) {
          const double w = c.delta * ratio_pow(i, c.k4);
          f += w * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + 2 * m)];
          g[static_cast<std::size_t>(i)] += w * x[static_cast<std::size_t>(i + 2 * m)];
          g[static_cast<std::size_t>(i + 2 * m)] += w * x[static_cast<std::size_t>(i)];
        }
        return f;
      });
}

Problem dqdrtic(int n) {
  if (n < 3) throw std::invalid_argument("dqdrtic: n must be >= 3");
  return make("dqdrtic", DenseVector(static_cast<std::size_t>(n), 3.0), 0.0,
              [n](std::span<const double> x, std::span<double> g) {
                for (auto& v : g) v = 0.0;
                double f = 0.0;
                for (int i = 0; i + 2 < n; ++i) {
                  f += sq(x[static_cast<std::size_t>(i)]) +
                       100.0 * sq(x[static_cast<std::size_t>(i + 1)]) +
                       100.0 * sq(x[static_cast<std::size_t>(i + 2)]);
                  g[static_cast<std::size_t>(i)] += 2.0 * x[static_cast<std::size_t>(i)];
                  g[static_cast<std::size_t>(i + 1)] += 200.0 * x[static_cast<std::size_t>(i + 1)];
                  g[static_cast<std::size_t>(i + 2)] += 200.0 * x[static_cast<std::size_t>(i + 2)];
                }
                return f;
              });
}

Problem hilberta(int n) {
  if (n < 1) throw std::invalid_argument("hilberta: n must be >= 1");
  return make("hilberta", DenseVector(static_cast<std::size_t>(n), -3.0), 0.0,
              [n](std::span<const double> x, std::span<double> g) {
                double f = 0.0;
                for (int i = 0; i < n; ++i) {
                  double hi = 0.0;
                  for (int j = 0; j < n; ++j)
                    hi += x[static_cast<std::size_t>(j)] / static_cast<double>(i + j + 1);
                  g[static_cast<std::size_t>(i)] = hi;
                  f += 0.5 * x[static_cast<std::size_t>(i)] * hi;
                }
                return f;
              });
}

Problem tridia(int n) {
  if (n < 2) throw std::invalid_argument("tridia: n must be >= 2");
  return make("tridia", DenseVector(static_cast<std::size_t>(n), 1.0), 0.0,
              [n](std::span<const double> x, std::span<double> g) {
                for (auto& v : g) v = 0.0;
                double f = sq(x[0] - 1.0);
                g[0] = 2.0 * (x[0] - 1.0);
                for (int i = 1; i < n; ++i) {
                  const double w = static_cast<double>(i + 1);
                  const double r = 2.0 * x[static_cast<std::size_t>(i)] -
                                   x[static_cast<std::size_t>(i - 1)];
                  f += w * sq(r);
                  g[static_cast<std::size_t>(i)] += 4.0 * w * r;
                  g[static_cast<std::size_t>(i - 1)] -= 2.0 * w * r;
                }
                return f;
              });
}

const std::vector<std::string>& analytic_names() {
  static const std::vector<std::string> names = {
      "rosenbr",  "s201",     "s206",     "s211",     "cube",     "beale",
      "brownbs",  "sineval",  "powellsg", "watson",   "dixmaana", "dixmaanb",
      "dixmaanc", "dixmaand", "dixmaane", "dixmaanf", "dixmaang", "dixmaanh",
      "dixmaani", "dixmaanj", "dixmaank", "dixmaanl", "dqdrtic",  "hilberta",
      "tridia"};
  return names;
}

bool is_quadratic(const std::string& name) {
  return name == "s201" || name == "dqdrtic" || name == "hilberta" ||
         name == "tridia";
}

Problem make_analytic(const std::string& name, std::optional<int> n) {
  if (name == "rosenbr") return rosenbr();
  if (name == "s201") return s201();
  if (name == "s206") return s206();
  if (name == "s211") return s211();
  if (name == "cube") return cube();
  if (name == "beale") return beale();
  if (name == "brownbs") return brownbs();
  if (name == "sineval") return sineval();
  if (name == "powellsg") return powellsg();
  if (name == "watson") return watson(n.value_or(31));
  if (name.size() == 8 && name.starts_with("dixmaan"))
    return dixmaan(name.back(), n.value_or(3000));
  if (name == "dqdrtic") return dqdrtic(n.value_or(5000));
  if (name == "hilberta") return hilberta(n.value_or(10));
  if (name == "tridia") return tridia(n.value_or(10000));
  throw std::invalid_argument("unknown problem: " + name);
}

} // namespace problems
} // namespace cgmin
