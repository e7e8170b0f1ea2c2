#include "cgmin/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cgmin/rng.hpp"

namespace cgmin {

namespace {

constexpr char kMagic[8] = {'C', 'G', 'M', 'I', 'N', 'S', 'T', '1'};
constexpr double kGroupZeroGuard = 1e-12;

enum StreamTag : std::uint64_t {
  kTagA = 1,
  kTagXTrue = 2,
  kTagNoise = 3,
  kTagGroups = 4,
};

void fill_design_matrix(std::vector<double>& A, std::size_t m, std::size_t n,
                        std::uint64_t seed) {
  A.resize(m * n);
  Rng rng(seed, kTagA);
  for (double& v : A) v = rng.normal();
  for (std::size_t j = 0; j < n; ++j) {
    double* col = A.data() + j * m;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += col[i] * col[i];
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t i = 0; i < m; ++i) col[i] *= inv;
  }
}

// y = A x (A column-major, m x n)
void matvec(const std::vector<double>& A, std::size_t m, std::size_t n,
            std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j)
    vec::axpy(x[j], std::span(A.data() + j * m, m), y);
}

// y = A' w
void matvec_t(const std::vector<double>& A, std::size_t m, std::size_t n,
              std::span<const double> w, std::span<double> y) {
  for (std::size_t j = 0; j < n; ++j)
    y[j] = vec::dot(std::span(A.data() + j * m, m), w);
}

void add_noise(DenseVector& b, std::uint64_t seed) {
  Rng rng(seed, kTagNoise);
  const double sigma = std::sqrt(0.1);
  for (double& v : b) v += sigma * rng.normal();
}

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

} // namespace

HuberInstance gen_huber(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_huber: m, n must be >= 1");
  HuberInstance inst;
  inst.m = m;
  inst.n = n;
  inst.seed = seed;
  fill_design_matrix(inst.A, m, n, seed);

  Rng xr(seed, kTagXTrue);
  DenseVector x_true(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : x_true) v = scale * xr.normal();

  inst.b.resize(m);
  matvec(inst.A, m, n, x_true, inst.b);
  add_noise(inst.b, seed);
  return inst;
}

GroupLassoInstance gen_glasso(std::size_t m, std::size_t n_groups,
                              std::size_t max_group_size, std::uint64_t seed) {
  if (m < 1 || n_groups < 1 || max_group_size < 1)
    throw std::invalid_argument("gen_glasso: sizes must be >= 1");
  GroupLassoInstance inst;
  inst.m = m;
  inst.seed = seed;

  Rng gr(seed, kTagGroups);
  inst.group_sizes.resize(n_groups);
  std::size_t n = 0;
  for (auto& s : inst.group_sizes) {
    s = gr.uniform_int(1, max_group_size);
    n += s;
  }
  inst.n = n;
  fill_design_matrix(inst.A, m, n, seed);

  Rng xr(seed, kTagXTrue);
  DenseVector x_true(n, 0.0);
  std::size_t off = 0;
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    const bool zero_group = xr.uniform() < 0.5;
    for (std::size_t j = 0; j < inst.group_sizes[gi]; ++j) {
      const double v = xr.normal(); // drawn either way to keep streams aligned
      if (!zero_group) x_true[off + j] = v;
    }
    off += inst.group_sizes[gi];
  }

  inst.b.resize(m);
  matvec(inst.A, m, n, x_true, inst.b);
  add_noise(inst.b, seed);

  DenseVector atb(n);
  matvec_t(inst.A, m, n, inst.b, atb);
  inst.rho = 0.001 * vec::norm_inf(atb);
  return inst;
}

double huber_value_grad(const HuberInstance& inst, std::span<const double> x,
                        std::span<double> grad) {
  if (x.size() != inst.n || grad.size() != inst.n)
    throw std::invalid_argument("huber_value_grad: dimension mismatch");
  DenseVector z(inst.m);
  matvec(inst.A, inst.m, inst.n, x, z);
  vec::axpy(-1.0, inst.b, z);
  double f = 0.0;
  for (double& zi : z) { // reuse z as the loss derivative w
    const double a = std::abs(zi);
    if (a <= 1.0) {
      f += 0.5 * zi * zi;
    } else {
      f += a - 0.5;
      zi = zi > 0.0 ? 1.0 : -1.0;
    }
  }
  matvec_t(inst.A, inst.m, inst.n, z, grad);
  return f;
}

double glasso_value_grad(const GroupLassoInstance& inst,
                         std::span<const double> x, std::span<double> grad) {
  if (x.size() != inst.n || grad.size() != inst.n)
    throw std::invalid_argument("glasso_value_grad: dimension mismatch");
  DenseVector r(inst.m);
  matvec(inst.A, inst.m, inst.n, x, r);
  vec::axpy(-1.0, inst.b, r);
  double f = 0.5 * vec::dot(r, r);
  matvec_t(inst.A, inst.m, inst.n, r, grad);
  std::size_t off = 0;
  for (std::size_t s : inst.group_sizes) {
    const auto xg = x.subspan(off, s);
    const double nrm = vec::norm2(xg);
    f += inst.rho * nrm;
    if (nrm < kGroupZeroGuard) {
      ++inst.nondiff_hits;
    } else {
      vec::axpy(inst.rho / nrm, xg, grad.subspan(off, s));
    }
    off += s;
  }
  return f;
}

Problem make_problem(HuberInstance inst) {
  auto shared = std::make_shared<HuberInstance>(std::move(inst));
  Problem p;
  p.name = "huber:m=" + std::to_string(shared->m) +
           ",n=" + std::to_string(shared->n) +
           ",seed=" + std::to_string(shared->seed);
  p.dim = static_cast<int>(shared->n);
  p.x0.assign(shared->n, 0.0);
  p.value_grad = [shared](std::span<const double> x, std::span<double> g) {
    return huber_value_grad(*shared, x, g);
  };
  return p;
}

Problem make_problem(GroupLassoInstance inst) {
  auto shared = std::make_shared<GroupLassoInstance>(std::move(inst));
  Problem p;
  p.name = "glasso:m=" + std::to_string(shared->m) +
           ",N=" + std::to_string(shared->group_sizes.size()) +
           ",n=" + std::to_string(shared->n) +
           ",seed=" + std::to_string(shared->seed);
  p.dim = static_cast<int>(shared->n);
  p.x0.assign(shared->n, 0.0);
  p.value_grad = [shared](std::span<const double> x, std::span<double> g) {
    return glasso_value_grad(*shared, x, g);
  };
  return p;
}

namespace {

void save_common(std::ostream& os, std::uint8_t kind, std::size_t m,
                 std::size_t n, const std::vector<std::size_t>& groups,
                 std::uint64_t seed, double rho, const std::vector<double>& A,
                 const DenseVector& b) {
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kind);
  write_pod<std::uint64_t>(os, m);
  write_pod<std::uint64_t>(os, n);
  write_pod<std::uint64_t>(os, groups.size());
  write_pod<std::uint64_t>(os, seed);
  write_pod(os, rho);
  for (std::size_t s : groups) write_pod<std::uint64_t>(os, s);
  os.write(reinterpret_cast<const char*>(A.data()),
           static_cast<std::streamsize>(A.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(b.data()),
           static_cast<std::streamsize>(b.size() * sizeof(double)));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

} // namespace

void save_instance(const HuberInstance& inst, const std::string& path) {
  auto os = open_out(path);
  save_common(os, 0, inst.m, inst.n, {}, inst.seed, 0.0, inst.A, inst.b);
  if (!os) throw std::runtime_error("write failed: " + path);
}

void save_instance(const GroupLassoInstance& inst, const std::string& path) {
  auto os = open_out(path);
  save_common(os, 1, inst.m, inst.n, inst.group_sizes, inst.seed, inst.rho,
              inst.A, inst.b);
  if (!os) throw std::runtime_error("write failed: " + path);
}

Problem load_instance_problem(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open instance file: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a cgmin instance file: " + path);
  const auto kind = read_pod<std::uint8_t>(is);
  const auto m = read_pod<std::uint64_t>(is);
  const auto n = read_pod<std::uint64_t>(is);
  const auto n_groups = read_pod<std::uint64_t>(is);
  const auto seed = read_pod<std::uint64_t>(is);
  const auto rho = read_pod<double>(is);
  std::vector<std::size_t> groups(n_groups);
  for (auto& s : groups) s = read_pod<std::uint64_t>(is);
  std::vector<double> A(m * n);
  is.read(reinterpret_cast<char*>(A.data()),
          static_cast<std::streamsize>(A.size() * sizeof(double)));
  DenseVector b(m);
  is.read(reinterpret_cast<char*>(b.data()),
          static_cast<std::streamsize>(b.size() * sizeof(double)));
  if (!is) throw std::runtime_error("truncated instance file: " + path);

  if (kind == 0) {
    HuberInstance inst{m, n, seed, std::move(A), std::move(b)};
    return make_problem(std::move(inst));
  }
  if (kind == 1) {
    GroupLassoInstance inst;
    inst.m = m;
    inst.n = n;
    inst.seed = seed;
    inst.A = std::move(A);
    inst.b = std::move(b);
    inst.group_sizes = std::move(groups);
    inst.rho = rho;
    return make_problem(std::move(inst));
  }
  throw std::runtime_error("unknown instance kind in " + path);
}

} // namespace cgmin
