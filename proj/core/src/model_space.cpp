#include "hkframe/model_space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "hkframe/errors.hpp"

namespace hkframe {

namespace {

constexpr double kPi = std::numbers::pi;

// 7-point Gauss / 15-point Kronrod pair.
constexpr double kKronrodNodes[8] = {
    0.0,                    0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993945,     0.8648644233597691, 0.9491079123427585, 0.9914553711208126};
constexpr double kKronrodWeights[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
constexpr double kGaussWeights[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

template <typename F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fk = 0.0, fg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double v = (i == 0) ? f(c) : f(c - h * kKronrodNodes[i]) + f(c + h * kKronrodNodes[i]);
    fk += kKronrodWeights[i] * v;
    if (i % 2 == 0) fg += kGaussWeights[i / 2] * v;
  }
  kronrod = fk * h;
  err = std::abs((fk - fg) * h);
}

template <typename F>
double adaptive_gk(const F& f, double a, double b, double rel_tol, double abs_tol, int depth = 0) {
  double k, e;
  gk15(f, a, b, k, e);
  if (depth >= 40 || e <= std::max(abs_tol, rel_tol * std::abs(k))) return k;
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, rel_tol, 0.5 * abs_tol, depth + 1) +
         adaptive_gk(f, m, b, rel_tol, 0.5 * abs_tol, depth + 1);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

struct SpectralModel::Impl {
  ModelKind kind;
  double alpha = 0.0, beta = 0.0;
  int truncation = 0;
  double diam = 0.0;
  double total_measure = 0.0;
  double dim_d = 0.0;
  Quadrature grid;
  Eigen::MatrixXd eigen_table;  // (N+1) x Q
  std::vector<double> sqrt_lambda;
  // Jacobi orthonormal recurrence: x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}
  std::vector<double> rec_a;  // a_k, k >= 1
  std::vector<double> rec_b;  // b_k, k >= 0
  double p0 = 1.0;            // orthonormal p_0 = mu0^{-1/2}

  mutable std::unordered_map<std::uint64_t, std::vector<double>> ball_cache;

  double eigenvalue(int n) const {
    if (n < 0 || n > truncation) throw std::out_of_range("eigen index out of range");
    if (kind == ModelKind::Torus) {
      if (n == 0) return 0.0;
      const double k = (n + 1) / 2;
      return (2.0 * kPi * k) * (2.0 * kPi * k);
    }
    return static_cast<double>(n) * (n + alpha + beta + 1.0);
  }

  double eigenfunction(int n, double x) const {
    if (n < 0 || n > truncation) throw std::out_of_range("eigen index out of range");
    if (kind == ModelKind::Torus) {
      if (n == 0) return 1.0;
      const int k = (n + 1) / 2;
      const double arg = 2.0 * kPi * k * x;
      return std::numbers::sqrt2 * ((n % 2 == 1) ? std::cos(arg) : std::sin(arg));
    }
    // Orthonormal Jacobi recurrence up to n.
    double pm1 = 0.0, p = p0;
    for (int k = 0; k < n; ++k) {
      const double pk1 = ((x - rec_b[k]) * p - (k > 0 ? rec_a[k] * pm1 : 0.0)) / rec_a[k + 1];
      pm1 = p;
      p = pk1;
    }
    return p;
  }

  Eigen::VectorXd eigen_all(double x) const {
    Eigen::VectorXd v(truncation + 1);
    if (kind == ModelKind::Torus) {
      v[0] = 1.0;
      for (int n = 1; n <= truncation; ++n) {
        const int k = (n + 1) / 2;
        const double arg = 2.0 * kPi * k * x;
        v[n] = std::numbers::sqrt2 * ((n % 2 == 1) ? std::cos(arg) : std::sin(arg));
      }
      return v;
    }
    double pm1 = 0.0, p = p0;
    v[0] = p;
    for (int k = 0; k < truncation; ++k) {
      const double pk1 = ((x - rec_b[k]) * p - (k > 0 ? rec_a[k] * pm1 : 0.0)) / rec_a[k + 1];
      pm1 = p;
      p = pk1;
      v[k + 1] = p;
    }
    return v;
  }

  double distance(double x, double y) const {
    if (kind == ModelKind::Torus) {
      double d = std::abs(x - y);
      d -= std::floor(d);
      return std::min(d, 1.0 - d);
    }
    const double tx = std::acos(std::clamp(x, -1.0, 1.0));
    const double ty = std::acos(std::clamp(y, -1.0, 1.0));
    return std::abs(tx - ty);
  }

  double ball_measure(double x, double r) const {
    if (r <= 0.0) return 0.0;
    if (kind == ModelKind::Torus) return std::min(2.0 * r, 1.0);
    const double tx = std::acos(std::clamp(x, -1.0, 1.0));
    const double lo = std::max(0.0, tx - r);
    const double hi = std::min(kPi, tx + r);
    if (hi <= lo) return 0.0;
    const double pre = std::pow(2.0, alpha + beta + 1.0);
    const double ea = 2.0 * alpha + 1.0, eb = 2.0 * beta + 1.0;
    auto w = [&](double t) {
      return pre * std::pow(std::sin(0.5 * t), ea) * std::pow(std::cos(0.5 * t), eb);
    };
    return adaptive_gk(w, lo, hi, 1e-11, 1e-15 * total_measure);
  }

  double measure_dim() const {
    // Doubling scan on a fixed coarse lattice; see doubling_report for the
    // user-facing version.
    double c0 = 0.0;
    const int nx = 33, nr = 25;
    for (int i = 0; i < nx; ++i) {
      double x;
      if (kind == ModelKind::Torus) {
        x = static_cast<double>(i) / nx;
      } else {
        x = std::cos(kPi * (static_cast<double>(i) + 0.5) / nx);
      }
      for (int j = 0; j < nr; ++j) {
        const double r = diam / 3.0 * std::pow(10.0, -3.0 * (nr - 1 - j) / (nr - 1));
        const double num = ball_measure(x, 2.0 * r);
        const double den = ball_measure(x, r);
        if (den > 0.0) c0 = std::max(c0, num / den);
      }
      // Endpoints drive the Jacobi doubling constant.
      if (kind == ModelKind::Jacobi && i == 0) {
        for (int j = 0; j < nr; ++j) {
          const double r = diam / 3.0 * std::pow(10.0, -3.0 * (nr - 1 - j) / (nr - 1));
          const double den = ball_measure(1.0, r);
          if (den > 0.0) c0 = std::max(c0, ball_measure(1.0, 2.0 * r) / den);
          const double den2 = ball_measure(-1.0, r);
          if (den2 > 0.0) c0 = std::max(c0, ball_measure(-1.0, 2.0 * r) / den2);
        }
      }
    }
    return std::log2(c0);
  }

  void tabulate() {
    const int q = grid.size();
    eigen_table.resize(truncation + 1, q);
    for (int col = 0; col < q; ++col) eigen_table.col(col) = eigen_all(grid.nodes[col]);
    sqrt_lambda.resize(truncation + 1);
    for (int n = 0; n <= truncation; ++n) sqrt_lambda[n] = std::sqrt(eigenvalue(n));
  }
};

SpectralModel SpectralModel::torus(int truncation, int resolution) {
  if (truncation < 0) throw ConfigError("truncation must be nonnegative");
  auto impl = std::make_shared<Impl>();
  impl->kind = ModelKind::Torus;
  impl->truncation = truncation;
  impl->diam = 0.5;
  impl->total_measure = 1.0;
  if (resolution == 0) resolution = 2 * truncation + 2;
  if (resolution < 2 * truncation + 2) throw ConfigError("torus grid resolution below 2N+2");
  impl->grid.nodes.resize(resolution);
  impl->grid.weights.assign(resolution, 1.0 / resolution);
  for (int i = 0; i < resolution; ++i) impl->grid.nodes[i] = static_cast<double>(i) / resolution;
  impl->tabulate();
  impl->dim_d = impl->measure_dim();
  return SpectralModel(impl);
}

SpectralModel SpectralModel::jacobi(double alpha, double beta, int truncation, int resolution) {
  if (alpha <= -1.0 || beta <= -1.0) throw ConfigError("Jacobi parameters must exceed -1");
  if (truncation < 0) throw ConfigError("truncation must be nonnegative");
  auto impl = std::make_shared<Impl>();
  impl->kind = ModelKind::Jacobi;
  impl->alpha = alpha;
  impl->beta = beta;
  impl->truncation = truncation;
  impl->diam = kPi;
  impl->total_measure = std::pow(2.0, alpha + beta + 1.0) * std::exp(log_beta(alpha + 1.0, beta + 1.0));
  impl->p0 = 1.0 / std::sqrt(impl->total_measure);

  if (resolution == 0) resolution = 2 * truncation + 2;
  if (resolution < 2 * truncation + 2) throw ConfigError("Jacobi quadrature resolution below 2N+2");

  // Orthonormal three-term recurrence coefficients (Gautschi's r_jacobi).
  const int m = std::max(truncation, resolution) + 1;
  impl->rec_b.resize(m + 1);
  impl->rec_a.resize(m + 2);
  const double s = alpha + beta;
  impl->rec_b[0] = (beta - alpha) / (s + 2.0);
  for (int k = 1; k <= m; ++k) {
    const double den = (2.0 * k + s) * (2.0 * k + s + 2.0);
    impl->rec_b[k] = (beta * beta - alpha * alpha) / den;
  }
  impl->rec_a[1] = std::sqrt(4.0 * (alpha + 1.0) * (beta + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0)));
  for (int k = 2; k <= m + 1; ++k) {
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + s);
    const double den = (2.0 * k + s) * (2.0 * k + s) * (2.0 * k + s + 1.0) * (2.0 * k + s - 1.0);
    impl->rec_a[k] = std::sqrt(num / den);
  }

  // Golub-Welsch for the working grid.
  {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(resolution, resolution);
    for (int i = 0; i < resolution; ++i) {
      jac(i, i) = impl->rec_b[i];
      if (i + 1 < resolution) jac(i, i + 1) = jac(i + 1, i) = impl->rec_a[i + 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    impl->grid.nodes.resize(resolution);
    impl->grid.weights.resize(resolution);
    for (int i = 0; i < resolution; ++i) {
      impl->grid.nodes[i] = es.eigenvalues()[i];
      const double v0 = es.eigenvectors()(0, i);
      impl->grid.weights[i] = impl->total_measure * v0 * v0;
    }
  }
  impl->tabulate();
  impl->dim_d = impl->measure_dim();
  return SpectralModel(impl);
}

ModelKind SpectralModel::kind() const { return impl_->kind; }
int SpectralModel::truncation() const { return impl_->truncation; }
double SpectralModel::alpha() const { return impl_->alpha; }
double SpectralModel::beta() const { return impl_->beta; }
double SpectralModel::eigenvalue(int n) const { return impl_->eigenvalue(n); }
double SpectralModel::sqrt_eigenvalue(int n) const {
  if (n < 0 || n > impl_->truncation) throw std::out_of_range("eigen index out of range");
  return impl_->sqrt_lambda[n];
}
double SpectralModel::max_sqrt_eigenvalue() const { return impl_->sqrt_lambda.back(); }
double SpectralModel::eigenfunction(int n, double x) const { return impl_->eigenfunction(n, x); }
Eigen::VectorXd SpectralModel::eigen_all(double x) const { return impl_->eigen_all(x); }
double SpectralModel::distance(double x, double y) const { return impl_->distance(x, y); }
double SpectralModel::ball_measure(double x, double r) const { return impl_->ball_measure(x, r); }
double SpectralModel::diameter() const { return impl_->diam; }
double SpectralModel::total_measure() const { return impl_->total_measure; }
double SpectralModel::dim_d() const { return impl_->dim_d; }
const Quadrature& SpectralModel::grid() const { return impl_->grid; }
int SpectralModel::grid_size() const { return impl_->grid.size(); }
const Eigen::MatrixXd& SpectralModel::eigen_table() const { return impl_->eigen_table; }

const std::vector<double>& SpectralModel::ball_measure_grid(double r) const {
  std::uint64_t key;
  static_assert(sizeof(key) == sizeof(r));
  std::memcpy(&key, &r, sizeof(key));
  auto it = impl_->ball_cache.find(key);
  if (it != impl_->ball_cache.end()) return it->second;
  std::vector<double> values(impl_->grid.size());
  for (int q = 0; q < impl_->grid.size(); ++q) values[q] = impl_->ball_measure(impl_->grid.nodes[q], r);
  return impl_->ball_cache.emplace(key, std::move(values)).first->second;
}

Quadrature SpectralModel::quadrature(int resolution) const {
  if (resolution < 2 * impl_->truncation + 2)
    throw ConfigError("quadrature resolution below 2N+2");
  if (impl_->kind == ModelKind::Torus) {
    Quadrature q;
    q.nodes.resize(resolution);
    q.weights.assign(resolution, 1.0 / resolution);
    for (int i = 0; i < resolution; ++i) q.nodes[i] = static_cast<double>(i) / resolution;
    return q;
  }
  // Gauss-Jacobi at arbitrary resolution; extend recurrence as needed.
  std::vector<double> b(resolution), a(resolution);
  const double s = impl_->alpha + impl_->beta;
  const double al = impl_->alpha, be = impl_->beta;
  b[0] = (be - al) / (s + 2.0);
  for (int k = 1; k < resolution; ++k)
    b[k] = (be * be - al * al) / ((2.0 * k + s) * (2.0 * k + s + 2.0));
  a[0] = 0.0;
  if (resolution > 1)
    a[1] = std::sqrt(4.0 * (al + 1.0) * (be + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0)));
  for (int k = 2; k < resolution; ++k) {
    const double num = 4.0 * k * (k + al) * (k + be) * (k + s);
    const double den = (2.0 * k + s) * (2.0 * k + s) * (2.0 * k + s + 1.0) * (2.0 * k + s - 1.0);
    a[k] = std::sqrt(num / den);
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(resolution, resolution);
  for (int i = 0; i < resolution; ++i) {
    jac(i, i) = b[i];
    if (i + 1 < resolution) jac(i, i + 1) = jac(i + 1, i) = a[i + 1];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes.resize(resolution);
  q.weights.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    q.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    q.weights[i] = impl_->total_measure * v0 * v0;
  }
  return q;
}

double SpectralModel::polynomial_property_constant() const { return 2.0; }

int SpectralModel::band_index_bound(double band) const {
  if (band < 0.0) return -1;
  const int n = impl_->truncation;
  if (impl_->kind == ModelKind::Torus) {
    const int k = static_cast<int>(std::floor(band / (2.0 * kPi) * (1.0 + 1e-14)));
    return std::min(n, 2 * k);
  }
  const double s = impl_->alpha + impl_->beta + 1.0;
  const double root = 0.5 * (-s + std::sqrt(s * s + 4.0 * band * band));
  return std::min(n, static_cast<int>(std::floor(root * (1.0 + 1e-14) + 1e-12)));
}

int SpectralModel::product_moment_bound(double band) const {
  const int n = impl_->truncation;
  if (impl_->kind == ModelKind::Torus) {
    const int k = static_cast<int>(std::floor(band / (2.0 * kPi) * (1.0 + 1e-14)));
    return std::min(n, 4 * k);
  }
  return std::min(n, 2 * band_index_bound(band));
}

double SpectralModel::lp_norm(const Eigen::VectorXd& v, double p) const {
  const auto& w = impl_->grid.weights;
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  double acc = 0.0;
  for (int q = 0; q < v.size(); ++q) acc += w[q] * std::pow(std::abs(v[q]), p);
  return std::pow(acc, 1.0 / p);
}

Eigen::VectorXd SpectralModel::synthesize(const Eigen::VectorXd& coeffs) const {
  return impl_->eigen_table.transpose() * coeffs;
}

Eigen::VectorXd SpectralModel::analyze(const Eigen::VectorXd& grid_values) const {
  Eigen::VectorXd weighted(grid_values.size());
  for (int q = 0; q < grid_values.size(); ++q) weighted[q] = grid_values[q] * impl_->grid.weights[q];
  return impl_->eigen_table * weighted;
}

DoublingReport doubling_report(const SpectralModel& model, int samples) {
  if (samples < 1) throw ConfigError("doubling_report needs samples >= 1");
  const int nx = std::max(4, static_cast<int>(std::round(std::sqrt(static_cast<double>(samples)))));
  const int nr = nx;
  DoublingReport rep;
  rep.reverse_c_hat = std::numeric_limits<double>::infinity();
  const auto& nodes = model.grid().nodes;
  for (int i = 0; i < nx; ++i) {
    const double x = nodes[static_cast<std::size_t>(i) * nodes.size() / nx];
    for (int j = 0; j < nr; ++j) {
      const double r = model.diameter() / 3.0 *
                       std::pow(10.0, -3.0 * (nr - 1 - j) / std::max(1, nr - 1));
      const double den = model.ball_measure(x, r);
      if (den <= 0.0) continue;
      const double ratio = model.ball_measure(x, 2.0 * r) / den;
      rep.c0_hat = std::max(rep.c0_hat, ratio);
      rep.reverse_c_hat = std::min(rep.reverse_c_hat, ratio);
    }
  }
  rep.d_hat = std::log2(rep.c0_hat);
  return rep;
}

}  // namespace hkframe
