#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hkframe/cutoffs.hpp"
#include "hkframe/errors.hpp"
#include "hkframe/rng.hpp"
#include "hkframe/spectral_ops.hpp"

using namespace hkframe;

namespace {
constexpr double kPi = std::numbers::pi;

std::function<double(double)> cutoff_fn(const Cutoff& c) {
  return [c](double u) { return c(u); };
}
}  // namespace

TEST_CASE("identity multiplier reproduces the truncated reproducing kernel") {
  auto m = SpectralModel::torus(32);
  auto op = kernel_operator(m, [](double) { return 1.0; }, 0.1);
  const double x = 0.21, y = 0.55;
  double direct = 0.0;
  for (int n = 0; n <= m.truncation(); ++n) direct += m.eigenfunction(n, x) * m.eigenfunction(n, y);
  CHECK(op.kernel(x, y) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("TypeA multiplier with small delta acts as the identity") {
  auto m = SpectralModel::torus(32);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  const double delta = 0.9 / m.max_sqrt_eigenvalue();
  auto op = kernel_operator(m, cutoff_fn(phi), delta);
  Rng rng(11);
  Eigen::VectorXd c(m.truncation() + 1);
  for (int n = 0; n < c.size(); ++n) c[n] = rng.symmetric();
  CHECK((op.apply(c) - c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("applying a wide TypeA operator to e_3 returns e_3") {
  auto m = SpectralModel::torus(64);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto op = kernel_operator(m, cutoff_fn(phi), 0.05);
  // delta*sqrt(lambda_3) = 0.05 * 2 pi * 2 < 1, inside the plateau.
  Eigen::VectorXd g(m.grid_size());
  for (int q = 0; q < m.grid_size(); ++q) g[q] = m.eigenfunction(3, m.grid().nodes[q]);
  const Eigen::VectorXd out = op.apply_grid(g);
  CHECK((out - g).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Markov identity on both models") {
  auto phiA = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto psiB = make_cutoff(CutoffKind::TypeB, 2.0, 0.5);
  for (auto m : {SpectralModel::torus(64), SpectralModel::jacobi(0.0, 0.0, 48),
                 SpectralModel::jacobi(0.5, -0.5, 48)}) {
    auto opA = kernel_operator(m, cutoff_fn(phiA), 0.05);
    CHECK(markov_residual(opA) <= 1e-10);
    CHECK(opA.value_at_zero() == 1.0);

    auto opB = kernel_operator(m, cutoff_fn(psiB), 0.05);
    CHECK(opB.value_at_zero() == 0.0);
    CHECK(markov_residual(opB) <= 1e-10);

    auto opL = kernel_operator(m, [](double u) { return u * u; }, 0.05);
    CHECK(markov_residual(opL) <= 1e-10);
  }
}

TEST_CASE("kernel symmetry") {
  auto m = SpectralModel::jacobi(0.25, 0.0, 32);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto op = kernel_operator(m, cutoff_fn(phi), 0.1);
  for (double x : {-0.8, -0.1, 0.4}) {
    for (double y : {-0.5, 0.2, 0.9}) {
      CHECK(op.kernel(x, y) == doctest::Approx(op.kernel(y, x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("sub-exponential localization of smooth cutoff kernels") {
  auto m = SpectralModel::torus(512);
  for (double eps : {0.3, 0.5}) {
    auto phi = make_cutoff(CutoffKind::TypeA, 2.0, eps);
    auto op = kernel_operator(m, cutoff_fn(phi), 0.002);
    auto env = localization_report(op, Envelope::Form::SubExponential, 1.0 - eps);
    CHECK(env.kappa > 0.0);
    CHECK(env.r2 >= 0.95);
    CHECK(env.decades >= 4.0);
  }
}

TEST_CASE("hard truncation gives only polynomial decay (Dirichlet kernel)") {
  auto m = SpectralModel::torus(256);
  const double delta = 1.0 / m.max_sqrt_eigenvalue();
  auto hard = kernel_operator(m, [](double) { return 1.0; }, delta);
  auto env = localization_report(hard, Envelope::Form::Polynomial, 0.0);
  CHECK(env.sigma <= 2.0);  // flagged: poor decay
  // Smooth multiplier at the same scale decays much faster; the fitted
  // order clears the k - d/2 - 1 band for the window-supported k = 4.
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto smooth = kernel_operator(m, cutoff_fn(phi), 0.004);
  auto envs = localization_report(smooth, Envelope::Form::Polynomial, 0.0);
  CHECK(envs.sigma >= 4.0 - m.dim_d() / 2.0 - 1.0);
  CHECK(envs.sigma >= 2.0 * env.sigma);
}

TEST_CASE("finite speed propagation on the torus") {
  auto m = SpectralModel::torus(512);
  auto f = bandlimited_multiplier(1.0);
  auto rep = finite_speed_residual(m, f, 1.0, 0.2, 0.25);
  CHECK(rep.residual <= 1e-6 * rep.sup);
  CHECK(rep.inside_max > 1e3 * rep.residual);  // genuinely nontrivial inside the cone

  // Gaussian multiplier: full support, the cone test must fail visibly.
  auto gauss = [](double u) { return std::exp(-u * u); };
  auto repg = finite_speed_residual(m, gauss, 1.0, 0.2, 0.25);
  CHECK(repg.residual > 1e-4 * repg.sup);
}

TEST_CASE("compose_check: product stays in the algebra") {
  auto m = SpectralModel::torus(256);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto psi1 = [&phi](double u) { return phi(u / 4.0) - phi(u / 2.0); };  // a Psi_j band slice
  auto op = kernel_operator(m, psi1, 0.01);
  auto rep = compose_check(op, op, 0.5, 10000, 42);
  CHECK(rep.triple_violations == 0);
  CHECK(rep.product.kappa > 0.0);
  CHECK(rep.product.kappa >= 0.5 * rep.op1.kappa);
  CHECK(rep.product.kappa <= 2.0 * rep.op1.kappa);
  CHECK(rep.c_natural_hat > 0.0);
  CHECK(rep.product_kernel_dev <= 1e-10);
}

TEST_CASE("compose with identity leaves the kernel unchanged") {
  auto m = SpectralModel::torus(64);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto op = kernel_operator(m, cutoff_fn(phi), 0.05);
  auto id = kernel_operator(m, [](double) { return 1.0; }, 0.05);
  const Eigen::VectorXd prod = op.multipliers().cwiseProduct(id.multipliers());
  CHECK((prod - op.multipliers()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boundary case of the beta-subadditivity inequality") {
  // rho(x,u) = rho(y,u) = 1, beta = 1/2: lhs = 2 >= rho(x,y)^{1/2} + (2 - sqrt 2).
  const double beta = 0.5;
  for (double rho_xy : {0.0, 0.5, 1.0, 2.0}) {
    const double lhs = 2.0;
    const double rhs = std::pow(rho_xy, beta) + (2.0 - std::pow(2.0, beta));
    CHECK(lhs >= rhs - 1e-12);
  }
}

TEST_CASE("projector idempotence on spectral spaces") {
  auto m = SpectralModel::jacobi(0.0, 0.0, 32);
  const double lam = 10.0;
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto proj = kernel_operator(m, cutoff_fn(phi), 1.0 / lam);
  for (int n = 0; n <= m.band_index_bound(lam); ++n) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m.truncation() + 1);
    c[n] = 1.0;
    CHECK((proj.apply(c) - c).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Nikolskii inequality exponent on the torus") {
  auto m = SpectralModel::torus(256);
  const double p = 2.0;
  std::vector<double> logs_lam, logs_ratio;
  for (double lam : {32.0, 64.0, 128.0, 256.0, 512.0}) {
    // The reproducing kernel of the band extremizes the sup/L2 ratio.
    const int nb = m.band_index_bound(lam);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m.truncation() + 1);
    for (int n = 0; n <= nb; ++n) c[n] = m.eigenfunction(n, 0.25);
    const Eigen::VectorXd g = m.synthesize(c);
    const double ratio = m.lp_norm(g, std::numeric_limits<double>::infinity()) / m.lp_norm(g, p);
    logs_lam.push_back(std::log(lam));
    logs_ratio.push_back(std::log(ratio));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(logs_lam.size());
  for (int i = 0; i < n; ++i) {
    sx += logs_lam[i];
    sy += logs_ratio[i];
    sxx += logs_lam[i] * logs_lam[i];
    sxy += logs_lam[i] * logs_ratio[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope - m.dim_d() / p) <= 0.1);
}

TEST_CASE("kernel L^p norms track |B(x,delta)|^{1/p-1}") {
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  for (auto m : {SpectralModel::torus(256), SpectralModel::jacobi(0.0, 0.0, 128)}) {
    for (double p : {1.0, 2.0}) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (double delta : {0.02, 0.05, 0.1}) {
        auto op = kernel_operator(m, cutoff_fn(phi), delta);
        const auto& grid = m.grid();
        for (int i = 0; i < grid.size(); i += std::max(1, grid.size() / 9)) {
          const Eigen::VectorXd row = op.kernel_row(grid.nodes[i]);
          const double norm = m.lp_norm(row, p);
          const double scale = std::pow(m.ball_measure(grid.nodes[i], delta), 1.0 / p - 1.0);
          lo = std::min(lo, norm / scale);
          hi = std::max(hi, norm / scale);
        }
      }
      CHECK(hi / lo <= 8.0);
      CHECK(lo > 0.0);
    }
  }
}

TEST_CASE("domain error for multipliers undefined on the spectrum") {
  auto m = SpectralModel::torus(16);
  auto bad = [](double u) { return 1.0 / (u - 0.3); };  // pole between spectrum samples
  CHECK_NOTHROW((void)kernel_operator(m, bad, 0.1));
  auto nan_at = [](double u) { return u > 1.0 ? std::nan("") : 1.0; };
  CHECK_THROWS_AS((void)kernel_operator(m, nan_at, 1.0), DomainError);
}

TEST_CASE("Hoelder continuity smoke: nearby rows stay close") {
  auto m = SpectralModel::torus(128);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  const double delta = 0.05;
  auto op = kernel_operator(m, [&phi](double u) { return phi(u); }, delta);
  const double sup = std::abs(op.kernel(0.3, 0.3));
  for (double h : {1e-3, 1e-4}) {
    double worst = 0.0;
    for (double x : {0.1, 0.42, 0.77}) {
      for (double y : {0.2, 0.55}) {
        worst = std::max(worst, std::abs(op.kernel(x, y + h) - op.kernel(x, y)));
      }
    }
    // Small perturbations of y move the kernel by O(h/delta) at most.
    CHECK(worst <= 4.0 * (h / delta) * sup);
  }
}
