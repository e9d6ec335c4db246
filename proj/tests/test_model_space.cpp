#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hkframe/errors.hpp"
#include "hkframe/model_space.hpp"

using namespace hkframe;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent finite-difference Rayleigh quotient on a fine grid.
double rayleigh_quotient_torus(const SpectralModel& m, int n, double h) {
  const int grid = 20000;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double d = (m.eigenfunction(n, x + h) - m.eigenfunction(n, x - h)) / (2.0 * h);
    const double f = m.eigenfunction(n, x);
    num += d * d;
    den += f * f;
  }
  return num / den;
}
}  // namespace

TEST_CASE("eigenpair: Jacobi eigenvalue law lambda_k = k(k+alpha+beta+1)") {
  auto m = SpectralModel::jacobi(0.0, 0.0, 8);
  CHECK(m.eigenvalue(3) == doctest::Approx(12.0).epsilon(1e-15));
  auto m2 = SpectralModel::jacobi(0.5, -0.5, 8);
  CHECK(m2.eigenvalue(4) == doctest::Approx(4.0 * (4.0 + 1.0)).epsilon(1e-15));
}

TEST_CASE("eigenpair: torus ground state and first cosine mode") {
  auto m = SpectralModel::torus(16);
  CHECK(m.eigenvalue(0) == 0.0);
  for (double x : {0.0, 0.33, 0.77}) CHECK(m.eigenfunction(0, x) == 1.0);

  // lambda_1 = 4 pi^2, confirmed by the finite-difference Rayleigh quotient.
  const double lam1 = m.eigenvalue(1);
  CHECK(lam1 == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-14));
  const double rq = rayleigh_quotient_torus(m, 1, 1e-5);
  CHECK(lam1 == doctest::Approx(rq).epsilon(1e-8));
}

TEST_CASE("eigenpair: index error past truncation") {
  auto m = SpectralModel::torus(4);
  CHECK_THROWS_AS((void)m.eigenvalue(5), std::out_of_range);
  CHECK_THROWS_AS((void)m.eigenfunction(5, 0.1), std::out_of_range);
}

TEST_CASE("geometry: distances") {
  auto mj = SpectralModel::jacobi(0.0, 0.0, 4);
  CHECK(mj.distance(1.0, -1.0) == doctest::Approx(kPi).epsilon(1e-15));
  auto mt = SpectralModel::torus(4);
  CHECK(mt.distance(0.1, 0.9) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(mt.distance(0.25, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("geometry: ball measures") {
  auto mt = SpectralModel::torus(4);
  CHECK(mt.ball_measure(0.5, 0.1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(mt.ball_measure(0.0, 0.7) == 1.0);  // saturates at mu(M)

  // Riemann-sum oracle for the Jacobi(0,0) ball around x=0 with r=pi/2:
  // the arccos-ball covers all of (-1,1), so the measure is 2.
  auto mj = SpectralModel::jacobi(0.0, 0.0, 4);
  const int steps = 400000;
  double oracle = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double y = -1.0 + 2.0 * (i + 0.5) / steps;
    if (std::abs(std::acos(y) - kPi / 2.0) < kPi / 2.0) oracle += 2.0 / steps;
  }
  CHECK(oracle == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(mj.ball_measure(0.0, kPi / 2.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(mj.ball_measure(0.0, kPi / 2.0) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("quadrature: torus trapezoid") {
  auto m = SpectralModel::torus(3, 8);
  auto q = m.quadrature(8);
  double sum = 0.0;
  for (double w : q.weights) {
    CHECK(w == doctest::Approx(0.125).epsilon(1e-15));
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quadrature: Gauss-Jacobi exactness and weight sums") {
  // Two-point Gauss-Legendre integrates x^2 exactly; closed form 2/3.
  auto m0 = SpectralModel::jacobi(0.0, 0.0, 0);
  auto q2 = m0.quadrature(2);
  double ix2 = 0.0;
  for (int i = 0; i < q2.size(); ++i) ix2 += q2.weights[i] * q2.nodes[i] * q2.nodes[i];
  CHECK(ix2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // (1-x)^{1/2} (1+x)^{-1/2} integrates to pi regardless of resolution.
  auto mhalf = SpectralModel::jacobi(0.5, -0.5, 0);
  for (int res : {2, 7, 33}) {
    auto q = mhalf.quadrature(res);
    double sum = 0.0;
    for (double w : q.weights) sum += w;
    CHECK(sum == doctest::Approx(kPi).epsilon(1e-12));
  }

  CHECK_THROWS_AS((void)SpectralModel::jacobi(0.0, 0.0, 8).quadrature(4), ConfigError);
}

TEST_CASE("orthonormality under the model quadrature") {
  for (auto m : {SpectralModel::torus(16), SpectralModel::jacobi(0.0, 0.0, 24),
                 SpectralModel::jacobi(0.5, -0.5, 24), SpectralModel::jacobi(2.0, 0.25, 24)}) {
    const auto& E = m.eigen_table();
    const auto& w = m.grid().weights;
    double worst = 0.0;
    for (int a = 0; a <= m.truncation(); ++a) {
      for (int b = a; b <= m.truncation(); ++b) {
        double ip = 0.0;
        for (int q = 0; q < m.grid_size(); ++q) ip += w[q] * E(a, q) * E(b, q);
        worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
      }
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("metric axioms and ball monotonicity on sampled points") {
  for (auto m : {SpectralModel::torus(8), SpectralModel::jacobi(0.5, -0.5, 8)}) {
    const auto& nodes = m.grid().nodes;
    const int step = std::max<int>(1, static_cast<int>(nodes.size()) / 7);
    for (std::size_t i = 0; i < nodes.size(); i += step) {
      for (std::size_t j = 0; j < nodes.size(); j += step) {
        CHECK(m.distance(nodes[i], nodes[j]) == m.distance(nodes[j], nodes[i]));
        for (std::size_t k = 0; k < nodes.size(); k += step) {
          CHECK(m.distance(nodes[i], nodes[j]) <=
                m.distance(nodes[i], nodes[k]) + m.distance(nodes[k], nodes[j]) + 1e-12);
        }
      }
      double prev = 0.0;
      for (double r : {0.01, 0.05, 0.2, 0.5, 1.0}) {
        const double b = m.ball_measure(nodes[i], r * m.diameter());
        CHECK(b >= prev - 1e-14);
        prev = b;
      }
    }
  }
}

TEST_CASE("doubling_report: torus ratio is exactly 2, reverse doubling holds") {
  auto m = SpectralModel::torus(8);
  auto rep = doubling_report(m, 100);
  CHECK(rep.c0_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.d_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.reverse_c_hat > 1.0);
  CHECK(m.dim_d() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("doubling_report: Jacobi(0,0) lands between dimension 1 and 2") {
  auto m = SpectralModel::jacobi(0.0, 0.0, 16);
  auto rep = doubling_report(m, 400);
  CHECK(rep.c0_hat <= 4.0 * (1.0 + 1e-6));
  CHECK(rep.d_hat >= 1.0);
  CHECK(rep.d_hat <= 2.0 + 1e-6);
  CHECK(rep.reverse_c_hat > 1.0);
  // Away from the endpoints the measure is essentially linear.
  const double interior = m.ball_measure(0.1, 0.02) > 0 ?
      m.ball_measure(0.1, 0.04) / m.ball_measure(0.1, 0.02) : 0.0;
  CHECK(interior == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("sampled volume comparison (doubling consequence)") {
  // |B(x,r)| <= c0 (1 + rho(x,y)/r)^d |B(y,r)| with the measured constants.
  for (auto m : {SpectralModel::torus(8), SpectralModel::jacobi(0.0, 0.0, 16)}) {
    auto rep = doubling_report(m, 400);
    const auto& nodes = m.grid().nodes;
    const int step = std::max<int>(1, static_cast<int>(nodes.size()) / 9);
    for (std::size_t i = 0; i < nodes.size(); i += step) {
      for (std::size_t j = 0; j < nodes.size(); j += step) {
        for (double r : {0.03, 0.1, 0.3}) {
          const double rr = r * m.diameter();
          const double lhs = m.ball_measure(nodes[i], rr);
          const double rho = m.distance(nodes[i], nodes[j]);
          const double rhs = rep.c0_hat * std::pow(1.0 + rho / rr, rep.d_hat) *
                             m.ball_measure(nodes[j], rr);
          CHECK(lhs <= rhs * 1.15);
        }
      }
    }
  }
}

TEST_CASE("band index bookkeeping") {
  auto mt = SpectralModel::torus(64);
  // sqrt(lambda) = 2 pi k; band 64 admits k <= 10, i.e. indices through 20.
  CHECK(mt.band_index_bound(64.0) == 20);
  CHECK(mt.band_index_bound(0.5) == 0);
  CHECK(mt.band_index_bound(-1.0) == -1);
  auto mj = SpectralModel::jacobi(0.0, 0.0, 64);
  const int nb = mj.band_index_bound(10.0);
  CHECK(mj.eigenvalue(nb) <= 100.0 + 1e-9);
  if (nb < 64) CHECK(mj.eigenvalue(nb + 1) > 100.0);
}

TEST_CASE("synthesize/analyze round trip") {
  for (auto m : {SpectralModel::torus(24), SpectralModel::jacobi(0.25, 0.0, 24)}) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m.truncation() + 1);
    c[0] = 0.3; c[3] = -1.2; c[17] = 0.8;
    Eigen::VectorXd back = m.analyze(m.synthesize(c));
    CHECK((back - c).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
