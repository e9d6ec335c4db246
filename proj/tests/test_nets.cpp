#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hkframe/errors.hpp"
#include "hkframe/nets.hpp"

using namespace hkframe;

namespace {
constexpr double kPi = std::numbers::pi;

// Brute-force verification of separation, covering and nesting.
void verify_net(const SpectralModel& m, const NetLevel& net) {
  for (int a = 0; a < net.size(); ++a)
    for (int b = a + 1; b < net.size(); ++b)
      CHECK(m.distance(net.centers[a], net.centers[b]) >= net.delta * (1.0 - 1e-12) - 1e-15);

  const auto& grid = m.grid();
  double total = 0.0;
  for (int q = 0; q < grid.size(); ++q) {
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < net.size(); ++k)
      dmin = std::min(dmin, m.distance(grid.nodes[q], net.centers[k]));
    CHECK(dmin < net.delta);  // covering

    const int cell = net.cell_of_node[q];
    const double dcell = m.distance(grid.nodes[q], net.centers[cell]);
    CHECK(dcell < net.delta);  // A_xi inside B(xi, delta)
    if (dmin < net.delta / 2.0) {
      // nodes of B(xi, delta/2) must be assigned to A_xi
      CHECK(dcell == doctest::Approx(dmin).epsilon(1e-12));
    }
  }
  for (double a : net.cell_measures) total += a;
  CHECK(total == doctest::Approx(m.total_measure()).epsilon(1e-12));
}
}  // namespace

TEST_CASE("torus net at delta 0.1 on a divisible grid: 10 equispaced centers") {
  auto m = SpectralModel::torus(64, 1050);
  NetLevel net = maximal_net(m, 0.1, 0.0);
  CHECK(net.size() == 10);
  for (int k = 0; k < net.size(); ++k) {
    CHECK(net.centers[k] == doctest::Approx(0.1 * k).epsilon(1e-12));
    CHECK(net.cell_measures[k] == doctest::Approx(0.1).epsilon(1e-12));
  }
  verify_net(m, net);
}

TEST_CASE("oversized delta covers with a single center") {
  auto m = SpectralModel::torus(16);
  NetLevel net = maximal_net(m, 0.6, 0.0);
  CHECK(net.size() == 1);
  CHECK(net.cell_measures[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Jacobi net at pi/8: 8 centers equispaced in arccos") {
  auto m = SpectralModel::jacobi(0.0, 0.0, 48);
  NetLevel net = maximal_net(m, kPi / 8.0, 1.0);  // seed at x = 1 (theta = 0)
  CHECK(net.size() == 8);
  std::vector<double> thetas;
  for (double c : net.centers) thetas.push_back(std::acos(c));
  std::sort(thetas.begin(), thetas.end());
  for (std::size_t k = 1; k < thetas.size(); ++k) {
    CHECK(thetas[k] - thetas[k - 1] >= kPi / 8.0 * (1.0 - 1e-12));
    CHECK(thetas[k] - thetas[k - 1] <= 2.0 * kPi / 8.0);  // maximality caps the gaps
  }
  verify_net(m, net);
}

TEST_CASE("nets on both models pass the brute-force invariants across scales") {
  for (auto m : {SpectralModel::torus(32), SpectralModel::jacobi(0.5, -0.5, 32)}) {
    for (double frac : {0.31, 0.11, 0.042}) {
      NetLevel net = maximal_net(m, frac * m.diameter(), m.grid().nodes[3]);
      verify_net(m, net);
    }
  }
}

TEST_CASE("discrete packing sums stay bounded and stable") {
  for (auto m : {SpectralModel::torus(32), SpectralModel::jacobi(0.0, 0.0, 32)}) {
    const double d = m.dim_d();
    double worst_hi = 0.0, worst_lo = std::numeric_limits<double>::infinity();
    for (double frac : {0.2, 0.1, 0.05}) {
      const double delta = frac * m.diameter();
      NetLevel net = maximal_net(m, delta, m.grid().nodes[0]);
      double level_max = 0.0;
      const auto& grid = m.grid();
      for (int q = 0; q < grid.size(); q += std::max(1, grid.size() / 17)) {
        double acc = 0.0;
        for (int k = 0; k < net.size(); ++k)
          acc += std::pow(1.0 + m.distance(grid.nodes[q], net.centers[k]) / delta, -2.0 * d - 1.0);
        level_max = std::max(level_max, acc);
      }
      worst_hi = std::max(worst_hi, level_max);
      worst_lo = std::min(worst_lo, level_max);
    }
    CHECK(worst_hi <= 25.0);
    CHECK(worst_hi / worst_lo <= 3.0);
  }
}

TEST_CASE("mz_ratio: constants give zero, oscillation shrinks with gamma") {
  auto m = SpectralModel::torus(64, 1024);
  Eigen::VectorXd cconst = Eigen::VectorXd::Zero(m.truncation() + 1);
  cconst[0] = 2.5;
  NetLevel net = maximal_net(m, 0.05, 0.0);
  CHECK(mz_ratio(m, net, cconst, 2.0) == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::VectorXd ce1 = Eigen::VectorXd::Zero(m.truncation() + 1);
  ce1[1] = 1.0;  // e_1, band 2*pi
  const double lam = 2.0 * kPi;
  {
    NetLevel fine = maximal_net(m, 0.1 / lam, 0.0);
    CHECK(mz_ratio(m, fine, ce1, 2.0) <= 1.0 / 3.0);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double gamma : {0.4, 0.2, 0.1, 0.05}) {
    NetLevel lvl = maximal_net(m, gamma / lam, 0.0);
    const double r = mz_ratio(m, lvl, ce1, 2.0);
    CHECK(r <= prev * 1.02);
    prev = r;
  }
  CHECK_THROWS_AS((void)mz_ratio(m, net, Eigen::VectorXd::Zero(m.truncation() + 1), 2.0),
                  DegenerateInputError);
}

TEST_CASE("sampling_ratio: constants exact, random band-limited in [0.9, 1.1]") {
  auto m = SpectralModel::torus(64, 1024);
  Eigen::VectorXd cconst = Eigen::VectorXd::Zero(m.truncation() + 1);
  cconst[0] = -0.7;
  NetLevel coarse = maximal_net(m, 0.07, 0.0);
  CHECK(sampling_ratio(m, coarse, cconst) == doctest::Approx(1.0).epsilon(1e-12));

  const double band = 2.0 * kPi * 8.0;
  NetLevel net = maximal_net(m, 0.05 / band, 0.0);
  double dev = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double r = sampling_ratio(m, net, random_band_limited(m, band, 1000 + t));
    CHECK(r >= 0.9);
    CHECK(r <= 1.1);
    dev = std::max(dev, std::abs(r - 1.0));
  }
  // Halving gamma does not worsen the worst deviation.
  NetLevel finer = maximal_net(m, 0.025 / band, 0.0);
  double dev2 = 0.0;
  for (int t = 0; t < 100; ++t)
    dev2 = std::max(dev2, std::abs(sampling_ratio(m, finer, random_band_limited(m, band, 1000 + t)) - 1.0));
  CHECK(dev2 <= dev * 1.05 + 1e-12);

  // The exact Gram constant dominates every sampled deviation.
  CHECK(sampling_constant(m, net, band) >= dev - 1e-12);
}

TEST_CASE("cubature: equispaced torus net reproduces trapezoid weights") {
  auto m = SpectralModel::torus(64, 1050);
  NetLevel net = maximal_net(m, 0.1, 0.0);
  auto rep = cubature_weights(m, net, 2.0 * kPi * 4.0);
  REQUIRE(static_cast<int>(net.weights.size()) == 10);
  for (double w : net.weights) CHECK(w == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rep.moment_residual <= 1e-10);
  CHECK(rep.min_weight > 0.0);
}

TEST_CASE("cubature: moment exactness and bracket on both models") {
  for (auto m : {SpectralModel::torus(64, 512), SpectralModel::jacobi(0.0, 0.0, 64)}) {
    const double band = (m.kind() == ModelKind::Torus) ? 2.0 * kPi * 6.0 : 24.0;
    NetLevel net = maximal_net(m, 0.35 / band * m.diameter() / 0.5, m.grid().nodes[1]);
    auto rep = cubature_weights(m, net, band);
    CHECK(rep.moment_residual <= 1e-10);
    CHECK(rep.min_weight > 0.0);
    CHECK(rep.bracket_lo_margin >= 1.0);
    CHECK(rep.bracket_hi_margin >= 1.0);
    // Exactness against the working quadrature on a dense product check.
    const auto& table = m.eigen_table();
    for (int n = 0; n <= m.band_index_bound(band); ++n) {
      double lhs = 0.0;
      for (int k = 0; k < net.size(); ++k) lhs += net.weights[k] * table(n, net.center_nodes[k]);
      double rhs = 0.0;
      for (int q = 0; q < m.grid_size(); ++q) rhs += m.grid().weights[q] * table(n, q);
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("cubature: band 0 keeps the seed weights") {
  auto m = SpectralModel::torus(32);
  NetLevel net = maximal_net(m, 0.11, 0.0);
  cubature_weights(m, net, 0.0);
  for (int k = 0; k < net.size(); ++k)
    CHECK(net.weights[k] == doctest::Approx(net.cell_measures[k]).epsilon(1e-13));
}

TEST_CASE("auto_gamma meets the sampling target on every band") {
  auto m = SpectralModel::torus(96);
  const std::vector<double> bands = {4.0, 8.0, 16.0, 32.0, 64.0};
  const double gamma = auto_gamma(m, bands, 0.1);
  CHECK(gamma >= 0.05);
  for (double band : bands) {
    NetLevel net = maximal_net(m, gamma / band, m.grid().nodes[0]);
    CHECK(sampling_constant(m, net, band) <= 0.1);
  }
}

TEST_CASE("random_band_limited respects the band") {
  auto m = SpectralModel::torus(64);
  const Eigen::VectorXd c = random_band_limited(m, 2.0 * kPi * 3.0, 7);
  for (int n = 0; n <= m.truncation(); ++n) {
    if (m.sqrt_eigenvalue(n) > 2.0 * kPi * 3.0) CHECK(c[n] == 0.0);
  }
  CHECK(c.cwiseAbs().maxCoeff() > 0.0);
}
