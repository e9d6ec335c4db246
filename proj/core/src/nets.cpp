#include "hkframe/nets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hkframe/errors.hpp"
#include "hkframe/rng.hpp"

namespace hkframe {

NetLevel maximal_net(const SpectralModel& model, double delta, double seed_point) {
  if (delta <= 0.0 || delta > model.diameter() * 2.0 + 1e-12)
    throw ConfigError("net delta outside (0, diam]");
  const auto& grid = model.grid();
  const int q = grid.size();

  int seed = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < q; ++i) {
    const double d = model.distance(grid.nodes[i], seed_point);
    if (d < best) {
      best = d;
      seed = i;
    }
  }

  NetLevel net;
  net.delta = delta;
  net.center_nodes.push_back(seed);
  // Separation with a relative tolerance: grid coordinates are floats and
  // distances that are delta up to rounding must count as separated.
  const double sep = delta * (1.0 - 1e-12);
  for (int i = 0; i < q; ++i) {
    if (i == seed) continue;
    bool separated = true;
    for (int c : net.center_nodes) {
      if (model.distance(grid.nodes[i], grid.nodes[c]) < sep) {
        separated = false;
        break;
      }
    }
    if (separated) net.center_nodes.push_back(i);
  }
  std::sort(net.center_nodes.begin(), net.center_nodes.end());
  net.centers.resize(net.center_nodes.size());
  for (std::size_t k = 0; k < net.center_nodes.size(); ++k)
    net.centers[k] = grid.nodes[net.center_nodes[k]];

  // Nearest-center partition, ties to the lower center index.
  net.cell_of_node.resize(q);
  net.cell_measures.assign(net.center_nodes.size(), 0.0);
  for (int i = 0; i < q; ++i) {
    int argmin = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < net.size(); ++k) {
      const double d = model.distance(grid.nodes[i], net.centers[k]);
      if (d < dmin - 1e-15) {
        dmin = d;
        argmin = k;
      }
    }
    net.cell_of_node[i] = argmin;
    net.cell_measures[argmin] += grid.weights[i];
  }
  return net;
}

double mz_ratio(const SpectralModel& model, const NetLevel& net, const Eigen::VectorXd& coeffs,
                double p) {
  const Eigen::VectorXd f = model.synthesize(coeffs);
  const double fp = model.lp_norm(f, p);
  if (fp == 0.0) throw DegenerateInputError("mz_ratio on zero function");
  const auto& grid = model.grid();
  std::vector<double> f_at_center(net.size());
  for (int k = 0; k < net.size(); ++k) f_at_center[k] = f[net.center_nodes[k]];
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double d = std::abs(f[i] - f_at_center[net.cell_of_node[i]]);
    acc += grid.weights[i] * std::pow(d, p);
  }
  return std::pow(acc, 1.0 / p) / fp;
}

double sampling_ratio(const SpectralModel& model, const NetLevel& net,
                      const Eigen::VectorXd& coeffs) {
  const Eigen::VectorXd f = model.synthesize(coeffs);
  const double f2 = model.lp_norm(f, 2.0);
  if (f2 == 0.0) throw DegenerateInputError("sampling_ratio on zero function");
  double acc = 0.0;
  for (int k = 0; k < net.size(); ++k) {
    const double v = f[net.center_nodes[k]];
    acc += net.cell_measures[k] * v * v;
  }
  return acc / (f2 * f2);
}

double sampling_constant(const SpectralModel& model, const NetLevel& net, double band) {
  const int nb = model.band_index_bound(band);
  if (nb < 0) return 0.0;
  const auto& table = model.eigen_table();
  Eigen::MatrixXd ec(nb + 1, net.size());
  for (int k = 0; k < net.size(); ++k)
    ec.col(k) = table.col(net.center_nodes[k]).head(nb + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nb + 1, nb + 1);
  for (int k = 0; k < net.size(); ++k)
    gram += net.cell_measures[k] * ec.col(k) * ec.col(k).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  double worst = 0.0;
  for (int i = 0; i <= nb; ++i) worst = std::max(worst, std::abs(es.eigenvalues()[i] - 1.0));
  return worst;
}

CubatureReport cubature_weights(const SpectralModel& model, NetLevel& net, double band) {
  const int nb = model.band_index_bound(band);
  const int nc = net.size();
  const auto& grid = model.grid();
  const auto& table = model.eigen_table();

  // Moments int e_n dmu by the working quadrature.
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(nb + 1);
  for (int q = 0; q < grid.size(); ++q)
    moments += grid.weights[q] * table.col(q).head(nb + 1);

  Eigen::MatrixXd E(nb + 1, nc);
  for (int k = 0; k < nc; ++k) E.col(k) = table.col(net.center_nodes[k]).head(nb + 1);

  const Eigen::VectorXd seed = Eigen::Map<const Eigen::VectorXd>(net.cell_measures.data(), nc);
  const Eigen::VectorXd residual = moments - E * seed;
  // Minimal-norm multiplicative correction w = seed .* (1 + u): an absolute
  // correction would swamp the tiny cells near the Jacobi endpoints.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E * seed.asDiagonal());
  const Eigen::VectorXd u = cod.solve(residual);
  Eigen::VectorXd w = seed.cwiseProduct(Eigen::VectorXd::Ones(nc) + u);

  CubatureReport rep;
  rep.moments = nb + 1;
  rep.moment_residual = (E * w - moments).cwiseAbs().maxCoeff();
  rep.min_weight = w.minCoeff();
  rep.bracket_lo_margin = std::numeric_limits<double>::infinity();
  rep.bracket_hi_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nc; ++k) {
    const double lo = (2.0 / 3.0) * model.ball_measure(net.centers[k], net.delta / 2.0);
    const double hi = 2.0 * model.ball_measure(net.centers[k], net.delta);
    if (w[k] <= 0.0)
      throw CubatureError("nonpositive cubature weight", k);
    if (w[k] < lo || w[k] > hi)
      throw CubatureError("cubature weight outside the two-sided bracket", k);
    rep.bracket_lo_margin = std::min(rep.bracket_lo_margin, w[k] / lo);
    rep.bracket_hi_margin = std::min(rep.bracket_hi_margin, hi / w[k]);
  }
  net.weights.assign(w.data(), w.data() + nc);
  return rep;
}

double auto_gamma(const SpectralModel& model, const std::vector<double>& bands, double eps_target,
                  double gamma_floor) {
  for (double gamma = 0.8; gamma >= gamma_floor; gamma *= 0.5) {
    bool ok = true;
    for (double band : bands) {
      const double delta = gamma / band;
      if (delta > model.diameter()) continue;  // single-ball cover, trivially exact below
      NetLevel net = maximal_net(model, delta, model.grid().nodes[0]);
      if (sampling_constant(model, net, band) > eps_target) {
        ok = false;
        break;
      }
    }
    if (ok) return gamma;
  }
  throw ConstructionError("auto_gamma: no gamma above the floor meets the sampling target");
}

Eigen::VectorXd random_band_limited(const SpectralModel& model, double band, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(model.truncation() + 1);
  const int nb = model.band_index_bound(band);
  for (int n = 0; n <= nb; ++n) c[n] = rng.symmetric();
  return c;
}

}  // namespace hkframe
