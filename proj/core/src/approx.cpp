#include "hkframe/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hkframe/errors.hpp"

namespace hkframe {

double btau_norm(const FrameSystem& frame, const Eigen::VectorXd& f, double s, double p) {
  if (p < 1.0 || std::isinf(p)) throw ConfigError("btau_norm requires 1 <= p < inf");
  const SpectralModel& m = frame.model();
  const double tau = 1.0 / (s / m.dim_d() + 1.0 / p);
  const CoefficientSet a = frame.analyze(f, true);
  double acc = 0.0;
  for (int j = 0; j <= frame.levels(); ++j) {
    const Eigen::MatrixXd vals = frame.level_element_values(j, false);
    for (int k = 0; k < frame.level(j).net.size(); ++k) {
      const double coeff = std::abs(a.values[frame.level_offset(j) + k]);
      if (coeff == 0.0) continue;
      acc += std::pow(coeff * m.lp_norm(vals.col(k), p), tau);
    }
  }
  return std::pow(acc, 1.0 / tau);
}

std::vector<double> greedy_residuals(const SpectralModel& model, const Eigen::VectorXd& f_grid,
                                     const Eigen::MatrixXd& term_values, double p, int n_max) {
  const int terms = static_cast<int>(term_values.cols());
  n_max = std::min(n_max, terms);

  // Sort by term L^p norm, descending, stable in the original index.
  std::vector<double> norms(static_cast<std::size_t>(terms));
  for (int k = 0; k < terms; ++k) norms[static_cast<std::size_t>(k)] = model.lp_norm(term_values.col(k), p);
  std::vector<int> order(static_cast<std::size_t>(terms));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms[static_cast<std::size_t>(a)] > norms[static_cast<std::size_t>(b)]; });

  // sigma_n is the best greedy prefix with at most n terms. For a redundant
  // dictionary the raw partial-sum residuals can wobble upward by a hair;
  // every prefix G_m with m <= n is an n-term approximant, so the running
  // minimum is the honest monotone upper bound for sigma_n.
  std::vector<double> sigma;
  sigma.reserve(static_cast<std::size_t>(n_max) + 1);
  Eigen::VectorXd residual = f_grid;
  sigma.push_back(model.lp_norm(residual, p));
  for (int i = 0; i < n_max; ++i) {
    residual -= term_values.col(order[static_cast<std::size_t>(i)]);
    sigma.push_back(std::min(sigma.back(), model.lp_norm(residual, p)));
  }
  return sigma;
}

ApproxCurve greedy_sigma_curve(const FrameSystem& frame, const Eigen::VectorXd& f, double p,
                               int n_max) {
  if (!frame.has_dual()) throw ContractError("greedy_sigma_curve needs a dual or tight frame");
  const SpectralModel& m = frame.model();
  const CoefficientSet a = frame.analyze(f, true);

  Eigen::MatrixXd terms(m.grid_size(), frame.total_elements());
  for (int j = 0; j <= frame.levels(); ++j) {
    const Eigen::MatrixXd vals = frame.level_element_values(j, false);
    for (int k = 0; k < frame.level(j).net.size(); ++k) {
      const int idx = frame.level_offset(j) + k;
      terms.col(idx) = a.values[idx] * vals.col(k);
    }
  }

  ApproxCurve curve;
  curve.p = p;
  curve.clipped = n_max > frame.total_elements();
  const int effective = std::min(n_max, frame.total_elements());
  curve.sigma = greedy_residuals(m, m.synthesize(f), terms, p, effective);
  curve.n.resize(curve.sigma.size());
  std::iota(curve.n.begin(), curve.n.end(), 0);
  return curve;
}

SlopeReport jackson_slope(const ApproxCurve& curve, double s, double d) {
  SlopeReport rep;
  if (curve.sigma.empty()) throw ConfigError("jackson_slope: empty curve");
  const double floor = std::max(curve.sigma[0] * 1e-9, 1e-300);

  std::vector<double> lx, ly;
  for (std::size_t i = 1; i < curve.sigma.size(); ++i) {
    if (curve.sigma[i] <= floor) break;  // entered the quadrature-noise plateau
    lx.push_back(std::log(static_cast<double>(curve.n[i])));
    ly.push_back(std::log(curve.sigma[i]));
  }
  if (lx.size() < 5 || lx.back() - lx.front() < std::log(10.0)) {
    rep.inconclusive = true;
    return rep;
  }
  const int n = static_cast<int>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  rep.slope_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.pass = rep.slope_hat <= -s / d + 0.15;
  return rep;
}

}  // namespace hkframe
