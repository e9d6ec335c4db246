#ifndef HKFRAME_APPROX_HPP
#define HKFRAME_APPROX_HPP

#include <Eigen/Core>
#include <vector>

#include "hkframe/frames.hpp"

namespace hkframe {

struct ApproxCurve {
  std::vector<int> n;          // term counts, starting at 0
  std::vector<double> sigma;   // greedy L^p residuals (sigma[0] = ||f||_p)
  double p = 2.0;
  double s = 0.0;
  double tau = 0.0;
  bool clipped = false;        // n_max exceeded the index set
};

/// N(f) = (sum_xi ||<f, psi~_xi> psi_xi||_p^tau)^{1/tau} with
/// 1/tau = s/d + 1/p (d from the frame's model).
double btau_norm(const FrameSystem& frame, const Eigen::VectorXd& f, double s, double p);

/// Greedy rearrangement curve: sorts the terms a_xi psi_xi by L^p norm
/// (stable, ties by index), then measures the residual of every partial sum
/// by quadrature. n_max past the index set is clipped (flagged).
ApproxCurve greedy_sigma_curve(const FrameSystem& frame, const Eigen::VectorXd& f, double p,
                               int n_max);

/// Shared greedy machinery over an explicit term dictionary (columns =
/// term values on the grid); used by the orthonormal closed-form oracle.
std::vector<double> greedy_residuals(const SpectralModel& model, const Eigen::VectorXd& f_grid,
                                     const Eigen::MatrixXd& term_values, double p, int n_max);

struct SlopeReport {
  double slope_hat = 0.0;
  bool pass = false;
  bool inconclusive = false;  // curve flat at quadrature noise
};

/// Least-squares slope of log sigma_n vs log n over the decaying range;
/// pass iff slope <= -s/d + 0.15. Requires >= 5 usable points spanning a
/// decade in n.
SlopeReport jackson_slope(const ApproxCurve& curve, double s, double d);

}  // namespace hkframe

#endif
