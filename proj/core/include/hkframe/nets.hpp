#ifndef HKFRAME_NETS_HPP
#define HKFRAME_NETS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "hkframe/model_space.hpp"

namespace hkframe {

/// A maximal delta-net over the model's working grid with its companion
/// partition (nearest-center assignment) and, after cubature construction,
/// positive weights exact on the requested spectral band.
struct NetLevel {
  double delta = 0.0;
  std::vector<int> center_nodes;       // grid indices of the centers
  std::vector<double> centers;         // center coordinates
  std::vector<int> cell_of_node;       // grid node -> center index
  std::vector<double> cell_measures;   // |A_xi|
  std::vector<double> weights;         // w_xi; empty until cubature_weights

  int size() const { return static_cast<int>(center_nodes.size()); }
};

/// Greedy maximal delta-net seeded at the grid node nearest seed_point;
/// nodes are scanned in index order and added when separated by >= delta
/// from all current centers. Ties in the partition go to the lower center
/// index.
NetLevel maximal_net(const SpectralModel& model, double delta, double seed_point);

/// Empirical Marcinkiewicz-Zygmund constant
/// (sum_xi int_{A_xi} |f - f(xi)|^p dmu)^{1/p} / ||f||_p for band-limited f
/// given by eigencoefficients. Throws DegenerateInputError on ||f||_p = 0.
double mz_ratio(const SpectralModel& model, const NetLevel& net, const Eigen::VectorXd& coeffs,
                double p);

/// sum_xi |A_xi| |f(xi)|^2 / ||f||_2^2.
double sampling_ratio(const SpectralModel& model, const NetLevel& net, const Eigen::VectorXd& coeffs);

/// Exact sampling constant: max |eig - 1| of the |A|-weighted Gram matrix
/// restricted to the band. This is the sup over all f in Sigma_band of
/// |sum |A_xi||f(xi)|^2 / ||f||_2^2 - 1|.
double sampling_constant(const SpectralModel& model, const NetLevel& net, double band);

struct CubatureReport {
  double moment_residual = 0.0;  // max_n |sum w e_n(xi) - int e_n|
  double min_weight = 0.0;
  double bracket_lo_margin = 0.0;  // min over xi of w/( (2/3)|B(xi,d/2)| )
  double bracket_hi_margin = 0.0;  // min over xi of 2|B(xi,d)| / w
  int moments = 0;
};

/// Fills net.weights with the minimal-deviation correction of |A_xi| that
/// integrates every eigenfunction with sqrt(lambda_n) <= band exactly.
/// Verifies positivity and the (2/3)|B(xi,delta/2)| <= w <= 2|B(xi,delta)|
/// bracket; throws CubatureError (carrying the offending center) otherwise.
CubatureReport cubature_weights(const SpectralModel& model, NetLevel& net, double band);

/// Largest gamma from a halving sweep such that the maximal net at
/// delta = gamma/band has sampling_constant <= eps_target for every band in
/// `bands`. Deterministic. Throws ConstructionError below gamma_floor.
double auto_gamma(const SpectralModel& model, const std::vector<double>& bands, double eps_target,
                  double gamma_floor = 0.05);

/// Random eigencoefficient vector supported on sqrt(lambda_n) <= band.
Eigen::VectorXd random_band_limited(const SpectralModel& model, double band, std::uint64_t seed);

}  // namespace hkframe

#endif
