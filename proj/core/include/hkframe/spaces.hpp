#ifndef HKFRAME_SPACES_HPP
#define HKFRAME_SPACES_HPP

#include <Eigen/Core>
#include <limits>
#include <vector>

#include "hkframe/frames.hpp"
#include "hkframe/model_space.hpp"

namespace hkframe {

struct SpaceParams {
  double s = 0.0;   // smoothness
  double p = 2.0;   // integrability (0, inf]; F-spaces need p < inf
  double q = 2.0;   // summability (0, inf]
  bool tilde = false;  // ball-volume weighted (nonclassical) variant
  double d = 1.0;   // homogeneous dimension used in the tilde weights

  bool quasi() const { return p < 1.0 || q < 1.0; }
};

enum class NormMethod { LPDecomp, PhiVariant, Heat, Sequence };

/// Besov / Triebel-Lizorkin / Sobolev norms of band-limited functions by
/// spectral Littlewood-Paley decomposition (base 2 and base b routes), the
/// heat semigroup, and frame-coefficient sequence norms. Functions enter as
/// eigencoefficient vectors; L^p norms are grid quadrature norms.
class SpaceCalculator {
 public:
  /// base b and a second cutoff shape for the Phi-variant route; the
  /// classical route always uses base 2.
  explicit SpaceCalculator(const SpectralModel& model, double b = 2.0, double eps_classical = 0.5,
                           double eps_phi = 0.3);

  /// Frame for the Sequence method (dual or tight). Not owned.
  void attach_frame(const FrameSystem* frame) { frame_ = frame; }

  double besov_norm(const Eigen::VectorXd& f, const SpaceParams& sp, NormMethod method) const;
  double tl_norm(const Eigen::VectorXd& f, const SpaceParams& sp, NormMethod method) const;
  double sobolev_norm(const Eigen::VectorXd& f, double s, double p) const;

  /// Sequence-space norms of explicit coefficients (Besov: b / b~,
  /// TL: f / f~ with averaged cell indicators).
  double besov_sequence_norm(const CoefficientSet& coeffs, const SpaceParams& sp) const;
  double tl_sequence_norm(const CoefficientSet& coeffs, const SpaceParams& sp) const;

  const SpectralModel& model() const { return model_; }
  int classical_levels() const { return static_cast<int>(mult2_.size()) - 1; }
  /// Multiplier of the j-th classical block at sqrt(lambda_n).
  double classical_multiplier(int j, int n) const { return mult2_[static_cast<std::size_t>(j)][n]; }

 private:
  SpectralModel model_;
  const FrameSystem* frame_ = nullptr;
  double b_;
  std::vector<Eigen::VectorXd> mult2_;  // base-2 blocks, full spectrum length
  std::vector<Eigen::VectorXd> multb_;  // base-b blocks (Phi variant)
  int heat_levels_ = 0;                 // V in the dyadic t-grid 4^{-nu}

  double lp_block_norm(const Eigen::VectorXd& f, const SpaceParams& sp, bool base_b) const;
  double heat_besov_norm(const Eigen::VectorXd& f, const SpaceParams& sp) const;
  double tl_block_norm(const Eigen::VectorXd& f, const SpaceParams& sp, bool base_b) const;
  double heat_tl_norm(const Eigen::VectorXd& f, const SpaceParams& sp) const;
};

enum class EquivalencePair { LPvsPhi, LPvsHeat, LPvsSequence, Fp2VsSobolev };

struct EquivalenceReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread() const { return max_ratio / min_ratio; }
};

/// Ratio spread of two norm routes over a family of functions (Besov for
/// the first three pairs, TL/Sobolev for the last). Throws
/// DegenerateInputError when a family member has zero norm.
EquivalenceReport equivalence_report(const SpaceCalculator& calc,
                                     const std::vector<Eigen::VectorXd>& family,
                                     const SpaceParams& sp, EquivalencePair pair);

/// Discretized maximal operator M_t: sup over balls B(c, r) containing x
/// with grid-node centers and a dyadic radius ladder.
Eigen::VectorXd maximal_function(const SpectralModel& model, const Eigen::VectorXd& grid_values,
                                 double t_exponent);

}  // namespace hkframe

#endif
