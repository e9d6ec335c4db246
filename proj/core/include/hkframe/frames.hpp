#ifndef HKFRAME_FRAMES_HPP
#define HKFRAME_FRAMES_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "hkframe/cutoffs.hpp"
#include "hkframe/model_space.hpp"
#include "hkframe/nets.hpp"

namespace hkframe {

enum class FrameVariant : std::uint8_t { Frame1 = 0, Dual = 1, Tight = 2 };

/// One frequency level of a frame: the net X_j, the multiplier slice of
/// Psi_j on its eigen band, per-center element scales, and (for the dual
/// variant) the Gamma band and the spectral coefficients of the duals.
struct FrameLevel {
  int j = 0;
  double delta = 0.0;
  NetLevel net;
  int band_lo = 0, band_hi = -1;    // eigen index range of Psi_j
  Eigen::VectorXd psi_mult;          // Psi_j(sqrt(lambda_n)), n in [band_lo, band_hi]
  Eigen::VectorXd scale;             // sqrt(|A_xi|) (Frame1/Dual) or sqrt(w_xi) (Tight)

  int gband_lo = 0, gband_hi = -1;  // Gamma_{lambda_j} band (Dual only)
  Eigen::VectorXd gamma_mult;
  Eigen::MatrixXd dual_coeffs;       // (gband size) x centers, RAW T Gamma(.,xi) columns
  double r_norm = 0.0;               // measured ||R_lambda||_{2->2}
  double eps_meas = 0.0;             // sampling constant on Sigma_{lambda_j b^3}
};

struct CoefficientSet {
  enum class Provenance : std::uint8_t { AnalysisPrimal = 0, AnalysisDual = 1, Synthetic = 2 };
  Provenance provenance = Provenance::Synthetic;
  Eigen::VectorXd values;  // level-major flattening of the index set X
};

/// Band-limited frame over a SpectralModel: Frame #1 (primal only), its
/// nonstandard dual via T_lambda = (Id - R_lambda)^{-1}, or the tight frame
/// under the polynomial property. Elements are stored as exact spectral
/// coefficient vectors; evaluation and transforms are dense linear algebra
/// on the working grid. Immutable after construction.
class FrameSystem {
 public:
  const SpectralModel& model() const { return model_; }
  FrameVariant variant() const { return variant_; }
  double b() const { return b_; }
  double gamma() const { return gamma_; }
  int levels() const { return static_cast<int>(levels_.size()) - 1; }  // J
  double cutoff_eps() const { return cutoff_eps_; }
  /// Band on which analysis->synthesis is the identity: [0, b^J].
  double covered_band() const;
  int total_elements() const;
  int level_offset(int j) const;
  const FrameLevel& level(int j) const { return levels_[static_cast<std::size_t>(j)]; }
  bool self_dual() const { return variant_ == FrameVariant::Tight; }
  bool has_dual() const { return self_dual() || variant_ == FrameVariant::Dual; }

  /// Frame coefficients of f (eigencoefficient vector). dual = true uses
  /// the dual elements (identical to primal for tight frames).
  CoefficientSet analyze(const Eigen::VectorXd& eigencoeffs, bool dual) const;
  /// Weighted sum of primal elements -> eigencoefficients.
  Eigen::VectorXd synthesize(const CoefficientSet& coeffs) const;
  /// Weighted sum of dual elements -> eigencoefficients.
  Eigen::VectorXd synthesize_dual(const CoefficientSet& coeffs) const;

  /// Spectral coefficients (length N+1) of one element.
  Eigen::VectorXd element_coeffs(int j, int k, bool dual) const;
  /// Grid values of every element of a level, (grid size) x centers.
  Eigen::MatrixXd level_element_values(int j, bool dual) const;

 private:
  friend FrameSystem build_frame1(const SpectralModel&, const Cutoff&, double, int, double);
  friend void build_dual(FrameSystem&);
  friend FrameSystem build_tight(const SpectralModel&, const Cutoff&, double, int, double);
  friend struct FrameIO;

  SpectralModel model_ = SpectralModel::torus(0);
  FrameVariant variant_ = FrameVariant::Frame1;
  double b_ = 2.0, gamma_ = 0.5, cutoff_eps_ = 0.5;
  std::vector<FrameLevel> levels_;
  std::vector<int> offsets_;

  void rebuild_offsets();
};

/// Frame #1: nets at delta_j = gamma b^{-j-2}, elements
/// psi_xi = |A_xi|^{1/2} Psi_j(sqrt L)(., xi) from the additive LP system.
/// Requires b^{J+1} <= sqrt(lambda_N).
FrameSystem build_frame1(const SpectralModel& model, const Cutoff& phi_a, double b, int J,
                         double gamma);

/// Constructs the dual system on a Frame1 instance: per level forms
/// R_lambda = Gamma^2 - Gamma P Gamma on the truncated eigenbasis, measures
/// ||R||, inverts T = (Id - R)^{-1} directly, and sets
/// psi~_xi = c_eps |A_xi|^{1/2} T[Gamma(., xi)]. Throws
/// DualConstructionError if ||R|| >= 1/2 (use a smaller gamma).
void build_dual(FrameSystem& frame);

/// Tight frame under the polynomial property: squared LP system and
/// cubature weights on the product band, psi_xi = sqrt(w_jxi) Psi_j(., xi).
FrameSystem build_tight(const SpectralModel& model, const Cutoff& phi_a, double b, int J,
                        double gamma);

/// Sampling bands that govern gamma for a J-level frame: b^{j+2} per level
/// (level 0 also needs b^3 for the dual construction).
std::vector<double> frame_sampling_bands(double b, int J);

/// Halving sweep for the frame's gamma against the exact sampling constant.
double frame_auto_gamma(const SpectralModel& model, double b, int J, double eps_target = 0.1);

/// Gamma sweep for tight frames, driven by cubature feasibility.
double tight_auto_gamma(const SpectralModel& model, double b, int J);

struct FrameBoundsReport {
  double lower_hat = 0.0;
  double upper_hat = 0.0;
};

/// min/max over random band-limited f of sum |<f, psi_xi>|^2 / ||f||_2^2
/// (dual = true probes the dual system instead).
FrameBoundsReport frame_bounds(const FrameSystem& frame, int trials, std::uint64_t seed,
                               bool dual = false);

}  // namespace hkframe

#endif
