#ifndef HKFRAME_SPECTRAL_OPS_HPP
#define HKFRAME_SPECTRAL_OPS_HPP

#include <Eigen/Core>
#include <functional>
#include <limits>

#include "hkframe/model_space.hpp"

namespace hkframe {

/// A band-limited operator f(delta sqrt(L)) represented by its multiplier
/// values m_n = f(delta sqrt(lambda_n)); the kernel is the finite spectral
/// sum sum_n m_n e_n(x) e_n(y). Immutable; evaluations are pure.
class KernelOperator {
 public:
  KernelOperator(const SpectralModel& model, Eigen::VectorXd multipliers, double delta);

  const SpectralModel& model() const { return *model_; }
  const Eigen::VectorXd& multipliers() const { return mult_; }
  double delta() const { return delta_; }
  /// Smallest band containing all nonzero multipliers (inf if the top
  /// multiplier is nonzero, i.e. the function is not band-limited within
  /// the truncation).
  double band() const { return band_; }
  double value_at_zero() const { return mult_[0]; }  // f(0), since lambda_0 = 0

  double kernel(double x, double y) const;
  /// Kernel row K(x, .) on the working grid.
  Eigen::VectorXd kernel_row(double x) const;
  /// Apply to eigencoefficients (diagonal action).
  Eigen::VectorXd apply(const Eigen::VectorXd& coeffs) const;
  /// Apply to grid values: analyze, multiply, synthesize.
  Eigen::VectorXd apply_grid(const Eigen::VectorXd& grid_values) const;

 private:
  const SpectralModel* model_;
  Eigen::VectorXd mult_;
  double delta_;
  double band_;
};

/// Tabulates f(delta sqrt(lambda_n)). Throws DomainError if f is not finite
/// at some required point.
KernelOperator kernel_operator(const SpectralModel& model, const std::function<double(double)>& f,
                               double delta);

/// max over sampled x of | int K(x,y) dmu(y) - f(0) |.
double markov_residual(const KernelOperator& op);

struct Envelope {
  enum class Form { Polynomial, SubExponential };
  Form form = Form::SubExponential;
  double c = 0.0;        // fitted amplitude
  double sigma = 0.0;    // polynomial decay order (Polynomial form)
  double kappa = 0.0;    // sub-exponential rate (SubExponential form)
  double beta = 0.0;     // fixed exponent 1 - eps
  double r2 = 0.0;       // goodness of the log-envelope fit
  double decades = 0.0;  // magnitude range covered by the fit
  int points = 0;
};

/// Samples |K(x,y)|, divides out (|B(x,delta)||B(y,delta)|)^{-1/2}, bins by
/// the envelope abscissa, and fits the declared envelope to the bin maxima
/// by least squares on log-magnitude. Near-diagonal (rho < 2 delta) and
/// sub-noise (1e-12 relative) samples are excluded. Throws ConstructionError
/// if too few points remain.
Envelope localization_report(const KernelOperator& op, Envelope::Form form, double beta);

/// Even multiplier whose Fourier transform is supported in [-A, A]
/// (a 6-fold box convolution: f(u) = sinc^6(A u / 6)), smooth enough for
/// the finite-speed hypothesis.
std::function<double(double)> bandlimited_multiplier(double A);

struct FiniteSpeedReport {
  double residual = 0.0;    // max |K| outside the cone rho > c~ delta A (1+margin)
  double inside_max = 0.0;  // max |K| inside rho < 0.5 c~ delta A
  double sup = 0.0;         // max |K| overall
};

/// Checks the propagation cone of f(delta sqrt(L)) for f with supp f^ in
/// [-A, A]; wave speed c~ = 1 for the torus, estimated empirically otherwise.
FiniteSpeedReport finite_speed_residual(const SpectralModel& model,
                                        const std::function<double(double)>& f, double A,
                                        double delta, double margin);

/// Empirical wave speed: smallest c such that the kernel magnitude outside
/// rho > c delta A stays below threshold * sup|K|.
double estimate_wave_speed(const SpectralModel& model, double A, double delta, double threshold);

struct ComposeReport {
  Envelope op1, op2, product;
  double c_natural_hat = 0.0;     // c_product / (c1 c2)
  int triple_violations = 0;      // count over the random scalar-inequality trials
  double product_kernel_dev = 0.0;  // spectral product vs quadrature composition
};

/// Product of two operators sharing delta and model (multipliers multiply);
/// cross-validates against quadrature composition, fits envelopes, and
/// property-tests the beta-subadditivity inequality on random triples.
ComposeReport compose_check(const KernelOperator& op1, const KernelOperator& op2, double beta,
                            int triples, std::uint64_t seed);

}  // namespace hkframe

#endif
