#ifndef HKFRAME_MODEL_SPACE_HPP
#define HKFRAME_MODEL_SPACE_HPP

#include <Eigen/Core>
#include <memory>
#include <vector>

namespace hkframe {

enum class ModelKind { Torus, Jacobi };

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

struct DoublingReport {
  double c0_hat = 0.0;       // measured sup of |B(x,2r)|/|B(x,r)|
  double d_hat = 0.0;        // log2(c0_hat)
  double reverse_c_hat = 0.0;  // measured inf of the same ratio
};

/// A concrete Dirichlet-space model (M, rho, mu, L) with an explicit
/// eigen-system, distance, ball measures and quadrature.
///
/// Two instances are provided: the unit-circumference torus [0,1) with
/// L = -d^2/dx^2 and Lebesgue measure, and the Jacobi interval [-1,1]
/// with d mu = (1-x)^alpha (1+x)^beta dx, eigenvalues
/// lambda_k = k(k + alpha + beta + 1) and the arccos metric.
///
/// Immutable after construction; all queries are pure.
class SpectralModel {
 public:
  /// resolution == 0 picks the default working grid of 2N+2 points.
  static SpectralModel torus(int truncation, int resolution = 0);
  static SpectralModel jacobi(double alpha, double beta, int truncation, int resolution = 0);

  ModelKind kind() const;
  int truncation() const;  // N: eigenfunctions indexed 0..N
  double alpha() const;
  double beta() const;

  double eigenvalue(int n) const;  // throws std::out_of_range for n > N
  double sqrt_eigenvalue(int n) const;
  double max_sqrt_eigenvalue() const;
  double eigenfunction(int n, double x) const;
  /// All eigenfunction values e_0(x)..e_N(x) in one recurrence pass.
  Eigen::VectorXd eigen_all(double x) const;

  double distance(double x, double y) const;
  double ball_measure(double x, double r) const;
  /// |B(x_q, r)| over the working grid; cached per radius.
  const std::vector<double>& ball_measure_grid(double r) const;

  double diameter() const;
  double total_measure() const;
  /// Homogeneous dimension d_hat = log2(c0_hat), measured at construction.
  double dim_d() const;

  /// Fresh quadrature at the given resolution. Torus: equispaced
  /// trapezoid; Jacobi: Gauss-Jacobi (Golub-Welsch). Throws ConfigError
  /// if resolution < 2N+2.
  Quadrature quadrature(int resolution) const;

  /// The working grid the model was built with.
  const Quadrature& grid() const;
  int grid_size() const;
  /// Tabulated eigenfunction values, (N+1) x grid_size.
  const Eigen::MatrixXd& eigen_table() const;

  /// Constant a with Sigma^2_lambda * Sigma^2_lambda subset Sigma^1_{a lambda}.
  double polynomial_property_constant() const;
  /// Largest eigen index n with sqrt(lambda_n) <= band.
  int band_index_bound(double band) const;
  /// Largest eigen index needed to integrate products of two functions
  /// that are band-limited to `band` (exact, from the degree arithmetic).
  int product_moment_bound(double band) const;

  /// L^p norm on the working grid (p >= small positive; p = inf -> max).
  double lp_norm(const Eigen::VectorXd& grid_values, double p) const;
  /// Synthesize eigencoefficients to grid values.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;
  /// Analyze grid values to eigencoefficients via quadrature inner products.
  Eigen::VectorXd analyze(const Eigen::VectorXd& grid_values) const;

 private:
  struct Impl;
  explicit SpectralModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Empirical doubling scan over sampled (x, r) with r <= diam/3.
DoublingReport doubling_report(const SpectralModel& model, int samples);

}  // namespace hkframe

#endif
