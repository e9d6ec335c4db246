#include "hkframe/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hkframe/errors.hpp"
#include "hkframe/rng.hpp"

namespace hkframe {

KernelOperator::KernelOperator(const SpectralModel& model, Eigen::VectorXd multipliers, double delta)
    : model_(&model), mult_(std::move(multipliers)), delta_(delta) {
  if (delta <= 0.0) throw ConfigError("operator scale delta must be positive");
  if (mult_.size() != model.truncation() + 1) throw ContractError("multiplier vector length mismatch");
  band_ = 0.0;
  for (int n = 0; n <= model.truncation(); ++n)
    if (mult_[n] != 0.0) band_ = model.sqrt_eigenvalue(n);
  if (mult_[model.truncation()] != 0.0) band_ = std::numeric_limits<double>::infinity();
}

double KernelOperator::kernel(double x, double y) const {
  const Eigen::VectorXd ex = model_->eigen_all(x);
  const Eigen::VectorXd ey = model_->eigen_all(y);
  return ex.cwiseProduct(ey).dot(mult_);
}

Eigen::VectorXd KernelOperator::kernel_row(double x) const {
  const Eigen::VectorXd ex = model_->eigen_all(x);
  return model_->eigen_table().transpose() * mult_.cwiseProduct(ex);
}

Eigen::VectorXd KernelOperator::apply(const Eigen::VectorXd& coeffs) const {
  return mult_.cwiseProduct(coeffs);
}

Eigen::VectorXd KernelOperator::apply_grid(const Eigen::VectorXd& grid_values) const {
  return model_->synthesize(apply(model_->analyze(grid_values)));
}

KernelOperator kernel_operator(const SpectralModel& model, const std::function<double(double)>& f,
                               double delta) {
  Eigen::VectorXd m(model.truncation() + 1);
  for (int n = 0; n <= model.truncation(); ++n) {
    const double v = f(delta * model.sqrt_eigenvalue(n));
    if (!std::isfinite(v)) throw DomainError("multiplier function not finite at delta*sqrt(lambda_n)");
    m[n] = v;
  }
  return KernelOperator(model, std::move(m), delta);
}

double markov_residual(const KernelOperator& op) {
  const auto& model = op.model();
  const auto& grid = model.grid();
  const double f0 = op.value_at_zero();
  // int K(x, .) dmu collapses to m_0 e_0(x) int e_0 by quadrature exactness;
  // sample x over a grid subsample and integrate numerically anyway.
  double worst = 0.0;
  const int step = std::max(1, grid.size() / 48);
  for (int i = 0; i < grid.size(); i += step) {
    const Eigen::VectorXd row = op.kernel_row(grid.nodes[i]);
    double integral = 0.0;
    for (int q = 0; q < grid.size(); ++q) integral += grid.weights[q] * row[q];
    worst = std::max(worst, std::abs(integral - f0));
  }
  return worst;
}

namespace {

struct FitData {
  std::vector<double> abscissa;  // envelope argument per sample
  std::vector<double> logmag;    // log of normalized kernel magnitude
};

// Least squares y = intercept - slope * x; returns (intercept, slope, r2).
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& intercept,
                double& slope, double& r2) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  const double a = (sxx * sy - sx * sxy) / det;  // intercept
  const double b = (n * sxy - sx * sy) / det;    // slope (negative for decay)
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (int i = 0; i < n; ++i) {
    const double fit = a + b * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  intercept = a;
  slope = -b;
  r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace

Envelope localization_report(const KernelOperator& op, Envelope::Form form, double beta) {
  const auto& model = op.model();
  const auto& grid = model.grid();
  const double delta = op.delta();
  const auto& ball = model.ball_measure_grid(delta);

  // Collect normalized magnitudes over rows anchored at a few base points.
  FitData data;
  double peak = 0.0;
  const int bases = 6;
  for (int ib = 0; ib < bases; ++ib) {
    const int qx = static_cast<int>((ib + 0.5) * grid.size() / bases);
    const double x = grid.nodes[qx];
    const Eigen::VectorXd row = op.kernel_row(x);
    for (int qy = 0; qy < grid.size(); ++qy) {
      const double rho = model.distance(x, grid.nodes[qy]);
      const double mag = std::abs(row[qy]) * std::sqrt(ball[qx] * ball[qy]);
      peak = std::max(peak, mag);
      if (rho < 2.0 * delta) continue;  // envelopes bound tails, not the diagonal
      const double t = rho / delta;
      const double u = (form == Envelope::Form::Polynomial) ? std::log1p(t) : std::pow(t, beta);
      if (mag > 0.0) {
        data.abscissa.push_back(u);
        data.logmag.push_back(std::log(mag));
      }
    }
  }
  // Drop sub-noise samples relative to the peak.
  const double floor_log = std::log(peak) + std::log(1e-12);
  FitData kept;
  for (std::size_t i = 0; i < data.abscissa.size(); ++i) {
    if (data.logmag[i] >= floor_log) {
      kept.abscissa.push_back(data.abscissa[i]);
      kept.logmag.push_back(data.logmag[i]);
    }
  }
  if (kept.abscissa.size() < 8) throw ConstructionError("localization fit: too few points above noise");

  // Upper envelope: bin by abscissa, keep the max per bin.
  const int nbins = 48;
  const double lo = *std::min_element(kept.abscissa.begin(), kept.abscissa.end());
  const double hi = *std::max_element(kept.abscissa.begin(), kept.abscissa.end());
  if (hi <= lo) throw ConstructionError("localization fit: degenerate abscissa range");
  std::vector<double> bin_x(nbins), bin_y(nbins, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < kept.abscissa.size(); ++i) {
    int bin = static_cast<int>((kept.abscissa[i] - lo) / (hi - lo) * nbins);
    bin = std::clamp(bin, 0, nbins - 1);
    if (kept.logmag[i] > bin_y[bin]) {
      bin_y[bin] = kept.logmag[i];
      bin_x[bin] = kept.abscissa[i];
    }
  }
  std::vector<double> fx, fy;
  for (int bin = 0; bin < nbins; ++bin) {
    if (std::isfinite(bin_y[bin])) {
      fx.push_back(bin_x[bin]);
      fy.push_back(bin_y[bin]);
    }
  }
  if (fx.size() < 5) throw ConstructionError("localization fit: too few envelope bins");

  Envelope env;
  env.form = form;
  env.beta = beta;
  env.points = static_cast<int>(fx.size());
  double intercept, slope, r2;
  linear_fit(fx, fy, intercept, slope, r2);
  env.c = std::exp(intercept);
  env.r2 = r2;
  if (form == Envelope::Form::Polynomial) {
    env.sigma = slope;
  } else {
    env.kappa = slope;
  }
  env.decades = (*std::max_element(fy.begin(), fy.end()) - *std::min_element(fy.begin(), fy.end())) /
                std::log(10.0);
  return env;
}

std::function<double(double)> bandlimited_multiplier(double A) {
  return [A](double u) {
    const double v = A * u / 6.0;
    if (std::abs(v) < 1e-8) return 1.0 - v * v;  // sinc^6 ~ 1 - v^2 near 0
    const double s = std::sin(v) / v;
    const double s2 = s * s;
    return s2 * s2 * s2;
  };
}

FiniteSpeedReport finite_speed_residual(const SpectralModel& model,
                                        const std::function<double(double)>& f, double A,
                                        double delta, double margin) {
  KernelOperator op = kernel_operator(model, f, delta);
  const double speed = (model.kind() == ModelKind::Torus) ? 1.0 : estimate_wave_speed(model, A, delta, 1e-5);
  const double cone = speed * delta * A;
  const auto& grid = model.grid();
  FiniteSpeedReport rep;
  const int step = std::max(1, grid.size() / 128);
  for (int i = 0; i < grid.size(); i += step) {
    const Eigen::VectorXd row = op.kernel_row(grid.nodes[i]);
    for (int q = 0; q < grid.size(); ++q) {
      const double rho = model.distance(grid.nodes[i], grid.nodes[q]);
      const double mag = std::abs(row[q]);
      rep.sup = std::max(rep.sup, mag);
      if (rho > cone * (1.0 + margin)) rep.residual = std::max(rep.residual, mag);
      if (rho < 0.5 * cone) rep.inside_max = std::max(rep.inside_max, mag);
    }
  }
  return rep;
}

double estimate_wave_speed(const SpectralModel& model, double A, double delta, double threshold) {
  KernelOperator op = kernel_operator(model, bandlimited_multiplier(A), delta);
  const auto& grid = model.grid();
  double sup = 0.0;
  std::vector<Eigen::VectorXd> rows;
  std::vector<int> anchors;
  const int step = std::max(1, grid.size() / 32);
  for (int i = 0; i < grid.size(); i += step) {
    anchors.push_back(i);
    rows.push_back(op.kernel_row(grid.nodes[i]));
    sup = std::max(sup, rows.back().cwiseAbs().maxCoeff());
  }
  // Shrink the cone until the exterior residual jumps above threshold*sup.
  for (double c = 2.0; c > 0.05; c *= 0.97) {
    double outside = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      for (int q = 0; q < grid.size(); ++q) {
        const double rho = model.distance(grid.nodes[anchors[k]], grid.nodes[q]);
        if (rho > c * delta * A) outside = std::max(outside, std::abs(rows[k][q]));
      }
    }
    if (outside > threshold * sup) return c / 0.97;
  }
  return 0.05;
}

ComposeReport compose_check(const KernelOperator& op1, const KernelOperator& op2, double beta,
                            int triples, std::uint64_t seed) {
  if (&op1.model() != &op2.model() && op1.model().truncation() != op2.model().truncation())
    throw ContractError("compose_check requires operators on the same model");
  if (std::abs(op1.delta() - op2.delta()) > 1e-15)
    throw ContractError("compose_check requires matching delta");
  const auto& model = op1.model();

  ComposeReport rep;
  const Eigen::VectorXd prod_mult = op1.multipliers().cwiseProduct(op2.multipliers());
  KernelOperator prod(model, prod_mult, op1.delta());

  // Cross-validate the spectral product against quadrature composition
  // int K1(x,u) K2(u,y) dmu(u) at a few pairs.
  const auto& grid = model.grid();
  double dev = 0.0;
  for (int t = 0; t < 5; ++t) {
    const double x = grid.nodes[(t * 7 + 3) % grid.size()];
    const double y = grid.nodes[(t * 13 + 11) % grid.size()];
    const Eigen::VectorXd r1 = op1.kernel_row(x);
    const Eigen::VectorXd r2 = op2.kernel_row(y);
    double composed = 0.0;
    for (int q = 0; q < grid.size(); ++q) composed += grid.weights[q] * r1[q] * r2[q];
    dev = std::max(dev, std::abs(composed - prod.kernel(x, y)));
  }
  rep.product_kernel_dev = dev;

  rep.op1 = localization_report(op1, Envelope::Form::SubExponential, beta);
  rep.op2 = localization_report(op2, Envelope::Form::SubExponential, beta);
  rep.product = localization_report(prod, Envelope::Form::SubExponential, beta);
  rep.c_natural_hat = rep.product.c / (rep.op1.c * rep.op2.c);

  // Scalar inequality: rho(x,u)^b + rho(y,u)^b >= rho(x,y)^b + (2-2^b) min^b.
  Rng rng(seed);
  const auto& nodes = grid.nodes;
  int violations = 0;
  for (int t = 0; t < triples; ++t) {
    const double x = nodes[rng.index(grid.size())];
    const double y = nodes[rng.index(grid.size())];
    const double u = nodes[rng.index(grid.size())];
    const double dxu = model.distance(x, u), dyu = model.distance(y, u), dxy = model.distance(x, y);
    const double lhs = std::pow(dxu, beta) + std::pow(dyu, beta);
    const double rhs = std::pow(dxy, beta) + (2.0 - std::pow(2.0, beta)) * std::pow(std::min(dxu, dyu), beta);
    if (lhs < rhs - 1e-12) ++violations;
  }
  rep.triple_violations = violations;
  return rep;
}

}  // namespace hkframe
