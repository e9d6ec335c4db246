#include "hkframe/frames.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hkframe/errors.hpp"
#include "hkframe/rng.hpp"

namespace hkframe {

double FrameSystem::covered_band() const { return std::pow(b_, levels()); }

int FrameSystem::total_elements() const { return offsets_.back(); }

int FrameSystem::level_offset(int j) const { return offsets_[static_cast<std::size_t>(j)]; }

void FrameSystem::rebuild_offsets() {
  offsets_.assign(1, 0);
  for (const auto& lvl : levels_) offsets_.push_back(offsets_.back() + lvl.net.size());
}

CoefficientSet FrameSystem::analyze(const Eigen::VectorXd& eigencoeffs, bool dual) const {
  if (eigencoeffs.size() != model_.truncation() + 1)
    throw ContractError("analyze: eigencoefficient length mismatch");
  if (dual && !has_dual()) throw ContractError("analyze: frame has no dual system");
  const bool use_dual = dual && !self_dual();

  CoefficientSet out;
  out.provenance =
      dual ? CoefficientSet::Provenance::AnalysisDual : CoefficientSet::Provenance::AnalysisPrimal;
  out.values.resize(total_elements());
  const auto& table = model_.eigen_table();
  for (std::size_t jl = 0; jl < levels_.size(); ++jl) {
    const FrameLevel& lvl = levels_[jl];
    const int nc = lvl.net.size();
    Eigen::VectorXd a(nc);
    if (use_dual) {
      const int glen = lvl.gband_hi - lvl.gband_lo + 1;
      if (glen <= 0) {
        a.setZero();
        out.values.segment(offsets_[jl], nc) = a;
        continue;
      }
      const Eigen::VectorXd fg = eigencoeffs.segment(lvl.gband_lo, glen);
      const double c_eps = 1.0 / (1.0 + lvl.eps_meas);
      a = c_eps * lvl.scale.cwiseProduct(lvl.dual_coeffs.transpose() * fg);
    } else {
      const int blen = lvl.band_hi - lvl.band_lo + 1;
      const Eigen::VectorXd fb = lvl.psi_mult.cwiseProduct(eigencoeffs.segment(lvl.band_lo, blen));
      for (int k = 0; k < nc; ++k)
        a[k] = lvl.scale[k] * table.col(lvl.net.center_nodes[k]).segment(lvl.band_lo, blen).dot(fb);
    }
    out.values.segment(offsets_[jl], nc) = a;
  }
  return out;
}

Eigen::VectorXd FrameSystem::synthesize(const CoefficientSet& coeffs) const {
  if (coeffs.values.size() != total_elements())
    throw ContractError("synthesize: coefficient index set does not match the frame");
  const auto& table = model_.eigen_table();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model_.truncation() + 1);
  for (std::size_t jl = 0; jl < levels_.size(); ++jl) {
    const FrameLevel& lvl = levels_[jl];
    const int nc = lvl.net.size();
    const int blen = lvl.band_hi - lvl.band_lo + 1;
    const Eigen::VectorXd a = lvl.scale.cwiseProduct(coeffs.values.segment(offsets_[jl], nc));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(blen);
    for (int k = 0; k < nc; ++k)
      acc += a[k] * table.col(lvl.net.center_nodes[k]).segment(lvl.band_lo, blen);
    f.segment(lvl.band_lo, blen) += lvl.psi_mult.cwiseProduct(acc);
  }
  return f;
}

Eigen::VectorXd FrameSystem::synthesize_dual(const CoefficientSet& coeffs) const {
  if (!has_dual()) throw ContractError("synthesize_dual: frame has no dual system");
  if (self_dual()) return synthesize(coeffs);
  if (coeffs.values.size() != total_elements())
    throw ContractError("synthesize_dual: coefficient index set does not match the frame");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model_.truncation() + 1);
  for (std::size_t jl = 0; jl < levels_.size(); ++jl) {
    const FrameLevel& lvl = levels_[jl];
    const int nc = lvl.net.size();
    const int glen = lvl.gband_hi - lvl.gband_lo + 1;
    if (glen <= 0) continue;
    const double c_eps = 1.0 / (1.0 + lvl.eps_meas);
    const Eigen::VectorXd a =
        c_eps * lvl.scale.cwiseProduct(coeffs.values.segment(offsets_[jl], nc));
    f.segment(lvl.gband_lo, glen) += lvl.dual_coeffs * a;
  }
  return f;
}

Eigen::VectorXd FrameSystem::element_coeffs(int j, int k, bool dual) const {
  const FrameLevel& lvl = levels_[static_cast<std::size_t>(j)];
  if (k < 0 || k >= lvl.net.size()) throw ContractError("element index out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(model_.truncation() + 1);
  if (dual && !self_dual()) {
    if (!has_dual()) throw ContractError("element_coeffs: frame has no dual system");
    const double c_eps = 1.0 / (1.0 + lvl.eps_meas);
    const int glen = lvl.gband_hi - lvl.gband_lo + 1;
    if (glen <= 0) return c;
    c.segment(lvl.gband_lo, glen) = c_eps * lvl.scale[k] * lvl.dual_coeffs.col(k);
  } else {
    const int blen = lvl.band_hi - lvl.band_lo + 1;
    c.segment(lvl.band_lo, blen) =
        lvl.scale[k] *
        lvl.psi_mult.cwiseProduct(
            model_.eigen_table().col(lvl.net.center_nodes[k]).segment(lvl.band_lo, blen));
  }
  return c;
}

Eigen::MatrixXd FrameSystem::level_element_values(int j, bool dual) const {
  const FrameLevel& lvl = levels_[static_cast<std::size_t>(j)];
  const auto& table = model_.eigen_table();
  const int nc = lvl.net.size();
  if (dual && !self_dual()) {
    if (!has_dual()) throw ContractError("level_element_values: frame has no dual system");
    const int glen = lvl.gband_hi - lvl.gband_lo + 1;
    if (glen <= 0) return Eigen::MatrixXd::Zero(model_.grid_size(), nc);
    const double c_eps = 1.0 / (1.0 + lvl.eps_meas);
    return table.middleRows(lvl.gband_lo, glen).transpose() *
           (c_eps * lvl.dual_coeffs * lvl.scale.asDiagonal());
  }
  const int blen = lvl.band_hi - lvl.band_lo + 1;
  Eigen::MatrixXd coeff(blen, nc);
  for (int k = 0; k < nc; ++k)
    coeff.col(k) = lvl.scale[k] *
                   lvl.psi_mult.cwiseProduct(
                       table.col(lvl.net.center_nodes[k]).segment(lvl.band_lo, blen));
  return table.middleRows(lvl.band_lo, blen).transpose() * coeff;
}

namespace {

// Multiplier slice of a level function over the spectrum; returns the
// nonzero index range [lo, hi] (hi < lo if identically zero).
template <typename F>
void tabulate_band(const SpectralModel& model, const F& f, int& lo, int& hi, Eigen::VectorXd& vals) {
  const int n = model.truncation();
  lo = 0;
  hi = -1;
  std::vector<double> tmp(static_cast<std::size_t>(n) + 1);
  bool seen = false;
  for (int i = 0; i <= n; ++i) {
    tmp[static_cast<std::size_t>(i)] = f(model.sqrt_eigenvalue(i));
    if (tmp[static_cast<std::size_t>(i)] != 0.0) {
      if (!seen) lo = i;
      hi = i;
      seen = true;
    }
  }
  if (!seen) {
    lo = 0;
    hi = -1;
    vals.resize(0);
    return;
  }
  vals = Eigen::Map<Eigen::VectorXd>(tmp.data() + lo, hi - lo + 1);
}

}  // namespace

FrameSystem build_frame1(const SpectralModel& model, const Cutoff& phi_a, double b, int J,
                         double gamma) {
  if (std::pow(b, J + 1) > model.max_sqrt_eigenvalue() * (1.0 + 1e-12))
    throw ConfigError("spectral truncation too small: need b^{J+1} <= sqrt(lambda_N)");
  if (gamma <= 0.0 || gamma >= 1.0) throw ConfigError("gamma must lie in (0,1)");
  LPSystem lp(phi_a, b, J, false);

  FrameSystem frame;
  frame.model_ = model;
  frame.variant_ = FrameVariant::Frame1;
  frame.b_ = b;
  frame.gamma_ = gamma;
  frame.cutoff_eps_ = phi_a.eps();
  frame.levels_.resize(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) {
    FrameLevel& lvl = frame.levels_[static_cast<std::size_t>(j)];
    lvl.j = j;
    lvl.delta = gamma * std::pow(b, -j - 2);
    lvl.net = maximal_net(model, lvl.delta, model.grid().nodes[0]);
    tabulate_band(model, [&](double u) { return lp(j, u); }, lvl.band_lo, lvl.band_hi, lvl.psi_mult);
    lvl.scale.resize(lvl.net.size());
    for (int k = 0; k < lvl.net.size(); ++k) lvl.scale[k] = std::sqrt(lvl.net.cell_measures[k]);
  }
  frame.rebuild_offsets();
  return frame;
}

void build_dual(FrameSystem& frame) {
  if (frame.variant_ == FrameVariant::Tight)
    throw ContractError("build_dual: tight frames are self-dual");
  if (frame.variant_ == FrameVariant::Dual) return;
  const SpectralModel& model = frame.model_;
  const double b = frame.b_;
  Cutoff phi_a(CutoffKind::TypeA, b, frame.cutoff_eps_);
  GammaSystem gamma_sys(phi_a, b);
  const auto& table = model.eigen_table();

  for (auto& lvl : frame.levels_) {
    const int j = lvl.j;
    // lambda_j = b^{j-1} for j >= 1 (lambda_0 = 1); Gamma_{lambda_0} = Gamma_0(sqrt L),
    // Gamma_{lambda_j} = Gamma_1(b^{-j+1} sqrt L).
    auto gamma_fn = [&](double u) {
      return j == 0 ? gamma_sys.gamma0(u) : gamma_sys.gamma1(std::pow(b, -(j - 1)) * u);
    };
    tabulate_band(model, gamma_fn, lvl.gband_lo, lvl.gband_hi, lvl.gamma_mult);
    const int glen = lvl.gband_hi - lvl.gband_lo + 1;
    const int nc = lvl.net.size();
    if (glen <= 0) {
      // Spectral gap swallowed the whole Gamma band (then the Psi band too):
      // the level contributes nothing and needs no inversion.
      lvl.gband_lo = 0;
      lvl.gband_hi = -1;
      lvl.dual_coeffs.resize(0, nc);
      lvl.r_norm = 0.0;
      lvl.eps_meas = 0.0;
      continue;
    }

    // Sampling constant on Sigma_{lambda_j b^3}.
    const double samp_band = std::pow(b, std::max(3, j + 2));
    lvl.eps_meas = sampling_constant(model, lvl.net, samp_band);
    const double omega_scale = 1.0 / (1.0 + lvl.eps_meas);

    // Centered eigenfunction block on the Gamma band.
    Eigen::MatrixXd ec(glen, nc);
    for (int k = 0; k < nc; ++k)
      ec.col(k) = table.col(lvl.net.center_nodes[k]).segment(lvl.gband_lo, glen);

    // R = diag(g)^2 - diag(g) P diag(g), P the omega-weighted Gram.
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(glen, glen);
    for (int k = 0; k < nc; ++k)
      p += (omega_scale * lvl.net.cell_measures[k]) * ec.col(k) * ec.col(k).transpose();
    Eigen::MatrixXd r = lvl.gamma_mult.asDiagonal() * p * lvl.gamma_mult.asDiagonal();
    r = -r;
    r.diagonal() += lvl.gamma_mult.cwiseProduct(lvl.gamma_mult);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
    lvl.r_norm = std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
    if (lvl.r_norm >= 0.5)
      throw DualConstructionError("dual construction: ||R_lambda|| >= 1/2, use a smaller gamma",
                                  lvl.r_norm);

    // T = (Id - R)^{-1}; dual columns are T [Gamma(., xi)].
    Eigen::MatrixXd id_minus_r = Eigen::MatrixXd::Identity(glen, glen) - r;
    Eigen::LDLT<Eigen::MatrixXd> solver(id_minus_r);
    lvl.dual_coeffs = solver.solve(lvl.gamma_mult.asDiagonal() * ec);
  }
  frame.variant_ = FrameVariant::Dual;
}

FrameSystem build_tight(const SpectralModel& model, const Cutoff& phi_a, double b, int J,
                        double gamma) {
  if (std::pow(b, J + 1) > model.max_sqrt_eigenvalue() * (1.0 + 1e-12))
    throw ConfigError("spectral truncation too small: need b^{J+1} <= sqrt(lambda_N)");
  if (gamma <= 0.0 || gamma >= 1.0) throw ConfigError("gamma must lie in (0,1)");
  LPSystem lp(phi_a, b, J, true);
  const double a = model.polynomial_property_constant();

  FrameSystem frame;
  frame.model_ = model;
  frame.variant_ = FrameVariant::Tight;
  frame.b_ = b;
  frame.gamma_ = gamma;
  frame.cutoff_eps_ = phi_a.eps();
  frame.levels_.resize(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) {
    FrameLevel& lvl = frame.levels_[static_cast<std::size_t>(j)];
    lvl.j = j;
    lvl.delta = gamma / (a * std::pow(b, j + 1));
    lvl.net = maximal_net(model, lvl.delta, model.grid().nodes[0]);
    // Cubature exact on products of two Sigma_{b^{j+1}} functions.
    const int max_moment = model.product_moment_bound(std::pow(b, j + 1));
    cubature_weights(model, lvl.net, model.sqrt_eigenvalue(max_moment));
    tabulate_band(model, [&](double u) { return lp(j, u); }, lvl.band_lo, lvl.band_hi, lvl.psi_mult);
    lvl.scale.resize(lvl.net.size());
    for (int k = 0; k < lvl.net.size(); ++k) lvl.scale[k] = std::sqrt(lvl.net.weights[k]);
  }
  frame.rebuild_offsets();
  return frame;
}

std::vector<double> frame_sampling_bands(double b, int J) {
  std::vector<double> bands;
  for (int j = 0; j <= J; ++j) bands.push_back(std::pow(b, std::max(3, j + 2)));
  return bands;
}

double frame_auto_gamma(const SpectralModel& model, double b, int J, double eps_target) {
  // The level-j net lives at delta_j = gamma b^{-j-2} and must sample
  // Sigma_{b^{j+2}} (frame bounds) and Sigma_{lambda_j b^3} (dual build);
  // level 0 pairs its net with the b^3 band.
  const auto bands = frame_sampling_bands(b, J);
  for (double gamma = 0.8; gamma >= 0.02; gamma *= 0.5) {
    bool ok = true;
    for (int j = 0; j <= J && ok; ++j) {
      const double delta = gamma * std::pow(b, -j - 2);
      NetLevel net = maximal_net(model, delta, model.grid().nodes[0]);
      if (sampling_constant(model, net, bands[static_cast<std::size_t>(j)]) > eps_target) ok = false;
    }
    if (ok) return gamma;
  }
  throw ConstructionError("frame_auto_gamma: no gamma meets the sampling target");
}

double tight_auto_gamma(const SpectralModel& model, double b, int J) {
  // Largest gamma whose per-level cubature succeeds (positivity + bracket
  // + exactness); larger gamma keeps cells thick relative to delta.
  for (double gamma : {0.85, 0.7, 0.55, 0.45, 0.35, 0.28, 0.22, 0.17, 0.13, 0.1, 0.07, 0.05}) {
    try {
      const double a = model.polynomial_property_constant();
      for (int j = 0; j <= J; ++j) {
        const double delta = gamma / (a * std::pow(b, j + 1));
        NetLevel net = maximal_net(model, delta, model.grid().nodes[0]);
        const int max_moment = model.product_moment_bound(std::pow(b, j + 1));
        cubature_weights(model, net, model.sqrt_eigenvalue(max_moment));
      }
      return gamma;
    } catch (const CubatureError&) {
      // try the next gamma
    }
  }
  throw ConstructionError("tight_auto_gamma: no gamma admits positive bracketed cubature");
}

FrameBoundsReport frame_bounds(const FrameSystem& frame, int trials, std::uint64_t seed, bool dual) {
  if (trials < 1) throw ConfigError("frame_bounds needs trials >= 1");
  FrameBoundsReport rep;
  rep.lower_hat = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd f =
        random_band_limited(frame.model(), frame.covered_band(), seed + static_cast<std::uint64_t>(t));
    const double f2 = f.squaredNorm();
    if (f2 == 0.0) continue;
    const CoefficientSet a = frame.analyze(f, dual);
    const double ratio = a.values.squaredNorm() / f2;
    rep.lower_hat = std::min(rep.lower_hat, ratio);
    rep.upper_hat = std::max(rep.upper_hat, ratio);
  }
  return rep;
}

}  // namespace hkframe
