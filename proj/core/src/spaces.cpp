#include "hkframe/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "hkframe/cutoffs.hpp"
#include "hkframe/errors.hpp"

namespace hkframe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// l^q aggregation of nonnegative terms; q = inf -> sup.
struct LqAccumulator {
  double q;
  double acc = 0.0;
  explicit LqAccumulator(double q) : q(q) {}
  void add(double v) {
    if (std::isinf(q)) {
      acc = std::max(acc, v);
    } else {
      acc += std::pow(v, q);
    }
  }
  double value() const { return std::isinf(q) ? acc : std::pow(acc, 1.0 / q); }
};

int smallest_integer_above(double s) {
  int m = static_cast<int>(std::floor(s)) + 1;
  if (m < 0) m = 0;
  return m;
}

}  // namespace

SpaceCalculator::SpaceCalculator(const SpectralModel& model, double b, double eps_classical,
                                 double eps_phi)
    : model_(model), b_(b) {
  const double top = model.max_sqrt_eigenvalue();
  auto build_blocks = [&](double base, double eps, std::vector<Eigen::VectorXd>& out) {
    Cutoff phi(CutoffKind::TypeA, base, eps);
    const int levels = std::max(1, static_cast<int>(std::ceil(std::log(top) / std::log(base))) + 1);
    out.resize(static_cast<std::size_t>(levels) + 1);
    for (int j = 0; j <= levels; ++j) {
      Eigen::VectorXd m(model.truncation() + 1);
      for (int n = 0; n <= model.truncation(); ++n) {
        const double u = model.sqrt_eigenvalue(n);
        m[n] = (j == 0) ? phi(u) : phi(std::pow(base, -j) * u) - phi(std::pow(base, -j + 1) * u);
      }
      out[static_cast<std::size_t>(j)] = m;
    }
  };
  build_blocks(2.0, eps_classical, mult2_);
  build_blocks(b, eps_phi, multb_);
  heat_levels_ = static_cast<int>(std::ceil(std::log(top * top) / std::log(4.0)));
}

double SpaceCalculator::lp_block_norm(const Eigen::VectorXd& f, const SpaceParams& sp,
                                      bool base_b) const {
  const auto& blocks = base_b ? multb_ : mult2_;
  const double base = base_b ? b_ : 2.0;
  LqAccumulator lq(sp.q);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const Eigen::VectorXd bc = blocks[j].cwiseProduct(f);
    if (bc.cwiseAbs().maxCoeff() == 0.0) continue;  // out-of-band blocks are exactly zero
    Eigen::VectorXd g = model_.synthesize(bc);
    double term;
    if (sp.tilde) {
      const auto& ball = model_.ball_measure_grid(std::pow(base, -static_cast<double>(j)));
      for (int qi = 0; qi < g.size(); ++qi) g[qi] *= std::pow(ball[qi], -sp.s / sp.d);
      term = model_.lp_norm(g, sp.p);
    } else {
      term = std::pow(base, sp.s * static_cast<double>(j)) * model_.lp_norm(g, sp.p);
    }
    lq.add(term);
  }
  return lq.value();
}

double SpaceCalculator::heat_besov_norm(const Eigen::VectorXd& f, const SpaceParams& sp) const {
  const int m = smallest_integer_above(sp.s);
  // First term: e^{-L} f, ball-weighted in the tilde variant.
  Eigen::VectorXd first_coeffs(f.size());
  for (int n = 0; n < f.size(); ++n) first_coeffs[n] = std::exp(-model_.eigenvalue(n)) * f[n];
  Eigen::VectorXd g0 = model_.synthesize(first_coeffs);
  if (sp.tilde) {
    const auto& ball = model_.ball_measure_grid(1.0);
    for (int qi = 0; qi < g0.size(); ++qi) g0[qi] *= std::pow(ball[qi], -sp.s / sp.d);
  }
  double norm = model_.lp_norm(g0, sp.p);

  // t-integral on the dyadic grid t = 4^{-nu} with log-uniform subpoints.
  const int sub = 8;
  const double dlog = std::log(4.0) / sub;
  LqAccumulator lq(sp.q);
  for (int nu = 0; nu <= heat_levels_; ++nu) {
    for (int i = 0; i < sub; ++i) {
      const double t = std::pow(4.0, -nu - 1) * std::exp((i + 0.5) * dlog);
      Eigen::VectorXd hc(f.size());
      for (int n = 0; n < f.size(); ++n) {
        const double tl = t * model_.eigenvalue(n);
        hc[n] = std::pow(tl, m / 2.0) * std::exp(-tl) * f[n];
      }
      Eigen::VectorXd g = model_.synthesize(hc);
      double term;
      if (sp.tilde) {
        const auto& ball = model_.ball_measure_grid(std::sqrt(t));
        for (int qi = 0; qi < g.size(); ++qi) g[qi] *= std::pow(ball[qi], -sp.s / sp.d);
        term = model_.lp_norm(g, sp.p);
      } else {
        term = std::pow(t, -sp.s / 2.0) * model_.lp_norm(g, sp.p);
      }
      if (std::isinf(sp.q)) {
        lq.add(term);
      } else {
        lq.add(term * std::pow(dlog, 1.0 / sp.q));
      }
    }
  }
  return norm + lq.value();
}

double SpaceCalculator::besov_norm(const Eigen::VectorXd& f, const SpaceParams& sp,
                                   NormMethod method) const {
  if (f.size() != model_.truncation() + 1) throw ContractError("besov_norm: coefficient length");
  if (sp.p <= 0.0 || sp.q <= 0.0) throw ConfigError("besov_norm: p, q must be positive");
  switch (method) {
    case NormMethod::LPDecomp:
      return lp_block_norm(f, sp, false);
    case NormMethod::PhiVariant:
      return lp_block_norm(f, sp, true);
    case NormMethod::Heat:
      return heat_besov_norm(f, sp);
    case NormMethod::Sequence: {
      if (frame_ == nullptr || !frame_->has_dual())
        throw ContractError("besov_norm: Sequence method needs an attached dual/tight frame");
      return besov_sequence_norm(frame_->analyze(f, true), sp);
    }
  }
  return 0.0;
}

double SpaceCalculator::tl_block_norm(const Eigen::VectorXd& f, const SpaceParams& sp,
                                      bool base_b) const {
  const auto& blocks = base_b ? multb_ : mult2_;
  const double base = base_b ? b_ : 2.0;
  const int grid = model_.grid_size();
  std::vector<Eigen::VectorXd> block_values;
  std::vector<int> block_index;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const Eigen::VectorXd bc = blocks[j].cwiseProduct(f);
    if (bc.cwiseAbs().maxCoeff() == 0.0) continue;
    block_values.push_back(model_.synthesize(bc));
    block_index.push_back(static_cast<int>(j));
  }
  Eigen::VectorXd agg(grid);
  for (int qi = 0; qi < grid; ++qi) {
    LqAccumulator lq(sp.q);
    for (std::size_t bi = 0; bi < block_values.size(); ++bi) {
      const int j = block_index[bi];
      double v = std::abs(block_values[bi][qi]);
      if (sp.tilde) {
        const auto& ball = model_.ball_measure_grid(std::pow(base, -static_cast<double>(j)));
        v *= std::pow(ball[qi], -sp.s / sp.d);
      } else {
        v *= std::pow(base, sp.s * j);
      }
      lq.add(v);
    }
    agg[qi] = lq.value();
  }
  return model_.lp_norm(agg, sp.p);
}

double SpaceCalculator::heat_tl_norm(const Eigen::VectorXd& f, const SpaceParams& sp) const {
  const int m = smallest_integer_above(sp.s);
  const int grid = model_.grid_size();
  Eigen::VectorXd first_coeffs(f.size());
  for (int n = 0; n < f.size(); ++n) first_coeffs[n] = std::exp(-model_.eigenvalue(n)) * f[n];
  Eigen::VectorXd g0 = model_.synthesize(first_coeffs);
  if (sp.tilde) {
    const auto& ball = model_.ball_measure_grid(1.0);
    for (int qi = 0; qi < g0.size(); ++qi) g0[qi] *= std::pow(ball[qi], -sp.s / sp.d);
  }
  const double first = model_.lp_norm(g0, sp.p);

  const int sub = 8;
  const double dlog = std::log(4.0) / sub;
  std::vector<LqAccumulator> point_acc(static_cast<std::size_t>(grid), LqAccumulator(sp.q));
  for (int nu = 0; nu <= heat_levels_; ++nu) {
    for (int i = 0; i < sub; ++i) {
      const double t = std::pow(4.0, -nu - 1) * std::exp((i + 0.5) * dlog);
      Eigen::VectorXd hc(f.size());
      for (int n = 0; n < f.size(); ++n) {
        const double tl = t * model_.eigenvalue(n);
        hc[n] = std::pow(tl, m / 2.0) * std::exp(-tl) * f[n];
      }
      const Eigen::VectorXd g = model_.synthesize(hc);
      const std::vector<double>* ball = sp.tilde ? &model_.ball_measure_grid(std::sqrt(t)) : nullptr;
      for (int qi = 0; qi < grid; ++qi) {
        double v = std::abs(g[qi]);
        v *= sp.tilde ? std::pow((*ball)[qi], -sp.s / sp.d) : std::pow(t, -sp.s / 2.0);
        if (std::isinf(sp.q)) {
          point_acc[static_cast<std::size_t>(qi)].add(v);
        } else {
          point_acc[static_cast<std::size_t>(qi)].add(v * std::pow(dlog, 1.0 / sp.q));
        }
      }
    }
  }
  Eigen::VectorXd agg(grid);
  for (int qi = 0; qi < grid; ++qi) agg[qi] = point_acc[static_cast<std::size_t>(qi)].value();
  return first + model_.lp_norm(agg, sp.p);
}

double SpaceCalculator::tl_norm(const Eigen::VectorXd& f, const SpaceParams& sp,
                                NormMethod method) const {
  if (f.size() != model_.truncation() + 1) throw ContractError("tl_norm: coefficient length");
  if (std::isinf(sp.p)) throw ConfigError("tl_norm: F-spaces require p < inf");
  if (sp.p <= 0.0 || sp.q <= 0.0) throw ConfigError("tl_norm: p, q must be positive");
  switch (method) {
    case NormMethod::LPDecomp:
      return tl_block_norm(f, sp, false);
    case NormMethod::PhiVariant:
      return tl_block_norm(f, sp, true);
    case NormMethod::Heat:
      return heat_tl_norm(f, sp);
    case NormMethod::Sequence: {
      if (frame_ == nullptr || !frame_->has_dual())
        throw ContractError("tl_norm: Sequence method needs an attached dual/tight frame");
      return tl_sequence_norm(frame_->analyze(f, true), sp);
    }
  }
  return 0.0;
}

double SpaceCalculator::sobolev_norm(const Eigen::VectorXd& f, double s, double p) const {
  Eigen::VectorXd c(f.size());
  for (int n = 0; n < f.size(); ++n) c[n] = std::pow(1.0 + model_.eigenvalue(n), s / 2.0) * f[n];
  return model_.lp_norm(model_.synthesize(c), p);
}

double SpaceCalculator::besov_sequence_norm(const CoefficientSet& coeffs,
                                            const SpaceParams& sp) const {
  if (frame_ == nullptr) throw ContractError("sequence norm needs an attached frame");
  if (coeffs.values.size() != frame_->total_elements())
    throw ContractError("sequence norm: coefficient index set mismatch");
  const double b = frame_->b();
  LqAccumulator lq(sp.q);
  for (int j = 0; j <= frame_->levels(); ++j) {
    const FrameLevel& lvl = frame_->level(j);
    LqAccumulator lp_inner(sp.p);
    for (int k = 0; k < lvl.net.size(); ++k) {
      const double ball = model_.ball_measure(lvl.net.centers[k], std::pow(b, -j));
      const double weight = sp.tilde ? std::pow(ball, -sp.s / sp.d + 1.0 / sp.p - 0.5)
                                     : std::pow(ball, 1.0 / sp.p - 0.5);
      lp_inner.add(weight * std::abs(coeffs.values[frame_->level_offset(j) + k]));
    }
    const double level_term = lp_inner.value();
    lq.add(sp.tilde ? level_term : std::pow(b, sp.s * j) * level_term);
  }
  return lq.value();
}

double SpaceCalculator::tl_sequence_norm(const CoefficientSet& coeffs,
                                         const SpaceParams& sp) const {
  if (frame_ == nullptr) throw ContractError("sequence norm needs an attached frame");
  if (coeffs.values.size() != frame_->total_elements())
    throw ContractError("sequence norm: coefficient index set mismatch");
  if (std::isinf(sp.p)) throw ConfigError("tl_sequence_norm: p < inf required");
  const double b = frame_->b();
  const int grid = model_.grid_size();
  Eigen::VectorXd agg(grid);
  for (int qi = 0; qi < grid; ++qi) {
    LqAccumulator lq(sp.q);
    for (int j = 0; j <= frame_->levels(); ++j) {
      const FrameLevel& lvl = frame_->level(j);
      const int cell = lvl.net.cell_of_node[static_cast<std::size_t>(qi)];
      const double a = std::abs(coeffs.values[frame_->level_offset(j) + cell]);
      const double cellm = lvl.net.cell_measures[static_cast<std::size_t>(cell)];
      // |A|^{-s/d} |a| * averaged indicator (tilde) or b^{js} |a| * indicator.
      double v = a * std::pow(cellm, -0.5);
      v *= sp.tilde ? std::pow(cellm, -sp.s / sp.d) : std::pow(b, sp.s * j);
      lq.add(v);
    }
    agg[qi] = lq.value();
  }
  return model_.lp_norm(agg, sp.p);
}

EquivalenceReport equivalence_report(const SpaceCalculator& calc,
                                     const std::vector<Eigen::VectorXd>& family,
                                     const SpaceParams& sp, EquivalencePair pair) {
  if (family.empty()) throw ConfigError("equivalence_report: empty family");
  EquivalenceReport rep;
  rep.min_ratio = kInf;
  for (const auto& f : family) {
    double a = 0.0, b = 0.0;
    switch (pair) {
      case EquivalencePair::LPvsPhi:
        a = calc.besov_norm(f, sp, NormMethod::LPDecomp);
        b = calc.besov_norm(f, sp, NormMethod::PhiVariant);
        break;
      case EquivalencePair::LPvsHeat:
        a = calc.besov_norm(f, sp, NormMethod::LPDecomp);
        b = calc.besov_norm(f, sp, NormMethod::Heat);
        break;
      case EquivalencePair::LPvsSequence:
        a = calc.besov_norm(f, sp, NormMethod::LPDecomp);
        b = calc.besov_norm(f, sp, NormMethod::Sequence);
        break;
      case EquivalencePair::Fp2VsSobolev: {
        SpaceParams f2 = sp;
        f2.q = 2.0;
        f2.tilde = false;
        a = calc.tl_norm(f, f2, NormMethod::LPDecomp);
        b = calc.sobolev_norm(f, sp.s, sp.p);
        break;
      }
    }
    if (a == 0.0 || b == 0.0) throw DegenerateInputError("equivalence_report: zero norm in family");
    const double ratio = a / b;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

Eigen::VectorXd maximal_function(const SpectralModel& model, const Eigen::VectorXd& grid_values,
                                 double t_exponent) {
  const auto& grid = model.grid();
  const int q = grid.size();
  // Radius ladder from about the grid spacing up to the diameter.
  std::vector<double> radii;
  for (double r = model.diameter(); r > 0.5 * model.diameter() / q; r *= 0.5) radii.push_back(r);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd pow_t(q);
  for (int i = 0; i < q; ++i) pow_t[i] = std::pow(std::abs(grid_values[i]), t_exponent);

  for (double r : radii) {
    for (int c = 0; c < q; ++c) {
      double mass = 0.0, integral = 0.0;
      for (int i = 0; i < q; ++i) {
        if (model.distance(grid.nodes[c], grid.nodes[i]) < r) {
          mass += grid.weights[i];
          integral += grid.weights[i] * pow_t[i];
        }
      }
      if (mass <= 0.0) continue;
      const double avg = std::pow(integral / mass, 1.0 / t_exponent);
      // The ball B(c, r) covers every x within r of c.
      for (int i = 0; i < q; ++i) {
        if (model.distance(grid.nodes[c], grid.nodes[i]) < r) out[i] = std::max(out[i], avg);
      }
    }
  }
  return out;
}

}  // namespace hkframe
