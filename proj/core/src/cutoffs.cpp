#include "hkframe/cutoffs.hpp"

#include <algorithm>
#include <cmath>

#include "hkframe/errors.hpp"
#include "hkframe/taylor.hpp"

namespace hkframe {

namespace {

// Monotone C^inf bridge: 0 for u <= 0, 1 for u >= 1.
double bridge(double u, double a) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double gu = std::exp(-std::pow(u, -a));
  const double gv = std::exp(-std::pow(1.0 - u, -a));
  return gu / (gu + gv);
}

Series bridge_series(const Series& u, double a) {
  const double u0 = u.coeff(0);
  const int n = u.order();
  if (u0 <= 0.0) return Series(n, 0.0);
  if (u0 >= 1.0) return Series(n, 1.0);
  const Series gu = exp(-1.0 * pow(u, -a));
  const Series gv = exp(-1.0 * pow(1.0 - u, -a));
  return gu / (gu + gv);
}

}  // namespace

Cutoff::Cutoff(CutoffKind kind, double b, double eps) : kind_(kind), b_(b), eps_(eps) {
  if (b <= 1.0) throw ConfigError("cutoff base must exceed 1");
  if (eps <= 0.0 || eps > 1.0) throw ConfigError("cutoff smoothness parameter must lie in (0,1]");
  // exp(-u^{-a}) with a = (1-eps)/eps makes the induced kernel decay
  // exponent a/(a+1) equal to 1-eps. Floor at the classic exp(-1/u)
  // bridge: sharper bridges buy nothing below eps = 1/2.
  a_ = std::max(1.0, (1.0 - eps) / eps);
}

double Cutoff::support_lo() const { return kind_ == CutoffKind::TypeA ? 0.0 : 1.0 / b_; }

double Cutoff::type_a(double t) const {
  if (t <= 1.0) return 1.0;
  if (t >= b_) return 0.0;
  return bridge((b_ - t) / (b_ - 1.0), a_);
}

double Cutoff::operator()(double t) const {
  if (t < 0.0) return 0.0;
  switch (kind_) {
    case CutoffKind::TypeA:
      return type_a(t);
    case CutoffKind::TypeB: {
      const double lo = 1.0 / b_;
      if (t <= lo || t >= b_) return 0.0;
      if (t < 1.0) return bridge((t - lo) / (1.0 - lo), a_);
      return bridge((b_ - t) / (b_ - 1.0), a_);
    }
    case CutoffKind::TypeC: {
      const double r = type_a(t) - type_a(b_ * t);
      return r > 0.0 ? std::sqrt(r) : 0.0;
    }
  }
  return 0.0;
}

namespace {

// Series of a TypeA cutoff at scaled argument c*t about t0.
Series type_a_series(double c, double t0, int order, double b, double a) {
  const double arg = c * t0;
  if (arg <= 1.0) return Series(order, 1.0);
  if (arg >= b) return Series(order, 0.0);
  Series t = Series::variable(order, t0);
  Series u = (1.0 / (b - 1.0)) * (b - c * t);  // (b - c t)/(b - 1)
  return bridge_series(u, a);
}

}  // namespace

double Cutoff::derivative(double t, int order) const {
  if (order == 0) return (*this)(t);
  if (t < 0.0) return 0.0;
  switch (kind_) {
    case CutoffKind::TypeA: {
      if (t <= 1.0 || t >= b_) return 0.0;
      return type_a_series(1.0, t, order, b_, a_).derivative(order);
    }
    case CutoffKind::TypeB: {
      const double lo = 1.0 / b_;
      if (t <= lo || t >= b_ || t == 1.0) return 0.0;
      Series tt = Series::variable(order, t);
      Series u = (t < 1.0) ? (1.0 / (1.0 - lo)) * (tt - lo) : (1.0 / (b_ - 1.0)) * (b_ - 1.0 * tt);
      return bridge_series(u, a_).derivative(order);
    }
    case CutoffKind::TypeC: {
      const double r0 = type_a(t) - type_a(b_ * t);
      if (r0 <= 1e-280) return 0.0;  // outside or at the edge of the support
      Series rad = type_a_series(1.0, t, order, b_, a_) - type_a_series(b_, t, order, b_, a_);
      return sqrt(rad).derivative(order);
    }
  }
  return 0.0;
}

Cutoff make_cutoff(CutoffKind kind, double b, double eps) { return Cutoff(kind, b, eps); }

LPSystem::LPSystem(const Cutoff& phi, double b, int levels, bool squared)
    : phi_(phi), b_(b), levels_(levels), squared_(squared) {
  if (phi.kind() != CutoffKind::TypeA) throw ConfigError("LP system requires a TypeA cutoff");
  if (std::abs(phi.base() - b) > 1e-12) throw ConfigError("LP system base must match the cutoff base");
  if (levels < 0) throw ConfigError("LP system needs levels >= 0");

  // Radicand sanity for the squared variant and the overlap floor for both:
  // Psi_1 over [b^{1/4}, b^{7/4}], the b^{+-3/4} neighbourhood of its band center.
  const int scan = 4000;
  double floor_v = 1.0;
  for (int i = 0; i <= scan; ++i) {
    const double u = std::pow(b, 0.25 + 1.5 * i / scan);
    const double rad = phi_(u / b) - phi_(u);
    if (rad < -1e-14) throw ConstructionError("negative radicand in squared LP system");
    const double v = squared_ ? (rad > 0.0 ? std::sqrt(rad) : 0.0) : rad;
    floor_v = std::min(floor_v, v);
  }
  overlap_floor_ = floor_v;
}

double LPSystem::operator()(int j, double u) const {
  if (j < 0 || j > levels_) return 0.0;
  if (j == 0) {
    const double v = phi_(u);
    return squared_ ? (v > 0.0 ? std::sqrt(v) : 0.0) : v;
  }
  const double scale = std::pow(b_, -j);
  const double rad = phi_(scale * u) - phi_(scale * b_ * u);
  if (squared_) return rad > 0.0 ? std::sqrt(rad) : 0.0;
  return rad;
}

double LPSystem::band_lo(int j) const { return j == 0 ? 0.0 : std::pow(b_, j - 1); }
double LPSystem::band_hi(int j) const { return std::pow(b_, j + 1); }

double LPSystem::partition_sum(double u) const {
  double acc = 0.0;
  for (int j = 0; j <= levels_; ++j) {
    const double v = (*this)(j, u);
    acc += squared_ ? v * v : v;
  }
  return acc;
}

GammaSystem::GammaSystem(const Cutoff& phi, double b) : phi_(phi), b_(b) {
  if (phi.kind() != CutoffKind::TypeA) throw ConfigError("Gamma system requires a TypeA cutoff");
}

double GammaSystem::gamma0(double u) const { return phi_(u / b_); }
double GammaSystem::gamma1(double u) const { return phi_(u / (b_ * b_)) - phi_(b_ * u); }
double GammaSystem::theta(double u) const { return phi_(u / (b_ * b_ * b_)); }

Systems make_systems(const Cutoff& phi_a, double b, int levels) {
  if (phi_a.kind() != CutoffKind::TypeA) throw ConfigError("make_systems requires a TypeA cutoff");
  Systems sys{LPSystem(phi_a, b, levels, false), LPSystem(phi_a, b, levels, true),
              GammaSystem(phi_a, b)};

  // Certify the partition identities on [0, b^J].
  const double top = std::pow(b, levels);
  for (int i = 0; i <= 500; ++i) {
    const double u = top * i / 500.0;
    if (std::abs(sys.additive.partition_sum(u) - 1.0) > 1e-10)
      throw ConstructionError("additive LP partition identity failed");
    if (std::abs(sys.squared.partition_sum(u) - 1.0) > 1e-10)
      throw ConstructionError("squared LP partition identity failed");
  }
  if (sys.additive.overlap_floor() <= 0.0 || sys.squared.overlap_floor() <= 0.0)
    throw ConstructionError("Psi is not bounded away from zero on the overlap region");
  return sys;
}

GrowthReport verify_growth(const Cutoff& phi, int k_max, double eps) {
  if (k_max < 1) throw ConfigError("verify_growth needs k_max >= 1");
  GrowthReport report;
  const double hi = phi.support_hi() * 1.02;
  const int scan = 6000;
  for (int k = 0; k <= k_max; ++k) {
    double sup = 0.0;
    for (int i = 0; i <= scan; ++i) {
      const double t = hi * i / scan;
      sup = std::max(sup, std::abs(phi.derivative(t, k)));
    }
    const double bound =
        (k == 0) ? 1.0 : 8.0 * std::pow(16.0 / eps * std::pow(static_cast<double>(k), 1.0 + eps),
                                        static_cast<double>(k));
    report.rows.push_back({k, sup, bound, sup <= bound});
  }
  return report;
}

}  // namespace hkframe
