#ifndef HKFRAME_CUTOFFS_HPP
#define HKFRAME_CUTOFFS_HPP

#include <vector>

namespace hkframe {

enum class CutoffKind { TypeA, TypeB, TypeC };

/// Smooth compactly supported cut-off on R_+, in normal form scaled to the
/// dilation base b:
///   TypeA: 1 on [0,1], supported in [0,b], nonincreasing on [1,b];
///   TypeB: supported in [1/b, b];
///   TypeC: supported in [1/b, b] with sum_{j>=0} phi(b^{-j} t)^2 = 1, t >= 1.
///
/// The transition bridge is exp(-u^{-a}) with a = (1-eps)/eps, so the
/// derivative growth class (and hence the kernel decay exponent 1-eps)
/// is steered by eps in (0, 1].
class Cutoff {
 public:
  Cutoff(CutoffKind kind, double b, double eps);

  double operator()(double t) const;
  /// Exact k-th derivative via truncated Taylor arithmetic (k = 0 allowed).
  double derivative(double t, int order) const;

  CutoffKind kind() const { return kind_; }
  double base() const { return b_; }
  double eps() const { return eps_; }
  double support_lo() const;
  double support_hi() const { return kind_ == CutoffKind::TypeA ? b_ : b_; }

 private:
  CutoffKind kind_;
  double b_;
  double eps_;
  double a_;  // bridge exponent (1-eps)/eps
  double type_a(double t) const;
  friend class LPSystem;
  friend class GammaSystem;
};

Cutoff make_cutoff(CutoffKind kind, double b, double eps);

/// Littlewood-Paley system Psi_0..Psi_J built from a TypeA cutoff.
/// Additive variant: sum_j Psi_j(u) = 1 on [0, b^J];
/// squared variant: sum_j Psi_j(u)^2 = 1 there.
class LPSystem {
 public:
  LPSystem(const Cutoff& phi, double b, int levels, bool squared);

  double operator()(int j, double u) const;
  int levels() const { return levels_; }
  double base() const { return b_; }
  bool squared() const { return squared_; }
  /// Support of Psi_j is [band_lo(j), band_hi(j)].
  double band_lo(int j) const;
  double band_hi(int j) const;
  /// sum Psi_j(u) (additive) or sum Psi_j(u)^2 (squared) over j = 0..J.
  double partition_sum(double u) const;
  /// Measured min of Psi_1 over [b^{1/4}, b^{7/4}] (positivity on the
  /// overlap region required by the frame construction).
  double overlap_floor() const { return overlap_floor_; }
  const Cutoff& phi() const { return phi_; }

 private:
  Cutoff phi_;
  double b_;
  int levels_;
  bool squared_;
  double overlap_floor_;
};

/// Gamma_0(u) = Phi(u/b), Gamma_1(u) = Phi(u/b^2) - Phi(bu), Theta(u) = Phi(u/b^3).
class GammaSystem {
 public:
  GammaSystem(const Cutoff& phi, double b);
  double gamma0(double u) const;
  double gamma1(double u) const;
  double theta(double u) const;
  double base() const { return b_; }

 private:
  Cutoff phi_;
  double b_;
};

struct Systems {
  LPSystem additive;
  LPSystem squared;
  GammaSystem gamma;
};

/// Builds the additive and squared LP systems and the Gamma system from a
/// TypeA cutoff; certifies the partition identities and the positivity of
/// Psi on the overlap region. Throws ConstructionError on a negative
/// radicand beyond -1e-14.
Systems make_systems(const Cutoff& phi_a, double b, int levels);

struct GrowthReport {
  struct Row {
    int k;
    double sup_norm;
    double bound;  // 8 (16 eps^{-1} k^{1+eps})^k
    bool within;
  };
  std::vector<Row> rows;
};

/// Measures sup-norms of derivatives against the reference growth bound.
/// A violation is reported, not thrown.
GrowthReport verify_growth(const Cutoff& phi, int k_max, double eps);

}  // namespace hkframe

#endif
