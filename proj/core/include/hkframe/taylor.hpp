#ifndef HKFRAME_TAYLOR_HPP
#define HKFRAME_TAYLOR_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "hkframe/errors.hpp"

namespace hkframe {

/// Truncated Taylor series about a point, used to differentiate the
/// composed cut-off expressions exactly instead of by finite differences.
/// coeff(k) is the coefficient of t^k; derivative order k at the expansion
/// point is k! * coeff(k).
class Series {
 public:
  Series() = default;
  Series(int order, double constant) : c_(static_cast<std::size_t>(order) + 1, 0.0) { c_[0] = constant; }

  static Series variable(int order, double x0) {
    Series s(order, x0);
    if (order >= 1) s.c_[1] = 1.0;
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }

  double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return fact * c_[static_cast<std::size_t>(k)];
  }

  friend Series operator+(const Series& a, const Series& b) {
    Series r = a;
    for (int k = 0; k <= r.order(); ++k) r.c_[k] += b.c_[k];
    return r;
  }
  friend Series operator-(const Series& a, const Series& b) {
    Series r = a;
    for (int k = 0; k <= r.order(); ++k) r.c_[k] -= b.c_[k];
    return r;
  }
  friend Series operator*(double s, const Series& a) {
    Series r = a;
    for (auto& v : r.c_) v *= s;
    return r;
  }
  friend Series operator+(const Series& a, double s) {
    Series r = a;
    r.c_[0] += s;
    return r;
  }
  friend Series operator-(const Series& a, double s) { return a + (-s); }
  friend Series operator-(double s, const Series& a) {
    Series r = -1.0 * a;
    r.c_[0] += s;
    return r;
  }

  friend Series operator*(const Series& a, const Series& b) {
    const int n = a.order();
    Series r(n, 0.0);
    for (int i = 0; i <= n; ++i) {
      if (a.c_[i] == 0.0) continue;
      for (int j = 0; i + j <= n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend Series operator/(const Series& a, const Series& b) {
    const int n = a.order();
    if (b.c_[0] == 0.0) throw DomainError("series division by zero constant term");
    Series r(n, 0.0);
    for (int k = 0; k <= n; ++k) {
      double acc = a.c_[k];
      for (int i = 1; i <= k; ++i) acc -= b.c_[i] * r.c_[k - i];
      r.c_[k] = acc / b.c_[0];
    }
    return r;
  }

  /// exp(f): g0 = exp(f0), k g_k = sum_{i=1..k} i f_i g_{k-i}.
  friend Series exp(const Series& a) {
    const int n = a.order();
    Series r(n, std::exp(a.c_[0]));
    for (int k = 1; k <= n; ++k) {
      double acc = 0.0;
      for (int i = 1; i <= k; ++i) acc += i * a.c_[i] * r.c_[k - i];
      r.c_[k] = acc / k;
    }
    return r;
  }

  friend Series log(const Series& a) {
    const int n = a.order();
    if (a.c_[0] <= 0.0) throw DomainError("series log of nonpositive constant term");
    Series r(n, std::log(a.c_[0]));
    for (int k = 1; k <= n; ++k) {
      double acc = k * a.c_[k];
      for (int i = 1; i < k; ++i) acc -= i * r.c_[i] * a.c_[k - i];
      r.c_[k] = acc / (k * a.c_[0]);
    }
    return r;
  }

  /// f^p for real p, requires f0 > 0.
  friend Series pow(const Series& a, double p) { return exp(p * log(a)); }

  friend Series sqrt(const Series& a) {
    const int n = a.order();
    if (a.c_[0] <= 0.0) throw DomainError("series sqrt at nonpositive constant term");
    Series r(n, std::sqrt(a.c_[0]));
    for (int k = 1; k <= n; ++k) {
      double acc = a.c_[k];
      for (int i = 1; i < k; ++i) acc -= r.c_[i] * r.c_[k - i];
      r.c_[k] = acc / (2.0 * r.c_[0]);
    }
    return r;
  }

 private:
  std::vector<double> c_;
};

}  // namespace hkframe

#endif
