// Truncated univariate Taylor series ("jets") in one variable, used to carry
// exact t-derivatives of analytic background families to arbitrary order.
// Coefficients are Taylor coefficients f^(k)/k!; raw_deriv converts back.
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "rarefaction/errors.hpp"

namespace rarefaction {

class TJet {
 public:
  TJet() = default;
  explicit TJet(int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) {}

  static TJet constant(double value, int order) {
    TJet j(order);
    j.c_[0] = value;
    return j;
  }

  // The identity function evaluated at t: value t, first derivative 1.
  static TJet variable(double t, int order) {
    TJet j(order);
    j.c_[0] = t;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }
  double value() const { return c_[0]; }

  // n-th derivative value: n! * c_n.
  double raw_deriv(int n) const;

  // Series of the derivative, one order shorter.
  TJet deriv() const;

  friend TJet operator+(const TJet& a, const TJet& b);
  friend TJet operator-(const TJet& a, const TJet& b);
  friend TJet operator*(const TJet& a, const TJet& b);
  friend TJet operator/(const TJet& a, const TJet& b);
  friend TJet operator*(double s, const TJet& a);
  friend TJet operator+(const TJet& a, double s);
  friend TJet operator-(const TJet& a, double s);

  friend TJet sqrt(const TJet& f);
  friend TJet exp(const TJet& f);
  friend TJet log(const TJet& f);
  friend std::pair<TJet, TJet> sincos(const TJet& f);
  friend TJet pow(const TJet& f, double p);

 private:
  static void check_match(const TJet& a, const TJet& b);
  std::vector<double> c_;
};

inline double TJet::raw_deriv(int n) const {
  if (n < 0 || n > order()) {
    throw NumericalError("TJet::raw_deriv: order out of range");
  }
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f * c_[static_cast<std::size_t>(n)];
}

inline TJet TJet::deriv() const {
  if (order() < 1) {
    throw NumericalError("TJet::deriv: order 0 jet has no derivative series");
  }
  TJet g(order() - 1);
  for (int k = 0; k < order(); ++k) g.c_[k] = (k + 1) * c_[k + 1];
  return g;
}

inline void TJet::check_match(const TJet& a, const TJet& b) {
  if (a.c_.size() != b.c_.size() || a.c_.empty()) {
    throw NumericalError("TJet: operand orders do not match");
  }
}

inline TJet operator+(const TJet& a, const TJet& b) {
  TJet::check_match(a, b);
  TJet r = a;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += b.c_[k];
  return r;
}

inline TJet operator-(const TJet& a, const TJet& b) {
  TJet::check_match(a, b);
  TJet r = a;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] -= b.c_[k];
  return r;
}

inline TJet operator*(const TJet& a, const TJet& b) {
  TJet::check_match(a, b);
  TJet r(a.order());
  for (int k = 0; k <= a.order(); ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
    r.c_[k] = s;
  }
  return r;
}

inline TJet operator*(double s, const TJet& a) {
  TJet r = a;
  for (auto& x : r.c_) x *= s;
  return r;
}

inline TJet operator+(const TJet& a, double s) {
  TJet r = a;
  r.c_[0] += s;
  return r;
}

inline TJet operator-(const TJet& a, double s) {
  TJet r = a;
  r.c_[0] -= s;
  return r;
}

inline TJet operator/(const TJet& a, const TJet& b) {
  TJet::check_match(a, b);
  if (b.c_[0] == 0.0) {
    throw NumericalError("TJet: division by series with zero value");
  }
  TJet r(a.order());
  for (int k = 0; k <= a.order(); ++k) {
    double s = a.c_[k];
    for (int j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
    r.c_[k] = s / b.c_[0];
  }
  return r;
}

inline TJet sqrt(const TJet& f) {
  if (!(f.c_[0] > 0.0)) {
    throw NumericalError("TJet: sqrt of series with non-positive value");
  }
  TJet r(f.order());
  r.c_[0] = std::sqrt(f.c_[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double s = f.c_[k];
    for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
    r.c_[k] = s / (2.0 * r.c_[0]);
  }
  return r;
}

inline TJet exp(const TJet& f) {
  TJet r(f.order());
  r.c_[0] = std::exp(f.c_[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * f.c_[j] * r.c_[k - j];
    r.c_[k] = s / k;
  }
  return r;
}

inline TJet log(const TJet& f) {
  if (!(f.c_[0] > 0.0)) {
    throw NumericalError("TJet: log of series with non-positive value");
  }
  TJet r(f.order());
  r.c_[0] = std::log(f.c_[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double s = k * f.c_[k];
    for (int j = 1; j < k; ++j) s -= j * r.c_[j] * f.c_[k - j];
    r.c_[k] = s / (k * f.c_[0]);
  }
  return r;
}

inline std::pair<TJet, TJet> sincos(const TJet& f) {
  TJet s(f.order());
  TJet c(f.order());
  s.c_[0] = std::sin(f.c_[0]);
  c.c_[0] = std::cos(f.c_[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double as = 0.0;
    double ac = 0.0;
    for (int j = 1; j <= k; ++j) {
      as += j * f.c_[j] * c.c_[k - j];
      ac += j * f.c_[j] * s.c_[k - j];
    }
    s.c_[k] = as / k;
    c.c_[k] = -ac / k;
  }
  return {s, c};
}

inline TJet pow(const TJet& f, double p) {
  if (!(f.c_[0] > 0.0)) {
    throw NumericalError("TJet: pow of series with non-positive value");
  }
  TJet r(f.order());
  r.c_[0] = std::pow(f.c_[0], p);
  for (int k = 1; k <= f.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) {
      s += (p * j - (k - j)) * f.c_[j] * r.c_[k - j];
    }
    r.c_[k] = s / (k * f.c_[0]);
  }
  return r;
}

}  // namespace rarefaction
