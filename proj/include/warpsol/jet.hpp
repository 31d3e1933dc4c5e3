#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace warpsol {

/// Order-2 jet of a scalar function of `dim` variables: value, gradient and
/// Hessian. The Hessian is stored as a packed upper triangle, so it is
/// symmetric by construction.
class Jet2 {
 public:
  Jet2() : Jet2(0, 0.0) {}
  explicit Jet2(std::size_t dim, double value = 0.0)
      : dim_(dim), data_(1 + dim + dim * (dim + 1) / 2, 0.0) {
    data_[0] = value;
  }

  static Jet2 constant(double value, std::size_t dim) { return Jet2(dim, value); }

  /// The coordinate function x_index evaluated at `value`.
  static Jet2 variable(double value, std::size_t index, std::size_t dim) {
    Jet2 j(dim, value);
    j.data_[1 + index] = 1.0;
    return j;
  }

  std::size_t dim() const noexcept { return dim_; }
  double value() const noexcept { return data_[0]; }
  double first(std::size_t i) const noexcept { return data_[1 + i]; }
  double second(std::size_t i, std::size_t j) const noexcept { return data_[hess_index(i, j)]; }

  void set_value(double v) noexcept { data_[0] = v; }
  void set_first(std::size_t i, double v) noexcept { data_[1 + i] = v; }
  void set_second(std::size_t i, std::size_t j, double v) noexcept { data_[hess_index(i, j)] = v; }

  std::vector<double> gradient() const {
    return {data_.begin() + 1, data_.begin() + 1 + static_cast<std::ptrdiff_t>(dim_)};
  }

  /// True when all derivative slots are exactly zero.
  bool is_constant() const noexcept {
    for (std::size_t k = 1; k < data_.size(); ++k)
      if (data_[k] != 0.0) return false;
    return true;
  }

  /// Chain rule for a scalar function g with g(a)=g0, g'(a)=g1, g''(a)=g2.
  Jet2 compose(double g0, double g1, double g2) const {
    Jet2 r(dim_, g0);
    for (std::size_t i = 0; i < dim_; ++i) r.data_[1 + i] = g1 * first(i);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        r.data_[hess_index(i, j)] = g1 * second(i, j) + g2 * first(i) * first(j);
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Jet2& operator*=(double s) {
    for (double& d : data_) d *= s;
    return *this;
  }
  Jet2& operator+=(double s) {
    data_[0] += s;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator+(Jet2 a, double s) { return a += s; }
  friend Jet2 operator+(double s, Jet2 a) { return a += s; }
  friend Jet2 operator-(Jet2 a, double s) { return a += -s; }
  friend Jet2 operator-(double s, const Jet2& a) { return -a + s; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
  friend Jet2 operator-(Jet2 a) { return a *= -1.0; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    const std::size_t n = a.dim_;
    Jet2 r(n, a.value() * b.value());
    for (std::size_t i = 0; i < n; ++i) r.data_[1 + i] = a.value() * b.first(i) + b.value() * a.first(i);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        r.data_[hess_index_for(n, i, j)] = a.value() * b.second(i, j) + b.value() * a.second(i, j) +
                                           a.first(i) * b.first(j) + a.first(j) * b.first(i);
    return r;
  }

  /// a / b; the caller guarantees b.value() != 0.
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * b.reciprocal(); }
  friend Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }

  Jet2 reciprocal() const {
    const double v = value();
    return compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }

 private:
  static std::size_t hess_index_for(std::size_t n, std::size_t i, std::size_t j) noexcept {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 hold n, n-1, ... entries
    return 1 + n + i * n - i * (i - 1) / 2 + (j - i);
  }
  std::size_t hess_index(std::size_t i, std::size_t j) const noexcept { return hess_index_for(dim_, i, j); }

  std::size_t dim_;
  std::vector<double> data_;
};

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c);
}
inline Jet2 tan(const Jet2& a) {
  const double t = std::tan(a.value());
  const double sec2 = 1.0 + t * t;
  return a.compose(t, sec2, 2.0 * t * sec2);
}
inline Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(s, c, s);
}
inline Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(c, s, c);
}
inline Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.value());
  const double sech2 = 1.0 - t * t;
  return a.compose(t, sech2, -2.0 * t * sech2);
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e);
}
/// Requires a.value() > 0.
inline Jet2 log(const Jet2& a) {
  const double v = a.value();
  return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}
/// Requires a.value() > 0 when derivatives are present.
inline Jet2 sqrt(const Jet2& a) {
  const double r = std::sqrt(a.value());
  return a.compose(r, 0.5 / r, -0.25 / (r * a.value()));
}
/// Requires a.value() != 0 when derivatives are present.
inline Jet2 abs(const Jet2& a) {
  const double s = a.value() < 0.0 ? -1.0 : 1.0;
  return a.compose(std::abs(a.value()), s, 0.0);
}

/// Integer power by binary exponentiation; negative exponents need a.value() != 0.
inline Jet2 pow_int(const Jet2& a, long long k) {
  if (k < 0) return pow_int(a, -k).reciprocal();
  Jet2 result = Jet2::constant(1.0, a.dim());
  Jet2 base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

/// Lift a jet in one variable into `dim` variables, placing it on coordinate `index`.
inline Jet2 embed(const Jet2& univariate, std::size_t index, std::size_t dim) {
  Jet2 r(dim, univariate.value());
  r.set_first(index, univariate.first(0));
  r.set_second(index, index, univariate.second(0, 0));
  return r;
}

}  // namespace warpsol
