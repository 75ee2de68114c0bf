#pragma once

#include <cmath>

namespace revmass {

/// Forward-mode dual number. Nest Dual<Dual<double>> for second
/// derivatives and so on.
template <typename T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x), d(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
  }
  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
};

inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

inline double sqrt(double x) { return std::sqrt(x); }
inline double exp(double x) { return std::exp(x); }

template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  using revmass::sqrt;
  const T s = sqrt(x.v);
  return {s, x.d / (T(2.0) * s)};
}

template <typename T>
Dual<T> exp(const Dual<T>& x) {
  using revmass::exp;
  const T e = exp(x.v);
  return {e, x.d * e};
}

}  // namespace revmass
