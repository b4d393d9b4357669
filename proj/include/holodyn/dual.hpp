#pragma once

/**
 * @file dual.hpp
 * @brief Forward-mode dual numbers over a complex scalar.
 *
 * A Dual<T> carries a value and the derivative with respect to a single
 * complex variable. Holomorphic operations propagate by the chain rule.
 */

#include <cmath>
#include <complex>

namespace holodyn {

template <class T>
struct Dual {
  T value{};
  T deriv{};

  constexpr Dual() = default;
  constexpr Dual(T v, T d = T{}) : value(v), deriv(d) {}

  static constexpr Dual variable(T v) { return Dual(v, T{1}); }
  static constexpr Dual constant(T v) { return Dual(v, T{}); }

  constexpr Dual operator-() const { return {-value, -deriv}; }

  constexpr Dual& operator+=(const Dual& o) { value += o.value; deriv += o.deriv; return *this; }
  constexpr Dual& operator-=(const Dual& o) { value -= o.value; deriv -= o.deriv; return *this; }
  constexpr Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }
};

template <class T> constexpr Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> constexpr Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> constexpr Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> constexpr Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }

template <class T> constexpr Dual<T> operator+(Dual<T> a, const T& b) { a.value += b; return a; }
template <class T> constexpr Dual<T> operator+(const T& b, Dual<T> a) { a.value += b; return a; }
template <class T> constexpr Dual<T> operator-(Dual<T> a, const T& b) { a.value -= b; return a; }
template <class T> constexpr Dual<T> operator-(const T& b, const Dual<T>& a) { return {b - a.value, -a.deriv}; }
template <class T> constexpr Dual<T> operator*(Dual<T> a, const T& b) { a.value *= b; a.deriv *= b; return a; }
template <class T> constexpr Dual<T> operator*(const T& b, Dual<T> a) { a.value *= b; a.deriv *= b; return a; }
template <class T> constexpr Dual<T> operator/(Dual<T> a, const T& b) { a.value /= b; a.deriv /= b; return a; }

template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = std::exp(a.value);
  return {e, e * a.deriv};
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  return {std::log(a.value), a.deriv / a.value};
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = std::sqrt(a.value);
  return {s, a.deriv / (T{2} * s)};
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {std::sin(a.value), std::cos(a.value) * a.deriv};
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {std::cos(a.value), -std::sin(a.value) * a.deriv};
}

/// Integer power by repeated squaring; negative exponents invert.
template <class T>
Dual<T> ipow(const Dual<T>& a, int n) {
  if (n == 0) return Dual<T>::constant(T{1});
  if (n < 0) return Dual<T>::constant(T{1}) / ipow(a, -n);
  T p{1};
  T base = a.value;
  for (unsigned k = static_cast<unsigned>(n - 1); k; k >>= 1) {
    if (k & 1u) p *= base;
    base *= base;
  }
  // p = a^(n-1)
  return {p * a.value, T(static_cast<double>(n)) * p * a.deriv};
}

}  // namespace holodyn
