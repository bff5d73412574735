#pragma once

// Nested forward-mode dual numbers.
//
// Dual<double> carries a value and its gradient with respect to N seeded
// variables. Nesting (Dual<Dual<double>>) gives exact second derivatives,
// Dual<Dual<Dual<double>>> third derivatives; every metric, chart map and
// frame in the library is written once as a generic function and evaluated
// at whichever level the caller needs.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace framekin {

template <class T, std::size_t N = 4>
struct Dual {
  using value_type = T;
  static constexpr std::size_t size = N;

  T v{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(const T& c)          // NOLINT(google-explicit-constructor)
    requires(!std::is_same_v<T, double>)
      : v(c) {}
  constexpr Dual(const T& value, const std::array<T, N>& grad) : v(value), d(grad) {}

  constexpr Dual& operator+=(const Dual& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) { return *this = *this * o; }
  constexpr Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend constexpr Dual operator-(const Dual& a) {
    Dual r;
    r.v = -a.v;
    for (std::size_t i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v / b.v;
    for (std::size_t i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
    return r;
  }

  // Scalar overloads skip the zero gradient of a promoted constant.
  friend constexpr Dual operator+(Dual a, double c) {
    a.v += c;
    return a;
  }
  friend constexpr Dual operator+(double c, Dual a) { return a + c; }
  friend constexpr Dual operator-(Dual a, double c) {
    a.v -= c;
    return a;
  }
  friend constexpr Dual operator-(double c, const Dual& a) { return -a + c; }
  friend constexpr Dual operator*(Dual a, double c) {
    a.v *= c;
    for (std::size_t i = 0; i < N; ++i) a.d[i] *= c;
    return a;
  }
  friend constexpr Dual operator*(double c, Dual a) { return a * c; }
  friend constexpr Dual operator/(Dual a, double c) { return a * (1.0 / c); }
  friend constexpr Dual operator/(double c, const Dual& a) { return Dual(c) / a; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

constexpr double value_of(double x) { return x; }
template <class T, std::size_t N>
constexpr double value_of(const Dual<T, N>& x) {
  return value_of(x.v);
}

/// Number of nested derivative levels carried by a scalar type.
template <class T>
struct derivative_order : std::integral_constant<int, 0> {};
template <class T, std::size_t N>
struct derivative_order<Dual<T, N>> : std::integral_constant<int, 1 + derivative_order<T>::value> {};
template <class T>
inline constexpr int derivative_order_v = derivative_order<T>::value;

/// The i-th independent variable with value x, seeded at every nesting level.
template <class T>
constexpr T variable(double x, std::size_t i) {
  if constexpr (std::is_same_v<T, double>) {
    return x;
  } else {
    using U = typename T::value_type;
    T r(variable<U>(x, i));
    r.d[i] = U(1.0);
    return r;
  }
}

/// Drop every derivative part: the constant with the same value.
template <class T>
constexpr T constant_like(const T& x) {
  return T(value_of(x));
}

namespace detail {
template <class T, std::size_t N>
constexpr Dual<T, N> chain(const Dual<T, N>& x, const T& f0, const T& f1) {
  Dual<T, N> r;
  r.v = f0;
  for (std::size_t i = 0; i < N; ++i) r.d[i] = f1 * x.d[i];
  return r;
}
}  // namespace detail

template <class T, std::size_t N>
Dual<T, N> sqrt(const Dual<T, N>& x) {
  using std::sqrt;
  T s = sqrt(x.v);
  return detail::chain(x, s, 0.5 / s);
}

template <class T, std::size_t N>
Dual<T, N> exp(const Dual<T, N>& x) {
  using std::exp;
  T e = exp(x.v);
  return detail::chain(x, e, e);
}

template <class T, std::size_t N>
Dual<T, N> log(const Dual<T, N>& x) {
  using std::log;
  return detail::chain(x, T(log(x.v)), T(1.0 / x.v));
}

template <class T, std::size_t N>
Dual<T, N> sin(const Dual<T, N>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, T(sin(x.v)), T(cos(x.v)));
}

template <class T, std::size_t N>
Dual<T, N> cos(const Dual<T, N>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, T(cos(x.v)), T(-sin(x.v)));
}

template <class T, std::size_t N>
Dual<T, N> pow(const Dual<T, N>& x, double p) {
  using std::pow;
  return detail::chain(x, T(pow(x.v, p)), T(p * pow(x.v, p - 1.0)));
}

}  // namespace framekin
