#pragma once
// Fixed-order truncated power series with coefficients in C, C^4, or small
// complex matrices. All operations keep the truncation order of their inputs
// (shortest wins) and are exact in the retained coefficients.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "qwalk/state.hpp"

namespace qwalk {

template <typename T>
struct series_zero {
  static T value() { return T::Zero(); }
};
template <>
struct series_zero<cplx> {
  static cplx value() { return cplx{0.0, 0.0}; }
};

template <typename T>
struct TruncatedSeries {
  std::vector<T> c;

  TruncatedSeries() = default;
  explicit TruncatedSeries(int order)
      : c(static_cast<size_t>(order) + 1, series_zero<T>::value()) {}

  int order() const { return static_cast<int>(c.size()) - 1; }
  T& operator[](int n) { return c[static_cast<size_t>(n)]; }
  const T& operator[](int n) const { return c[static_cast<size_t>(n)]; }
};

using ScalarSeries = TruncatedSeries<cplx>;

template <typename T>
TruncatedSeries<T> operator+(const TruncatedSeries<T>& a,
                             const TruncatedSeries<T>& b) {
  TruncatedSeries<T> r(std::min(a.order(), b.order()));
  for (int n = 0; n <= r.order(); ++n) r[n] = a[n] + b[n];
  return r;
}

template <typename T>
TruncatedSeries<T> operator-(const TruncatedSeries<T>& a,
                             const TruncatedSeries<T>& b) {
  TruncatedSeries<T> r(std::min(a.order(), b.order()));
  for (int n = 0; n <= r.order(); ++n) r[n] = a[n] - b[n];
  return r;
}

template <typename T>
TruncatedSeries<T> scale(const TruncatedSeries<T>& a, cplx s) {
  TruncatedSeries<T> r = a;
  for (T& v : r.c) v = s * v;
  return r;
}

// Cauchy product; the result type R must absorb A*B products
template <typename R, typename A, typename B>
TruncatedSeries<R> mul(const TruncatedSeries<A>& a,
                       const TruncatedSeries<B>& b) {
  TruncatedSeries<R> r(std::min(a.order(), b.order()));
  for (int n = 0; n <= r.order(); ++n)
    for (int i = 0; i <= n; ++i) r[n] += a[i] * b[n - i];
  return r;
}

// multiply by z^k (coefficients shift up, top ones fall off)
template <typename T>
TruncatedSeries<T> shift_up(const TruncatedSeries<T>& a, int k) {
  TruncatedSeries<T> r(a.order());
  for (int n = a.order(); n >= k; --n) r[n] = a[n - k];
  return r;
}

// reciprocal of a scalar series with nonzero constant term
inline ScalarSeries inverse(const ScalarSeries& a) {
  if (std::abs(a[0]) < 1e-300)
    throw std::invalid_argument("series has no reciprocal: zero constant term");
  ScalarSeries r(a.order());
  r[0] = 1.0 / a[0];
  for (int n = 1; n <= r.order(); ++n) {
    cplx acc{0.0, 0.0};
    for (int i = 1; i <= n; ++i) acc += a[i] * r[n - i];
    r[n] = -acc / a[0];
  }
  return r;
}

// square root branch with sqrt(a0) as the constant term
inline ScalarSeries sqrt_series(const ScalarSeries& a) {
  if (std::abs(a[0]) < 1e-300)
    throw std::invalid_argument("series square root needs a nonzero constant");
  ScalarSeries r(a.order());
  r[0] = std::sqrt(a[0]);
  for (int n = 1; n <= r.order(); ++n) {
    cplx acc{0.0, 0.0};
    for (int i = 1; i < n; ++i) acc += r[i] * r[n - i];
    r[n] = (a[n] - acc) / (2.0 * r[0]);
  }
  return r;
}

// (I - X)^{-1} V for a matrix-valued series X with X[0] = 0
template <typename M, typename V>
TruncatedSeries<V> apply_resolvent(const TruncatedSeries<M>& x,
                                   const TruncatedSeries<V>& v) {
  TruncatedSeries<V> g(std::min(x.order(), v.order()));
  for (int n = 0; n <= g.order(); ++n) {
    g[n] = v[n];
    for (int u = 1; u <= n; ++u) g[n] += x[u] * g[n - u];
  }
  return g;
}

// (I - X)^{-1} for a square-matrix series with X[0] = 0
template <typename M>
TruncatedSeries<M> resolvent(const TruncatedSeries<M>& x,
                             const std::type_identity_t<M>& identity) {
  TruncatedSeries<M> g(x.order());
  g[0] = identity;
  for (int n = 1; n <= g.order(); ++n) {
    g[n] = series_zero<M>::value();
    for (int u = 1; u <= n; ++u) g[n] += x[u] * g[n - u];
  }
  return g;
}

template <typename T>
T evaluate(const TruncatedSeries<T>& a, cplx z) {
  T acc = a[a.order()];
  for (int n = a.order() - 1; n >= 0; --n) acc = a[n] + z * acc;
  return acc;
}

}  // namespace qwalk
