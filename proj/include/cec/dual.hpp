#pragma once

// Forward-mode dual numbers with a fixed-size gradient.
//
// Dual<T, K> carries a value and K partial derivatives, all of type T.
// Nesting (Dual<Dual<double, K>, K>) yields exact higher-order partials,
// which the general backstepping recursion relies on: every virtual
// control is differentiated once per stage it feeds.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace cec {

template <class T, std::size_t K>
struct Dual {
    T v{};
    std::array<T, K> d{};

    constexpr Dual() = default;
    constexpr Dual(double x) : v(x) {}  // NOLINT: implicit lift of constants
    constexpr Dual(T value, const std::array<T, K>& grad) : v(value), d(grad) {}

    /// A variable seeded along direction `index`.
    static Dual variable(T value, std::size_t index) {
        Dual r;
        r.v = value;
        r.d[index] = T(1.0);
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (std::size_t i = 0; i < K; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (std::size_t i = 0; i < K; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (std::size_t i = 0; i < K; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const T inv = T(1.0) / o.v;
        const T q = v / o.v;
        for (std::size_t i = 0; i < K; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
        v = q;
        return *this;
    }
};

template <class T>
struct is_dual : std::false_type {};
template <class T, std::size_t K>
struct is_dual<Dual<T, K>> : std::true_type {};

/// Innermost floating-point value of a possibly nested dual.
inline double value_of(double x) { return x; }
template <class T, std::size_t K>
double value_of(const Dual<T, K>& x) {
    return value_of(x.v);
}

template <class T, std::size_t K>
Dual<T, K> operator-(const Dual<T, K>& a) {
    Dual<T, K> r;
    r.v = -a.v;
    for (std::size_t i = 0; i < K; ++i) r.d[i] = -a.d[i];
    return r;
}

template <class T, std::size_t K>
Dual<T, K> operator+(Dual<T, K> a, const Dual<T, K>& b) {
    return a += b;
}
template <class T, std::size_t K>
Dual<T, K> operator-(Dual<T, K> a, const Dual<T, K>& b) {
    return a -= b;
}
template <class T, std::size_t K>
Dual<T, K> operator*(Dual<T, K> a, const Dual<T, K>& b) {
    return a *= b;
}
template <class T, std::size_t K>
Dual<T, K> operator/(Dual<T, K> a, const Dual<T, K>& b) {
    return a /= b;
}

// Mixed arithmetic with plain doubles.
template <class T, std::size_t K>
Dual<T, K> operator+(Dual<T, K> a, double b) {
    a.v += b;
    return a;
}
template <class T, std::size_t K>
Dual<T, K> operator+(double a, Dual<T, K> b) {
    b.v += a;
    return b;
}
template <class T, std::size_t K>
Dual<T, K> operator-(Dual<T, K> a, double b) {
    a.v -= b;
    return a;
}
template <class T, std::size_t K>
Dual<T, K> operator-(double a, const Dual<T, K>& b) {
    return Dual<T, K>(a) - b;
}
template <class T, std::size_t K>
Dual<T, K> operator*(Dual<T, K> a, double b) {
    a.v *= b;
    for (auto& g : a.d) g *= b;
    return a;
}
template <class T, std::size_t K>
Dual<T, K> operator*(double a, Dual<T, K> b) {
    return b * a;
}
template <class T, std::size_t K>
Dual<T, K> operator/(Dual<T, K> a, double b) {
    a.v = a.v / b;
    for (auto& di : a.d) di = di / b;
    return a;
}
template <class T, std::size_t K>
Dual<T, K> operator/(double a, const Dual<T, K>& b) {
    return Dual<T, K>(a) / b;
}

template <class T, std::size_t K>
Dual<T, K> exp(const Dual<T, K>& a) {
    using std::exp;
    const T e = exp(a.v);
    Dual<T, K> r;
    r.v = e;
    for (std::size_t i = 0; i < K; ++i) r.d[i] = e * a.d[i];
    return r;
}

template <class T, std::size_t K>
Dual<T, K> log(const Dual<T, K>& a) {
    using std::log;
    Dual<T, K> r;
    r.v = log(a.v);
    const T inv = T(1.0) / a.v;
    for (std::size_t i = 0; i < K; ++i) r.d[i] = a.d[i] * inv;
    return r;
}

template <class T, std::size_t K>
Dual<T, K> sin(const Dual<T, K>& a) {
    using std::cos;
    using std::sin;
    Dual<T, K> r;
    r.v = sin(a.v);
    const T c = cos(a.v);
    for (std::size_t i = 0; i < K; ++i) r.d[i] = c * a.d[i];
    return r;
}

template <class T, std::size_t K>
Dual<T, K> cos(const Dual<T, K>& a) {
    using std::cos;
    using std::sin;
    Dual<T, K> r;
    r.v = cos(a.v);
    const T ms = -sin(a.v);
    for (std::size_t i = 0; i < K; ++i) r.d[i] = ms * a.d[i];
    return r;
}

/// Lifts a value into the next nesting level with zero gradient.
template <class S, std::size_t K>
Dual<S, K> lift(const S& x) {
    Dual<S, K> r;
    r.v = x;
    return r;
}

}  // namespace cec
