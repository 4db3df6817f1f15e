////////////////////////////////////////////////////////////////////////////////
// geometry.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Small fixed-size vector/matrix types and affine simplex geometry helpers
//  shared by the mesh, assembly, and flux layers.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace fcfem {

template <int D>
struct Vec {
    std::array<double, D> c{};

    double &operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    Vec &operator+=(const Vec &o) {
        for (int i = 0; i < D; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec &operator-=(const Vec &o) {
        for (int i = 0; i < D; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec &operator*=(double s) {
        for (int i = 0; i < D; ++i) c[i] *= s;
        return *this;
    }
};

template <int D> inline Vec<D> operator+(Vec<D> a, const Vec<D> &b) { return a += b; }
template <int D> inline Vec<D> operator-(Vec<D> a, const Vec<D> &b) { return a -= b; }
template <int D> inline Vec<D> operator*(Vec<D> a, double s) { return a *= s; }
template <int D> inline Vec<D> operator*(double s, Vec<D> a) { return a *= s; }

template <int D>
inline double dot(const Vec<D> &a, const Vec<D> &b) {
    double s = 0;
    for (int i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <int D>
inline double norm(const Vec<D> &a) { return std::sqrt(dot(a, a)); }

template <int D>
inline double distance(const Vec<D> &a, const Vec<D> &b) { return norm(a - b); }

inline Vec<3> cross(const Vec<3> &a, const Vec<3> &b) {
    return {{a[1] * b[2] - a[2] * b[1],
             a[2] * b[0] - a[0] * b[2],
             a[0] * b[1] - a[1] * b[0]}};
}

// Row-major square matrix, only the sizes the library needs (D = 2, 3).
template <int D>
struct Mat {
    std::array<std::array<double, D>, D> a{};

    static Mat identity() {
        Mat m;
        for (int i = 0; i < D; ++i) m.a[i][i] = 1.0;
        return m;
    }

    Vec<D> operator*(const Vec<D> &x) const {
        Vec<D> y;
        for (int i = 0; i < D; ++i) {
            double s = 0;
            for (int j = 0; j < D; ++j) s += a[i][j] * x[j];
            y[i] = s;
        }
        return y;
    }

    Vec<D> operator*(const std::array<double, D> &x) const { return *this * Vec<D>{x}; }

    Mat transpose() const {
        Mat t;
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) t.a[i][j] = a[j][i];
        return t;
    }

    double det() const {
        if constexpr (D == 2) {
            return a[0][0] * a[1][1] - a[0][1] * a[1][0];
        } else {
            return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                 - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                 + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        }
    }

    Mat inverse() const {
        const double d = det();
        if (std::abs(d) < 1e-300)
            throw std::runtime_error("Mat::inverse: singular matrix");
        Mat inv;
        if constexpr (D == 2) {
            inv.a[0][0] =  a[1][1] / d;
            inv.a[0][1] = -a[0][1] / d;
            inv.a[1][0] = -a[1][0] / d;
            inv.a[1][1] =  a[0][0] / d;
        } else {
            inv.a[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
            inv.a[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d;
            inv.a[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
            inv.a[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d;
            inv.a[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
            inv.a[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d;
            inv.a[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d;
            inv.a[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d;
            inv.a[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;
        }
        return inv;
    }
};

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline double factorial(int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Signed volume of a full-dimensional simplex: det of edge matrix / D!.
template <int D>
inline double simplex_signed_volume(const std::array<Vec<D>, D + 1> &x) {
    Mat<D> J;
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) J.a[i][j] = x[j + 1][i] - x[0][i];
    return J.det() / factorial(D);
}

// Measure of a (D-1)-dimensional facet given its D vertices.
template <int D>
inline double facet_measure(const std::array<Vec<D>, D> &x) {
    if constexpr (D == 2) {
        return distance(x[0], x[1]);
    } else {
        return 0.5 * norm(cross(x[1] - x[0], x[2] - x[0]));
    }
}

} // namespace fcfem
