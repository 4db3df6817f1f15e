////////////////////////////////////////////////////////////////////////////////
// quadrature.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Quadrature rules on reference simplices in barycentric form.
//
//  Interior rules on triangles/tetrahedra come from the Grundmann-Moller
//  construction, 1D rules from Gauss-Legendre.  Weights always sum to the
//  reference-simplex measure 1/K!, so a physical integral is
//      sum_q w_q f(x_q) * |det J|.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/geometry.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcfem {

// Rule on the reference K-simplex; points stored as K+1 barycentric coords.
template <int K>
struct QuadratureRule {
    int exactness = 0;
    std::vector<std::array<double, K + 1>> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

// Gauss-Legendre rule with n points on [0,1], exact through degree 2n-1.
// Barycentric form: point t has coordinates (1-t, t); weights sum to 1.
inline QuadratureRule<1> gauss_legendre(int n) {
    if (n < 1 || n > 64)
        throw std::invalid_argument("gauss_legendre: point count out of range: " + std::to_string(n));
    QuadratureRule<1> rule;
    rule.exactness = 2 * n - 1;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n from the Chebyshev-based initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one clean-up step then stop
                p0 = 1.0; p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        const double t0 = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1]
        const double t1 = 0.5 * (1.0 + x);
        rule.points[i] = {1.0 - t0, t0};
        rule.weights[i] = 0.5 * w;
        rule.points[n - 1 - i] = {1.0 - t1, t1};
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

namespace detail {

// Enumerate all beta in N^{K+1} with |beta| = total, invoking fn(beta).
template <int K, class Fn>
void for_each_composition(int total, Fn &&fn) {
    std::array<int, K + 1> beta{};
    if constexpr (K == 1) {
        for (int i = 0; i <= total; ++i) {
            beta = {i, total - i};
            fn(beta);
        }
    } else if constexpr (K == 2) {
        for (int i = 0; i <= total; ++i)
            for (int j = 0; j <= total - i; ++j) {
                beta = {i, j, total - i - j};
                fn(beta);
            }
    } else {
        static_assert(K == 3, "for_each_composition: unsupported simplex dimension");
        for (int i = 0; i <= total; ++i)
            for (int j = 0; j <= total - i; ++j)
                for (int k = 0; k <= total - i - j; ++k) {
                    beta = {i, j, k, total - i - j - k};
                    fn(beta);
                }
    }
}

} // namespace detail

// Grundmann-Moller rule of odd degree 2s+1 >= degree on the K-simplex.
template <int K>
QuadratureRule<K> grundmann_moller(int degree) {
    static_assert(K >= 1 && K <= 3);
    if (degree < 0)
        throw std::invalid_argument("grundmann_moller: negative degree");
    int s = 0;
    while (2 * s + 1 < degree) ++s;

    QuadratureRule<K> rule;
    rule.exactness = 2 * s + 1;
    double wsum = 0;
    for (int i = 0; i <= s; ++i) {
        const double denom = K + 1 + 2 * (s - i);
        const double w = ((i % 2) ? -1.0 : 1.0) * std::pow(2.0, -2 * s)
                       * std::pow(denom, 2 * s + 1)
                       / (factorial(i) * factorial(K + 2 * s + 1 - i));
        detail::for_each_composition<K>(s - i, [&](const std::array<int, K + 1> &beta) {
            std::array<double, K + 1> lam;
            for (int a = 0; a <= K; ++a) lam[a] = (2.0 * beta[a] + 1.0) / denom;
            rule.points.push_back(lam);
            rule.weights.push_back(w);
            wsum += w;
        });
    }
    // Renormalize so the weights sum to the reference measure exactly.
    const double scale = (1.0 / factorial(K)) / wsum;
    for (double &w : rule.weights) w *= scale;
    return rule;
}

// Rule on the reference K-simplex exact at least through `degree`.
template <int K>
QuadratureRule<K> simplex_rule(int degree) {
    static_assert(K >= 1 && K <= 3);
    constexpr int max_degree = (K == 1) ? 99 : (K == 2) ? 20 : 16;
    if (degree < 0 || degree > max_degree)
        throw std::invalid_argument("simplex_rule: unsupported exactness degree " + std::to_string(degree)
                                    + " for simplex dimension " + std::to_string(K));
    if constexpr (K == 1)
        return gauss_legendre(degree / 2 + 1);
    else
        return grundmann_moller<K>(degree);
}

// Exact integral of the barycentric monomial prod lambda_a^{e_a} over the
// reference K-simplex (measure 1/K!): prod(e_a!) / (|e| + K)!.
template <int K>
inline double barycentric_moment(const std::array<int, K + 1> &e) {
    double num = 1;
    int total = 0;
    for (int a = 0; a <= K; ++a) {
        num *= factorial(e[a]);
        total += e[a];
    }
    return num / factorial(total + K);
}

} // namespace fcfem
