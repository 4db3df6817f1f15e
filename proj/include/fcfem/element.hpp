////////////////////////////////////////////////////////////////////////////////
// element.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Degree-k Lagrange bases on reference simplices.
//
//  Nodes sit on the uniform principal lattice (multi-indices summing to k);
//  basis functions are Silvester products of the barycentric coordinates.
//  Reference gradients are taken with respect to the reference coordinates
//  x_r = lambda_{r+1}, i.e. d/dx_r = d/dlambda_{r+1} - d/dlambda_0.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/geometry.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace fcfem {

template <int D>
inline void check_barycentric(const std::array<double, D + 1> &lam) {
    double sum = 0;
    for (int a = 0; a <= D; ++a) {
        if (!(lam[a] >= -1e-12))
            throw std::invalid_argument("malformed barycentric point: negative component");
        sum += lam[a];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("malformed barycentric point: components sum to "
                                    + std::to_string(sum));
}

namespace detail {

// Silvester factor P_m(t) = prod_{r<m} (k t - r)/(m - r); P_0 = 1.
inline double silvester(int m, int k, double t) {
    double p = 1;
    for (int r = 0; r < m; ++r) p *= (k * t - r) / double(m - r);
    return p;
}

inline double silvester_deriv(int m, int k, double t) {
    if (m == 0) return 0;
    double sum = 0;
    for (int r = 0; r < m; ++r) {
        double p = 1;
        for (int s = 0; s < m; ++s)
            if (s != r) p *= (k * t - s);
        sum += p;
    }
    return k * sum / factorial(m);
}

} // namespace detail

template <int D>
struct LagrangeBasis {
    int degree = 1;
    // Lattice multi-indices (i_0..i_D), sum = degree; node = multi-index / degree.
    std::vector<std::array<int, D + 1>> nodes;

    explicit LagrangeBasis(int k) : degree(k) {
        if (k < 1 || k > 10)
            throw std::invalid_argument("LagrangeBasis: degree out of range: " + std::to_string(k));
        if constexpr (D == 2) {
            for (int j = 0; j <= k; ++j)
                for (int i = 0; i + j <= k; ++i)
                    nodes.push_back({k - i - j, i, j});
        } else {
            static_assert(D == 3);
            for (int l = 0; l <= k; ++l)
                for (int j = 0; j + l <= k; ++j)
                    for (int i = 0; i + j + l <= k; ++i)
                        nodes.push_back({k - i - j - l, i, j, l});
        }
    }

    int count() const { return static_cast<int>(nodes.size()); }

    std::array<double, D + 1> node_bary(int i) const {
        std::array<double, D + 1> lam;
        for (int a = 0; a <= D; ++a) lam[a] = nodes[i][a] / double(degree);
        return lam;
    }

    // Values and reference gradients of every basis function at one point.
    void eval(const std::array<double, D + 1> &lam,
              std::vector<double> &values,
              std::vector<std::array<double, D>> &ref_grads,
              bool validate = true) const {
        if (validate) check_barycentric<D>(lam);
        const int nb = count();
        values.resize(nb);
        ref_grads.resize(nb);
        std::array<double, D + 1> p, dp;
        for (int i = 0; i < nb; ++i) {
            for (int a = 0; a <= D; ++a) {
                p[a] = detail::silvester(nodes[i][a], degree, lam[a]);
                dp[a] = detail::silvester_deriv(nodes[i][a], degree, lam[a]);
            }
            double v = 1;
            for (int a = 0; a <= D; ++a) v *= p[a];
            values[i] = v;
            std::array<double, D + 1> dlam;  // d(phi)/d(lambda_a)
            for (int a = 0; a <= D; ++a) {
                double prod = dp[a];
                for (int b = 0; b <= D; ++b)
                    if (b != a) prod *= p[b];
                dlam[a] = prod;
            }
            for (int r = 0; r < D; ++r) ref_grads[i][r] = dlam[r + 1] - dlam[0];
        }
    }
};

// Basis values and reference gradients tabulated at a fixed point set.
// Layout: entry for point q, basis i at [q * nbasis + i].
template <int D>
struct BasisTab {
    int npts = 0;
    int nbasis = 0;
    std::vector<double> values;
    std::vector<std::array<double, D>> grads;

    double value(int q, int i) const { return values[static_cast<size_t>(q) * nbasis + i]; }
    const std::array<double, D> &grad(int q, int i) const {
        return grads[static_cast<size_t>(q) * nbasis + i];
    }
};

template <int D>
BasisTab<D> tabulate_basis(const LagrangeBasis<D> &basis,
                           const std::vector<std::array<double, D + 1>> &pts) {
    BasisTab<D> tab;
    tab.npts = static_cast<int>(pts.size());
    tab.nbasis = basis.count();
    tab.values.reserve(static_cast<size_t>(tab.npts) * tab.nbasis);
    tab.grads.reserve(static_cast<size_t>(tab.npts) * tab.nbasis);
    std::vector<double> vals;
    std::vector<std::array<double, D>> grads;
    for (const auto &lam : pts) {
        basis.eval(lam, vals, grads, /*validate=*/false);
        tab.values.insert(tab.values.end(), vals.begin(), vals.end());
        tab.grads.insert(tab.grads.end(), grads.begin(), grads.end());
    }
    return tab;
}

} // namespace fcfem
