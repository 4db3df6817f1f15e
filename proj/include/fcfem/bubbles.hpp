////////////////////////////////////////////////////////////////////////////////
// bubbles.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Bubble functions and the flux-conserving correction.
//
//  The standard bubble on a d-simplex is (d+1)^{d+1} * lambda_0 ... lambda_d:
//  positive inside, zero on the boundary, 1 at the centroid.  The orthogonal
//  family (2D, degrees 3..8) multiplies the cubic bubble by fixed polynomials
//  q_k(x,y) chosen so that adding the bubble leaves the degree-(k-2) Galerkin
//  equations untouched for constant coefficients on affine cells.
//
//  The correction picks per-cell coefficients gamma so that the corrected
//  solution u_h + sum gamma_tau b_tau has zero flux residual on every cell.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/flux.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fcfem {

struct BubbleKind {
    enum class Tag { standard, orthogonal };
    Tag tag = Tag::standard;
    int k = 0;  // polynomial degree, orthogonal family only

    static BubbleKind standard() { return {}; }

    static BubbleKind orthogonal(int k) {
        if (k < 3 || k > 8)
            throw std::invalid_argument("BubbleKind::orthogonal: degree " + std::to_string(k)
                                        + " outside the implemented family 3..8");
        BubbleKind b;
        b.tag = Tag::orthogonal;
        b.k = k;
        return b;
    }

    int poly_degree(int dim) const {
        return tag == Tag::standard ? dim + 1 : k;
    }
};

namespace detail {

inline void orthogonal_q(int k, double x, double y, double &q, double &qx, double &qy) {
    switch (k) {
    case 3:
        q = 1; qx = 0; qy = 0;
        return;
    case 4:
        q = 3 * x + 3 * y - 2; qx = 3; qy = 3;
        return;
    case 5:
        q = x * x - 3 * x * y + y * y;
        qx = 2 * x - 3 * y;
        qy = -3 * x + 2 * y;
        return;
    case 6:
        q = 2 * x * x - 6 * x * y + 2 * y * y
          + x * x * x - 16 * x * x * y + 26 * x * y * y - 6 * y * y * y;
        qx = 4 * x - 6 * y + 3 * x * x - 32 * x * y + 26 * y * y;
        qy = -6 * x + 4 * y - 16 * x * x + 52 * x * y - 18 * y * y;
        return;
    case 7: {
        const double x2 = x * x, y2 = y * y;
        q = x2 * x2 - 10 * x2 * x * y + 20 * x2 * y2 - 10 * x * y2 * y + y2 * y2;
        qx = 4 * x2 * x - 30 * x2 * y + 40 * x * y2 - 10 * y2 * y;
        qy = -10 * x2 * x + 40 * x2 * y - 30 * x * y2 + 4 * y2 * y;
        return;
    }
    case 8: {
        const double x2 = x * x, y2 = y * y, x3 = x2 * x, y3 = y2 * y;
        q = 3 * x2 * x2 - 30 * x3 * y + 60 * x2 * y2 - 30 * x * y3 + 3 * y2 * y2
          + 3 * x3 * x2 - 66 * x2 * x2 * y + 290 * x3 * y2 - 360 * x2 * y3 + 129 * x * y2 * y2 - 10 * y3 * y2;
        qx = 12 * x3 - 90 * x2 * y + 120 * x * y2 - 30 * y3
           + 15 * x2 * x2 - 264 * x3 * y + 870 * x2 * y2 - 720 * x * y3 + 129 * y2 * y2;
        qy = -30 * x3 + 120 * x2 * y - 90 * x * y2 + 12 * y3
           - 66 * x2 * x2 + 580 * x3 * y - 1080 * x2 * y2 + 516 * x * y3 - 50 * y2 * y2;
        return;
    }
    default:
        throw std::invalid_argument("orthogonal bubble degree out of range");
    }
}

} // namespace detail

// Value and reference gradient of the bubble at a barycentric point.
template <int D>
inline void bubble_eval(const BubbleKind &kind, const std::array<double, D + 1> &lam,
                        double &value, std::array<double, D> &ref_grad) {
    if (kind.tag == BubbleKind::Tag::orthogonal) {
        if constexpr (D != 2) {
            throw std::invalid_argument("orthogonal bubbles are available in 2D only");
        } else {
            const double x = lam[1], y = lam[2];
            double q, qx, qy;
            detail::orthogonal_q(kind.k, x, y, q, qx, qy);
            const double w = 27 * x * y * (1 - x - y);
            const double wx = 27 * y * (1 - 2 * x - y);
            const double wy = 27 * x * (1 - x - 2 * y);
            value = q * w;
            ref_grad[0] = qx * w + q * wx;
            ref_grad[1] = qy * w + q * wy;
            return;
        }
    }
    constexpr double c = (D == 2) ? 27.0 : 256.0;  // (D+1)^(D+1)
    double prod = 1;
    for (int a = 0; a <= D; ++a) prod *= lam[a];
    value = c * prod;
    std::array<double, D + 1> dlam;
    for (int a = 0; a <= D; ++a) {
        double p = c;
        for (int b = 0; b <= D; ++b)
            if (b != a) p *= lam[b];
        dlam[a] = p;
    }
    for (int r = 0; r < D; ++r) ref_grad[r] = dlam[r + 1] - dlam[0];
}

// int_{boundary(tau)} alpha db/dn ds by facet quadrature (outward normal).
template <int D>
double bubble_boundary_flux(const CellGeometry<D> &geo, const std::type_identity_t<ScalarField<D>> &alpha,
                            const BubbleKind &kind, int facet_degree = -1) {
    if (facet_degree < 0) facet_degree = 2 * kind.poly_degree(D);
    const auto frule = simplex_rule<D - 1>(facet_degree);
    double total = 0;
    for (int lf = 0; lf <= D; ++lf) {
        const auto &fg = geo.facets[lf];
        double s = 0;
        for (int q = 0; q < frule.size(); ++q) {
            const auto lam = embed_facet_point<D>(lf, frule.points[q]);
            double bv;
            std::array<double, D> bg;
            bubble_eval<D>(kind, lam, bv, bg);
            const Vec<D> grad = geo.jacobian_inv_t * bg;
            s += frule.weights[q] * alpha(bary_to_physical(geo, lam)) * dot(grad, fg.normal);
        }
        total += s * fg.measure * factorial(D - 1);
    }
    Vec<D> centroid{};
    for (int a = 0; a <= D; ++a) centroid += geo.x[a];
    centroid *= 1.0 / (D + 1);
    const double scale = std::abs(alpha(centroid)) * std::pow(geo.diameter, D - 2);
    if (std::abs(total) < 1e-14 * scale)
        throw std::runtime_error("bubble_boundary_flux: vanishing bubble flux (degenerate cell or broken quadrature)");
    return total;
}

// Correction coefficients: gamma_tau = -F_tau / int_{boundary} alpha db/dn.
template <int D, class Solution>
std::vector<double> compute_gammas(const Mesh<D> &mesh, const Solution &sol,
                                   const std::type_identity_t<ScalarField<D>> &alpha, const std::type_identity_t<ScalarField<D>> &f,
                                   const BubbleKind &kind, int vol_degree, int facet_degree) {
    const int bubble_facet_degree = std::max(facet_degree, 2 * kind.poly_degree(D));
    std::vector<double> F = flux_residuals<D>(mesh, sol, alpha, f, vol_degree, facet_degree);
    std::vector<double> gammas(F.size());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto geo = cell_geometry(mesh, c);
        gammas[c] = -F[c] / bubble_boundary_flux<D>(geo, alpha, kind, bubble_facet_degree);
    }
    return gammas;
}

template <int D>
std::vector<double> compute_gammas(const FeSpace<D> &sp, const FeFunction<D> &u_h,
                                   const std::type_identity_t<ScalarField<D>> &alpha, const std::type_identity_t<ScalarField<D>> &f,
                                   const BubbleKind &kind) {
    return compute_gammas<D>(*sp.mesh, u_h, alpha, f, kind, 2 * sp.degree + 4, 2 * sp.degree + 2);
}

// u_h plus per-cell bubble corrections.  Evaluates like FeFunction; the
// bubble vanishes on cell boundaries, so traces and nodal values match the
// base function exactly.
template <int D>
struct CorrectedSolution {
    FeFunction<D> base;
    std::vector<double> gammas;
    BubbleKind kind;

    struct Tab {
        typename FeFunction<D>::Tab base_tab;
        const CorrectedSolution *owner = nullptr;
        std::vector<double> bubble_vals;
        std::vector<std::array<double, D>> bubble_ref_grads;
        std::vector<double> vals;
        std::vector<Vec<D>> grads;

        void cell(int c) {
            base_tab.cell(c);
            const double g = owner->gammas[c];
            const auto geo = cell_geometry(*owner->base.space->mesh, c);
            const int nq = static_cast<int>(bubble_vals.size());
            vals.resize(nq);
            grads.resize(nq);
            for (int q = 0; q < nq; ++q) {
                vals[q] = base_tab.value(q) + g * bubble_vals[q];
                grads[q] = base_tab.grad(q) + g * (geo.jacobian_inv_t * bubble_ref_grads[q]);
            }
        }

        double value(int q) const { return vals[q]; }
        const Vec<D> &grad(int q) const { return grads[q]; }
    };

    Tab tabulate(const std::vector<std::array<double, D + 1>> &pts) const {
        Tab t;
        t.base_tab = base.tabulate(pts);
        t.owner = this;
        t.bubble_vals.resize(pts.size());
        t.bubble_ref_grads.resize(pts.size());
        for (size_t q = 0; q < pts.size(); ++q)
            bubble_eval<D>(kind, pts[q], t.bubble_vals[q], t.bubble_ref_grads[q]);
        return t;
    }

    double value(int c, const std::array<double, D + 1> &lam) const {
        double bv;
        std::array<double, D> bg;
        bubble_eval<D>(kind, lam, bv, bg);
        return base.value(c, lam) + gammas[c] * bv;
    }
};

template <int D>
CorrectedSolution<D> build_corrected(FeFunction<D> u_h, std::vector<double> gammas,
                                     const BubbleKind &kind) {
    if (gammas.size() != static_cast<size_t>(u_h.space->mesh->num_cells()))
        throw std::invalid_argument("build_corrected: gamma count does not match cell count");
    if (kind.tag == BubbleKind::Tag::orthogonal && D != 2)
        throw std::invalid_argument("build_corrected: orthogonal bubbles are 2D only");
    return CorrectedSolution<D>{std::move(u_h), std::move(gammas), kind};
}

// Quadrature verification of the orthogonal-bubble construction on the
// reference triangle.
struct OrthogonalityReport {
    int k = 0;
    double max_boundary_value = 0;   // (a) vanishing trace
    double max_moment = 0;           // (b) int b * m = 0, deg m <= k-4
    double laplacian_integral = 0;   // (c) int Laplacian(b) != 0
    double max_grad_orthogonality = 0;  // (d) int grad b . grad v = 0, deg v <= k-2

    bool ok(double tol = 1e-12) const {
        return max_boundary_value <= tol && max_moment <= tol
            && std::abs(laplacian_integral) > 0.1 && max_grad_orthogonality <= tol;
    }

    void check(double tol = 1e-12) const {
        const std::string name = "orthogonal bubble k=" + std::to_string(k);
        if (max_boundary_value > tol)
            throw std::runtime_error(name + " violates boundary vanishing (max " + std::to_string(max_boundary_value) + ")");
        if (max_moment > tol)
            throw std::runtime_error(name + " violates moment orthogonality (max " + std::to_string(max_moment) + ")");
        if (!(std::abs(laplacian_integral) > 0.1))
            throw std::runtime_error(name + " has vanishing Laplacian integral");
        if (max_grad_orthogonality > tol)
            throw std::runtime_error(name + " violates gradient orthogonality (max " + std::to_string(max_grad_orthogonality) + ")");
    }
};

inline OrthogonalityReport verify_orthogonality(int k) {
    const BubbleKind kind = BubbleKind::orthogonal(k);
    OrthogonalityReport rep;
    rep.k = k;

    const std::array<Vec<2>, 3> ref = {{{{0, 0}}, {{1, 0}}, {{0, 1}}}};
    const auto geo = cell_geometry_from_vertices<2>(ref);

    // (a) trace on each edge
    const auto erule = gauss_legendre(k + 1);
    for (int lf = 0; lf <= 2; ++lf)
        for (int q = 0; q < erule.size(); ++q) {
            const auto lam = embed_facet_point<2>(lf, erule.points[q]);
            double bv;
            std::array<double, 2> bg;
            bubble_eval<2>(kind, lam, bv, bg);
            rep.max_boundary_value = std::max(rep.max_boundary_value, std::abs(bv));
        }

    // (b) and (d): moments against monomials x^i y^j
    const auto rule = simplex_rule<2>(2 * k);
    for (int deg = 0; deg <= k - 4; ++deg)
        for (int i = 0; i <= deg; ++i) {
            const int j = deg - i;
            double m = 0;
            for (int q = 0; q < rule.size(); ++q) {
                const double x = rule.points[q][1], y = rule.points[q][2];
                double bv;
                std::array<double, 2> bg;
                bubble_eval<2>(kind, rule.points[q], bv, bg);
                m += rule.weights[q] * bv * std::pow(x, i) * std::pow(y, j);
            }
            rep.max_moment = std::max(rep.max_moment, std::abs(m));
        }
    for (int deg = 1; deg <= k - 2; ++deg)
        for (int i = 0; i <= deg; ++i) {
            const int j = deg - i;
            double m = 0;
            for (int q = 0; q < rule.size(); ++q) {
                const double x = rule.points[q][1], y = rule.points[q][2];
                double bv;
                std::array<double, 2> bg;
                bubble_eval<2>(kind, rule.points[q], bv, bg);
                const double vx = (i > 0) ? i * std::pow(x, i - 1) * std::pow(y, j) : 0.0;
                const double vy = (j > 0) ? j * std::pow(x, i) * std::pow(y, j - 1) : 0.0;
                m += rule.weights[q] * (bg[0] * vx + bg[1] * vy);
            }
            rep.max_grad_orthogonality = std::max(rep.max_grad_orthogonality, std::abs(m));
        }

    // (c) int Laplacian(b) over the reference triangle = boundary flux
    rep.laplacian_integral = bubble_boundary_flux<2>(geo, [](const Vec<2> &) { return 1.0; }, kind);
    return rep;
}

// Max over interior dofs of |a(corrected, phi_i) - (f, phi_i)|: measures how
// far the correction moved the solution off the Galerkin equations.
template <int D>
double verify_galerkin_preservation(const FeSpace<D> &sp, const CorrectedSolution<D> &sol,
                                    const std::type_identity_t<ScalarField<D>> &alpha, const std::type_identity_t<ScalarField<D>> &f,
                                    int quad_degree = -1) {
    if (sol.base.space != &sp)
        throw std::invalid_argument("verify_galerkin_preservation: solution built on a different space");
    if (quad_degree < 0)
        quad_degree = std::max(2 * sp.degree + 4, sp.degree + sol.kind.poly_degree(D));
    const auto rule = simplex_rule<D>(quad_degree);
    const auto btab = tabulate_basis(sp.basis, rule.points);
    auto stab = sol.tabulate(rule.points);
    const int nb = sp.basis.count();

    std::vector<double> residual(sp.dof_total, 0.0);
    for (int c = 0; c < sp.mesh->num_cells(); ++c) {
        const auto geo = cell_geometry(*sp.mesh, c);
        const double scale = geo.volume * factorial(D);
        stab.cell(c);
        for (int q = 0; q < rule.size(); ++q) {
            const Vec<D> xq = bary_to_physical(geo, rule.points[q]);
            const double w = rule.weights[q] * scale;
            const double av = alpha(xq), fv = f(xq);
            const Vec<D> gu = stab.grad(q);
            for (int i = 0; i < nb; ++i) {
                const Vec<D> gi = geo.jacobian_inv_t * btab.grad(q, i);
                residual[sp.cell_dof(c, i)] += w * (av * dot(gu, gi) - fv * btab.value(q, i));
            }
        }
    }
    double res = 0;
    for (long long i = 0; i < sp.dof_total; ++i)
        if (!sp.boundary_dof[i]) res = std::max(res, std::abs(residual[i]));
    return res;
}

} // namespace fcfem
