////////////////////////////////////////////////////////////////////////////////
// flux.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Per-element flux residuals
//      F_tau = int_tau f dx + int_{boundary(tau)} alpha du_h/dn ds
//  with one-sided (outward, from inside the cell) normal derivatives and all
//  facets included, plus aggregate l1/l2/linf norms and cell-field export.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/assembly.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fcfem {

struct FluxReport {
    std::vector<double> residuals;
    double l1 = 0, l2 = 0, linf = 0;
};

inline FluxReport flux_norms(std::vector<double> residuals) {
    if (residuals.empty())
        throw std::invalid_argument("flux_norms: empty residual list");
    FluxReport rep;
    rep.residuals = std::move(residuals);
    double sq = 0;
    for (double v : rep.residuals) {
        const double a = std::abs(v);
        rep.l1 += a;
        sq += v * v;
        rep.linf = std::max(rep.linf, a);
    }
    rep.l2 = std::sqrt(sq);
    return rep;
}

namespace detail {

// Facet quadrature points of one rule embedded into cell barycentrics, one
// point set per local facet.
template <int D>
std::array<std::vector<std::array<double, D + 1>>, D + 1>
embedded_facet_points(const QuadratureRule<D - 1> &rule) {
    std::array<std::vector<std::array<double, D + 1>>, D + 1> sets;
    for (int f = 0; f <= D; ++f) {
        sets[f].reserve(rule.points.size());
        for (const auto &mu : rule.points) sets[f].push_back(embed_facet_point<D>(f, mu));
    }
    return sets;
}

} // namespace detail

// Flux residuals of one solution field on every cell.  `Solution` must
// provide tabulate(points) returning a tab with cell(c)/value(q)/grad(q),
// which both FeFunction and CorrectedSolution do.
template <int D, class Solution>
std::vector<double> flux_residuals(const Mesh<D> &mesh, const Solution &sol,
                                   const std::type_identity_t<ScalarField<D>> &alpha, const std::type_identity_t<ScalarField<D>> &f,
                                   int vol_degree, int facet_degree) {
    const auto vrule = simplex_rule<D>(vol_degree);
    const auto frule = simplex_rule<D - 1>(facet_degree);
    const auto fsets = detail::embedded_facet_points<D>(frule);
    const double facet_scale = factorial(D - 1);  // rule weights sum to 1/(D-1)!

    using TabT = decltype(sol.tabulate(vrule.points));
    std::vector<TabT> ftabs;
    ftabs.reserve(D + 1);
    for (int lf = 0; lf <= D; ++lf) ftabs.push_back(sol.tabulate(fsets[lf]));

    std::vector<double> F(mesh.num_cells(), 0.0);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto geo = cell_geometry(mesh, c);
        double r = 0;
        // volume term: int_tau f
        const double vscale = geo.volume * factorial(D);
        for (int q = 0; q < vrule.size(); ++q)
            r += vrule.weights[q] * f(bary_to_physical(geo, vrule.points[q])) * vscale;
        // boundary term: sum over facets of int alpha grad(u).n (outward)
        for (int lf = 0; lf <= D; ++lf) {
            auto &tab = ftabs[lf];
            tab.cell(c);
            const auto &fg = geo.facets[lf];
            double s = 0;
            for (int q = 0; q < frule.size(); ++q) {
                const Vec<D> xq = bary_to_physical(geo, fsets[lf][q]);
                s += frule.weights[q] * alpha(xq) * dot(tab.grad(q), fg.normal);
            }
            r += s * fg.measure * facet_scale;
        }
        F[c] = r;
    }
    return F;
}

template <int D, class Solution>
double element_flux_residual(const Mesh<D> &mesh, const Solution &sol,
                             const std::type_identity_t<ScalarField<D>> &alpha, const std::type_identity_t<ScalarField<D>> &f,
                             int cell, int vol_degree, int facet_degree) {
    if (cell < 0 || cell >= mesh.num_cells())
        throw std::out_of_range("element_flux_residual: cell index out of range");
    const auto vrule = simplex_rule<D>(vol_degree);
    const auto frule = simplex_rule<D - 1>(facet_degree);
    const auto geo = cell_geometry(mesh, cell);
    double r = 0;
    const double vscale = geo.volume * factorial(D);
    for (int q = 0; q < vrule.size(); ++q)
        r += vrule.weights[q] * f(bary_to_physical(geo, vrule.points[q])) * vscale;
    for (int lf = 0; lf <= D; ++lf) {
        std::vector<std::array<double, D + 1>> pts;
        pts.reserve(frule.points.size());
        for (const auto &mu : frule.points) pts.push_back(embed_facet_point<D>(lf, mu));
        auto tab = sol.tabulate(pts);
        tab.cell(cell);
        const auto &fg = geo.facets[lf];
        double s = 0;
        for (int q = 0; q < frule.size(); ++q)
            s += frule.weights[q] * alpha(bary_to_physical(geo, pts[q])) * dot(tab.grad(q), fg.normal);
        r += s * fg.measure * factorial(D - 1);
    }
    return r;
}

template <int D>
void flux_field_export_csv(const FluxReport &rep, const Mesh<D> &mesh, std::ostream &os) {
    if (static_cast<int>(rep.residuals.size()) != mesh.num_cells())
        throw std::invalid_argument("flux_field_export: residual count does not match mesh");
    os << "cell";
    const char *axes = "xyz";
    for (int d = 0; d < D; ++d) os << ',' << axes[d];
    os << ",abs_flux\n";
    os.precision(17);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        Vec<D> centroid{};
        for (int a = 0; a <= D; ++a) centroid += mesh.vertices[mesh.cells[c][a]];
        centroid *= 1.0 / (D + 1);
        os << c;
        for (int d = 0; d < D; ++d) os << ',' << centroid[d];
        os << ',' << std::abs(rep.residuals[c]) << "\n";
    }
}

template <int D>
void flux_field_export_vtk(const FluxReport &rep, const Mesh<D> &mesh, std::ostream &os) {
    if (static_cast<int>(rep.residuals.size()) != mesh.num_cells())
        throw std::invalid_argument("flux_field_export: residual count does not match mesh");
    os << "# vtk DataFile Version 3.0\n";
    os << "elementwise flux residual magnitude\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.num_vertices() << " double\n";
    os.precision(17);
    for (const auto &v : mesh.vertices) {
        os << v[0] << ' ' << v[1] << ' ' << (D == 3 ? v[D - 1] : 0.0) << "\n";
    }
    os << "CELLS " << mesh.num_cells() << ' ' << static_cast<long long>(mesh.num_cells()) * (D + 2) << "\n";
    for (const auto &c : mesh.cells) {
        os << (D + 1);
        for (int a = 0; a <= D; ++a) os << ' ' << c[a];
        os << "\n";
    }
    os << "CELL_TYPES " << mesh.num_cells() << "\n";
    const int vtk_type = (D == 2) ? 5 : 10;  // triangle / tetrahedron
    for (int c = 0; c < mesh.num_cells(); ++c) os << vtk_type << "\n";
    os << "CELL_DATA " << mesh.num_cells() << "\n";
    os << "SCALARS abs_flux double 1\nLOOKUP_TABLE default\n";
    for (double v : rep.residuals) os << std::abs(v) << "\n";
}

// Writes CSV for *.csv paths and legacy VTK otherwise.
template <int D>
void flux_field_export(const FluxReport &rep, const Mesh<D> &mesh, const std::string &path) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("flux_field_export: cannot open '" + path + "' for writing");
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        flux_field_export_csv(rep, mesh, os);
    else
        flux_field_export_vtk(rep, mesh, os);
    if (!os.good())
        throw std::runtime_error("flux_field_export: write to '" + path + "' failed");
}

} // namespace fcfem
