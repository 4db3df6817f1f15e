////////////////////////////////////////////////////////////////////////////////
// mesh.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Nested structured simplicial meshes of the unit square/cube.
//
//  Level l has n = 2^(l-1) cells per edge (h = 1/n).  In 2D each grid square
//  is split along its (+1,+1) diagonal; in 3D each subcube is split into the
//  six Kuhn tetrahedra sharing the main diagonal.  All cells of a mesh are
//  congruent and every level-l vertex reappears at level l+1.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/geometry.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcfem {

template <int D>
struct Mesh {
    static constexpr int element_dim = D;

    int level = 0;
    int n = 0;       // cells per edge
    double h = 0;    // 1/n
    std::vector<Vec<D>> vertices;
    std::vector<std::array<int, D>> vertex_ints;  // lattice coords in [0,n]^D
    std::vector<std::array<int, D + 1>> cells;
    std::vector<bool> boundary_vertex;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_cells() const { return static_cast<int>(cells.size()); }
};

template <int D>
struct CellGeometry {
    std::array<Vec<D>, D + 1> x;   // vertex coordinates
    double volume = 0;             // positive
    double diameter = 0;           // longest edge
    Mat<D> jacobian;               // columns x[j+1] - x[0]
    Mat<D> jacobian_inv_t;
    std::array<Vec<D>, D + 1> bary_grad;  // physical gradients of lambda_a

    struct FacetGeom {
        Vec<D> normal;   // outward unit normal
        double measure;  // length (2D) or area (3D)
        int opposite;    // local index of the vertex not on this facet
    };
    std::array<FacetGeom, D + 1> facets;
};

// Local vertices of facet f (the one opposite local vertex f), in increasing
// local index order.  This fixed order is also used to embed facet quadrature
// points into cell barycentric coordinates.
template <int D>
inline std::array<int, D> facet_local_vertices(int f) {
    std::array<int, D> v;
    int j = 0;
    for (int a = 0; a <= D; ++a)
        if (a != f) v[j++] = a;
    return v;
}

// Embed a facet barycentric point (D coords) into cell barycentrics.
template <int D>
inline std::array<double, D + 1> embed_facet_point(int f, const std::array<double, D> &mu) {
    std::array<double, D + 1> lam{};
    const auto fv = facet_local_vertices<D>(f);
    for (int j = 0; j < D; ++j) lam[fv[j]] = mu[j];
    lam[f] = 0.0;
    return lam;
}

template <int D>
CellGeometry<D> cell_geometry_from_vertices(const std::array<Vec<D>, D + 1> &x) {
    CellGeometry<D> g;
    g.x = x;
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) g.jacobian.a[i][j] = x[j + 1][i] - x[0][i];
    const double detj = g.jacobian.det();
    g.volume = std::abs(detj) / factorial(D);
    if (!(g.volume > 0))
        throw std::runtime_error("cell_geometry: degenerate cell");
    g.jacobian_inv_t = g.jacobian.inverse().transpose();
    // grad(lambda_{j+1}) is column j of J^{-T}; grad(lambda_0) = -sum.
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) g.bary_grad[j + 1][i] = g.jacobian_inv_t.a[i][j];
    for (int i = 0; i < D; ++i) {
        double s = 0;
        for (int j = 0; j < D; ++j) s += g.bary_grad[j + 1][i];
        g.bary_grad[0][i] = -s;
    }
    g.diameter = 0;
    for (int a = 0; a <= D; ++a)
        for (int b = a + 1; b <= D; ++b)
            g.diameter = std::max(g.diameter, distance(x[a], x[b]));
    for (int f = 0; f <= D; ++f) {
        const auto fv = facet_local_vertices<D>(f);
        std::array<Vec<D>, D> fx;
        for (int j = 0; j < D; ++j) fx[j] = x[fv[j]];
        auto &fg = g.facets[f];
        fg.opposite = f;
        fg.measure = facet_measure<D>(fx);
        Vec<D> nrm;
        if constexpr (D == 2) {
            const Vec<D> t = fx[1] - fx[0];
            nrm = {{t[1], -t[0]}};
        } else {
            nrm = cross(fx[1] - fx[0], fx[2] - fx[0]);
        }
        nrm *= 1.0 / norm(nrm);
        // orient away from the opposite vertex
        Vec<D> centroid{};
        for (int j = 0; j < D; ++j) centroid += fx[j];
        centroid *= 1.0 / D;
        if (dot(nrm, centroid - x[f]) < 0) nrm *= -1.0;
        fg.normal = nrm;
    }
    return g;
}

template <int D>
CellGeometry<D> cell_geometry(const Mesh<D> &mesh, int cell) {
    if (cell < 0 || cell >= mesh.num_cells())
        throw std::out_of_range("cell_geometry: cell index " + std::to_string(cell)
                                + " out of range");
    std::array<Vec<D>, D + 1> x;
    for (int a = 0; a <= D; ++a) x[a] = mesh.vertices[mesh.cells[cell][a]];
    return cell_geometry_from_vertices<D>(x);
}

template <int D>
Mesh<D> build_structured(int level) {
    static_assert(D == 2 || D == 3, "build_structured: dim must be 2 or 3");
    if (level < 1)
        throw std::invalid_argument("build_structured: level must be >= 1");
    Mesh<D> m;
    m.level = level;
    m.n = 1 << (level - 1);
    m.h = 1.0 / m.n;
    const int n = m.n;

    if constexpr (D == 2) {
        m.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                m.vertices.push_back({{i * m.h, j * m.h}});
                m.vertex_ints.push_back({i, j});
                m.boundary_vertex.push_back(i == 0 || i == n || j == 0 || j == n);
            }
        auto vid = [n](int i, int j) { return i + (n + 1) * j; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                // split along the (+1,+1) diagonal
                m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
                m.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
            }
    } else {
        m.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1) * (n + 1));
        for (int k = 0; k <= n; ++k)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n; ++i) {
                    m.vertices.push_back({{i * m.h, j * m.h, k * m.h}});
                    m.vertex_ints.push_back({i, j, k});
                    m.boundary_vertex.push_back(i == 0 || i == n || j == 0 || j == n
                                                || k == 0 || k == n);
                }
        auto vid = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };
        // Kuhn subdivision: walk from corner to corner along each axis
        // permutation; order the six permutations deterministically.
        static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    for (const auto &p : perms) {
                        std::array<std::array<int, 3>, 4> c;
                        c[0] = {i, j, k};
                        for (int step = 0; step < 3; ++step) {
                            c[step + 1] = c[step];
                            c[step + 1][p[step]] += 1;
                        }
                        std::array<int, 4> cell = {vid(c[0][0], c[0][1], c[0][2]),
                                                   vid(c[1][0], c[1][1], c[1][2]),
                                                   vid(c[2][0], c[2][1], c[2][2]),
                                                   vid(c[3][0], c[3][1], c[3][2])};
                        std::array<Vec<3>, 4> x;
                        for (int a = 0; a < 4; ++a) x[a] = m.vertices[cell[a]];
                        if (simplex_signed_volume<3>(x) < 0) std::swap(cell[2], cell[3]);
                        m.cells.push_back(cell);
                    }
    }
    return m;
}

// Facet connectivity: each facet with its owning cell(s) and local indices.
template <int D>
struct FacetConn {
    std::array<int, D> verts;  // sorted global vertex ids
    int cell0 = -1, lf0 = -1;
    int cell1 = -1, lf1 = -1;  // cell1 < 0 for boundary facets

    bool boundary() const { return cell1 < 0; }
};

template <int D>
std::vector<FacetConn<D>> build_facets(const Mesh<D> &mesh) {
    std::map<std::array<int, D>, int> index;
    std::vector<FacetConn<D>> facets;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        for (int f = 0; f <= D; ++f) {
            const auto fv = facet_local_vertices<D>(f);
            std::array<int, D> key;
            for (int j = 0; j < D; ++j) key[j] = mesh.cells[c][fv[j]];
            std::sort(key.begin(), key.end());
            auto it = index.find(key);
            if (it == index.end()) {
                FacetConn<D> fc;
                fc.verts = key;
                fc.cell0 = c;
                fc.lf0 = f;
                index.emplace(key, static_cast<int>(facets.size()));
                facets.push_back(fc);
            } else {
                FacetConn<D> &fc = facets[it->second];
                if (fc.cell1 >= 0)
                    throw std::runtime_error("build_facets: facet shared by more than two cells");
                fc.cell1 = c;
                fc.lf1 = f;
            }
        }
    }
    return facets;
}

template <int D>
void mesh_dump(const Mesh<D> &mesh, std::ostream &os) {
    os << "# structured simplicial mesh of the unit " << (D == 2 ? "square" : "cube") << "\n";
    os << "dim " << D << " level " << mesh.level << " n " << mesh.n << " h " << mesh.h << "\n";
    os << "vertices " << mesh.num_vertices() << "\n";
    os.precision(17);
    for (const auto &v : mesh.vertices) {
        for (int i = 0; i < D; ++i) os << (i ? " " : "") << v[i];
        os << "\n";
    }
    os << "cells " << mesh.num_cells() << "\n";
    for (const auto &c : mesh.cells) {
        for (int a = 0; a <= D; ++a) os << (a ? " " : "") << c[a];
        os << "\n";
    }
}

} // namespace fcfem
