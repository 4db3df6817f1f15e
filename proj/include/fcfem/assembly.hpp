////////////////////////////////////////////////////////////////////////////////
// assembly.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Global Lagrange spaces on structured meshes, sparse symmetric assembly of
//  the stiffness matrix and load vector, Dirichlet elimination, and nodal
//  interpolation.
//
//  Global dof numbering is exact: every Lagrange node of every cell lands on
//  the integer lattice {0..n*k}^D, and its lattice coordinates are computed
//  in integer arithmetic from the cell's vertex lattice coordinates.  Nodes
//  shared between cells therefore get identical ids with no tolerance logic.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/element.hpp>
#include <fcfem/mesh.hpp>
#include <fcfem/quadrature.hpp>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fcfem {

template <int D>
using ScalarField = std::function<double(const Vec<D> &)>;

template <int D>
struct FeSpace {
    const Mesh<D> *mesh = nullptr;
    int degree = 1;
    int nk = 0;  // lattice resolution n * k per axis
    LagrangeBasis<D> basis;
    long long dof_total = 0;
    long long dof_interior = 0;
    std::vector<int> cell_dofs_flat;  // num_cells * basis.count()
    std::vector<bool> boundary_dof;

    FeSpace(const Mesh<D> &m, int k) : mesh(&m), degree(k), basis(k) {
        constexpr int max_degree = (D == 2) ? 8 : 5;
        if (k < 1 || k > max_degree)
            throw std::invalid_argument("FeSpace: degree " + std::to_string(k) + " out of range 1.."
                                        + std::to_string(max_degree) + " for dim " + std::to_string(D));
        nk = m.n * k;
        dof_total = 1;
        for (int d = 0; d < D; ++d) dof_total *= (nk + 1);
        boundary_dof.assign(dof_total, false);
        const int nb = basis.count();
        cell_dofs_flat.resize(static_cast<size_t>(m.num_cells()) * nb);
        for (int c = 0; c < m.num_cells(); ++c) {
            for (int i = 0; i < nb; ++i) {
                std::array<int, D> q{};  // lattice coords of the node, in [0, nk]
                for (int a = 0; a <= D; ++a) {
                    const int w = basis.nodes[i][a];
                    if (w == 0) continue;
                    const auto &vi = m.vertex_ints[m.cells[c][a]];
                    for (int d = 0; d < D; ++d) q[d] += w * vi[d];
                }
                long long id = 0;
                bool on_boundary = false;
                for (int d = D - 1; d >= 0; --d) {
                    id = id * (nk + 1) + q[d];
                    on_boundary = on_boundary || q[d] == 0 || q[d] == nk;
                }
                cell_dofs_flat[static_cast<size_t>(c) * nb + i] = static_cast<int>(id);
                boundary_dof[id] = on_boundary;
            }
        }
        long long nboundary = 0;
        for (long long i = 0; i < dof_total; ++i)
            if (boundary_dof[i]) ++nboundary;
        dof_interior = dof_total - nboundary;
    }

    int cell_dof(int cell, int i) const {
        return cell_dofs_flat[static_cast<size_t>(cell) * basis.count() + i];
    }

    Vec<D> dof_coord(long long id) const {
        Vec<D> x;
        for (int d = 0; d < D; ++d) {
            x[d] = static_cast<double>(id % (nk + 1)) / nk;
            id /= (nk + 1);
        }
        return x;
    }
};

// Sparse matrix in CSR form holding both triangles; assembly writes each
// symmetric pair from the same product, so the stored matrix is exactly
// symmetric.
struct SparseSymMatrix {
    int n = 0;
    std::vector<long long> rowptr;
    std::vector<int> cols;
    std::vector<double> vals;

    void matvec(const std::vector<double> &x, std::vector<double> &y) const {
        y.assign(n, 0.0);
        for (int r = 0; r < n; ++r) {
            double s = 0;
            for (long long p = rowptr[r]; p < rowptr[r + 1]; ++p) s += vals[p] * x[cols[p]];
            y[r] = s;
        }
    }

    double &entry(int r, int c) {
        auto first = cols.begin() + rowptr[r];
        auto last = cols.begin() + rowptr[r + 1];
        auto it = std::lower_bound(first, last, c);
        if (it == last || *it != c)
            throw std::out_of_range("SparseSymMatrix::entry: index not in sparsity pattern");
        return vals[it - cols.begin()];
    }

    double get(int r, int c) const {
        auto first = cols.begin() + rowptr[r];
        auto last = cols.begin() + rowptr[r + 1];
        auto it = std::lower_bound(first, last, c);
        return (it == last || *it != c) ? 0.0 : vals[it - cols.begin()];
    }

    bool exactly_symmetric() const {
        for (int r = 0; r < n; ++r)
            for (long long p = rowptr[r]; p < rowptr[r + 1]; ++p)
                if (get(cols[p], r) != vals[p]) return false;
        return true;
    }
};

namespace detail {

template <int D>
SparseSymMatrix build_pattern(const FeSpace<D> &sp) {
    const int nb = sp.basis.count();
    const int n = static_cast<int>(sp.dof_total);
    std::vector<std::vector<int>> rows(n);
    for (int c = 0; c < sp.mesh->num_cells(); ++c)
        for (int i = 0; i < nb; ++i) {
            auto &row = rows[sp.cell_dof(c, i)];
            for (int j = 0; j < nb; ++j) row.push_back(sp.cell_dof(c, j));
        }
    SparseSymMatrix A;
    A.n = n;
    A.rowptr.resize(n + 1, 0);
    for (int r = 0; r < n; ++r) {
        auto &row = rows[r];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        A.rowptr[r + 1] = A.rowptr[r] + static_cast<long long>(row.size());
    }
    A.cols.resize(A.rowptr[n]);
    for (int r = 0; r < n; ++r)
        std::copy(rows[r].begin(), rows[r].end(), A.cols.begin() + A.rowptr[r]);
    A.vals.assign(A.rowptr[n], 0.0);
    return A;
}

inline long long csr_pos(const SparseSymMatrix &A, int r, int c) {
    auto first = A.cols.begin() + A.rowptr[r];
    auto last = A.cols.begin() + A.rowptr[r + 1];
    auto it = std::lower_bound(first, last, c);
    return it - A.cols.begin();
}

} // namespace detail

template <int D>
inline Vec<D> bary_to_physical(const CellGeometry<D> &geo, const std::array<double, D + 1> &lam) {
    Vec<D> x{};
    for (int a = 0; a <= D; ++a) x += lam[a] * geo.x[a];
    return x;
}

// Stiffness matrix of a(v,w) = int alpha grad v . grad w.  The quadrature
// degree defaults to 2k+4 and must stay below the simplex_rule cap.
template <int D>
SparseSymMatrix assemble_stiffness(const FeSpace<D> &sp, const std::type_identity_t<ScalarField<D>> &alpha,
                                   int quad_degree = -1) {
    if (quad_degree < 0) quad_degree = 2 * sp.degree + 4;
    const auto rule = simplex_rule<D>(quad_degree);
    const auto tab = tabulate_basis(sp.basis, rule.points);
    const int nb = sp.basis.count();
    const int nq = rule.size();

    SparseSymMatrix A = detail::build_pattern(sp);
    std::vector<double> elem(static_cast<size_t>(nb) * nb);
    std::vector<Vec<D>> g(nb);
    for (int c = 0; c < sp.mesh->num_cells(); ++c) {
        const auto geo = cell_geometry(*sp.mesh, c);
        const double scale = geo.volume * factorial(D);  // |det J|
        std::fill(elem.begin(), elem.end(), 0.0);
        for (int q = 0; q < nq; ++q) {
            const Vec<D> xq = bary_to_physical(geo, rule.points[q]);
            const double av = alpha(xq);
            if (!(av > 0))
                throw std::runtime_error("assemble_stiffness: coefficient alpha is not positive at a quadrature point");
            const double w = rule.weights[q] * av * scale;
            for (int i = 0; i < nb; ++i) g[i] = geo.jacobian_inv_t * tab.grad(q, i);
            for (int i = 0; i < nb; ++i) {
                const double wi = w;
                for (int j = i; j < nb; ++j) {
                    const double v = wi * dot(g[i], g[j]);
                    elem[static_cast<size_t>(i) * nb + j] += v;
                    if (j != i) elem[static_cast<size_t>(j) * nb + i] += v;
                }
            }
        }
        for (int i = 0; i < nb; ++i) {
            const int gi = sp.cell_dof(c, i);
            for (int j = 0; j < nb; ++j)
                A.vals[detail::csr_pos(A, gi, sp.cell_dof(c, j))] += elem[static_cast<size_t>(i) * nb + j];
        }
    }
    return A;
}

template <int D>
std::vector<double> assemble_load(const FeSpace<D> &sp, const std::type_identity_t<ScalarField<D>> &f,
                                  int quad_degree = -1) {
    if (quad_degree < 0) quad_degree = 2 * sp.degree + 4;
    const auto rule = simplex_rule<D>(quad_degree);
    const auto tab = tabulate_basis(sp.basis, rule.points);
    const int nb = sp.basis.count();
    const int nq = rule.size();

    std::vector<double> b(sp.dof_total, 0.0);
    for (int c = 0; c < sp.mesh->num_cells(); ++c) {
        const auto geo = cell_geometry(*sp.mesh, c);
        const double scale = geo.volume * factorial(D);
        for (int q = 0; q < nq; ++q) {
            const double w = rule.weights[q] * f(bary_to_physical(geo, rule.points[q])) * scale;
            for (int i = 0; i < nb; ++i)
                b[sp.cell_dof(c, i)] += w * tab.value(q, i);
        }
    }
    return b;
}

struct ReducedSystem {
    SparseSymMatrix A;
    std::vector<double> b;
    std::vector<int> interior;  // reduced index -> global dof id
};

// Eliminate boundary dofs.  `boundary_values` (indexed by global dof) supplies
// inhomogeneous data; pass nullptr for the homogeneous case.
template <int D>
ReducedSystem apply_dirichlet(const SparseSymMatrix &A, const std::vector<double> &b,
                              const FeSpace<D> &sp,
                              const std::vector<double> *boundary_values = nullptr) {
    if (A.n != static_cast<int>(sp.dof_total) || b.size() != static_cast<size_t>(sp.dof_total))
        throw std::invalid_argument("apply_dirichlet: system size does not match space");
    ReducedSystem red;
    std::vector<int> to_reduced(sp.dof_total, -1);
    for (int i = 0; i < static_cast<int>(sp.dof_total); ++i)
        if (!sp.boundary_dof[i]) {
            to_reduced[i] = static_cast<int>(red.interior.size());
            red.interior.push_back(i);
        }
    const int m = static_cast<int>(red.interior.size());
    red.A.n = m;
    red.A.rowptr.assign(m + 1, 0);
    for (int r = 0; r < m; ++r) {
        const int gr = red.interior[r];
        long long cnt = 0;
        for (long long p = A.rowptr[gr]; p < A.rowptr[gr + 1]; ++p)
            if (to_reduced[A.cols[p]] >= 0) ++cnt;
        red.A.rowptr[r + 1] = red.A.rowptr[r] + cnt;
    }
    red.A.cols.resize(red.A.rowptr[m]);
    red.A.vals.resize(red.A.rowptr[m]);
    red.b.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
        const int gr = red.interior[r];
        long long out = red.A.rowptr[r];
        double rhs = b[gr];
        for (long long p = A.rowptr[gr]; p < A.rowptr[gr + 1]; ++p) {
            const int rc = to_reduced[A.cols[p]];
            if (rc >= 0) {
                red.A.cols[out] = rc;
                red.A.vals[out] = A.vals[p];
                ++out;
            } else if (boundary_values) {
                rhs -= A.vals[p] * (*boundary_values)[A.cols[p]];
            }
        }
        red.b[r] = rhs;
    }
    return red;
}

template <int D>
std::vector<double> expand_solution(const FeSpace<D> &sp, const std::vector<double> &x_reduced,
                                    const std::vector<int> &interior,
                                    const std::vector<double> *boundary_values = nullptr) {
    std::vector<double> x(sp.dof_total, 0.0);
    if (boundary_values)
        for (int i = 0; i < static_cast<int>(sp.dof_total); ++i)
            if (sp.boundary_dof[i]) x[i] = (*boundary_values)[i];
    for (size_t r = 0; r < interior.size(); ++r) x[interior[r]] = x_reduced[r];
    return x;
}

// Finite element function: coefficient per global Lagrange node.
template <int D>
struct FeFunction {
    const FeSpace<D> *space = nullptr;
    std::vector<double> coeffs;

    FeFunction() = default;
    FeFunction(const FeSpace<D> &sp, std::vector<double> c) : space(&sp), coeffs(std::move(c)) {
        if (coeffs.size() != static_cast<size_t>(sp.dof_total))
            throw std::invalid_argument("FeFunction: coefficient count does not match space");
    }

    // Evaluation tabulated at a fixed barycentric point set; call cell(c)
    // before reading values/gradients for that cell's points.
    struct Tab {
        const FeFunction *fn = nullptr;
        BasisTab<D> basis;
        std::vector<double> vals;     // per point, current cell
        std::vector<Vec<D>> grads;    // physical gradients, current cell
        int current = -1;

        void cell(int c) {
            const auto &sp = *fn->space;
            const auto geo = cell_geometry(*sp.mesh, c);
            const int nb = basis.nbasis;
            vals.assign(basis.npts, 0.0);
            grads.assign(basis.npts, Vec<D>{});
            for (int q = 0; q < basis.npts; ++q) {
                double v = 0;
                std::array<double, D> gref{};
                for (int i = 0; i < nb; ++i) {
                    const double ci = fn->coeffs[sp.cell_dof(c, i)];
                    v += ci * basis.value(q, i);
                    const auto &bg = basis.grad(q, i);
                    for (int r = 0; r < D; ++r) gref[r] += ci * bg[r];
                }
                vals[q] = v;
                grads[q] = geo.jacobian_inv_t * gref;
            }
            current = c;
        }

        double value(int q) const { return vals[q]; }
        const Vec<D> &grad(int q) const { return grads[q]; }
    };

    Tab tabulate(const std::vector<std::array<double, D + 1>> &pts) const {
        Tab t;
        t.fn = this;
        t.basis = tabulate_basis(space->basis, pts);
        return t;
    }

    // Single-point evaluation (validates the barycentric input).
    double value(int c, const std::array<double, D + 1> &lam) const {
        std::vector<double> v;
        std::vector<std::array<double, D>> g;
        space->basis.eval(lam, v, g);
        double s = 0;
        for (int i = 0; i < space->basis.count(); ++i) s += coeffs[space->cell_dof(c, i)] * v[i];
        return s;
    }
};

template <int D>
FeFunction<D> nodal_interpolant(const FeSpace<D> &sp, const std::type_identity_t<ScalarField<D>> &u) {
    std::vector<double> c(sp.dof_total);
    for (long long i = 0; i < sp.dof_total; ++i) c[i] = u(sp.dof_coord(i));
    return FeFunction<D>(sp, std::move(c));
}

} // namespace fcfem
