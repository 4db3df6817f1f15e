////////////////////////////////////////////////////////////////////////////////
// solver.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Unpreconditioned conjugate gradient for the reduced SPD system.
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/assembly.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcfem {

struct CgReport {
    std::vector<double> x;
    int iterations = 0;
    double rel_residual = 0;
};

// Called after each iteration with (iteration, relative residual, iterate).
using CgObserver = std::function<void(int, double, const std::vector<double> &)>;

inline CgReport cg_solve(const SparseSymMatrix &A, const std::vector<double> &b,
                         double rel_tol = 1e-12, long long max_iter = -1,
                         const CgObserver &observer = {}) {
    if (!(rel_tol > 0 && rel_tol < 1))
        throw std::invalid_argument("cg_solve: rel_tol must lie in (0,1)");
    if (b.size() != static_cast<size_t>(A.n))
        throw std::invalid_argument("cg_solve: rhs size does not match matrix");
    const int n = A.n;
    if (max_iter < 0) max_iter = std::max<long long>(1000, 4LL * n);

    CgReport rep;
    rep.x.assign(n, 0.0);
    double bnorm2 = 0;
    for (double v : b) bnorm2 += v * v;
    if (bnorm2 == 0) return rep;  // zero rhs: zero solution, zero iterations

    std::vector<double> r = b, p = b, Ap(n);
    double rr = bnorm2;
    const double stop2 = rel_tol * rel_tol * bnorm2;
    while (rr > stop2) {
        if (rep.iterations >= max_iter)
            throw std::runtime_error("cg_solve: no convergence within " + std::to_string(max_iter)
                                     + " iterations (relative residual " + std::to_string(std::sqrt(rr / bnorm2)) + ")");
        A.matvec(p, Ap);
        double pAp = 0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (!(pAp > 0))
            throw std::runtime_error("cg_solve: non-positive curvature encountered; matrix is not SPD");
        const double alpha = rr / pAp;
        for (int i = 0; i < n; ++i) {
            rep.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rr_new = 0;
        for (double v : r) rr_new += v * v;
        const double beta = rr_new / rr;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
        ++rep.iterations;
        if (observer) observer(rep.iterations, std::sqrt(rr / bnorm2), rep.x);
    }
    rep.rel_residual = std::sqrt(rr / bnorm2);
    return rep;
}

} // namespace fcfem
