////////////////////////////////////////////////////////////////////////////////
// acceptance_main.cpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  End-to-end acceptance checks for the convergence studies and the
//  flux-correction properties.  Usage:
//
//      fcfem_acceptance            run all eight criteria
//      fcfem_acceptance <n>        run criterion n (1..8)
//
//  Each sub-check prints one [PASS]/[FAIL] line with the measured value and
//  the pinned target; the exit code is 0 iff every requested check passed.
//
//  Known-red checks (kept at their pinned targets on purpose; the measured
//  values below are stable properties of this discretization):
//    1b: the uncorrected total-flux error for 2D linear elements plateaus at
//        the L1 norm of the source (11.810 for the built-in problem), not at
//        5.21; the plateau itself and the corrected version are green.
//    4d: the corrected-solution energy-seminorm order for 3D linear elements
//        is 1.0 (the bubble part alone scales like h^(d/2-1) = h^(1/2) per
//        cell and sums to O(h) globally), not 2.0.
*/
////////////////////////////////////////////////////////////////////////////////
#include <fcfem/fcfem.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

using namespace fcfem;

namespace {

int checks_run = 0;
int checks_failed = 0;

void report(const std::string &name, bool pass, const std::string &detail) {
    ++checks_run;
    if (!pass) ++checks_failed;
    std::printf("[%s] %-4s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char *pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

void check_order(const std::string &name, double coarse, double fine, double target, double tol) {
    const double order = observed_order(coarse, fine);
    report(name, std::isfinite(order) && std::abs(order - target) <= tol,
           fmt("order %.3f, target %.2f +/- %.2f", order, target, tol));
}

void check_order_at_least(const std::string &name, double coarse, double fine, double target,
                          double tol) {
    const double order = observed_order(coarse, fine);
    report(name, std::isfinite(order) && order >= target - tol,
           fmt("order %.3f, target >= %.2f - %.2f", order, target, tol));
}

ConvergenceTable run(int dim, int degree, int lmin, int lmax, const std::string &bubble) {
    StudyConfig cfg;
    cfg.dim = dim;
    cfg.degree = degree;
    cfg.level_min = lmin;
    cfg.level_max = lmax;
    cfg.problem = (dim == 2) ? "poly2d" : "poly3d";
    cfg.bubble = bubble;
    return run_convergence(cfg);
}

const StudyRow &last(const ConvergenceTable &t) { return t.rows.back(); }
const StudyRow &prev(const ConvergenceTable &t) { return t.rows[t.rows.size() - 2]; }

// --- criterion 1: 2D linear elements, flux plateau and corrected flux -------

void criterion1() {
    const auto t = run(2, 1, 2, 6, "standard");
    const double order = observed_order(prev(t).flux_l1, last(t).flux_l1);
    report("1a", std::isfinite(order) && std::abs(order) <= 0.1,
           fmt("uncorrected flux order %.4f at the finest pair, plateau threshold 0.1", order));

    const double limit = last(t).flux_l1;
    const double target = 5.21;
    report("1b", std::abs(limit - target) <= 0.10 * target,
           fmt("flux plateau %.5f, target %.2f +/- 10%%", limit, target));

    bool ok = true;
    double worst = 0;
    for (const auto &r : t.rows) {
        worst = std::max(worst, r.cflux_l1);
        ok = ok && r.cflux_l1 <= 1e-8;
    }
    report("1c", ok, fmt("corrected flux <= %.3e at every level, threshold 1e-8", worst));
}

// --- criterion 2: 2D linear supercloseness ----------------------------------

void criterion2() {
    const auto t = run(2, 1, 2, 6, "standard");
    check_order("2a", prev(t).e_h1, last(t).e_h1, 2.0, 0.25);
    check_order("2b", prev(t).ec_h1, last(t).ec_h1, 1.0, 0.25);
}

// --- criterion 3: 2D quartic elements with degree-6 orthogonal bubbles ------

void criterion3() {
    const auto t = run(2, 4, 1, 6, "orthogonal");
    check_order("3a", prev(t).flux_l1, last(t).flux_l1, 3.0, 0.25);
    check_order("3b", prev(t).e_h1, last(t).e_h1, 4.0, 0.25);

    // Galerkin residual of the corrected solution at the finest level
    const auto problem = builtin_problem<2>("poly2d");
    const auto mesh = build_structured<2>(6);
    const FeSpace<2> sp(mesh, 4);
    const auto A = assemble_stiffness(sp, problem.alpha);
    const auto b = assemble_load(sp, problem.f);
    const auto red = apply_dirichlet(A, b, sp);
    const auto rep = cg_solve(red.A, red.b, 1e-12);
    const FeFunction<2> u_h(sp, expand_solution(sp, rep.x, red.interior));
    const auto gammas = compute_gammas(sp, u_h, problem.alpha, problem.f, BubbleKind::orthogonal(6));
    const auto corrected = build_corrected(u_h, gammas, BubbleKind::orthogonal(6));
    const double res = verify_galerkin_preservation(sp, corrected, problem.alpha, problem.f);
    report("3c", res <= 1e-9, fmt("discrete-equation residual %.3e, threshold 1e-9", res));

    check_order_at_least("3d", prev(t).ec_h1, last(t).ec_h1, 4.0, 0.25);
}

// --- criterion 4: 3D linear elements ----------------------------------------

void criterion4() {
    const auto t = run(3, 1, 1, 6, "standard");
    const double target = 10.66667;
    bool flux_ok = true;
    double worst_dev = 0;
    for (const auto &r : t.rows) {
        const double dev = std::abs(r.flux_l1 - target) / target;
        worst_dev = std::max(worst_dev, dev);
        flux_ok = flux_ok && dev <= 0.10;
    }
    report("4a", flux_ok,
           fmt("uncorrected flux within %.2e of %.5f at every level, threshold 10%%", worst_dev, target));

    bool corr_ok = true;
    double worst = 0;
    for (const auto &r : t.rows) {
        worst = std::max(worst, r.cflux_l1);
        corr_ok = corr_ok && r.cflux_l1 <= 1e-8;
    }
    report("4b", corr_ok, fmt("corrected flux <= %.3e at every level, threshold 1e-8", worst));

    check_order("4c", prev(t).ec_l2, last(t).ec_l2, 2.0, 0.25);
    check_order("4d", prev(t).ec_h1, last(t).ec_h1, 2.0, 0.25);
}

// --- criterion 5: 3D cubic elements -----------------------------------------

void criterion5() {
    const auto t = run(3, 3, 1, 5, "standard");
    check_order("5a", prev(t).flux_l1, last(t).flux_l1, 2.0, 0.25);
    check_order("5b", prev(t).E_l2, last(t).E_l2, 4.0, 0.25);
}

// --- criterion 6: 3D quintic elements ---------------------------------------

void criterion6() {
    const auto t = run(3, 5, 1, 4, "standard");
    check_order("6a", prev(t).flux_l1, last(t).flux_l1, 4.0, 0.25);
    check_order("6b", prev(t).E_l2, last(t).E_l2, 6.0, 0.25);
    check_order("6c", prev(t).E_h1, last(t).E_h1, 5.0, 0.25);

    // the quartic bubble lies inside the quintic trial space, so the
    // projection property brackets the corrected energy error
    bool ok = true;
    double worst = 0;
    for (const auto &r : t.rows) {
        const double slack_lo = r.Ec_h1 - r.E_h1;
        const double slack_hi = r.E_h1 + r.ub_h1 - r.Ec_h1;
        worst = std::min(std::min(slack_lo, slack_hi), worst);
        ok = ok && slack_lo >= -1e-10 && slack_hi >= -1e-10;
    }
    report("6d", ok, fmt("energy inequality slack >= %.3e at every level, threshold -1e-10", worst));
}

// --- criterion 7: solver-free property suite --------------------------------

void criterion7() {
    {
        const std::array<Vec<2>, 3> tri = {{{{0, 0}}, {{1, 0}}, {{0, 1}}}};
        const auto geo = cell_geometry_from_vertices<2>(tri);
        const double flux2 = bubble_boundary_flux<2>(geo, [](const Vec<2> &) { return 1.0; },
                                                     BubbleKind::standard());
        report("7a", std::abs(flux2 + 18.0) <= 1e-12,
               fmt("reference triangle bubble flux %.14f, target -18", flux2));
        const std::array<Vec<3>, 4> tet = {{{{0, 0, 0}}, {{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};
        const auto geo3 = cell_geometry_from_vertices<3>(tet);
        const double flux3 = bubble_boundary_flux<3>(geo3, [](const Vec<3> &) { return 1.0; },
                                                     BubbleKind::standard());
        report("7b", std::abs(flux3 + 64.0 / 5.0) <= 1e-12,
               fmt("reference tetrahedron bubble flux %.14f, target -12.8", flux3));
    }
    {
        bool ok = true;
        double worst = 0;
        for (int k = 3; k <= 8; ++k) {
            const auto rep = verify_orthogonality(k);
            ok = ok && rep.ok();
            worst = std::max({worst, rep.max_boundary_value, rep.max_moment,
                              rep.max_grad_orthogonality});
        }
        report("7c", ok, fmt("bubble constraints hold for degrees 3..8, worst violation %.3e", worst));
    }
    {
        // every barycentric monomial up to the advertised exactness degree
        double worst = 0;
        for (int deg : {5, 12, 20}) {
            const auto rule = simplex_rule<2>(deg);
            std::array<int, 3> e{};
            for (int t = 0; t <= deg; ++t)
                for (e[0] = 0; e[0] <= t; ++e[0])
                    for (e[1] = 0; e[1] + e[0] <= t; ++e[1]) {
                        e[2] = t - e[0] - e[1];
                        double s = 0;
                        for (int q = 0; q < rule.size(); ++q) {
                            double term = rule.weights[q];
                            for (int a = 0; a < 3; ++a) term *= std::pow(rule.points[q][a], e[a]);
                            s += term;
                        }
                        worst = std::max(worst, std::abs(s - barycentric_moment<2>(e)));
                    }
        }
        for (int deg : {4, 10, 16}) {
            const auto rule = simplex_rule<3>(deg);
            std::array<int, 4> e{};
            for (int t = 0; t <= deg; ++t)
                for (e[0] = 0; e[0] <= t; ++e[0])
                    for (e[1] = 0; e[1] + e[0] <= t; ++e[1])
                        for (e[2] = 0; e[2] + e[1] + e[0] <= t; ++e[2]) {
                            e[3] = t - e[0] - e[1] - e[2];
                            double s = 0;
                            for (int q = 0; q < rule.size(); ++q) {
                                double term = rule.weights[q];
                                for (int a = 0; a < 4; ++a)
                                    term *= std::pow(rule.points[q][a], e[a]);
                                s += term;
                            }
                            worst = std::max(worst, std::abs(s - barycentric_moment<3>(e)));
                        }
        }
        report("7d", worst <= 1e-12, fmt("quadrature moment error %.3e, threshold 1e-12", worst));
    }
    {
        // conjugate gradients versus a dense factorization
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double worst = 0;
        for (int n : {8, 14, 20}) {
            std::vector<std::vector<double>> B(n, std::vector<double>(n));
            for (auto &row : B)
                for (double &v : row) v = uni(rng);
            std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    for (int k = 0; k < n; ++k) M[i][j] += B[k][i] * B[k][j];
                    if (i == j) M[i][j] += n;
                }
            std::vector<double> b(n);
            for (double &v : b) v = uni(rng);

            // dense Gauss elimination
            auto Mg = M;
            auto bg = b;
            for (int col = 0; col < n; ++col) {
                int piv = col;
                for (int r = col + 1; r < n; ++r)
                    if (std::abs(Mg[r][col]) > std::abs(Mg[piv][col])) piv = r;
                std::swap(Mg[col], Mg[piv]);
                std::swap(bg[col], bg[piv]);
                for (int r = col + 1; r < n; ++r) {
                    const double fac = Mg[r][col] / Mg[col][col];
                    for (int c = col; c < n; ++c) Mg[r][c] -= fac * Mg[col][c];
                    bg[r] -= fac * bg[col];
                }
            }
            std::vector<double> x_ref(n, 0.0);
            for (int r = n - 1; r >= 0; --r) {
                double s = bg[r];
                for (int c = r + 1; c < n; ++c) s -= Mg[r][c] * x_ref[c];
                x_ref[r] = s / Mg[r][r];
            }

            SparseSymMatrix A;
            A.n = n;
            A.rowptr.resize(n + 1, 0);
            for (int r = 0; r < n; ++r) A.rowptr[r + 1] = A.rowptr[r] + n;
            A.cols.resize(static_cast<size_t>(n) * n);
            A.vals.resize(static_cast<size_t>(n) * n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    A.cols[static_cast<size_t>(r) * n + c] = c;
                    A.vals[static_cast<size_t>(r) * n + c] = M[r][c];
                }
            const auto rep = cg_solve(A, b, 1e-13);
            for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(rep.x[i] - x_ref[i]));
        }
        report("7e", worst <= 1e-9, fmt("max deviation from dense solve %.3e, threshold 1e-9", worst));
    }
    {
        // scaling of bubble flux and norms across three consecutive levels
        bool ok = true;
        double worst = 0;
        auto run_dim = [&](auto dim_tag) {
            constexpr int D = decltype(dim_tag)::value;
            const double expect_flux = std::pow(2.0, D - 2);
            const double expect_h1 = std::pow(2.0, D / 2.0 - 1.0);
            const double expect_l2 = std::pow(2.0, D / 2.0);
            double pf = 0, ph = 0, pl = 0;
            for (int level = 1; level <= 3; ++level) {
                const auto mesh = build_structured<D>(level);
                const auto geo = cell_geometry(mesh, 0);
                const double flux = std::abs(bubble_boundary_flux<D>(
                    geo, [](const Vec<D> &) { return 1.0; }, BubbleKind::standard()));
                const auto rule = simplex_rule<D>(2 * (D + 1));
                const double scale = geo.volume * factorial(D);
                double l2 = 0, h1 = 0;
                for (int q = 0; q < rule.size(); ++q) {
                    double bv;
                    std::array<double, D> bg;
                    bubble_eval<D>(BubbleKind::standard(), rule.points[q], bv, bg);
                    const Vec<D> grad = geo.jacobian_inv_t * bg;
                    l2 += rule.weights[q] * bv * bv * scale;
                    h1 += rule.weights[q] * dot(grad, grad) * scale;
                }
                l2 = std::sqrt(l2);
                h1 = std::sqrt(h1);
                if (level > 1) {
                    for (auto [ratio, expect] : {std::pair{pf / flux, expect_flux},
                                                 std::pair{ph / h1, expect_h1},
                                                 std::pair{pl / l2, expect_l2}}) {
                        const double rel = std::abs(ratio - expect) / expect;
                        worst = std::max(worst, rel);
                        ok = ok && rel <= 0.02;
                    }
                }
                pf = flux;
                ph = h1;
                pl = l2;
            }
        };
        run_dim(std::integral_constant<int, 2>{});
        run_dim(std::integral_constant<int, 3>{});
        report("7f", ok, fmt("scaling-law ratio deviation %.3e, threshold 2%%", worst));
    }
}

// --- criterion 8: conservation identity across bubble-enabled runs ----------

void criterion8() {
    struct RunSpec {
        int dim, degree, lmin, lmax;
        const char *bubble;
    };
    const RunSpec specs[] = {
        {2, 1, 2, 5, "standard"},
        {2, 4, 1, 4, "orthogonal"},
        {2, 3, 1, 4, "standard"},
        {3, 1, 1, 4, "standard"},
        {3, 3, 1, 3, "standard"},
    };
    int idx = 0;
    for (const auto &s : specs) {
        ++idx;
        const auto t = run(s.dim, s.degree, s.lmin, s.lmax, s.bubble);
        double worst = 0;
        for (const auto &r : t.rows) worst = std::max(worst, r.cflux_linf);
        char name[16];
        std::snprintf(name, sizeof name, "8%c", 'a' + idx - 1);
        char detail[160];
        std::snprintf(detail, sizeof detail,
                      "%dD degree %d %s: max cell residual %.3e, threshold 1e-10",
                      s.dim, s.degree, s.bubble, worst);
        report(name, worst <= 1e-10, detail);
    }
}

} // namespace

int main(int argc, char **argv) {
    std::vector<int> wanted;
    if (argc <= 1) {
        wanted = {1, 2, 3, 4, 5, 6, 7, 8};
    } else {
        for (int i = 1; i < argc; ++i) {
            const int n = std::atoi(argv[i]);
            if (n < 1 || n > 8) {
                std::fprintf(stderr, "usage: %s [criterion 1..8]...\n", argv[0]);
                return 2;
            }
            wanted.push_back(n);
        }
    }
    try {
        for (int n : wanted) {
            switch (n) {
            case 1: criterion1(); break;
            case 2: criterion2(); break;
            case 3: criterion3(); break;
            case 4: criterion4(); break;
            case 5: criterion5(); break;
            case 6: criterion6(); break;
            case 7: criterion7(); break;
            case 8: criterion8(); break;
            }
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 3;
    }
    std::printf("%d checks, %d failed\n", checks_run, checks_failed);
    return checks_failed == 0 ? 0 : 1;
}
