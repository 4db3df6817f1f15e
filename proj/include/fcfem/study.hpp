////////////////////////////////////////////////////////////////////////////////
// study.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Convergence-study harness: built-in manufactured problems, error norms,
//  level sweeps combining every module, and table output (text/csv/json).
//
//  Naming used in tables and reports, with u_h the Galerkin solution and
//  u~ = u_h + sum gamma_tau b_tau the flux-corrected solution:
//      e  = I_h u - u_h      (interpolant minus solution)
//      E  = u - u_h          (true error)
//      ec = I_h u - u~       (interpolant minus corrected solution)
//      Ec = u - u~
//      flux(*)  = sum_tau |F_tau(u_h)|,  cflux(*) = sum_tau |F_tau(u~)|
*/
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <fcfem/bubbles.hpp>
#include <fcfem/solver.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fcfem {

// Error with the pipeline stage that raised it; the CLI maps stages to exit
// codes.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string st, const std::string &msg)
        : std::runtime_error("stage '" + st + "': " + msg), stage(std::move(st)) {}
};

template <int D>
struct ProblemSpec {
    std::string name;
    int u_degree = 0;  // polynomial degree of the exact solution
    ScalarField<D> u;
    std::function<Vec<D>(const Vec<D> &)> grad_u;
    ScalarField<D> f;      // -div(alpha grad u)
    ScalarField<D> alpha;  // diffusion coefficient
};

template <int D>
ProblemSpec<D> builtin_problem(const std::string &name) {
    ProblemSpec<D> p;
    p.name = name;
    p.alpha = [](const Vec<D> &) { return 1.0; };
    if constexpr (D == 2) {
        if (name != "poly2d")
            throw StageError("study", "unknown 2D problem '" + name + "' (expected poly2d)");
        // u = 2^8 x^2(1-x)^2 y^2(1-y)^2
        auto g = [](double t) { return t * t * (1 - t) * (1 - t); };
        auto dg = [](double t) { return 2 * t - 6 * t * t + 4 * t * t * t; };
        auto ddg = [](double t) { return 2 - 12 * t + 12 * t * t; };
        p.u_degree = 8;
        p.u = [g](const Vec<2> &x) { return 256 * g(x[0]) * g(x[1]); };
        p.grad_u = [g, dg](const Vec<2> &x) {
            return Vec<2>{{256 * dg(x[0]) * g(x[1]), 256 * g(x[0]) * dg(x[1])}};
        };
        p.f = [g, ddg](const Vec<2> &x) {
            return -256 * (ddg(x[0]) * g(x[1]) + g(x[0]) * ddg(x[1]));
        };
    } else {
        if (name != "poly3d")
            throw StageError("study", "unknown 3D problem '" + name + "' (expected poly3d)");
        // u = 2^6 x(1-x) y(1-y) z(1-z)
        auto q = [](double t) { return t * (1 - t); };
        auto dq = [](double t) { return 1 - 2 * t; };
        p.u_degree = 6;
        p.u = [q](const Vec<3> &x) { return 64 * q(x[0]) * q(x[1]) * q(x[2]); };
        p.grad_u = [q, dq](const Vec<3> &x) {
            return Vec<3>{{64 * dq(x[0]) * q(x[1]) * q(x[2]),
                           64 * q(x[0]) * dq(x[1]) * q(x[2]),
                           64 * q(x[0]) * q(x[1]) * dq(x[2])}};
        };
        p.f = [q](const Vec<3> &x) {
            return 128 * (q(x[1]) * q(x[2]) + q(x[0]) * q(x[2]) + q(x[0]) * q(x[1]));
        };
    }
    return p;
}

// Global compatibility |int_Omega f + int_Gamma alpha du/dn| (should vanish
// for a consistent (u, f, alpha) triple).
template <int D>
double problem_compatibility_residual(const ProblemSpec<D> &p, int level = 3) {
    const auto mesh = build_structured<D>(level);
    const auto vrule = simplex_rule<D>(std::max(2, p.u_degree));
    double volume_term = 0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const double scale = geo.volume * factorial(D);
        for (int q = 0; q < vrule.size(); ++q)
            volume_term += vrule.weights[q] * p.f(bary_to_physical(geo, vrule.points[q])) * scale;
    }
    const auto frule = simplex_rule<D - 1>(std::max(2, p.u_degree));
    double boundary_term = 0;
    for (const auto &fc : build_facets(mesh)) {
        if (!fc.boundary()) continue;
        const auto geo = cell_geometry(mesh, fc.cell0);
        const auto &fg = geo.facets[fc.lf0];
        double s = 0;
        for (int q = 0; q < frule.size(); ++q) {
            const auto lam = embed_facet_point<D>(fc.lf0, frule.points[q]);
            const Vec<D> x = bary_to_physical(geo, lam);
            s += frule.weights[q] * p.alpha(x) * dot(p.grad_u(x), fg.normal);
        }
        boundary_term += s * fg.measure * factorial(D - 1);
    }
    return std::abs(volume_term + boundary_term);
}

// L2 norm and H1 seminorm of (u_exact - sol), by cell-wise quadrature.
template <int D, class Solution>
std::pair<double, double> error_norms(const ProblemSpec<D> &p, const Mesh<D> &mesh,
                                      const Solution &sol, int quad_degree) {
    const auto rule = simplex_rule<D>(quad_degree);
    auto tab = sol.tabulate(rule.points);
    double l2 = 0, h1 = 0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const double scale = geo.volume * factorial(D);
        tab.cell(c);
        for (int q = 0; q < rule.size(); ++q) {
            const Vec<D> x = bary_to_physical(geo, rule.points[q]);
            const double dv = p.u(x) - tab.value(q);
            const Vec<D> dg = p.grad_u(x) - tab.grad(q);
            l2 += rule.weights[q] * dv * dv * scale;
            h1 += rule.weights[q] * dot(dg, dg) * scale;
        }
    }
    // the simplex rules carry weights of both signs, so a squared norm at
    // roundoff level can accumulate to a tiny negative number
    return {std::sqrt(std::max(0.0, l2)), std::sqrt(std::max(0.0, h1))};
}

// L2 norm and H1 seminorm of the field itself.
template <int D, class Solution>
std::pair<double, double> field_norms(const Mesh<D> &mesh, const Solution &sol, int quad_degree) {
    const auto rule = simplex_rule<D>(quad_degree);
    auto tab = sol.tabulate(rule.points);
    double l2 = 0, h1 = 0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const double scale = geo.volume * factorial(D);
        tab.cell(c);
        for (int q = 0; q < rule.size(); ++q) {
            const double v = tab.value(q);
            l2 += rule.weights[q] * v * v * scale;
            h1 += rule.weights[q] * dot(tab.grad(q), tab.grad(q)) * scale;
        }
    }
    return {std::sqrt(std::max(0.0, l2)), std::sqrt(std::max(0.0, h1))};
}

struct StudyConfig {
    int dim = 2;
    int degree = 1;
    int level_min = 1;
    int level_max = 6;
    std::string problem;              // "" selects the dimension's default
    std::string bubble = "standard";  // none | standard | orthogonal
    double cg_tol = 1e-12;
    long long cg_max_iter = -1;  // <0: automatic
    bool big = false;            // lift the 200k-dof guard
    bool progress = false;       // per-level progress lines on stderr
    std::string flux_field_path;  // finest-level |F_tau| export ("" = off)
    std::string mesh_dump_path;   // finest-level mesh dump ("" = off)
};

struct StudyRow {
    int level = 0;
    double h = 0;
    long long dof_total = 0, dof_interior = 0;
    int cg_iters = 0;
    double cg_res = 0;
    double e_l2 = 0, e_h1 = 0;  // I_h u - u_h
    double E_l2 = 0, E_h1 = 0;  // u - u_h
    double flux_l1 = 0, flux_l2 = 0, flux_linf = 0;
    bool corrected = false;
    double ec_l2 = 0, ec_h1 = 0;  // I_h u - corrected
    double Ec_l2 = 0, Ec_h1 = 0;  // u - corrected
    double cflux_l1 = 0, cflux_l2 = 0, cflux_linf = 0;
    double gamma_max = 0;
    double ub_l2 = 0, ub_h1 = 0;  // norms of the bubble part alone
};

struct ConvergenceTable {
    StudyConfig config;
    std::vector<StudyRow> rows;
};

// Observed order between two consecutive levels; NaN when undefined.
inline double observed_order(double coarse, double fine) {
    if (!(coarse > 0) || !(fine > 0) || !std::isfinite(coarse) || !std::isfinite(fine))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

namespace detail {

inline long long dofs_at_level(int dim, int degree, int level) {
    const long long nk = (1LL << (level - 1)) * degree;
    long long total = 1;
    for (int d = 0; d < dim; ++d) total *= (nk + 1);
    return total;
}

} // namespace detail

template <int D>
ConvergenceTable run_convergence_impl(const StudyConfig &cfg) {
    if (cfg.level_min < 1 || cfg.level_max < cfg.level_min)
        throw StageError("study", "invalid level range " + std::to_string(cfg.level_min)
                         + ".." + std::to_string(cfg.level_max));
    const std::string problem_name =
        cfg.problem.empty() ? ((D == 2) ? "poly2d" : "poly3d") : cfg.problem;
    const ProblemSpec<D> problem = builtin_problem<D>(problem_name);

    bool use_bubbles = true;
    BubbleKind kind = BubbleKind::standard();
    if (cfg.bubble == "none") {
        use_bubbles = false;
    } else if (cfg.bubble == "standard") {
        kind = BubbleKind::standard();
    } else if (cfg.bubble == "orthogonal") {
        if (D != 2)
            throw StageError("bubbles", "orthogonal bubbles are 2D only");
        try {
            kind = BubbleKind::orthogonal(cfg.degree + 2);
        } catch (const std::invalid_argument &e) {
            throw StageError("bubbles", e.what());
        }
    } else {
        throw StageError("study", "unknown bubble kind '" + cfg.bubble + "'");
    }

    constexpr long long dof_guard = 200000;
    if (!cfg.big && detail::dofs_at_level(D, cfg.degree, cfg.level_max) > dof_guard)
        throw StageError("study", "finest level has "
                         + std::to_string(detail::dofs_at_level(D, cfg.degree, cfg.level_max))
                         + " dofs (> " + std::to_string(dof_guard) + "); pass --big to run anyway");

    const int vol_deg = 2 * cfg.degree + 4;
    const int facet_deg = 2 * cfg.degree + 2;
    int err_deg = std::max(vol_deg, 2 * problem.u_degree);
    if (use_bubbles) err_deg = std::max(err_deg, 2 * kind.poly_degree(D));

    ConvergenceTable table;
    table.config = cfg;
    table.config.problem = problem_name;
    for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
        if (cfg.progress)
            std::fprintf(stderr, "[fcfem] level %d: meshing\n", level);
        StudyRow row;
        row.level = level;

        Mesh<D> mesh;
        try {
            mesh = build_structured<D>(level);
        } catch (const std::exception &e) {
            throw StageError("mesh", std::string(e.what()) + " (level " + std::to_string(level) + ")");
        }
        row.h = mesh.h;

        std::unique_ptr<FeSpace<D>> space;
        try {
            space = std::make_unique<FeSpace<D>>(mesh, cfg.degree);
        } catch (const std::exception &e) {
            throw StageError("element", std::string(e.what()));
        }
        row.dof_total = space->dof_total;
        row.dof_interior = space->dof_interior;

        SparseSymMatrix A;
        std::vector<double> b;
        try {
            if (cfg.progress)
                std::fprintf(stderr, "[fcfem] level %d: assembling (%lld dofs)\n", level, space->dof_total);
            A = assemble_stiffness(*space, problem.alpha, vol_deg);
            b = assemble_load(*space, problem.f, vol_deg);
        } catch (const std::exception &e) {
            throw StageError("assembly", std::string(e.what()) + " (level " + std::to_string(level) + ")");
        }

        FeFunction<D> u_h;
        try {
            const ReducedSystem red = apply_dirichlet(A, b, *space);
            std::vector<double> x;
            if (red.A.n > 0) {
                if (cfg.progress)
                    std::fprintf(stderr, "[fcfem] level %d: cg solve (%d unknowns)\n", level, red.A.n);
                const CgReport rep = cg_solve(red.A, red.b, cfg.cg_tol, cfg.cg_max_iter);
                row.cg_iters = rep.iterations;
                row.cg_res = rep.rel_residual;
                x = expand_solution(*space, rep.x, red.interior);
            } else {
                x.assign(space->dof_total, 0.0);
            }
            u_h = FeFunction<D>(*space, std::move(x));
        } catch (const std::exception &e) {
            throw StageError("solver", std::string(e.what()) + " (level " + std::to_string(level) + ")");
        }

        const FeFunction<D> interp = nodal_interpolant(*space, problem.u);
        std::vector<double> diff(interp.coeffs);
        for (size_t i = 0; i < diff.size(); ++i) diff[i] -= u_h.coeffs[i];
        const FeFunction<D> e_fn(*space, std::move(diff));

        FluxReport flux;
        try {
            flux = flux_norms(flux_residuals<D>(mesh, u_h, problem.alpha, problem.f, vol_deg, facet_deg));
        } catch (const std::exception &e) {
            throw StageError("flux", std::string(e.what()) + " (level " + std::to_string(level) + ")");
        }
        row.flux_l1 = flux.l1;
        row.flux_l2 = flux.l2;
        row.flux_linf = flux.linf;

        try {
            if (cfg.progress)
                std::fprintf(stderr, "[fcfem] level %d: norms\n", level);
            const auto En = error_norms(problem, mesh, u_h, err_deg);
            row.E_l2 = En.first;
            row.E_h1 = En.second;
            const auto en = field_norms(mesh, e_fn, err_deg);
            row.e_l2 = en.first;
            row.e_h1 = en.second;
        } catch (const std::exception &e) {
            throw StageError("study", std::string(e.what()) + " (level " + std::to_string(level) + ")");
        }

        if (use_bubbles) {
            try {
                const std::vector<double> gammas =
                    compute_gammas<D>(mesh, u_h, problem.alpha, problem.f, kind, vol_deg, facet_deg);
                for (double g : gammas) row.gamma_max = std::max(row.gamma_max, std::abs(g));
                const CorrectedSolution<D> corrected = build_corrected(u_h, gammas, kind);

                const FluxReport cflux = flux_norms(
                    flux_residuals<D>(mesh, corrected, problem.alpha, problem.f, vol_deg, facet_deg));
                row.cflux_l1 = cflux.l1;
                row.cflux_l2 = cflux.l2;
                row.cflux_linf = cflux.linf;

                const auto Ecn = error_norms(problem, mesh, corrected, err_deg);
                row.Ec_l2 = Ecn.first;
                row.Ec_h1 = Ecn.second;

                // ec = I_h u - u~ = (I_h u - u_h) - bubble part
                std::vector<double> neg(gammas.size());
                for (size_t i = 0; i < gammas.size(); ++i) neg[i] = -gammas[i];
                const CorrectedSolution<D> ec_fn = build_corrected(e_fn, std::move(neg), kind);
                const auto ecn = field_norms(mesh, ec_fn, err_deg);
                row.ec_l2 = ecn.first;
                row.ec_h1 = ecn.second;

                const FeFunction<D> zero(*space, std::vector<double>(space->dof_total, 0.0));
                const CorrectedSolution<D> bubble_part = build_corrected(zero, gammas, kind);
                const auto ubn = field_norms(mesh, bubble_part, err_deg);
                row.ub_l2 = ubn.first;
                row.ub_h1 = ubn.second;
                row.corrected = true;
            } catch (const StageError &) {
                throw;
            } catch (const std::exception &e) {
                throw StageError("bubbles", std::string(e.what()) + " (level " + std::to_string(level) + ")");
            }
        }

        if (level == cfg.level_max) {
            try {
                if (!cfg.mesh_dump_path.empty()) {
                    std::ofstream os(cfg.mesh_dump_path);
                    if (!os)
                        throw std::runtime_error("cannot open '" + cfg.mesh_dump_path + "'");
                    mesh_dump(mesh, os);
                }
                if (!cfg.flux_field_path.empty())
                    flux_field_export(flux, mesh, cfg.flux_field_path);
            } catch (const std::exception &e) {
                throw StageError("io", std::string(e.what()));
            }
        }
        table.rows.push_back(row);
    }
    return table;
}

inline ConvergenceTable run_convergence(const StudyConfig &cfg) {
    if (cfg.dim == 2) return run_convergence_impl<2>(cfg);
    if (cfg.dim == 3) return run_convergence_impl<3>(cfg);
    throw StageError("study", "dim must be 2 or 3, got " + std::to_string(cfg.dim));
}

namespace detail {

inline std::string fmt_err(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

inline std::string fmt_rate(double r) {
    if (!std::isfinite(r)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", r);
    return buf;
}

inline std::string fmt_cflux(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8f", v);
    return buf;
}

inline void pad(std::ostream &os, const std::string &s, int width) {
    for (int i = static_cast<int>(s.size()); i < width; ++i) os << ' ';
    os << s;
}

} // namespace detail

inline void emit_table_text(const ConvergenceTable &t, std::ostream &os) {
    const auto &cfg = t.config;
    os << "# problem=" << cfg.problem << " dim=" << cfg.dim << " degree=" << cfg.degree
       << " bubble=" << cfg.bubble << " cg_tol=" << cfg.cg_tol << "\n";
    os << "# e = I_h u - u_h, ec = I_h u - corrected; flux(*) = sum_tau |F_tau|\n";
    const bool bub = !t.rows.empty() && t.rows.front().corrected;
    os << "level       h      dof   #cg";
    for (const char *name : {"L2(e)", "H1(e)", "flux(*)"}) {
        detail::pad(os, name, 12);
        detail::pad(os, "rate", 6);
    }
    if (bub) {
        for (const char *name : {"L2(ec)", "H1(ec)"}) {
            detail::pad(os, name, 12);
            detail::pad(os, "rate", 6);
        }
        detail::pad(os, "cflux(*)", 14);
        detail::pad(os, "rate", 6);
    }
    os << "\n";
    const StudyRow *prev = nullptr;
    for (const auto &r : t.rows) {
        char head[64];
        std::snprintf(head, sizeof head, "%5d %7.5f %8lld %5d", r.level, r.h, r.dof_total, r.cg_iters);
        os << head;
        auto pair = [&](double value, double prev_value) {
            detail::pad(os, detail::fmt_err(value), 12);
            detail::pad(os, prev ? detail::fmt_rate(observed_order(prev_value, value)) : "-", 6);
        };
        pair(r.e_l2, prev ? prev->e_l2 : 0);
        pair(r.e_h1, prev ? prev->e_h1 : 0);
        pair(r.flux_l1, prev ? prev->flux_l1 : 0);
        if (bub) {
            pair(r.ec_l2, prev ? prev->ec_l2 : 0);
            pair(r.ec_h1, prev ? prev->ec_h1 : 0);
            detail::pad(os, detail::fmt_cflux(r.cflux_l1), 14);
            // rates of values at the conservation floor are rounding noise
            const bool at_floor = r.cflux_l1 < 1e-12 || (prev && prev->cflux_l1 < 1e-12);
            detail::pad(os, (prev && !at_floor)
                                ? detail::fmt_rate(observed_order(prev->cflux_l1, r.cflux_l1))
                                : "-",
                        6);
        }
        os << "\n";
        prev = &r;
    }
}

inline void emit_table_csv(const ConvergenceTable &t, std::ostream &os) {
    os << "level,h,dof_total,dof_interior,cg_iters,cg_res,e_l2,e_h1,E_l2,E_h1,"
          "flux_l1,flux_l2,flux_linf,corrected,ec_l2,ec_h1,Ec_l2,Ec_h1,"
          "cflux_l1,cflux_l2,cflux_linf,gamma_max,ub_l2,ub_h1\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ',' << buf;
    };
    for (const auto &r : t.rows) {
        os << r.level;
        num(r.h);
        os << ',' << r.dof_total << ',' << r.dof_interior << ',' << r.cg_iters;
        num(r.cg_res);
        num(r.e_l2); num(r.e_h1); num(r.E_l2); num(r.E_h1);
        num(r.flux_l1); num(r.flux_l2); num(r.flux_linf);
        os << ',' << (r.corrected ? 1 : 0);
        num(r.ec_l2); num(r.ec_h1); num(r.Ec_l2); num(r.Ec_h1);
        num(r.cflux_l1); num(r.cflux_l2); num(r.cflux_linf);
        num(r.gamma_max); num(r.ub_l2); num(r.ub_h1);
        os << "\n";
    }
}

inline nlohmann::json table_to_json(const ConvergenceTable &t) {
    nlohmann::json j;
    j["problem"] = t.config.problem;
    j["dim"] = t.config.dim;
    j["degree"] = t.config.degree;
    j["bubble"] = t.config.bubble;
    j["cg_tol"] = t.config.cg_tol;
    j["levels"] = nlohmann::json::array();
    for (const auto &r : t.rows) {
        nlohmann::json row;
        row["level"] = r.level;
        row["h"] = r.h;
        row["dof_total"] = r.dof_total;
        row["dof_interior"] = r.dof_interior;
        row["cg_iters"] = r.cg_iters;
        row["cg_res"] = r.cg_res;
        row["e_l2"] = r.e_l2;
        row["e_h1"] = r.e_h1;
        row["E_l2"] = r.E_l2;
        row["E_h1"] = r.E_h1;
        row["flux_l1"] = r.flux_l1;
        row["flux_l2"] = r.flux_l2;
        row["flux_linf"] = r.flux_linf;
        row["corrected"] = r.corrected;
        if (r.corrected) {
            row["ec_l2"] = r.ec_l2;
            row["ec_h1"] = r.ec_h1;
            row["Ec_l2"] = r.Ec_l2;
            row["Ec_h1"] = r.Ec_h1;
            row["cflux_l1"] = r.cflux_l1;
            row["cflux_l2"] = r.cflux_l2;
            row["cflux_linf"] = r.cflux_linf;
            row["gamma_max"] = r.gamma_max;
            row["ub_l2"] = r.ub_l2;
            row["ub_h1"] = r.ub_h1;
        }
        j["levels"].push_back(row);
    }
    auto orders = [&](auto getter) {
        nlohmann::json arr = nlohmann::json::array();
        for (size_t i = 0; i < t.rows.size(); ++i) {
            if (i == 0) {
                arr.push_back(nullptr);
                continue;
            }
            const double r = observed_order(getter(t.rows[i - 1]), getter(t.rows[i]));
            if (std::isfinite(r))
                arr.push_back(r);
            else
                arr.push_back(nullptr);
        }
        return arr;
    };
    j["orders"]["e_l2"] = orders([](const StudyRow &r) { return r.e_l2; });
    j["orders"]["e_h1"] = orders([](const StudyRow &r) { return r.e_h1; });
    j["orders"]["E_l2"] = orders([](const StudyRow &r) { return r.E_l2; });
    j["orders"]["E_h1"] = orders([](const StudyRow &r) { return r.E_h1; });
    j["orders"]["flux_l1"] = orders([](const StudyRow &r) { return r.flux_l1; });
    if (!t.rows.empty() && t.rows.front().corrected) {
        j["orders"]["ec_l2"] = orders([](const StudyRow &r) { return r.ec_l2; });
        j["orders"]["ec_h1"] = orders([](const StudyRow &r) { return r.ec_h1; });
        j["orders"]["Ec_l2"] = orders([](const StudyRow &r) { return r.Ec_l2; });
        j["orders"]["Ec_h1"] = orders([](const StudyRow &r) { return r.Ec_h1; });
    }
    return j;
}

inline void emit_table(const ConvergenceTable &t, const std::string &format, std::ostream &os) {
    if (format == "text")
        emit_table_text(t, os);
    else if (format == "csv")
        emit_table_csv(t, os);
    else if (format == "json")
        os << table_to_json(t).dump(2) << "\n";
    else
        throw std::invalid_argument("emit_table: unknown format '" + format + "'");
    if (!os.good())
        throw std::runtime_error("emit_table: write failed");
}

} // namespace fcfem
