////////////////////////////////////////////////////////////////////////////////
// fcfem_study.cpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Command-line convergence study driver.
//
//  Example:
//      fcfem-study --dim 2 --degree 1 --levels 2..6 --bubble standard
*/
////////////////////////////////////////////////////////////////////////////////
#include <fcfem/fcfem.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

// Parse "A..B" (or a single "A") into an inclusive level range.
void parse_levels(const std::string &text, int &lo, int &hi) {
    const auto pos = text.find("..");
    try {
        size_t used = 0;
        if (pos == std::string::npos) {
            lo = hi = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            lo = std::stoi(text.substr(0, pos), &used);
            if (used != pos) throw std::invalid_argument(text);
            const std::string rest = text.substr(pos + 2);
            hi = std::stoi(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(text);
        }
    } catch (const std::exception &) {
        throw fcfem::StageError("study", "cannot parse --levels '" + text + "' (expected A..B)");
    }
}

int exit_code_for_stage(const std::string &stage) {
    if (stage == "mesh") return 2;
    if (stage == "element") return 3;
    if (stage == "assembly") return 4;
    if (stage == "solver") return 5;
    if (stage == "flux") return 6;
    if (stage == "bubbles") return 7;
    if (stage == "io") return 8;
    return 9;  // study / configuration
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Elliptic convergence study with elementwise flux correction"};

    fcfem::StudyConfig cfg;
    std::string levels;
    std::string format = "text";

    app.add_option("--dim", cfg.dim, "Spatial dimension")->check(CLI::IsMember({2, 3}));
    app.add_option("--degree", cfg.degree, "Lagrange element degree")->check(CLI::PositiveNumber);
    app.add_option("--levels", levels, "Inclusive refinement range A..B (default depends on dim/degree)");
    app.add_option("--problem", cfg.problem, "Built-in problem name (default poly2d/poly3d by dim)");
    app.add_option("--bubble", cfg.bubble, "Flux correction kind")
        ->check(CLI::IsMember({"none", "standard", "orthogonal"}));
    app.add_option("--cg-tol", cfg.cg_tol, "CG relative residual tolerance");
    app.add_option("--cg-max-iter", cfg.cg_max_iter, "CG iteration cap (default: automatic)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--flux-field", cfg.flux_field_path,
                   "Write per-cell |F_tau| of the finest uncorrected solve (.csv or legacy VTK)");
    app.add_option("--mesh-dump", cfg.mesh_dump_path, "Write the finest mesh as plain text");
    app.add_flag("--big", cfg.big, "Allow runs beyond 200000 unknowns");
    app.add_flag("-v,--verbose", cfg.progress, "Progress lines on stderr");

    CLI11_PARSE(app, argc, argv);

    try {
        const bool user_problem = app.count("--problem") > 0;
        if (!user_problem) cfg.problem = (cfg.dim == 2) ? "poly2d" : "poly3d";

        if (app.count("--levels") > 0) {
            parse_levels(levels, cfg.level_min, cfg.level_max);
        } else {
            cfg.level_min = 1;
            if (cfg.dim == 2)
                cfg.level_max = 6;
            else
                cfg.level_max = (cfg.degree <= 3) ? 5 : 4;
        }

        const fcfem::ConvergenceTable table = fcfem::run_convergence(cfg);
        fcfem::emit_table(table, format, std::cout);
        return 0;
    } catch (const fcfem::StageError &e) {
        std::fprintf(stderr, "fcfem-study: %s\n", e.what());
        return exit_code_for_stage(e.stage);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "fcfem-study: %s\n", e.what());
        return 1;
    }
}
