#include <exception>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "minsurf/minsurf.hpp"

namespace {

const char* termination_name(minsurf::Termination t) {
    switch (t) {
        case minsurf::Termination::Converged: return "converged";
        case minsurf::Termination::MaxIter: return "sweep limit reached";
        case minsurf::Termination::InsertionCap:
            return "insertion cap reached";
    }
    return "unknown";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relaxation solver for piecewise-linear minimal surfaces"};
    app.get_formatter()->column_width(34);

    std::string config_path;
    app.add_option("config", config_path,
                   "run configuration file (key = value lines)");

    std::string contour, triangulation, strategy, metric, fixed_points;
    std::string tol, max_iter, check_interval, tau, max_insertions, out_dir;
    std::string save_triangulation;
    bool verbose = false;

    app.add_option("--contour", contour,
                   "circle | ellipse:a,b | rose3 | curve3d | square | "
                   "arc_on_plane:alpha");
    app.add_option("--triangulation", triangulation,
                   "T1 | T2 | rings:N | file:PATH");
    app.add_option("--strategy", strategy, "none | bisect | regular");
    app.add_option("--metric", metric, "defect metric: distance | angle");
    app.add_option("--tol", tol, "convergence tolerance on max displacement");
    app.add_option("--max-iter", max_iter, "sweep limit");
    app.add_option("--check-interval", check_interval,
                   "sweeps between defect checks");
    app.add_option("--tau", tau, "defect threshold");
    app.add_option("--max-insertions", max_insertions,
                   "boundary insertion cap (-1: four times the boundary)");
    app.add_option("--fixed-points", fixed_points,
                   "three pos:param pins, comma separated");
    app.add_option("--out", out_dir, "output directory for exports");
    app.add_option("--save-triangulation", save_triangulation,
                   "also write the final triangulation to this file");
    app.add_flag("--verbose", verbose, "per-sweep progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        minsurf::RunConfig cfg;
        if (!config_path.empty())
            cfg = minsurf::parse_config_file(config_path);
        auto override_if = [&cfg](const std::string& key,
                                  const std::string& value) {
            if (!value.empty()) minsurf::apply_override(cfg, key, value);
        };
        override_if("contour", contour);
        override_if("triangulation", triangulation);
        override_if("strategy", strategy);
        override_if("metric", metric);
        override_if("tol", tol);
        override_if("max_iter", max_iter);
        override_if("check_interval", check_interval);
        override_if("tau", tau);
        override_if("max_insertions", max_insertions);
        override_if("fixed_points", fixed_points);
        override_if("out", out_dir);
        if (verbose) cfg.solver.verbose = true;
        if (cfg.contour_name.empty())
            throw minsurf::ValidationError(
                "contour: required (config file or --contour)");

        minsurf::ContourHandle handle = minsurf::make_contour(cfg);
        minsurf::DiskMesh mesh = minsurf::make_triangulation(cfg);
        minsurf::RunState state =
            handle.is_free()
                ? minsurf::init_run(std::move(mesh), *handle.free_boundary,
                                    cfg.solver)
                : minsurf::init_run(std::move(mesh), *handle.curve,
                                    cfg.solver);
        minsurf::Termination result = minsurf::run(state);

        minsurf::export_run(state, cfg.out_dir, cfg.export_surface,
                            cfg.export_boundary, cfg.export_log);
        if (!save_triangulation.empty())
            minsurf::save_mesh_file(state.mesh, save_triangulation);

        std::cout << termination_name(result) << " after " << state.sweep_count
                  << " sweeps\n";
        if (!state.log.empty()) {
            const auto& last = state.log.back();
            std::cout << "dirichlet " << last.energy.dirichlet << "\narea "
                      << last.energy.area << "\nconformality "
                      << last.energy.conformality_deficit << "\nnodes "
                      << last.node_count << "\ninsertions " << last.insertions
                      << "\n";
        }
        return result == minsurf::Termination::Converged ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
