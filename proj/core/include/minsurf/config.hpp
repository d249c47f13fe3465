#pragma once

#include <memory>
#include <string>
#include <vector>

#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"
#include "minsurf/relax.hpp"

namespace minsurf {

// A full run description: contour, triangulation, solver settings, and
// export choices.  Parsed from flat key=value text with an optional
// [contour] section holding Fourier coefficient tables.
struct RunConfig {
    // Builtin contour name with optional parameters ("ellipse:2,1"), or
    // "fourier" when coefficient tables are given.
    std::string contour_name;
    std::vector<double> contour_params;
    // Per-coordinate harmonic tables; entry m multiplies cos(mt) / sin(mt).
    std::vector<std::vector<double>> fourier_cos;
    std::vector<std::vector<double>> fourier_sin;

    std::string triangulation = "T2"; // T1 | T2 | rings:N | file:PATH
    SolverConfig solver;              // fixed points ride along in here

    std::string out_dir = ".";
    bool export_surface = true;
    bool export_boundary = true;
    bool export_log = true;
    unsigned seed = 0; // reserved; the solver is deterministic
};

// Parses and validates config text.  Errors carry the offending line
// number; semantic problems name the field.
RunConfig parse_config(const std::string& text);

// Convenience wrapper around parse_config for a file on disk.
RunConfig parse_config_file(const std::string& path);

// Applies one key=value assignment on top of a parsed config (how CLI
// flags override file values).  Errors cite the option name.
void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value);

// Owns whichever contour kind the config describes.
struct ContourHandle {
    std::unique_ptr<Curve> curve;
    std::unique_ptr<FreeBoundaryContour> free_boundary;

    bool is_free() const { return free_boundary != nullptr; }
};

ContourHandle make_contour(const RunConfig& config);

// Builds the configured triangulation (generating rings or loading a mesh
// file).
DiskMesh make_triangulation(const RunConfig& config);

} // namespace minsurf
