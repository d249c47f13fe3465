#include "minsurf/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace minsurf {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

// The image as an x y z triple, padding planar maps with z = 0.
std::array<double, 3> lifted(const SurfaceMap& surface, int node) {
    auto img = surface.image(node);
    std::array<double, 3> p = {0.0, 0.0, 0.0};
    for (int k = 0; k < surface.dim; ++k) p[k] = img[k];
    return p;
}

} // namespace

void export_surface_obj(const DiskMesh& mesh, const SurfaceMap& surface,
                        const std::string& path) {
    if (surface.dim > 3)
        throw ValidationError("cannot export a surface with dimension " +
                              std::to_string(surface.dim));
    auto out = open_out(path);
    for (int i = 0; i < mesh.node_count(); ++i) {
        auto p = lifted(surface, i);
        out << "v " << fmt(p[0]) << " " << fmt(p[1]) << " " << fmt(p[2])
            << "\n";
    }
    for (const auto& e : mesh.elements)
        out << "f " << e[0] + 1 << " " << e[1] + 1 << " " << e[2] + 1 << "\n";
    finish(out, path);
}

void export_boundary_polyline(const DiskMesh& mesh, const SurfaceMap& surface,
                              const std::string& path) {
    if (surface.dim > 3)
        throw ValidationError("cannot export a boundary with dimension " +
                              std::to_string(surface.dim));
    auto out = open_out(path);
    for (int node : mesh.boundary) {
        auto p = lifted(surface, node);
        out << fmt(p[0]) << " " << fmt(p[1]) << " " << fmt(p[2]) << "\n";
    }
    finish(out, path);
}

void export_log_csv(const std::vector<SweepRecord>& log,
                    const std::string& path) {
    auto out = open_out(path);
    out << "sweep,dirichlet,area,conformality,max_disp,nodes,insertions\n";
    for (const auto& rec : log) {
        out << rec.sweep << "," << fmt(rec.energy.dirichlet) << ","
            << fmt(rec.energy.area) << ","
            << fmt(rec.energy.conformality_deficit) << ","
            << fmt(rec.max_displacement) << "," << rec.node_count << ","
            << rec.insertions << "\n";
    }
    finish(out, path);
}

void export_run(const RunState& state, const std::string& dir,
                bool surface, bool boundary, bool log) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory '" + dir + "': " + ec.message());
    std::filesystem::path base(dir);
    if (surface)
        export_surface_obj(state.mesh, state.surface,
                           (base / "surface.obj").string());
    if (boundary)
        export_boundary_polyline(state.mesh, state.surface,
                                 (base / "boundary.txt").string());
    if (log) export_log_csv(state.log, (base / "log.csv").string());
}

} // namespace minsurf
