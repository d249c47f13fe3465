#pragma once

#include <string>
#include <vector>

#include "minsurf/assembly.hpp"
#include "minsurf/mesh.hpp"
#include "minsurf/relax.hpp"

namespace minsurf {

// Wavefront-style triangle mesh whose vertex positions are the nodal
// images (z = 0 appended when the map is planar).  Byte-deterministic:
// fixed 17-significant-digit formatting, no timestamps.
void export_surface_obj(const DiskMesh& mesh, const SurfaceMap& surface,
                        const std::string& path);

// Boundary images in cyclic order, one x y z line per node.
void export_boundary_polyline(const DiskMesh& mesh, const SurfaceMap& surface,
                              const std::string& path);

// Per-sweep log with header sweep,dirichlet,area,conformality,max_disp,
// nodes,insertions.
void export_log_csv(const std::vector<SweepRecord>& log,
                    const std::string& path);

// Writes the selected artifacts (surface.obj, boundary.txt, log.csv) into
// `dir`, creating it if needed.
void export_run(const RunState& state, const std::string& dir,
                bool surface, bool boundary, bool log);

} // namespace minsurf
