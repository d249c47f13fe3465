#pragma once

#include <vector>

#include "minsurf/assembly.hpp"
#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"

namespace minsurf {

enum class RefineStrategy { None, Bisect, Regular };
enum class DefectMetric { Distance, Angle };

// One flagged boundary edge: the image (or parameter) length jumped past
// tau times the mean of its two cyclic neighbours.
struct DefectEntry {
    int boundary_pos = 0;
    int element = 0;
    double edge_length = 0.0;
    double reference_length = 0.0;
    double ratio = 0.0;
};

struct DefectReport {
    std::vector<DefectEntry> entries;
    bool empty() const { return entries.empty(); }
};

// Scans boundary edges in position order and flags pair (i, i+1) when its
// length exceeds tau times the mean of the lengths at i-1 and i+1.
// Distance measures image-space edge length; Angle measures the
// parameter gap (pairs touching an unparameterized free node are never
// flagged).
DefectReport detect_defective(const DiskMesh& mesh, const SurfaceMap& surface,
                              double tau, DefectMetric metric);

// Counts boundary node insertions against a cap; cap < 0 means unlimited.
struct InsertionBudget {
    int cap = -1;
    int used = 0;
    bool exhausted() const { return cap >= 0 && used >= cap; }
};

// Splits the boundary triangle at `boundary_pos` in two by a new boundary
// node placed on the unit circle at the arc midpoint of the edge.  The new
// node's image sits at the contour arc midpoint (or, when an endpoint is
// free, at the projected image midpoint).  Returns the new node id.
// Throws InsertionCapReached when the budget is already exhausted.
int bisect_boundary_triangle(DiskMesh& mesh, SurfaceMap& surface,
                             int boundary_pos, const ContourRef& contour,
                             InsertionBudget& budget);

// Splits the boundary triangle at `boundary_pos` in four (edge midpoints),
// then splits each neighbour sharing a bisected interior edge to remove the
// hanging node.  Returns the new boundary node id.
int regular_refine_boundary_triangle(DiskMesh& mesh, SurfaceMap& surface,
                                     int boundary_pos,
                                     const ContourRef& contour,
                                     InsertionBudget& budget);

struct RunState;

// Runs one detect pass and refines every flagged pair whose triangle was
// not already rewritten earlier in the same pass, then reassembles the
// stiffness matrix.  Returns the number of insertions.  Throws
// InsertionCapReached (after leaving the state consistent) when the budget
// ran out before all flagged pairs were handled.
int check_and_refine(RunState& state);

} // namespace minsurf
