#pragma once

#include <vector>

#include "minsurf/assembly.hpp"
#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"
#include "minsurf/refine.hpp"

namespace minsurf {

// Pins boundary position `boundary_pos` to curve parameter `param`.
struct FixedPoint {
    int boundary_pos = 0;
    double param = 0.0;
};

enum class Termination { Converged, MaxIter, InsertionCap };

struct SolverConfig {
    double tol = 1e-8;
    int max_iter = 20000;
    int check_interval = 50;
    double tau = 2.0;
    RefineStrategy strategy = RefineStrategy::None;
    DefectMetric metric = DefectMetric::Distance;
    int max_insertions = -1; // < 0: four times the initial boundary count
    // Three-point normalization pins; empty selects the defaults.  On a
    // free-boundary run the smallest and largest parameters are forced to
    // the arc endpoints.
    std::vector<FixedPoint> fixed_points;
    bool verbose = false;
};

struct SweepRecord {
    int sweep = 0;
    EnergyReport energy;
    double max_displacement = 0.0;
    int node_count = 0;
    int insertions = 0;
};

struct RunState {
    DiskMesh mesh;
    StiffnessMatrix stiffness;
    SurfaceMap surface;
    SolverConfig config;
    ContourRef contour;
    int sweep_count = 0;
    InsertionBudget budget;
    std::vector<SweepRecord> log;
    Termination termination = Termination::MaxIter;
};

// Three-point normalization defaults: a closed curve pins boundary
// positions {0, B/3, 2B/3} to parameters {t0, t0+P/3, t0+2P/3}; a
// curve-plus-plane contour pins {0, B/4, B/2} to the arc start, midpoint,
// and end, leaving positions B/2+1 .. B-1 free on the plane.
std::vector<FixedPoint> default_fixed_points(const Curve& curve,
                                             int boundary_count);
std::vector<FixedPoint> default_fixed_points(const FreeBoundaryContour& contour,
                                             int boundary_count);

// Distributes boundary parameters with equal spacing between consecutive
// fixed points, evaluates the boundary images, rewrites node statuses
// (fixed / movable / free), zeroes the interior, and warm-starts it with
// plain Gauss-Seidel sweeps.  Throws InvalidFixedPoints when the pins are
// not three distinct positions with consistently ordered parameters.
void init_surface(DiskMesh& mesh, SurfaceMap& surface, const Curve& curve,
                  const std::vector<FixedPoint>& fixed_points);
void init_surface(DiskMesh& mesh, SurfaceMap& surface,
                  const FreeBoundaryContour& contour,
                  const std::vector<FixedPoint>& fixed_points);

// Builds a ready-to-run state: initial surface, assembled stiffness
// matrix, insertion budget.  The curve/contour must outlive the state.
RunState init_run(DiskMesh mesh, const Curve& curve,
                  const SolverConfig& config);
RunState init_run(DiskMesh mesh, const FreeBoundaryContour& contour,
                  const SolverConfig& config);

// Local objective for moving boundary node `node` to parameter t with all
// other nodes held: value differs from the full Dirichlet energy by a
// constant, so its derivatives drive the Newton update.
struct BoundaryObjective {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};
BoundaryObjective boundary_objective(const RunState& state, int node, double t);

// Per-node updates; each returns the image displacement and never
// increases the Dirichlet energy.
//
// Exact coordinate-wise minimizer for an interior node.
double gauss_seidel_interior(RunState& state, int node);
// One safeguarded Newton step on the curve parameter: falls back to a
// golden-section search over the neighbours' parameter interval when the
// step is untrustworthy, and keeps the old parameter unless the objective
// does not increase.
double newton_boundary(RunState& state, int node);
// Gauss-Seidel step projected onto the support plane (exact constrained
// minimizer for a plane).
double free_boundary_update(RunState& state, int node);
// Dispatches on the node's status (fixed nodes are left alone).
double relax_node(RunState& state, int node);

// One pass over all nodes in index order.  Appends a sweep record and
// returns the maximum nodal displacement.
double relax_sweep(RunState& state);

// Iterates relax_sweep until the maximum displacement drops below
// config.tol, running a defect check every config.check_interval sweeps
// when a refinement strategy is active.  Returns the termination reason
// (also stored in the state).
Termination run(RunState& state);

} // namespace minsurf
