#include "minsurf/relax.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace minsurf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// b_k = sum_{j != i} alpha_ij a_jk, the off-diagonal load on node i.
std::array<double, 3> off_diagonal_load(const StiffnessMatrix& matrix,
                                        const SurfaceMap& surface, int node) {
    std::array<double, 3> b = {0.0, 0.0, 0.0};
    for (const auto& entry : matrix.row(node)) {
        if (entry.col == node) continue;
        auto a = surface.image(entry.col);
        for (int k = 0; k < surface.dim; ++k) b[k] += entry.value * a[k];
    }
    return b;
}

void warm_start_interior(const DiskMesh& mesh, SurfaceMap& surface,
                         int sweeps) {
    StiffnessMatrix matrix = assemble(mesh);
    for (int s = 0; s < sweeps; ++s) {
        for (int i = 0; i < mesh.node_count(); ++i) {
            if (mesh.status[i] != 0) continue;
            auto b = off_diagonal_load(matrix, surface, i);
            double alpha = matrix.diagonal(i);
            auto a = surface.image(i);
            for (int k = 0; k < surface.dim; ++k) a[k] = -b[k] / alpha;
        }
    }
}

struct SegmentFill {
    int from_pos;
    int to_pos;
    double from_param;
    double gap;
};

// Fills params[pos] with equal spacing from from_param over `gap` along the
// boundary walk from from_pos (inclusive) to to_pos (exclusive).
void fill_segment(std::vector<double>& params, int nb, const SegmentFill& seg,
                  bool wrap) {
    int steps = ((seg.to_pos - seg.from_pos) % nb + nb) % nb;
    for (int k = 0; k < steps; ++k) {
        int pos = (seg.from_pos + k) % nb;
        double t = seg.from_param + seg.gap * k / steps;
        params[pos] = wrap ? wrap_angle(t) : t;
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidFixedPoints(message);
}

} // namespace

std::vector<FixedPoint> default_fixed_points(const Curve& curve,
                                             int boundary_count) {
    double t0 = curve.param_begin();
    double period = curve.param_end() - curve.param_begin();
    return {{0, t0},
            {boundary_count / 3, t0 + period / 3.0},
            {2 * boundary_count / 3, t0 + 2.0 * period / 3.0}};
}

std::vector<FixedPoint> default_fixed_points(const FreeBoundaryContour& contour,
                                             int boundary_count) {
    double ta = contour.arc().param_begin();
    double tb = contour.arc().param_end();
    return {{0, ta},
            {boundary_count / 4, 0.5 * (ta + tb)},
            {boundary_count / 2, tb}};
}

void init_surface(DiskMesh& mesh, SurfaceMap& surface, const Curve& curve,
                  const std::vector<FixedPoint>& fixed_points) {
    if (!curve.is_closed())
        throw ValidationError("plain contour must be a closed curve");
    if (curve.dimension() < 2 || curve.dimension() > 3)
        throw ValidationError("contour dimension must be 2 or 3");
    int nb = mesh.boundary_count();
    require(fixed_points.size() == 3, "exactly three fixed points required");
    auto fps = fixed_points;
    std::sort(fps.begin(), fps.end(),
              [](const FixedPoint& a, const FixedPoint& b) {
                  return a.boundary_pos < b.boundary_pos;
              });
    for (const auto& fp : fps)
        require(fp.boundary_pos >= 0 && fp.boundary_pos < nb,
                "fixed point position out of range");
    require(fps[0].boundary_pos != fps[1].boundary_pos &&
                fps[1].boundary_pos != fps[2].boundary_pos,
            "fixed point positions must be distinct");
    double g01 = forward_gap(fps[0].param, fps[1].param);
    double g12 = forward_gap(fps[1].param, fps[2].param);
    double g20 = forward_gap(fps[2].param, fps[0].param);
    require(g01 > 1e-12 && g12 > 1e-12 && g20 > 1e-12,
            "fixed point parameters must be distinct");
    require(std::abs(g01 + g12 + g20 - kTwoPi) < 1e-9,
            "fixed point parameters must follow the boundary orientation");

    surface.dim = curve.dimension();
    surface.params.assign(nb, 0.0);
    surface.images.assign(static_cast<size_t>(mesh.node_count()) * surface.dim,
                          0.0);

    fill_segment(surface.params, nb,
                 {fps[0].boundary_pos, fps[1].boundary_pos, fps[0].param, g01},
                 true);
    fill_segment(surface.params, nb,
                 {fps[1].boundary_pos, fps[2].boundary_pos, fps[1].param, g12},
                 true);
    fill_segment(surface.params, nb,
                 {fps[2].boundary_pos, fps[0].boundary_pos, fps[2].param, g20},
                 true);

    for (int p = 0; p < nb; ++p) {
        bool fixed = false;
        for (const auto& fp : fps) fixed |= fp.boundary_pos == p;
        int node = mesh.boundary[p];
        mesh.status[node] = encode_status(
            fixed ? NodeRole::Fixed : NodeRole::Boundary, p, nb);
        curve.eval(surface.params[p], surface.image(node));
    }
    warm_start_interior(mesh, surface, 200);
}

void init_surface(DiskMesh& mesh, SurfaceMap& surface,
                  const FreeBoundaryContour& contour,
                  const std::vector<FixedPoint>& fixed_points) {
    const Curve& arc = contour.arc();
    int nb = mesh.boundary_count();
    require(fixed_points.size() == 3, "exactly three fixed points required");
    double ta = arc.param_begin();
    double tb = arc.param_end();
    // The two outer pins are forced onto the arc endpoints; only the inner
    // pin keeps its requested parameter.
    auto fps = fixed_points;
    std::sort(fps.begin(), fps.end(),
              [](const FixedPoint& a, const FixedPoint& b) {
                  return a.param < b.param;
              });
    for (const auto& fp : fps)
        require(fp.boundary_pos >= 0 && fp.boundary_pos < nb,
                "fixed point position out of range");
    FixedPoint start = {fps[0].boundary_pos, ta};
    FixedPoint mid = fps[1];
    FixedPoint end = {fps[2].boundary_pos, tb};
    require(mid.param > ta && mid.param < tb,
            "inner fixed point parameter must lie inside the arc");
    int steps_sm = ((mid.boundary_pos - start.boundary_pos) % nb + nb) % nb;
    int steps_se = ((end.boundary_pos - start.boundary_pos) % nb + nb) % nb;
    require(steps_sm > 0 && steps_se > steps_sm && steps_se < nb,
            "fixed point positions must follow the boundary orientation");

    surface.dim = 3;
    surface.params.assign(nb, kNan);
    surface.images.assign(static_cast<size_t>(mesh.node_count()) * 3, 0.0);

    fill_segment(surface.params, nb,
                 {start.boundary_pos, mid.boundary_pos, start.param,
                  mid.param - start.param},
                 false);
    fill_segment(surface.params, nb,
                 {mid.boundary_pos, end.boundary_pos, mid.param,
                  end.param - mid.param},
                 false);
    surface.params[end.boundary_pos] = end.param;

    // Arc images for the on-curve section, a straight run across the plane
    // from q3 back to q1 for the free section.
    for (int k = 0; k <= steps_se; ++k) {
        int pos = (start.boundary_pos + k) % nb;
        arc.eval(surface.params[pos], surface.image(mesh.boundary[pos]));
    }
    const auto& q1 = contour.q1();
    const auto& q3 = contour.q3();
    int free_count = nb - steps_se - 1;
    for (int j = 1; j <= free_count; ++j) {
        int pos = (end.boundary_pos + j) % nb;
        double f = static_cast<double>(j) / (free_count + 1);
        std::array<double, 3> p = {q3[0] + f * (q1[0] - q3[0]),
                                   q3[1] + f * (q1[1] - q3[1]),
                                   q3[2] + f * (q1[2] - q3[2])};
        p = project_to_plane(contour.surface(), p);
        auto image = surface.image(mesh.boundary[pos]);
        std::copy(p.begin(), p.end(), image.begin());
    }

    for (int p = 0; p < nb; ++p) {
        NodeRole role;
        if (p == start.boundary_pos || p == mid.boundary_pos ||
            p == end.boundary_pos)
            role = NodeRole::Fixed;
        else if (((p - start.boundary_pos) % nb + nb) % nb < steps_se)
            role = NodeRole::Boundary;
        else
            role = NodeRole::Free;
        mesh.status[mesh.boundary[p]] = encode_status(role, p, nb);
    }
    warm_start_interior(mesh, surface, 200);
}

RunState init_run(DiskMesh mesh, const Curve& curve,
                  const SolverConfig& config) {
    RunState state;
    state.mesh = std::move(mesh);
    state.config = config;
    state.contour = make_contour_ref(curve);
    auto fps = config.fixed_points.empty()
                   ? default_fixed_points(curve, state.mesh.boundary_count())
                   : config.fixed_points;
    init_surface(state.mesh, state.surface, curve, fps);
    state.stiffness = assemble(state.mesh);
    state.budget.cap = config.max_insertions < 0
                           ? 4 * state.mesh.boundary_count()
                           : config.max_insertions;
    return state;
}

RunState init_run(DiskMesh mesh, const FreeBoundaryContour& contour,
                  const SolverConfig& config) {
    RunState state;
    state.mesh = std::move(mesh);
    state.config = config;
    state.contour = make_contour_ref(contour);
    auto fps = config.fixed_points.empty()
                   ? default_fixed_points(contour, state.mesh.boundary_count())
                   : config.fixed_points;
    init_surface(state.mesh, state.surface, contour, fps);
    state.stiffness = assemble(state.mesh);
    state.budget.cap = config.max_insertions < 0
                           ? 4 * state.mesh.boundary_count()
                           : config.max_insertions;
    return state;
}

BoundaryObjective boundary_objective(const RunState& state, int node,
                                     double t) {
    const Curve& curve = *state.contour.curve;
    int dim = state.surface.dim;
    auto b = off_diagonal_load(state.stiffness, state.surface, node);
    double alpha = state.stiffness.diagonal(node);
    std::array<double, 3> g, g1, g2;
    curve.eval(t, std::span<double>(g.data(), dim));
    curve.eval_d1(t, std::span<double>(g1.data(), dim));
    curve.eval_d2(t, std::span<double>(g2.data(), dim));
    BoundaryObjective out;
    for (int k = 0; k < dim; ++k) {
        double load = alpha * g[k] + b[k];
        out.value += 0.5 * alpha * g[k] * g[k] + g[k] * b[k];
        out.d1 += g1[k] * load;
        out.d2 += g2[k] * load + alpha * g1[k] * g1[k];
    }
    return out;
}

double gauss_seidel_interior(RunState& state, int node) {
    auto b = off_diagonal_load(state.stiffness, state.surface, node);
    double alpha = state.stiffness.diagonal(node);
    auto a = state.surface.image(node);
    double disp2 = 0.0;
    for (int k = 0; k < state.surface.dim; ++k) {
        double next = -b[k] / alpha;
        double d = next - a[k];
        disp2 += d * d;
        a[k] = next;
    }
    return std::sqrt(disp2);
}

double free_boundary_update(RunState& state, int node) {
    auto b = off_diagonal_load(state.stiffness, state.surface, node);
    double alpha = state.stiffness.diagonal(node);
    auto a = state.surface.image(node);
    std::array<double, 3> candidate;
    for (int k = 0; k < 3; ++k) candidate[k] = -b[k] / alpha;
    candidate = project_to_plane(*state.contour.surface, candidate);

    auto local_energy = [&](std::span<const double> p) {
        double e = 0.0;
        for (int k = 0; k < 3; ++k)
            e += 0.5 * alpha * p[k] * p[k] + p[k] * b[k];
        return e;
    };
    if (local_energy(candidate) > local_energy(a)) return 0.0;
    double disp2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        double d = candidate[k] - a[k];
        disp2 += d * d;
        a[k] = candidate[k];
    }
    return std::sqrt(disp2);
}

double newton_boundary(RunState& state, int node) {
    NodeStatus status = decode_status(state.mesh, node);
    if (status.role != NodeRole::Boundary) return 0.0;
    int pos = status.boundary_pos;
    SurfaceMap& surface = state.surface;
    const Curve& curve = *state.contour.curve;
    int nb = state.mesh.boundary_count();
    double t_old = surface.params[pos];
    double t_prev = surface.params[(pos + nb - 1) % nb];
    double t_next = surface.params[(pos + 1) % nb];
    if (std::isnan(t_old) || std::isnan(t_prev) || std::isnan(t_next))
        return 0.0;

    // Lift the admissible parameter window (t_prev, t_next) to (0, span) so
    // a closed curve's seam never splits the interval.
    bool closed = curve.is_closed();
    double span = closed ? forward_gap(t_prev, t_next) : t_next - t_prev;
    if (!(span > 1e-14)) return 0.0;
    auto t_of = [&](double x) {
        return closed ? wrap_angle(t_prev + x) : t_prev + x;
    };
    auto eval = [&](double x) {
        return boundary_objective(state, node, t_of(x));
    };

    BoundaryObjective f_ref = boundary_objective(state, node, t_old);
    double x_old = closed ? forward_gap(t_prev, t_old) : t_old - t_prev;

    // One Newton step; any misbehaviour (non-convex local model, a step
    // that escapes the window, or an objective increase) falls back to a
    // bracketed golden-section search over the whole window.
    double x = x_old;
    BoundaryObjective f = f_ref;
    bool fallback = !(x_old > 0.0 && x_old < span) || !(f_ref.d2 > 0.0);
    if (!fallback) {
        x = x_old - f_ref.d1 / f_ref.d2;
        if (x > 0.0 && x < span) {
            f = eval(x);
            fallback = f.value > f_ref.value;
        } else {
            fallback = true;
        }
    }

    if (fallback) {
        constexpr double inv_phi = 0.61803398874989484820;
        double lo = 0.0, hi = span;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = eval(x1).value;
        double f2 = eval(x2).value;
        for (int iter = 0; iter < 80 && hi - lo > 1e-13 * span; ++iter) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = eval(x1).value;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = eval(x2).value;
            }
        }
        x = 0.5 * (lo + hi);
        f = eval(x);
    }

    // Keep the old parameter unless the move does not increase the local
    // objective; the sweep then never raises the Dirichlet energy.
    double t_new = f.value <= f_ref.value ? t_of(x) : t_old;
    surface.params[pos] = t_new;
    auto a = surface.image(node);
    std::array<double, 3> fresh;
    std::span<double> out(fresh.data(), surface.dim);
    curve.eval(t_new, out);
    double disp2 = 0.0;
    for (int k = 0; k < surface.dim; ++k) {
        double d = out[k] - a[k];
        disp2 += d * d;
        a[k] = out[k];
    }
    return std::sqrt(disp2);
}

double relax_node(RunState& state, int node) {
    switch (decode_status(state.mesh, node).role) {
        case NodeRole::Interior:
            return gauss_seidel_interior(state, node);
        case NodeRole::Boundary:
            return newton_boundary(state, node);
        case NodeRole::Free:
            return free_boundary_update(state, node);
        case NodeRole::Fixed:
            break;
    }
    return 0.0;
}

double relax_sweep(RunState& state) {
    double max_disp = 0.0;
    for (int i = 0; i < state.mesh.node_count(); ++i)
        max_disp = std::max(max_disp, relax_node(state, i));
    ++state.sweep_count;
    EnergyReport energy = area_and_conformality(state.mesh, state.surface);
    state.log.push_back({state.sweep_count, energy, max_disp,
                         state.mesh.node_count(), state.budget.used});
    if (state.config.verbose) {
        std::clog << "sweep " << state.sweep_count << " dirichlet "
                  << energy.dirichlet << " area " << energy.area << " disp "
                  << max_disp << " nodes " << state.mesh.node_count()
                  << " insertions " << state.budget.used << "\n";
    }
    return max_disp;
}

Termination run(RunState& state) {
    MeshDiagnostics diagnostics = validate_mesh(state.mesh);
    if (!diagnostics.empty())
        throw ValidationError("mesh validation failed:\n" +
                              diagnostics.summary());
    if (!(state.config.tol > 0.0))
        throw ValidationError("tol must be positive");
    if (state.config.max_iter < 1)
        throw ValidationError("max_iter must be at least 1");
    if (state.config.check_interval < 1)
        throw ValidationError("check_interval must be at least 1");
    if (!(state.config.tau > 1.0))
        throw ValidationError("tau must exceed 1");

    try {
        while (state.sweep_count < state.config.max_iter) {
            if (state.config.strategy != RefineStrategy::None &&
                state.sweep_count % state.config.check_interval == 0)
                check_and_refine(state);
            double disp = relax_sweep(state);
            if (disp < state.config.tol) {
                state.termination = Termination::Converged;
                return state.termination;
            }
        }
        state.termination = Termination::MaxIter;
    } catch (const InsertionCapReached&) {
        state.termination = Termination::InsertionCap;
    }
    return state.termination;
}

} // namespace minsurf
