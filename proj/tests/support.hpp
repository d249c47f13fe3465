#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minsurf/minsurf.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(MINSURF_FIXTURE_DIR) + "/" + name + ".cfg";
}

// A prepared (or finished) solver run together with the contour that owns
// the curve objects the run state points into.
struct FixtureRun {
    minsurf::ContourHandle contour;
    minsurf::RunState state;
    minsurf::Termination termination = minsurf::Termination::MaxIter;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

inline FixtureRun prepare_fixture(const std::string& name,
                                  const Overrides& overrides = {}) {
    minsurf::RunConfig cfg = minsurf::parse_config_file(fixture_path(name));
    for (const auto& [key, value] : overrides)
        minsurf::apply_override(cfg, key, value);
    FixtureRun out;
    out.contour = minsurf::make_contour(cfg);
    minsurf::DiskMesh mesh = minsurf::make_triangulation(cfg);
    out.state = out.contour.is_free()
                    ? minsurf::init_run(std::move(mesh),
                                        *out.contour.free_boundary, cfg.solver)
                    : minsurf::init_run(std::move(mesh), *out.contour.curve,
                                        cfg.solver);
    return out;
}

inline FixtureRun run_fixture(const std::string& name,
                              const Overrides& overrides = {}) {
    FixtureRun out = prepare_fixture(name, overrides);
    out.termination = minsurf::run(out.state);
    return out;
}

// Boundary image at cyclic position `pos`, zero-padded to 3 components.
inline std::array<double, 3> boundary_image(const minsurf::RunState& state,
                                            int pos) {
    int nb = state.mesh.boundary_count();
    pos = ((pos % nb) + nb) % nb;
    auto img = state.surface.image(state.mesh.boundary[pos]);
    std::array<double, 3> p = {0.0, 0.0, 0.0};
    for (int k = 0; k < state.surface.dim; ++k) p[k] = img[k];
    return p;
}

inline double distance3(const std::array<double, 3>& a,
                        const std::array<double, 3>& b) {
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(acc);
}

inline double max_boundary_edge(const minsurf::RunState& state) {
    int nb = state.mesh.boundary_count();
    double longest = 0.0;
    for (int p = 0; p < nb; ++p)
        longest = std::max(longest, distance3(boundary_image(state, p),
                                              boundary_image(state, p + 1)));
    return longest;
}

inline double point_segment_distance(const std::array<double, 3>& p,
                                     const std::array<double, 3>& a,
                                     const std::array<double, 3>& b) {
    std::array<double, 3> ab = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    std::array<double, 3> ap = {p[0] - a[0], p[1] - a[1], p[2] - a[2]};
    double denom = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
    double s = 0.0;
    if (denom > 0.0) {
        s = (ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / denom;
        s = std::clamp(s, 0.0, 1.0);
    }
    std::array<double, 3> q = {a[0] + s * ab[0], a[1] + s * ab[1],
                               a[2] + s * ab[2]};
    return distance3(p, q);
}

inline std::array<double, 3> curve_point3(const minsurf::Curve& curve,
                                          double t) {
    std::array<double, 3> p = {0.0, 0.0, 0.0};
    curve.eval(t, std::span<double>(p.data(), curve.dimension()));
    return p;
}

// Symmetric Hausdorff distance between the closed boundary polyline and
// the contour curve, the curve sampled at `curve_samples` points and each
// polyline edge at `edge_samples` points.
inline double boundary_hausdorff(const minsurf::RunState& state,
                                 const minsurf::Curve& curve,
                                 int curve_samples = 10000,
                                 int edge_samples = 24) {
    int nb = state.mesh.boundary_count();
    std::vector<std::array<double, 3>> poly(nb);
    for (int p = 0; p < nb; ++p) poly[p] = boundary_image(state, p);

    double period = curve.param_end() - curve.param_begin();
    std::vector<std::array<double, 3>> samples(curve_samples);
    for (int k = 0; k < curve_samples; ++k)
        samples[k] = curve_point3(
            curve, curve.param_begin() + period * k / curve_samples);

    double curve_to_poly = 0.0;
    for (const auto& s : samples) {
        double best = std::numeric_limits<double>::infinity();
        for (int p = 0; p < nb; ++p)
            best = std::min(best,
                            point_segment_distance(s, poly[p],
                                                   poly[(p + 1) % nb]));
        curve_to_poly = std::max(curve_to_poly, best);
    }

    double poly_to_curve = 0.0;
    for (int p = 0; p < nb; ++p) {
        const auto& a = poly[p];
        const auto& b = poly[(p + 1) % nb];
        for (int j = 0; j < edge_samples; ++j) {
            double f = static_cast<double>(j) / edge_samples;
            std::array<double, 3> q = {a[0] + f * (b[0] - a[0]),
                                       a[1] + f * (b[1] - a[1]),
                                       a[2] + f * (b[2] - a[2])};
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : samples)
                best = std::min(best, distance3(q, s));
            poly_to_curve = std::max(poly_to_curve, best);
        }
    }
    return std::max(curve_to_poly, poly_to_curve);
}

// Central finite differences.
inline double fd1(const std::function<double(double)>& f, double x,
                  double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2(const std::function<double(double)>& f, double x,
                  double h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Off-diagonal load b_k = sum_{j != i} alpha_ij a_jk, recomputed from the
// public matrix interface.
inline std::array<double, 3> load_vector(const minsurf::RunState& state,
                                         int node) {
    std::array<double, 3> b = {0.0, 0.0, 0.0};
    for (const auto& entry : state.stiffness.row(node)) {
        if (entry.col == node) continue;
        auto a = state.surface.image(entry.col);
        for (int k = 0; k < state.surface.dim; ++k) b[k] += entry.value * a[k];
    }
    return b;
}

// Full interior residual max_i |sum_j alpha_ij a_j| over interior nodes.
inline double interior_residual(const minsurf::RunState& state) {
    double worst = 0.0;
    for (int i = 0; i < state.mesh.node_count(); ++i) {
        if (minsurf::decode_status(state.mesh, i).role !=
            minsurf::NodeRole::Interior)
            continue;
        auto b = load_vector(state, i);
        double alpha = state.stiffness.diagonal(i);
        auto a = state.surface.image(i);
        for (int k = 0; k < state.surface.dim; ++k)
            worst = std::max(worst, std::abs(alpha * a[k] + b[k]));
    }
    return worst;
}

} // namespace testutil
