#include "minsurf/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "minsurf/relax.hpp"

namespace minsurf {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double image_distance(const SurfaceMap& surface, int a, int b) {
    auto pa = surface.image(a);
    auto pb = surface.image(b);
    double acc = 0.0;
    for (int k = 0; k < surface.dim; ++k) {
        double d = pb[k] - pa[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Length of boundary pair (pos, pos+1) under the chosen metric.
double pair_length(const DiskMesh& mesh, const SurfaceMap& surface, int pos,
                   DefectMetric metric, bool closed) {
    int nb = mesh.boundary_count();
    int next = (pos + 1) % nb;
    if (metric == DefectMetric::Distance)
        return image_distance(surface, mesh.boundary[pos],
                              mesh.boundary[next]);
    double t0 = surface.params[pos];
    double t1 = surface.params[next];
    if (std::isnan(t0) || std::isnan(t1)) return kNan;
    return closed ? forward_gap(t0, t1) : t1 - t0;
}

struct EndpointInfo {
    int node_a = 0;
    int node_b = 0;
    int apex = 0;
    int apex_slot = 0; // slot of apex within the element
};

// Identifies the two boundary nodes and the apex of the boundary triangle
// owning pair (pos, pos+1).
EndpointInfo locate(const DiskMesh& mesh, int element, int pos) {
    int nb = mesh.boundary_count();
    int a = mesh.boundary[pos];
    int b = mesh.boundary[(pos + 1) % nb];
    const auto& tri = mesh.elements[element];
    for (int j = 0; j < 3; ++j)
        if (tri[j] != a && tri[j] != b) return {a, b, tri[j], j};
    throw NoSuchElement("element " + std::to_string(element) +
                        " has no vertex outside the boundary pair");
}

// Inserts a node between boundary positions pos and pos+1: on the unit
// circle at the domain arc midpoint, with parameter/image at the contour
// arc midpoint (projected image midpoint when an endpoint is free).
// Updates nodes, boundary, params, images and re-encodes every boundary
// status.  Element connectivity is the caller's job.
int insert_boundary_node(DiskMesh& mesh, SurfaceMap& surface, int pos,
                         const ContourRef& contour) {
    int nb = mesh.boundary_count();
    int next = (pos + 1) % nb;
    int a = mesh.boundary[pos];
    int b = mesh.boundary[next];

    double theta_a = std::atan2(mesh.nodes[a][1], mesh.nodes[a][0]);
    double theta_b = std::atan2(mesh.nodes[b][1], mesh.nodes[b][0]);
    double theta = wrap_angle(theta_a + 0.5 * forward_gap(theta_a, theta_b));

    NodeRole role_a = decode_status(mesh, a).role;
    NodeRole role_b = decode_status(mesh, b).role;
    bool free_node = role_a == NodeRole::Free || role_b == NodeRole::Free;

    double param = kNan;
    std::vector<double> image(surface.dim, 0.0);
    if (free_node) {
        if (!contour.free_boundary())
            throw ValidationError("free boundary node without a support plane");
        auto pa = surface.image(a);
        auto pb = surface.image(b);
        std::array<double, 3> mid = {0.5 * (pa[0] + pb[0]),
                                     0.5 * (pa[1] + pb[1]),
                                     0.5 * (pa[2] + pb[2])};
        mid = project_to_plane(*contour.surface, mid);
        image.assign(mid.begin(), mid.end());
    } else {
        double t_a = surface.params[pos];
        double t_b = surface.params[next];
        param = arc_midpoint(t_a, t_b, contour.curve->is_closed());
        contour.curve->eval(param, image);
    }

    // Capture roles per position before the boundary array shifts.
    std::vector<NodeRole> roles(nb);
    for (int p = 0; p < nb; ++p)
        roles[p] = decode_status(mesh, mesh.boundary[p]).role;

    int w = mesh.node_count();
    mesh.nodes.push_back({std::cos(theta), std::sin(theta)});
    mesh.status.push_back(0);
    surface.images.insert(surface.images.end(), image.begin(), image.end());

    int insert_at = pos + 1; // == nb when the pair wraps, appending at the end
    mesh.boundary.insert(mesh.boundary.begin() + insert_at, w);
    surface.params.insert(surface.params.begin() + insert_at, param);
    roles.insert(roles.begin() + insert_at,
                 free_node ? NodeRole::Free : NodeRole::Boundary);

    int nb_new = nb + 1;
    for (int p = 0; p < nb_new; ++p)
        mesh.status[mesh.boundary[p]] = encode_status(roles[p], p, nb_new);
    return w;
}

void guard_budget(const InsertionBudget& budget) {
    if (budget.exhausted())
        throw InsertionCapReached("insertion cap of " +
                                  std::to_string(budget.cap) + " reached");
}

// Splits neighbour element `e` along the edge (u, v) that now carries the
// midpoint node m.
void split_neighbour(DiskMesh& mesh, int e, int u, int v, int m) {
    const auto tri = mesh.elements[e];
    for (int j = 0; j < 3; ++j) {
        int t0 = tri[j], t1 = tri[(j + 1) % 3], t2 = tri[(j + 2) % 3];
        if ((t0 == u && t1 == v) || (t0 == v && t1 == u)) {
            mesh.elements[e] = {t0, m, t2};
            mesh.elements.push_back({m, t1, t2});
            return;
        }
    }
    throw NoSuchElement("neighbour element " + std::to_string(e) +
                        " does not contain the split edge");
}

} // namespace

DefectReport detect_defective(const DiskMesh& mesh, const SurfaceMap& surface,
                              double tau, DefectMetric metric) {
    DefectReport report;
    int nb = mesh.boundary_count();
    if (nb < 3) return report;
    bool closed = true;
    if (metric == DefectMetric::Angle) {
        // An unparameterized (free) node leaves NaN gaps; treat the
        // parameter line as non-wrapping when any parameter is missing.
        for (double t : surface.params)
            if (std::isnan(t)) closed = false;
    }
    std::vector<double> length(nb);
    for (int p = 0; p < nb; ++p)
        length[p] = pair_length(mesh, surface, p, metric, closed);
    for (int p = 0; p < nb; ++p) {
        double before = length[(p + nb - 1) % nb];
        double after = length[(p + 1) % nb];
        double reference = 0.5 * (before + after);
        if (!(length[p] > tau * reference)) continue;
        report.entries.push_back({p, boundary_triangle(mesh, p), length[p],
                                  reference, length[p] / reference});
    }
    return report;
}

int bisect_boundary_triangle(DiskMesh& mesh, SurfaceMap& surface,
                             int boundary_pos, const ContourRef& contour,
                             InsertionBudget& budget) {
    guard_budget(budget);
    int nb = mesh.boundary_count();
    int pos = ((boundary_pos % nb) + nb) % nb;
    int element = boundary_triangle(mesh, pos);
    EndpointInfo end = locate(mesh, element, pos);

    int w = insert_boundary_node(mesh, surface, pos, contour);
    mesh.elements[element] = {end.node_a, w, end.apex};
    mesh.elements.push_back({w, end.node_b, end.apex});
    rebuild_neighbours(mesh);
    ++budget.used;
    return w;
}

int regular_refine_boundary_triangle(DiskMesh& mesh, SurfaceMap& surface,
                                     int boundary_pos,
                                     const ContourRef& contour,
                                     InsertionBudget& budget) {
    guard_budget(budget);
    int nb = mesh.boundary_count();
    int pos = ((boundary_pos % nb) + nb) % nb;
    int element = boundary_triangle(mesh, pos);
    EndpointInfo end = locate(mesh, element, pos);
    if (decode_status(mesh, end.apex).role != NodeRole::Interior)
        throw ValidationError("regular refinement needs an interior apex at "
                              "boundary position " + std::to_string(pos));

    // Neighbours across the two interior edges, before any rewiring.
    const auto& tri = mesh.elements[element];
    int slot_a = -1, slot_b = -1;
    for (int j = 0; j < 3; ++j) {
        if (tri[j] == end.node_a) slot_a = j;
        if (tri[j] == end.node_b) slot_b = j;
    }
    int across_bc = mesh.neighbours[element][slot_a]; // edge (node_b, apex)
    int across_ca = mesh.neighbours[element][slot_b]; // edge (apex, node_a)
    if (across_bc == kBoundaryEdge || across_ca == kBoundaryEdge)
        throw ValidationError("interior edge of boundary element " +
                              std::to_string(element) + " has no neighbour");

    int w = insert_boundary_node(mesh, surface, pos, contour);

    auto midpoint_node = [&](int u, int v) {
        int id = mesh.node_count();
        mesh.nodes.push_back({0.5 * (mesh.nodes[u][0] + mesh.nodes[v][0]),
                              0.5 * (mesh.nodes[u][1] + mesh.nodes[v][1])});
        mesh.status.push_back(0);
        auto pu = surface.image(u);
        auto pv = surface.image(v);
        for (int k = 0; k < surface.dim; ++k)
            surface.images.push_back(0.5 * (pu[k] + pv[k]));
        return id;
    };
    int m1 = midpoint_node(end.node_b, end.apex);
    int m2 = midpoint_node(end.apex, end.node_a);

    mesh.elements[element] = {end.node_a, w, m2};
    mesh.elements.push_back({w, end.node_b, m1});
    mesh.elements.push_back({m2, m1, end.apex});
    mesh.elements.push_back({w, m1, m2});

    split_neighbour(mesh, across_bc, end.node_b, end.apex, m1);
    split_neighbour(mesh, across_ca, end.apex, end.node_a, m2);

    rebuild_neighbours(mesh);
    ++budget.used;
    return w;
}

int check_and_refine(RunState& state) {
    DiskMesh& mesh = state.mesh;
    DefectReport report = detect_defective(mesh, state.surface,
                                           state.config.tau,
                                           state.config.metric);
    if (report.empty()) return 0;

    struct Target {
        int node_a;
        int node_b;
    };
    std::vector<Target> targets;
    targets.reserve(report.entries.size());
    int nb = mesh.boundary_count();
    for (const auto& entry : report.entries)
        targets.push_back({mesh.boundary[entry.boundary_pos],
                           mesh.boundary[(entry.boundary_pos + 1) % nb]});

    const int pre_elements = mesh.element_count();
    std::set<int> touched; // slots rewritten by an earlier op this pass
    std::vector<int> fresh_nodes;
    bool capped = false;
    int inserted = 0;

    for (const auto& target : targets) {
        // Relocate the pair: earlier insertions shift boundary positions.
        int cur_nb = mesh.boundary_count();
        int pos = -1;
        for (int p = 0; p < cur_nb; ++p)
            if (mesh.boundary[p] == target.node_a) {
                pos = p;
                break;
            }
        if (pos < 0 || mesh.boundary[(pos + 1) % cur_nb] != target.node_b)
            continue; // pair no longer adjacent
        int element = boundary_triangle(mesh, pos);
        if (element >= pre_elements || touched.count(element))
            continue; // triangle already rewritten this pass
        if (state.budget.exhausted()) {
            capped = true;
            break;
        }
        touched.insert(element);
        int first_new = mesh.node_count();
        if (state.config.strategy == RefineStrategy::Regular) {
            EndpointInfo end = locate(mesh, element, pos);
            const auto& tri = mesh.elements[element];
            for (int j = 0; j < 3; ++j)
                if (tri[j] == end.node_a || tri[j] == end.node_b) {
                    int n = mesh.neighbours[element][j];
                    if (n != kBoundaryEdge) touched.insert(n);
                }
            regular_refine_boundary_triangle(mesh, state.surface, pos,
                                             state.contour, state.budget);
        } else {
            bisect_boundary_triangle(mesh, state.surface, pos, state.contour,
                                     state.budget);
        }
        ++inserted;
        for (int id = first_new; id < mesh.node_count(); ++id)
            fresh_nodes.push_back(id);
    }

    if (inserted > 0) {
        state.stiffness = assemble(mesh);
        // Settle each new node once so the insertion itself never leaves
        // the energy above its pre-refinement value.
        for (int id : fresh_nodes) relax_node(state, id);
    }
    if (capped)
        throw InsertionCapReached("insertion cap of " +
                                  std::to_string(state.budget.cap) +
                                  " reached with defective edges remaining");
    return inserted;
}

} // namespace minsurf
