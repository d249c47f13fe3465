#include "minsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace minsurf {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDegenerateArea = 1e-14;

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
}
} // namespace

double signed_area2(const std::array<double, 2>& a,
                    const std::array<double, 2>& b,
                    const std::array<double, 2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

double mesh_area(const DiskMesh& mesh) {
    double acc = 0.0, comp = 0.0; // Kahan
    for (const auto& e : mesh.elements) {
        double a = 0.5 * signed_area2(mesh.nodes[e[0]], mesh.nodes[e[1]],
                                      mesh.nodes[e[2]]);
        double y = a - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

// ---- status codes ------------------------------------------------------

NodeStatus decode_status(const DiskMesh& mesh, int node) {
    int s = mesh.status[node];
    int nb = mesh.boundary_count();
    if (s == 0) return {NodeRole::Interior, -1};
    if (s < 0) return {NodeRole::Fixed, -s - 1};
    if (s <= nb) return {NodeRole::Boundary, s - 1};
    return {NodeRole::Free, s - nb - 1};
}

int encode_status(NodeRole role, int boundary_pos, int boundary_count) {
    switch (role) {
        case NodeRole::Interior: return 0;
        case NodeRole::Boundary: return boundary_pos + 1;
        case NodeRole::Fixed: return -(boundary_pos + 1);
        case NodeRole::Free: return boundary_pos + 1 + boundary_count;
    }
    return 0;
}

// ---- generation --------------------------------------------------------

DiskMesh generate_disk_mesh(TriangulationPreset preset) {
    int n = preset.ring_count;
    if (n < 1) throw ValidationError("ring count must be >= 1");

    DiskMesh mesh;
    mesh.nodes.push_back({0.0, 0.0});
    std::vector<int> ring_start(n + 1, 0); // first node id of ring k
    for (int k = 1; k <= n; ++k) {
        ring_start[k] = mesh.node_count();
        int count = 6 * k;
        double radius = static_cast<double>(k) / n;
        for (int j = 0; j < count; ++j) {
            double angle = kTwoPi * j / count;
            mesh.nodes.push_back(
                {radius * std::cos(angle), radius * std::sin(angle)});
        }
    }

    // Fan around the center.
    for (int j = 0; j < 6; ++j)
        mesh.elements.push_back(
            {0, ring_start[1] + j, ring_start[1] + (j + 1) % 6});

    // Annular strips: zip ring k (inner, m nodes) with ring k+1 (outer,
    // n_out nodes), advancing whichever ring's next node comes first in
    // angle.  The comparison (j+1)*m <= (i+1)*n_out is exact.
    for (int k = 1; k < n; ++k) {
        int m = 6 * k;
        int n_out = 6 * (k + 1);
        const int inner = ring_start[k];
        const int outer = ring_start[k + 1];
        int i = 0, j = 0;
        while (i < m || j < n_out) {
            bool take_outer =
                j < n_out &&
                (i == m || static_cast<int64_t>(j + 1) * m <=
                               static_cast<int64_t>(i + 1) * n_out);
            if (take_outer) {
                mesh.elements.push_back({outer + j, outer + (j + 1) % n_out,
                                         inner + i % m});
                ++j;
            } else {
                mesh.elements.push_back(
                    {outer + j % n_out, inner + (i + 1) % m, inner + i % m});
                ++i;
            }
        }
    }

    int nb = 6 * n;
    mesh.boundary.resize(nb);
    for (int j = 0; j < nb; ++j) mesh.boundary[j] = ring_start[n] + j;

    mesh.status.assign(mesh.node_count(), 0);
    for (int p = 0; p < nb; ++p)
        mesh.status[mesh.boundary[p]] =
            encode_status(NodeRole::Boundary, p, nb);

    rebuild_neighbours(mesh);
    return mesh;
}

// ---- neighbours --------------------------------------------------------

void rebuild_neighbours(DiskMesh& mesh) {
    // edge -> up to two (element, slot) incidences
    std::unordered_map<uint64_t, std::array<int, 4>> edges;
    edges.reserve(mesh.elements.size() * 2);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& tri = mesh.elements[e];
        for (int j = 0; j < 3; ++j) {
            uint64_t key = edge_key(tri[(j + 1) % 3], tri[(j + 2) % 3]);
            auto [it, fresh] = edges.try_emplace(key,
                                                 std::array<int, 4>{-1, -1, -1, -1});
            auto& rec = it->second;
            if (fresh) {
                rec[0] = e;
                rec[1] = j;
            } else if (rec[2] < 0) {
                rec[2] = e;
                rec[3] = j;
            } else {
                throw ValidationError("edge shared by more than two elements");
            }
        }
    }
    mesh.neighbours.assign(mesh.element_count(),
                           {kBoundaryEdge, kBoundaryEdge, kBoundaryEdge});
    for (const auto& [key, rec] : edges) {
        (void)key;
        if (rec[2] < 0) continue;
        mesh.neighbours[rec[0]][rec[1]] = rec[2];
        mesh.neighbours[rec[2]][rec[3]] = rec[0];
    }
}

// ---- boundary triangle lookup -------------------------------------------

int boundary_triangle(const DiskMesh& mesh, int boundary_pos) {
    int nb = mesh.boundary_count();
    if (nb == 0) throw NoSuchElement("mesh has no boundary");
    int p = ((boundary_pos % nb) + nb) % nb;
    int a = mesh.boundary[p];
    int b = mesh.boundary[(p + 1) % nb];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& tri = mesh.elements[e];
        bool has_a = tri[0] == a || tri[1] == a || tri[2] == a;
        bool has_b = tri[0] == b || tri[1] == b || tri[2] == b;
        if (has_a && has_b) return e;
    }
    throw NoSuchElement("no element contains boundary edge at position " +
                        std::to_string(p));
}

// ---- validation ----------------------------------------------------------

std::string MeshDiagnostics::summary() const {
    static const char* names[] = {
        "orientation",        "edge-manifold",     "edge-direction",
        "neighbour-mismatch", "boundary-cycle",    "boundary-off-circle",
        "node-outside-disk",  "status-invalid",    "hanging-node",
        "coverage"};
    std::ostringstream out;
    for (const auto& v : violations) {
        out << names[static_cast<int>(v.kind)];
        if (v.element >= 0) out << " element " << v.element;
        if (v.node >= 0) out << " node " << v.node;
        out << " (measured " << v.measured << ")\n";
    }
    return out.str();
}

MeshDiagnostics validate_mesh(const DiskMesh& mesh) {
    MeshDiagnostics diag;
    auto flag = [&](MeshViolation::Kind kind, int element, int node,
                    double measured) {
        diag.violations.push_back({kind, element, node, measured});
    };

    const int nn = mesh.node_count();
    const int ne = mesh.element_count();
    const int nb = mesh.boundary_count();

    // Basic shape of the arrays.
    if (static_cast<int>(mesh.status.size()) != nn)
        flag(MeshViolation::Kind::StatusInvalid, -1, -1,
             static_cast<double>(mesh.status.size()));
    if (static_cast<int>(mesh.neighbours.size()) != ne)
        flag(MeshViolation::Kind::NeighbourMismatch, -1, -1,
             static_cast<double>(mesh.neighbours.size()));
    for (int e = 0; e < ne; ++e)
        for (int v : mesh.elements[e])
            if (v < 0 || v >= nn) {
                flag(MeshViolation::Kind::NeighbourMismatch, e, v, 0.0);
                return diag; // indices unusable; stop here
            }

    // Element orientation / degeneracy.
    bool orientation_ok = true;
    for (int e = 0; e < ne; ++e) {
        const auto& tri = mesh.elements[e];
        double area = 0.5 * signed_area2(mesh.nodes[tri[0]],
                                         mesh.nodes[tri[1]],
                                         mesh.nodes[tri[2]]);
        if (!(area > kDegenerateArea)) {
            flag(MeshViolation::Kind::Orientation, e, -1, area);
            orientation_ok = false;
        }
    }

    // Edge incidence map.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
    for (int e = 0; e < ne; ++e) {
        const auto& tri = mesh.elements[e];
        for (int j = 0; j < 3; ++j) {
            int a = tri[(j + 1) % 3], b = tri[(j + 2) % 3];
            edges[{std::min(a, b), std::max(a, b)}].push_back({e, j});
        }
    }
    for (const auto& [key, inc] : edges) {
        if (inc.size() > 2)
            flag(MeshViolation::Kind::EdgeManifold, inc[2].first, key.first,
                 static_cast<double>(inc.size()));
        if (inc.size() == 2 && orientation_ok) {
            // The two elements must traverse the shared edge in opposite
            // directions.  Suppressed while orientation is broken: a flipped
            // element already explains the direction clash.
            auto dir = [&](std::pair<int, int> slot) {
                const auto& tri = mesh.elements[slot.first];
                int a = tri[(slot.second + 1) % 3];
                return a == key.first;
            };
            if (dir(inc[0]) == dir(inc[1]))
                flag(MeshViolation::Kind::EdgeDirection, inc[0].first,
                     key.first, 0.0);
        }
    }

    // Neighbour table against the edge map.
    if (static_cast<int>(mesh.neighbours.size()) == ne) {
        for (int e = 0; e < ne; ++e) {
            const auto& tri = mesh.elements[e];
            for (int j = 0; j < 3; ++j) {
                int a = tri[(j + 1) % 3], b = tri[(j + 2) % 3];
                const auto& inc = edges[{std::min(a, b), std::max(a, b)}];
                int expected = kBoundaryEdge;
                if (inc.size() == 2)
                    expected = inc[0].first == e ? inc[1].first : inc[0].first;
                if (mesh.neighbours[e][j] != expected)
                    flag(MeshViolation::Kind::NeighbourMismatch, e, -1,
                         static_cast<double>(mesh.neighbours[e][j]));
            }
        }
    }

    // Nodes inside the closed disk; boundary nodes on the unit circle.
    for (int v = 0; v < nn; ++v) {
        double r = std::hypot(mesh.nodes[v][0], mesh.nodes[v][1]);
        if (r > 1.0 + 1e-12)
            flag(MeshViolation::Kind::NodeOutsideDisk, -1, v, r);
    }
    for (int v : mesh.boundary) {
        if (v < 0 || v >= nn) {
            flag(MeshViolation::Kind::BoundaryCycle, -1, v, 0.0);
            return diag;
        }
        double r = std::hypot(mesh.nodes[v][0], mesh.nodes[v][1]);
        if (std::abs(r - 1.0) > 1e-12)
            flag(MeshViolation::Kind::BoundaryOffCircle, -1, v, r - 1.0);
    }

    // Boundary edges (single incidence) must be exactly the cyclic pairs of
    // `boundary`, each traversed so the owning element lies to the left
    // (counterclockwise walk).
    {
        int boundary_edge_count = 0;
        for (const auto& [key, inc] : edges)
            if (inc.size() == 1) ++boundary_edge_count;
        if (boundary_edge_count != nb)
            flag(MeshViolation::Kind::BoundaryCycle, -1, -1,
                 static_cast<double>(boundary_edge_count));
        std::vector<int> seen(nn, 0);
        bool cycle_ok = true;
        for (int p = 0; p < nb; ++p) {
            int a = mesh.boundary[p];
            int b = mesh.boundary[(p + 1) % nb];
            if (++seen[a] > 1) {
                flag(MeshViolation::Kind::BoundaryCycle, -1, a, 1.0);
                cycle_ok = false;
                continue;
            }
            auto it = edges.find({std::min(a, b), std::max(a, b)});
            if (it == edges.end() || it->second.size() != 1) {
                flag(MeshViolation::Kind::BoundaryCycle, -1, a, 2.0);
                cycle_ok = false;
                continue;
            }
            // Directed edge (a, b) must appear in the element's cyclic
            // vertex order for a counterclockwise boundary walk.
            const auto& tri = mesh.elements[it->second[0].first];
            bool forward = false;
            for (int j = 0; j < 3; ++j)
                if (tri[j] == a && tri[(j + 1) % 3] == b) forward = true;
            if (!forward) {
                flag(MeshViolation::Kind::BoundaryCycle, it->second[0].first,
                     a, 3.0);
                cycle_ok = false;
            }
        }
        (void)cycle_ok;
    }

    // Status semantics.
    if (static_cast<int>(mesh.status.size()) == nn) {
        for (int v = 0; v < nn; ++v) {
            int s = mesh.status[v];
            int pos = -1;
            if (s != 0) {
                int b = s < 0 ? -s : (s > nb ? s - nb : s);
                pos = b - 1;
                if (pos < 0 || pos >= nb || mesh.boundary[pos] != v) {
                    flag(MeshViolation::Kind::StatusInvalid, -1, v,
                         static_cast<double>(s));
                    continue;
                }
                if (s > 2 * nb)
                    flag(MeshViolation::Kind::StatusInvalid, -1, v,
                         static_cast<double>(s));
            } else {
                // Interior status for a node listed on the boundary?
                // (checked below via the boundary loop)
            }
        }
        std::vector<char> on_boundary(nn, 0);
        for (int v : mesh.boundary) on_boundary[v] = 1;
        for (int v = 0; v < nn; ++v)
            if (on_boundary[v] && mesh.status[v] == 0)
                flag(MeshViolation::Kind::StatusInvalid, -1, v, 0.0);
    }

    // Hanging nodes: a node lying strictly inside another element's edge.
    {
        constexpr double kOnEdge = 1e-12;
        for (const auto& [key, inc] : edges) {
            const auto [a, b] = key;
            const auto& pa = mesh.nodes[a];
            const auto& pb = mesh.nodes[b];
            double ex = pb[0] - pa[0], ey = pb[1] - pa[1];
            double len2 = ex * ex + ey * ey;
            if (len2 == 0.0) continue;
            for (int v = 0; v < nn; ++v) {
                if (v == a || v == b) continue;
                double px = mesh.nodes[v][0] - pa[0];
                double py = mesh.nodes[v][1] - pa[1];
                double s = (px * ex + py * ey) / len2;
                if (s <= 1e-9 || s >= 1.0 - 1e-9) continue;
                double dx = px - s * ex, dy = py - s * ey;
                if (dx * dx + dy * dy < kOnEdge * kOnEdge)
                    flag(MeshViolation::Kind::HangingNode, inc[0].first, v,
                         std::sqrt(dx * dx + dy * dy));
            }
        }
    }

    // Element areas must tile the polygon traced by the boundary cycle.
    if (orientation_ok && nb >= 3) {
        double poly2 = 0.0;
        for (int p = 0; p < nb; ++p) {
            const auto& a = mesh.nodes[mesh.boundary[p]];
            const auto& b = mesh.nodes[mesh.boundary[(p + 1) % nb]];
            poly2 += a[0] * b[1] - b[0] * a[1];
        }
        double poly_area = 0.5 * poly2;
        double total = mesh_area(mesh);
        if (std::abs(total - poly_area) > 1e-10 * std::max(1.0, poly_area))
            flag(MeshViolation::Kind::Coverage, -1, -1, total - poly_area);
    }

    return diag;
}

// ---- text format ---------------------------------------------------------

void save_mesh(const DiskMesh& mesh, std::ostream& out) {
    char buf[64];
    out << "nodes " << mesh.node_count() << "\n";
    for (const auto& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p[0], p[1]);
        out << buf;
    }
    out << "elements " << mesh.element_count() << "\n";
    for (const auto& e : mesh.elements)
        out << e[0] + 1 << " " << e[1] + 1 << " " << e[2] + 1 << "\n";
    out << "boundary " << mesh.boundary_count() << "\n";
    for (int i = 0; i < mesh.boundary_count(); ++i)
        out << mesh.boundary[i] + 1 << (i + 1 == mesh.boundary_count() ? "\n" : " ");
    out << "status " << mesh.status.size() << "\n";
    for (size_t i = 0; i < mesh.status.size(); ++i)
        out << mesh.status[i] << (i + 1 == mesh.status.size() ? "\n" : " ");
    out << "neighbours " << mesh.element_count() << "\n";
    for (const auto& nb : mesh.neighbours) {
        for (int j = 0; j < 3; ++j) {
            int v = nb[j] == kBoundaryEdge ? -1 : nb[j] + 1;
            out << v << (j == 2 ? "\n" : " ");
        }
    }
}

void save_mesh_file(const DiskMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_mesh(mesh, out);
    if (!out) throw IoError("failed writing '" + path + "'");
}

namespace {

struct TokenReader {
    std::istream& in;
    int line = 1;

    bool next(std::string& tok) {
        tok.clear();
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '\n') ++line;
            if (!std::isspace(c)) break;
        }
        if (c == EOF) return false;
        tok.push_back(static_cast<char>(c));
        while ((c = in.get()) != EOF && !std::isspace(c))
            tok.push_back(static_cast<char>(c));
        if (c == '\n') ++line;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("mesh file line " + std::to_string(line) + ": " + msg);
    }

    long integer() {
        std::string tok;
        if (!next(tok)) fail("unexpected end of file");
        size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            fail("expected integer, got '" + tok + "'");
        }
        if (used != tok.size()) fail("expected integer, got '" + tok + "'");
        return v;
    }

    double real() {
        std::string tok;
        if (!next(tok)) fail("unexpected end of file");
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            fail("expected number, got '" + tok + "'");
        }
        if (used != tok.size()) fail("expected number, got '" + tok + "'");
        return v;
    }
};

} // namespace

DiskMesh load_mesh(std::istream& in) {
    TokenReader r{in};
    DiskMesh mesh;
    std::string section;
    bool have_nodes = false, have_elements = false, have_boundary = false,
         have_status = false, have_neighbours = false;

    while (r.next(section)) {
        long count = r.integer();
        if (count < 0) r.fail("negative section count");
        if (section == "nodes") {
            have_nodes = true;
            mesh.nodes.resize(count);
            for (auto& p : mesh.nodes) {
                p[0] = r.real();
                p[1] = r.real();
            }
        } else if (section == "elements") {
            have_elements = true;
            mesh.elements.resize(count);
            for (auto& e : mesh.elements)
                for (int j = 0; j < 3; ++j) {
                    long v = r.integer();
                    if (v < 1 || v > static_cast<long>(mesh.nodes.size()))
                        r.fail("element node index out of range");
                    e[j] = static_cast<int>(v - 1);
                }
        } else if (section == "boundary") {
            have_boundary = true;
            mesh.boundary.resize(count);
            for (auto& v : mesh.boundary) {
                long b = r.integer();
                if (b < 1 || b > static_cast<long>(mesh.nodes.size()))
                    r.fail("boundary node index out of range");
                v = static_cast<int>(b - 1);
            }
        } else if (section == "status") {
            have_status = true;
            mesh.status.resize(count);
            for (auto& s : mesh.status) s = static_cast<int>(r.integer());
        } else if (section == "neighbours") {
            have_neighbours = true;
            mesh.neighbours.resize(count);
            for (auto& nb : mesh.neighbours)
                for (int j = 0; j < 3; ++j) {
                    long v = r.integer();
                    if (v == -1) {
                        nb[j] = kBoundaryEdge;
                    } else if (v < 1 || v > count) {
                        r.fail("neighbour element index out of range");
                    } else {
                        nb[j] = static_cast<int>(v - 1);
                    }
                }
        } else {
            r.fail("unknown section '" + section + "'");
        }
    }
    if (!have_nodes || !have_elements || !have_boundary || !have_status ||
        !have_neighbours)
        throw ParseError("mesh file: missing section");
    return mesh;
}

DiskMesh load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_mesh(in);
}

} // namespace minsurf
