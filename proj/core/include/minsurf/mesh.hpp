#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

// Neighbour slot value for an edge on the mesh boundary.
constexpr int kBoundaryEdge = -1;

// Triangulation of the unit disk.
//
//  nodes       parameter-domain coordinates (u, v), u^2 + v^2 <= 1
//  elements    vertex index triples, counterclockwise
//  boundary    boundary node indices in counterclockwise cyclic order
//  status      per node: 0 interior; b for the b-th boundary node
//              (1-based); -b when that boundary node is fixed;
//              b + boundary count when it is free to slide on a plane
//  neighbours  per element: neighbours[e][j] is the element sharing the
//              edge opposite vertex j, or kBoundaryEdge
struct DiskMesh {
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> elements;
    std::vector<int> boundary;
    std::vector<int> status;
    std::vector<std::array<int, 3>> neighbours;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }
    int boundary_count() const { return static_cast<int>(boundary.size()); }
};

enum class NodeRole { Interior, Boundary, Fixed, Free };

struct NodeStatus {
    NodeRole role = NodeRole::Interior;
    int boundary_pos = -1; // 0-based position in `boundary`, -1 for interior
};

// Decode / encode the paper-style status codes.  encode_status takes the
// 0-based boundary position (ignored for Interior).
NodeStatus decode_status(const DiskMesh& mesh, int node);
int encode_status(NodeRole role, int boundary_pos, int boundary_count);

// Concentric-ring triangulation presets.  T1 and T2 are the 8- and 11-ring
// meshes (169/331 interior, 48/66 boundary nodes).
struct TriangulationPreset {
    int ring_count = 8;

    static TriangulationPreset t1() { return {8}; }
    static TriangulationPreset t2() { return {11}; }
    static TriangulationPreset rings(int n) { return {n}; }
};

DiskMesh generate_disk_mesh(TriangulationPreset preset);

// Mesh validation. An empty report certifies the DiskMesh invariants.
struct MeshViolation {
    enum class Kind {
        Orientation,      // non-positive (or degenerate) element area
        EdgeManifold,     // an edge used by more than two elements
        EdgeDirection,    // interior edge traversed twice the same way
        NeighbourMismatch,
        BoundaryCycle,    // boundary array disagrees with the edge cycle
        BoundaryOffCircle,
        NodeOutsideDisk,
        StatusInvalid,
        HangingNode,      // node in the interior of another element's edge
        Coverage,         // element areas do not tile the boundary polygon
    };
    Kind kind;
    int element = -1;
    int node = -1;
    double measured = 0.0;
};

struct MeshDiagnostics {
    std::vector<MeshViolation> violations;

    bool empty() const { return violations.empty(); }
    std::string summary() const;
};

MeshDiagnostics validate_mesh(const DiskMesh& mesh);

// The unique element owning the boundary edge
// (boundary[i], boundary[i+1]); i is 0-based and wraps cyclically.
// Throws NoSuchElement if the mesh has no such element.
int boundary_triangle(const DiskMesh& mesh, int boundary_pos);

// Recompute `neighbours` from `elements`.
void rebuild_neighbours(DiskMesh& mesh);

// Twice the signed area of triangle (a, b, c).
double signed_area2(const std::array<double, 2>& a,
                    const std::array<double, 2>& b,
                    const std::array<double, 2>& c);

// Sum of element areas.
double mesh_area(const DiskMesh& mesh);

// Plain-text mesh format: one section per array ("nodes", "elements",
// "boundary", "status", "neighbours"), whitespace separated, node and
// element indices 1-based, boundary sentinel -1.
void save_mesh(const DiskMesh& mesh, std::ostream& out);
void save_mesh_file(const DiskMesh& mesh, const std::string& path);
DiskMesh load_mesh(std::istream& in);
DiskMesh load_mesh_file(const std::string& path);

} // namespace minsurf
