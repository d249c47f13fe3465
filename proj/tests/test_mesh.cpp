#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace minsurf;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

// Node/element counts of the concentric-ring construction.
int ring_nodes(int n) { return 1 + 3 * n * (n + 1); }
int ring_elements(int n) { return 6 * n * n; }
} // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("ring meshes have the closed-form node and element counts") {
    for (int n : {1, 2, 3, 5, 8, 11}) {
        DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(n));
        CAPTURE(n);
        CHECK(mesh.node_count() == ring_nodes(n));
        CHECK(mesh.element_count() == ring_elements(n));
        CHECK(mesh.boundary_count() == 6 * n);
        CHECK(validate_mesh(mesh).empty());
    }

    DiskMesh t1 = generate_disk_mesh(TriangulationPreset::t1());
    CHECK(t1.node_count() == 217);
    CHECK(t1.boundary_count() == 48);
    CHECK(t1.node_count() - t1.boundary_count() == 169);

    DiskMesh t2 = generate_disk_mesh(TriangulationPreset::t2());
    CHECK(t2.node_count() == 397);
    CHECK(t2.boundary_count() == 66);
    CHECK(t2.node_count() - t2.boundary_count() == 331);
}

TEST_CASE("generation is deterministic") {
    DiskMesh a = generate_disk_mesh(TriangulationPreset::rings(3));
    DiskMesh b = generate_disk_mesh(TriangulationPreset::rings(3));
    CHECK(a.elements == b.elements);
    CHECK(a.boundary == b.boundary);
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("signed areas and the mesh area match the inscribed polygon") {
    CHECK(signed_area2({0, 0}, {1, 0}, {0, 1}) == 1.0);
    CHECK(signed_area2({0, 0}, {0, 1}, {1, 0}) == -1.0);

    for (int n : {2, 4, 8}) {
        DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(n));
        // A regular m-gon inscribed in the unit circle has area
        // (m/2) sin(2 pi / m).
        int m = 6 * n;
        double polygon = 0.5 * m * std::sin(2.0 * kPi / m);
        CHECK(mesh_area(mesh) == doctest::Approx(polygon).epsilon(1e-12));
    }
}

TEST_CASE("status codes round-trip through every role") {
    int nb = 48;
    CHECK(encode_status(NodeRole::Interior, -1, nb) == 0);
    CHECK(encode_status(NodeRole::Boundary, 0, nb) == 1);
    CHECK(encode_status(NodeRole::Boundary, 47, nb) == 48);
    CHECK(encode_status(NodeRole::Fixed, 0, nb) == -1);
    CHECK(encode_status(NodeRole::Fixed, 12, nb) == -13);
    CHECK(encode_status(NodeRole::Free, 0, nb) == 49);
    CHECK(encode_status(NodeRole::Free, 47, nb) == 96);

    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(2));
    int node = mesh.boundary[3];
    for (NodeRole role :
         {NodeRole::Boundary, NodeRole::Fixed, NodeRole::Free}) {
        mesh.status[node] = encode_status(role, 3, mesh.boundary_count());
        NodeStatus st = decode_status(mesh, node);
        CHECK(st.role == role);
        CHECK(st.boundary_pos == 3);
    }
    mesh.status[0] = 0;
    CHECK(decode_status(mesh, 0).role == NodeRole::Interior);
    CHECK(decode_status(mesh, 0).boundary_pos == -1);
}

TEST_CASE("neighbour tables are symmetric with boundary edges marked") {
    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::t1());
    int boundary_edges = 0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (int j = 0; j < 3; ++j) {
            int f = mesh.neighbours[e][j];
            if (f == kBoundaryEdge) {
                ++boundary_edges;
                continue;
            }
            bool back = false;
            for (int i = 0; i < 3; ++i) back |= mesh.neighbours[f][i] == e;
            CHECK(back);
        }
    }
    CHECK(boundary_edges == mesh.boundary_count());
}

TEST_CASE("boundary_triangle finds the unique owner of each boundary edge") {
    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(4));
    int nb = mesh.boundary_count();
    for (int p = 0; p < nb; ++p) {
        int e = boundary_triangle(mesh, p);
        int a = mesh.boundary[p];
        int b = mesh.boundary[(p + 1) % nb];
        const auto& tri = mesh.elements[e];
        bool has_a = false, has_b = false;
        for (int v : tri) {
            has_a |= v == a;
            has_b |= v == b;
        }
        CHECK(has_a);
        CHECK(has_b);
    }
    // Wrapping position behaves like position 0 shifted.
    CHECK(boundary_triangle(mesh, nb) == boundary_triangle(mesh, 0));
    CHECK(boundary_triangle(mesh, -1) == boundary_triangle(mesh, nb - 1));
}

TEST_CASE("validation flags broken meshes and passes good ones") {
    DiskMesh good = generate_disk_mesh(TriangulationPreset::rings(3));
    REQUIRE(validate_mesh(good).empty());

    SUBCASE("flipped element orientation") {
        DiskMesh mesh = good;
        std::swap(mesh.elements[5][0], mesh.elements[5][1]);
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("boundary node pushed off the circle") {
        DiskMesh mesh = good;
        mesh.nodes[mesh.boundary[2]][0] *= 1.01;
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("node outside the disk") {
        DiskMesh mesh = good;
        mesh.nodes[0] = {1.5, 1.5};
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("status points at the wrong boundary slot") {
        DiskMesh mesh = good;
        mesh.status[mesh.boundary[0]] =
            encode_status(NodeRole::Boundary, 1, mesh.boundary_count());
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("interior node claiming a boundary status") {
        DiskMesh mesh = good;
        mesh.status[0] = encode_status(NodeRole::Boundary, 0,
                                       mesh.boundary_count());
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("stale neighbour entry") {
        DiskMesh mesh = good;
        mesh.neighbours[0][0] = 3;
        mesh.neighbours[0][1] = 3;
        mesh.neighbours[0][2] = 3;
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("boundary array out of cyclic order") {
        DiskMesh mesh = good;
        std::swap(mesh.boundary[0], mesh.boundary[1]);
        // Keep statuses consistent with the swapped array so only the
        // cycle check can complain.
        mesh.status[mesh.boundary[0]] =
            encode_status(NodeRole::Boundary, 0, mesh.boundary_count());
        mesh.status[mesh.boundary[1]] =
            encode_status(NodeRole::Boundary, 1, mesh.boundary_count());
        CHECK_FALSE(validate_mesh(mesh).empty());
    }
    SUBCASE("summary names each violation") {
        DiskMesh mesh = good;
        mesh.nodes[0] = {1.5, 1.5};
        MeshDiagnostics report = validate_mesh(mesh);
        REQUIRE_FALSE(report.empty());
        CHECK_FALSE(report.summary().empty());
    }
}

TEST_CASE("meshes survive a save/load round trip bit for bit") {
    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(3));
    std::stringstream buffer;
    save_mesh(mesh, buffer);
    DiskMesh loaded = load_mesh(buffer);
    CHECK(loaded.nodes == mesh.nodes);
    CHECK(loaded.elements == mesh.elements);
    CHECK(loaded.boundary == mesh.boundary);
    CHECK(loaded.status == mesh.status);
    CHECK(loaded.neighbours == mesh.neighbours);
    CHECK(validate_mesh(loaded).empty());
}

TEST_CASE("the loader rejects malformed text with a line number") {
    auto expect_parse_error = [](const std::string& text) {
        std::stringstream in(text);
        CHECK_THROWS_AS(load_mesh(in), ParseError);
    };
    expect_parse_error("");
    expect_parse_error("nodes\n2\n0 0\n");          // truncated node list
    expect_parse_error("nodes\nbanana\n");           // not a count
    expect_parse_error("nodes\n1\n0 0\nelements\n1\n1 2 9\n"); // bad index

    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(1));
    std::stringstream buffer;
    save_mesh(mesh, buffer);
    std::string text = buffer.str();
    // Cut the file in half: the loader must not accept missing sections.
    std::stringstream half(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(load_mesh(half), ParseError);

    try {
        std::stringstream in("nodes\nbanana\n");
        load_mesh(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("mesh files round-trip through disk") {
    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(2));
    std::string path = "round_trip_mesh.txt";
    save_mesh_file(mesh, path);
    DiskMesh loaded = load_mesh_file(path);
    CHECK(loaded.nodes == mesh.nodes);
    CHECK(loaded.elements == mesh.elements);
    CHECK_THROWS_AS(load_mesh_file("no_such_mesh_file.txt"), IoError);
    std::remove(path.c_str());
}

TEST_CASE("rebuild_neighbours restores the table after edits") {
    DiskMesh mesh = generate_disk_mesh(TriangulationPreset::rings(2));
    auto expected = mesh.neighbours;
    for (auto& row : mesh.neighbours) row = {-7, -7, -7};
    rebuild_neighbours(mesh);
    CHECK(mesh.neighbours == expected);
}

TEST_SUITE_END();
