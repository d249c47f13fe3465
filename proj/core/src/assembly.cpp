#include "minsurf/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace minsurf {

namespace {
constexpr double kDegenerateArea = 1e-14;

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};
} // namespace

void StiffnessMatrix::add(int i, int j, double v) {
    rows_[i].push_back({j, v});
}

void StiffnessMatrix::finalize() {
    for (auto& row : rows_) {
        std::sort(row.begin(), row.end(),
                  [](const StiffnessEntry& a, const StiffnessEntry& b) {
                      return a.col < b.col;
                  });
        size_t out = 0;
        for (size_t k = 0; k < row.size(); ++k) {
            if (out > 0 && row[out - 1].col == row[k].col)
                row[out - 1].value += row[k].value;
            else
                row[out++] = row[k];
        }
        row.resize(out);
    }
}

double StiffnessMatrix::diagonal(int i) const { return coefficient(i, i); }

double StiffnessMatrix::coefficient(int i, int j) const {
    const auto& row = rows_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const StiffnessEntry& e, int col) {
                                   return e.col < col;
                               });
    if (it != row.end() && it->col == j) return it->value;
    return 0.0;
}

std::array<std::array<double, 3>, 3>
element_stiffness(const std::array<double, 2>& p1,
                  const std::array<double, 2>& p2,
                  const std::array<double, 2>& p3) {
    double area2 = signed_area2(p1, p2, p3);
    if (!(0.5 * area2 > kDegenerateArea))
        throw DegenerateTriangle("triangle area " + std::to_string(0.5 * area2));
    std::array<std::array<double, 2>, 3> e = {{
        {p3[0] - p2[0], p3[1] - p2[1]},
        {p1[0] - p3[0], p1[1] - p3[1]},
        {p2[0] - p1[0], p2[1] - p1[1]},
    }};
    std::array<std::array<double, 3>, 3> k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k[i][j] = (e[i][0] * e[j][0] + e[i][1] * e[j][1]) / (2.0 * area2);
    return k;
}

StiffnessMatrix assemble(const DiskMesh& mesh) {
    StiffnessMatrix matrix(mesh.node_count());
    for (int t = 0; t < mesh.element_count(); ++t) {
        const auto& tri = mesh.elements[t];
        std::array<std::array<double, 3>, 3> k;
        try {
            k = element_stiffness(mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                                  mesh.nodes[tri[2]]);
        } catch (const DegenerateTriangle&) {
            throw DegenerateTriangle("element " + std::to_string(t) +
                                     " is degenerate");
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                matrix.add(tri[i], tri[j], k[i][j]);
    }
    matrix.finalize();
    return matrix;
}

double dirichlet_energy(const StiffnessMatrix& matrix,
                        const DiskMesh& mesh,
                        const SurfaceMap& surface) {
    int n = mesh.node_count();
    if (matrix.size() != n)
        throw DimensionMismatch("stiffness matrix size " +
                                std::to_string(matrix.size()) + " vs " +
                                std::to_string(n) + " nodes");
    if (static_cast<int>(surface.images.size()) != n * surface.dim)
        throw DimensionMismatch("surface image array has " +
                                std::to_string(surface.images.size()) +
                                " values, expected " +
                                std::to_string(n * surface.dim));
    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        auto ai = surface.image(i);
        for (const auto& entry : matrix.row(i)) {
            auto aj = surface.image(entry.col);
            double dot = 0.0;
            for (int k = 0; k < surface.dim; ++k) dot += ai[k] * aj[k];
            acc.add(entry.value * dot);
        }
    }
    return 0.5 * acc.sum;
}

EnergyReport area_and_conformality(const DiskMesh& mesh,
                                   const SurfaceMap& surface) {
    if (static_cast<int>(surface.images.size()) !=
        mesh.node_count() * surface.dim)
        throw DimensionMismatch("surface image array has " +
                                std::to_string(surface.images.size()) +
                                " values, expected " +
                                std::to_string(mesh.node_count() * surface.dim));
    const int dim = surface.dim;
    KahanSum dirichlet, area, deficit;
    std::vector<double> phi_u(dim), phi_v(dim);
    for (int t = 0; t < mesh.element_count(); ++t) {
        const auto& tri = mesh.elements[t];
        const auto& p0 = mesh.nodes[tri[0]];
        const auto& p1 = mesh.nodes[tri[1]];
        const auto& p2 = mesh.nodes[tri[2]];
        double area2 = signed_area2(p0, p1, p2);
        if (!(0.5 * area2 > kDegenerateArea))
            throw DegenerateTriangle("element " + std::to_string(t) +
                                     " is degenerate");
        // Barycentric gradients: grad l_i is the inward rotation of the
        // opposite edge divided by twice the area.
        std::array<std::array<double, 2>, 3> g = {{
            {(p1[1] - p2[1]) / area2, (p2[0] - p1[0]) / area2},
            {(p2[1] - p0[1]) / area2, (p0[0] - p2[0]) / area2},
            {(p0[1] - p1[1]) / area2, (p1[0] - p0[0]) / area2},
        }};
        std::fill(phi_u.begin(), phi_u.end(), 0.0);
        std::fill(phi_v.begin(), phi_v.end(), 0.0);
        for (int i = 0; i < 3; ++i) {
            auto a = surface.image(tri[i]);
            for (int k = 0; k < dim; ++k) {
                phi_u[k] += a[k] * g[i][0];
                phi_v[k] += a[k] * g[i][1];
            }
        }
        double a = 0.0, b = 0.0, c = 0.0;
        for (int k = 0; k < dim; ++k) {
            a += phi_u[k] * phi_u[k];
            b += phi_v[k] * phi_v[k];
            c += phi_u[k] * phi_v[k];
        }
        double dom_area = 0.5 * area2;
        dirichlet.add(0.5 * (a + b) * dom_area);
        area.add(std::sqrt(std::max(a * b - c * c, 0.0)) * dom_area);
        deficit.add(std::sqrt((a - b) * (a - b) + 4.0 * c * c) * dom_area);
    }
    return {dirichlet.sum, area.sum, deficit.sum};
}

} // namespace minsurf
