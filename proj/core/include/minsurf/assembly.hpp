#pragma once

#include <array>
#include <span>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/mesh.hpp"

namespace minsurf {

// One off-diagonal (or diagonal) coefficient in a sparse row.
struct StiffnessEntry {
    int col = 0;
    double value = 0.0;
};

// Symmetric stiffness matrix stored as per-row sorted adjacency lists.
// Each row holds every nonzero of that row, including the diagonal.
class StiffnessMatrix {
  public:
    explicit StiffnessMatrix(int n = 0) : rows_(n) {}

    int size() const { return static_cast<int>(rows_.size()); }

    // Accumulates v into entry (i, j).  Rows stay unsorted until finalize().
    void add(int i, int j, double v);

    // Merges duplicate columns and sorts each row by column index.
    void finalize();

    std::span<const StiffnessEntry> row(int i) const { return rows_[i]; }

    double diagonal(int i) const;

    // Zero when the entry is absent.
    double coefficient(int i, int j) const;

  private:
    std::vector<std::vector<StiffnessEntry>> rows_;
};

// Element stiffness for the triangle (p1, p2, p3):
//   K[i][j] = (e_i . e_j) / (4 |T|)  with  e_1 = p3-p2, e_2 = p1-p3,
//   e_3 = p2-p1.
// Throws DegenerateTriangle when the signed area is not positive
// (<= 1e-14).
std::array<std::array<double, 3>, 3>
element_stiffness(const std::array<double, 2>& p1,
                  const std::array<double, 2>& p2,
                  const std::array<double, 2>& p3);

// Assembles the global matrix; a degenerate element is reported with its
// index.
StiffnessMatrix assemble(const DiskMesh& mesh);

// Nodal image values (node-major, `dim` components per node) plus the
// boundary parameters in boundary-position order.  A free node keeps NaN
// in `params`.
struct SurfaceMap {
    int dim = 3;
    std::vector<double> images;
    std::vector<double> params;

    std::span<double> image(int node) {
        return {images.data() + static_cast<size_t>(node) * dim,
                static_cast<size_t>(dim)};
    }
    std::span<const double> image(int node) const {
        return {images.data() + static_cast<size_t>(node) * dim,
                static_cast<size_t>(dim)};
    }
};

// Dirichlet energy 1/2 sum_k a_k^T K a_k over the `dim` coordinate
// slices.  Throws DimensionMismatch when sizes disagree.
double dirichlet_energy(const StiffnessMatrix& matrix,
                        const DiskMesh& mesh,
                        const SurfaceMap& surface);

struct EnergyReport {
    double dirichlet = 0.0;
    double area = 0.0;
    double conformality_deficit = 0.0;
};

// Per-element Dirichlet energy, mapped area, and the conformality
// deficit integral, each accumulated with compensated summation.
EnergyReport area_and_conformality(const DiskMesh& mesh,
                                   const SurfaceMap& surface);

} // namespace minsurf
