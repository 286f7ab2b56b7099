#pragma once

#include <vector>

#include "affract/index_sets.hpp"
#include "affract/lattice.hpp"

namespace affract {

/// One colored cell with its resolved vertex coordinates. Sponge-family
/// cells carry all 2^n corners in binary counter order over the offset
/// tuple (last axis fastest); simplex cells carry base, base+e_1, ...,
/// base+e_n.
struct CellGeometry {
  int id = 0;  // 1-based, assigned in lexicographic base order
  CellIndex base;
  std::vector<AffinePoint> vertices;

  bool operator==(const CellGeometry&) const = default;
};

struct FractalMesh {
  FractalKind kind;
  Frame frame;
  std::vector<CellGeometry> cells;

  int ambient_dim() const { return frame.ambient_dim(); }

  bool operator==(const FractalMesh&) const = default;
};

/// The seeds used when no frame is supplied. n=2 and n=3 use the classical
/// worked seeds; n >= 4 uses the origin with the standard basis.
Frame default_frame(const FractalKind& kind);

/// Fill the box by structure/double steps in nondecreasing index-sum order.
/// Requires extent >= 2 per axis.
PointLattice generate_points_recurrence(const Frame& frame, const std::vector<int>& extent);

/// Fill the box by one matrix application per point along a cached sweep.
/// Requires a commuting validated family. Identical output to the
/// recurrence method when the matrices are canonical_matrices(n).
PointLattice generate_points_matrix(const Frame& frame,
                                    const std::vector<TransitionMatrix>& matrices,
                                    const std::vector<int>& extent);

/// One CellGeometry per enumerated cell. The lattice must cover
/// points_per_axis() indices on every axis.
FractalMesh assemble_mesh(const FractalKind& kind, const PointLattice& lattice);

/// Build the mesh without materializing the point box: each cell's corner
/// points are produced by transporting the frame to the cell anchor with
/// canonical matrices. Agrees with assemble_mesh over a generated lattice.
FractalMesh assemble_mesh_cells_only(const FractalKind& kind, const Frame& frame);

struct StructureViolation {
  LatticeIndex site;
  int axis_i = 0;  // 1-based
  int axis_j = 0;

  bool operator==(const StructureViolation&) const = default;
};

/// Check r_ij - r_i - r_j + r = 0 at every site and axis pair with the
/// stencil inside the box. Violations are data, not errors.
std::vector<StructureViolation> verify_structure(const PointLattice& lattice);

}  // namespace affract
