#pragma once

#include <cstdint>
#include <vector>

#include "affract/lattice.hpp"

namespace affract {

enum class CellFamily { sponge, simplex };

/// Which fractal, in which dimension, at which recursion level.
/// kind=sponge covers the carpet (n=2), the Menger sponge (n=3) and its
/// higher-dimensional generalizations; kind=simplex covers the triangle,
/// the pyramid and the n-simplex family.
struct FractalKind {
  CellFamily kind = CellFamily::sponge;
  int n = 2;
  int m = 1;

  /// Subdivision base per axis: 3 for sponge, 2 for simplex.
  int base() const { return kind == CellFamily::sponge ? 3 : 2; }
  /// Cells per axis at level m (base^m).
  std::int64_t cells_per_axis() const;
  /// Lattice points needed per axis to realize every cell (base^m + 1).
  std::int64_t points_per_axis() const { return cells_per_axis() + 1; }

  void validate() const;  // n >= 2, m >= 1

  bool operator==(const FractalKind&) const = default;
};

/// The anchor (minimal corner) of a colored cell.
using CellIndex = LatticeIndex;

/// The colored-cell anchors for one kind, in lexicographic order.
struct CellSet {
  FractalKind kind;
  std::vector<CellIndex> members;

  bool operator==(const CellSet&) const = default;
};

/// Digit-constraint membership for the sponge family: writing each a_s - 1
/// in base 3 with m digits, no digit position may hold the digit 1 in more
/// than one coordinate. Coordinates must lie in [1, 3^m].
bool sponge_member(const CellIndex& a, int n, int m);

/// Simplex-family membership: the binary digit vectors of the a_s - 1 must
/// be one-hot-or-zero at every bit position (pairwise disjoint supports, all
/// within m bits). Coordinates must lie in [1, 2^m].
bool simplex_member(const CellIndex& a, int n, int m);

/// Dispatch on kind.
bool cell_member(const FractalKind& kind, const CellIndex& a);

/// All members, produced by direct digit-product enumeration and sorted.
CellSet enumerate_cells(const FractalKind& kind);

/// (2^n + n*2^(n-1))^m for the sponge family, (n+1)^m for the simplex
/// family. Callers keep n and m at desk scale; values fit in 64 bits up to
/// n=8, m=6.
std::uint64_t count_closed_form(const FractalKind& kind);

/// The 0/1 block matrix A_m of size 2^m built from A_1 = [[1,1],[1,0]] by
/// A_{k+1} = [[A_k, A_k], [A_k, 0]]. Its 1-positions (row, col), 1-based,
/// are exactly the n=2 simplex cells at level m.
std::vector<std::vector<int>> triangle_block_matrix(int m);

}  // namespace affract
