#pragma once

#include <vector>

#include "affract/generator.hpp"

namespace affract {

enum class PieceRole { bottom, top };
enum class PieceShape { facet, simplex_facet, point };

/// One cell's trace in a single time slice. Vertices live in dimension n-1:
/// the sliced coordinate is dropped. Matching labels across adjacent slices
/// identify the same cell.
struct SlicePiece {
  int label = 0;  // cell id in the parent mesh
  PieceRole role = PieceRole::bottom;
  PieceShape shape = PieceShape::facet;
  std::vector<AffinePoint> vertices;

  bool operator==(const SlicePiece&) const = default;
};

struct Slice {
  int time = 0;  // 0-based display time
  std::vector<SlicePiece> pieces;

  bool operator==(const Slice&) const = default;
};

struct SliceSeries {
  FractalKind kind;
  int axis = 0;  // the sliced coordinate, always the last (1-based)
  std::vector<Slice> slices;

  bool operator==(const SliceSeries&) const = default;
};

/// Cut the mesh along its last index coordinate at every integer time.
/// Sponge cells contribute a bottom facet at time a_n - 1 and a top facet at
/// time a_n; simplex cells contribute their n base-time vertices at a_n - 1
/// and the remaining single vertex at a_n.
SliceSeries slice_series(const FractalMesh& mesh);

struct LabelPair {
  int label = 0;
  int t_bottom = 0;
  int t_top = 0;

  bool operator==(const LabelPair&) const = default;
};

/// For every cell id, the two slice times where it appears (always
/// consecutive). Sorted by label.
std::vector<LabelPair> pair_labels(const SliceSeries& series);

}  // namespace affract
