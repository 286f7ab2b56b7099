#include "affract/slicer.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace affract {

namespace {

AffinePoint drop_last(const AffinePoint& p) {
  AffinePoint out;
  out.coords.assign(p.coords.begin(), p.coords.end() - 1);
  return out;
}

}  // namespace

SliceSeries slice_series(const FractalMesh& mesh) {
  mesh.kind.validate();
  if (mesh.cells.empty()) {
    throw std::domain_error("cannot slice an empty mesh");
  }
  const int n = mesh.kind.n;
  if (mesh.ambient_dim() != n) {
    throw std::invalid_argument("slicing expects ambient dimension n");
  }

  const int times = static_cast<int>(mesh.kind.cells_per_axis()) + 1;
  SliceSeries series{mesh.kind, n, {}};
  series.slices.reserve(static_cast<std::size_t>(times));
  for (int t = 0; t < times; ++t) {
    series.slices.push_back({t, {}});
  }

  const bool sponge = mesh.kind.kind == CellFamily::sponge;
  for (const auto& cell : mesh.cells) {
    const int anchor_last = cell.base.coords.back();
    SlicePiece bottom{cell.id, PieceRole::bottom,
                      sponge ? PieceShape::facet : PieceShape::simplex_facet, {}};
    SlicePiece top{cell.id, PieceRole::top, sponge ? PieceShape::facet : PieceShape::point, {}};
    if (sponge) {
      // corner order is a binary counter with the last axis least
      // significant: even positions sit at the anchor time, odd above it
      for (std::size_t c = 0; c < cell.vertices.size(); ++c) {
        (c % 2 == 0 ? bottom : top).vertices.push_back(drop_last(cell.vertices[c]));
      }
    } else {
      for (std::size_t v = 0; v + 1 < cell.vertices.size(); ++v) {
        bottom.vertices.push_back(drop_last(cell.vertices[v]));
      }
      top.vertices.push_back(drop_last(cell.vertices.back()));
    }
    series.slices[static_cast<std::size_t>(anchor_last - 1)].pieces.push_back(std::move(bottom));
    series.slices[static_cast<std::size_t>(anchor_last)].pieces.push_back(std::move(top));
  }

  for (auto& slice : series.slices) {
    std::stable_sort(slice.pieces.begin(), slice.pieces.end(),
                     [](const SlicePiece& a, const SlicePiece& b) {
                       if (a.role != b.role) return a.role == PieceRole::bottom;
                       return a.label < b.label;
                     });
  }
  return series;
}

std::vector<LabelPair> pair_labels(const SliceSeries& series) {
  std::map<int, LabelPair> by_label;
  for (const auto& slice : series.slices) {
    for (const auto& piece : slice.pieces) {
      auto& pair = by_label[piece.label];
      pair.label = piece.label;
      (piece.role == PieceRole::bottom ? pair.t_bottom : pair.t_top) = slice.time;
    }
  }
  std::vector<LabelPair> out;
  out.reserve(by_label.size());
  for (auto& [label, pair] : by_label) {
    out.push_back(pair);
  }
  return out;
}

}  // namespace affract
