#pragma once

#include <iosfwd>
#include <string>

#include "affract/slicer.hpp"

namespace affract {

struct ExportStyle {
  std::string fill = "#4477aa";
  std::string stroke = "#202020";
  double stroke_width = 0.02;  // user units
  double padding = 0.05;       // fraction of the bounding box
  bool labels = false;

  /// Throws std::invalid_argument on a bad color or negative padding/width.
  void validate() const;
};

/// 2D mesh to SVG 1.1, one polygon per cell inside a single root group.
/// The viewport is fitted to the exact bounding box plus padding; this is
/// the only place coordinates are rounded (6 significant digits). The y
/// axis is flipped at emission so figures keep mathematical orientation.
void export_svg(const FractalMesh& mesh, const ExportStyle& style, std::ostream& out);

/// 2D slice to SVG: polygons for pieces with 3+ vertices, lines for 2,
/// circles for single points.
void export_svg(const Slice& slice, const ExportStyle& style, std::ostream& out);

/// 3D mesh to OBJ (v/f subset): parallelepipeds as 6 outward-oriented quads,
/// tetrahedra as 4 triangles, flat quads as single faces. Vertices are
/// deduplicated by exact rational key before rounding; output is
/// byte-deterministic.
void export_obj(const FractalMesh& mesh, std::ostream& out);

/// 3D slice to OBJ. Point pieces contribute their vertex only.
void export_obj(const Slice& slice, std::ostream& out);

// Canonical JSON: sorted keys, rationals as {"num","den"} strings, arrays in
// index order. Round-trips losslessly through the matching importer.
void export_json(const PointLattice& lattice, std::ostream& out);
void export_json(const FractalMesh& mesh, std::ostream& out);
void export_json(const SliceSeries& series, std::ostream& out);
void export_json(const InvariantTable& table, std::ostream& out);

Frame import_frame(std::istream& in);
PointLattice import_lattice(std::istream& in);
FractalMesh import_mesh(std::istream& in);
SliceSeries import_series(std::istream& in);
InvariantTable import_invariants(std::istream& in);

}  // namespace affract
