#include "affract/exporter.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace affract {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool valid_color(const std::string& c) {
  if (c.size() != 7 || c.front() != '#') return false;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (!std::isxdigit(static_cast<unsigned char>(c[i]))) return false;
  }
  return true;
}

struct BBox {
  bool empty = true;
  Rational x0, x1, y0, y1;

  void add(const AffinePoint& p) {
    const Rational& x = p.coords[0];
    const Rational& y = p.coords[1];
    if (empty) {
      x0 = x1 = x;
      y0 = y1 = y;
      empty = false;
      return;
    }
    if (x < x0) x0 = x;
    if (x > x1) x1 = x;
    if (y < y0) y0 = y;
    if (y > y1) y1 = y;
  }
};

void require_flat(const std::vector<AffinePoint>& pts) {
  for (const auto& p : pts) {
    if (p.dim() != 2) {
      throw std::domain_error("SVG export needs ambient dimension 2");
    }
  }
}

// A polygon to draw: vertices already in drawing order. Labels of top
// pieces are nudged so coincident bottom/top numbers stay readable.
struct DrawItem {
  std::vector<AffinePoint> vertices;
  int label = 0;
  bool nudge_label = false;
};

// Stored sponge quads are binary-counter ordered; reorder to the boundary
// cycle so the polygon is not self-intersecting.
std::vector<AffinePoint> cycle_order(const std::vector<AffinePoint>& quad) {
  return {quad[0], quad[1], quad[3], quad[2]};
}

void emit_svg(const std::vector<DrawItem>& items, const ExportStyle& style, std::ostream& out) {
  style.validate();
  BBox box;
  for (const auto& item : items) {
    for (const auto& p : item.vertices) box.add(p);
  }

  Rational x0 = 0, y0 = 0, w = 1, h = 1;
  if (!box.empty) {
    Rational pad(style.padding);
    Rational pad_x = pad * (box.x1 - box.x0);
    Rational pad_y = pad * (box.y1 - box.y0);
    if (pad_x == 0) pad_x = pad;  // keep degenerate extents visible
    if (pad_y == 0) pad_y = pad;
    x0 = box.x0 - pad_x;
    w = box.x1 - box.x0 + 2 * pad_x;
    // y flips at emission, so the viewport top is -y1
    y0 = -box.y1 - pad_y;
    h = box.y1 - box.y0 + 2 * pad_y;
  }

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
      << format_decimal(x0) << " " << format_decimal(y0) << " " << format_decimal(w) << " "
      << format_decimal(h) << "\">\n";
  out << "<g fill=\"" << style.fill << "\" stroke=\"" << style.stroke << "\" stroke-width=\""
      << format_double(style.stroke_width) << "\">\n";

  Rational span = w > h ? w : h;
  for (const auto& item : items) {
    const auto& vs = item.vertices;
    if (vs.size() >= 3) {
      out << "<polygon points=\"";
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out << " ";
        out << format_decimal(vs[i].coords[0]) << "," << format_decimal(-vs[i].coords[1]);
      }
      out << "\"/>\n";
    } else if (vs.size() == 2) {
      out << "<line x1=\"" << format_decimal(vs[0].coords[0]) << "\" y1=\""
          << format_decimal(-vs[0].coords[1]) << "\" x2=\"" << format_decimal(vs[1].coords[0])
          << "\" y2=\"" << format_decimal(-vs[1].coords[1]) << "\"/>\n";
    } else if (vs.size() == 1) {
      out << "<circle cx=\"" << format_decimal(vs[0].coords[0]) << "\" cy=\""
          << format_decimal(-vs[0].coords[1]) << "\" r=\"" << format_decimal(span / 100)
          << "\"/>\n";
    }
  }
  if (style.labels) {
    Rational font = span / 40;
    for (const auto& item : items) {
      if (item.vertices.empty()) continue;
      Rational cx = 0, cy = 0;
      for (const auto& p : item.vertices) {
        cx += p.coords[0];
        cy += p.coords[1];
      }
      Rational count(static_cast<int>(item.vertices.size()));
      cx /= count;
      cy /= count;
      if (item.nudge_label) cy -= font;
      out << "<text x=\"" << format_decimal(cx) << "\" y=\"" << format_decimal(-cy)
          << "\" font-size=\"" << format_decimal(font)
          << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"" << style.stroke << "\">"
          << item.label << "</text>\n";
    }
  }
  out << "</g>\n</svg>\n";
}

}  // namespace

void ExportStyle::validate() const {
  if (!valid_color(fill) || !valid_color(stroke)) {
    throw std::invalid_argument("style colors must be #RRGGBB");
  }
  if (stroke_width < 0 || padding < 0) {
    throw std::invalid_argument("style widths and padding must be nonnegative");
  }
}

void export_svg(const FractalMesh& mesh, const ExportStyle& style, std::ostream& out) {
  std::vector<DrawItem> items;
  items.reserve(mesh.cells.size());
  for (const auto& cell : mesh.cells) {
    require_flat(cell.vertices);
    bool quad = mesh.kind.kind == CellFamily::sponge && cell.vertices.size() == 4;
    items.push_back({quad ? cycle_order(cell.vertices) : cell.vertices, cell.id});
  }
  emit_svg(items, style, out);
}

void export_svg(const Slice& slice, const ExportStyle& style, std::ostream& out) {
  std::vector<DrawItem> items;
  items.reserve(slice.pieces.size());
  for (const auto& piece : slice.pieces) {
    require_flat(piece.vertices);
    bool quad = piece.shape == PieceShape::facet && piece.vertices.size() == 4;
    items.push_back({quad ? cycle_order(piece.vertices) : piece.vertices, piece.label,
                     piece.role == PieceRole::top});
  }
  emit_svg(items, style, out);
}

namespace {

class ObjWriter {
 public:
  explicit ObjWriter(std::ostream& out) : out_(out) {}

  int vertex(const AffinePoint& p) {
    if (p.dim() != 3) {
      throw std::domain_error("OBJ export needs ambient dimension 3");
    }
    auto [it, inserted] = ids_.try_emplace(p.coords, static_cast<int>(ids_.size()) + 1);
    if (inserted) {
      lines_ += "v " + format_decimal(p.coords[0]) + " " + format_decimal(p.coords[1]) + " " +
                format_decimal(p.coords[2]) + "\n";
    }
    return it->second;
  }

  void face(const std::vector<int>& ids) {
    faces_ += "f";
    for (int id : ids) faces_ += " " + std::to_string(id);
    faces_ += "\n";
  }

  void flush() { out_ << lines_ << faces_; }

 private:
  std::ostream& out_;
  std::map<RatVec, int> ids_;
  std::string lines_;
  std::string faces_;
};

int det3_sign(const AffinePoint& a, const AffinePoint& b, const AffinePoint& c) {
  Mat m(3, 3);
  for (int r = 0; r < 3; ++r) {
    m(r, 0) = a.coords[r];
    m(r, 1) = b.coords[r];
    m(r, 2) = c.coords[r];
  }
  Rational d = m.det();
  return d > 0 ? 1 : d < 0 ? -1 : 0;
}

// Six outward quads of an 8-corner parallelepiped stored in binary counter
// order (axis 1 most significant).
void emit_parallelepiped(ObjWriter& w, const std::vector<AffinePoint>& corners) {
  std::array<int, 8> id{};
  for (int c = 0; c < 8; ++c) id[static_cast<std::size_t>(c)] = w.vertex(corners[static_cast<std::size_t>(c)]);

  auto corner = [](int o1, int o2, int o3) { return o1 * 4 + o2 * 2 + o3; };
  int orientation = det3_sign(corners[4] - corners[0], corners[2] - corners[0],
                              corners[1] - corners[0]);
  // (axis, then the two cycle axes in even-permutation order)
  static constexpr int kFaceAxes[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  static constexpr int kCycle[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (const auto& axes : kFaceAxes) {
    for (int side = 0; side <= 1; ++side) {
      std::vector<int> face;
      for (const auto& bc : kCycle) {
        int o[3];
        o[axes[0]] = side;
        o[axes[1]] = bc[0];
        o[axes[2]] = bc[1];
        face.push_back(id[static_cast<std::size_t>(corner(o[0], o[1], o[2]))]);
      }
      // the raw cycle faces along +axis; flip for the near side and for
      // negatively oriented cells
      bool flip = (side == 0);
      if (orientation < 0) flip = !flip;
      if (flip) std::reverse(face.begin(), face.end());
      w.face(face);
    }
  }
}

void emit_tetrahedron(ObjWriter& w, const std::vector<AffinePoint>& vs) {
  std::array<int, 4> id{};
  for (int v = 0; v < 4; ++v) id[static_cast<std::size_t>(v)] = w.vertex(vs[static_cast<std::size_t>(v)]);
  int orientation =
      det3_sign(vs[1] - vs[0], vs[2] - vs[0], vs[3] - vs[0]);
  static constexpr int kFaces[4][3] = {{1, 2, 3}, {0, 2, 1}, {0, 1, 3}, {0, 3, 2}};
  for (const auto& f : kFaces) {
    std::vector<int> face{id[static_cast<std::size_t>(f[0])], id[static_cast<std::size_t>(f[1])],
                          id[static_cast<std::size_t>(f[2])]};
    if (orientation < 0) std::reverse(face.begin(), face.end());
    w.face(face);
  }
}

void emit_flat_quad(ObjWriter& w, const std::vector<AffinePoint>& corners) {
  auto cyc = cycle_order(corners);
  std::vector<int> face;
  for (const auto& p : cyc) face.push_back(w.vertex(p));
  w.face(face);
}

void emit_solid(ObjWriter& w, bool sponge_family, const std::vector<AffinePoint>& vs) {
  if (sponge_family && vs.size() == 8) {
    emit_parallelepiped(w, vs);
  } else if (sponge_family && vs.size() == 4) {
    emit_flat_quad(w, vs);
  } else if (!sponge_family && vs.size() == 4) {
    emit_tetrahedron(w, vs);
  } else if (vs.size() == 1) {
    w.vertex(vs[0]);  // orphan vertex; labels live in the JSON manifest
  } else {
    throw std::domain_error("unsupported cell shape for OBJ export");
  }
}

}  // namespace

void export_obj(const FractalMesh& mesh, std::ostream& out) {
  ObjWriter w(out);
  const bool sponge = mesh.kind.kind == CellFamily::sponge;
  for (const auto& cell : mesh.cells) {
    emit_solid(w, sponge, cell.vertices);
  }
  w.flush();
}

void export_obj(const Slice& slice, std::ostream& out) {
  ObjWriter w(out);
  for (const auto& piece : slice.pieces) {
    emit_solid(w, piece.shape == PieceShape::facet, piece.vertices);
  }
  w.flush();
}

namespace {

json rational_to_json(const Rational& r) {
  return json{{"num", numerator(r).str()}, {"den", denominator(r).str()}};
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) {
    return Rational(j.get<long long>());
  }
  if (j.is_object() && j.contains("num") && j.contains("den")) {
    Int num(j.at("num").get<std::string>());
    Int den(j.at("den").get<std::string>());
    if (den == 0) {
      throw parse_error("rational with zero denominator");
    }
    return Rational(num, den);
  }
  throw parse_error("expected integer or {num, den} rational");
}

json point_to_json(const AffinePoint& p) {
  json a = json::array();
  for (const auto& c : p.coords) a.push_back(rational_to_json(c));
  return a;
}

AffinePoint point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw parse_error("expected a coordinate array");
  }
  AffinePoint p;
  for (const auto& c : j) p.coords.push_back(rational_from_json(c));
  return p;
}

json points_to_json(const std::vector<AffinePoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_to_json(p));
  return a;
}

std::vector<AffinePoint> points_from_json(const json& j) {
  std::vector<AffinePoint> out;
  for (const auto& p : j) out.push_back(point_from_json(p));
  return out;
}

json frame_to_json(const Frame& f) {
  return json{{"mode", f.mode() == FrameMode::affine ? "affine" : "centroaffine"},
              {"base", point_to_json(f.base())},
              {"neighbors", points_to_json(f.neighbors())}};
}

Frame frame_from_json(const json& j) {
  std::string mode = j.at("mode").get<std::string>();
  if (mode != "affine" && mode != "centroaffine") {
    throw parse_error("frame mode must be 'affine' or 'centroaffine'");
  }
  return Frame(point_from_json(j.at("base")), points_from_json(j.at("neighbors")),
               mode == "affine" ? FrameMode::affine : FrameMode::centroaffine);
}

json kind_to_json(const FractalKind& k) {
  return k.kind == CellFamily::sponge ? "sponge" : "simplex";
}

CellFamily family_from_json(const json& j) {
  std::string s = j.get<std::string>();
  if (s == "sponge") return CellFamily::sponge;
  if (s == "simplex") return CellFamily::simplex;
  throw parse_error("kind must be 'sponge' or 'simplex'");
}

json index_to_json(const LatticeIndex& k) { return json(k.coords); }

LatticeIndex index_from_json(const json& j) {
  LatticeIndex k;
  for (const auto& c : j) k.coords.push_back(c.get<int>());
  return k;
}

json parse_stream(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw parse_error(e.what());  // message carries the byte position
  }
}

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw parse_error(e.what());
  }
}

void write_json(const json& j, std::ostream& out) { out << j.dump() << "\n"; }

}  // namespace

void export_json(const PointLattice& lattice, std::ostream& out) {
  json j{{"schema_version", 1},
         {"n", lattice.n()},
         {"ambient", lattice.ambient_dim()},
         {"extent", lattice.extent()}};
  json pts = json::array();
  LatticeIndex k{std::vector<int>(static_cast<std::size_t>(lattice.n()), 1)};
  while (true) {
    pts.push_back(point_to_json(lattice.at(k)));
    int axis = lattice.n() - 1;
    while (axis >= 0 && k.coords[static_cast<std::size_t>(axis)] ==
                            lattice.extent()[static_cast<std::size_t>(axis)]) {
      k.coords[static_cast<std::size_t>(axis)] = 1;
      --axis;
    }
    if (axis < 0) break;
    ++k.coords[static_cast<std::size_t>(axis)];
  }
  j["points"] = std::move(pts);
  write_json(j, out);
}

PointLattice import_lattice(std::istream& in) {
  json j = parse_stream(in);
  return guarded([&] {
    int n = j.at("n").get<int>();
    int ambient = j.at("ambient").get<int>();
    std::vector<int> extent = j.at("extent").get<std::vector<int>>();
    PointLattice lattice(n, extent, ambient);
    const auto& pts = j.at("points");
    if (pts.size() != lattice.point_count()) {
      throw parse_error("point count does not match the extent box");
    }
    std::size_t i = 0;
    LatticeIndex k{std::vector<int>(static_cast<std::size_t>(n), 1)};
    while (true) {
      lattice.set(k, point_from_json(pts.at(i++)));
      int axis = n - 1;
      while (axis >= 0 &&
             k.coords[static_cast<std::size_t>(axis)] == extent[static_cast<std::size_t>(axis)]) {
        k.coords[static_cast<std::size_t>(axis)] = 1;
        --axis;
      }
      if (axis < 0) break;
      ++k.coords[static_cast<std::size_t>(axis)];
    }
    return lattice;
  });
}

void export_json(const FractalMesh& mesh, std::ostream& out) {
  json cells = json::array();
  for (const auto& cell : mesh.cells) {
    cells.push_back(json{{"id", cell.id},
                         {"base", index_to_json(cell.base)},
                         {"vertices", points_to_json(cell.vertices)}});
  }
  json j{{"schema_version", 1}, {"kind", kind_to_json(mesh.kind)}, {"n", mesh.kind.n},
         {"m", mesh.kind.m},    {"frame", frame_to_json(mesh.frame)}, {"cells", std::move(cells)}};
  write_json(j, out);
}

FractalMesh import_mesh(std::istream& in) {
  json j = parse_stream(in);
  return guarded([&] {
    FractalKind kind{family_from_json(j.at("kind")), j.at("n").get<int>(), j.at("m").get<int>()};
    kind.validate();
    FractalMesh mesh{kind, frame_from_json(j.at("frame")), {}};
    const std::size_t want_vertices = kind.kind == CellFamily::sponge
                                          ? (std::size_t{1} << kind.n)
                                          : static_cast<std::size_t>(kind.n) + 1;
    for (const auto& c : j.at("cells")) {
      CellGeometry cell{c.at("id").get<int>(), index_from_json(c.at("base")),
                        points_from_json(c.at("vertices"))};
      if (cell.base.n() != kind.n || cell.vertices.size() != want_vertices) {
        throw parse_error("cell " + std::to_string(cell.id) + " does not match the mesh kind");
      }
      for (const auto& v : cell.vertices) {
        if (v.dim() != mesh.frame.ambient_dim()) {
          throw parse_error("cell vertex dimension does not match the frame");
        }
      }
      mesh.cells.push_back(std::move(cell));
    }
    return mesh;
  });
}

void export_json(const SliceSeries& series, std::ostream& out) {
  json slices = json::array();
  for (const auto& slice : series.slices) {
    json pieces = json::array();
    for (const auto& piece : slice.pieces) {
      const char* role = piece.role == PieceRole::bottom ? "bottom" : "top";
      const char* shape = piece.shape == PieceShape::facet          ? "facet"
                          : piece.shape == PieceShape::simplex_facet ? "simplex_facet"
                                                                     : "point";
      pieces.push_back(json{{"label", piece.label},
                            {"role", role},
                            {"shape", shape},
                            {"vertices", points_to_json(piece.vertices)}});
    }
    slices.push_back(json{{"time", slice.time}, {"pieces", std::move(pieces)}});
  }
  json j{{"schema_version", 1},
         {"kind", kind_to_json(series.kind)},
         {"n", series.kind.n},
         {"m", series.kind.m},
         {"axis", series.axis},
         {"slices", std::move(slices)}};
  write_json(j, out);
}

SliceSeries import_series(std::istream& in) {
  json j = parse_stream(in);
  return guarded([&] {
    FractalKind kind{family_from_json(j.at("kind")), j.at("n").get<int>(), j.at("m").get<int>()};
    kind.validate();
    SliceSeries series{kind, j.at("axis").get<int>(), {}};
    for (const auto& s : j.at("slices")) {
      Slice slice{s.at("time").get<int>(), {}};
      for (const auto& p : s.at("pieces")) {
        SlicePiece piece;
        piece.label = p.at("label").get<int>();
        std::string role = p.at("role").get<std::string>();
        if (role != "bottom" && role != "top") throw parse_error("bad piece role");
        piece.role = role == "bottom" ? PieceRole::bottom : PieceRole::top;
        std::string shape = p.at("shape").get<std::string>();
        if (shape == "facet") {
          piece.shape = PieceShape::facet;
        } else if (shape == "simplex_facet") {
          piece.shape = PieceShape::simplex_facet;
        } else if (shape == "point") {
          piece.shape = PieceShape::point;
        } else {
          throw parse_error("bad piece shape");
        }
        piece.vertices = points_from_json(p.at("vertices"));
        slice.pieces.push_back(std::move(piece));
      }
      series.slices.push_back(std::move(slice));
    }
    return series;
  });
}

void export_json(const InvariantTable& table, std::ostream& out) {
  json tables = json::array();
  for (const auto& m : table.tables) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rational_to_json(m(r, c)));
      rows.push_back(std::move(row));
    }
    tables.push_back(std::move(rows));
  }
  json j{{"schema_version", 1}, {"n", table.n()}, {"invariants", std::move(tables)}};
  write_json(j, out);
}

InvariantTable import_invariants(std::istream& in) {
  json j = parse_stream(in);
  return guarded([&] {
    InvariantTable table;
    for (const auto& rows : j.at("invariants")) {
      std::vector<RatVec> data;
      for (const auto& row : rows) {
        RatVec r;
        for (const auto& entry : row) r.push_back(rational_from_json(entry));
        data.push_back(std::move(r));
      }
      table.tables.push_back(Mat::from_rows(data));
    }
    return table;
  });
}

Frame import_frame(std::istream& in) {
  json j = parse_stream(in);
  return guarded([&] { return frame_from_json(j); });
}

}  // namespace affract
