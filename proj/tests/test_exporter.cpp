#include <doctest.h>

#include <array>
#include <set>
#include <sstream>

#include "affract/exporter.hpp"
#include "test_support.hpp"

using namespace affract;
using testing::idx;
using testing::pt;

namespace {

FractalMesh make_mesh(const FractalKind& kind) {
  Frame f = default_frame(kind);
  std::vector<int> extent(static_cast<std::size_t>(kind.n),
                          static_cast<int>(kind.points_per_axis()));
  return assemble_mesh(kind, generate_points_recurrence(f, extent));
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

std::size_t count_line_prefix(const std::string& text, const std::string& prefix) {
  std::size_t count = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) ++count;
  }
  return count;
}

template <typename T>
std::string dump(const T& value) {
  std::ostringstream out;
  export_json(value, out);
  return out.str();
}

}  // namespace

TEST_CASE("SVG polygon counts") {
  ExportStyle style;
  SUBCASE("carpet level 3 has 512 polygons") {
    std::ostringstream out;
    export_svg(make_mesh({CellFamily::sponge, 2, 3}), style, out);
    CHECK(count_occurrences(out.str(), "<polygon") == 512);
  }
  SUBCASE("triangle level 6 has 729 polygons") {
    std::ostringstream out;
    export_svg(make_mesh({CellFamily::simplex, 2, 6}), style, out);
    CHECK(count_occurrences(out.str(), "<polygon") == 729);
  }
  SUBCASE("empty mesh is a valid zero-polygon document") {
    FractalMesh empty{FractalKind{CellFamily::sponge, 2, 1},
                      default_frame({CellFamily::sponge, 2, 1}),
                      {}};
    std::ostringstream out;
    export_svg(empty, style, out);
    CHECK(count_occurrences(out.str(), "<polygon") == 0);
    CHECK(count_occurrences(out.str(), "<svg") == 1);
    CHECK(count_occurrences(out.str(), "</svg>") == 1);
  }
  SUBCASE("3D mesh rejected") {
    std::ostringstream out;
    CHECK_THROWS_AS(export_svg(make_mesh({CellFamily::sponge, 3, 1}), style, out),
                    std::domain_error);
  }
  SUBCASE("quads are emitted as boundary cycles, not counter order") {
    FractalMesh mesh = make_mesh({CellFamily::sponge, 2, 1});
    std::ostringstream out;
    export_svg(mesh, style, out);
    // cell (1,1) of the canonical carpet: cycle (0,0) (0,2) (1,3) (1,1)
    CHECK(out.str().find("<polygon points=\"0,0 0,-2 1,-3 1,-1\"/>") != std::string::npos);
  }
}

TEST_CASE("OBJ export") {
  SUBCASE("sponge level 1: 120 quad faces over 64 deduplicated vertices") {
    FractalMesh mesh = make_mesh({CellFamily::sponge, 3, 1});
    std::ostringstream out;
    export_obj(mesh, out);
    const std::string obj = out.str();
    CHECK(count_line_prefix(obj, "f ") == 120);

    std::set<RatVec> unique;
    for (const auto& cell : mesh.cells) {
      for (const auto& v : cell.vertices) unique.insert(v.coords);
    }
    CHECK(unique.size() == 64);  // exact dedup over the 160 corner references
    CHECK(count_line_prefix(obj, "v ") == unique.size());
  }
  SUBCASE("single identity cell: 8 vertices, 6 faces") {
    FractalKind kind{CellFamily::sponge, 3, 1};
    Frame f(pt({0, 0, 0}), {pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}, FrameMode::affine);
    FractalMesh mesh{kind, f, {}};
    std::vector<AffinePoint> corners;
    for (int c = 0; c < 8; ++c) {
      corners.push_back(pt({c >> 2 & 1, c >> 1 & 1, c & 1}));
    }
    mesh.cells.push_back({1, idx({1, 1, 1}), corners});
    std::ostringstream out;
    export_obj(mesh, out);
    CHECK(count_line_prefix(out.str(), "v ") == 8);
    CHECK(count_line_prefix(out.str(), "f ") == 6);
  }
  SUBCASE("pyramid level 2: 16 tetrahedra give 64 triangular faces") {
    FractalMesh mesh = make_mesh({CellFamily::simplex, 3, 2});
    REQUIRE(mesh.cells.size() == 16);
    std::ostringstream out;
    export_obj(mesh, out);
    const std::string obj = out.str();
    CHECK(count_line_prefix(obj, "f ") == 64);
    // all faces are triangles
    std::istringstream lines(obj);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("f ", 0) != 0) continue;
      CHECK(count_occurrences(line, " ") == 3);
    }
  }
  SUBCASE("2D mesh rejected") {
    std::ostringstream out;
    CHECK_THROWS_AS(export_obj(make_mesh({CellFamily::sponge, 2, 1}), out), std::domain_error);
  }
}

namespace {

struct ParsedObj {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::vector<int>> faces;  // 0-based
};

ParsedObj parse_obj(const std::string& text) {
  ParsedObj obj;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      std::array<double, 3> v{};
      ls >> v[0] >> v[1] >> v[2];
      obj.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> f;
      int i;
      while (ls >> i) f.push_back(i - 1);
      obj.faces.push_back(f);
    }
  }
  return obj;
}

// Every face winding must point away from the cell centroid.
void check_outward(const ParsedObj& obj) {
  std::array<double, 3> center{};
  for (const auto& v : obj.vertices) {
    for (int i = 0; i < 3; ++i) center[i] += v[i] / static_cast<double>(obj.vertices.size());
  }
  for (const auto& f : obj.faces) {
    const auto& a = obj.vertices[static_cast<std::size_t>(f[0])];
    const auto& b = obj.vertices[static_cast<std::size_t>(f[1])];
    const auto& c = obj.vertices[static_cast<std::size_t>(f[2])];
    std::array<double, 3> u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    std::array<double, 3> w{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    std::array<double, 3> normal{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
                                 u[0] * w[1] - u[1] * w[0]};
    std::array<double, 3> mid{};
    for (int i : f) {
      for (int k = 0; k < 3; ++k) {
        mid[static_cast<std::size_t>(k)] +=
            obj.vertices[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /
            static_cast<double>(f.size());
      }
    }
    double dot = 0;
    for (int k = 0; k < 3; ++k) dot += normal[static_cast<std::size_t>(k)] * (mid[static_cast<std::size_t>(k)] - center[static_cast<std::size_t>(k)]);
    CHECK(dot > 0);
  }
}

}  // namespace

TEST_CASE("OBJ faces are oriented outward for single cells") {
  SUBCASE("positively oriented cube") {
    FractalKind kind{CellFamily::sponge, 3, 1};
    Frame f(pt({0, 0, 0}), {pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}, FrameMode::affine);
    FractalMesh mesh{kind, f, {}};
    std::vector<AffinePoint> corners;
    for (int c = 0; c < 8; ++c) corners.push_back(pt({c >> 2 & 1, c >> 1 & 1, c & 1}));
    mesh.cells.push_back({1, idx({1, 1, 1}), corners});
    std::ostringstream out;
    export_obj(mesh, out);
    check_outward(parse_obj(out.str()));
  }
  SUBCASE("negatively oriented cube (mirrored frame)") {
    FractalKind kind{CellFamily::sponge, 3, 1};
    Frame f(pt({0, 0, 0}), {pt({-1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}, FrameMode::affine);
    FractalMesh mesh{kind, f, {}};
    std::vector<AffinePoint> corners;
    for (int c = 0; c < 8; ++c) corners.push_back(pt({-(c >> 2 & 1), c >> 1 & 1, c & 1}));
    mesh.cells.push_back({1, idx({1, 1, 1}), corners});
    std::ostringstream out;
    export_obj(mesh, out);
    check_outward(parse_obj(out.str()));
  }
  SUBCASE("tetrahedron, both orientations") {
    FractalKind kind{CellFamily::simplex, 3, 1};
    for (int flip : {1, -1}) {
      Frame f(pt({0, 0, 0}), {pt({flip, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}, FrameMode::affine);
      FractalMesh mesh{kind, f, {}};
      mesh.cells.push_back(
          {1, idx({1, 1, 1}), {pt({0, 0, 0}), pt({flip, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}});
      std::ostringstream out;
      export_obj(mesh, out);
      check_outward(parse_obj(out.str()));
    }
  }
}

TEST_CASE("JSON round trips are lossless") {
  SUBCASE("mesh") {
    FractalMesh mesh = make_mesh({CellFamily::sponge, 2, 1});
    std::istringstream in(dump(mesh));
    CHECK(import_mesh(in) == mesh);
  }
  SUBCASE("lattice with non-integer rationals") {
    Frame f(AffinePoint{{Rational(1, 3), Rational(0)}},
            {AffinePoint{{Rational(1), Rational(1, 2)}}, AffinePoint{{Rational(0), Rational(2)}}},
            FrameMode::affine);
    PointLattice lat = generate_points_recurrence(f, {3, 3});
    std::istringstream in(dump(lat));
    CHECK(import_lattice(in) == lat);
  }
  SUBCASE("slice series") {
    SliceSeries series = slice_series(make_mesh({CellFamily::simplex, 4, 1}));
    std::istringstream in(dump(series));
    CHECK(import_series(in) == series);
  }
  SUBCASE("invariant table") {
    PointLattice lat = generate_points_recurrence(default_frame({CellFamily::sponge, 2, 1}), {3, 3});
    InvariantTable table =
        compute_invariants_affine(Neighborhood::from_lattice(lat, idx({1, 1})));
    std::istringstream in(dump(table));
    CHECK(import_invariants(in) == table);
  }
}

TEST_CASE("golden files") {
  SUBCASE("level-1 carpet SVG") {
    const std::string golden = R"(<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-0.15 -9.45 3.3 9.9">
<g fill="#4477aa" stroke="#202020" stroke-width="0.02">
<polygon points="0,0 0,-2 1,-3 1,-1"/>
<polygon points="0,-2 0,-4 1,-5 1,-3"/>
<polygon points="0,-4 0,-6 1,-7 1,-5"/>
<polygon points="1,-1 1,-3 2,-4 2,-2"/>
<polygon points="1,-5 1,-7 2,-8 2,-6"/>
<polygon points="2,-2 2,-4 3,-5 3,-3"/>
<polygon points="2,-4 2,-6 3,-7 3,-5"/>
<polygon points="2,-6 2,-8 3,-9 3,-7"/>
</g>
</svg>
)";
    std::ostringstream out;
    export_svg(make_mesh({CellFamily::sponge, 2, 1}), ExportStyle{}, out);
    CHECK(out.str() == golden);
  }
  SUBCASE("level-1 pyramid OBJ") {
    const std::string golden = R"(v 0 0 0
v -1 -1 -1
v 1 -1 -1
v 1 1 -1
v 0 0 -2
v 2 0 -2
v 2 2 -2
v 0 -2 -2
v 2 -2 -2
v -2 -2 -2
f 4 3 2
f 2 3 1
f 4 2 1
f 3 4 1
f 7 6 5
f 5 6 4
f 7 5 4
f 6 7 4
f 6 9 8
f 8 9 3
f 6 8 3
f 9 6 3
f 5 8 10
f 10 8 2
f 5 10 2
f 8 5 2
)";
    std::ostringstream out;
    export_obj(make_mesh({CellFamily::simplex, 3, 1}), out);
    CHECK(out.str() == golden);
  }
}

TEST_CASE("exports are byte-deterministic") {
  FractalMesh mesh = make_mesh({CellFamily::sponge, 3, 1});
  std::ostringstream a, b;
  export_obj(mesh, a);
  export_obj(mesh, b);
  CHECK(a.str() == b.str());
  CHECK(dump(mesh) == dump(mesh));

  FractalMesh flat = make_mesh({CellFamily::sponge, 2, 2});
  std::ostringstream c, d;
  export_svg(flat, ExportStyle{}, c);
  export_svg(flat, ExportStyle{}, d);
  CHECK(c.str() == d.str());
}

TEST_CASE("frame import") {
  SUBCASE("the carpet seed document") {
    std::istringstream in(R"({"mode":"affine","base":[0,0],"neighbors":[[1,1],[0,2]]})");
    Frame f = import_frame(in);
    CHECK(f == default_frame({CellFamily::sponge, 2, 1}));
  }
  SUBCASE("collinear neighbors name the dependent vector") {
    std::istringstream in(R"({"mode":"affine","base":[0,0],"neighbors":[[1,1],[2,2]]})");
    CHECK_THROWS_WITH_AS(import_frame(in),
                         doctest::Contains("neighbor 2"), degenerate_frame_error);
  }
  SUBCASE("string rationals are preserved exactly") {
    std::istringstream in(
        R"({"mode":"affine","base":[{"num":"1","den":"3"},0],"neighbors":[[1,1],[0,2]]})");
    Frame f = import_frame(in);
    CHECK(f.base().coords[0] == Rational(1, 3));
  }
  SUBCASE("malformed document reports the location") {
    std::istringstream in(R"({"mode":"affine","base":[0,0)");
    CHECK_THROWS_AS(import_frame(in), parse_error);
  }
  SUBCASE("bad mode") {
    std::istringstream in(R"({"mode":"euclidean","base":[0,0],"neighbors":[[1,1],[0,2]]})");
    CHECK_THROWS_AS(import_frame(in), parse_error);
  }
}

TEST_CASE("mesh import rejects cells that do not fit the kind") {
  FractalMesh mesh = make_mesh({CellFamily::sponge, 2, 1});
  mesh.cells[0].vertices.pop_back();
  std::istringstream in(dump(mesh));
  CHECK_THROWS_AS(import_mesh(in), parse_error);
}

TEST_CASE("style validation") {
  ExportStyle bad_color;
  bad_color.fill = "blue";
  CHECK_THROWS_AS(bad_color.validate(), std::invalid_argument);
  ExportStyle negative_pad;
  negative_pad.padding = -0.1;
  CHECK_THROWS_AS(negative_pad.validate(), std::invalid_argument);
  CHECK_NOTHROW(ExportStyle{}.validate());
}

TEST_CASE("slice exports") {
  SUBCASE("3D sponge slices render as 2D SVG") {
    SliceSeries series = slice_series(make_mesh({CellFamily::sponge, 3, 1}));
    std::ostringstream out;
    export_svg(series.slices[1], ExportStyle{}, out);
    CHECK(count_occurrences(out.str(), "<polygon") == 12);  // 4 bottoms + 8 tops
  }
  SUBCASE("4D sponge slices render as 3D OBJ") {
    SliceSeries series = slice_series(make_mesh({CellFamily::sponge, 4, 1}));
    std::ostringstream out;
    export_obj(series.slices[0], out);
    CHECK(count_line_prefix(out.str(), "f ") == 20 * 6);
  }
  SUBCASE("4D simplex slice with points keeps faces for tetrahedra only") {
    SliceSeries series = slice_series(make_mesh({CellFamily::simplex, 4, 1}));
    std::ostringstream out;
    export_obj(series.slices[1], out);  // 4 points + 1 tetrahedron
    CHECK(count_line_prefix(out.str(), "f ") == 4);
  }
}
