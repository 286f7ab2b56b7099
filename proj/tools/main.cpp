#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affract/exporter.hpp"
#include "affract/generator.hpp"
#include "affract/index_sets.hpp"
#include "affract/slicer.hpp"

namespace {

using affract::AffinePoint;
using affract::CellFamily;
using affract::ExportStyle;
using affract::FractalKind;
using affract::FractalMesh;
using affract::Frame;
using affract::InvariantTable;
using affract::LatticeIndex;
using affract::Neighborhood;
using affract::PointLattice;
using affract::SliceSeries;
using nlohmann::json;

constexpr int kExitChecksFailed = 1;
constexpr int kExitBadArguments = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

constexpr long long kMaxBoxPoints = 10'000'000;   // materialized lattice guard
constexpr long long kMaxEnumerateCells = 1'000'000;

struct CliError {
  int code;
  std::string message;
};

struct Options {
  std::string kind = "sponge";
  int n = 2;
  int m = 1;
  std::string frame = "default";
  std::string format;  // empty: pick per command
  std::string output;
  bool slice = false;
  bool cells_only = false;
  std::vector<std::string> style;
  std::string config;
  std::vector<std::string> inputs;
};

ExportStyle parse_style(const std::vector<std::string>& entries) {
  ExportStyle style;
  for (const auto& entry : entries) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw CliError{kExitBadArguments, "style entries must be KEY=VALUE: " + entry};
    }
    std::string key = entry.substr(0, eq);
    std::string value = entry.substr(eq + 1);
    auto color = [&](const std::string& v) { return v.empty() || v[0] == '#' ? v : "#" + v; };
    try {
      if (key == "fill") {
        style.fill = color(value);
      } else if (key == "stroke") {
        style.stroke = color(value);
      } else if (key == "stroke_width") {
        style.stroke_width = std::stod(value);
      } else if (key == "padding") {
        style.padding = std::stod(value);
      } else if (key == "labels") {
        style.labels = value == "on" || value == "true" || value == "1";
      } else {
        throw CliError{kExitBadArguments, "unknown style key: " + key};
      }
    } catch (const std::invalid_argument&) {
      throw CliError{kExitBadArguments, "bad style value: " + entry};
    }
  }
  try {
    style.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitBadArguments, e.what()};
  }
  return style;
}

FractalKind kind_of(const Options& opt) {
  CellFamily family;
  if (opt.kind == "sponge") {
    family = CellFamily::sponge;
  } else if (opt.kind == "simplex") {
    family = CellFamily::simplex;
  } else {
    throw CliError{kExitBadArguments, "kind must be sponge or simplex"};
  }
  if (opt.n < 2 || opt.n > 6) {
    throw CliError{kExitBadArguments, "n must be in [2, 6]"};
  }
  if (opt.m < 1 || opt.m > 6) {
    throw CliError{kExitBadArguments, "m must be in [1, 6]"};
  }
  return FractalKind{family, opt.n, opt.m};
}

Frame load_frame(const FractalKind& kind, const std::string& source) {
  if (source == "default") {
    return affract::default_frame(kind);
  }
  std::ifstream in(source);
  if (!in) {
    throw CliError{kExitIo, "cannot open frame file: " + source};
  }
  Frame frame = affract::import_frame(in);
  if (frame.n() != kind.n) {
    throw CliError{kExitValidation, "frame dimension does not match --n"};
  }
  return frame;
}

void write_file(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  fs::path dest(path);
  fs::path tmp = dest;
  tmp += ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out || !(out << bytes) || !out.flush()) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw CliError{kExitIo, "cannot write: " + path};
  }
  out.close();
  std::error_code ec;
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError{kExitIo, "cannot move output into place: " + path};
  }
}

std::string default_output(const FractalKind& kind, const std::string& ext) {
  std::string name = (kind.kind == CellFamily::sponge ? "sponge" : "simplex");
  return name + "_n" + std::to_string(kind.n) + "_m" + std::to_string(kind.m) + "." + ext;
}

long long box_points(const FractalKind& kind) {
  long long per_axis = kind.points_per_axis();
  long long total = 1;
  for (int i = 0; i < kind.n; ++i) {
    if (total > kMaxBoxPoints / per_axis + 1) return kMaxBoxPoints + 1;
    total *= per_axis;
  }
  return total;
}

FractalMesh build_mesh(const FractalKind& kind, const Frame& frame, bool cells_only) {
  if (cells_only) {
    const std::uint64_t per_cell = kind.kind == CellFamily::sponge
                                       ? (std::uint64_t{1} << kind.n)
                                       : static_cast<std::uint64_t>(kind.n) + 1;
    if (affract::count_closed_form(kind) * per_cell > 20'000'000ULL) {
      throw CliError{kExitBadArguments, "mesh exceeds the vertex guard at this kind/n/m"};
    }
    return affract::assemble_mesh_cells_only(kind, frame);
  }
  if (box_points(kind) > kMaxBoxPoints) {
    throw CliError{kExitBadArguments,
                   "point box exceeds the materialization guard; rerun with --cells-only"};
  }
  std::vector<int> extent(static_cast<std::size_t>(kind.n),
                          static_cast<int>(kind.points_per_axis()));
  PointLattice lattice = affract::generate_points_recurrence(frame, extent);
  return affract::assemble_mesh(kind, lattice);
}

std::string render_mesh(const FractalMesh& mesh, const std::string& format,
                        const ExportStyle& style) {
  std::ostringstream out;
  if (format == "svg") {
    if (mesh.ambient_dim() != 2) {
      throw CliError{kExitBadArguments, "svg output needs 2D geometry"};
    }
    affract::export_svg(mesh, style, out);
  } else if (format == "obj") {
    if (mesh.ambient_dim() != 3) {
      throw CliError{kExitBadArguments, "obj output needs 3D geometry"};
    }
    affract::export_obj(mesh, out);
  } else if (format == "json") {
    affract::export_json(mesh, out);
  } else {
    throw CliError{kExitBadArguments, "format must be svg, obj or json"};
  }
  return out.str();
}

int run_generate(const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  FractalKind kind = kind_of(opt);
  ExportStyle style = parse_style(opt.style);
  std::string format = opt.format.empty() ? "json" : opt.format;
  Frame frame = load_frame(kind, opt.frame);
  FractalMesh mesh = build_mesh(kind, frame, opt.cells_only);
  std::string output = opt.output.empty() ? default_output(kind, format) : opt.output;
  write_file(output, render_mesh(mesh, format, style));
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  json report{{"command", "generate"}, {"kind", opt.kind},
              {"n", kind.n},           {"m", kind.m},
              {"cells", mesh.cells.size()},
              {"format", format},      {"output", output},
              {"ms", ms}};
  std::cout << report.dump() << "\n";
  return 0;
}

int run_slice(const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  FractalKind kind = kind_of(opt);
  // slices are read by their paired labels, so label rendering defaults on
  std::vector<std::string> style_entries{"labels=on"};
  style_entries.insert(style_entries.end(), opt.style.begin(), opt.style.end());
  ExportStyle style = parse_style(style_entries);
  Frame frame = load_frame(kind, opt.frame);
  FractalMesh mesh = build_mesh(kind, frame, opt.cells_only);
  SliceSeries series = affract::slice_series(mesh);

  std::string base = opt.output.empty() ? default_output(kind, "x") : opt.output;
  if (auto dot = base.rfind('.'); dot != std::string::npos && base.find('/', dot) == std::string::npos) {
    base = base.substr(0, dot);
  }

  std::vector<std::string> files;
  if (kind.n == 3 || kind.n == 4) {
    const std::string ext = kind.n == 3 ? "svg" : "obj";
    for (const auto& slice : series.slices) {
      std::ostringstream out;
      if (kind.n == 3) {
        affract::export_svg(slice, style, out);
      } else {
        affract::export_obj(slice, out);
      }
      std::string path = base + "_t" + std::to_string(slice.time) + "." + ext;
      write_file(path, out.str());
      files.push_back(path);
    }
  } else {
    std::ostringstream out;
    affract::export_json(series, out);
    std::string path = base + "_slices.json";
    write_file(path, out.str());
    files.push_back(path);
  }

  json pairs = json::array();
  for (const auto& pair : affract::pair_labels(series)) {
    pairs.push_back(json{{"label", pair.label}, {"t_bottom", pair.t_bottom}, {"t_top", pair.t_top}});
  }
  json manifest{{"schema_version", 1}, {"kind", opt.kind}, {"n", kind.n}, {"m", kind.m},
                {"files", files},      {"pairs", std::move(pairs)}};
  std::string manifest_path = base + "_manifest.json";
  write_file(manifest_path, manifest.dump() + "\n");

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  json report{{"command", "slice"},
              {"kind", opt.kind},
              {"n", kind.n},
              {"m", kind.m},
              {"slices", series.slices.size()},
              {"files", files},
              {"manifest", manifest_path},
              {"cells", mesh.cells.size()},
              {"ms", ms}};
  std::cout << report.dump() << "\n";
  return 0;
}

// Corner points of every cell keyed by lattice index; the mesh's kind fixes
// how vertex positions map to index offsets.
std::map<LatticeIndex, AffinePoint> mesh_point_map(const FractalMesh& mesh) {
  std::map<LatticeIndex, AffinePoint> points;
  const int n = mesh.kind.n;
  for (const auto& cell : mesh.cells) {
    if (mesh.kind.kind == CellFamily::sponge) {
      for (std::size_t c = 0; c < cell.vertices.size(); ++c) {
        LatticeIndex k = cell.base;
        for (int i = 0; i < n; ++i) {
          k.coords[static_cast<std::size_t>(i)] += static_cast<int>(c) >> (n - 1 - i) & 1;
        }
        points.emplace(std::move(k), cell.vertices[c]);
      }
    } else {
      points.emplace(cell.base, cell.vertices[0]);
      for (int i = 0; i < n; ++i) {
        LatticeIndex k = cell.base;
        k.coords[static_cast<std::size_t>(i)] += 1;
        points.emplace(std::move(k), cell.vertices[static_cast<std::size_t>(i) + 1]);
      }
    }
  }
  return points;
}

// Tables at every site of the map whose full stencil is present.
std::vector<InvariantTable> tables_from_point_map(const std::map<LatticeIndex, AffinePoint>& points,
                                                  int n, bool affine) {
  std::vector<InvariantTable> tables;
  for (const auto& entry : points) {
    const LatticeIndex& site = entry.first;
    Neighborhood nb;
    nb.base = entry.second;
    bool complete = true;
    auto fetch = [&](int i, int j) -> const AffinePoint* {
      LatticeIndex k = site;
      if (i >= 0) k.coords[static_cast<std::size_t>(i)] += 1;
      if (j >= 0) k.coords[static_cast<std::size_t>(j)] += 1;
      auto it = points.find(k);
      return it == points.end() ? nullptr : &it->second;
    };
    for (int i = 0; i < n && complete; ++i) {
      const AffinePoint* p = fetch(i, -1);
      if (p) nb.fwd.push_back(*p); else complete = false;
    }
    for (int i = 0; i < n && complete; ++i) {
      const AffinePoint* p = fetch(i, i);
      if (p) nb.fwd2.push_back(*p); else complete = false;
    }
    for (int i = 0; i < n && complete; ++i) {
      for (int j = i + 1; j < n && complete; ++j) {
        const AffinePoint* p = fetch(i, j);
        if (p) nb.mixed.push_back(*p); else complete = false;
      }
    }
    if (!complete) continue;
    tables.push_back(affine ? affract::compute_invariants_affine(nb)
                            : affract::compute_invariants_centroaffine(nb));
  }
  return tables;
}

// Representative table plus a constancy verdict for one input artifact.
std::pair<InvariantTable, bool> invariants_of_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CliError{kExitIo, "cannot open input: " + path};
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw CliError{kExitValidation, std::string("bad input document: ") + e.what()};
  }
  std::istringstream replay(j.dump());
  if (j.contains("cells")) {
    FractalMesh mesh = affract::import_mesh(replay);
    auto points = mesh_point_map(mesh);
    bool affine = mesh.ambient_dim() == mesh.kind.n;
    auto tables = tables_from_point_map(points, mesh.kind.n, affine);
    if (tables.empty()) {
      throw CliError{kExitValidation, "mesh holds no complete invariant stencil"};
    }
    bool constant = true;
    for (const auto& t : tables) constant = constant && t == tables.front();
    return {tables.front(), constant};
  }
  if (j.contains("points")) {
    PointLattice lattice = affract::import_lattice(replay);
    LatticeIndex origin{std::vector<int>(static_cast<std::size_t>(lattice.n()), 1)};
    Neighborhood nb = Neighborhood::from_lattice(lattice, origin);
    bool affine = lattice.ambient_dim() == lattice.n();
    InvariantTable table = affine ? affract::compute_invariants_affine(nb)
                                  : affract::compute_invariants_centroaffine(nb);
    return {table, affract::check_self_similarity(lattice)};
  }
  throw CliError{kExitValidation, "input must be a mesh or a lattice document"};
}

json table_to_json(const InvariantTable& table) {
  std::ostringstream out;
  affract::export_json(table, out);
  return json::parse(out.str());
}

int run_invariants(const Options& opt) {
  if (opt.inputs.size() > 2) {
    throw CliError{kExitBadArguments, "invariants takes at most two inputs"};
  }
  if (opt.inputs.size() == 2) {
    auto [a, sa] = invariants_of_input(opt.inputs[0]);
    auto [b, sb] = invariants_of_input(opt.inputs[1]);
    json report{{"command", "invariants"},
                {"equivalent", a == b},
                {"self_similar", sa && sb},
                {"invariants", table_to_json(a).at("invariants")}};
    std::cout << report.dump() << "\n";
    return 0;
  }

  InvariantTable table;
  bool self_similar = false;
  if (opt.inputs.size() == 1) {
    std::tie(table, self_similar) = invariants_of_input(opt.inputs[0]);
  } else {
    FractalKind kind = kind_of(opt);
    Frame frame = load_frame(kind, opt.frame);
    std::vector<int> extent(static_cast<std::size_t>(kind.n), 4);
    PointLattice lattice = affract::generate_points_recurrence(frame, extent);
    LatticeIndex origin{std::vector<int>(static_cast<std::size_t>(kind.n), 1)};
    table = affract::compute_invariants_affine(Neighborhood::from_lattice(lattice, origin));
    self_similar = affract::check_self_similarity(lattice);
  }
  json report{{"command", "invariants"},
              {"self_similar", self_similar},
              {"invariants", table_to_json(table).at("invariants")}};
  std::cout << report.dump() << "\n";
  if (!opt.output.empty()) {
    std::ostringstream out;
    affract::export_json(table, out);
    write_file(opt.output, out.str());
  }
  return 0;
}

int run_verify(const Options& opt) {
  json checks = json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, bool pass) {
    checks.push_back(json{{"name", name}, {"pass", pass}});
    all_pass = all_pass && pass;
  };

  if (!opt.inputs.empty()) {
    std::ifstream in(opt.inputs[0]);
    if (!in) {
      throw CliError{kExitIo, "cannot open matrices file: " + opt.inputs[0]};
    }
    InvariantTable table = affract::import_invariants(in);
    std::vector<affract::TransitionMatrix> family;
    bool structure_ok = true;
    try {
      for (int i = 0; i < table.n(); ++i) {
        family.emplace_back(table.tables[static_cast<std::size_t>(i)], i + 1);
      }
      affract::validate_family(family);
    } catch (const std::invalid_argument&) {
      structure_ok = false;
    }
    record("matrix_structure", structure_ok);
    record("commutation", structure_ok && affract::check_compatibility(family));
    record("hyperplane_criterion", structure_ok && affract::check_hyperplane_criterion(family));
  } else {
    for (int n = 2; n <= 4; ++n) {
      auto matrices = affract::canonical_matrices(n);
      record("commutation_n" + std::to_string(n), affract::check_compatibility(matrices));
      record("hyperplane_criterion_n" + std::to_string(n),
             affract::check_hyperplane_criterion(matrices));
    }
    for (auto [family, n, m] : {std::tuple{CellFamily::sponge, 2, 2},
                                std::tuple{CellFamily::sponge, 3, 1},
                                std::tuple{CellFamily::simplex, 3, 2}}) {
      FractalKind kind{family, n, m};
      Frame frame = affract::default_frame(kind);
      std::vector<int> extent(static_cast<std::size_t>(n),
                              static_cast<int>(kind.points_per_axis()));
      auto lattice = affract::generate_points_recurrence(frame, extent);
      std::string name = std::string("structure_residual_") +
                         (family == CellFamily::sponge ? "sponge" : "simplex") + "_n" +
                         std::to_string(n) + "_m" + std::to_string(m);
      record(name, affract::verify_structure(lattice).empty());
    }
    auto count_check = [&](CellFamily family, int n, int m, std::uint64_t expect) {
      FractalKind kind{family, n, m};
      bool ok = affract::count_closed_form(kind) == expect &&
                affract::enumerate_cells(kind).members.size() == expect;
      std::string name = std::string("count_") +
                         (family == CellFamily::sponge ? "sponge" : "simplex") + "_n" +
                         std::to_string(n) + "_m" + std::to_string(m);
      record(name, ok);
    };
    count_check(CellFamily::sponge, 2, 1, 8);
    count_check(CellFamily::sponge, 2, 2, 64);
    count_check(CellFamily::sponge, 2, 3, 512);
    count_check(CellFamily::sponge, 3, 1, 20);
    count_check(CellFamily::sponge, 3, 2, 400);
    count_check(CellFamily::sponge, 3, 3, 8000);
    count_check(CellFamily::sponge, 4, 1, 48);
    count_check(CellFamily::sponge, 4, 2, 2304);
    count_check(CellFamily::simplex, 2, 6, 729);
    count_check(CellFamily::simplex, 3, 2, 16);
    count_check(CellFamily::simplex, 4, 2, 25);
  }

  json report{{"command", "verify"}, {"pass", all_pass}, {"checks", std::move(checks)}};
  std::cout << report.dump() << "\n";
  return all_pass ? 0 : kExitChecksFailed;
}

int run_count(const Options& opt) {
  FractalKind kind = kind_of(opt);
  std::uint64_t closed = affract::count_closed_form(kind);
  json report{{"command", "count"}, {"kind", opt.kind}, {"n", kind.n}, {"m", kind.m},
              {"closed_form", closed}};
  if (closed <= static_cast<std::uint64_t>(kMaxEnumerateCells)) {
    std::uint64_t enumerated = affract::enumerate_cells(kind).members.size();
    report["enumerated"] = enumerated;
    report["agree"] = enumerated == closed;
  }
  std::cout << report.dump() << "\n";
  return 0;
}

void apply_config(Options& opt, const CLI::App* cmd) {
  if (opt.config.empty()) return;
  std::ifstream in(opt.config);
  if (!in) {
    throw CliError{kExitIo, "cannot open config: " + opt.config};
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw CliError{kExitBadArguments, std::string("bad config: ") + e.what()};
  }
  auto unset = [&](const std::string& flag) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o != nullptr && o->count() == 0;
  };
  try {
    if (j.contains("kind") && unset("--kind")) opt.kind = j["kind"].get<std::string>();
    if (j.contains("n") && unset("--n")) opt.n = j["n"].get<int>();
    if (j.contains("m") && unset("--m")) opt.m = j["m"].get<int>();
    if (j.contains("frame") && unset("--frame")) opt.frame = j["frame"].get<std::string>();
    if (j.contains("format") && unset("--format")) opt.format = j["format"].get<std::string>();
    if (j.contains("o") && unset("-o")) opt.output = j["o"].get<std::string>();
    if (j.contains("slice") && unset("--slice")) opt.slice = j["slice"].get<bool>();
    if (j.contains("cells_only") && unset("--cells-only"))
      opt.cells_only = j["cells_only"].get<bool>();
    if (j.contains("style") && unset("--style")) {
      for (const auto& [key, value] : j["style"].items()) {
        opt.style.push_back(key + "=" +
                            (value.is_string() ? value.get<std::string>() : value.dump()));
      }
    }
  } catch (const json::exception& e) {
    throw CliError{kExitBadArguments, std::string("bad config value: ") + e.what()};
  }
}

void add_common_options(CLI::App* cmd, Options& opt, bool with_inputs) {
  cmd->add_option("--kind", opt.kind, "Fractal family: sponge or simplex");
  cmd->add_option("--n", opt.n, "Lattice dimension (2..6)");
  cmd->add_option("--m", opt.m, "Recursion level (1..6)");
  cmd->add_option("--frame", opt.frame, "Frame JSON path, or 'default'");
  cmd->add_option("--format", opt.format, "Output format: svg, obj or json");
  cmd->add_option("-o", opt.output, "Output path");
  cmd->add_flag("--slice", opt.slice, "Also produce the slice series");
  cmd->add_flag("--cells-only", opt.cells_only, "Generate per cell, never the full point box");
  cmd->add_option("--style", opt.style, "Style override KEY=VALUE (repeatable)");
  cmd->add_option("--config", opt.config, "JSON config with the same keys as the flags");
  if (with_inputs) {
    cmd->add_option("inputs", opt.inputs, "Input artifact paths");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine fractal lattices: generate, verify, slice and export"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* generate = app.add_subcommand("generate", "Generate a mesh and export it");
  CLI::App* slice = app.add_subcommand("slice", "Generate and slice along the last axis");
  CLI::App* invariants =
      app.add_subcommand("invariants", "Invariant tables, self-similarity, equivalence");
  CLI::App* verify = app.add_subcommand("verify", "Run the structural identity checks");
  CLI::App* count = app.add_subcommand("count", "Closed-form and enumerated cell counts");
  add_common_options(generate, opt, false);
  add_common_options(slice, opt, false);
  add_common_options(invariants, opt, true);
  add_common_options(verify, opt, true);
  add_common_options(count, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      return app.exit(e);
    }
    json report{{"error", e.what()}};
    std::cout << report.dump() << "\n";
    std::cerr << e.what() << "\n";
    return kExitBadArguments;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    apply_config(opt, cmd);
    if (cmd == generate) {
      return opt.slice ? run_slice(opt) : run_generate(opt);
    }
    if (cmd == slice) {
      return run_slice(opt);
    }
    if (cmd == invariants) {
      return run_invariants(opt);
    }
    if (cmd == verify) {
      return run_verify(opt);
    }
    return run_count(opt);
  } catch (const CliError& e) {
    std::cout << json{{"error", e.message}}.dump() << "\n";
    std::cerr << e.message << "\n";
    return e.code;
  } catch (const affract::io_error& e) {
    std::cout << json{{"error", e.what()}}.dump() << "\n";
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const affract::parse_error& e) {
    std::cout << json{{"error", e.what()}}.dump() << "\n";
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cout << json{{"error", e.what()}}.dump() << "\n";
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
}
