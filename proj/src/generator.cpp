#include "affract/generator.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace affract {

namespace {

AffinePoint point_of(std::vector<int> ints) {
  AffinePoint p;
  p.coords.reserve(ints.size());
  for (int v : ints) p.coords.emplace_back(v);
  return p;
}

bool is_seed(const LatticeIndex& k) {
  int twos = 0;
  for (int c : k.coords) {
    if (c > 2) return false;
    twos += (c == 2);
  }
  return twos <= 1;
}

// Visit the box [1..extent_i]^n in nondecreasing index-sum order, ties
// broken lexicographically.
void for_each_by_sum(const std::vector<int>& extent, const std::function<void(const LatticeIndex&)>& fn) {
  const int n = static_cast<int>(extent.size());
  int max_sum = 0;
  for (int e : extent) max_sum += e;
  LatticeIndex k{std::vector<int>(static_cast<std::size_t>(n), 1)};
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == n - 1) {
      if (remaining >= 1 && remaining <= extent[static_cast<std::size_t>(axis)]) {
        k.coords[static_cast<std::size_t>(axis)] = remaining;
        fn(k);
      }
      return;
    }
    int tail_min = n - 1 - axis;
    for (int c = 1; c <= extent[static_cast<std::size_t>(axis)] && remaining - c >= tail_min; ++c) {
      k.coords[static_cast<std::size_t>(axis)] = c;
      rec(axis + 1, remaining - c);
    }
  };
  for (int s = n; s <= max_sum; ++s) rec(0, s);
}

Frame frame_from_lattice(const PointLattice& lattice) {
  const int n = lattice.n();
  FrameMode mode;
  if (lattice.ambient_dim() == n) {
    mode = FrameMode::affine;
  } else if (lattice.ambient_dim() == n + 1) {
    mode = FrameMode::centroaffine;
  } else {
    throw std::invalid_argument("lattice ambient dimension fits neither frame mode");
  }
  LatticeIndex origin{std::vector<int>(static_cast<std::size_t>(n), 1)};
  std::vector<AffinePoint> neighbors;
  for (int i = 0; i < n; ++i) {
    LatticeIndex k = origin;
    k.coords[static_cast<std::size_t>(i)] = 2;
    neighbors.push_back(lattice.at(k));
  }
  return Frame(lattice.at(origin), std::move(neighbors), mode);
}

void require_extent(const std::vector<int>& extent, int n, int minimum) {
  if (static_cast<int>(extent.size()) != n) {
    throw std::invalid_argument("extent must list one size per axis");
  }
  for (int e : extent) {
    if (e < minimum) {
      throw std::domain_error("extent too small for generation");
    }
  }
}

}  // namespace

Frame default_frame(const FractalKind& kind) {
  kind.validate();
  if (kind.n == 2) {
    if (kind.kind == CellFamily::sponge) {
      return Frame(point_of({0, 0}), {point_of({1, 1}), point_of({0, 2})}, FrameMode::affine);
    }
    return Frame(point_of({0, 0}), {point_of({1, -2}), point_of({-2, -1})}, FrameMode::affine);
  }
  if (kind.n == 3) {
    if (kind.kind == CellFamily::sponge) {
      return Frame(point_of({0, 0, 0}),
                   {point_of({1, 1, 0}), point_of({0, 2, 0}), point_of({0, 0, 3})},
                   FrameMode::affine);
    }
    return Frame(point_of({0, 0, 0}),
                 {point_of({-1, -1, -1}), point_of({1, -1, -1}), point_of({1, 1, -1})},
                 FrameMode::affine);
  }
  // n >= 4: origin plus the standard basis
  std::vector<AffinePoint> neighbors;
  for (int i = 0; i < kind.n; ++i) {
    std::vector<int> v(static_cast<std::size_t>(kind.n), 0);
    v[static_cast<std::size_t>(i)] = 1;
    neighbors.push_back(point_of(v));
  }
  return Frame(point_of(std::vector<int>(static_cast<std::size_t>(kind.n), 0)),
               std::move(neighbors), FrameMode::affine);
}

PointLattice generate_points_recurrence(const Frame& frame, const std::vector<int>& extent) {
  const int n = frame.n();
  require_extent(extent, n, 2);
  PointLattice lattice(n, extent, frame.ambient_dim());

  for_each_by_sum(extent, [&](const LatticeIndex& k) {
    if (is_seed(k)) {
      int axis = -1;
      for (int i = 0; i < n; ++i) {
        if (k.coords[static_cast<std::size_t>(i)] == 2) axis = i;
      }
      lattice.set(k, axis < 0 ? frame.base() : frame.neighbors()[static_cast<std::size_t>(axis)]);
      return;
    }
    // first applicable rule: structure step over the smallest axis pair,
    // else double step along the smallest axis
    for (int i = 0; i < n; ++i) {
      if (k.coords[static_cast<std::size_t>(i)] < 2) continue;
      for (int j = i + 1; j < n; ++j) {
        if (k.coords[static_cast<std::size_t>(j)] < 2) continue;
        LatticeIndex ki = k, kj = k, kij = k;
        ki.coords[static_cast<std::size_t>(i)] -= 1;
        kj.coords[static_cast<std::size_t>(j)] -= 1;
        kij.coords[static_cast<std::size_t>(i)] -= 1;
        kij.coords[static_cast<std::size_t>(j)] -= 1;
        lattice.set(k, structure_step(lattice.at(kij), lattice.at(ki), lattice.at(kj)));
        return;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (k.coords[static_cast<std::size_t>(i)] < 3) continue;
      LatticeIndex ki = k, kii = k;
      ki.coords[static_cast<std::size_t>(i)] -= 1;
      kii.coords[static_cast<std::size_t>(i)] -= 2;
      lattice.set(k, double_step(lattice.at(kii), lattice.at(ki)));
      return;
    }
    throw std::logic_error("unreachable: no recurrence applies");
  });
  return lattice;
}

namespace {

// Per-column nonzero entries of an integral matrix, for the sparse frame
// advance below.
struct IntColumns {
  std::size_t size = 0;
  std::vector<std::vector<std::pair<std::size_t, Int>>> nonzero;  // per column: (row, value)
};

bool integral_columns(const Mat& m, IntColumns& out) {
  out.size = m.rows();
  out.nonzero.assign(m.cols(), {});
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const Rational& v = m(r, c);
      if (denominator(v) != 1) return false;
      if (v != 0) out.nonzero[c].emplace_back(r, numerator(v));
    }
  }
  return true;
}

}  // namespace

PointLattice generate_points_matrix(const Frame& frame,
                                    const std::vector<TransitionMatrix>& matrices,
                                    const std::vector<int>& extent) {
  const int n = frame.n();
  require_extent(extent, n, 1);
  validate_family(matrices);
  if (static_cast<int>(matrices.size()) != n) {
    throw std::invalid_argument("family size must match the frame dimension");
  }
  if (!check_compatibility(matrices)) {
    throw std::invalid_argument("matrix generation requires a commuting family");
  }

  PointLattice lattice(n, extent, frame.ambient_dim());
  LatticeIndex k{std::vector<int>(static_cast<std::size_t>(n), 1)};
  const int d = frame.ambient_dim();
  const std::size_t tuple = static_cast<std::size_t>(n) + 1;

  // Integral family (every case from the classical constructions): clear
  // the frame's denominators once and sweep in plain integers, so the
  // per-step cost is integer multiply-adds instead of gcd-normalizing
  // rational ops. Values are identical either way.
  std::vector<IntColumns> sparse(matrices.size());
  bool integral = true;
  for (std::size_t i = 0; i < matrices.size() && integral; ++i) {
    integral = integral_columns(matrices[i].entries(), sparse[i]);
  }
  if (integral) {
    Int scale = 1;
    Mat start = frame.as_columns();
    for (int r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < tuple; ++c) {
        scale = boost::multiprecision::lcm(scale, denominator(start(static_cast<std::size_t>(r), c)));
      }
    }
    std::vector<Int> cols0(static_cast<std::size_t>(d) * tuple);
    for (int r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < tuple; ++c) {
        const Rational& v = start(static_cast<std::size_t>(r), c);
        cols0[static_cast<std::size_t>(r) * tuple + c] = numerator(v) * (scale / denominator(v));
      }
    }
    std::function<void(int, std::vector<Int>)> sweep = [&](int axis, std::vector<Int> cols) {
      std::vector<Int> next(cols.size());
      for (int c = 1;; ++c) {
        k.coords[static_cast<std::size_t>(axis)] = c;
        if (axis == n - 1) {
          AffinePoint p{RatVec(static_cast<std::size_t>(d))};
          for (int r = 0; r < d; ++r) {
            p.coords[static_cast<std::size_t>(r)] = Rational(cols[static_cast<std::size_t>(r) * tuple], scale);
          }
          lattice.set(k, std::move(p));
        } else {
          sweep(axis + 1, cols);
        }
        if (c == extent[static_cast<std::size_t>(axis)]) break;
        const IntColumns& m = sparse[static_cast<std::size_t>(axis)];
        for (int r = 0; r < d; ++r) {
          for (std::size_t j = 0; j < tuple; ++j) {
            Int acc = 0;
            for (const auto& [row, value] : m.nonzero[j]) {
              acc += cols[static_cast<std::size_t>(r) * tuple + row] * value;
            }
            next[static_cast<std::size_t>(r) * tuple + j] = std::move(acc);
          }
        }
        cols.swap(next);
      }
    };
    sweep(0, std::move(cols0));
    return lattice;
  }

  // One matrix application per step: frames are cached per axis level, so
  // advancing the innermost axis multiplies by M_n only.
  std::function<void(int, Mat)> sweep = [&](int axis, Mat cols) {
    for (int c = 1;; ++c) {
      k.coords[static_cast<std::size_t>(axis)] = c;
      if (axis == n - 1) {
        AffinePoint p{RatVec(static_cast<std::size_t>(d))};
        for (int r = 0; r < d; ++r) p.coords[static_cast<std::size_t>(r)] = cols(static_cast<std::size_t>(r), 0);
        lattice.set(k, std::move(p));
      } else {
        sweep(axis + 1, cols);
      }
      if (c == extent[static_cast<std::size_t>(axis)]) break;
      cols = cols * matrices[static_cast<std::size_t>(axis)].entries();
    }
  };
  sweep(0, frame.as_columns());
  return lattice;
}

namespace {

// Corners of the unit cell anchored at the frame base, indexed by the axis
// bitmask of the offset; filled by structure steps.
std::vector<AffinePoint> unit_cell_corners(const Frame& frame) {
  const int n = frame.n();
  std::vector<AffinePoint> by_mask(static_cast<std::size_t>(1) << n);
  by_mask[0] = frame.base();
  for (unsigned mask = 1; mask < by_mask.size(); ++mask) {
    int bits = __builtin_popcount(mask);
    if (bits == 1) {
      int axis = __builtin_ctz(mask);
      by_mask[mask] = frame.neighbors()[static_cast<std::size_t>(axis)];
      continue;
    }
    unsigned i = 1u << __builtin_ctz(mask);
    unsigned rest = mask ^ i;
    unsigned j = 1u << __builtin_ctz(rest);
    by_mask[mask] = structure_step(by_mask[mask ^ i ^ j], by_mask[mask ^ j], by_mask[mask ^ i]);
  }
  return by_mask;
}

std::vector<AffinePoint> cell_vertices_from_corners(const FractalKind& kind,
                                                    const std::vector<AffinePoint>& by_mask) {
  const int n = kind.n;
  std::vector<AffinePoint> vertices;
  if (kind.kind == CellFamily::sponge) {
    vertices.reserve(static_cast<std::size_t>(1) << n);
    for (unsigned counter = 0; counter < (1u << n); ++counter) {
      unsigned mask = 0;
      for (int i = 0; i < n; ++i) {
        if (counter >> (n - 1 - i) & 1u) mask |= 1u << i;
      }
      vertices.push_back(by_mask[mask]);
    }
  } else {
    vertices.reserve(static_cast<std::size_t>(n) + 1);
    vertices.push_back(by_mask[0]);
    for (int i = 0; i < n; ++i) vertices.push_back(by_mask[1u << i]);
  }
  return vertices;
}

}  // namespace

FractalMesh assemble_mesh(const FractalKind& kind, const PointLattice& lattice) {
  kind.validate();
  if (lattice.n() != kind.n) {
    throw std::invalid_argument("lattice dimension does not match the kind");
  }
  const std::int64_t needed = kind.points_per_axis();
  for (int e : lattice.extent()) {
    if (e < needed) {
      throw std::domain_error("lattice extent does not cover the cell box");
    }
  }

  CellSet cells = enumerate_cells(kind);
  FractalMesh mesh{kind, frame_from_lattice(lattice), {}};
  mesh.cells.reserve(cells.members.size());
  const int n = kind.n;
  int id = 0;
  for (const auto& base : cells.members) {
    CellGeometry geom{++id, base, {}};
    if (kind.kind == CellFamily::sponge) {
      geom.vertices.reserve(static_cast<std::size_t>(1) << n);
      for (unsigned counter = 0; counter < (1u << n); ++counter) {
        LatticeIndex k = base;
        for (int i = 0; i < n; ++i) {
          k.coords[static_cast<std::size_t>(i)] += counter >> (n - 1 - i) & 1;
        }
        geom.vertices.push_back(lattice.at(k));
      }
    } else {
      geom.vertices.reserve(static_cast<std::size_t>(n) + 1);
      geom.vertices.push_back(lattice.at(base));
      for (int i = 0; i < n; ++i) {
        LatticeIndex k = base;
        k.coords[static_cast<std::size_t>(i)] += 1;
        geom.vertices.push_back(lattice.at(k));
      }
    }
    mesh.cells.push_back(std::move(geom));
  }
  return mesh;
}

namespace {

// Square integer matrix helpers for the scaled transport walk.
using IntMat = std::vector<Int>;  // row-major, size*size

IntMat int_mul(const IntMat& a, const IntMat& b, std::size_t size) {
  IntMat out(size * size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t k = 0; k < size; ++k) {
      const Int& aik = a[i * size + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < size; ++j) {
        out[i * size + j] += aik * b[k * size + j];
      }
    }
  }
  return out;
}

IntMat int_pow(IntMat base, unsigned long long e, std::size_t size) {
  IntMat result(size * size);
  for (std::size_t i = 0; i < size; ++i) result[i * size + i] = 1;
  while (e > 0) {
    if (e & 1ULL) result = int_mul(result, base, size);
    base = int_mul(base, base, size);
    e >>= 1;
  }
  return result;
}

// cols is d x size (tuple of frame points scaled to integers); advance it by
// the given transition power.
IntMat advance_cols(const IntMat& cols, const IntMat& t, std::size_t d, std::size_t size) {
  IntMat out(d * size);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j = 0; j < size; ++j) {
      Int acc = 0;
      for (std::size_t k = 0; k < size; ++k) {
        const Int& v = t[k * size + j];
        if (v == 0) continue;
        acc += cols[r * size + k] * v;
      }
      out[r * size + j] = std::move(acc);
    }
  }
  return out;
}

}  // namespace

FractalMesh assemble_mesh_cells_only(const FractalKind& kind, const Frame& frame) {
  kind.validate();
  if (frame.n() != kind.n) {
    throw std::invalid_argument("frame dimension does not match the kind");
  }
  const int n = kind.n;
  const int d = frame.ambient_dim();
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  const auto matrices = canonical_matrices(n);
  CellSet cells = enumerate_cells(kind);

  // Scale the frame tuple to integers once; the canonical matrices are
  // integral, so the whole transport walk stays in integer arithmetic.
  Int scale = 1;
  Mat start = frame.as_columns();
  for (int r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      scale = boost::multiprecision::lcm(scale, denominator(start(static_cast<std::size_t>(r), c)));
    }
  }
  IntMat cols0(static_cast<std::size_t>(d) * size);
  for (int r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const Rational& v = start(static_cast<std::size_t>(r), c);
      cols0[static_cast<std::size_t>(r) * size + c] = numerator(v) * (scale / denominator(v));
    }
  }
  std::vector<IntMat> steps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    IntMat m(size * size);
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t c = 0; c < size; ++c) {
        m[r * size + c] = numerator(matrices[static_cast<std::size_t>(i)].entries()(r, c));
      }
    }
    steps[static_cast<std::size_t>(i)] = std::move(m);
  }

  FractalMesh mesh{kind, frame, {}};
  mesh.cells.reserve(cells.members.size());
  int id = 0;

  auto emit = [&](const CellIndex& base, const IntMat& cols) {
    Frame local(
        [&] {
          AffinePoint p{RatVec(static_cast<std::size_t>(d))};
          for (int r = 0; r < d; ++r) p.coords[static_cast<std::size_t>(r)] = Rational(cols[static_cast<std::size_t>(r) * size], scale);
          return p;
        }(),
        [&] {
          std::vector<AffinePoint> nbs;
          for (std::size_t c = 1; c < size; ++c) {
            AffinePoint p{RatVec(static_cast<std::size_t>(d))};
            for (int r = 0; r < d; ++r) p.coords[static_cast<std::size_t>(r)] = Rational(cols[static_cast<std::size_t>(r) * size + c], scale);
            nbs.push_back(std::move(p));
          }
          return nbs;
        }(),
        frame.mode());
    mesh.cells.push_back({++id, base, cell_vertices_from_corners(kind, unit_cell_corners(local))});
  };

  // Cells are sorted, so a prefix-tree walk transports each frame forward
  // from the previous sibling instead of from the seed.
  std::function<void(std::size_t, std::size_t, int, const IntMat&)> walk =
      [&](std::size_t lo, std::size_t hi, int axis, const IntMat& cols) {
        if (axis == n) {
          emit(cells.members[lo], cols);
          return;
        }
        IntMat cur = cols;
        int cur_value = 1;
        std::size_t i = lo;
        while (i < hi) {
          int value = cells.members[i].coords[static_cast<std::size_t>(axis)];
          std::size_t j = i;
          while (j < hi && cells.members[j].coords[static_cast<std::size_t>(axis)] == value) ++j;
          if (value > cur_value) {
            cur = advance_cols(cur,
                               int_pow(steps[static_cast<std::size_t>(axis)],
                                       static_cast<unsigned long long>(value - cur_value), size),
                               static_cast<std::size_t>(d), size);
            cur_value = value;
          }
          walk(i, j, axis + 1, cur);
          i = j;
        }
      };
  if (!cells.members.empty()) {
    walk(0, cells.members.size(), 0, cols0);
  }
  return mesh;
}

std::vector<StructureViolation> verify_structure(const PointLattice& lattice) {
  const int n = lattice.n();
  for (int e : lattice.extent()) {
    if (e < 2) {
      throw std::domain_error("structure check needs extent >= 2 per axis");
    }
  }
  std::vector<StructureViolation> violations;
  LatticeIndex k{std::vector<int>(static_cast<std::size_t>(n), 1)};
  while (true) {
    for (int i = 0; i < n; ++i) {
      if (k.coords[static_cast<std::size_t>(i)] + 1 > lattice.extent()[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (k.coords[static_cast<std::size_t>(j)] + 1 > lattice.extent()[static_cast<std::size_t>(j)]) continue;
        LatticeIndex ki = k, kj = k, kij = k;
        ki.coords[static_cast<std::size_t>(i)] += 1;
        kj.coords[static_cast<std::size_t>(j)] += 1;
        kij.coords[static_cast<std::size_t>(i)] += 1;
        kij.coords[static_cast<std::size_t>(j)] += 1;
        if (lattice.at(kij) != structure_step(lattice.at(k), lattice.at(ki), lattice.at(kj))) {
          violations.push_back({k, i + 1, j + 1});
        }
      }
    }
    int axis = n - 1;
    while (axis >= 0 && k.coords[static_cast<std::size_t>(axis)] == lattice.extent()[static_cast<std::size_t>(axis)]) {
      k.coords[static_cast<std::size_t>(axis)] = 1;
      --axis;
    }
    if (axis < 0) break;
    ++k.coords[static_cast<std::size_t>(axis)];
  }
  return violations;
}

}  // namespace affract
