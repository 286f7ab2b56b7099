#include "affract/lattice.hpp"

#include <stdexcept>
#include <string>

namespace affract {

namespace {

void require_same_dim(const AffinePoint& a, const AffinePoint& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": ambient dimension mismatch");
  }
}

// Index of the first vector that fails to extend the rank of those before
// it, or -1 if all are independent. Vectors are matrix columns.
int first_dependent_column(const Mat& columns) {
  Mat w = columns;
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  std::size_t r = 0;  // eliminated rows
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && w(pivot, c) == 0) ++pivot;
    if (pivot == rows) {
      return static_cast<int>(c);
    }
    if (pivot != r) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(w(pivot, k), w(r, k));
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (w(i, c) == 0) continue;
      Rational f = w(i, c) / w(r, c);
      for (std::size_t k = c; k < cols; ++k) w(i, k) -= f * w(r, k);
    }
    ++r;
  }
  return -1;
}

Mat points_as_columns(const AffinePoint& base, const std::vector<AffinePoint>& rest) {
  Mat m(base.dim(), rest.size() + 1);
  for (int r = 0; r < base.dim(); ++r) {
    m(r, 0) = base.coords[r];
  }
  for (std::size_t c = 0; c < rest.size(); ++c) {
    for (int r = 0; r < base.dim(); ++r) {
      m(r, c + 1) = rest[c].coords[r];
    }
  }
  return m;
}

}  // namespace

AffinePoint operator+(const AffinePoint& a, const AffinePoint& b) {
  require_same_dim(a, b, "point sum");
  AffinePoint out = a;
  for (int i = 0; i < a.dim(); ++i) out.coords[i] += b.coords[i];
  return out;
}

AffinePoint operator-(const AffinePoint& a, const AffinePoint& b) {
  require_same_dim(a, b, "point difference");
  AffinePoint out = a;
  for (int i = 0; i < a.dim(); ++i) out.coords[i] -= b.coords[i];
  return out;
}

AffinePoint operator*(const Rational& s, const AffinePoint& p) {
  AffinePoint out = p;
  for (auto& c : out.coords) c *= s;
  return out;
}

Frame::Frame(AffinePoint base, std::vector<AffinePoint> neighbors, FrameMode mode)
    : base_(std::move(base)), neighbors_(std::move(neighbors)), mode_(mode) {
  const int n = static_cast<int>(neighbors_.size());
  if (n < 1) {
    throw std::invalid_argument("frame needs at least one neighbor");
  }
  for (const auto& p : neighbors_) {
    require_same_dim(base_, p, "frame");
  }
  const int d = base_.dim();
  if (mode_ == FrameMode::affine) {
    if (d != n) {
      throw std::invalid_argument("affine frame: ambient dimension must equal n");
    }
    std::vector<AffinePoint> diffs;
    diffs.reserve(neighbors_.size());
    for (const auto& p : neighbors_) diffs.push_back(p - base_);
    Mat cols(d, n);
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < d; ++r) cols(r, c) = diffs[c].coords[r];
    }
    int dep = first_dependent_column(cols);
    if (dep >= 0) {
      throw degenerate_frame_error("degenerate frame: neighbor " + std::to_string(dep + 1) +
                                   " minus base depends on the previous difference vectors");
    }
  } else {
    if (d != n + 1) {
      throw std::invalid_argument("centro-affine frame: ambient dimension must equal n+1");
    }
    int dep = first_dependent_column(points_as_columns(base_, neighbors_));
    if (dep == 0) {
      throw degenerate_frame_error("degenerate frame: base point is the zero vector");
    }
    if (dep > 0) {
      throw degenerate_frame_error("degenerate frame: neighbor " + std::to_string(dep) +
                                   " depends on the base and previous neighbors");
    }
  }
}

Mat Frame::as_columns() const { return points_as_columns(base_, neighbors_); }

TransitionMatrix::TransitionMatrix(Mat entries, int axis)
    : entries_(std::move(entries)), axis_(axis) {
  const std::size_t size = entries_.rows();
  if (size != entries_.cols() || size < 3) {
    throw std::invalid_argument("transition matrix must be square, size >= 3");
  }
  if (axis_ < 1 || axis_ > static_cast<int>(size) - 1) {
    throw std::invalid_argument("transition matrix axis out of range");
  }
  for (std::size_t r = 0; r < size; ++r) {
    Rational expected = (r == static_cast<std::size_t>(axis_)) ? 1 : 0;
    if (entries_(r, 0) != expected) {
      throw std::invalid_argument(
          "transition matrix first column must be the unit vector for its axis");
    }
  }
  if (entries_.det() == 0) {
    throw std::invalid_argument("transition matrix must be nondegenerate");
  }
}

void validate_family(const std::vector<TransitionMatrix>& matrices) {
  const int n = static_cast<int>(matrices.size());
  if (n == 0) {
    throw std::invalid_argument("empty matrix family");
  }
  for (int i = 0; i < n; ++i) {
    if (matrices[i].n() != n) {
      throw std::invalid_argument("family size does not match matrix dimensions");
    }
    if (matrices[i].axis() != i + 1) {
      throw std::invalid_argument("family must list axes 1..n in order");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int row = 0; row <= n; ++row) {
        if (matrices[i].entries()(row, j + 1) != matrices[j].entries()(row, i + 1)) {
          throw std::invalid_argument("family violates the shared-column symmetry");
        }
      }
    }
  }
}

PointLattice::PointLattice(int n, std::vector<int> extent, int ambient_dim)
    : n_(n), ambient_(ambient_dim), extent_(std::move(extent)) {
  if (n_ < 1 || static_cast<int>(extent_.size()) != n_) {
    throw std::invalid_argument("lattice extent must list one size per axis");
  }
  std::size_t total = 1;
  for (int e : extent_) {
    if (e < 1) {
      throw std::invalid_argument("lattice extent must be >= 1 per axis");
    }
    total *= static_cast<std::size_t>(e);
  }
  strides_.assign(n_, 1);
  for (int i = n_ - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(extent_[i + 1]);
  }
  points_.assign(total, AffinePoint{RatVec(static_cast<std::size_t>(ambient_))});
}

bool PointLattice::contains(const LatticeIndex& k) const {
  if (k.n() != n_) return false;
  for (int i = 0; i < n_; ++i) {
    if (k.coords[i] < 1 || k.coords[i] > extent_[i]) return false;
  }
  return true;
}

std::size_t PointLattice::offset(const LatticeIndex& k) const {
  if (!contains(k)) {
    throw std::out_of_range("lattice index outside the box");
  }
  std::size_t off = 0;
  for (int i = 0; i < n_; ++i) {
    off += static_cast<std::size_t>(k.coords[i] - 1) * strides_[i];
  }
  return off;
}

const AffinePoint& PointLattice::at(const LatticeIndex& k) const { return points_[offset(k)]; }

void PointLattice::set(const LatticeIndex& k, AffinePoint p) {
  if (p.dim() != ambient_) {
    throw std::invalid_argument("point dimension does not match the lattice");
  }
  points_[offset(k)] = std::move(p);
}

const AffinePoint& Neighborhood::mixed_at(int i, int j) const {
  const int nn = n();
  if (i < 0 || j <= i || j >= nn) {
    throw std::out_of_range("mixed neighbor pair out of range");
  }
  // row-major position of (i, j), i < j, in the C(n,2) pair list
  int idx = i * (2 * nn - i - 1) / 2 + (j - i - 1);
  return mixed[static_cast<std::size_t>(idx)];
}

Neighborhood Neighborhood::from_lattice(const PointLattice& lattice, const LatticeIndex& site) {
  const int n = lattice.n();
  if (site.n() != n) {
    throw std::invalid_argument("site dimension does not match the lattice");
  }
  auto shifted = [&](int i, int j) {
    LatticeIndex k = site;
    if (i >= 0) k.coords[i] += 1;
    if (j >= 0) k.coords[j] += 1;
    return k;
  };
  Neighborhood nb;
  nb.base = lattice.at(site);
  for (int i = 0; i < n; ++i) {
    nb.fwd.push_back(lattice.at(shifted(i, -1)));
  }
  for (int i = 0; i < n; ++i) {
    nb.fwd2.push_back(lattice.at(shifted(i, i)));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      nb.mixed.push_back(lattice.at(shifted(i, j)));
    }
  }
  return nb;
}

AffinePoint structure_step(const AffinePoint& r, const AffinePoint& r_i, const AffinePoint& r_j) {
  require_same_dim(r, r_i, "structure step");
  require_same_dim(r, r_j, "structure step");
  AffinePoint out = r_i;
  for (int k = 0; k < r.dim(); ++k) {
    out.coords[k] += r_j.coords[k] - r.coords[k];
  }
  return out;
}

AffinePoint double_step(const AffinePoint& r, const AffinePoint& r_i) {
  require_same_dim(r, r_i, "double step");
  AffinePoint out = r_i;
  for (int k = 0; k < r.dim(); ++k) {
    out.coords[k] += r_i.coords[k] - r.coords[k];
  }
  return out;
}

std::vector<TransitionMatrix> canonical_matrices(int n) {
  if (n < 2) {
    throw std::domain_error("canonical matrices need n >= 2");
  }
  std::vector<TransitionMatrix> out;
  out.reserve(static_cast<std::size_t>(n));
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  for (int i = 1; i <= n; ++i) {
    Mat m = Mat::identity(size);
    m(0, 0) = 0;
    for (std::size_t c = 1; c < size; ++c) {
      m(0, c) = -1;
    }
    const std::size_t row = static_cast<std::size_t>(i);
    for (std::size_t c = 0; c < size; ++c) {
      m(row, c) = (c == row) ? 2 : 1;
    }
    out.emplace_back(std::move(m), i);
  }
  return out;
}

bool check_compatibility(const std::vector<TransitionMatrix>& matrices) {
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (matrices[i].entries().rows() != matrices.front().entries().rows()) {
      throw std::invalid_argument("compatibility check: matrix sizes differ");
    }
  }
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    for (std::size_t j = i + 1; j < matrices.size(); ++j) {
      if (matrices[i].entries() * matrices[j].entries() !=
          matrices[j].entries() * matrices[i].entries()) {
        return false;
      }
    }
  }
  return true;
}

Frame frame_transport(const Frame& frame, const std::vector<TransitionMatrix>& matrices,
                      const std::vector<int>& exponents) {
  validate_family(matrices);
  const int n = frame.n();
  if (static_cast<int>(matrices.size()) != n || static_cast<int>(exponents.size()) != n) {
    throw std::invalid_argument("frame transport: family and exponents must match the frame");
  }
  if (!check_compatibility(matrices)) {
    throw std::invalid_argument("frame transport requires a commuting family");
  }
  for (int e : exponents) {
    if (e < 0) {
      throw std::domain_error("frame transport: exponents must be nonnegative");
    }
  }
  Mat t = Mat::identity(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    if (exponents[i] > 0) {
      t = t * matrices[i].entries().pow(static_cast<unsigned long long>(exponents[i]));
    }
  }
  Mat moved = frame.as_columns() * t;
  AffinePoint base{RatVec(static_cast<std::size_t>(frame.ambient_dim()))};
  std::vector<AffinePoint> neighbors(static_cast<std::size_t>(n),
                                     AffinePoint{RatVec(static_cast<std::size_t>(frame.ambient_dim()))});
  for (int r = 0; r < frame.ambient_dim(); ++r) {
    base.coords[r] = moved(r, 0);
    for (int c = 0; c < n; ++c) {
      neighbors[static_cast<std::size_t>(c)].coords[r] = moved(r, c + 1);
    }
  }
  return Frame(std::move(base), std::move(neighbors), frame.mode());
}

namespace {

// Determinant of the difference vectors u_1..u_n with slot `slot` (0-based)
// replaced by `sub`.
Rational diff_det_with(const std::vector<AffinePoint>& diffs, int slot, const AffinePoint& sub) {
  const int n = static_cast<int>(diffs.size());
  Mat m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    const AffinePoint& v = (c == slot) ? sub : diffs[static_cast<std::size_t>(c)];
    for (int r = 0; r < n; ++r) {
      m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = v.coords[static_cast<std::size_t>(r)];
    }
  }
  return m.det();
}

// Same over the position vectors (r, r_1, ..., r_n) in ambient n+1; slot 0
// is r itself.
Rational frame_det_with(const Neighborhood& nb, int slot, const AffinePoint& sub) {
  const int n = nb.n();
  Mat m(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n) + 1);
  for (int c = 0; c <= n; ++c) {
    const AffinePoint* v;
    if (c == slot) {
      v = &sub;
    } else if (c == 0) {
      v = &nb.base;
    } else {
      v = &nb.fwd[static_cast<std::size_t>(c - 1)];
    }
    for (int r = 0; r <= n; ++r) {
      m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = v->coords[static_cast<std::size_t>(r)];
    }
  }
  return m.det();
}

void require_stencil(const Neighborhood& nb, int expected_dim) {
  const int n = nb.n();
  if (n < 2 || static_cast<int>(nb.fwd2.size()) != n ||
      static_cast<int>(nb.mixed.size()) != n * (n - 1) / 2) {
    throw std::invalid_argument("incomplete neighborhood stencil");
  }
  if (nb.base.dim() != expected_dim) {
    throw std::invalid_argument("neighborhood ambient dimension mismatch");
  }
  for (const auto& p : nb.fwd) require_same_dim(nb.base, p, "neighborhood");
  for (const auto& p : nb.fwd2) require_same_dim(nb.base, p, "neighborhood");
  for (const auto& p : nb.mixed) require_same_dim(nb.base, p, "neighborhood");
}

}  // namespace

InvariantTable compute_invariants_affine(const Neighborhood& nb) {
  const int n = nb.n();
  require_stencil(nb, n);

  std::vector<AffinePoint> diffs;
  diffs.reserve(static_cast<std::size_t>(n));
  for (const auto& p : nb.fwd) diffs.push_back(p - nb.base);
  Rational denom = diff_det_with(diffs, -1, nb.base);
  if (denom == 0) {
    throw degenerate_frame_error("invariants: difference vectors are dependent");
  }

  InvariantTable table;
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  for (int i = 0; i < n; ++i) {  // axis i+1
    Mat m(size, size);
    for (std::size_t r = 0; r < size; ++r) {
      m(r, 0) = (r == static_cast<std::size_t>(i) + 1) ? 1 : 0;
    }
    for (int col_axis = 0; col_axis < n; ++col_axis) {  // column col_axis+2
      // Coefficients of the step target in the difference basis.
      const AffinePoint target = (col_axis == i)
                                     ? nb.fwd2[static_cast<std::size_t>(i)] - nb.fwd[static_cast<std::size_t>(i)]
                                     : nb.mixed_at(std::min(i, col_axis), std::max(i, col_axis)) - nb.base;
      Rational column_sum = 0;
      for (int l = 0; l < n; ++l) {
        Rational coeff = diff_det_with(diffs, l, target) / denom;
        if (col_axis == i && l == i) {
          coeff += 1;  // the repeated-axis diagonal carries the extra r_i
        }
        m(static_cast<std::size_t>(l) + 1, static_cast<std::size_t>(col_axis) + 1) = coeff;
        column_sum += coeff;
      }
      // First row from the hyperplane condition: columns sum to 1.
      m(0, static_cast<std::size_t>(col_axis) + 1) = 1 - column_sum;
    }
    table.tables.push_back(std::move(m));
  }
  return table;
}

InvariantTable compute_invariants_centroaffine(const Neighborhood& nb) {
  const int n = nb.n();
  require_stencil(nb, n + 1);

  Rational denom = frame_det_with(nb, -1, nb.base);
  if (denom == 0) {
    throw degenerate_frame_error("invariants: frame vectors are dependent");
  }

  InvariantTable table;
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  for (int i = 0; i < n; ++i) {
    Mat m(size, size);
    for (std::size_t r = 0; r < size; ++r) {
      m(r, 0) = (r == static_cast<std::size_t>(i) + 1) ? 1 : 0;
    }
    for (int col_axis = 0; col_axis < n; ++col_axis) {
      const AffinePoint& target = (col_axis == i)
                                      ? nb.fwd2[static_cast<std::size_t>(i)]
                                      : nb.mixed_at(std::min(i, col_axis), std::max(i, col_axis));
      for (int slot = 0; slot <= n; ++slot) {
        m(static_cast<std::size_t>(slot), static_cast<std::size_t>(col_axis) + 1) =
            frame_det_with(nb, slot, target) / denom;
      }
    }
    table.tables.push_back(std::move(m));
  }
  return table;
}

bool check_hyperplane_criterion(const std::vector<TransitionMatrix>& matrices) {
  for (const auto& tm : matrices) {
    const Mat& m = tm.entries();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      Rational sum = 0;
      for (std::size_t r = 0; r < m.rows(); ++r) sum += m(r, c);
      if (sum != 1) return false;
    }
  }
  return true;
}

bool check_self_similarity(const PointLattice& lattice) {
  const int n = lattice.n();
  for (int e : lattice.extent()) {
    if (e < 3) {
      throw std::domain_error("self-similarity check needs extent >= 3 per axis");
    }
  }
  const bool affine = lattice.ambient_dim() == n;
  if (!affine && lattice.ambient_dim() != n + 1) {
    throw std::invalid_argument("lattice ambient dimension fits neither mode");
  }

  bool have_reference = false;
  InvariantTable reference;
  LatticeIndex site{std::vector<int>(static_cast<std::size_t>(n), 1)};
  // odometer over all sites whose full stencil stays in the box
  while (true) {
    Neighborhood nb = Neighborhood::from_lattice(lattice, site);
    InvariantTable t;
    try {
      t = affine ? compute_invariants_affine(nb) : compute_invariants_centroaffine(nb);
    } catch (const degenerate_frame_error&) {
      return false;  // not a discrete hypersurface at this site
    }
    if (!have_reference) {
      reference = std::move(t);
      have_reference = true;
    } else if (t != reference) {
      return false;
    }
    int axis = n - 1;
    while (axis >= 0 && site.coords[axis] + 2 >= lattice.extent()[axis]) {
      site.coords[axis] = 1;
      --axis;
    }
    if (axis < 0) break;
    ++site.coords[axis];
  }
  return true;
}

}  // namespace affract
