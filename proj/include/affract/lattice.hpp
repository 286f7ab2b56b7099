#pragma once

#include <vector>

#include "affract/errors.hpp"
#include "affract/linalg.hpp"
#include "affract/rational.hpp"

namespace affract {

/// Address of a lattice point: n coordinates, all >= 1.
struct LatticeIndex {
  std::vector<int> coords;

  int n() const { return static_cast<int>(coords.size()); }
  auto operator<=>(const LatticeIndex&) const = default;
};

/// A point of the ambient space, exact coordinates.
struct AffinePoint {
  RatVec coords;

  int dim() const { return static_cast<int>(coords.size()); }
  auto operator<=>(const AffinePoint&) const = default;
};

AffinePoint operator+(const AffinePoint& a, const AffinePoint& b);
AffinePoint operator-(const AffinePoint& a, const AffinePoint& b);
AffinePoint operator*(const Rational& s, const AffinePoint& p);

enum class FrameMode { centroaffine, affine };

/// Base point plus its n forward neighbors; the seed of all generation.
/// Independence is checked eagerly: affine mode requires the n difference
/// vectors independent in ambient dimension n, centro-affine mode requires
/// all n+1 position vectors independent in ambient dimension n+1.
class Frame {
 public:
  Frame(AffinePoint base, std::vector<AffinePoint> neighbors, FrameMode mode);

  const AffinePoint& base() const { return base_; }
  const std::vector<AffinePoint>& neighbors() const { return neighbors_; }
  FrameMode mode() const { return mode_; }
  int n() const { return static_cast<int>(neighbors_.size()); }
  int ambient_dim() const { return base_.dim(); }

  /// The n+1 points as columns of an ambient_dim x (n+1) matrix, the
  /// row-block transition matrices act on from the right.
  Mat as_columns() const;

  bool operator==(const Frame&) const = default;

 private:
  AffinePoint base_;
  std::vector<AffinePoint> neighbors_;
  FrameMode mode_;
};

/// One of the matrices transporting a frame a single step along `axis`
/// (1-based). Nondegenerate, and its first column is the unit vector with 1
/// in row axis+1, so the transported base is the old axis-neighbor.
class TransitionMatrix {
 public:
  TransitionMatrix(Mat entries, int axis);

  const Mat& entries() const { return entries_; }
  int axis() const { return axis_; }
  int n() const { return static_cast<int>(entries_.rows()) - 1; }

  bool operator==(const TransitionMatrix&) const = default;

 private:
  Mat entries_;
  int axis_;
};

/// Checks the family-level structure shared by M1..Mn: equal sizes, axes
/// 1..n, and column (j+1) of Mi equal to column (i+1) of Mj. Throws
/// std::invalid_argument on violation.
void validate_family(const std::vector<TransitionMatrix>& matrices);

/// The computed coefficient tables, one (n+1)x(n+1) matrix per axis. For a
/// lattice generated by constant matrices this recovers them exactly.
struct InvariantTable {
  std::vector<Mat> tables;

  int n() const { return static_cast<int>(tables.size()); }
  bool operator==(const InvariantTable&) const = default;
};

/// All lattice points over a finite index box [1..extent_i]^n, stored
/// densely in lexicographic order.
class PointLattice {
 public:
  PointLattice(int n, std::vector<int> extent, int ambient_dim);

  int n() const { return n_; }
  int ambient_dim() const { return ambient_; }
  const std::vector<int>& extent() const { return extent_; }
  std::size_t point_count() const { return points_.size(); }

  bool contains(const LatticeIndex& k) const;
  const AffinePoint& at(const LatticeIndex& k) const;
  void set(const LatticeIndex& k, AffinePoint p);

  bool operator==(const PointLattice&) const = default;

 private:
  std::size_t offset(const LatticeIndex& k) const;

  int n_ = 0;
  int ambient_ = 0;
  std::vector<int> extent_;
  std::vector<std::size_t> strides_;
  std::vector<AffinePoint> points_;
};

/// The minimal stencil around one site: r, every r_i, every r_ii, and every
/// mixed r_ij with i<j.
struct Neighborhood {
  AffinePoint base;                   // r
  std::vector<AffinePoint> fwd;       // r_i
  std::vector<AffinePoint> fwd2;      // r_ii
  std::vector<AffinePoint> mixed;     // r_ij, i<j, row-major over pairs

  int n() const { return static_cast<int>(fwd.size()); }
  const AffinePoint& mixed_at(int i, int j) const;  // 0-based, i < j

  /// Requires every stencil index to lie inside the lattice box.
  static Neighborhood from_lattice(const PointLattice& lattice, const LatticeIndex& site);
};

/// r_i + r_j - r, exact. The generative law of every construction here.
AffinePoint structure_step(const AffinePoint& r, const AffinePoint& r_i, const AffinePoint& r_j);

/// 2*r_i - r, exact: the same law specialized to a repeated axis.
AffinePoint double_step(const AffinePoint& r, const AffinePoint& r_i);

/// The constant transition matrices shared by every carpet, sponge and
/// simplex lattice of dimension n: first row (0,-1,...,-1), row i+1 all ones
/// with 2 on the diagonal, every other row a unit row.
std::vector<TransitionMatrix> canonical_matrices(int n);

/// True iff every unordered pair commutes exactly (the constant-coefficient
/// compatibility condition).
bool check_compatibility(const std::vector<TransitionMatrix>& matrices);

/// Transport a frame forward by `exponents[i]` steps along each axis i+1.
/// Requires a commuting validated family and nonnegative exponents.
Frame frame_transport(const Frame& frame, const std::vector<TransitionMatrix>& matrices,
                      const std::vector<int>& exponents);

/// Coefficient tables for a hyperplane lattice (ambient dimension n), via
/// the difference-vector determinant ratios; first rows recovered from the
/// unit column sums.
InvariantTable compute_invariants_affine(const Neighborhood& nb);

/// Full tables in ambient dimension n+1 as position-vector determinant
/// ratios.
InvariantTable compute_invariants_centroaffine(const Neighborhood& nb);

/// True iff every column of every matrix sums to exactly 1, the criterion
/// for the lattice to stay inside an affine hyperplane off the origin.
bool check_hyperplane_criterion(const std::vector<TransitionMatrix>& matrices);

/// True iff the coefficient tables agree at every site of the lattice with a
/// complete stencil. Requires extent >= 3 on every axis.
bool check_self_similarity(const PointLattice& lattice);

}  // namespace affract
