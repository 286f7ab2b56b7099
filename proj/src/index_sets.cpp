#include "affract/index_sets.hpp"

#include <algorithm>
#include <stdexcept>

namespace affract {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void require_in_range(const CellIndex& a, int n, int m, int base) {
  if (a.n() != n) {
    throw std::invalid_argument("cell index dimension mismatch");
  }
  if (m < 1) {
    throw std::domain_error("recursion level must be >= 1");
  }
  const std::int64_t hi = ipow(base, m);
  for (int c : a.coords) {
    if (c < 1 || c > hi) {
      throw std::domain_error("cell coordinate outside [1, base^m]");
    }
  }
}

// Digit tuples (one digit per coordinate) admissible at a single position.
std::vector<std::vector<int>> valid_digit_tuples(const FractalKind& kind) {
  std::vector<std::vector<int>> out;
  if (kind.kind == CellFamily::sponge) {
    // all of {0,1,2}^n with at most one coordinate equal to 1
    std::vector<int> digits(static_cast<std::size_t>(kind.n), 0);
    while (true) {
      int ones = 0;
      for (int d : digits) ones += (d == 1);
      if (ones <= 1) out.push_back(digits);
      int i = kind.n - 1;
      while (i >= 0 && digits[static_cast<std::size_t>(i)] == 2) {
        digits[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++digits[static_cast<std::size_t>(i)];
    }
  } else {
    // zero or exactly one coordinate equal to 1
    out.emplace_back(static_cast<std::size_t>(kind.n), 0);
    for (int s = 0; s < kind.n; ++s) {
      std::vector<int> digits(static_cast<std::size_t>(kind.n), 0);
      digits[static_cast<std::size_t>(s)] = 1;
      out.push_back(std::move(digits));
    }
  }
  return out;
}

}  // namespace

std::int64_t FractalKind::cells_per_axis() const { return ipow(base(), m); }

void FractalKind::validate() const {
  if (n < 2) {
    throw std::domain_error("fractal dimension must be >= 2");
  }
  if (m < 1) {
    throw std::domain_error("recursion level must be >= 1");
  }
}

bool sponge_member(const CellIndex& a, int n, int m) {
  require_in_range(a, n, m, 3);
  std::vector<int> rem(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) rem[static_cast<std::size_t>(s)] = a.coords[static_cast<std::size_t>(s)] - 1;
  for (int t = 0; t < m; ++t) {
    int ones = 0;
    for (int s = 0; s < n; ++s) {
      int& v = rem[static_cast<std::size_t>(s)];
      ones += (v % 3 == 1);
      v /= 3;
    }
    if (ones > 1) return false;
  }
  return true;
}

bool simplex_member(const CellIndex& a, int n, int m) {
  require_in_range(a, n, m, 2);
  for (int t = 0; t < m; ++t) {
    int ones = 0;
    for (int s = 0; s < n; ++s) {
      ones += (a.coords[static_cast<std::size_t>(s)] - 1) >> t & 1;
    }
    if (ones > 1) return false;
  }
  return true;
}

bool cell_member(const FractalKind& kind, const CellIndex& a) {
  kind.validate();
  return kind.kind == CellFamily::sponge ? sponge_member(a, kind.n, kind.m)
                                         : simplex_member(a, kind.n, kind.m);
}

CellSet enumerate_cells(const FractalKind& kind) {
  kind.validate();
  const auto tuples = valid_digit_tuples(kind);
  const int base = kind.base();

  CellSet set{kind, {}};
  std::uint64_t total = count_closed_form(kind);
  set.members.reserve(total);

  // odometer over one tuple choice per digit position
  std::vector<std::size_t> choice(static_cast<std::size_t>(kind.m), 0);
  while (true) {
    CellIndex cell{std::vector<int>(static_cast<std::size_t>(kind.n), 1)};
    std::int64_t weight = 1;
    for (int t = 0; t < kind.m; ++t) {
      const auto& digits = tuples[choice[static_cast<std::size_t>(t)]];
      for (int s = 0; s < kind.n; ++s) {
        cell.coords[static_cast<std::size_t>(s)] += digits[static_cast<std::size_t>(s)] * static_cast<int>(weight);
      }
      weight *= base;
    }
    set.members.push_back(std::move(cell));
    std::size_t t = 0;
    while (t < choice.size() && ++choice[t] == tuples.size()) {
      choice[t] = 0;
      ++t;
    }
    if (t == choice.size()) break;
  }
  std::sort(set.members.begin(), set.members.end());
  return set;
}

std::uint64_t count_closed_form(const FractalKind& kind) {
  kind.validate();
  std::uint64_t per_position;
  if (kind.kind == CellFamily::sponge) {
    per_position = (1ULL << kind.n) + static_cast<std::uint64_t>(kind.n) * (1ULL << (kind.n - 1));
  } else {
    per_position = static_cast<std::uint64_t>(kind.n) + 1;
  }
  std::uint64_t total = 1;
  for (int t = 0; t < kind.m; ++t) total *= per_position;
  return total;
}

std::vector<std::vector<int>> triangle_block_matrix(int m) {
  if (m < 1) {
    throw std::domain_error("triangle matrix level must be >= 1");
  }
  std::size_t size = 2;
  std::vector<std::vector<int>> a{{1, 1}, {1, 0}};
  for (int level = 2; level <= m; ++level) {
    std::size_t next = size * 2;
    std::vector<std::vector<int>> b(next, std::vector<int>(next, 0));
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t c = 0; c < size; ++c) {
        if (!a[r][c]) continue;
        b[r][c] = 1;
        b[r][c + size] = 1;
        b[r + size][c] = 1;
      }
    }
    a = std::move(b);
    size = next;
  }
  return a;
}

}  // namespace affract
