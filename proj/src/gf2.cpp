#include "cachelab/gf2.hpp"

namespace cachelab {

namespace {

/// Gauss-Jordan elimination; returns the pivot count. When `rhs` is non-null
/// it is carried along as the augmented column; pivot rows per column are
/// written into *pivot_of_col (sized cols, -1 for free columns).
std::int64_t eliminate(Gf2Matrix& m, BitVec* rhs, std::vector<std::int64_t>* pivot_of_col) {
  const std::int64_t rows = m.rows();
  const std::int64_t cols = m.cols();
  std::int64_t pivot = 0;
  for (std::int64_t col = 0; col < cols && pivot < rows; ++col) {
    std::int64_t hit = -1;
    for (std::int64_t r = pivot; r < rows; ++r)
      if (m.bit(r, col)) { hit = r; break; }
    if (hit < 0) {
      if (pivot_of_col) (*pivot_of_col)[col] = -1;
      continue;
    }
    m.swap_rows(pivot, hit);
    if (rhs) {
      const bool t = rhs->bit(pivot);
      rhs->set_bit(pivot, rhs->bit(hit));
      rhs->set_bit(hit, t);
    }
    for (std::int64_t r = 0; r < rows; ++r) {
      if (r != pivot && m.bit(r, col)) {
        m.xor_row(r, pivot);
        if (rhs) rhs->set_bit(r, rhs->bit(r) ^ rhs->bit(pivot));
      }
    }
    if (pivot_of_col) (*pivot_of_col)[col] = pivot;
    ++pivot;
  }
  return pivot;
}

}  // namespace

std::int64_t gf2_rank(Gf2Matrix m) { return eliminate(m, nullptr, nullptr); }

bool gf2_full_column_rank(Gf2Matrix m) {
  const std::int64_t cols = m.cols();
  return eliminate(m, nullptr, nullptr) == cols;
}

std::optional<BitVec> gf2_solve_unique(Gf2Matrix a, BitVec rhs) {
  const std::int64_t rows = a.rows();
  const std::int64_t cols = a.cols();
  std::vector<std::int64_t> pivot_of_col(static_cast<std::size_t>(cols), -1);
  const std::int64_t rank = eliminate(a, &rhs, &pivot_of_col);
  if (rank < cols) return std::nullopt;  // free variables: not unique
  // any zeroed-out row with a 1 on the right side means inconsistency
  for (std::int64_t r = rank; r < rows; ++r)
    if (rhs.bit(static_cast<std::size_t>(r))) return std::nullopt;
  BitVec x(static_cast<std::size_t>(cols));
  for (std::int64_t col = 0; col < cols; ++col)
    x.set_bit(static_cast<std::size_t>(col),
              rhs.bit(static_cast<std::size_t>(pivot_of_col[static_cast<std::size_t>(col)])));
  return x;
}

}  // namespace cachelab
