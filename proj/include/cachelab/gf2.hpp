#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cachelab/bitvec.hpp"

namespace cachelab {

/// Dense bit-packed matrix over GF(2), row-major.
class Gf2Matrix {
 public:
  Gf2Matrix(std::int64_t rows, std::int64_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
        words_(static_cast<std::size_t>(rows * wpr_), 0) {}

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  bool bit(std::int64_t r, std::int64_t c) const {
    return (word(r)[c >> 6] >> (c & 63)) & 1u;
  }

  void set_bit(std::int64_t r, std::int64_t c, bool v) {
    const std::uint64_t m = 1ull << (c & 63);
    if (v)
      word(r)[c >> 6] |= m;
    else
      word(r)[c >> 6] &= ~m;
  }

  /// row[r] = bits of `src` at positions idx (builds restricted systems).
  void fill_row_gather(std::int64_t r, const BitVec& src, std::span<const std::uint32_t> idx) {
    std::uint64_t* w = word(r);
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (src.bit(idx[j])) w[j >> 6] |= 1ull << (j & 63);
  }

  void xor_row(std::int64_t dst, std::int64_t src) {
    std::uint64_t* d = word(dst);
    const std::uint64_t* s = word(src);
    for (std::int64_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
  }

  void swap_rows(std::int64_t a, std::int64_t b) {
    if (a == b) return;
    std::swap_ranges(word(a), word(a) + wpr_, word(b));
  }

  std::uint64_t* word(std::int64_t r) { return words_.data() + r * wpr_; }
  const std::uint64_t* word(std::int64_t r) const { return words_.data() + r * wpr_; }

 private:
  std::int64_t rows_, cols_, wpr_;
  std::vector<std::uint64_t> words_;
};

/// Rank via Gaussian elimination (consumes the copy).
std::int64_t gf2_rank(Gf2Matrix m);

/// True iff rank == cols (every unknown pinned down).
bool gf2_full_column_rank(Gf2Matrix m);

/// Solves A x = rhs when the solution exists and is unique; nullopt when the
/// system is under-determined or inconsistent. rhs holds rows() bits, the
/// result cols() bits.
std::optional<BitVec> gf2_solve_unique(Gf2Matrix a, BitVec rhs);

}  // namespace cachelab
