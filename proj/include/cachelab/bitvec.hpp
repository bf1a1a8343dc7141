#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "cachelab/rng.hpp"

namespace cachelab {

/// Bit-packed bit array. Bits past size() are kept zero so word-level
/// XOR/AND/compare need no masking.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t bits) : nbits_(bits), words_((bits + 63) / 64, 0) {}

  static BitVec random(std::size_t bits, SplitRng& rng) {
    BitVec v(bits);
    for (auto& w : v.words_) w = rng.next();
    v.mask_tail();
    return v;
  }

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set_bit(std::size_t i, bool v) {
    const std::uint64_t m = 1ull << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  /// Grows (zero-filled) or shrinks; shrink clears the dropped tail bits.
  void resize(std::size_t bits) {
    words_.resize((bits + 63) / 64, 0);
    nbits_ = bits;
    mask_tail();
  }

  /// In-place zero-padded XOR: grows to max(size, other.size).
  void xor_padded(const BitVec& other) {
    if (other.nbits_ > nbits_) resize(other.nbits_);
    for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  void xor_words(const std::uint64_t* other, std::size_t nwords) {
    for (std::size_t i = 0; i < nwords && i < words_.size(); ++i) words_[i] ^= other[i];
  }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }

  /// Parity of AND with `other` (missing tail treated as zero).
  bool parity_and(const BitVec& other) const {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1u;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }

  /// New vector holding this->bit(idx[j]) at position j.
  BitVec gather(std::span<const std::uint32_t> idx) const {
    BitVec out(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (bit(idx[j])) out.words_[j >> 6] |= 1ull << (j & 63);
    return out;
  }

  /// Writes bits[j] into position idx[j] of this.
  void scatter(std::span<const std::uint32_t> idx, const BitVec& bits) {
    for (std::size_t j = 0; j < idx.size(); ++j) set_bit(idx[j], bits.bit(j));
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::uint64_t* word_data() { return words_.data(); }

  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((nbits_ + 7) / 8, 0);
    std::memcpy(out.data(), words_.data(), out.size());
    return out;
  }

  static BitVec from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
    BitVec v(bits);
    std::memcpy(v.words_.data(), bytes.data(), std::min(bytes.size(), ((bits + 7) / 8)));
    v.mask_tail();
    return v;
  }

 private:
  void mask_tail() {
    const std::size_t tail = nbits_ & 63;
    if (tail != 0 && !words_.empty()) words_.back() &= (~0ull) >> (64 - tail);
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cachelab
