#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace recip {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Dense row-major boolean matrix, one packed word array per row.
// Bits past cols() in the last word of each row are always zero.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  bool test(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c) { data_[r * stride_ + c / kWordBits] |= Word{1} << (c % kWordBits); }
  void reset(std::size_t r, std::size_t c) {
    data_[r * stride_ + c / kWordBits] &= ~(Word{1} << (c % kWordBits));
  }
  void assign(std::size_t r, std::size_t c, bool v) { v ? set(r, c) : reset(r, c); }

  std::span<const Word> row(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }
  std::span<Word> row(std::size_t r) { return {data_.data() + r * stride_, stride_}; }

  std::size_t row_count(std::size_t r) const;
  std::size_t count() const;

  void fill(bool v);
  BitMatrix transposed() const;

  // Lowest column index c with test(r, c) == false.
  std::optional<std::size_t> first_unset_in_row(std::size_t r) const;

  // Mask with ones exactly on valid column positions of word w.
  Word valid_mask(std::size_t w) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

inline std::size_t popcount_xor(std::span<const Word> a, std::span<const Word> b) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += std::popcount(a[w] ^ b[w]);
  return total;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += std::popcount(a[w] & b[w]);
  return total;
}

}  // namespace recip
