#include "recip/bit_matrix.hpp"

#include <algorithm>

namespace recip {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

std::size_t BitMatrix::row_count(std::size_t r) const {
  std::size_t total = 0;
  for (Word w : row(r)) total += std::popcount(w);
  return total;
}

std::size_t BitMatrix::count() const {
  std::size_t total = 0;
  for (Word w : data_) total += std::popcount(w);
  return total;
}

Word BitMatrix::valid_mask(std::size_t w) const {
  const std::size_t used = cols_ - w * kWordBits;
  return used >= kWordBits ? ~Word{0} : ((Word{1} << used) - 1);
}

void BitMatrix::fill(bool v) {
  if (!v) {
    std::fill(data_.begin(), data_.end(), 0);
    return;
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    auto rw = row(r);
    for (std::size_t w = 0; w < stride_; ++w) rw[w] = valid_mask(w);
  }
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto rw = row(r);
    for (std::size_t w = 0; w < stride_; ++w) {
      Word bits = rw[w];
      while (bits != 0) {
        const std::size_t c = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        out.set(c, r);
        bits &= bits - 1;
      }
    }
  }
  return out;
}

std::optional<std::size_t> BitMatrix::first_unset_in_row(std::size_t r) const {
  auto rw = row(r);
  for (std::size_t w = 0; w < stride_; ++w) {
    const Word free = ~rw[w] & valid_mask(w);
    if (free != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(free));
  }
  return std::nullopt;
}

}  // namespace recip
