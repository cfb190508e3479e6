#include <algorithm>

#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

namespace recip {

namespace {

void bucket(const std::vector<std::uint32_t>& key, std::size_t buckets, std::vector<std::uint32_t>& off,
            std::vector<UserIndex>& items) {
  off.assign(buckets + 1, 0);
  for (auto k : key) ++off[k + 1];
  for (std::size_t i = 0; i < buckets; ++i) off[i + 1] += off[i];
  items.assign(key.size(), 0);
  std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
  for (std::size_t u = 0; u < key.size(); ++u) items[fill[key[u]]++] = static_cast<UserIndex>(u);
}

}  // namespace

MatchingIndex::MatchingIndex(std::vector<std::uint32_t> boy_cluster, std::size_t boy_clusters,
                             std::vector<std::uint32_t> girl_cluster, std::size_t girl_clusters,
                             const BitMatrix& boy_likes, const BitMatrix& girl_likes)
    : n_(boy_cluster.size()), cb_(boy_clusters), cg_(girl_clusters), a_b_(std::move(boy_cluster)),
      a_g_(std::move(girl_cluster)) {
  if (a_g_.size() != n_) throw InputError("cluster arrays must have equal length");
  if (boy_likes.rows() != n_ || boy_likes.cols() != cg_ || girl_likes.rows() != n_ || girl_likes.cols() != cb_) {
    throw InputError("cluster preference matrices have wrong shape");
  }
  for (auto i : a_b_)
    if (i >= cb_) throw InputError("boy cluster id out of range");
  for (auto j : a_g_)
    if (j >= cg_) throw InputError("girl cluster id out of range");

  bucket(a_b_, cb_, mb_off_, mb_);
  bucket(a_g_, cg_, mg_off_, mg_);

  // Two passes per side: count, then fill. Users are visited in ascending order so lists come out sorted.
  const std::size_t cells = cb_ * cg_;
  lb_off_.assign(cells + 1, 0);
  lg_off_.assign(cells + 1, 0);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::uint32_t> fb, fg;
    if (pass == 1) {
      for (std::size_t c = 0; c < cells; ++c) {
        lb_off_[c + 1] += lb_off_[c];
        lg_off_[c + 1] += lg_off_[c];
      }
      lb_items_.assign(lb_off_[cells], 0);
      lg_items_.assign(lg_off_[cells], 0);
      fb.assign(lb_off_.begin(), lb_off_.end() - 1);
      fg.assign(lg_off_.begin(), lg_off_.end() - 1);
    }
    for (std::size_t b = 0; b < n_; ++b) {
      for (std::uint32_t j = 0; j < cg_; ++j) {
        ++build_work_;
        if (!boy_likes.test(b, j)) continue;
        const std::size_t c = cell(a_b_[b], j);
        if (pass == 0) ++lb_off_[c + 1];
        else lb_items_[fb[c]++] = static_cast<UserIndex>(b);
      }
    }
    for (std::size_t g = 0; g < n_; ++g) {
      for (std::uint32_t i = 0; i < cb_; ++i) {
        ++build_work_;
        if (!girl_likes.test(g, i)) continue;
        const std::size_t c = cell(i, a_g_[g]);
        if (pass == 0) ++lg_off_[c + 1];
        else lg_items_[fg[c]++] = static_cast<UserIndex>(g);
      }
    }
  }
  pb_.assign(n_, {});
  pg_.assign(n_, {});
}

std::span<const UserIndex> MatchingIndex::boy_members(std::uint32_t i) const {
  return {mb_.data() + mb_off_[i], mb_off_[i + 1] - mb_off_[i]};
}

std::span<const UserIndex> MatchingIndex::girl_members(std::uint32_t j) const {
  return {mg_.data() + mg_off_[j], mg_off_[j + 1] - mg_off_[j]};
}

std::span<const UserIndex> MatchingIndex::boys(std::uint32_t i, std::uint32_t j) const {
  const std::size_t c = cell(i, j);
  return {lb_items_.data() + lb_off_[c], lb_off_[c + 1] - lb_off_[c]};
}

std::span<const UserIndex> MatchingIndex::girls(std::uint32_t i, std::uint32_t j) const {
  const std::size_t c = cell(i, j);
  return {lg_items_.data() + lg_off_[c], lg_off_[c + 1] - lg_off_[c]};
}

std::optional<UserIndex> MatchingIndex::next_for_boy(UserIndex b, const BitMatrix& boy_observed) {
  if (b >= n_) throw InputError("boy index out of range");
  Pointer& p = pb_[b];
  const std::uint32_t i = a_b_[b];
  while (p.cell < cg_) {
    ++walk_work_;
    if (p.state == 0) {
      const auto list = boys(i, p.cell);
      const bool member = std::binary_search(list.begin(), list.end(), b);
      if (!member) {
        ++p.cell;
        continue;
      }
      p.state = 1;
      p.pos = 0;
    }
    const auto partners = girls(i, p.cell);
    while (p.pos < partners.size()) {
      ++walk_work_;
      const UserIndex g = partners[p.pos++];
      if (!boy_observed.test(b, g)) return g;
    }
    ++p.cell;
    p.state = 0;
  }
  return std::nullopt;
}

std::optional<UserIndex> MatchingIndex::next_for_girl(UserIndex g, const BitMatrix& girl_observed) {
  if (g >= n_) throw InputError("girl index out of range");
  Pointer& p = pg_[g];
  const std::uint32_t j = a_g_[g];
  while (p.cell < cb_) {
    ++walk_work_;
    if (p.state == 0) {
      const auto list = girls(p.cell, j);
      const bool member = std::binary_search(list.begin(), list.end(), g);
      if (!member) {
        ++p.cell;
        continue;
      }
      p.state = 1;
      p.pos = 0;
    }
    const auto partners = boys(p.cell, j);
    while (p.pos < partners.size()) {
      ++walk_work_;
      const UserIndex b = partners[p.pos++];
      if (!girl_observed.test(g, b)) return b;
    }
    ++p.cell;
    p.state = 0;
  }
  return std::nullopt;
}

}  // namespace recip
