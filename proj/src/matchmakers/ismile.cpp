#include <cmath>
#include <numeric>

#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

namespace recip {

namespace {

enum Pick : std::size_t { kReciprocal, kVerified, kToAsk, kExplore, kFallback, kArbitrary };

constexpr std::uint8_t kUnknown = 0;
constexpr std::uint8_t kLike = 1;
constexpr std::uint8_t kDislike = 2;

}  // namespace

void IsmilePolicy::begin(std::size_t n, std::uint64_t, CounterRng rng) {
  if (n == 0) throw InputError("empty instance");
  n_ = n;
  rng_ = rng;
  const double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
  s_ = params_.s.value_or(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(ln))));
  if (s_ < 1) throw InputError("S must be at least 1");
  s_prime_ = ismile_s_prime(s_, n);
  tolerance_ = params_.tolerance.value_or(ln > 1.0 ? 1.0 / ln : 0.0);
  const std::uint64_t half = (n + 1) / 2;
  for (Half& h : side_) {
    h = Half{};
    h.est = ClusterEstimator(n, s_prime_, half, tolerance_, false, true);
    h.verified.assign(n, {});
    h.to_ask.assign(n, 0);
    h.recip.assign(n, {});
    h.deferred.assign(n, {});
    h.asked = BitMatrix(n, n);
    h.rated_me = BitMatrix(n, n);
    h.perm.resize(n);
    std::iota(h.perm.begin(), h.perm.end(), UserIndex{0});
    rng_.shuffle(std::span<UserIndex>(h.perm));
  }
  picks_ = {};
}

bool IsmilePolicy::estimated_dislike(const Half& o, UserIndex item, UserIndex viewer) const {
  const std::int32_t c = o.est.cluster_id(viewer);
  return c >= 0 && o.pref[static_cast<std::size_t>(c)][item] == kDislike;
}

UserIndex IsmilePolicy::select(Half& h, const Half& o, UserIndex v) {
  // Reciprocate a discovered like first.
  auto& q = h.recip[v];
  while (!q.empty()) {
    const UserIndex it = q.back();
    q.pop_back();
    if (h.asked.test(v, it)) continue;
    const std::int32_t c = h.est.cluster_id(it);
    if (c >= 0 && h.pref[static_cast<std::size_t>(c)][v] == kDislike) {
      h.deferred[v].push_back(it);
      continue;
    }
    ++picks_[kReciprocal];
    return it;
  }

  for (const std::uint32_t c : h.verified[v]) {
    const auto& mem = h.members[c];
    std::uint32_t& p = h.pos[c][v];
    while (p < mem.size()) {
      const UserIndex it = mem[p++];
      if (h.asked.test(v, it) || estimated_dislike(o, it, v)) continue;
      ++picks_[kVerified];
      return it;
    }
  }

  while (h.to_ask[v] < h.members.size()) {
    const std::uint32_t c = h.to_ask[v];
    if (h.pref[c][v] == kUnknown) {
      for (const UserIndex it : h.members[c]) {
        if (!h.asked.test(v, it)) {
          ++picks_[kToAsk];
          return it;
        }
      }
    }
    ++h.to_ask[v];
  }

  while (h.cursor < n_ && h.est.processed(h.perm[h.cursor])) ++h.cursor;
  if (h.cursor < n_ && !h.asked.test(v, h.perm[h.cursor])) {
    ++picks_[kExplore];
    return h.perm[h.cursor];
  }

  auto& d = h.deferred[v];
  while (!d.empty()) {
    const UserIndex it = d.back();
    d.pop_back();
    if (!h.asked.test(v, it)) {
      ++picks_[kFallback];
      return it;
    }
  }
  // An item whose opinion of v is still undiscovered.
  const auto asked = h.asked.row(v);
  const auto rated = h.rated_me.row(v);
  const std::size_t words = asked.size();
  const std::size_t start = rng_.uniform_index(words);
  for (std::size_t k = 0; k < words; ++k) {
    const std::size_t w = (start + k) % words;
    const Word free = ~asked[w] & ~rated[w] & h.asked.valid_mask(w);
    if (free != 0) {
      ++picks_[kFallback];
      return static_cast<UserIndex>(w * kWordBits + std::countr_zero(free));
    }
  }
  ++picks_[kArbitrary];
  return static_cast<UserIndex>(h.asked.first_unset_in_row(v).value_or(0));
}

void IsmilePolicy::learn_preference(Half& h, std::uint32_t c, UserIndex viewer, bool like) {
  h.pref[c][viewer] = like ? kLike : kDislike;
  if (like) h.verified[viewer].push_back(c);
}

void IsmilePolicy::on_processed(Half& h, UserIndex item, ClusterEstimator::Outcome out) {
  const auto c = static_cast<std::uint32_t>(h.est.cluster_id(item));
  if (out == ClusterEstimator::Outcome::kPromoted) {
    h.members.push_back({item});
    h.pref.emplace_back(n_, kUnknown);
    h.pos.emplace_back(n_, 0U);
  } else {
    h.members[c].push_back(item);
  }
  const auto raters = h.est.asked_matrix().row(item);
  for (std::size_t w = 0; w < raters.size(); ++w) {
    for (Word bits = raters[w]; bits != 0; bits &= bits - 1) {
      const auto v = static_cast<UserIndex>(w * kWordBits + std::countr_zero(bits));
      if (h.pref[c][v] == kUnknown) learn_preference(h, c, v, h.est.liked(item, v));
    }
  }
}

void IsmilePolicy::observe(Half& h, Half& o, UserIndex v, UserIndex it, bool like) {
  if (h.asked.test(v, it)) return;
  h.asked.set(v, it);
  o.rated_me.set(it, v);
  if (like && !o.asked.test(it, v)) o.recip[it].push_back(v);
  h.est.add_feedback(it, v, like);
  if (!h.est.processed(it)) {
    const auto out = h.est.evaluate(it);
    if (out != ClusterEstimator::Outcome::kNone) on_processed(h, it, out);
  } else {
    const auto c = static_cast<std::uint32_t>(h.est.cluster_id(it));
    if (h.pref[c][v] == kUnknown) learn_preference(h, c, v, like);
  }
}

IsmilePolicy::Diagnostics IsmilePolicy::diagnostics() const {
  Diagnostics d;
  d.emplace_back("S", std::to_string(s_));
  d.emplace_back("S_prime", std::to_string(s_prime_));
  d.emplace_back("tolerance", std::to_string(tolerance_));
  d.emplace_back("C_B", std::to_string(side_[1].est.representatives().size()));
  d.emplace_back("C_G", std::to_string(side_[0].est.representatives().size()));
  static constexpr const char* kNames[] = {"reciprocal", "verified", "to_ask", "explore", "fallback", "arbitrary"};
  for (std::size_t k = 0; k < picks_.size(); ++k) d.emplace_back(std::string("picks_") + kNames[k], std::to_string(picks_[k]));
  return d;
}

}  // namespace recip
