#include <algorithm>
#include <cmath>
#include <numeric>

#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

namespace recip {

namespace {

std::vector<UserIndex> shuffled_ids(std::size_t n, CounterRng& rng) {
  std::vector<UserIndex> v(n);
  std::iota(v.begin(), v.end(), UserIndex{0});
  rng.shuffle(std::span<UserIndex>(v));
  return v;
}

// Cluster ids ordered by the representatives' liked rows, lexicographically by word.
std::vector<std::uint32_t> lexicographic_rank(const ClusterEstimator& est) {
  const auto& reps = est.representatives();
  std::vector<std::uint32_t> order(reps.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto ra = est.liked_matrix().row(reps[a]);
    const auto rb = est.liked_matrix().row(reps[b]);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::vector<std::uint32_t> rank(reps.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  return rank;
}

}  // namespace

void SmilePolicy::begin(std::size_t n, std::uint64_t, CounterRng rng) {
  if (n == 0) throw InputError("empty instance");
  n_ = n;
  rng_ = rng;
  own_ = FeedbackLedger(n);
  round_ = phase0_rounds_ = phase1_end_ = 0;
  m_hat_ = 0;
  degenerate_ = false;
  perm_b_ = shuffled_ids(n, rng_);
  perm_g_ = shuffled_ids(n, rng_);
  k0_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(8.0 * std::log(static_cast<double>(n)))));
  if (params_.s_override) {
    if (*params_.s_override < 1) throw InputError("S must be at least 1");
    s_ = {*params_.s_override, smile_s_prime(*params_.s_override, n)};
    start_cluster_estimation();
  } else {
    phase_ = Phase::kEstimateM;
    oomm_ = OommCore(n);
  }
}

void SmilePolicy::start_cluster_estimation() {
  const std::uint64_t half = (n_ + 1) / 2;
  est_g_ = ClusterEstimator(n_, s_.s_prime, half, params_.tolerance, true);
  est_b_ = ClusterEstimator(n_, s_.s_prime, half, params_.tolerance, true);
  cursor_b_ = cursor_g_ = 0;
  phase_ = Phase::kClusterEstimation;
}

void SmilePolicy::maybe_finish_cluster_estimation() {
  if (cursor_g_ < n_ || cursor_b_ < n_) return;
  phase1_end_ = round_;
  build_index();
  phase_ = Phase::kUserMatching;
}

void SmilePolicy::build_index() {
  const auto rank_g = lexicographic_rank(est_g_);
  const auto rank_b = lexicographic_rank(est_b_);
  const std::size_t cg = rank_g.size(), cb = rank_b.size();
  std::vector<std::uint32_t> boy_cluster(n_), girl_cluster(n_);
  for (UserIndex u = 0; u < n_; ++u) {
    if (!est_b_.processed(u) || !est_g_.processed(u)) throw StateError("Phase I incomplete");
    boy_cluster[u] = rank_b[est_b_.cluster_id(u)];
    girl_cluster[u] = rank_g[est_g_.cluster_id(u)];
  }
  // s(b, cluster j) is read off b's feedback on the representative of j, when b gave any.
  BitMatrix boy_likes(n_, cg), girl_likes(n_, cb);
  for (std::uint32_t k = 0; k < cg; ++k) {
    const UserIndex rep = est_g_.representatives()[k];
    for (UserIndex b = 0; b < n_; ++b)
      if (est_g_.liked(rep, b)) boy_likes.set(b, rank_g[k]);
  }
  for (std::uint32_t k = 0; k < cb; ++k) {
    const UserIndex rep = est_b_.representatives()[k];
    for (UserIndex g = 0; g < n_; ++g)
      if (est_b_.liked(rep, g)) girl_likes.set(g, rank_b[k]);
  }
  index_ = MatchingIndex(std::move(boy_cluster), cb, std::move(girl_cluster), cg, boy_likes, girl_likes);
}

UserIndex SmilePolicy::arbitrary_girl(UserIndex boy) const {
  return static_cast<UserIndex>(own_.boy_observed_matrix().first_unset_in_row(boy).value_or(0));
}

UserIndex SmilePolicy::arbitrary_boy(UserIndex girl) const {
  return static_cast<UserIndex>(own_.girl_observed_matrix().first_unset_in_row(girl).value_or(0));
}

UserIndex SmilePolicy::select_for_boy(UserIndex boy) {
  switch (phase_) {
    case Phase::kEstimateM:
      return oomm_.select_for_boy(rng_);
    case Phase::kClusterEstimation:
      return cursor_g_ < n_ ? perm_g_[cursor_g_] : arbitrary_girl(boy);
    case Phase::kUserMatching:
      return index_.next_for_boy(boy, own_.boy_observed_matrix()).value_or(arbitrary_girl(boy));
  }
  return 0;
}

UserIndex SmilePolicy::select_for_girl(UserIndex girl) {
  switch (phase_) {
    case Phase::kEstimateM:
      return oomm_.select_for_girl(girl, rng_);
    case Phase::kClusterEstimation:
      return cursor_b_ < n_ ? perm_b_[cursor_b_] : arbitrary_boy(girl);
    case Phase::kUserMatching:
      return index_.next_for_girl(girl, own_.girl_observed_matrix()).value_or(arbitrary_boy(girl));
  }
  return 0;
}

void SmilePolicy::observe_boy(UserIndex boy, UserIndex girl, bool like) {
  if (phase_ == Phase::kEstimateM) oomm_.observe_boy(boy, girl);
  own_.record_boy_to_girl(boy, girl, like);
  if (phase_ == Phase::kClusterEstimation && cursor_g_ < n_ && girl == perm_g_[cursor_g_]) {
    est_g_.add_feedback(girl, boy, like);
    if (est_g_.evaluate(girl) != ClusterEstimator::Outcome::kNone) {
      ++cursor_g_;
      maybe_finish_cluster_estimation();
    }
  }
}

void SmilePolicy::observe_girl(UserIndex girl, UserIndex boy, bool like) {
  if (phase_ == Phase::kEstimateM) oomm_.observe_girl(girl, boy);
  own_.record_girl_to_boy(girl, boy, like);
  if (phase_ == Phase::kClusterEstimation && cursor_b_ < n_ && boy == perm_b_[cursor_b_]) {
    est_b_.add_feedback(boy, girl, like);
    if (est_b_.evaluate(boy) != ClusterEstimator::Outcome::kNone) {
      ++cursor_b_;
      maybe_finish_cluster_estimation();
    }
  }
  ++round_;
  if (phase_ == Phase::kEstimateM) {
    const std::uint64_t cap = static_cast<std::uint64_t>(n_) * n_;
    if (own_.match_count() >= k0_ || round_ >= cap) {
      phase0_rounds_ = round_;
      if (own_.match_count() == 0) {
        m_hat_ = 1.0;
        degenerate_ = true;
      } else {
        const double nn = static_cast<double>(n_);
        m_hat_ = std::max(1.0, std::round(static_cast<double>(own_.match_count()) * nn * nn /
                                          static_cast<double>(own_.reciprocal_pairs())));
      }
      s_ = choose_S(m_hat_, n_, params_.gamma);
      start_cluster_estimation();
    }
  }
}

SmilePolicy::Diagnostics SmilePolicy::diagnostics() const {
  Diagnostics d;
  const char* phase = phase_ == Phase::kEstimateM ? "estimate_m"
                      : phase_ == Phase::kClusterEstimation ? "cluster_estimation"
                                                            : "user_matching";
  d.emplace_back("phase", phase);
  d.emplace_back("M_hat", std::to_string(static_cast<std::uint64_t>(m_hat_)));
  d.emplace_back("M_hat_degenerate", degenerate_ ? "1" : "0");
  d.emplace_back("phase0_rounds", std::to_string(phase0_rounds_));
  d.emplace_back("S", std::to_string(s_.s));
  d.emplace_back("S_prime", std::to_string(s_.s_prime));
  d.emplace_back("phase1_end_round", std::to_string(phase1_end_));
  d.emplace_back("C_B", std::to_string(est_b_.representatives().size()));
  d.emplace_back("C_G", std::to_string(est_g_.representatives().size()));
  return d;
}

}  // namespace recip
