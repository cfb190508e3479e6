#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

namespace recip {

ClusterEstimator::ClusterEstimator(std::size_t n, std::uint64_t s_prime, std::uint64_t promote_at, double tolerance,
                                   bool exact_thresholds, bool retest_on_promotion)
    : n_(n),
      s_prime_(s_prime),
      promote_at_(promote_at),
      tolerance_(tolerance),
      exact_(exact_thresholds),
      retest_(retest_on_promotion),
      asked_(n, n),
      liked_(n, n),
      count_(n, 0),
      flag_(n, 0),
      cluster_(n, -1) {
  if (promote_at < 1) throw InputError("promotion threshold must be at least 1");
  if (tolerance < 0.0 || tolerance > 1.0) throw InputError("tolerance must lie in [0, 1]");
}

bool ClusterEstimator::add_feedback(UserIndex subject, UserIndex rater, bool like) {
  if (asked_.test(subject, rater)) return false;
  asked_.set(subject, rater);
  liked_.assign(subject, rater, like);
  ++count_[subject];
  return true;
}

bool ClusterEstimator::agrees(UserIndex subject, UserIndex rep) const {
  const auto as = asked_.row(subject), ar = asked_.row(rep);
  const auto ls = liked_.row(subject), lr = liked_.row(rep);
  std::size_t common = 0, mismatch = 0;
  for (std::size_t w = 0; w < as.size(); ++w) {
    const Word both = as[w] & ar[w];
    common += std::popcount(both);
    mismatch += std::popcount(both & (ls[w] ^ lr[w]));
  }
  work_ += as.size();
  return static_cast<double>(mismatch) <= tolerance_ * static_cast<double>(common);
}

std::optional<std::uint32_t> ClusterEstimator::find_agreeing(UserIndex subject) const {
  for (std::uint32_t k = 0; k < reps_.size(); ++k) {
    if (agrees(subject, reps_[k])) return k;
  }
  return std::nullopt;
}

ClusterEstimator::Outcome ClusterEstimator::evaluate(UserIndex u) {
  if (cluster_[u] >= 0) return Outcome::kNone;
  const std::uint64_t c = count_[u];
  const bool test_now = exact_ ? c == s_prime_ : c >= s_prime_;
  bool tested = false;
  if (flag_[u] == 0 && test_now) {
    tested = true;
    if (const auto k = find_agreeing(u)) {
      cluster_[u] = static_cast<std::int32_t>(*k);
      return Outcome::kAssigned;
    }
    flag_[u] = 1;
  }
  const bool promote_now = exact_ ? c == promote_at_ : c >= promote_at_;
  if (promote_now) {
    if (retest_ && !tested) {
      if (const auto k = find_agreeing(u)) {
        cluster_[u] = static_cast<std::int32_t>(*k);
        return Outcome::kAssigned;
      }
    }
    cluster_[u] = static_cast<std::int32_t>(reps_.size());
    reps_.push_back(u);
    return Outcome::kPromoted;
  }
  return Outcome::kNone;
}

}  // namespace recip
