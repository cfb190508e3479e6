#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recip/bit_matrix.hpp"
#include "recip/core_model.hpp"
#include "recip/protocol.hpp"
#include "recip/rng.hpp"

namespace recip {

// All logarithms are natural.

class UrommPolicy final : public MatchmakerPolicy {
 public:
  std::string name() const override { return "uromm"; }
  void begin(std::size_t n, std::uint64_t horizon, CounterRng rng) override;
  UserIndex select_for_boy(UserIndex) override { return draw(); }
  void observe_boy(UserIndex, UserIndex, bool) override {}
  UserIndex select_for_girl(UserIndex) override { return draw(); }
  void observe_girl(UserIndex, UserIndex, bool) override {}

 private:
  UserIndex draw() { return static_cast<UserIndex>(rng_.uniform_index(n_)); }
  std::size_t n_ = 0;
  CounterRng rng_;
};

// pending(g): boys that rated g while g has not rated them yet.
class OommCore {
 public:
  OommCore() = default;
  explicit OommCore(std::size_t n);

  UserIndex select_for_boy(CounterRng& rng) const { return static_cast<UserIndex>(rng.uniform_index(n_)); }
  UserIndex select_for_girl(UserIndex girl, CounterRng& rng);
  // Both calls take the observation before it is recorded anywhere else.
  void observe_boy(UserIndex boy, UserIndex girl);
  void observe_girl(UserIndex girl, UserIndex boy);

  const std::vector<UserIndex>& pending(UserIndex girl) const { return pending_[girl]; }

 private:
  std::size_t n_ = 0;
  BitMatrix bg_seen_;
  BitMatrix gb_seen_;
  std::vector<std::vector<UserIndex>> pending_;
};

class OommPolicy final : public MatchmakerPolicy {
 public:
  std::string name() const override { return "oomm"; }
  void begin(std::size_t n, std::uint64_t horizon, CounterRng rng) override;
  UserIndex select_for_boy(UserIndex) override { return core_.select_for_boy(rng_); }
  void observe_boy(UserIndex boy, UserIndex girl, bool) override { core_.observe_boy(boy, girl); }
  UserIndex select_for_girl(UserIndex girl) override { return core_.select_for_girl(girl, rng_); }
  void observe_girl(UserIndex girl, UserIndex boy, bool) override { core_.observe_girl(girl, boy); }

  const OommCore& core() const { return core_; }

 private:
  OommCore core_;
  CounterRng rng_;
};

struct SChoice {
  std::uint64_t s = 1;
  std::uint64_t s_prime = 1;
};

// S = clamp(ceil(gamma n^2 ln n / M_hat), ceil(ln n), floor(n / ln n)), S' = 2S + 4 ceil(sqrt(S ln n)).
SChoice choose_S(double m_hat, std::size_t n, double gamma = 1.0);
std::uint64_t smile_s_prime(std::uint64_t s, std::size_t n);
std::uint64_t ismile_s_prime(std::uint64_t s, std::size_t n);  // S + ceil(sqrt(S ln n))

// Clusters "subjects" by the feedback they receive from "raters" on the other side.
// F_u is the set of distinct raters that gave feedback on u.
class ClusterEstimator {
 public:
  enum class Outcome { kNone, kAssigned, kPromoted };

  ClusterEstimator() = default;
  // exact_thresholds: tests fire when |F_u| equals the threshold, otherwise once it is reached.
  // retest_on_promotion: a flagged subject is tested again right before it would be promoted,
  // since representatives may have appeared after it was flagged.
  ClusterEstimator(std::size_t n, std::uint64_t s_prime, std::uint64_t promote_at, double tolerance,
                   bool exact_thresholds, bool retest_on_promotion = false);

  // False for a repeated (subject, rater) pair.
  bool add_feedback(UserIndex subject, UserIndex rater, bool like);
  // Runs the membership test / promotion for an unprocessed subject.
  Outcome evaluate(UserIndex subject);

  // Position in representatives() of the first representative that agrees with u, if any.
  std::optional<std::uint32_t> find_agreeing(UserIndex subject) const;

  bool processed(UserIndex u) const { return cluster_[u] >= 0; }
  // Index into representatives(), or -1.
  std::int32_t cluster_id(UserIndex u) const { return cluster_[u]; }
  bool candidate_flag(UserIndex u) const { return flag_[u] != 0; }
  std::size_t feedback_count(UserIndex u) const { return count_[u]; }
  bool asked(UserIndex subject, UserIndex rater) const { return asked_.test(subject, rater); }
  bool liked(UserIndex subject, UserIndex rater) const { return liked_.test(subject, rater); }
  const BitMatrix& asked_matrix() const { return asked_; }
  const BitMatrix& liked_matrix() const { return liked_; }
  const std::vector<UserIndex>& representatives() const { return reps_; }
  std::uint64_t s_prime() const { return s_prime_; }
  std::uint64_t promote_at() const { return promote_at_; }
  std::uint64_t work() const { return work_; }

 private:
  bool agrees(UserIndex subject, UserIndex rep) const;

  std::size_t n_ = 0;
  std::uint64_t s_prime_ = 0;
  std::uint64_t promote_at_ = 0;
  double tolerance_ = 0.0;
  bool exact_ = true;
  bool retest_ = false;
  BitMatrix asked_;
  BitMatrix liked_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint8_t> flag_;
  std::vector<std::int32_t> cluster_;
  std::vector<UserIndex> reps_;
  mutable std::uint64_t work_ = 0;
};

// C_B x C_G grid of lists. L_B(i, j): boys of cluster i estimated to like girl cluster j.
// L_G(i, j): girls of cluster j estimated to like boy cluster i. Stored flat, each list sorted.
class MatchingIndex {
 public:
  MatchingIndex() = default;
  // boy_likes is n x C_G, girl_likes is n x C_B.
  MatchingIndex(std::vector<std::uint32_t> boy_cluster, std::size_t boy_clusters,
                std::vector<std::uint32_t> girl_cluster, std::size_t girl_clusters, const BitMatrix& boy_likes,
                const BitMatrix& girl_likes);

  std::size_t boy_clusters() const { return cb_; }
  std::size_t girl_clusters() const { return cg_; }
  std::uint32_t boy_cluster(UserIndex b) const { return a_b_[b]; }
  std::uint32_t girl_cluster(UserIndex g) const { return a_g_[g]; }
  std::span<const UserIndex> boy_members(std::uint32_t i) const;
  std::span<const UserIndex> girl_members(std::uint32_t j) const;
  std::span<const UserIndex> boys(std::uint32_t i, std::uint32_t j) const;
  std::span<const UserIndex> girls(std::uint32_t i, std::uint32_t j) const;
  std::size_t stored_items() const { return lb_items_.size() + lg_items_.size(); }

  // Advance the forward pointer of b to its next estimated partner not yet observed.
  std::optional<UserIndex> next_for_boy(UserIndex b, const BitMatrix& boy_observed);
  std::optional<UserIndex> next_for_girl(UserIndex g, const BitMatrix& girl_observed);

  std::uint64_t build_work() const { return build_work_; }
  std::uint64_t walk_work() const { return walk_work_; }

 private:
  struct Pointer {
    std::uint32_t cell = 0;  // j for boys, i for girls
    std::uint32_t pos = 0;
    std::uint8_t state = 0;  // 0 unchecked, 1 walking
  };

  std::size_t cell(std::uint32_t i, std::uint32_t j) const { return static_cast<std::size_t>(i) * cg_ + j; }

  std::size_t n_ = 0;
  std::size_t cb_ = 0, cg_ = 0;
  std::vector<std::uint32_t> a_b_, a_g_;
  std::vector<std::uint32_t> mb_off_, mg_off_;
  std::vector<UserIndex> mb_, mg_;
  std::vector<std::uint32_t> lb_off_, lg_off_;
  std::vector<UserIndex> lb_items_, lg_items_;
  std::vector<Pointer> pb_, pg_;
  std::uint64_t build_work_ = 0;
  std::uint64_t walk_work_ = 0;
};

struct SmileParams {
  double gamma = 1.0;
  std::optional<std::uint64_t> s_override;  // skips Phase 0
  double tolerance = 0.0;                    // allowed mismatch fraction in the agreement test
};

class SmilePolicy final : public MatchmakerPolicy {
 public:
  enum class Phase { kEstimateM, kClusterEstimation, kUserMatching };

  explicit SmilePolicy(SmileParams params = {}) : params_(params) {}

  std::string name() const override { return "smile"; }
  void begin(std::size_t n, std::uint64_t horizon, CounterRng rng) override;
  UserIndex select_for_boy(UserIndex boy) override;
  void observe_boy(UserIndex boy, UserIndex girl, bool like) override;
  UserIndex select_for_girl(UserIndex girl) override;
  void observe_girl(UserIndex girl, UserIndex boy, bool like) override;
  Diagnostics diagnostics() const override;

  Phase phase() const { return phase_; }
  std::uint64_t s() const { return s_.s; }
  std::uint64_t s_prime() const { return s_.s_prime; }
  double m_hat() const { return m_hat_; }
  bool m_hat_degenerate() const { return degenerate_; }
  std::uint64_t phase0_rounds() const { return phase0_rounds_; }
  std::uint64_t phase1_end_round() const { return phase1_end_; }
  // Girls clustered by boys' feedback / boys clustered by girls' feedback.
  const ClusterEstimator& girl_clusters() const { return est_g_; }
  const ClusterEstimator& boy_clusters() const { return est_b_; }
  const MatchingIndex& index() const { return index_; }
  std::size_t girl_cursor() const { return cursor_g_; }
  std::size_t boy_cursor() const { return cursor_b_; }

 private:
  void start_cluster_estimation();
  void maybe_finish_cluster_estimation();
  void build_index();
  UserIndex arbitrary_girl(UserIndex boy) const;
  UserIndex arbitrary_boy(UserIndex girl) const;

  SmileParams params_;
  std::size_t n_ = 0;
  CounterRng rng_;
  Phase phase_ = Phase::kEstimateM;
  FeedbackLedger own_;
  OommCore oomm_;
  std::uint64_t round_ = 0;
  std::uint64_t phase0_rounds_ = 0;
  std::uint64_t phase1_end_ = 0;
  std::uint64_t k0_ = 0;
  double m_hat_ = 0;
  bool degenerate_ = false;
  SChoice s_;
  std::vector<UserIndex> perm_b_, perm_g_;
  std::size_t cursor_b_ = 0, cursor_g_ = 0;
  ClusterEstimator est_g_, est_b_;
  MatchingIndex index_;
};

struct IsmileParams {
  std::optional<std::uint64_t> s;          // default ceil(ln n)
  std::optional<double> tolerance;         // default 1 / ln n
};

class IsmilePolicy final : public MatchmakerPolicy {
 public:
  explicit IsmilePolicy(IsmileParams params = {}) : params_(params) {}

  std::string name() const override { return "ismile"; }
  void begin(std::size_t n, std::uint64_t horizon, CounterRng rng) override;
  UserIndex select_for_boy(UserIndex boy) override { return select(side_[0], side_[1], boy); }
  void observe_boy(UserIndex boy, UserIndex girl, bool like) override { observe(side_[0], side_[1], boy, girl, like); }
  UserIndex select_for_girl(UserIndex girl) override { return select(side_[1], side_[0], girl); }
  void observe_girl(UserIndex girl, UserIndex boy, bool like) override {
    observe(side_[1], side_[0], girl, boy, like);
  }
  Diagnostics diagnostics() const override;

  std::uint64_t s() const { return s_; }
  std::uint64_t s_prime() const { return s_prime_; }
  double tolerance() const { return tolerance_; }
  const ClusterEstimator& girl_clusters() const { return side_[0].est; }
  const ClusterEstimator& boy_clusters() const { return side_[1].est; }
  // Cluster preference of boy b for girl cluster c: 0 unknown, 1 like, 2 dislike.
  std::uint8_t boy_preference(UserIndex b, std::uint32_t c) const { return side_[0].pref[c][b]; }
  std::uint8_t girl_preference(UserIndex g, std::uint32_t c) const { return side_[1].pref[c][g]; }
  // How many selections each priority produced: reciprocal, verified, to-ask, explore, fallback, arbitrary.
  const std::array<std::uint64_t, 6>& selection_counts() const { return picks_; }

 private:
  // Serving "viewers" of one side with "items" of the other. Clusters are over items.
  struct Half {
    ClusterEstimator est;
    std::vector<std::vector<UserIndex>> members;
    std::vector<std::vector<std::uint8_t>> pref;   // [cluster][viewer]
    std::vector<std::vector<std::uint32_t>> pos;   // [cluster][viewer]
    std::vector<std::vector<std::uint32_t>> verified;  // [viewer] -> clusters liked
    std::vector<std::uint32_t> to_ask;             // [viewer] -> next cluster id to check
    std::vector<std::vector<UserIndex>> recip;     // [viewer] -> items that liked the viewer
    std::vector<std::vector<UserIndex>> deferred;  // liked the viewer, viewer's cluster estimate says dislike
    BitMatrix asked;                               // viewer x item
    BitMatrix rated_me;                            // viewer x item: item gave feedback on viewer
    std::vector<UserIndex> perm;
    std::size_t cursor = 0;
  };

  UserIndex select(Half& h, const Half& o, UserIndex viewer);
  void observe(Half& h, Half& o, UserIndex viewer, UserIndex item, bool like);
  void on_processed(Half& h, UserIndex item, ClusterEstimator::Outcome out);
  void learn_preference(Half& h, std::uint32_t c, UserIndex viewer, bool like);
  bool estimated_dislike(const Half& o, UserIndex item, UserIndex viewer) const;

  IsmileParams params_;
  std::size_t n_ = 0;
  CounterRng rng_;
  std::uint64_t s_ = 0, s_prime_ = 0;
  double tolerance_ = 0;
  Half side_[2];  // [0] serves boys with girls, [1] serves girls with boys
  std::array<std::uint64_t, 6> picks_{};
};

struct PolicyParams {
  std::optional<double> gamma;
  std::optional<std::uint64_t> s;
  std::optional<double> tolerance;
};

// Registry: "uromm", "oomm", "smile", "ismile". Unknown names throw InputError.
std::unique_ptr<MatchmakerPolicy> make_policy(const std::string& name, const PolicyParams& params = {});
const std::vector<std::string>& policy_names();

}  // namespace recip
