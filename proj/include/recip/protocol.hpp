#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "recip/bit_matrix.hpp"
#include "recip/core_model.hpp"
#include "recip/rng.hpp"

namespace recip {

struct RoundRecord {
  std::uint64_t t = 0;  // 1-based
  UserIndex boy = 0;
  UserIndex girl_selected = 0;
  std::int8_t sign_bg = -1;
  UserIndex girl = 0;
  UserIndex boy_selected = 0;
  std::int8_t sign_gb = -1;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

using RoundTrace = std::vector<RoundRecord>;

// E_t(A) and everything derived from it. Repeat observations are no-ops.
// Policies reuse this class as the memory of what they themselves observed.
class FeedbackLedger {
 public:
  FeedbackLedger() = default;
  explicit FeedbackLedger(std::size_t n);

  std::size_t n() const { return n_; }

  // Both return true iff the observation uncovers a new match.
  bool record_boy_to_girl(UserIndex boy, UserIndex girl, bool like);
  bool record_girl_to_boy(UserIndex girl, UserIndex boy, bool like);

  bool boy_observed(UserIndex boy, UserIndex girl) const { return bg_seen_.test(boy, girl); }
  bool boy_liked(UserIndex boy, UserIndex girl) const { return bg_like_.test(boy, girl); }
  bool girl_observed(UserIndex girl, UserIndex boy) const { return gb_seen_.test(girl, boy); }
  bool girl_liked(UserIndex girl, UserIndex boy) const { return gb_like_.test(girl, boy); }
  bool is_uncovered(UserIndex boy, UserIndex girl) const { return matched_.test(boy, girl); }

  // Row b: girls g with (b, g) observed / liked. Row g: boys b with (g, b) observed / liked.
  const BitMatrix& boy_observed_matrix() const { return bg_seen_; }
  const BitMatrix& boy_liked_matrix() const { return bg_like_; }
  const BitMatrix& girl_observed_matrix() const { return gb_seen_; }
  const BitMatrix& girl_liked_matrix() const { return gb_like_; }

  std::size_t observed_count() const { return observed_; }
  std::size_t reciprocal_pairs() const { return reciprocal_; }
  std::size_t match_count() const { return uncovered_.size(); }
  // (boy, girl) in the order the matches were uncovered.
  const std::vector<std::pair<UserIndex, UserIndex>>& uncovered() const { return uncovered_; }

 private:
  bool complete_pair(UserIndex boy, UserIndex girl);

  std::size_t n_ = 0;
  BitMatrix bg_seen_, bg_like_, gb_seen_, gb_like_, matched_;
  std::size_t observed_ = 0;
  std::size_t reciprocal_ = 0;
  std::vector<std::pair<UserIndex, UserIndex>> uncovered_;
};

// A policy only ever sees arrival ids, its own selections and the signs of
// those selections. It never receives the preference matrices.
class MatchmakerPolicy {
 public:
  using Diagnostics = std::vector<std::pair<std::string, std::string>>;

  virtual ~MatchmakerPolicy() = default;

  virtual std::string name() const = 0;
  // Called once before round 1. `rng` is the policy stream of the run seed.
  virtual void begin(std::size_t n, std::uint64_t horizon, CounterRng rng) = 0;
  virtual UserIndex select_for_boy(UserIndex boy) = 0;
  virtual void observe_boy(UserIndex boy, UserIndex girl, bool like) = 0;
  virtual UserIndex select_for_girl(UserIndex girl) = 0;
  virtual void observe_girl(UserIndex girl, UserIndex boy, bool like) = 0;

  virtual Diagnostics diagnostics() const { return {}; }
};

struct RunOptions {
  bool record_trace = true;
  // Curve entries are kept for t divisible by the stride and for t = T.
  std::uint64_t curve_stride = 1;
};

struct RunResult {
  RoundTrace trace;
  FeedbackLedger ledger;
  std::string policy_name;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::uint64_t curve_stride = 1;
  std::vector<std::uint32_t> curve;  // M_t at the recorded t
  std::uint64_t curve_sum = 0;       // sum of M_t over every t, independent of the stride
  std::vector<std::uint32_t> boy_arrivals;   // t(b)
  std::vector<std::uint32_t> girl_arrivals;  // t(g)
  MatchmakerPolicy::Diagnostics diagnostics;

  std::size_t final_matches() const { return ledger.match_count(); }
  // Round index of curve[i].
  std::uint64_t curve_round(std::size_t i) const;
};

// Arrival draws for round t come first in each round from the arrivals stream,
// boy then girl. Exposed so the arrival sequence can be replayed without a policy.
class ArrivalSource {
 public:
  ArrivalSource(std::size_t n, std::uint64_t seed) : n_(n), rng_(seed, Stream::kArrivals) {}
  std::pair<UserIndex, UserIndex> next() {
    const auto b = static_cast<UserIndex>(rng_.uniform_index(n_));
    const auto g = static_cast<UserIndex>(rng_.uniform_index(n_));
    return {b, g};
  }

 private:
  std::size_t n_;
  CounterRng rng_;
};

RunResult run_protocol(const PreferenceMatrices& prefs, MatchmakerPolicy& policy, std::uint64_t horizon,
                       std::uint64_t seed, const RunOptions& options = {});

const std::vector<std::uint32_t>& matches_curve(const RunResult& r);
double area_under_curve(const RunResult& r);
double area_under_curve(const std::vector<std::uint32_t>& full_curve);

// CSV: t,boy,girl_selected,sign_bg,girl,boy_selected,sign_gb
void write_trace_csv(std::ostream& out, const RoundTrace& trace);
RoundTrace read_trace_csv(std::istream& in);
void save_trace_csv(const std::filesystem::path& path, const RoundTrace& trace);
RoundTrace load_trace_csv(const std::filesystem::path& path);

// CSV: t,matches
void write_curve_csv(std::ostream& out, const RunResult& r);

}  // namespace recip
