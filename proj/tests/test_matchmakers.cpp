#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "recip/datagen.hpp"
#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

using namespace recip;

namespace {

PreferenceMatrices constant_prefs(std::size_t n, bool like) {
  PreferenceMatrices p(n);
  for (UserIndex i = 0; i < n; ++i)
    for (UserIndex j = 0; j < n; ++j) {
      p.set_boy_likes(i, j, like);
      p.set_girl_likes(i, j, like);
    }
  return p;
}

std::vector<UserIndex> selections(const RunResult& r) {
  std::vector<UserIndex> v;
  for (const auto& rec : r.trace) {
    v.push_back(rec.girl_selected);
    v.push_back(rec.boy_selected);
  }
  return v;
}

// Representatives come from distinct planted clusters; returns the fraction of processed users whose
// representative shares their planted label.
double planted_agreement(const ClusterEstimator& est, const std::vector<std::uint32_t>& planted) {
  std::set<std::uint32_t> labels;
  for (UserIndex rep : est.representatives()) EXPECT_TRUE(labels.insert(planted[rep]).second);
  std::size_t good = 0, seen = 0;
  for (UserIndex u = 0; u < planted.size(); ++u) {
    if (!est.processed(u)) continue;
    ++seen;
    good += planted[est.representatives()[est.cluster_id(u)]] == planted[u];
  }
  return seen == 0 ? 0.0 : double(good) / double(seen);
}

SmilePolicy run_smile(const PreferenceMatrices& p, std::uint64_t s, std::uint64_t T, std::uint64_t seed,
                      RunResult* out = nullptr) {
  SmileParams sp;
  sp.s_override = s;
  SmilePolicy pol(sp);
  auto r = run_protocol(p, pol, T, seed, {false, 1});
  if (out) *out = std::move(r);
  return pol;
}

}  // namespace

TEST(Uromm, SingleUser) {
  UrommPolicy pol;
  pol.begin(1, 10, CounterRng(1, Stream::kPolicy));
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(pol.select_for_boy(0), 0u);
    EXPECT_EQ(pol.select_for_girl(0), 0u);
  }
}

TEST(Uromm, UniformSelections) {
  UrommPolicy pol;
  pol.begin(100, 0, CounterRng(4, Stream::kPolicy));
  std::vector<double> freq(100, 0);
  for (int i = 0; i < 100000; ++i) freq[pol.select_for_boy(0)] += 1;
  const double sigma = std::sqrt(1e5 * 0.01 * 0.99);
  for (double f : freq) EXPECT_NEAR(f, 1000.0, 5 * sigma);
}

TEST(Uromm, IgnoresFeedback) {
  const auto a = gen_clustered({30, 3, 3, 0.2, 0.1, 1});
  const auto b = constant_prefs(30, true);
  UrommPolicy pa, pb;
  EXPECT_EQ(selections(run_protocol(a, pa, 400, 9)), selections(run_protocol(b, pb, 400, 9)));
}

TEST(Oomm, FirstRoundUniformThenPending) {
  OommCore core(5);
  EXPECT_TRUE(core.pending(0).empty());
  core.observe_boy(3, 0);
  ASSERT_EQ(core.pending(0), std::vector<UserIndex>{3});
  CounterRng rng(0, 0);
  EXPECT_EQ(core.select_for_girl(0, rng), 3u);
  core.observe_girl(0, 3);
  EXPECT_TRUE(core.pending(0).empty());
  // A girl that already rated b does not queue b.
  core.observe_girl(1, 2);
  core.observe_boy(2, 1);
  EXPECT_TRUE(core.pending(1).empty());
}

// b in pending(g) iff (b, g) observed and (g, b) not observed, checked after every step.
TEST(Oomm, PendingInvariant) {
  const std::size_t n = 12;
  OommCore core(n);
  CounterRng rng(5, Stream::kPolicy), arrivals(5, Stream::kArrivals);
  std::set<std::pair<UserIndex, UserIndex>> bg, gb;
  for (int t = 0; t < 400; ++t) {
    const auto b = static_cast<UserIndex>(arrivals.uniform_index(n));
    const UserIndex g1 = core.select_for_boy(rng);
    core.observe_boy(b, g1);
    bg.insert({b, g1});
    const auto g = static_cast<UserIndex>(arrivals.uniform_index(n));
    const UserIndex b1 = core.select_for_girl(g, rng);
    core.observe_girl(g, b1);
    gb.insert({g, b1});
    for (UserIndex gg = 0; gg < n; ++gg) {
      std::set<UserIndex> want;
      for (UserIndex bb = 0; bb < n; ++bb)
        if (bg.count({bb, gg}) && !gb.count({gg, bb})) want.insert(bb);
      const auto& p = core.pending(gg);
      EXPECT_EQ(std::set<UserIndex>(p.begin(), p.end()), want);
      EXPECT_EQ(p.size(), want.size());
    }
  }
}

TEST(Oomm, SignOblivious) {
  const auto a = gen_adversarial_random(40, 300, 1);
  const auto b = gen_clustered({40, 4, 4, 0.5, 0.1, 2});
  OommPolicy pa, pb;
  EXPECT_EQ(selections(run_protocol(a, pa, 800, 3)), selections(run_protocol(b, pb, 800, 3)));
}

TEST(Oomm, ReciprocalPairsLinearInT) {
  const std::size_t n = 50, T = 500;
  const auto p = constant_prefs(n, false);
  double total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    OommPolicy pol;
    total += static_cast<double>(run_protocol(p, pol, T, seed, {false, 1}).ledger.reciprocal_pairs());
  }
  EXPECT_GE(total / 200, 0.01 * (T - n));
}

TEST(ChooseS, Clamps) {
  const std::size_t n = 400;
  const double ln = std::log(400.0);
  const double nn = 400.0;
  EXPECT_EQ(choose_S(nn * nn, n).s, static_cast<std::uint64_t>(std::ceil(ln)));
  EXPECT_EQ(choose_S(1.0, n).s, static_cast<std::uint64_t>(std::floor(nn / ln)));
  // ceil(4 ln 400) = ceil(23.96)
  EXPECT_EQ(choose_S(40000.0, n).s, 24u);
  EXPECT_EQ(choose_S(40000.0, n).s_prime, 96u);
  EXPECT_EQ(choose_S(40000.0, n, 0.5).s, 12u);
  EXPECT_THROW(choose_S(0.5, n), InputError);
  for (std::size_t small : {1u, 2u, 3u, 4u}) {
    const auto c = choose_S(1.0, small);
    EXPECT_GE(c.s, 1u);
  }
}

TEST(ChooseS, SPrimeFormulas) {
  // 2*6 + 4*ceil(sqrt(6 ln 400)) = 12 + 4*6
  EXPECT_EQ(smile_s_prime(6, 400), 36u);
  // 6 + ceil(sqrt(6 ln 400))
  EXPECT_EQ(ismile_s_prime(6, 400), 12u);
}

TEST(Phase0, AllLikeEstimate) {
  const std::size_t n = 60;
  const auto p = constant_prefs(n, true);
  SmilePolicy pol;
  run_protocol(p, pol, 2000, 1, {false, 1});
  EXPECT_FALSE(pol.m_hat_degenerate());
  EXPECT_GE(pol.m_hat(), n * n / 4.0);
  EXPECT_LE(pol.m_hat(), 4.0 * n * n);
  EXPECT_EQ(pol.s(), static_cast<std::uint64_t>(std::ceil(std::log(60.0))));
}

TEST(Phase0, AllDislikeDegenerate) {
  const std::size_t n = 20;
  SmilePolicy pol;
  run_protocol(constant_prefs(n, false), pol, 500, 1, {false, 1});
  EXPECT_TRUE(pol.m_hat_degenerate());
  EXPECT_EQ(pol.m_hat(), 1.0);
  EXPECT_EQ(pol.phase0_rounds(), n * n);
  EXPECT_EQ(pol.s(), static_cast<std::uint64_t>(std::floor(20.0 / std::log(20.0))));
}

TEST(Phase0, AdversarialMedianWithinFactorFour) {
  const std::size_t n = 200;
  const std::uint64_t m = 4000;
  std::vector<double> est;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = gen_adversarial_random(n, m, seed);
    SmilePolicy pol;
    run_protocol(p, pol, 3000, seed, {false, 1000});
    ASSERT_NE(pol.phase(), SmilePolicy::Phase::kEstimateM);
    est.push_back(pol.m_hat());
  }
  std::nth_element(est.begin(), est.begin() + 50, est.end());
  EXPECT_GE(est[50], m / 4.0);
  EXPECT_LE(est[50], 4.0 * m);
}

TEST(ClusterEstimator, ExactThresholds) {
  ClusterEstimator est(6, 2, 3, 0.0, true);
  // Subject 0 collects 3 raters and becomes a representative.
  for (UserIndex r = 0; r < 3; ++r) {
    est.add_feedback(0, r, r % 2 == 0);
    const auto out = est.evaluate(0);
    EXPECT_EQ(out, r == 2 ? ClusterEstimator::Outcome::kPromoted : ClusterEstimator::Outcome::kNone);
  }
  EXPECT_FALSE(est.add_feedback(0, 1, true));
  // Subject 1 agrees on common raters 0 and 1 and is assigned at S' = 2.
  est.add_feedback(1, 0, true);
  EXPECT_EQ(est.evaluate(1), ClusterEstimator::Outcome::kNone);
  est.add_feedback(1, 1, false);
  EXPECT_EQ(est.evaluate(1), ClusterEstimator::Outcome::kAssigned);
  EXPECT_EQ(est.cluster_id(1), 0);
  // Subject 2 disagrees, gets flagged, and is promoted at 3.
  est.add_feedback(2, 0, false);
  est.add_feedback(2, 5, true);
  EXPECT_EQ(est.evaluate(2), ClusterEstimator::Outcome::kNone);
  EXPECT_TRUE(est.candidate_flag(2));
  est.add_feedback(2, 4, true);
  EXPECT_EQ(est.evaluate(2), ClusterEstimator::Outcome::kPromoted);
  EXPECT_EQ(est.representatives(), (std::vector<UserIndex>{0, 2}));
}

TEST(ClusterEstimator, ToleranceAllowsFewMismatches) {
  ClusterEstimator strict(10, 10, 10, 0.0, false), loose(10, 10, 10, 0.2, false);
  for (auto* e : {&strict, &loose}) {
    for (UserIndex r = 0; r < 10; ++r) e->add_feedback(0, r, true);
    e->evaluate(0);
    for (UserIndex r = 0; r < 10; ++r) e->add_feedback(1, r, r != 3);
  }
  EXPECT_FALSE(strict.find_agreeing(1).has_value());
  EXPECT_EQ(loose.find_agreeing(1), 0u);
  // The allowance is a fraction of the common entries: 2 of 10 passes, 3 of 10 does not.
  for (UserIndex r = 0; r < 10; ++r) loose.add_feedback(2, r, r >= 2);
  EXPECT_EQ(loose.find_agreeing(2), 0u);
  for (UserIndex r = 0; r < 10; ++r) loose.add_feedback(3, r, r >= 3);
  EXPECT_FALSE(loose.find_agreeing(3).has_value());
}

TEST(ClusterEstimator, FirstRepresentativeInPromotionOrder) {
  ClusterEstimator est(5, 1, 2, 0.0, true);
  est.add_feedback(0, 0, true);
  est.evaluate(0);
  est.add_feedback(0, 1, true);
  ASSERT_EQ(est.evaluate(0), ClusterEstimator::Outcome::kPromoted);
  // Disagrees with representative 0 on rater 1, so it is flagged and later promoted.
  est.add_feedback(1, 1, false);
  EXPECT_EQ(est.evaluate(1), ClusterEstimator::Outcome::kNone);
  est.add_feedback(1, 2, true);
  ASSERT_EQ(est.evaluate(1), ClusterEstimator::Outcome::kPromoted);
  // Agrees with both (only common rater is 2 for rep 1, none for rep 0): the earlier one wins.
  est.add_feedback(2, 2, true);
  EXPECT_EQ(est.evaluate(2), ClusterEstimator::Outcome::kAssigned);
  EXPECT_EQ(est.cluster_id(2), 0);
  // Disagrees with rep 0 on rater 0, agrees with rep 1 vacuously.
  est.add_feedback(3, 0, false);
  EXPECT_EQ(est.evaluate(3), ClusterEstimator::Outcome::kAssigned);
  EXPECT_EQ(est.cluster_id(3), 1);
}

TEST(Smile, IdenticalColumnsGiveOneRepresentative) {
  const std::size_t n = 120;
  const auto p = gen_clustered({n, 1, 1, 0.5, 0.0, 3});
  const auto pol = run_smile(p, 4, 2 * n * n, 1);
  const auto& est = pol.girl_clusters();
  ASSERT_EQ(est.representatives().size(), 1u);
  for (UserIndex g = 0; g < n; ++g) {
    ASSERT_TRUE(est.processed(g));
    if (g != est.representatives()[0]) EXPECT_EQ(est.feedback_count(g), pol.s_prime());
  }
  EXPECT_EQ(est.feedback_count(est.representatives()[0]), n / 2);
}

TEST(Smile, TwoDistinctColumnsGiveTwoRepresentatives) {
  const std::size_t n = 200;
  PreferenceMatrices p(n);
  for (UserIndex b = 0; b < n; ++b)
    for (UserIndex g = 0; g < n; ++g) {
      p.set_boy_likes(b, g, g % 2 == 0);
      p.set_girl_likes(g, b, true);
    }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pol = run_smile(p, 5, 2 * n * n, seed);
    EXPECT_EQ(pol.girl_clusters().representatives().size(), 2u);
    EXPECT_EQ(pol.boy_clusters().representatives().size(), 1u);
  }
}

TEST(Smile, PlantedClustersRecovered) {
  const std::size_t n = 200;
  const auto s = static_cast<std::uint64_t>(std::ceil(std::log(200.0)));
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = gen_clustered_labeled({n, 10, 10, 0.2, 0.0, seed});
    const auto pol = run_smile(inst.prefs, s, 2 * n * n, seed);
    const auto cg = pol.girl_clusters().representatives().size();
    EXPECT_LE(cg, 10u);
    exact += cg == 10;
    ASSERT_EQ(pol.phase(), SmilePolicy::Phase::kUserMatching);
  }
  EXPECT_GE(exact, 48);
}

TEST(Smile, PhaseOneInvariants) {
  const std::size_t n = 150;
  const auto p = gen_clustered({n, 5, 6, 0.3, 0.02, 8});
  const auto pol = run_smile(p, 5, 2 * n * n, 2);
  EXPECT_EQ(pol.girl_cursor(), n);
  EXPECT_EQ(pol.boy_cursor(), n);
  for (const auto* est : {&pol.girl_clusters(), &pol.boy_clusters()}) {
    for (UserIndex u = 0; u < n; ++u) ASSERT_TRUE(est->processed(u));
    for (UserIndex rep : est->representatives()) EXPECT_EQ(est->feedback_count(rep), (n + 1) / 2);
  }
}

TEST(Smile, PromotionAtHalfWhenSPrimeTooLarge) {
  const std::size_t n = 40;
  const auto p = gen_clustered({n, 2, 2, 0.3, 0.0, 8});
  const auto pol = run_smile(p, 8, 2 * n * n, 2);
  EXPECT_GT(pol.s_prime(), n / 2);
  EXPECT_EQ(pol.girl_clusters().representatives().size(), n);
}

TEST(MatchingIndex, SingleMutualCell) {
  const std::size_t n = 6;
  BitMatrix bl(n, 1), gl(n, 1);
  bl.fill(true);
  gl.fill(true);
  MatchingIndex idx(std::vector<std::uint32_t>(n, 0), 1, std::vector<std::uint32_t>(n, 0), 1, bl, gl);
  EXPECT_EQ(idx.boys(0, 0).size(), n);
  EXPECT_EQ(idx.girls(0, 0).size(), n);
  BitMatrix observed(n, n);
  for (UserIndex g = 0; g < n; ++g) EXPECT_EQ(idx.next_for_boy(2, observed), g);
  EXPECT_FALSE(idx.next_for_boy(2, observed).has_value());
}

TEST(MatchingIndex, NoMutualLikesAllEmpty) {
  const std::size_t n = 8;
  BitMatrix bl(n, 2), gl(n, 3);
  for (UserIndex b = 0; b < n; ++b) bl.set(b, 0);  // girls of cluster 0 never like back
  MatchingIndex idx({0, 1, 2, 0, 1, 2, 0, 1}, 3, {0, 1, 0, 1, 0, 1, 0, 1}, 2, bl, gl);
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 2; ++j) EXPECT_TRUE(idx.girls(i, j).empty());
  BitMatrix observed(n, n);
  for (UserIndex u = 0; u < n; ++u) {
    EXPECT_FALSE(idx.next_for_boy(u, observed).has_value());
    EXPECT_FALSE(idx.next_for_girl(u, observed).has_value());
  }
}

TEST(MatchingIndex, PointerExhaustion) {
  const std::size_t n = 3;
  BitMatrix bl(n, 3), gl(n, 3);
  bl.set(0, 1);
  gl.set(1, 0);
  MatchingIndex idx({0, 1, 2}, 3, {0, 1, 2}, 3, bl, gl);
  BitMatrix observed(n, n);
  EXPECT_EQ(idx.next_for_boy(0, observed), 1u);
  EXPECT_FALSE(idx.next_for_boy(0, observed).has_value());
  EXPECT_EQ(idx.next_for_girl(1, observed), 0u);
}

// Walking every pointer reproduces the quadratic scan of cluster preferences.
TEST(MatchingIndex, WalkEqualsQuadraticOracle) {
  const std::size_t n = 90, cb = 4, cg = 5;
  CounterRng rng(3, 3);
  std::vector<std::uint32_t> ab(n), ag(n);
  for (auto& a : ab) a = static_cast<std::uint32_t>(rng.uniform_index(cb));
  for (auto& a : ag) a = static_cast<std::uint32_t>(rng.uniform_index(cg));
  BitMatrix bl(n, cg), gl(n, cb);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 0; j < cg; ++j)
      if (rng.bernoulli(0.4)) bl.set(u, j);
    for (std::size_t i = 0; i < cb; ++i)
      if (rng.bernoulli(0.4)) gl.set(u, i);
  }
  MatchingIndex idx(ab, cb, ag, cg, bl, gl);
  EXPECT_LE(idx.stored_items(), n * cg + n * cb);
  EXPECT_LE(idx.build_work(), 2 * n * (cg + cb));
  for (std::uint32_t i = 0; i < cb; ++i)
    for (std::uint32_t j = 0; j < cg; ++j) {
      const auto lb = idx.boys(i, j), lg = idx.girls(i, j);
      EXPECT_TRUE(std::is_sorted(lb.begin(), lb.end()));
      EXPECT_TRUE(std::is_sorted(lg.begin(), lg.end()));
      for (auto b : lb) EXPECT_EQ(ab[b], i);
      for (auto g : lg) EXPECT_EQ(ag[g], j);
    }
  BitMatrix observed(n, n);
  for (UserIndex b = 0; b < n; ++b) {
    std::set<UserIndex> want, got;
    for (UserIndex g = 0; g < n; ++g)
      if (bl.test(b, ag[g]) && gl.test(g, ab[b])) want.insert(g);
    while (auto g = idx.next_for_boy(b, observed)) EXPECT_TRUE(got.insert(*g).second);
    EXPECT_EQ(got, want);
  }
  // Skips what has already been observed.
  MatchingIndex again(ab, cb, ag, cg, bl, gl);
  BitMatrix gobs(n, n);
  gobs.fill(true);
  for (UserIndex g = 0; g < n; ++g) EXPECT_FALSE(again.next_for_girl(g, gobs).has_value());
}

TEST(Smile, PhaseTwoServesEveryEstimatedPair) {
  const std::size_t n = 160;
  const auto p = gen_clustered({n, 4, 4, 0.3, 0.0, 4});
  RunResult r;
  const auto pol = run_smile(p, 5, 2 * n * n, 6, &r);
  const auto& idx = pol.index();
  const auto& gest = pol.girl_clusters();
  const auto& best = pol.boy_clusters();
  std::size_t pairs = 0;
  for (UserIndex b = 0; b < n; ++b)
    for (UserIndex g = 0; g < n; ++g) {
      const UserIndex rg = gest.representatives()[gest.cluster_id(g)];
      const UserIndex rb = best.representatives()[best.cluster_id(b)];
      if (gest.liked(rg, b) && best.liked(rb, g)) {
        ++pairs;
        EXPECT_TRUE(r.ledger.boy_observed(b, g));
        EXPECT_TRUE(r.ledger.girl_observed(g, b));
      }
    }
  EXPECT_GT(pairs, 0u);
  // Pointer discipline: walk work is O(T + n (C_G + C_B) log n).
  const double cells = double(n) * double(idx.girl_clusters() + idx.boy_clusters());
  EXPECT_LE(double(idx.walk_work()), 2.0 * double(2 * n * n) + 4.0 * cells * std::log2(double(n)) + 4.0 * cells);
}

TEST(Ismile, AllLikeFindsOnlyTrueMatches) {
  const std::size_t n = 30;
  const auto p = constant_prefs(n, true);
  IsmilePolicy pol;
  const auto r = run_protocol(p, pol, 2 * n * n, 3, {false, 1});
  EXPECT_EQ(r.final_matches(), n * n);
}

TEST(Ismile, AllDislikeNoMatches) {
  const std::size_t n = 30;
  IsmilePolicy pol;
  const auto r = run_protocol(constant_prefs(n, false), pol, n * n, 3, {false, 1});
  EXPECT_EQ(r.final_matches(), 0u);
  EXPECT_EQ(pol.selection_counts()[1], 0u);
}

TEST(Ismile, ZeroToleranceNoiselessMatchesPlantedPartition) {
  const std::size_t n = 200;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto inst = gen_clustered_labeled({n, 8, 8, 0.2, 0.0, seed});
    IsmileParams ip;
    ip.tolerance = 0.0;
    ip.s = 24;  // S' = 24 + ceil(sqrt(24 ln 200)) = 36, the same S' SMILE uses with S = ceil(ln 200)
    IsmilePolicy is(ip);
    run_protocol(inst.prefs, is, 2 * n * n, seed, {false, 1});
    const auto sm = run_smile(inst.prefs, static_cast<std::uint64_t>(std::ceil(std::log(200.0))), 2 * n * n, seed);
    for (UserIndex u = 0; u < n; ++u) ASSERT_TRUE(is.girl_clusters().processed(u));
    EXPECT_EQ(is.girl_clusters().representatives().size(), sm.girl_clusters().representatives().size());
    EXPECT_EQ(is.boy_clusters().representatives().size(), sm.boy_clusters().representatives().size());
    const double a = planted_agreement(is.girl_clusters(), inst.girl_cluster);
    const double b = planted_agreement(is.boy_clusters(), inst.boy_cluster);
    const double c = planted_agreement(sm.girl_clusters(), inst.girl_cluster);
    const double d = planted_agreement(sm.boy_clusters(), inst.boy_cluster);
    EXPECT_EQ(is.s_prime(), sm.s_prime());
    EXPECT_GE(std::min(a, b), 0.95);
    EXPECT_GE(std::min(c, d), 0.95);
  }
}

TEST(Ismile, BeatsOommOnClusteredInstances) {
  const std::size_t n = 200;
  double is = 0, oo = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = gen_clustered({n, 10, 11, 0.2, std::nullopt, seed});
    IsmilePolicy a;
    OommPolicy b;
    is += area_under_curve(run_protocol(p, a, 2 * n * n, seed, {false, 1000}));
    oo += area_under_curve(run_protocol(p, b, 2 * n * n, seed, {false, 1000}));
  }
  EXPECT_GT(is, oo);
}

TEST(Registry, NamesAndErrors) {
  for (const auto& name : policy_names()) EXPECT_EQ(make_policy(name)->name(), name);
  EXPECT_THROW(make_policy("idomm"), InputError);
  PolicyParams bad;
  bad.gamma = -1;
  EXPECT_THROW(make_policy("smile", bad), InputError);
  PolicyParams tol;
  tol.tolerance = 2;
  EXPECT_THROW(make_policy("ismile", tol), InputError);
}
