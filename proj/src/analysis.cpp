#include "recip/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recip/datagen.hpp"
#include "recip/errors.hpp"

namespace recip {

BitMatrix girl_columns(const PreferenceMatrices& prefs) { return prefs.boys_like().transposed(); }
BitMatrix boy_columns(const PreferenceMatrices& prefs) { return prefs.girls_like().transposed(); }

std::size_t hamming_distance(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size()) throw InputError("hamming distance needs equal lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != 0) != (b[i] != 0);
  return d;
}

std::size_t hamming_distance(const BitMatrix& m, std::size_t a, std::size_t b) {
  if (a >= m.rows() || b >= m.rows()) throw InputError("column index out of range");
  return popcount_xor(m.row(a), m.row(b));
}

namespace {

using Vec = std::vector<Word>;

void scan(const BitMatrix& cols, const std::vector<std::uint32_t>& ids, const Vec& center,
          std::vector<std::size_t>& dist, bool parallel) {
  dist.resize(ids.size());
  const std::span<const Word> c(center);
  const auto count = static_cast<std::ptrdiff_t>(ids.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) dist[i] = popcount_xor(cols.row(ids[i]), c);
}

// Bitwise majority of the listed columns; ties take the bit of `tie`.
Vec majority(const BitMatrix& cols, const std::vector<std::uint32_t>& members, const Vec& tie) {
  std::vector<std::uint32_t> ones(cols.cols(), 0);
  for (const auto j : members) {
    auto rw = cols.row(j);
    for (std::size_t w = 0; w < rw.size(); ++w)
      for (Word bits = rw[w]; bits != 0; bits &= bits - 1) ++ones[w * kWordBits + std::countr_zero(bits)];
  }
  Vec out(cols.words_per_row(), 0);
  const std::size_t m = members.size();
  for (std::size_t i = 0; i < ones.size(); ++i) {
    const bool bit = 2 * ones[i] == m ? ((tie[i / kWordBits] >> (i % kWordBits)) & 1U) != 0 : 2 * ones[i] > m;
    if (bit) out[i / kWordBits] |= Word{1} << (i % kWordBits);
  }
  return out;
}

std::vector<std::uint32_t> within(const std::vector<std::uint32_t>& ids, const std::vector<std::size_t>& dist,
                                  std::size_t limit) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (dist[i] <= limit) out.push_back(ids[i]);
  return out;
}

// Single-bit flips of the center while they enlarge the ball. With `pull`, flips that keep the ball size but
// shrink the total excess distance of outside columns are taken too. Leaves `dist` for the final center.
void climb(const BitMatrix& cols, const std::vector<std::uint32_t>& ids, std::size_t radius, Vec& center,
           std::vector<std::size_t>& dist, bool pull = false) {
  const std::size_t len = cols.cols();
  std::size_t budget = 4 * len;
  if (pull) {
    climb(cols, ids, radius, center, dist);
    std::size_t over = 0;
    for (const auto d : dist) over += d > radius ? d - radius : 0;
    const std::size_t work = std::max<std::size_t>(ids.size() * len, 1);
    budget = std::min({budget, 2 * over + 8, std::max<std::size_t>((std::size_t{1} << 22) / work, 1)});
  } else {
    scan(cols, ids, center, dist, false);
  }
  std::vector<long> gain(len), excess(len);
  for (std::size_t step = 0; step < budget; ++step) {
    std::fill(gain.begin(), gain.end(), 0);
    std::fill(excess.begin(), excess.end(), 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const bool edge = dist[i] == radius || dist[i] == radius + 1;
      const bool outside = pull && dist[i] > radius;
      if (!edge && !outside) continue;
      const auto rw = cols.row(ids[i]);
      for (std::size_t w = 0; w < rw.size(); ++w) {
        const Word diff = rw[w] ^ center[w];
        const Word same = ~diff & cols.valid_mask(w);
        if (edge) {
          for (Word bits = dist[i] == radius ? same : diff; bits != 0; bits &= bits - 1)
            gain[w * kWordBits + std::countr_zero(bits)] += dist[i] == radius ? -1 : 1;
        }
        if (outside) {
          for (Word bits = diff; bits != 0; bits &= bits - 1) --excess[w * kWordBits + std::countr_zero(bits)];
          for (Word bits = same; bits != 0; bits &= bits - 1) ++excess[w * kWordBits + std::countr_zero(bits)];
        }
      }
    }
    std::size_t bit = len;
    for (std::size_t i = 0; i < len; ++i) {
      const bool better = gain[i] > 0 || (pull && gain[i] == 0 && excess[i] < 0);
      if (better && (bit == len || gain[i] > gain[bit] || (gain[i] == gain[bit] && excess[i] < excess[bit]))) bit = i;
    }
    if (bit == len) break;
    center[bit / kWordBits] ^= Word{1} << (bit % kWordBits);
    const bool now = ((center[bit / kWordBits] >> (bit % kWordBits)) & 1U) != 0;
    for (std::size_t i = 0; i < ids.size(); ++i) dist[i] = cols.test(ids[i], bit) != now ? dist[i] + 1 : dist[i] - 1;
  }
}

// Drops balls whose members all fit in other balls, and merges pairs of balls that one center can hold.
void refine(const BitMatrix& cols, std::size_t radius, std::vector<Vec>& centers, CoveringResult& out) {
  std::vector<std::vector<std::uint32_t>> members(centers.size());
  for (std::uint32_t j = 0; j < out.assignment.size(); ++j) members[out.assignment[j]].push_back(j);
  auto near = [&](std::uint32_t j, const Vec& c) { return popcount_xor(cols.row(j), std::span<const Word>(c)) <= radius; };
  std::vector<std::size_t> dist;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      std::vector<std::size_t> home(members[k].size());
      bool ok = true;
      for (std::size_t i = 0; i < home.size() && ok; ++i) {
        ok = false;
        for (std::size_t o = 0; o < centers.size() && !ok; ++o) {
          if (o != k && near(members[k][i], centers[o])) {
            home[i] = o;
            ok = true;
          }
        }
      }
      if (!ok) continue;
      for (std::size_t i = 0; i < home.size(); ++i) members[home[i]].push_back(members[k][i]);
      centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(k));
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(k));
      --k;
      changed = true;
    }
    for (std::size_t a = 0; a < centers.size(); ++a) {
      for (std::size_t b = a + 1; b < centers.size(); ++b) {
        if (popcount_xor(std::span<const Word>(centers[a]), std::span<const Word>(centers[b])) > 2 * radius) continue;
        const auto& ma = members[a];
        const auto& mb = members[b];
        bool tight = true;
        for (std::size_t i = 0; i < ma.size() && tight; ++i)
          for (std::size_t j = 0; j < mb.size() && tight; ++j) tight = hamming_distance(cols, ma[i], mb[j]) <= 2 * radius;
        if (!tight) continue;
        std::vector<std::uint32_t> u = ma;
        u.insert(u.end(), mb.begin(), mb.end());
        Vec c = majority(cols, u, centers[a]);
        climb(cols, u, radius, c, dist, true);
        if (std::any_of(dist.begin(), dist.end(), [&](std::size_t d) { return d > radius; })) continue;
        centers[a] = std::move(c);
        members[a] = std::move(u);
        centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(b));
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(b));
        --b;
        changed = true;
      }
    }
  }
  for (std::uint32_t k = 0; k < centers.size(); ++k) {
    std::sort(members[k].begin(), members[k].end());
    for (const auto j : members[k]) out.assignment[j] = k;
  }
  out.centers.resize(centers.size());
  for (std::uint32_t k = 0; k < centers.size(); ++k) out.centers[k] = members[k].front();
}

CoveringResult cover(const BitMatrix& cols, std::size_t radius, const CoveringOptions& opt, bool parallel) {
  const std::size_t c = cols.rows();
  std::vector<std::uint32_t> remaining(c);
  std::iota(remaining.begin(), remaining.end(), 0U);
  if (opt.order_seed) {
    CounterRng rng(*opt.order_seed, Stream::kAnalysis);
    rng.shuffle(std::span<std::uint32_t>(remaining));
  }

  CoveringResult out;
  out.radius = radius;
  out.assignment.assign(c, 0);
  std::vector<Vec> centers;
  std::vector<std::size_t> dist;
  std::vector<std::uint8_t> done(c, 0);

  while (!remaining.empty()) {
    const auto cr = cols.row(remaining.front());
    Vec center(cr.begin(), cr.end());
    scan(cols, remaining, center, dist, parallel);
    std::vector<std::uint32_t> best = within(remaining, dist, radius);
    Vec best_center = center;

    if (opt.mode == CoveringMode::kConsensus) {
      const Vec seed = center;
      // Two starting pools: the seed's own ball and its doubled neighbourhood.
      for (const auto& pool : {best, within(remaining, dist, 2 * radius)}) {
        center = majority(cols, pool, seed);
        for (int it = 0; it < 4; ++it) {
          scan(cols, remaining, center, dist, parallel);
          auto ball = within(remaining, dist, radius);
          if (ball.size() > best.size()) {
            best = ball;
            best_center = center;
          }
          if (ball.empty()) break;
          Vec next = majority(cols, ball, seed);
          if (next == center) break;
          center = std::move(next);
        }
      }
    }

    if (opt.mode == CoveringMode::kConsensus) {
      climb(cols, remaining, radius, best_center, dist);
      auto ball = within(remaining, dist, radius);
      if (ball.size() > best.size()) best = std::move(ball);
    }

    const auto k = static_cast<std::uint32_t>(centers.size());
    out.centers.push_back(best.front());
    centers.push_back(std::move(best_center));
    for (const auto j : best) {
      out.assignment[j] = k;
      done[j] = 1;
    }
    std::erase_if(remaining, [&](std::uint32_t j) { return done[j] != 0; });
  }

  if (opt.mode == CoveringMode::kConsensus) refine(cols, radius, centers, out);

  out.size = centers.size();
  out.center_vectors = BitMatrix(out.size, cols.cols());
  for (std::size_t k = 0; k < out.size; ++k) std::copy(centers[k].begin(), centers[k].end(), out.center_vectors.row(k).begin());
  return out;
}

}  // namespace

CoveringResult greedy_covering(const BitMatrix& columns, std::size_t radius, const CoveringOptions& options) {
  return cover(columns, radius, options, true);
}

CoveringResult greedy_covering_serial(const BitMatrix& columns, std::size_t radius, const CoveringOptions& options) {
  return cover(columns, radius, options, false);
}

void check_covering(const BitMatrix& columns, const CoveringResult& cover) {
  if (cover.assignment.size() != columns.rows() || cover.centers.size() != cover.size ||
      cover.center_vectors.rows() != cover.size) {
    throw AssertionFailure("covering has inconsistent sizes");
  }
  if (columns.rows() > 0 && (cover.size < 1 || cover.size > columns.rows())) {
    throw AssertionFailure("covering size out of range");
  }
  for (std::size_t j = 0; j < columns.rows(); ++j) {
    const auto k = cover.assignment[j];
    if (k >= cover.size || popcount_xor(columns.row(j), cover.center_vectors.row(k)) > cover.radius) {
      throw AssertionFailure("column " + std::to_string(j) + " lies outside its ball");
    }
  }
}

std::size_t exact_covering_number(const BitMatrix& columns, std::size_t radius) {
  const std::size_t c = columns.rows(), len = columns.cols();
  if (c > 12 || len > 12) throw InputError("exact covering is limited to 12 columns of length 12");
  if (c == 0) return 0;
  std::vector<std::uint32_t> value(c);
  for (std::size_t j = 0; j < c; ++j) value[j] = static_cast<std::uint32_t>(columns.row(j)[0]);
  const std::uint32_t full = (1U << c) - 1;
  std::vector<std::uint8_t> seen(full + 1, 0);
  std::vector<std::uint32_t> balls;
  for (std::uint32_t v = 0; v < (1U << len); ++v) {
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < c; ++j)
      if (static_cast<std::size_t>(std::popcount(v ^ value[j])) <= radius) mask |= 1U << j;
    if (mask != 0 && !seen[mask]) {
      seen[mask] = 1;
      balls.push_back(mask);
    }
  }
  std::vector<std::uint8_t> best(full + 1, 0xFF);
  best[0] = 0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (best[mask] == 0xFF) continue;
    for (const auto b : balls) {
      auto& slot = best[mask | b];
      slot = std::min<std::uint8_t>(slot, static_cast<std::uint8_t>(best[mask] + 1));
    }
  }
  return best[full];
}

std::size_t cluster_count_bound(const BitMatrix& columns, std::size_t s_prime) {
  std::size_t best = columns.rows();
  for (std::size_t rho = 0; 3 * rho * s_prime < best; ++rho) {
    best = std::min(best, greedy_covering(columns, rho / 2).size + 3 * rho * s_prime);
    if (s_prime == 0) break;
  }
  return best;
}

std::vector<std::size_t> standard_radii(std::size_t n) {
  if (n < 2) throw InputError("radii need n >= 2");
  const double nn = static_cast<double>(n), l = std::log(nn);
  return {static_cast<std::size_t>(std::floor(2 * nn / l)), static_cast<std::size_t>(std::floor(nn / l)),
          static_cast<std::size_t>(std::floor(nn / (2 * l)))};
}

double lemma1_distance_threshold(std::size_t rows, double beta, std::size_t k) {
  const double r = static_cast<double>(rows);
  return beta * r / static_cast<double>(k) * std::log(r);
}

SampleAgreementTrial lemma1_trial(const BitMatrix& columns, std::size_t target, double beta, std::size_t k,
                                  CounterRng& rng) {
  const std::size_t c = columns.rows(), r = columns.cols();
  if (c < 2 || r < c) throw InputError("sample agreement trial needs r >= c > 1");
  if (target >= c) throw InputError("target column out of range");
  if (k > r) throw InputError("sample size exceeds row count");
  if (!(beta > 0) || static_cast<double>(k) < std::ceil(beta * std::log(static_cast<double>(r)))) {
    throw InputError("sample size must be at least ceil(beta ln r)");
  }
  SampleAgreementTrial out;
  out.rows = r;
  out.cols = c;
  out.target = target;
  out.beta = beta;
  out.sample = sample_without_replacement(r, k, rng);
  Vec mask(columns.words_per_row(), 0);
  for (const auto i : out.sample) mask[i / kWordBits] |= Word{1} << (i % kWordBits);
  const auto t = columns.row(target);
  for (std::size_t j = 0; j < c; ++j) {
    const auto col = columns.row(j);
    bool agree = true;
    for (std::size_t w = 0; w < mask.size() && agree; ++w) agree = ((col[w] ^ t[w]) & mask[w]) == 0;
    if (agree) {
      out.agreeing.push_back(static_cast<std::uint32_t>(j));
      out.distances.push_back(popcount_xor(col, t));
    }
  }
  return out;
}

namespace {

void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

}  // namespace

RunSummary aggregate_runs(const std::vector<RunResult>& results) {
  if (results.empty()) throw InputError("no runs to aggregate");
  RunSummary s;
  s.horizon = results.front().horizon;
  s.curve_stride = results.front().curve_stride;
  s.runs = results.size();
  const std::size_t len = results.front().curve.size();
  for (const auto& r : results) {
    if (r.horizon != s.horizon) throw InputError("runs have different horizons");
    if (r.curve_stride != s.curve_stride || r.curve.size() != len) throw InputError("runs have different curve grids");
  }
  for (std::size_t i = 0; i < len; ++i) s.rounds.push_back(results.front().curve_round(i));
  s.mean.resize(len);
  s.stddev.resize(len);
  std::vector<double> xs(results.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < results.size(); ++k) xs[k] = results[k].curve[i];
    mean_sd(xs, s.mean[i], s.stddev[i]);
  }
  double auc = 0;
  std::map<std::string, std::vector<double>> aucs;
  for (const auto& r : results) {
    const double a = area_under_curve(r);
    auc += a;
    aucs[r.policy_name].push_back(a);
    s.per_policy[r.policy_name].finals.push_back(r.final_matches());
  }
  s.mean_auc = auc / static_cast<double>(results.size());
  for (auto& [name, st] : s.per_policy) {
    std::vector<double> f(st.finals.begin(), st.finals.end());
    mean_sd(f, st.mean, st.stddev);
    const auto& a = aucs[name];
    st.mean_auc = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  }
  return s;
}

}  // namespace recip
