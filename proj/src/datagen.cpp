#include "recip/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "recip/errors.hpp"
#include "recip/rng.hpp"

namespace recip {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + " must lie in [0, 1]");
}

std::vector<std::uint32_t> partition(std::size_t n, std::size_t clusters, bool uniform, CounterRng& rng) {
  std::vector<std::uint32_t> label(n);
  if (uniform) {
    for (auto& l : label) l = static_cast<std::uint32_t>(rng.uniform_index(clusters));
  } else {
    for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<std::uint32_t>(i % clusters);
    rng.shuffle(std::span<std::uint32_t>(label));
  }
  return label;
}

// coin[u][c]: does user u like opposite-side cluster c.
std::vector<std::vector<std::uint8_t>> coins(const std::vector<std::uint32_t>& own_label, std::size_t own_clusters,
                                             std::size_t other_clusters, double p, bool per_pair,
                                             CounterRng& rng) {
  const std::size_t n = own_label.size();
  std::vector<std::vector<std::uint8_t>> out(n, std::vector<std::uint8_t>(other_clusters));
  if (per_pair) {
    std::vector<std::vector<std::uint8_t>> block(own_clusters, std::vector<std::uint8_t>(other_clusters));
    for (auto& row : block)
      for (auto& x : row) x = rng.bernoulli(p);
    for (std::size_t u = 0; u < n; ++u) out[u] = block[own_label[u]];
  } else {
    for (auto& row : out)
      for (auto& x : row) x = rng.bernoulli(p);
  }
  return out;
}

}  // namespace

double default_flip(std::size_t n) {
  if (n < 2) return 0.0;
  return 1.0 / (2.0 * std::log(static_cast<double>(n)));
}

ClusteredInstance gen_clustered_labeled(const ClusteredSpec& spec) {
  const std::size_t n = spec.n;
  if (n == 0) throw InputError("n must be positive");
  if (spec.boy_clusters < 1 || spec.boy_clusters > n || spec.girl_clusters < 1 || spec.girl_clusters > n) {
    throw InputError("cluster counts must lie in [1, n]");
  }
  const double flip = spec.flip.value_or(default_flip(n));
  check_probability(spec.p_like, "p_like");
  check_probability(flip, "flip");

  CounterRng rng(spec.seed, Stream::kGenerator);
  ClusteredInstance out;
  out.boy_cluster = partition(n, spec.boy_clusters, spec.uniform_partition, rng);
  out.girl_cluster = partition(n, spec.girl_clusters, spec.uniform_partition, rng);
  const auto boy_coin =
      coins(out.boy_cluster, spec.boy_clusters, spec.girl_clusters, spec.p_like, spec.per_cluster_pair, rng);
  const auto girl_coin =
      coins(out.girl_cluster, spec.girl_clusters, spec.boy_clusters, spec.p_like, spec.per_cluster_pair, rng);

  out.prefs = PreferenceMatrices(n);
  for (UserIndex b = 0; b < n; ++b)
    for (UserIndex g = 0; g < n; ++g) {
      const bool like = boy_coin[b][out.girl_cluster[g]] != 0;
      out.prefs.set_boy_likes(b, g, flip > 0.0 && rng.bernoulli(flip) ? !like : like);
    }
  for (UserIndex g = 0; g < n; ++g)
    for (UserIndex b = 0; b < n; ++b) {
      const bool like = girl_coin[g][out.boy_cluster[b]] != 0;
      out.prefs.set_girl_likes(g, b, flip > 0.0 && rng.bernoulli(flip) ? !like : like);
    }
  return out;
}

PreferenceMatrices gen_clustered(const ClusteredSpec& spec) { return gen_clustered_labeled(spec).prefs; }

std::vector<std::uint64_t> sample_without_replacement(std::uint64_t universe, std::uint64_t k, CounterRng& rng) {
  if (k > universe) throw InputError("sample larger than universe");
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = universe - k; j < universe; ++j) {
    const std::uint64_t t = rng.uniform_index(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

PreferenceMatrices gen_adversarial_random(std::size_t n, std::uint64_t m, std::uint64_t seed) {
  if (n == 0) throw InputError("n must be positive");
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * n;
  if (2 * m > pairs) throw InputError("m must not exceed n^2 / 2");
  CounterRng rng(seed, Stream::kGenerator);
  PreferenceMatrices prefs(n);
  for (const std::uint64_t e : sample_without_replacement(pairs, m, rng)) {
    const auto b = static_cast<UserIndex>(e / n), g = static_cast<UserIndex>(e % n);
    prefs.set_boy_likes(b, g, true);
    prefs.set_girl_likes(g, b, true);
  }
  return prefs;
}

PreferenceMatrices gen_block_lowerbound(std::size_t n, std::size_t d, std::uint64_t m, std::uint64_t seed) {
  if (n == 0 || d == 0 || n % d != 0) throw InputError("d must divide n");
  const double nn = static_cast<double>(n);
  const double margin = nn * std::log(nn);
  const double md = static_cast<double>(m);
  if (!(md > margin && md < nn * nn - margin)) throw InputError("m must lie in (n ln n, n^2 - n ln n)");
  const std::size_t width = n / d;
  const std::uint64_t blocks = m * d / n;
  CounterRng rng(seed, Stream::kGenerator);
  BitMatrix boys(n, n), girls(n, n);
  girls.fill(true);
  for (const std::uint64_t k : sample_without_replacement(static_cast<std::uint64_t>(n) * d, blocks, rng)) {
    const std::size_t row = k / d, col0 = (k % d) * width;
    for (std::size_t c = col0; c < col0 + width; ++c) boys.set(row, c);
  }
  return {std::move(boys), std::move(girls)};
}

RandomBipartite gen_random_bipartite(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw InputError("n must be positive");
  check_probability(p, "p");
  CounterRng rng(seed, Stream::kGenerator);
  BitMatrix adj(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t g = 0; g < n; ++g)
      if (rng.bernoulli(p)) adj.set(b, g);
  BitMatrix girls = adj.transposed();
  PreferenceMatrices prefs(adj, std::move(girls));
  return {MatchingGraph(std::move(adj)), std::move(prefs)};
}

}  // namespace recip
