#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recip/core_model.hpp"
#include "recip/rng.hpp"

namespace recip {

struct ClusteredSpec {
  std::size_t n = 0;
  std::size_t boy_clusters = 1;
  std::size_t girl_clusters = 1;
  double p_like = 0.2;
  std::optional<double> flip;  // default 1 / (2 ln n)
  std::uint64_t seed = 0;
  bool uniform_partition = false;  // default: sizes differ by at most one
  bool per_cluster_pair = false;   // default: one coin per (user, opposite cluster)
};

struct ClusteredInstance {
  PreferenceMatrices prefs;
  std::vector<std::uint32_t> boy_cluster;
  std::vector<std::uint32_t> girl_cluster;
};

double default_flip(std::size_t n);

ClusteredInstance gen_clustered_labeled(const ClusteredSpec& spec);
PreferenceMatrices gen_clustered(const ClusteredSpec& spec);

// Exactly m mutually liked pairs, every other directed edge a dislike. Requires 2m <= n^2.
PreferenceMatrices gen_adversarial_random(std::size_t n, std::uint64_t m, std::uint64_t seed);

// All girls like all boys; boys_like is tiled by 1 x (n/d) blocks of which floor(m d / n) are all-ones.
// Requires d | n and n ln n < m < n^2 - n ln n.
PreferenceMatrices gen_block_lowerbound(std::size_t n, std::size_t d, std::uint64_t m, std::uint64_t seed);

struct RandomBipartite {
  MatchingGraph graph;
  PreferenceMatrices prefs;  // both directions +1 exactly on the edges
};
RandomBipartite gen_random_bipartite(std::size_t n, double p, std::uint64_t seed);

// Uniform sample of k distinct values from [0, universe), in increasing order (Floyd's algorithm).
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t universe, std::uint64_t k, CounterRng& rng);

}  // namespace recip
