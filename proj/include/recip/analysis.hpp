#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recip/bit_matrix.hpp"
#include "recip/core_model.hpp"
#include "recip/protocol.hpp"
#include "recip/rng.hpp"

namespace recip {

// Column sets are stored one vector per BitMatrix row.
// Girl g's vector: how every boy rates g. Boy b's vector: how every girl rates b.
BitMatrix girl_columns(const PreferenceMatrices& prefs);
BitMatrix boy_columns(const PreferenceMatrices& prefs);

std::size_t hamming_distance(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);
std::size_t hamming_distance(const BitMatrix& m, std::size_t a, std::size_t b);

enum class CoveringMode {
  kFirstFit,   // ball centered on the first uncovered column
  kConsensus,  // ball centered on a bitwise majority of nearby uncovered columns
};

struct CoveringOptions {
  CoveringMode mode = CoveringMode::kConsensus;
  std::optional<std::uint64_t> order_seed;  // shuffle the scan order
};

struct CoveringResult {
  std::size_t radius = 0;
  std::vector<std::uint32_t> centers;     // exemplar column of each ball
  BitMatrix center_vectors;               // row k: center of ball k
  std::vector<std::uint32_t> assignment;  // column -> ball
  std::size_t size = 0;
};

CoveringResult greedy_covering(const BitMatrix& columns, std::size_t radius, const CoveringOptions& options = {});
CoveringResult greedy_covering_serial(const BitMatrix& columns, std::size_t radius,
                                      const CoveringOptions& options = {});

// Throws AssertionFailure unless every column lies within the radius of its center.
void check_covering(const BitMatrix& columns, const CoveringResult& cover);

// Minimum number of radius balls with centers anywhere in {0,1}^len. At most 12 columns of length at most 12.
std::size_t exact_covering_number(const BitMatrix& columns, std::size_t radius);

// min over rho of (greedy cover at floor(rho/2)) + 3 rho S', capped at the column count.
std::size_t cluster_count_bound(const BitMatrix& columns, std::size_t s_prime);

// Radii floor(2n/ln n), floor(n/ln n), floor(n/(2 ln n)).
std::vector<std::size_t> standard_radii(std::size_t n);

struct SampleAgreementTrial {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t target = 0;
  double beta = 0;
  std::vector<std::uint64_t> sample;  // distinct row positions
  std::vector<std::uint32_t> agreeing;
  std::vector<std::size_t> distances;  // full distance of each agreeing column to the target
};

// Rows of the analysed matrix are positions; `columns` holds one column per BitMatrix row.
SampleAgreementTrial lemma1_trial(const BitMatrix& columns, std::size_t target, double beta, std::size_t k,
                                  CounterRng& rng);
double lemma1_distance_threshold(std::size_t rows, double beta, std::size_t k);

struct FinalStats {
  std::vector<std::uint64_t> finals;
  double mean = 0;
  double stddev = 0;
  double mean_auc = 0;
};

struct RunSummary {
  std::uint64_t horizon = 0;
  std::uint64_t curve_stride = 1;
  std::size_t runs = 0;
  std::vector<std::uint64_t> rounds;
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation, 0 for a single run
  double mean_auc = 0;
  std::map<std::string, FinalStats> per_policy;
};

RunSummary aggregate_runs(const std::vector<RunResult>& results);

}  // namespace recip
