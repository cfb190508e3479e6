#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recip/analysis.hpp"
#include "recip/ingest.hpp"
#include "recip/matchmakers.hpp"

namespace recip::cmd {

inline constexpr const char* kVersion = "recip 1.0.0";

struct GenOptions {
  std::string generator = "clustered";  // clustered | adversarial | block | bipartite
  std::size_t n = 0;
  std::size_t boy_clusters = 1;
  std::size_t girl_clusters = 1;
  double p = 0.2;  // like probability (clustered) or edge probability (bipartite)
  std::optional<double> flip;
  std::uint64_t m = 0;  // adversarial, block
  std::size_t d = 0;    // block
  bool uniform_partition = false;
  bool per_cluster_pair = false;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};
// Writes the instance to `out` and a one-line manifest to `out` + ".manifest". Returns the manifest line.
std::string gen(const GenOptions& opt);

struct IngestOptions {
  std::filesystem::path ratings;
  std::filesystem::path genders;
  double coeff = 2.0;
  CountMode mode = CountMode::kCombined;
  std::filesystem::path out;
  std::optional<std::filesystem::path> report;
};
DensifyReport ingest(const IngestOptions& opt);

struct CoverOptions {
  std::filesystem::path instance;
  std::vector<std::size_t> radii;  // empty: floor(2n/ln n), floor(n/ln n), floor(n/(2 ln n))
  CoveringMode mode = CoveringMode::kConsensus;
  std::optional<std::uint64_t> order_seed;
};
// CSV radius,boys_cover,girls_cover
void cover(const CoverOptions& opt, std::ostream& out);

struct ExperimentConfig {
  std::filesystem::path instance;
  std::vector<std::string> policies;
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out;
  std::map<std::string, PolicyParams> params;
  std::uint64_t curve_stride = 1;
  bool traces = false;
};

// key=value lines: instance, policies (comma list), T, seeds (count, from `seed`), seed, seed_list (comma list),
// out, stride, traces, and parameter keys gamma / S / tolerance, optionally prefixed by a policy name and a dot.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
// Applies an unprefixed parameter to every listed policy that takes it.
void set_shared_param(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void set_policy_param(ExperimentConfig& cfg, const std::string& policy, const std::string& key,
                      const std::string& value);
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::uint64_t count);

// Runs every (policy, seed) and writes manifest.txt, curves.csv, auc.csv, auc_seeds.csv, final.csv, yardstick.csv,
// clusters.csv (SMILE family only) and optionally traces/<policy>_<seed>.csv into cfg.out.
void run(const ExperimentConfig& cfg);

struct PolicySummary {
  std::string policy;
  double mean_final = 0;
  double mean_auc = 0;
  double mean_optimal = 0;
  double fraction_of_m = 0;
  std::optional<double> mean_cb;
  std::optional<double> mean_cg;
  std::string bound_status;  // SMILE family: holds / flagged / unavailable
};

struct RunReport {
  std::size_t n = 0;
  std::uint64_t horizon = 0;
  std::size_t total_matches = 0;
  std::size_t seeds = 0;
  std::vector<PolicySummary> policies;
};

RunReport summarize_run(const std::filesystem::path& dir);
void write_report(std::ostream& out, const RunReport& r);

struct YardstickReport {
  std::uint64_t horizon = 0;
  std::uint64_t optimal = 0;
  Rational delta;
};
YardstickReport yardstick(const std::filesystem::path& instance, const std::filesystem::path& trace);
void write_yardstick(std::ostream& out, const YardstickReport& r);

}  // namespace recip::cmd
