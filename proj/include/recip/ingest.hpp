#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recip/core_model.hpp"

namespace recip {

enum class Gender { kMale, kFemale, kUnknown };

struct Rating {
  std::uint64_t rater = 0;
  std::uint64_t rated = 0;
  int rating = 0;  // 1..10
};

struct RawRatings {
  std::vector<Rating> triples;     // cross-gender, known-gender only
  std::vector<std::uint64_t> boys;   // sorted ids of male users seen in `triples`
  std::vector<std::uint64_t> girls;  // sorted ids of female users seen in `triples`
  std::size_t dropped_unknown = 0;   // ratings touching a user of unknown or missing gender
  std::size_t dropped_same = 0;      // same-gender ratings
  bool empty() const { return triples.empty(); }
};

// `ratings`: rater,rated,rating lines. `genders`: id,gender lines with gender M, F or U.
// An optional header line is accepted in each. CRLF tolerant.
RawRatings parse_ratings(std::istream& ratings, std::istream& genders);
RawRatings parse_ratings(const std::filesystem::path& ratings, const std::filesystem::path& genders);

struct RatingEdge {
  std::uint32_t from = 0;  // index into the rater's side
  std::uint32_t to = 0;    // index into the rated side
  bool like = false;
};

// Every retained rating, with like iff rating > 2. Missing ratings are dislikes.
struct SparseLikes {
  std::vector<std::uint64_t> boy_ids;
  std::vector<std::uint64_t> girl_ids;
  std::vector<RatingEdge> boy_ratings;   // boy -> girl
  std::vector<RatingEdge> girl_ratings;  // girl -> boy
  std::size_t like_count() const;
};

inline bool is_like(int rating) { return rating > 2; }
SparseLikes binarize(const RawRatings& raw);

enum class CountMode { kCombined, kGiven, kReceived };
CountMode parse_count_mode(const std::string& s);
const char* count_mode_name(CountMode m);

struct Removal {
  Side side = Side::kBoy;
  std::uint64_t id = 0;
  std::size_t count = 0;  // rating count at removal time
};

struct DensifyReport {
  double coeff = 0;
  CountMode mode = CountMode::kCombined;
  std::vector<Removal> removals;
  std::size_t boys = 0;   // survivors before padding
  std::size_t girls = 0;
  std::size_t likes = 0;
  std::size_t matches = 0;
  double threshold = 0;   // coeff * min(boys, girls)^{3/2}
  std::size_t phantom_boys = 0;   // highest indices on the boy side
  std::size_t phantom_girls = 0;
  std::vector<std::uint64_t> boy_ids;   // instance index -> original id (real users only)
  std::vector<std::uint64_t> girl_ids;
};

struct DensifyResult {
  PreferenceMatrices prefs;
  DensifyReport report;
};

DensifyResult densify(const SparseLikes& likes, double coeff, CountMode mode = CountMode::kCombined);

// Rebuilds the square instance after deleting the listed users; used to replay a report.
PreferenceMatrices apply_removals(const SparseLikes& likes, const std::vector<Removal>& removals);

void write_densify_report(std::ostream& out, const DensifyReport& r);

}  // namespace recip
