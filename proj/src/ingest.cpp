#include "recip/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>
#include <tuple>

#include "recip/errors.hpp"

namespace recip {

namespace {

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool numeric(std::string_view s, std::int64_t& v) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

[[noreturn]] void bad(const char* file, std::size_t lineno, const std::string& what) {
  throw InputError(std::string(file) + " line " + std::to_string(lineno) + ": " + what);
}

std::uint64_t parse_id(std::string_view s, const char* file, std::size_t lineno) {
  std::int64_t v = 0;
  if (!numeric(s, v)) bad(file, lineno, "bad id '" + std::string(s) + "'");
  if (v < 0) bad(file, lineno, "negative id");
  return static_cast<std::uint64_t>(v);
}

Gender parse_gender(std::string_view s, std::size_t lineno) {
  s = trim(s);
  if (s == "M" || s == "m") return Gender::kMale;
  if (s == "F" || s == "f") return Gender::kFemale;
  if (s == "U" || s == "u" || s.empty()) return Gender::kUnknown;
  bad("genders", lineno, "gender must be M, F or U");
}

bool is_header(std::string_view line) {
  std::int64_t v = 0;
  return !numeric(split(line).front(), v);
}

}  // namespace

RawRatings parse_ratings(std::istream& ratings, std::istream& genders) {
  std::unordered_map<std::uint64_t, Gender> gender;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(genders, line, lineno)) {
    if (trim(line).empty() || (lineno == 1 && is_header(line))) continue;
    const auto f = split(line);
    if (f.size() != 2) bad("genders", lineno, "expected id,gender");
    gender[parse_id(f[0], "genders", lineno)] = parse_gender(f[1], lineno);
  }

  RawRatings raw;
  std::set<std::uint64_t> boys, girls;
  auto lookup = [&](std::uint64_t id) {
    const auto it = gender.find(id);
    return it == gender.end() ? Gender::kUnknown : it->second;
  };
  lineno = 0;
  while (next_line(ratings, line, lineno)) {
    if (trim(line).empty() || (lineno == 1 && is_header(line))) continue;
    const auto f = split(line);
    if (f.size() != 3) bad("ratings", lineno, "expected rater,rated,rating");
    const auto rater = parse_id(f[0], "ratings", lineno);
    const auto rated = parse_id(f[1], "ratings", lineno);
    std::int64_t value = 0;
    if (!numeric(f[2], value)) bad("ratings", lineno, "bad rating '" + std::string(f[2]) + "'");
    if (value < 1 || value > 10) bad("ratings", lineno, "rating must lie in [1, 10]");
    const Gender a = lookup(rater), b = lookup(rated);
    if (a == Gender::kUnknown || b == Gender::kUnknown) {
      ++raw.dropped_unknown;
      continue;
    }
    if (a == b) {
      ++raw.dropped_same;
      continue;
    }
    raw.triples.push_back({rater, rated, static_cast<int>(value)});
    (a == Gender::kMale ? boys : girls).insert(rater);
    (b == Gender::kMale ? boys : girls).insert(rated);
  }
  raw.boys.assign(boys.begin(), boys.end());
  raw.girls.assign(girls.begin(), girls.end());
  return raw;
}

RawRatings parse_ratings(const std::filesystem::path& ratings, const std::filesystem::path& genders) {
  std::ifstream r(ratings, std::ios::binary), g(genders, std::ios::binary);
  if (!r) throw InputError("cannot open " + ratings.string());
  if (!g) throw InputError("cannot open " + genders.string());
  return parse_ratings(r, g);
}

std::size_t SparseLikes::like_count() const {
  std::size_t n = 0;
  for (const auto& e : boy_ratings) n += e.like;
  for (const auto& e : girl_ratings) n += e.like;
  return n;
}

SparseLikes binarize(const RawRatings& raw) {
  SparseLikes out;
  out.boy_ids = raw.boys;
  out.girl_ids = raw.girls;
  std::unordered_map<std::uint64_t, std::uint32_t> bi, gi;
  for (std::uint32_t i = 0; i < raw.boys.size(); ++i) bi[raw.boys[i]] = i;
  for (std::uint32_t i = 0; i < raw.girls.size(); ++i) gi[raw.girls[i]] = i;
  // A repeated (rater, rated) pair keeps its last rating.
  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> bg, gb;
  for (const auto& t : raw.triples) {
    if (const auto it = bi.find(t.rater); it != bi.end()) {
      bg[{it->second, gi.at(t.rated)}] = is_like(t.rating);
    } else {
      gb[{gi.at(t.rater), bi.at(t.rated)}] = is_like(t.rating);
    }
  }
  for (const auto& [k, like] : bg) out.boy_ratings.push_back({k.first, k.second, like});
  for (const auto& [k, like] : gb) out.girl_ratings.push_back({k.first, k.second, like});
  return out;
}

CountMode parse_count_mode(const std::string& s) {
  if (s == "combined") return CountMode::kCombined;
  if (s == "given") return CountMode::kGiven;
  if (s == "received") return CountMode::kReceived;
  throw InputError("count mode must be combined, given or received");
}

const char* count_mode_name(CountMode m) {
  switch (m) {
    case CountMode::kCombined: return "combined";
    case CountMode::kGiven: return "given";
    case CountMode::kReceived: return "received";
  }
  return "?";
}

namespace {

PreferenceMatrices assemble(const SparseLikes& likes, const std::vector<std::uint8_t>& alive, DensifyReport& rep) {
  const std::size_t nb = likes.boy_ids.size();
  std::vector<std::uint32_t> bmap(nb, UINT32_MAX), gmap(likes.girl_ids.size(), UINT32_MAX);
  rep.boy_ids.clear();
  rep.girl_ids.clear();
  for (std::size_t i = 0; i < nb; ++i)
    if (alive[i]) {
      bmap[i] = static_cast<std::uint32_t>(rep.boy_ids.size());
      rep.boy_ids.push_back(likes.boy_ids[i]);
    }
  for (std::size_t i = 0; i < likes.girl_ids.size(); ++i)
    if (alive[nb + i]) {
      gmap[i] = static_cast<std::uint32_t>(rep.girl_ids.size());
      rep.girl_ids.push_back(likes.girl_ids[i]);
    }
  rep.boys = rep.boy_ids.size();
  rep.girls = rep.girl_ids.size();
  const std::size_t n = std::max(rep.boys, rep.girls);
  rep.phantom_boys = n - rep.boys;
  rep.phantom_girls = n - rep.girls;
  PreferenceMatrices p(n);
  for (const auto& e : likes.boy_ratings)
    if (e.like && bmap[e.from] != UINT32_MAX && gmap[e.to] != UINT32_MAX) p.set_boy_likes(bmap[e.from], gmap[e.to], true);
  for (const auto& e : likes.girl_ratings)
    if (e.like && gmap[e.from] != UINT32_MAX && bmap[e.to] != UINT32_MAX) p.set_girl_likes(gmap[e.from], bmap[e.to], true);
  return p;
}

}  // namespace

DensifyResult densify(const SparseLikes& likes, double coeff, CountMode mode) {
  if (!(coeff > 0)) throw InputError("densify coefficient must be positive");
  const std::size_t nb = likes.boy_ids.size(), ng = likes.girl_ids.size(), users = nb + ng;
  auto uid = [&](std::size_t u) { return u < nb ? likes.boy_ids[u] : likes.girl_ids[u - nb]; };

  // incident[u]: (other user, counts toward u, counts toward other, edge is a like)
  struct Inc {
    std::uint32_t other;
    bool mine;
    bool theirs;
    bool like;
  };
  std::vector<std::vector<Inc>> incident(users);
  std::vector<std::size_t> count(users, 0);
  const bool given = mode != CountMode::kReceived, received = mode != CountMode::kGiven;
  auto add = [&](std::uint32_t rater, std::uint32_t rated, bool like) {
    incident[rater].push_back({rated, given, received, like});
    incident[rated].push_back({rater, received, given, like});
    count[rater] += given;
    count[rated] += received;
  };
  for (const auto& e : likes.boy_ratings) add(e.from, static_cast<std::uint32_t>(nb + e.to), e.like);
  for (const auto& e : likes.girl_ratings) add(static_cast<std::uint32_t>(nb + e.from), e.to, e.like);

  std::set<std::tuple<std::size_t, std::uint64_t, std::uint32_t>> queue;
  for (std::uint32_t u = 0; u < users; ++u) queue.insert({count[u], uid(u), u});
  std::vector<std::uint8_t> alive(users, 1);
  std::size_t like_total = likes.like_count(), alive_b = nb, alive_g = ng;

  DensifyResult out;
  auto& rep = out.report;
  rep.coeff = coeff;
  rep.mode = mode;
  for (;;) {
    if (alive_b == 0 || alive_g == 0) throw InputError("density target unreachable: a side ran out of users");
    const double threshold = coeff * std::pow(static_cast<double>(std::min(alive_b, alive_g)), 1.5);
    if (static_cast<double>(like_total) >= threshold) {
      rep.threshold = threshold;
      break;
    }
    const auto [c, id, u] = *queue.begin();
    queue.erase(queue.begin());
    alive[u] = 0;
    (u < nb ? alive_b : alive_g) -= 1;
    rep.removals.push_back({u < nb ? Side::kBoy : Side::kGirl, id, c});
    for (const auto& inc : incident[u]) {
      if (!alive[inc.other]) continue;
      like_total -= inc.like;
      if (inc.theirs) {
        queue.erase({count[inc.other], uid(inc.other), inc.other});
        --count[inc.other];
        queue.insert({count[inc.other], uid(inc.other), inc.other});
      }
    }
  }
  out.prefs = assemble(likes, alive, rep);
  rep.likes = like_total;
  rep.matches = build_matching_graph(out.prefs).match_count();
  return out;
}

PreferenceMatrices apply_removals(const SparseLikes& likes, const std::vector<Removal>& removals) {
  const std::size_t nb = likes.boy_ids.size();
  std::vector<std::uint8_t> alive(nb + likes.girl_ids.size(), 1);
  for (const auto& r : removals) {
    const auto& ids = r.side == Side::kBoy ? likes.boy_ids : likes.girl_ids;
    const auto it = std::lower_bound(ids.begin(), ids.end(), r.id);
    if (it == ids.end() || *it != r.id) throw InputError("removal names unknown user " + std::to_string(r.id));
    alive[(r.side == Side::kBoy ? 0 : nb) + static_cast<std::size_t>(it - ids.begin())] = 0;
  }
  DensifyReport scratch;
  return assemble(likes, alive, scratch);
}

void write_densify_report(std::ostream& out, const DensifyReport& r) {
  out << "coeff=" << r.coeff << '\n'
      << "count_mode=" << count_mode_name(r.mode) << '\n'
      << "removals=" << r.removals.size() << '\n'
      << "boys=" << r.boys << '\n'
      << "girls=" << r.girls << '\n'
      << "likes=" << r.likes << '\n'
      << "matches=" << r.matches << '\n'
      << "threshold=" << r.threshold << '\n'
      << "phantom_boys=" << r.phantom_boys << '\n'
      << "phantom_girls=" << r.phantom_girls << '\n';
  for (const auto& rm : r.removals) out << "removed " << side_name(rm.side) << ' ' << rm.id << ' ' << rm.count << '\n';
}

}  // namespace recip
