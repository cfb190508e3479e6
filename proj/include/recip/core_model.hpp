#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "recip/bit_matrix.hpp"

namespace recip {

using UserIndex = std::uint32_t;

enum class Side : std::uint8_t { kBoy, kGirl };

constexpr Side opposite(Side s) { return s == Side::kBoy ? Side::kGirl : Side::kBoy; }
const char* side_name(Side s);

struct UserRef {
  Side side = Side::kBoy;
  UserIndex index = 0;

  static UserRef boy(UserIndex i) { return {Side::kBoy, i}; }
  static UserRef girl(UserIndex i) { return {Side::kGirl, i}; }
  friend bool operator==(const UserRef&, const UserRef&) = default;
};

// A directed preference edge between users of opposite sides.
struct DirectedEdge {
  UserRef from;
  UserRef to;

  DirectedEdge(UserRef from_user, UserRef to_user);  // throws InputError if same side
  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

// Ground truth sign function as two n x n boolean matrices:
// boys_like(i, j) == sigma(b_i, g_j) == +1 and girls_like(i, j) == sigma(g_i, b_j) == +1.
class PreferenceMatrices {
 public:
  PreferenceMatrices() = default;
  explicit PreferenceMatrices(std::size_t n);  // everyone dislikes everyone
  PreferenceMatrices(BitMatrix boys_like, BitMatrix girls_like);

  std::size_t n() const { return n_; }
  const BitMatrix& boys_like() const { return boys_like_; }
  const BitMatrix& girls_like() const { return girls_like_; }

  bool boy_likes(UserIndex boy, UserIndex girl) const { return boys_like_.test(boy, girl); }
  bool girl_likes(UserIndex girl, UserIndex boy) const { return girls_like_.test(girl, boy); }

  // sigma(e) in {-1, +1}.
  int sign(const DirectedEdge& e) const;

  void set_boy_likes(UserIndex boy, UserIndex girl, bool like) { boys_like_.assign(boy, girl, like); }
  void set_girl_likes(UserIndex girl, UserIndex boy, bool like) { girls_like_.assign(girl, boy, like); }

  std::size_t like_count() const { return boys_like_.count() + girls_like_.count(); }

  friend bool operator==(const PreferenceMatrices&, const PreferenceMatrices&) = default;

 private:
  std::size_t n_ = 0;
  BitMatrix boys_like_;
  BitMatrix girls_like_;
};

// Undirected bipartite graph of mutual likes.
class MatchingGraph {
 public:
  MatchingGraph() = default;
  MatchingGraph(BitMatrix boy_adjacency);  // row b holds the girls matched with b

  std::size_t n() const { return n_; }
  std::size_t match_count() const { return match_count_; }
  bool has_edge(UserIndex boy, UserIndex girl) const { return boy_adj_.test(boy, girl); }

  // deg_M(u); throws InputError if u.index >= n.
  std::size_t degree(UserRef u) const;
  std::vector<UserIndex> neighbors(UserRef u) const;
  std::size_t max_degree() const;

  const BitMatrix& boy_adjacency() const { return boy_adj_; }
  const BitMatrix& girl_adjacency() const { return girl_adj_; }

  friend bool operator==(const MatchingGraph& a, const MatchingGraph& b) { return a.boy_adj_ == b.boy_adj_; }

 private:
  std::size_t n_ = 0;
  std::size_t match_count_ = 0;
  BitMatrix boy_adj_;
  BitMatrix girl_adj_;
};

// Row-parallel build (OpenMP when available).
MatchingGraph build_matching_graph(const PreferenceMatrices& prefs);
// Entry-by-entry reference used to cross-check the parallel kernel.
MatchingGraph build_matching_graph_serial(const PreferenceMatrices& prefs);

// Exact rational numerator / denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }
};

// Delta(M, T) = sum over all 2n users of max(deg(u) - T/n, 0), returned over denominator n.
Rational delta_overload(const MatchingGraph& graph, std::uint64_t horizon);

// Instance text format: "n", n rows of boys_like as 0/1 chars, a blank line,
// n rows of girls_like. CRLF line endings are accepted on input.
void write_instance(std::ostream& out, const PreferenceMatrices& prefs);
PreferenceMatrices read_instance(std::istream& in);
void save_instance(const std::filesystem::path& path, const PreferenceMatrices& prefs);
PreferenceMatrices load_instance(const std::filesystem::path& path);

// Small 4x4 demo: M = 4, deg(girl 0) = 3, deg(boy 1) = 1, boy 0 likes girls 0
// and 2, girl 2 likes only boy 0.
PreferenceMatrices example_instance();

}  // namespace recip
