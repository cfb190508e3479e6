#include "recip/core_model.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "recip/errors.hpp"

namespace recip {

const char* side_name(Side s) { return s == Side::kBoy ? "boy" : "girl"; }

DirectedEdge::DirectedEdge(UserRef from_user, UserRef to_user) : from(from_user), to(to_user) {
  if (from.side == to.side) throw InputError("directed edge must join opposite sides");
}

PreferenceMatrices::PreferenceMatrices(std::size_t n) : n_(n), boys_like_(n, n), girls_like_(n, n) {}

PreferenceMatrices::PreferenceMatrices(BitMatrix boys_like, BitMatrix girls_like)
    : n_(boys_like.rows()), boys_like_(std::move(boys_like)), girls_like_(std::move(girls_like)) {
  if (boys_like_.cols() != n_ || girls_like_.rows() != n_ || girls_like_.cols() != n_) {
    throw InputError("preference matrices must both be n x n");
  }
}

int PreferenceMatrices::sign(const DirectedEdge& e) const {
  if (e.from.index >= n_ || e.to.index >= n_) throw InputError("user index out of range");
  const bool like = e.from.side == Side::kBoy ? boy_likes(e.from.index, e.to.index)
                                              : girl_likes(e.from.index, e.to.index);
  return like ? 1 : -1;
}

MatchingGraph::MatchingGraph(BitMatrix boy_adjacency)
    : n_(boy_adjacency.rows()), boy_adj_(std::move(boy_adjacency)) {
  if (boy_adj_.cols() != n_) throw InputError("matching adjacency must be n x n");
  girl_adj_ = boy_adj_.transposed();
  match_count_ = boy_adj_.count();
}

std::size_t MatchingGraph::degree(UserRef u) const {
  if (u.index >= n_) throw InputError("user index out of range");
  return u.side == Side::kBoy ? boy_adj_.row_count(u.index) : girl_adj_.row_count(u.index);
}

std::vector<UserIndex> MatchingGraph::neighbors(UserRef u) const {
  if (u.index >= n_) throw InputError("user index out of range");
  const BitMatrix& m = u.side == Side::kBoy ? boy_adj_ : girl_adj_;
  std::vector<UserIndex> out;
  auto rw = m.row(u.index);
  for (std::size_t w = 0; w < rw.size(); ++w) {
    for (Word bits = rw[w]; bits != 0; bits &= bits - 1) {
      out.push_back(static_cast<UserIndex>(w * kWordBits + std::countr_zero(bits)));
    }
  }
  return out;
}

std::size_t MatchingGraph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    best = std::max({best, boy_adj_.row_count(i), girl_adj_.row_count(i)});
  }
  return best;
}

MatchingGraph build_matching_graph(const PreferenceMatrices& prefs) {
  const std::size_t n = prefs.n();
  const BitMatrix girls_t = prefs.girls_like().transposed();  // girls_t(b, g) == girl g likes boy b
  BitMatrix adj(n, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < rows; ++b) {
    auto out = adj.row(static_cast<std::size_t>(b));
    auto lhs = prefs.boys_like().row(static_cast<std::size_t>(b));
    auto rhs = girls_t.row(static_cast<std::size_t>(b));
    for (std::size_t w = 0; w < out.size(); ++w) out[w] = lhs[w] & rhs[w];
  }
  return MatchingGraph(std::move(adj));
}

MatchingGraph build_matching_graph_serial(const PreferenceMatrices& prefs) {
  const std::size_t n = prefs.n();
  BitMatrix adj(n, n);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t g = 0; g < n; ++g) {
      if (prefs.boy_likes(static_cast<UserIndex>(b), static_cast<UserIndex>(g)) &&
          prefs.girl_likes(static_cast<UserIndex>(g), static_cast<UserIndex>(b))) {
        adj.set(b, g);
      }
    }
  }
  return MatchingGraph(std::move(adj));
}

Rational delta_overload(const MatchingGraph& graph, std::uint64_t horizon) {
  const std::size_t n = graph.n();
  if (n == 0) throw InputError("empty instance");
  const auto t = static_cast<std::int64_t>(horizon);
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t num = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto db = static_cast<std::int64_t>(graph.boy_adjacency().row_count(i));
    const auto dg = static_cast<std::int64_t>(graph.girl_adjacency().row_count(i));
    num += std::max<std::int64_t>(nn * db - t, 0);
    num += std::max<std::int64_t>(nn * dg - t, 0);
  }
  return {num, nn};
}

namespace {

void write_block(std::ostream& out, const BitMatrix& m) {
  std::string line(m.cols(), '0');
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) line[c] = m.test(r, c) ? '1' : '0';
    out << line << '\n';
  }
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

BitMatrix read_block(std::istream& in, std::size_t n, std::size_t& lineno) {
  BitMatrix m(n, n);
  std::string line;
  for (std::size_t r = 0; r < n; ++r) {
    if (!next_line(in, line, lineno)) throw InputError("instance truncated at line " + std::to_string(lineno + 1));
    if (line.size() != n) {
      throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(n) + " entries");
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (line[c] == '1') {
        m.set(r, c);
      } else if (line[c] != '0') {
        throw InputError("line " + std::to_string(lineno) + ": entries must be 0 or 1");
      }
    }
  }
  return m;
}

}  // namespace

void write_instance(std::ostream& out, const PreferenceMatrices& prefs) {
  out << prefs.n() << '\n';
  write_block(out, prefs.boys_like());
  out << '\n';
  write_block(out, prefs.girls_like());
}

PreferenceMatrices read_instance(std::istream& in) {
  std::size_t lineno = 0;
  std::string line;
  if (!next_line(in, line, lineno)) throw InputError("empty instance file");
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoul(line, &used);
    if (used != line.size()) throw InputError("line 1: bad size");
  } catch (const std::logic_error&) {
    throw InputError("line 1: expected n");
  }
  if (n == 0) throw InputError("line 1: n must be positive");
  BitMatrix boys = read_block(in, n, lineno);
  if (!next_line(in, line, lineno) || !line.empty()) {
    throw InputError("line " + std::to_string(lineno) + ": expected blank separator");
  }
  BitMatrix girls = read_block(in, n, lineno);
  while (next_line(in, line, lineno)) {
    if (!line.empty()) throw InputError("line " + std::to_string(lineno) + ": trailing data");
  }
  return {std::move(boys), std::move(girls)};
}

void save_instance(const std::filesystem::path& path, const PreferenceMatrices& prefs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  write_instance(out, prefs);
  if (!out) throw InputError("write failed: " + path.string());
}

PreferenceMatrices load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_instance(in);
}

PreferenceMatrices example_instance() {
  PreferenceMatrices p(4);
  const char* boys[] = {"1010", "1100", "1001", "0110"};
  const char* girls[] = {"1110", "1000", "1000", "0100"};
  for (UserIndex i = 0; i < 4; ++i) {
    for (UserIndex j = 0; j < 4; ++j) {
      p.set_boy_likes(i, j, boys[i][j] == '1');
      p.set_girl_likes(i, j, girls[i][j] == '1');
    }
  }
  return p;
}

}  // namespace recip
