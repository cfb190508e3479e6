#include "recip/protocol.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "recip/errors.hpp"

namespace recip {

FeedbackLedger::FeedbackLedger(std::size_t n)
    : n_(n), bg_seen_(n, n), bg_like_(n, n), gb_seen_(n, n), gb_like_(n, n), matched_(n, n) {}

bool FeedbackLedger::complete_pair(UserIndex boy, UserIndex girl) {
  ++reciprocal_;
  if (bg_like_.test(boy, girl) && gb_like_.test(girl, boy)) {
    matched_.set(boy, girl);
    uncovered_.emplace_back(boy, girl);
    return true;
  }
  return false;
}

bool FeedbackLedger::record_boy_to_girl(UserIndex boy, UserIndex girl, bool like) {
  if (bg_seen_.test(boy, girl)) return false;
  bg_seen_.set(boy, girl);
  bg_like_.assign(boy, girl, like);
  ++observed_;
  return gb_seen_.test(girl, boy) && complete_pair(boy, girl);
}

bool FeedbackLedger::record_girl_to_boy(UserIndex girl, UserIndex boy, bool like) {
  if (gb_seen_.test(girl, boy)) return false;
  gb_seen_.set(girl, boy);
  gb_like_.assign(girl, boy, like);
  ++observed_;
  return bg_seen_.test(boy, girl) && complete_pair(boy, girl);
}

std::uint64_t RunResult::curve_round(std::size_t i) const {
  const std::uint64_t t = (i + 1) * curve_stride;
  return t > horizon ? horizon : t;
}

RunResult run_protocol(const PreferenceMatrices& prefs, MatchmakerPolicy& policy, std::uint64_t horizon,
                       std::uint64_t seed, const RunOptions& options) {
  const std::size_t n = prefs.n();
  if (n == 0) throw InputError("empty instance");
  if (horizon < 1) throw InputError("T must be at least 1");
  if (options.curve_stride < 1) throw InputError("curve stride must be at least 1");

  RunResult r;
  r.ledger = FeedbackLedger(n);
  r.policy_name = policy.name();
  r.seed = seed;
  r.horizon = horizon;
  r.curve_stride = options.curve_stride;
  r.boy_arrivals.assign(n, 0);
  r.girl_arrivals.assign(n, 0);
  if (options.record_trace) r.trace.reserve(horizon);
  r.curve.reserve(horizon / options.curve_stride + 1);

  policy.begin(n, horizon, CounterRng(seed, Stream::kPolicy));
  ArrivalSource arrivals(n, seed);

  auto check = [n, &policy](UserIndex v, const char* step) {
    if (v >= n) {
      throw ProtocolError(policy.name() + " returned out-of-range index " + std::to_string(v) + " in " + step);
    }
  };

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const auto [b, g] = arrivals.next();
    ++r.boy_arrivals[b];
    ++r.girl_arrivals[g];

    const UserIndex g_sel = policy.select_for_boy(b);
    check(g_sel, "boy half");
    const bool like_bg = prefs.boy_likes(b, g_sel);
    r.ledger.record_boy_to_girl(b, g_sel, like_bg);
    policy.observe_boy(b, g_sel, like_bg);

    const UserIndex b_sel = policy.select_for_girl(g);
    check(b_sel, "girl half");
    const bool like_gb = prefs.girl_likes(g, b_sel);
    r.ledger.record_girl_to_boy(g, b_sel, like_gb);
    policy.observe_girl(g, b_sel, like_gb);

    const auto m = static_cast<std::uint32_t>(r.ledger.match_count());
    r.curve_sum += m;
    if (t % options.curve_stride == 0 || t == horizon) r.curve.push_back(m);
    if (options.record_trace) {
      r.trace.push_back({t, b, g_sel, static_cast<std::int8_t>(like_bg ? 1 : -1), g, b_sel,
                         static_cast<std::int8_t>(like_gb ? 1 : -1)});
    }
  }
  r.diagnostics = policy.diagnostics();
  return r;
}

const std::vector<std::uint32_t>& matches_curve(const RunResult& r) { return r.curve; }

double area_under_curve(const RunResult& r) {
  if (r.horizon < 1) throw InputError("T must be at least 1");
  return static_cast<double>(r.curve_sum) / static_cast<double>(r.horizon);
}

double area_under_curve(const std::vector<std::uint32_t>& full_curve) {
  if (full_curve.empty()) throw InputError("T must be at least 1");
  std::uint64_t sum = 0;
  for (auto m : full_curve) sum += m;
  return static_cast<double>(sum) / static_cast<double>(full_curve.size());
}

namespace {

constexpr std::string_view kTraceHeader = "t,boy,girl_selected,sign_bg,girl,boy_selected,sign_gb";

std::int64_t parse_field(std::string_view s, std::size_t lineno) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("trace line " + std::to_string(lineno) + ": bad field '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RoundTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& rec : trace) {
    out << rec.t << ',' << rec.boy << ',' << rec.girl_selected << ',' << int{rec.sign_bg} << ',' << rec.girl
        << ',' << rec.boy_selected << ',' << int{rec.sign_gb} << '\n';
  }
}

RoundTrace read_trace_csv(std::istream& in) {
  RoundTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line == kTraceHeader) continue;
    std::int64_t f[7];
    std::size_t start = 0;
    for (int i = 0; i < 7; ++i) {
      const std::size_t comma = i < 6 ? line.find(',', start) : line.size();
      if (comma == std::string::npos) throw InputError("trace line " + std::to_string(lineno) + ": expected 7 fields");
      f[i] = parse_field(std::string_view(line).substr(start, comma - start), lineno);
      start = comma + 1;
    }
    for (int i : {1, 2, 4, 5}) {
      if (f[i] < 0) throw InputError("trace line " + std::to_string(lineno) + ": negative user id");
    }
    if ((f[3] != 1 && f[3] != -1) || (f[6] != 1 && f[6] != -1)) {
      throw InputError("trace line " + std::to_string(lineno) + ": signs must be +1 or -1");
    }
    trace.push_back({static_cast<std::uint64_t>(f[0]), static_cast<UserIndex>(f[1]), static_cast<UserIndex>(f[2]),
                     static_cast<std::int8_t>(f[3]), static_cast<UserIndex>(f[4]), static_cast<UserIndex>(f[5]),
                     static_cast<std::int8_t>(f[6])});
  }
  return trace;
}

void save_trace_csv(const std::filesystem::path& path, const RoundTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
}

RoundTrace load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_trace_csv(in);
}

void write_curve_csv(std::ostream& out, const RunResult& r) {
  out << "t,matches\n";
  for (std::size_t i = 0; i < r.curve.size(); ++i) out << r.curve_round(i) << ',' << r.curve[i] << '\n';
}

}  // namespace recip
