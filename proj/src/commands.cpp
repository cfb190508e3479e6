#include "recip/commands.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "recip/datagen.hpp"
#include "recip/errors.hpp"
#include "recip/experiment.hpp"
#include "recip/omniscient.hpp"

namespace recip::cmd {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  if (!fs::exists(path)) throw InputError("missing " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw InputError(what + ": expected a non-negative integer, got '" + s + "'");
  }
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw InputError(what + ": expected a number, got '" + s + "'");
  }
}

bool to_bool(const std::string& s, const std::string& what) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw InputError(what + ": expected true or false");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool takes(const std::string& policy, const std::string& key) {
  if (key == "gamma") return policy == "smile";
  if (key == "S" || key == "tolerance") return policy == "smile" || policy == "ismile";
  return false;
}

std::string diag(const RunResult& r, const std::string& key) {
  for (const auto& [k, v] : r.diagnostics)
    if (k == key) return v;
  return "";
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    const auto eq = line.find('=');
    if (line.empty() || eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key, const fs::path& file) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InputError(file.string() + " lacks key " + key);
  return it->second;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  if (rows.empty()) throw InputError(path.string() + " is empty");
  return rows;
}

}  // namespace

std::string gen(const GenOptions& o) {
  if (o.out.empty()) throw InputError("gen needs --out");
  PreferenceMatrices prefs;
  std::ostringstream line;
  line << "generator=" << o.generator << " n=" << o.n;
  if (o.generator == "clustered") {
    ClusteredSpec spec{o.n, o.boy_clusters, o.girl_clusters, o.p, o.flip, o.seed, o.uniform_partition,
                       o.per_cluster_pair};
    prefs = gen_clustered(spec);
    line << " boy_clusters=" << o.boy_clusters << " girl_clusters=" << o.girl_clusters << " p_like=" << num(o.p)
         << " flip=" << num(o.flip.value_or(default_flip(o.n))) << " uniform_partition=" << o.uniform_partition
         << " per_cluster_pair=" << o.per_cluster_pair;
  } else if (o.generator == "adversarial") {
    prefs = gen_adversarial_random(o.n, o.m, o.seed);
    line << " m=" << o.m;
  } else if (o.generator == "block") {
    prefs = gen_block_lowerbound(o.n, o.d, o.m, o.seed);
    line << " d=" << o.d << " m=" << o.m;
  } else if (o.generator == "bipartite") {
    prefs = gen_random_bipartite(o.n, o.p, o.seed).prefs;
    line << " p=" << num(o.p);
  } else {
    throw InputError("unknown generator '" + o.generator + "'");
  }
  line << " seed=" << o.seed;
  save_instance(o.out, prefs);
  auto m = open_out(fs::path(o.out.string() + ".manifest"));
  m << line.str() << '\n';
  return line.str();
}

DensifyReport ingest(const IngestOptions& o) {
  if (o.out.empty()) throw InputError("ingest needs --out");
  const RawRatings raw = parse_ratings(o.ratings, o.genders);
  if (raw.empty()) throw InputError("no cross-gender ratings between users of known gender");
  const auto result = densify(binarize(raw), o.coeff, o.mode);
  save_instance(o.out, result.prefs);
  if (o.report) {
    auto out = open_out(*o.report);
    out << "ratings_kept=" << raw.triples.size() << '\n'
        << "dropped_unknown_gender=" << raw.dropped_unknown << '\n'
        << "dropped_same_gender=" << raw.dropped_same << '\n';
    write_densify_report(out, result.report);
  }
  return result.report;
}

void cover(const CoverOptions& o, std::ostream& out) {
  const auto prefs = load_instance(o.instance);
  const auto radii = o.radii.empty() ? standard_radii(prefs.n()) : o.radii;
  const auto boys = boy_columns(prefs), girls = girl_columns(prefs);
  const CoveringOptions opt{o.mode, o.order_seed};
  out << "radius,boys_cover,girls_cover\n";
  for (const auto r : radii) {
    const auto cb = greedy_covering(boys, r, opt), cg = greedy_covering(girls, r, opt);
    check_covering(boys, cb);
    check_covering(girls, cg);
    out << r << ',' << cb.size << ',' << cg.size << '\n';
  }
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::uint64_t count) {
  if (count == 0) throw InputError("seed count must be positive");
  std::vector<std::uint64_t> s(count);
  for (std::uint64_t i = 0; i < count; ++i) s[i] = base + i;
  return s;
}

void set_policy_param(ExperimentConfig& cfg, const std::string& policy, const std::string& key,
                      const std::string& value) {
  if (!takes(policy, key)) throw InputError("policy " + policy + " takes no parameter " + key);
  auto& p = cfg.params[policy];
  if (key == "gamma") p.gamma = to_double(value, key);
  if (key == "S") p.s = to_u64(value, key);
  if (key == "tolerance") p.tolerance = to_double(value, key);
}

void set_shared_param(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key != "gamma" && key != "S" && key != "tolerance") throw InputError("unknown parameter " + key);
  for (const auto& p : cfg.policies)
    if (takes(p, key)) set_policy_param(cfg, p, key, value);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t base = 0, count = 0;
  std::optional<std::vector<std::uint64_t>> list;
  std::vector<std::tuple<std::string, std::string, std::size_t>> deferred;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const std::string where = "config line " + std::to_string(lineno);
    if (key == "instance") {
      cfg.instance = value;
    } else if (key == "policies") {
      cfg.policies = split(value, ',');
    } else if (key == "T") {
      cfg.horizon = to_u64(value, where);
    } else if (key == "seeds") {
      count = to_u64(value, where);
    } else if (key == "seed") {
      base = to_u64(value, where);
    } else if (key == "seed_list") {
      list.emplace();
      for (const auto& s : split(value, ',')) list->push_back(to_u64(s, where));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "stride") {
      cfg.curve_stride = to_u64(value, where);
    } else if (key == "traces") {
      cfg.traces = to_bool(value, where);
    } else {
      deferred.emplace_back(key, value, lineno);
    }
  }
  if (list) {
    cfg.seeds = *list;
  } else if (count > 0) {
    cfg.seeds = seed_range(base, count);
  }
  for (const auto& [key, value, ln] : deferred) {
    try {
      const auto dot = key.find('.');
      if (dot == std::string::npos) {
        set_shared_param(cfg, key, value);
      } else {
        set_policy_param(cfg, key.substr(0, dot), key.substr(dot + 1), value);
      }
    } catch (const InputError& e) {
      throw InputError("config line " + std::to_string(ln) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  auto in = open_in(path);
  return parse_config(in);
}

void run(const ExperimentConfig& cfg) {
  if (cfg.out.empty()) throw InputError("run needs an output directory");
  if (cfg.policies.empty()) throw InputError("run needs at least one policy");
  if (cfg.seeds.empty()) throw InputError("run needs at least one seed");
  std::set<std::string> unique(cfg.policies.begin(), cfg.policies.end());
  if (unique.size() != cfg.policies.size()) throw InputError("policies must be distinct");
  std::string text;
  {
    auto in = open_in(cfg.instance);
    text = read_all(in);
  }
  std::istringstream parsed(text);
  const PreferenceMatrices prefs = read_instance(parsed);
  const std::uint64_t n = prefs.n();
  if (cfg.horizon < 1 || cfg.horizon > 2 * n * n) {
    throw InputError("T must lie in [1, 2n^2] = [1, " + std::to_string(2 * n * n) + "]");
  }

  const BatchSpec spec{cfg.policies, cfg.params, cfg.horizon, cfg.seeds, cfg.curve_stride, cfg.traces};
  const BatchResult res = run_batch(prefs, spec);

  fs::create_directories(cfg.out);
  const std::size_t np = cfg.policies.size(), ns = cfg.seeds.size();

  {
    auto m = open_out(cfg.out / "manifest.txt");
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(text));
    m << "version=" << kVersion << '\n'
      << "instance=" << cfg.instance.string() << '\n'
      << "instance_fnv1a=" << hash << '\n'
      << "n=" << n << '\n'
      << "M=" << res.total_matches << '\n'
      << "T=" << cfg.horizon << '\n'
      << "policies=";
    for (std::size_t p = 0; p < np; ++p) m << (p ? "," : "") << cfg.policies[p];
    m << "\nseed_list=";
    for (std::size_t s = 0; s < ns; ++s) m << (s ? "," : "") << cfg.seeds[s];
    m << "\nstride=" << cfg.curve_stride << '\n' << "traces=" << (cfg.traces ? "true" : "false") << '\n';
    for (const auto& [policy, p] : cfg.params) {
      if (p.gamma) m << policy << ".gamma=" << num(*p.gamma) << '\n';
      if (p.s) m << policy << ".S=" << *p.s << '\n';
      if (p.tolerance) m << policy << ".tolerance=" << num(*p.tolerance) << '\n';
    }
    m << "delta=" << res.delta.num << '/' << res.delta.den << '\n';
  }

  std::vector<RunSummary> summary;
  for (std::size_t p = 0; p < np; ++p) summary.push_back(aggregate_runs(res.runs[p]));
  {
    auto c = open_out(cfg.out / "curves.csv");
    c << 't';
    for (const auto& name : cfg.policies) c << ',' << name;
    c << '\n';
    for (std::size_t i = 0; i < summary[0].rounds.size(); ++i) {
      c << summary[0].rounds[i];
      for (std::size_t p = 0; p < np; ++p) c << ',' << num(summary[p].mean[i]);
      c << '\n';
    }
  }
  {
    auto a = open_out(cfg.out / "auc.csv");
    a << "instance";
    for (const auto& name : cfg.policies) a << ',' << name;
    a << '\n' << cfg.instance.stem().string();
    for (std::size_t p = 0; p < np; ++p) a << ',' << num(summary[p].mean_auc);
    a << '\n';
    auto s = open_out(cfg.out / "auc_seeds.csv");
    s << "seed";
    for (const auto& name : cfg.policies) s << ',' << name;
    s << '\n';
    for (std::size_t k = 0; k < ns; ++k) {
      s << cfg.seeds[k];
      for (std::size_t p = 0; p < np; ++p) s << ',' << num(area_under_curve(res.runs[p][k]));
      s << '\n';
    }
  }
  {
    auto f = open_out(cfg.out / "final.csv");
    f << "policy,seed,final_matches,auc,optimal\n";
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t k = 0; k < ns; ++k) {
        const auto& r = res.runs[p][k];
        f << cfg.policies[p] << ',' << cfg.seeds[k] << ',' << r.final_matches() << ',' << num(area_under_curve(r))
          << ',' << res.optimal[k] << '\n';
      }
    auto y = open_out(cfg.out / "yardstick.csv");
    y << "seed,optimal\n";
    for (std::size_t k = 0; k < ns; ++k) y << cfg.seeds[k] << ',' << res.optimal[k] << '\n';
  }
  const bool clustered = std::any_of(cfg.policies.begin(), cfg.policies.end(),
                                     [](const std::string& p) { return p == "smile" || p == "ismile"; });
  if (clustered) {
    auto c = open_out(cfg.out / "clusters.csv");
    c << "policy,seed,C_B,C_G,S,S_prime\n";
    for (std::size_t p = 0; p < np; ++p) {
      if (cfg.policies[p] != "smile" && cfg.policies[p] != "ismile") continue;
      for (std::size_t k = 0; k < ns; ++k) {
        const auto& r = res.runs[p][k];
        c << cfg.policies[p] << ',' << cfg.seeds[k] << ',' << diag(r, "C_B") << ',' << diag(r, "C_G") << ','
          << diag(r, "S") << ',' << diag(r, "S_prime") << '\n';
      }
    }
  }
  if (cfg.traces) {
    fs::create_directories(cfg.out / "traces");
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t k = 0; k < ns; ++k)
        save_trace_csv(cfg.out / "traces" / (cfg.policies[p] + "_" + std::to_string(cfg.seeds[k]) + ".csv"),
                       res.runs[p][k].trace);
  }
}

RunReport summarize_run(const fs::path& dir) {
  const auto manifest = read_manifest(dir / "manifest.txt");
  const fs::path mf = dir / "manifest.txt";
  RunReport rep;
  rep.n = to_u64(need(manifest, "n", mf), "n");
  rep.horizon = to_u64(need(manifest, "T", mf), "T");
  rep.total_matches = to_u64(need(manifest, "M", mf), "M");
  const auto policies = split(need(manifest, "policies", mf), ',');
  rep.seeds = split(need(manifest, "seed_list", mf), ',').size();

  const auto final_rows = read_csv(dir / "final.csv");
  read_csv(dir / "auc.csv");
  read_csv(dir / "yardstick.csv");
  std::map<std::string, std::vector<std::array<double, 3>>> per;
  for (std::size_t i = 1; i < final_rows.size(); ++i) {
    const auto& row = final_rows[i];
    if (row.size() != 5) throw InputError("final.csv row " + std::to_string(i + 1) + ": expected 5 fields");
    per[row[0]].push_back({to_double(row[2], "final_matches"), to_double(row[3], "auc"), to_double(row[4], "optimal")});
  }

  std::map<std::string, std::vector<std::array<double, 3>>> clusters;  // C_B, C_G, S'
  const bool have_clusters = fs::exists(dir / "clusters.csv");
  if (have_clusters) {
    const auto rows = read_csv(dir / "clusters.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != 6) throw InputError("clusters.csv row " + std::to_string(i + 1) + ": expected 6 fields");
      clusters[rows[i][0]].push_back(
          {to_double(rows[i][2], "C_B"), to_double(rows[i][3], "C_G"), to_double(rows[i][5], "S_prime")});
    }
  }

  std::optional<PreferenceMatrices> prefs;
  if (const auto it = manifest.find("instance"); it != manifest.end() && fs::exists(it->second)) {
    prefs = load_instance(it->second);
  }

  for (const auto& name : policies) {
    PolicySummary s;
    s.policy = name;
    const auto& rows = per[name];
    if (rows.empty()) throw InputError("final.csv has no rows for " + name);
    for (const auto& r : rows) {
      s.mean_final += r[0];
      s.mean_auc += r[1];
      s.mean_optimal += r[2];
    }
    const double k = static_cast<double>(rows.size());
    s.mean_final /= k;
    s.mean_auc /= k;
    s.mean_optimal /= k;
    s.fraction_of_m = rep.total_matches ? s.mean_final / static_cast<double>(rep.total_matches) : 0.0;
    if (const auto c = clusters.find(name); c != clusters.end() && !c->second.empty()) {
      double cb = 0, cg = 0;
      for (const auto& r : c->second) {
        cb += r[0];
        cg += r[1];
      }
      s.mean_cb = cb / static_cast<double>(c->second.size());
      s.mean_cg = cg / static_cast<double>(c->second.size());
      if (name != "smile") {
        s.bound_status = "n/a";
      } else if (!prefs) {
        s.bound_status = "unavailable";
      } else {
        const auto bc = boy_columns(*prefs), gc = girl_columns(*prefs);
        bool ok = true;
        std::map<std::uint64_t, std::pair<std::size_t, std::size_t>> bounds;
        for (const auto& r : c->second) {
          const auto sp = static_cast<std::uint64_t>(r[2]);
          if (!bounds.count(sp)) bounds[sp] = {cluster_count_bound(bc, sp), cluster_count_bound(gc, sp)};
          ok = ok && r[0] <= static_cast<double>(bounds[sp].first) && r[1] <= static_cast<double>(bounds[sp].second);
        }
        s.bound_status = ok ? "holds" : "flagged";
      }
    }
    rep.policies.push_back(std::move(s));
  }
  return rep;
}

void write_report(std::ostream& out, const RunReport& r) {
  out << "n=" << r.n << " T=" << r.horizon << " M=" << r.total_matches << " seeds=" << r.seeds << '\n';
  for (const auto& p : r.policies) {
    out << p.policy << ": final_matches=" << num(p.mean_final) << " auc=" << num(p.mean_auc)
        << " optimal=" << num(p.mean_optimal) << " fraction_of_M=" << num(p.fraction_of_m);
    if (p.mean_cb) out << " C_B=" << num(*p.mean_cb) << " C_G=" << num(*p.mean_cg) << " bound=" << p.bound_status;
    out << '\n';
  }
}

YardstickReport yardstick(const fs::path& instance, const fs::path& trace_path) {
  const auto prefs = load_instance(instance);
  if (!fs::exists(trace_path)) throw InputError("missing " + trace_path.string());
  const auto trace = load_trace_csv(trace_path);
  if (trace.empty()) throw InputError("trace is empty");
  const auto graph = build_matching_graph(prefs);
  YardstickReport r;
  r.horizon = trace.size();
  r.optimal = optimal_matches(graph, arrival_counts(trace, prefs.n()));
  r.delta = delta_overload(graph, r.horizon);
  return r;
}

void write_yardstick(std::ostream& out, const YardstickReport& r) {
  out << "T=" << r.horizon << '\n'
      << "M_star=" << r.optimal << '\n'
      << "delta=" << r.delta.num << '/' << r.delta.den << " (" << num(r.delta.value()) << ")\n";
}

}  // namespace recip::cmd
