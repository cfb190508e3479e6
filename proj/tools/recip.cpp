#include <omp.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "recip/commands.hpp"
#include "recip/errors.hpp"

using namespace recip;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reciprocal recommendation simulation lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Base random seed");
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "Output file or directory");

  // gen
  cmd::GenOptions gen;
  std::optional<double> flip;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("--generator", gen.generator, "clustered | adversarial | block | bipartite")->capture_default_str();
  g->add_option("--n", gen.n, "Users per side")->required();
  g->add_option("--boy-clusters", gen.boy_clusters, "Boy clusters (clustered)")->capture_default_str();
  g->add_option("--girl-clusters", gen.girl_clusters, "Girl clusters (clustered)")->capture_default_str();
  g->add_option("--p", gen.p, "Like probability (clustered) or edge probability (bipartite)")->capture_default_str();
  g->add_option("--flip", flip, "Sign flip probability (default 1/(2 ln n))");
  g->add_option("--m", gen.m, "Number of matches (adversarial) or target like mass (block)");
  g->add_option("--d", gen.d, "Blocks per row (block)");
  g->add_flag("--uniform-partition", gen.uniform_partition, "Draw cluster labels independently");
  g->add_flag("--per-cluster-pair", gen.per_cluster_pair, "One like coin per pair of clusters");

  // ingest
  cmd::IngestOptions ing;
  std::string count_mode = "combined", report_path;
  auto* in = app.add_subcommand("ingest", "Binarize and densify a ratings dataset");
  in->add_option("--ratings", ing.ratings, "rater,rated,rating CSV")->required();
  in->add_option("--genders", ing.genders, "id,gender CSV")->required();
  in->add_option("--coeff", ing.coeff, "Density coefficient c")->capture_default_str();
  in->add_option("--count-mode", count_mode, "combined | given | received")->capture_default_str();
  in->add_option("--report", report_path, "Densification report path");

  // cover
  cmd::CoverOptions cov;
  std::string cover_mode = "consensus", radii;
  bool shuffle = false;
  auto* c = app.add_subcommand("cover", "Greedy Hamming covering numbers of both sides");
  c->add_option("--instance", cov.instance, "Instance file")->required();
  c->add_option("--radii", radii, "Comma-separated radii (default 2n/ln n, n/ln n, n/(2 ln n))");
  c->add_option("--mode", cover_mode, "consensus | first-fit")->capture_default_str();
  c->add_flag("--shuffle", shuffle, "Scan columns in an order drawn from --seed");

  // run
  std::string config, instance, policies, seed_list, gamma, s_param, tolerance;
  std::uint64_t horizon = 0, seeds = 0, stride = 0;
  bool traces = false;
  auto* r = app.add_subcommand("run", "Run policies over a batch of seeds");
  r->add_option("--config", config, "key=value config file");
  r->add_option("--instance", instance, "Instance file");
  r->add_option("--policies", policies, "Comma-separated policy names");
  r->add_option("--T", horizon, "Horizon T, 1 <= T <= 2n^2");
  r->add_option("--seeds", seeds, "Number of seeds, starting at --seed");
  r->add_option("--seed-list", seed_list, "Explicit comma-separated seeds");
  r->add_option("--stride", stride, "Record the curve every this many rounds");
  r->add_flag("--traces", traces, "Write per-run trace CSVs");
  r->add_option("--gamma", gamma, "SMILE gamma");
  r->add_option("--S", s_param, "S override for smile and ismile");
  r->add_option("--tolerance", tolerance, "Agreement tolerance for smile and ismile");

  // yardstick
  std::string trace;
  auto* y = app.add_subcommand("yardstick", "Trace-optimal match count M*_T and Delta(M,T)");
  y->add_option("--instance", instance, "Instance file")->required();
  y->add_option("--trace", trace, "Trace CSV")->required();

  // report
  std::string run_dir;
  auto* rep = app.add_subcommand("report", "Summarize a run directory");
  rep->add_option("dir", run_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);
    if (g->parsed()) {
      gen.flip = flip;
      gen.seed = seed;
      gen.out = out;
      std::cout << cmd::gen(gen) << '\n';
    } else if (in->parsed()) {
      ing.mode = parse_count_mode(count_mode);
      ing.out = out;
      if (!report_path.empty()) ing.report = report_path;
      const auto d = cmd::ingest(ing);
      std::cout << "boys=" << d.boys << " girls=" << d.girls << " removals=" << d.removals.size()
                << " likes=" << d.likes << " matches=" << d.matches << '\n';
    } else if (c->parsed()) {
      if (cover_mode == "consensus") {
        cov.mode = CoveringMode::kConsensus;
      } else if (cover_mode == "first-fit") {
        cov.mode = CoveringMode::kFirstFit;
      } else {
        throw InputError("cover mode must be consensus or first-fit");
      }
      if (!radii.empty())
        for (const auto& x : split_commas(radii)) cov.radii.push_back(std::stoul(x));
      if (shuffle) cov.order_seed = seed;
      if (out.empty()) {
        cmd::cover(cov, std::cout);
      } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw InputError("cannot open " + out);
        cmd::cover(cov, f);
      }
    } else if (r->parsed()) {
      cmd::ExperimentConfig cfg = config.empty() ? cmd::ExperimentConfig{} : cmd::load_config(config);
      if (!instance.empty()) cfg.instance = instance;
      if (!policies.empty()) cfg.policies = split_commas(policies);
      if (horizon != 0) cfg.horizon = horizon;
      if (*r->get_option("--T") && horizon == 0) throw InputError("T must be at least 1");
      if (!seed_list.empty()) {
        cfg.seeds.clear();
        for (const auto& x : split_commas(seed_list)) cfg.seeds.push_back(std::stoull(x));
      } else if (seeds != 0) {
        cfg.seeds = cmd::seed_range(seed, seeds);
      } else if (cfg.seeds.empty()) {
        cfg.seeds = {seed};
      } else if (*seed_opt) {
        throw InputError("--seed conflicts with seeds from the config; use --seeds or --seed-list");
      }
      if (stride != 0) cfg.curve_stride = stride;
      if (traces) cfg.traces = true;
      if (!out.empty()) cfg.out = out;
      if (!gamma.empty()) cmd::set_shared_param(cfg, "gamma", gamma);
      if (!s_param.empty()) cmd::set_shared_param(cfg, "S", s_param);
      if (!tolerance.empty()) cmd::set_shared_param(cfg, "tolerance", tolerance);
      cmd::run(cfg);
      std::cout << "wrote " << cfg.out.string() << '\n';
    } else if (y->parsed()) {
      cmd::write_yardstick(std::cout, cmd::yardstick(instance, trace));
    } else if (rep->parsed()) {
      cmd::write_report(std::cout, cmd::summarize_run(run_dir));
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    // stoul/stoull parse failures count as bad input
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e)) {
      std::cerr << "error: bad number: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
