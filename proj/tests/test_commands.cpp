#include <gtest/gtest.h>
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "recip/commands.hpp"
#include "recip/datagen.hpp"
#include "recip/errors.hpp"
#include "recip/experiment.hpp"
#include "recip/omniscient.hpp"

using namespace recip;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("recip_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

fs::path make_instance(const fs::path& dir, std::size_t n = 40, std::uint64_t seed = 5) {
  cmd::GenOptions g;
  g.n = n;
  g.boy_clusters = 3;
  g.girl_clusters = 4;
  g.seed = seed;
  g.out = dir / "inst.txt";
  cmd::gen(g);
  return g.out;
}

int cli(const std::string& args) {
  const std::string command = std::string(RECIP_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

cmd::ExperimentConfig config_for(const fs::path& inst, const fs::path& out) {
  cmd::ExperimentConfig cfg;
  cfg.instance = inst;
  cfg.policies = {"ismile", "uromm", "oomm", "smile"};
  cfg.horizon = 1500;
  cfg.seeds = {4, 9, 2};
  cfg.out = out;
  cfg.curve_stride = 50;
  return cfg;
}

}  // namespace

TEST(Config, ParsesKeysAndParams) {
  std::istringstream in(
      "# comment\n"
      "instance = data/x.txt\n"
      "policies=smile,ismile,oomm\n"
      "T=500\n"
      "seed=10\n"
      "seeds=3   # trailing comment\n"
      "out=runs/a\n"
      "stride=25\n"
      "traces=true\n"
      "S=12\n"
      "smile.gamma=2.5\n"
      "ismile.tolerance=0.2\n");
  const auto cfg = cmd::parse_config(in);
  EXPECT_EQ(cfg.instance, fs::path("data/x.txt"));
  EXPECT_EQ(cfg.policies, (std::vector<std::string>{"smile", "ismile", "oomm"}));
  EXPECT_EQ(cfg.horizon, 500u);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{10, 11, 12}));
  EXPECT_EQ(cfg.curve_stride, 25u);
  EXPECT_TRUE(cfg.traces);
  EXPECT_EQ(cfg.params.at("smile").s, 12u);
  EXPECT_EQ(cfg.params.at("ismile").s, 12u);
  EXPECT_EQ(cfg.params.at("smile").gamma, 2.5);
  EXPECT_EQ(cfg.params.at("ismile").tolerance, 0.2);
  EXPECT_EQ(cfg.params.count("oomm"), 0u);
}

TEST(Config, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return cmd::parse_config(in);
  };
  auto message = [&](const std::string& s) {
    try {
      parse(s);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("T=5\nnonsense\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("T=-5\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("policies=oomm\noomm.S=3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("policies=smile\nbogus=1\n").find("line 2"), std::string::npos);
  const auto list = parse("seed_list=5,3,8\nseeds=2\n");
  EXPECT_EQ(list.seeds, (std::vector<std::uint64_t>{5, 3, 8}));
}

TEST(Gen, WritesInstanceAndManifest) {
  const auto dir = scratch("gen");
  cmd::GenOptions g;
  g.generator = "adversarial";
  g.n = 20;
  g.m = 30;
  g.seed = 8;
  g.out = dir / "adv.txt";
  const auto line = cmd::gen(g);
  EXPECT_EQ(load_instance(g.out), gen_adversarial_random(20, 30, 8));
  EXPECT_EQ(slurp(dir / "adv.txt.manifest"), line + "\n");
  EXPECT_NE(line.find("generator=adversarial"), std::string::npos);
  EXPECT_NE(line.find("seed=8"), std::string::npos);
  g.generator = "nope";
  EXPECT_THROW(cmd::gen(g), InputError);
}

TEST(Cover, MatchesDirectComputation) {
  const auto dir = scratch("cover");
  const auto inst = make_instance(dir, 80);
  std::ostringstream out;
  cmd::cover({inst, {0, 10, 20}, CoveringMode::kConsensus, {}}, out);
  const auto prefs = load_instance(inst);
  std::ostringstream want;
  want << "radius,boys_cover,girls_cover\n";
  for (std::size_t r : {0, 10, 20})
    want << r << ',' << greedy_covering(boy_columns(prefs), r).size << ','
         << greedy_covering(girl_columns(prefs), r).size << '\n';
  EXPECT_EQ(out.str(), want.str());
}

TEST(Ingest, WritesInstanceAndReport) {
  const auto dir = scratch("ingest");
  std::ofstream(dir / "r.csv") << "1,2,9\n2,1,8\n3,2,1\n";
  std::ofstream(dir / "g.csv") << "1,M\n2,F\n3,M\n";
  cmd::IngestOptions o{dir / "r.csv", dir / "g.csv", 1.0, CountMode::kCombined, dir / "i.txt", dir / "rep.txt"};
  const auto rep = cmd::ingest(o);
  EXPECT_TRUE(rep.removals.empty());
  EXPECT_EQ(rep.boys, 2u);
  EXPECT_EQ(rep.girls, 1u);
  EXPECT_EQ(rep.phantom_girls, 1u);
  EXPECT_EQ(load_instance(dir / "i.txt").n(), 2u);
  EXPECT_NE(slurp(dir / "rep.txt").find("matches=1"), std::string::npos);
}

TEST(Run, SinglePolicySingleSeed) {
  const auto dir = scratch("run1");
  const auto inst = make_instance(dir);
  cmd::ExperimentConfig cfg;
  cfg.instance = inst;
  cfg.policies = {"oomm"};
  cfg.horizon = 700;
  cfg.seeds = {3};
  cfg.out = dir / "out";
  cmd::run(cfg);
  const auto curves = csv(cfg.out / "curves.csv");
  ASSERT_EQ(curves.size(), 701u);
  for (const auto& row : curves) EXPECT_EQ(row.size(), 2u);
  OommPolicy pol;
  const auto r = run_protocol(load_instance(inst), pol, 700, 3);
  for (std::size_t t = 1; t <= 700; ++t) EXPECT_EQ(std::stoul(curves[t][1]), r.curve[t - 1]);
  const auto auc = csv(cfg.out / "auc.csv");
  EXPECT_NEAR(std::stod(auc[1][1]), area_under_curve(r), 1e-6);
  EXPECT_FALSE(fs::exists(cfg.out / "clusters.csv"));
}

TEST(Run, ColumnOrderFollowsConfig) {
  const auto dir = scratch("order");
  const auto cfg = config_for(make_instance(dir), dir / "out");
  cmd::run(cfg);
  const std::vector<std::string> header{"ismile", "uromm", "oomm", "smile"};
  for (const auto* file : {"curves.csv", "auc.csv", "auc_seeds.csv"}) {
    const auto rows = csv(cfg.out / file);
    EXPECT_EQ(std::vector<std::string>(rows[0].begin() + 1, rows[0].end()), header) << file;
  }
  const auto final_rows = csv(cfg.out / "final.csv");
  EXPECT_EQ(final_rows[1][0], "ismile");
  EXPECT_EQ(final_rows[1][1], "4");
  EXPECT_EQ(final_rows.back()[0], "smile");
}

TEST(Run, ByteIdenticalAcrossRerunsAndThreadCounts) {
  const auto dir = scratch("det");
  const auto inst = make_instance(dir);
  auto a = config_for(inst, dir / "a");
  auto b = config_for(inst, dir / "b");
  a.traces = b.traces = true;
  omp_set_num_threads(1);
  cmd::run(a);
  omp_set_num_threads(3);
  cmd::run(b);
  for (const auto& e : fs::recursive_directory_iterator(a.out)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a.out);
    EXPECT_EQ(slurp(e.path()), slurp(b.out / rel)) << rel;
  }
}

TEST(Run, RejectsBadInput) {
  const auto dir = scratch("bad");
  auto cfg = config_for(make_instance(dir), dir / "out");
  cfg.horizon = 2 * 40 * 40 + 1;
  EXPECT_THROW(cmd::run(cfg), InputError);
  cfg.horizon = 0;
  EXPECT_THROW(cmd::run(cfg), InputError);
  cfg.horizon = 3200;
  cfg.policies = {"oomm", "idomm"};
  EXPECT_THROW(cmd::run(cfg), InputError);
  cfg.policies = {"oomm", "oomm"};
  EXPECT_THROW(cmd::run(cfg), InputError);
  cfg.policies = {"oomm"};
  cfg.instance = dir / "missing.txt";
  EXPECT_THROW(cmd::run(cfg), InputError);
}

TEST(Batch, ParallelEqualsSerialAndDominated) {
  const auto prefs = gen_clustered({50, 3, 3, 0.3, 0.05, 2});
  BatchSpec spec{{"uromm", "oomm", "smile", "ismile"}, {}, 2000, {1, 2, 3, 4, 5}, 100, false};
  omp_set_num_threads(3);
  const auto par = run_batch(prefs, spec);
  const auto ser = run_batch_serial(prefs, spec);
  const auto graph = build_matching_graph(prefs);
  ASSERT_EQ(par.runs.size(), 4u);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t s = 0; s < 5; ++s) {
      EXPECT_EQ(par.runs[p][s].curve, ser.runs[p][s].curve);
      EXPECT_EQ(par.runs[p][s].seed, spec.seeds[s]);
      EXPECT_LE(par.runs[p][s].final_matches(), par.optimal[s]);
    }
  EXPECT_EQ(par.optimal, ser.optimal);
  EXPECT_EQ(par.total_matches, graph.match_count());
}

TEST(Report, MissingFilesAreNamed) {
  const auto dir = scratch("empty");
  try {
    cmd::summarize_run(dir);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("manifest.txt"), std::string::npos);
  }
}

TEST(Report, NumbersEqualReparse) {
  const auto dir = scratch("report");
  const auto cfg = config_for(make_instance(dir), dir / "out");
  cmd::run(cfg);
  const auto rep = cmd::summarize_run(cfg.out);
  const auto rows = csv(cfg.out / "final.csv");
  EXPECT_EQ(rep.seeds, 3u);
  EXPECT_EQ(rep.horizon, 1500u);
  ASSERT_EQ(rep.policies.size(), 4u);
  for (const auto& p : rep.policies) {
    double fin = 0, auc = 0;
    int k = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i][0] == p.policy) {
        fin += std::stod(rows[i][2]);
        auc += std::stod(rows[i][3]);
        ++k;
      }
    EXPECT_EQ(k, 3);
    EXPECT_NEAR(p.mean_final, fin / k, 1e-9);
    EXPECT_NEAR(p.mean_auc, auc / k, 1e-9);
    EXPECT_NEAR(p.fraction_of_m, p.mean_final / static_cast<double>(rep.total_matches), 1e-12);
  }
  const auto& smile = rep.policies[3];
  EXPECT_EQ(smile.policy, "smile");
  ASSERT_TRUE(smile.mean_cb && smile.mean_cg);
  EXPECT_TRUE(smile.bound_status == "holds" || smile.bound_status == "flagged");
  std::ostringstream text;
  cmd::write_report(text, rep);
  EXPECT_NE(text.str().find("smile:"), std::string::npos);
  EXPECT_NE(text.str().find("bound="), std::string::npos);
}

TEST(Yardstick, FromSavedTrace) {
  const auto dir = scratch("yard");
  const auto inst = make_instance(dir);
  auto cfg = config_for(inst, dir / "out");
  cfg.traces = true;
  cmd::run(cfg);
  const auto y = cmd::yardstick(inst, cfg.out / "traces" / "oomm_9.csv");
  const auto rows = csv(cfg.out / "yardstick.csv");
  EXPECT_EQ(y.horizon, 1500u);
  EXPECT_EQ(std::to_string(y.optimal), rows[2][1]);
  std::ostringstream out;
  cmd::write_yardstick(out, y);
  EXPECT_NE(out.str().find("M_star=" + rows[2][1]), std::string::npos);
  EXPECT_THROW(cmd::yardstick(inst, dir / "none.csv"), InputError);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const auto inst = make_instance(dir);
  EXPECT_EQ(cli("--help"), 0);
  EXPECT_EQ(cli("cover --instance " + inst.string()), 0);
  EXPECT_EQ(cli("--out " + (dir / "r").string() + " run --instance " + inst.string() + " --policies oomm --T 100"), 0);
  EXPECT_EQ(cli("report " + (dir / "r").string()), 0);
  EXPECT_EQ(cli("report " + (dir / "nothing").string()), 2);
  EXPECT_EQ(cli("--out " + (dir / "x").string() + " run --instance " + inst.string() + " --policies oomm --T 0"), 2);
  EXPECT_EQ(cli("run --instance " + inst.string() + " --policies what --T 10 --out " + (dir / "y").string()), 2);
  EXPECT_EQ(cli("gen --n 10"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
}
