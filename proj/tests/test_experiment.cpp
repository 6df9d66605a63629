#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qgse/cli.hpp"
#include "qgse/experiment.hpp"

using namespace qgse;
namespace fs = std::filesystem;

namespace {

const char* kDemoConfig = R"({
  "schema": 1,
  "seed": 7,
  "problem": {"d": 1, "q": 4, "potential": {"family": "linear-mean", "params": {}}},
  "algorithm": {"b": 6, "mode": "exact", "k": 0, "step_policy": "calibrated", "query_bits": 0},
  "outputs": {"report": "r.json", "summary_csv": "s.csv", "top_k": 4}
})";

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("qgse_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string strip_timestamp(nlohmann::json j) {
  j.erase("timestamp");
  return j.dump(2);
}

}  // namespace

TEST_CASE("config serialization round-trips bit-exactly") {
  const auto j = nlohmann::json::parse(kDemoConfig);
  const ExperimentConfig cfg = config_from_json(j);
  const nlohmann::json out = config_to_json(cfg);
  const ExperimentConfig cfg2 = config_from_json(out);
  CHECK(config_to_json(cfg2).dump() == out.dump());
  CHECK(cfg2.seed == 7);
  CHECK(cfg2.family == "linear-mean");
  CHECK(cfg2.top_k == 4);

  // fractional parameters survive exactly
  ExperimentConfig with_params = cfg;
  with_params.family = "constant";
  with_params.params = {{"value", 0.1 + 0.2}};
  const auto rt = config_from_json(config_to_json(with_params));
  CHECK(rt.params.at("value") == with_params.params.at("value"));
}

TEST_CASE("config hash is stable and sensitive") {
  const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(kDemoConfig));
  const std::string h1 = config_hash(cfg);
  CHECK(h1 == config_hash(cfg));
  ExperimentConfig other = cfg;
  other.q = 5;
  CHECK(config_hash(other) != h1);
}

TEST_CASE("schema and field validation") {
  auto bad = nlohmann::json::parse(kDemoConfig);
  bad["schema"] = 2;
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  auto bad2 = nlohmann::json::parse(kDemoConfig);
  bad2["algorithm"]["mode"] = "magic";
  const ExperimentConfig cfg = config_from_json(bad2);
  CHECK_THROWS_AS(cfg.to_qpe_config(), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/qgse.json"), std::invalid_argument);
}

TEST_CASE("run_experiment writes report + summary and passes on the demo") {
  const fs::path dir = temp_dir("run");
  const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(kDemoConfig));
  const RunArtifacts art = run_experiment(cfg, dir);
  CHECK(art.criteria_pass);
  CHECK(fs::exists(dir / "r.json"));
  CHECK(fs::exists(dir / "s.csv"));

  const auto rep = art.report;
  CHECK(rep.at("config_hash") == config_hash(cfg));
  CHECK(rep.at("success").at("pass").get<bool>());
  CHECK(rep.at("estimate").at("abs_error_vs_oracle").get<double>() <=
        rep.at("estimate").at("error_bound").get<double>());
  CHECK(rep.at("distribution_top").size() == 4);

  std::ifstream csv(dir / "s.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == csv_summary_header());
  CHECK(row.rfind(config_hash(cfg), 0) == 0);
}

TEST_CASE("identical config + seed give identical report bytes modulo timestamp") {
  const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(kDemoConfig));
  const fs::path d1 = temp_dir("det1"), d2 = temp_dir("det2");
  const RunArtifacts a1 = run_experiment(cfg, d1);
  const RunArtifacts a2 = run_experiment(cfg, d2);
  CHECK(strip_timestamp(a1.report) == strip_timestamp(a2.report));
  CHECK(a1.summary_row == a2.summary_row);
}

TEST_CASE("sampling is seed-deterministic") {
  OutcomeDistribution dist;
  dist.b = 3;
  dist.p = {0.1, 0.2, 0.3, 0.05, 0.05, 0.1, 0.1, 0.1};
  const auto s1 = sample_outcomes(dist, 32, 99);
  const auto s2 = sample_outcomes(dist, 32, 99);
  const auto s3 = sample_outcomes(dist, 32, 100);
  CHECK(s1 == s2);
  CHECK(s1 != s3);
  for (auto j : s1) CHECK((j >= 0 && j < 8));
}

TEST_CASE("sweep produces one summary row per point") {
  const fs::path dir = temp_dir("sweep");
  ExperimentConfig base = config_from_json(nlohmann::json::parse(kDemoConfig));
  base.summary_csv = "sweep.csv";
  const auto arts = run_sweep(base, {{1, 3, 5}, {1, 4, 6}, {2, 2, 4}}, dir);
  CHECK(arts.size() == 3);
  std::ifstream csv(dir / "sweep.csv");
  int lines = 0;
  std::string line;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 4);  // header + 3 rows
}

TEST_CASE("acceptance suite shape") {
  const auto suite = acceptance_suite();
  CHECK(suite.size() == 42);
  std::set<std::string> potentials;
  for (const auto& inst : suite) {
    const GridSpec g = build_grid(inst.d, inst.q);
    CHECK(g.points() <= 1024);
    potentials.insert(std::to_string(inst.d) + "|" + inst.family + "|" + inst.label());
  }
  std::set<std::string> unique_pots;
  for (const auto& inst : suite) {
    std::string key = std::to_string(inst.d) + "|" + inst.family;
    for (const auto& [k, v] : inst.params) key += "|" + k + "=" + std::to_string(v);
    unique_pots.insert(key);
  }
  CHECK(unique_pots.size() == 21);
}

TEST_CASE("fixtures are deterministic") {
  const fs::path d1 = temp_dir("fx1"), d2 = temp_dir("fx2");
  make_fixtures("order", d1);
  make_fixtures("order", d2);
  std::ifstream f1(d1 / "order.json"), f2(d2 / "order.json");
  const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK(!s1.empty());
  CHECK_THROWS_AS(make_fixtures("bogus", d1), std::invalid_argument);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = temp_dir("cli");
  const fs::path cfg_path = dir / "cfg.json";
  {
    std::ofstream out(cfg_path);
    out << kDemoConfig;
  }
  CHECK(cli_main({"run", "--config", cfg_path.string(), "--out", (dir / "out").string()}) == 0);
  CHECK(cli_main({"run", "--config", "/nonexistent/cfg.json"}) == 2);

  const fs::path bad_path = dir / "bad.json";
  {
    std::ofstream out(bad_path);
    out << "{ not json";
  }
  CHECK(cli_main({"run", "--config", bad_path.string()}) == 2);
  CHECK(cli_main({"definitely-not-a-verb"}) == 2);
  CHECK(cli_main({"fixtures", "--suite", "order", "--out", (dir / "fx").string()}) == 0);
}
