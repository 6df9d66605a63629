#include "qgse/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qgse/acceptance.hpp"
#include "qgse/experiment.hpp"

namespace qgse {

namespace {

int do_run(const std::string& config_path, const std::string& out_dir, std::int64_t seed,
           int top_k) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (top_k > 0) cfg.top_k = top_k;
  std::optional<std::filesystem::path> base;
  if (!out_dir.empty()) base = out_dir;
  const RunArtifacts art = run_experiment(cfg, base);
  std::cout << "report: " << (base.value_or("") / cfg.report_path).string() << "\n"
            << "success: " << (art.criteria_pass ? "pass" : "fail") << "\n";
  return art.criteria_pass ? 0 : 1;
}

int do_sweep(const std::string& config_path, const std::string& out_dir, std::int64_t seed) {
  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("cannot open config " + config_path);
  nlohmann::json j;
  in >> j;
  ExperimentConfig base = config_from_json(j);
  if (seed >= 0) base.seed = static_cast<std::uint64_t>(seed);
  std::vector<SweepPoint> points;
  for (const auto& pt : sweep_points_json(j))
    points.push_back({pt.at("d").get<int>(), pt.at("q").get<int>(), pt.value("b", 0)});
  std::optional<std::filesystem::path> dir;
  if (!out_dir.empty()) dir = out_dir;
  const auto arts = run_sweep(base, points, dir);
  bool all = true;
  for (const auto& a : arts) all = all && a.criteria_pass;
  std::cout << arts.size() << " points, summary: "
            << (dir.value_or("") / base.summary_csv).string() << "\n";
  return all ? 0 : 1;
}

int do_fixtures(const std::string& suite, const std::string& out_dir) {
  const auto files = make_fixtures(suite, out_dir.empty() ? "fixtures" : out_dir);
  for (const auto& f : files) std::cout << f.string() << "\n";
  return 0;
}

int do_verify(const std::vector<int>& ids) {
  std::set<int> only(ids.begin(), ids.end());
  const auto results = run_acceptance(&std::cout, only);
  const bool pass = all_passed(results);
  std::cout << "acceptance: " << (pass ? "PASS" : "FAIL") << " ("
            << std::count_if(results.begin(), results.end(),
                             [](const CriterionResult& r) { return r.pass; })
            << "/" << results.size() << ")\n";
  return pass ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"ground-state eigenvalue estimation via modified phase estimation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all";
  std::int64_t seed = -1;
  int top_k = 0;
  std::vector<int> criteria;

  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--top-k", top_k, "outcomes to keep in the report");

  auto* sweep = app.add_subcommand("sweep", "run a sweep config (one row per point)");
  sweep->add_option("--config", config_path, "sweep config (JSON)")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--seed", seed, "seed override");

  auto* fixtures = app.add_subcommand("fixtures", "write derived oracle fixtures");
  fixtures->add_option("--suite", suite, "overlap|order|spectral|cost|all");
  fixtures->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--criterion", criteria, "criterion ids (default: all)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return do_run(config_path, out_dir, seed, top_k);
    if (sweep->parsed()) return do_sweep(config_path, out_dir, seed);
    if (fixtures->parsed()) return do_fixtures(suite, out_dir);
    if (verify->parsed()) return do_verify(criteria);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qgse
