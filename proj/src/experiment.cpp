#include "qgse/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qgse {

namespace {

constexpr double kPi = std::numbers::pi;

PropagatorMode mode_from_string(const std::string& s) {
  if (s == "exact") return PropagatorMode::exact;
  if (s == "splitting") return PropagatorMode::splitting;
  throw std::invalid_argument("mode must be 'exact' or 'splitting', got '" + s + "'");
}

StepPolicy policy_from_string(const std::string& s) {
  if (s == "calibrated") return StepPolicy::calibrated;
  if (s == "empirical") return StepPolicy::empirical;
  if (s == "analytic") return StepPolicy::analytic;
  throw std::invalid_argument("step_policy must be calibrated|empirical|analytic, got '" + s + "'");
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
  return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void append_csv(const std::filesystem::path& p, const std::string& header,
                const std::string& row) {
  const bool fresh = !std::filesystem::exists(p) || std::filesystem::file_size(p) == 0;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append " + p.string());
  if (fresh) out << header << '\n';
  out << row << '\n';
}

}  // namespace

QpeConfig ExperimentConfig::to_qpe_config() const {
  QpeConfig qc;
  qc.grid = build_grid(d, q);
  std::map<std::string, double> p = params;
  if (family == "random-trig" && p.find("seed") == p.end())
    p["seed"] = static_cast<double>(seed);
  qc.potential = make_potential(family, p, d);
  qc.b = b;
  qc.mode = mode_from_string(mode);
  qc.k = k;
  qc.step_policy = policy_from_string(step_policy);
  qc.query_bits = query_bits;
  return qc;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.schema = j.at("schema").get<int>();
  if (cfg.schema != 1) throw std::invalid_argument("unsupported config schema");
  cfg.seed = j.value("seed", std::uint64_t{1});

  const auto& prob = j.at("problem");
  cfg.d = prob.at("d").get<int>();
  cfg.q = prob.at("q").get<int>();
  const auto& pot = prob.at("potential");
  cfg.family = pot.at("family").get<std::string>();
  if (pot.contains("params"))
    cfg.params = pot.at("params").get<std::map<std::string, double>>();

  const auto& alg = j.at("algorithm");
  cfg.b = alg.value("b", 0);
  cfg.mode = alg.value("mode", std::string("exact"));
  cfg.k = alg.value("k", 0);
  cfg.step_policy = alg.value("step_policy", std::string("calibrated"));
  cfg.query_bits = alg.value("query_bits", 0);

  if (j.contains("outputs")) {
    const auto& out = j.at("outputs");
    cfg.report_path = out.value("report", std::string("report.json"));
    cfg.summary_csv = out.value("summary_csv", std::string("summary.csv"));
    cfg.top_k = out.value("top_k", 8);
  }
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["schema"] = cfg.schema;
  j["seed"] = cfg.seed;
  j["problem"] = {{"d", cfg.d},
                  {"q", cfg.q},
                  {"potential", {{"family", cfg.family}, {"params", cfg.params}}}};
  j["algorithm"] = {{"b", cfg.b},
                    {"mode", cfg.mode},
                    {"k", cfg.k},
                    {"step_policy", cfg.step_policy},
                    {"query_bits", cfg.query_bits}};
  j["outputs"] = {{"report", cfg.report_path},
                  {"summary_csv", cfg.summary_csv},
                  {"top_k", cfg.top_k}};
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::hex << fnv1a64(config_to_json(cfg).dump());
  return "fnv1a:" + os.str();
}

std::vector<std::int64_t> sample_outcomes(const OutcomeDistribution& dist, int n,
                                          std::uint64_t seed) {
  // inverse-CDF sampling with our own uniforms, reproducible across platforms
  std::vector<double> cdf(dist.p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    acc += dist.p[i];
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = std::ldexp(static_cast<double>(rng() >> 11), -53) * acc;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    out.push_back(it == cdf.end() ? static_cast<std::int64_t>(cdf.size()) - 1
                                  : static_cast<std::int64_t>(it - cdf.begin()));
  }
  return out;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& out_dir) {
  const QpeConfig qc = cfg.to_qpe_config();
  qc.validate();
  const QpeRun run = run_qpe(qc);
  const EnergyEstimate est = estimate_energy(run.dist, qc, run.phi1, run.oracle_e1);
  const SuccessReport success = success_report(run.dist, run.oracle_e1, qc);
  const double err_bound = 4.0 * kPi * qc.grid.d * std::ldexp(1.0, -run.dist.b);

  nlohmann::json rep;
  rep["schema"] = 1;
  rep["config"] = config_to_json(cfg);
  rep["config_hash"] = config_hash(cfg);
  rep["timestamp"] = iso_timestamp();  // excluded from determinism comparisons
  rep["oracle"] = {{"e_h1", run.oracle_e1}, {"phi1", run.phi1}};
  rep["estimate"] = {{"j", est.j},
                     {"e_hat", est.e_hat},
                     {"abs_error_vs_oracle", std::abs(est.e_hat - run.oracle_e1)},
                     {"error_bound", err_bound}};
  rep["success"] = {{"mass", success.success_mass},
                    {"threshold", success.threshold},
                    {"pass", success.pass}};

  // top-K outcomes by probability (ties to smaller index)
  std::vector<std::int64_t> order(run.dist.p.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
  std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b2) {
    return run.dist.p[static_cast<std::size_t>(a)] > run.dist.p[static_cast<std::size_t>(b2)];
  });
  nlohmann::json top = nlohmann::json::array();
  for (int i = 0; i < cfg.top_k && i < static_cast<int>(order.size()); ++i)
    top.push_back({{"j", order[static_cast<std::size_t>(i)]},
                   {"p", run.dist.p[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]}});
  rep["distribution_top"] = top;

  nlohmann::json cost;
  cost["mode"] = run.cost.mode;
  cost["k_used"] = run.cost.k_used;
  cost["k_star"] = run.cost.k_star;
  cost["qubits"] = run.cost.qubits;
  cost["h1_exponentials"] = run.cost.h1_total;
  cost["h2_exponentials"] = run.cost.h2_total;
  cost["queries"] = run.cost.queries;
  cost["analytic_total_bound"] = run.cost.analytic_n;
  cost["analytic_total_bound_class"] = run.cost.analytic_n_class;
  cost["other_ops_model"] = run.cost.other_ops;
  nlohmann::json per_power = nlohmann::json::array();
  for (const auto& pp : run.cost.per_power)
    per_power.push_back({{"t", pp.t}, {"h1", pp.h1}, {"h2", pp.h2}, {"steps", pp.steps}});
  cost["per_power"] = per_power;
  rep["cost"] = cost;

  nlohmann::json perr = nlohmann::json::array();
  for (const auto& pe : run.power_errors)
    perr.push_back({{"t", pe.t},
                    {"steps", pe.steps},
                    {"measured_error", pe.measured},
                    {"budget", pe.budget}});
  rep["power_errors"] = perr;
  rep["samples"] = sample_outcomes(run.dist, 16, cfg.seed);

  std::ostringstream row;
  row.precision(12);
  row << config_hash(cfg) << ',' << cfg.d << ',' << cfg.q << ',' << run.dist.b << ','
      << cfg.mode << ',' << run.cost.k_used << ',' << run.oracle_e1 << ',' << est.e_hat << ','
      << success.success_mass << ',' << (success.pass ? 1 : 0) << ','
      << (run.cost.h1_total + run.cost.h2_total) << ',' << run.cost.queries << ','
      << run.cost.qubits;

  RunArtifacts art;
  art.report = rep;
  art.summary_row = row.str();
  art.criteria_pass = success.pass && std::abs(est.e_hat - run.oracle_e1) <= err_bound;

  const std::filesystem::path base = out_dir.value_or(std::filesystem::path{});
  write_text(base / cfg.report_path, rep.dump(2) + "\n");
  append_csv(base / cfg.summary_csv, csv_summary_header(), art.summary_row);
  return art;
}

std::string csv_summary_header() {
  return "config_hash,d,q,b,mode,k,e_h1,e_hat,success_mass,pass,exponentials,queries,qubits";
}

std::vector<RunArtifacts> run_sweep(const ExperimentConfig& base,
                                    const std::vector<SweepPoint>& points,
                                    const std::optional<std::filesystem::path>& out_dir) {
  std::vector<RunArtifacts> arts;
  arts.reserve(points.size());
  int idx = 0;
  for (const auto& pt : points) {
    ExperimentConfig cfg = base;
    cfg.d = pt.d;
    cfg.q = pt.q;
    cfg.b = pt.b;
    cfg.report_path = "sweep_" + std::to_string(idx++) + ".json";
    arts.push_back(run_experiment(cfg, out_dir));
  }
  return arts;
}

nlohmann::json sweep_points_json(const nlohmann::json& sweep_config) {
  if (!sweep_config.contains("sweep") || !sweep_config["sweep"].contains("points"))
    throw std::invalid_argument("sweep config must contain sweep.points");
  return sweep_config["sweep"]["points"];
}

std::string SuiteInstance::label() const {
  std::ostringstream os;
  os << "d" << d << "_q" << q << "_" << family;
  for (const auto& [key, val] : params) os << "_" << key << val;
  return os.str();
}

std::vector<SuiteInstance> acceptance_suite() {
  std::vector<SuiteInstance> out;
  const std::vector<std::pair<int, std::vector<int>>> grids = {
      {1, {4, 5}}, {2, {3, 4}}, {3, {2, 3}}};
  for (const auto& [d, qs] : grids) {
    std::vector<SuiteInstance> pots;
    pots.push_back({d, 0, "zero", {}});
    pots.push_back({d, 0, "constant", {{"value", 0.7}}});
    pots.push_back({d, 0, "linear-mean", {}});
    pots.push_back({d, 0, "sep-trig", {}});
    for (double s : {1.0, 2.0, 3.0}) pots.push_back({d, 0, "random-trig", {{"seed", s}}});
    for (int q : qs)
      for (SuiteInstance inst : pots) {
        inst.q = q;
        out.push_back(inst);
      }
  }
  return out;
}

std::vector<std::filesystem::path> make_fixtures(const std::string& suite,
                                                 const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(out_dir);
  const bool all = suite == "all";

  auto emit = [&](const std::string& name, const nlohmann::json& j) {
    const auto p = out_dir / (name + ".json");
    write_text(p, j.dump(2) + "\n");
    written.push_back(p);
  };

  if (all || suite == "overlap") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& inst : acceptance_suite()) {
      const GridSpec g = build_grid(inst.d, inst.q);
      const auto pot = make_potential(inst.family, inst.params, inst.d);
      const auto H = discretize(pot, g);
      const DenseSpectrum spec = dense_spectrum(H);
      const OverlapSpectrum ov = overlap_spectrum(H, spec, 4);
      rows.push_back({{"label", inst.label()},
                      {"d", inst.d},
                      {"q", inst.q},
                      {"family", inst.family},
                      {"params", inst.params},
                      {"e_h1", spec.values(0)},
                      {"d1_squared", ov.d1_squared}});
    }
    emit("overlap", {{"schema", 1}, {"suite", "overlap"}, {"rows", rows}});
  }

  if (all || suite == "order") {
    const GridSpec g = build_grid(1, 3);
    const auto H = discretize(make_potential("linear-mean", {}, 1), g);
    const ExactPropagator prop(H);
    nlohmann::json rows = nlohmann::json::array();
    for (int k : {1, 2})
      for (std::int64_t n : {4, 8, 16, 32}) {
        const double err = schedule_error_norm(H, suzuki_schedule(k, 1.0, n), prop);
        rows.push_back({{"k", k},
                        {"n", n},
                        {"lambda", 1.0 / static_cast<double>(n)},
                        {"error", err}});
      }
    emit("order", {{"schema", 1}, {"suite", "order"}, {"rows", rows}});
  }

  if (all || suite == "spectral") {
    nlohmann::json rows = nlohmann::json::array();
    const std::vector<std::tuple<std::string, std::map<std::string, double>, int, int>> cases = {
        {"zero", {}, 1, 3},
        {"linear-mean", {}, 1, 4},
        {"sine", {{"amplitude", 0.3}}, 1, 5},
        {"linear-mean", {}, 2, 3},
    };
    for (const auto& [family, params, d, q] : cases) {
      const GridSpec g = build_grid(d, q);
      const auto H = discretize(make_potential(family, params, d), g);
      const SpectralResult gs = ground_state(H);
      rows.push_back({{"family", family},
                      {"params", params},
                      {"d", d},
                      {"q", q},
                      {"e_h1", gs.e1},
                      {"residual", gs.residual},
                      {"method", gs.method}});
    }
    emit("spectral", {{"schema", 1}, {"suite", "spectral"}, {"rows", rows}});
  }

  if (all || suite == "scaling") {
    std::vector<std::pair<int, int>> points;
    for (int d = 1; d <= 3; ++d)
      for (int b = 6; b <= 12; ++b) points.emplace_back(d, b);
    const auto rows = nstar_scaling(points);
    const auto p = out_dir / "scaling.csv";
    write_text(p, scaling_csv(rows));
    written.push_back(p);

    std::vector<ScalingRow> d1;
    for (const auto& r : rows)
      if (r.d == 1) d1.push_back(r);
    emit("scaling_fit", {{"schema", 1},
                         {"suite", "scaling"},
                         {"b_range", {6, 12}},
                         {"epsilon_exponent_d1", fit_epsilon_exponent(d1)}});
  }

  if (all || suite == "cost") {
    ExperimentConfig cfg;
    cfg.d = 1;
    cfg.q = 3;
    cfg.b = 6;
    cfg.family = "linear-mean";
    cfg.mode = "splitting";
    cfg.k = 1;
    const QpeRun run = run_qpe(cfg.to_qpe_config());
    const SlackReport slack = empirical_vs_analytic(run.cost);
    emit("cost", {{"schema", 1},
                  {"suite", "cost"},
                  {"d", 1},
                  {"q", 3},
                  {"b", 6},
                  {"k", 1},
                  {"empirical", slack.empirical},
                  {"analytic", slack.analytic},
                  {"ratio", slack.ratio},
                  {"queries", run.cost.queries}});
  }

  if (written.empty()) throw std::invalid_argument("unknown fixture suite: " + suite);
  return written;
}

}  // namespace qgse
