#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cogmux/analytics.hpp"
#include "cogmux/channel_model.hpp"
#include "cogmux/config.hpp"
#include "cogmux/curve_io.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/mmse_detector.hpp"
#include "cogmux/montecarlo.hpp"
#include "cogmux/power_control.hpp"
#include "cogmux/validation.hpp"

namespace cogmux::cli {

namespace an = analytics;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kMetrics = {"pf",       "roc",    "auc",         "detection_vs_snr",
                                           "sinr_cdf", "outage", "interference"};

struct Options {
  std::string config_path;
  std::string preset;
  std::string metric;
  std::string grid;
  std::string out;
  std::string mode = "subset-exact";
  std::string profile = "default";
  long trials = 0;
  std::uint64_t seed = 1;
  int primary = 1;
  bool trials_set = false;
};

SystemConfig load(const Options& o) {
  if (o.config_path.empty() == o.preset.empty()) throw UsageError("exactly one of --config or --preset is required");
  return o.preset.empty() ? load_config_file(o.config_path) : load_preset(o.preset);
}

an::OutageMode outage_mode(const std::string& m) {
  if (m == "subset-exact") return an::OutageMode::subset_exact;
  if (m == "paper-literal") return an::OutageMode::paper_literal;
  throw UsageError("--mode must be subset-exact or paper-literal");
}

double stream_kappa(const SystemConfig& cfg, const SystemBudgets& b) {
  return sinr_bound(b.links[cfg.stream_index - 1]);
}

std::vector<double> default_grid(const std::string& metric, const SystemConfig& cfg) {
  if (metric == "pf") {
    const double scale = 2.0 * cfg.n_rx_antennas * cfg.samples * cfg.sensing_noise_var();
    std::vector<double> g;
    for (int k = 0; k <= 40; ++k) g.push_back(scale * 0.05 * k);
    return g;
  }
  if (metric == "roc") return parse_grid("0.01:0.99:0.01");
  if (metric == "auc" || metric == "detection_vs_snr") return parse_grid("-20:20:1");
  if (metric == "sinr_cdf" || metric == "outage") return parse_grid("0.05:0.95:0.05");
  return parse_grid("0.05:1:0.05");
}

std::vector<double> grid_for(const Options& o, const SystemConfig& cfg) {
  std::vector<double> g = o.grid.empty() ? default_grid(o.metric, cfg) : parse_grid(o.grid);
  if (o.metric == "roc")
    for (double t : g)
      if (!(t > 0.0 && t < 1.0)) throw UsageError("roc grid holds target false-alarm values in (0, 1)");
  if (o.metric == "pf")
    for (double t : g)
      if (t < 0.0) throw UsageError("pf grid holds thresholds >= 0");
  return g;
}

void check_metric(const std::string& m) {
  if (std::find(kMetrics.begin(), kMetrics.end(), m) == kMetrics.end()) {
    std::string all;
    for (const auto& k : kMetrics) all += (all.empty() ? "" : ", ") + k;
    throw UsageError("unknown metric '" + m + "' (expected one of " + all + ")");
  }
}

int primary_index(const Options& o, const SystemConfig& cfg) {
  if (o.primary < 1 || o.primary > cfg.n_primary())
    throw UsageError("--primary must lie in 1.." + std::to_string(cfg.n_primary()));
  return o.primary - 1;
}

double lambda_star(const SystemConfig& cfg, double tau) {
  return an::threshold_for_target_pf(tau, cfg.n_rx_antennas, cfg.samples, cfg.sensing_noise_var());
}

std::vector<CsvRow> analytic_rows(const Options& o, const SystemConfig& cfg) {
  check_metric(o.metric);
  const std::vector<double> grid = grid_for(o, cfg);
  const SystemBudgets bud = compute_budgets(cfg);
  const an::EdParams ed = an::EdParams::from(cfg);
  an::AnalyticCurve c;
  c.metric = o.metric;
  c.config_digest = config_digest(cfg);
  const an::OutageMode mode = outage_mode(o.mode);
  for (double x : grid) {
    double y = 0.0;
    if (o.metric == "pf") {
      y = an::pf(x, ed.N, ed.L, ed.noise_var);
    } else if (o.metric == "roc") {
      y = an::pd_unconditional(ed, bud.primary_betas(), lambda_star(cfg, x));
    } else if (o.metric == "auc") {
      const SystemConfig s = with_snr_db(cfg, x);
      y = an::auc_unconditional(an::EdParams::from(s), compute_budgets(s).primary_betas());
    } else if (o.metric == "detection_vs_snr") {
      const SystemConfig s = with_snr_db(cfg, x);
      y = an::pd_unconditional(an::EdParams::from(s), compute_budgets(s).primary_betas(),
                               lambda_star(s, s.pf_target));
    } else if (o.metric == "sinr_cdf") {
      y = an::cdf_sinr(x * stream_kappa(cfg, bud), bud.links, cfg.stream_index - 1, cfg.n_rx_antennas,
                       cfg.noise_var);
    } else if (o.metric == "outage") {
      y = an::outage_probability(cfg, bud, x * stream_kappa(cfg, bud), mode);
    } else {
      const double w = x * cfg.p_max_w;
      const PowerPlan plan = plan_powers(cfg, w);
      const std::vector<double> sc = interference_scales(cfg, plan, primary_index(o, cfg));
      try {
        y = interference_exceed_prob(sc, w);
      } catch (const DegenerateScalesError&) {
        y = interference_exceed_prob_erlang(sc, w);
      }
    }
    c.x.push_back(x);
    c.y.push_back(y);
  }
  return csv_rows(c);
}

std::vector<CsvRow> simulate_rows(const Options& o, const SystemConfig& cfg) {
  check_metric(o.metric);
  if (!o.trials_set) throw UsageError("--trials is required for simulate");
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  const std::vector<double> grid = grid_for(o, cfg);
  const SystemBudgets bud = compute_budgets(cfg);
  const std::string digest = config_digest(cfg);
  mc::ExperimentSpec spec{cfg, mc::Metric::sinr_cdf, grid, o.trials, o.seed};
  mc::McCurve c;

  if (o.metric == "pf") {
    const auto est = mc::run_false_alarm(cfg, grid, o.trials, o.seed);
    c.x = grid;
    c.y = est;
    c.metric = "pf";
  } else if (o.metric == "roc") {
    std::vector<double> lam;
    for (double t : grid) lam.push_back(lambda_star(cfg, t));
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lam[a] < lam[b]; });
    spec.metric = mc::Metric::roc;
    spec.grid.clear();
    for (std::size_t k : order) spec.grid.push_back(lam[k]);
    const mc::RocResult r = mc::run_roc(spec);
    mc::McCurve pf;
    pf.metric = "roc_pf";
    c.metric = "roc";
    c.x = pf.x = grid;
    c.y.resize(grid.size());
    pf.y.resize(grid.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      c.y[order[k]] = r.pd[k];
      pf.y[order[k]] = r.pf[k];
    }
    c.config_digest = pf.config_digest = digest;
    std::vector<CsvRow> rows = csv_rows(c);
    const std::vector<CsvRow> more = csv_rows(pf);
    rows.insert(rows.end(), more.begin(), more.end());
    return rows;
  } else if (o.metric == "auc") {
    c.metric = "auc";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      mc::ExperimentSpec s{with_snr_db(cfg, grid[k]), mc::Metric::auc, {0.0}, o.trials,
                           derive_stream_seed(o.seed, k)};
      c.x.push_back(grid[k]);
      c.y.push_back(mc::run_auc(s));
      c.y.back().seed = o.seed;
    }
  } else if (o.metric == "detection_vs_snr") {
    spec.metric = mc::Metric::detection_vs_snr;
    c = mc::run_detection_vs_snr(spec);
  } else if (o.metric == "sinr_cdf" || o.metric == "outage") {
    const double kappa = stream_kappa(cfg, bud);
    for (double& g : spec.grid) g *= kappa;
    if (o.metric == "sinr_cdf") {
      c = mc::run_sinr_cdf(spec);
    } else {
      spec.metric = mc::Metric::outage;
      c = mc::run_outage(spec);
    }
    c.x = grid;
  } else {
    spec.metric = mc::Metric::interference;
    for (double& g : spec.grid) g *= cfg.p_max_w;
    c = mc::run_interference(spec, primary_index(o, cfg));
    c.x = grid;
  }
  c.metric = o.metric;
  c.config_digest = digest;
  return csv_rows(c);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw IoError("cannot open '" + o.out + "' for writing");
  f << text;
  if (!f.flush()) throw IoError("write to '" + o.out + "' failed");
}

void write_manifest(const Options& o, const SystemConfig& cfg, const std::string& command, double seconds) {
  if (o.out.empty() || o.out == "-") return;
  nlohmann::ordered_json j;
  j["config_digest"] = config_digest(cfg);
  j["seed"] = o.seed;
  j["command"] = command;
  j["outputs"] = std::vector<std::string>{o.out};
  j["duration_s"] = seconds;
  j["git_describe"] = COGMUX_GIT_DESCRIBE;
  j["version"] = COGMUX_VERSION;
  j["metric"] = o.metric;
  j["n_trials"] = o.trials;
  j["workers"] = mc::worker_count();
  const std::string path = o.out + ".manifest.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << j.dump(2) << '\n';
  if (!f.flush()) throw IoError("write to '" + path + "' failed");
}

void add_source_options(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "configuration file (key = value)");
  app->add_option("--preset", o.preset, "built-in preset (see `cogmux preset list`)");
}

void add_curve_options(CLI::App* app, Options& o) {
  add_source_options(app, o);
  app->add_option("--metric", o.metric, "pf, roc, auc, detection_vs_snr, sinr_cdf, outage, interference")
      ->required();
  app->add_option("--grid", o.grid, "MIN:MAX:STEP over the metric's x axis");
  app->add_option("--out", o.out, "output CSV path (stdout if omitted)");
  app->add_option("--mode", o.mode, "outage mode: subset-exact or paper-literal");
  app->add_option("--primary", o.primary, "primary node (1-based) for the interference metric");
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size() || !std::isfinite(d))
      throw UsageError("--grid: bad number '" + part + "' in '" + spec + "'");
    v.push_back(d);
  }
  if (v.size() != 3) throw UsageError("--grid expects MIN:MAX:STEP, got '" + spec + "'");
  const double lo = v[0], hi = v[1], step = v[2];
  if (!(step > 0.0)) throw UsageError("--grid: STEP must be > 0");
  if (hi < lo) throw UsageError("--grid: MAX must be >= MIN");
  const double n = std::floor((hi - lo) / step + 1e-9);
  if (n > 1e6) throw UsageError("--grid: more than 1e6 points");
  std::vector<double> g;
  char buf[32];
  for (long k = 0; k <= static_cast<long>(n); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", lo + step * static_cast<double>(k));
    g.push_back(std::strtod(buf, nullptr));
  }
  return g;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> args(argv, argv + argc);
  const auto t0 = std::chrono::steady_clock::now();
  Options o;
  std::string preset_action = "list";
  std::string preset_name;

  CLI::App app{"cogmux: cognitive MIMO multiplexing analytics and simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(COGMUX_VERSION) + " (" + COGMUX_GIT_DESCRIBE + ")");

  CLI::App* analytic = app.add_subcommand("analytic", "closed-form curve on a grid");
  add_curve_options(analytic, o);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo curve on a grid, plus a run manifest");
  add_curve_options(simulate, o);
  simulate->add_option("--trials", o.trials, "trials per grid point (>= 1)");
  simulate->add_option("--seed", o.seed, "64-bit master seed");

  CLI::App* validate_cmd = app.add_subcommand("validate", "run every analytic-vs-oracle check");
  add_source_options(validate_cmd, o);
  validate_cmd->add_option("--profile", o.profile, "tolerance profile: default or strict");
  validate_cmd->add_option("--trials", o.trials, "Monte-Carlo trials per check");
  validate_cmd->add_option("--seed", o.seed, "64-bit master seed");

  CLI::App* preset = app.add_subcommand("preset", "list presets or print one");
  preset->add_option("action", preset_action, "list or show")->check(CLI::IsMember({"list", "show"}));
  preset->add_option("name", preset_name, "preset name for show");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kConfigError;
  }
  o.trials_set = simulate->count("--trials") > 0 || validate_cmd->count("--trials") > 0;

  try {
    if (*preset) {
      if (preset_action == "list") {
        for (const auto& n : preset_names()) out << n << '\n';
      } else {
        if (preset_name.empty()) throw UsageError("preset show needs a name");
        out << preset_text(preset_name);
      }
      return kOk;
    }
    const SystemConfig cfg = load(o);
    if (*analytic) {
      emit(o, to_csv(analytic_rows(o, cfg)), out);
      return kOk;
    }
    if (*simulate) {
      const std::string text = to_csv(simulate_rows(o, cfg));
      emit(o, text, out);
      write_manifest(o, cfg, join(args), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      return kOk;
    }
    ValidationOptions vo;
    vo.profile = ToleranceProfile::from_name(o.profile);
    vo.seed = o.seed;
    if (o.trials_set) {
      if (o.trials < 1) throw UsageError("--trials must be >= 1");
      vo.trials = o.trials;
    }
    out << "profile " << vo.profile.name << ", " << vo.trials << " trials, config " << config_digest(cfg) << '\n';
    const auto checks = validate_config(cfg, vo);
    print_report(out, checks);
    return all_passed(checks) ? kOk : kValidationFailure;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace cogmux::cli
