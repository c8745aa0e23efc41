// twinimg command line: point evaluations, parameter sweeps, Monte Carlo
// estimates and the three-way consistency check.
//
// Exit codes: 0 success, 1 usage error, 2 domain error, 3 validation
// tolerance breach.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twinimg/format.hpp"
#include "twinimg/montecarlo.hpp"
#include "twinimg/params.hpp"
#include "twinimg/sweep.hpp"
#include "twinimg/validate.hpp"

namespace {

using namespace twinimg;

int default_threads() {
  if (const char* env = std::getenv("TWINIMG_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // resolved to hardware concurrency downstream
}

struct PointFlags {
  std::vector<std::string> states{"coh", "tmsv", "tf"};
  PointSpec spec;
  double aux_eta = 0.0;
  double aux_ndark = 0.0;
  double aux_ndark_total = 0.0;
  double aux_n = 0.0;
  double aux_cbar = 0.0;
  double aux_neff = 0.0;
  std::int64_t aux_m = 0;
  std::vector<double> custom_probs;
  double custom_q = 0.0;
  double custom_sigma = 1.0;
};

void add_point_options(CLI::App* cmd, PointFlags& f) {
  cmd->add_option("--state", f.states, "states to evaluate: coh, tmsv, tf, custom")
      ->delimiter(',');
  cmd->add_option("--alpha", f.spec.alpha, "sample absorption in [0, 1]");
  cmd->add_option("--dalpha", f.spec.delta_alpha, "defect depth (> 0)");
  cmd->add_option("--gamma", f.spec.gamma, "loss rate in [0, 1)");
  auto* eta = cmd->add_option("--eta", f.aux_eta, "relative dark level n_dark / n_mean");
  auto* ndark = cmd->add_option("--ndark", f.aux_ndark, "mean dark photons per bin per detector");
  cmd->add_option("--ndark-total", f.aux_ndark_total, "total dark photons over the exposure");
  eta->excludes(ndark);
  cmd->add_option("--n", f.aux_n, "per-bin mean photon number of the probe");
  auto* cbar = cmd->add_option("--cbar", f.aux_cbar, "average click number over the exposure");
  auto* neff = cmd->add_option("--neff", f.aux_neff, "effective photon number dalpha^2 * cbar");
  neff->excludes(cbar);
  cmd->add_option("--m", f.aux_m, "time bins per exposure");
  cmd->add_option("--custom-probs", f.custom_probs,
                  "click-basis probabilities p00 p01 p10 p11 for --state custom")
      ->expected(4);
  cmd->add_option("--custom-q", f.custom_q, "Mandel Q for --state custom");
  cmd->add_option("--custom-sigma", f.custom_sigma, "noise reduction factor for --state custom");
}

PointSpec finish_spec(const CLI::App* cmd, PointFlags& f) {
  if (cmd->count("--eta")) f.spec.eta = f.aux_eta;
  if (cmd->count("--ndark")) f.spec.n_dark = f.aux_ndark;
  if (cmd->count("--ndark-total")) f.spec.n_dark_total = f.aux_ndark_total;
  if (cmd->count("--n")) f.spec.n_mean = f.aux_n;
  if (cmd->count("--cbar")) f.spec.c_bar = f.aux_cbar;
  if (cmd->count("--neff")) f.spec.n_eff = f.aux_neff;
  if (cmd->count("--m")) f.spec.m = f.aux_m;
  return f.spec;
}

Probe probe_for(const PointFlags& f, StateKind kind, const ResolvedPoint& point) {
  if (kind == StateKind::custom) {
    if (f.custom_probs.size() != 4) {
      throw std::domain_error("--state custom needs --custom-probs p00 p01 p10 p11");
    }
    CustomState custom{{f.custom_probs[0], f.custom_probs[1], f.custom_probs[2], f.custom_probs[3]},
                       f.custom_q, f.custom_sigma};
    return Probe::custom_state(point.n_mean.value_or(0.0), custom);
  }
  return Probe{kind, point.n_mean.value_or(0.0), {}};
}

void warn_truncation(const ResolvedPoint& point) {
  if (point.n_mean) {
    if (auto w = truncation_warning(*point.n_mean)) {
      std::cerr << "warning: n_mean=" << format_double(w->n_mean)
                << " exceeds the single-photon truncation range (N <= 0.1)\n";
    }
  }
}

int cmd_point(const CLI::App* cmd, PointFlags& flags) {
  const ResolvedPoint point = resolve_point(finish_spec(cmd, flags));
  warn_truncation(point);
  std::cout << result_csv_header() << '\n';
  for (const std::string& name : flags.states) {
    const StateKind kind = parse_state(name);
    std::cout << result_csv_row(evaluate_row(probe_for(flags, kind, point), point)) << '\n';
  }
  return 0;
}

int cmd_mc(const CLI::App* cmd, PointFlags& flags, McConfig mc) {
  const ResolvedPoint point = resolve_point(finish_spec(cmd, flags));
  if (!point.n_mean || !point.m || !point.n_dark) {
    throw std::domain_error("mc needs --n and --m (and a dark-count setting)");
  }
  warn_truncation(point);
  mc.m = *point.m;
  std::cout << result_csv_header() << '\n';
  for (const std::string& name : flags.states) {
    const StateKind kind = parse_state(name);
    const Probe probe = probe_for(flags, kind, point);
    ResultRow row = evaluate_row(probe, point);
    const ChannelParams ch{point.alpha, point.delta_alpha, point.gamma, *point.n_dark};
    const McEstimate est = estimate_snr_star(probe, ch, mc);
    row.mc_snr_star = est.snr_star;
    row.mc_std_err = est.se_snr_star;
    if (est.degenerate) std::cerr << "warning: zero empirical variance for state " << name << '\n';
    std::cout << result_csv_row(row) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twin-beam differential absorption imaging model"};
  app.require_subcommand(1);

  PointFlags point_flags;
  CLI::App* point = app.add_subcommand("point", "analytic figures for one parameter set");
  add_point_options(point, point_flags);

  PointFlags mc_flags;
  McConfig mc_config;
  mc_config.threads = default_threads();
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimate of the click-number SNR*");
  add_point_options(mc, mc_flags);
  mc->add_option("--runs", mc_config.runs, "repeated exposures per scan");
  mc->add_option("--seed", mc_config.seed, "reproducibility seed");
  mc->add_option("--threads", mc_config.threads, "worker threads (default: TWINIMG_THREADS)");
  mc->add_flag("--paired", mc_config.paired, "common random numbers for the two scans");
  mc->add_flag("--antithetic", mc_config.antithetic, "antithetic pairs (runs must be even)");

  PointFlags sweep_flags;
  std::vector<std::string> axis_args;
  std::string preset_name, config_path;
  SweepSpec sweep_spec;
  sweep_spec.threads = default_threads();
  std::string sweep_out = "-", sweep_format;
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to a CSV or JSON table");
  add_point_options(sweep, sweep_flags);
  sweep->add_option("--preset", preset_name, "built-in sweep: fig4, fig5, fig6, figS7");
  sweep->add_option("--config", config_path, "JSON sweep file");
  sweep->add_option("--axis", axis_args,
                    "axis as name:min:max:count[:log|lin], up to two")
      ->expected(0, 2);
  sweep->add_option("--out", sweep_out, "output path, - for stdout");
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--threads", sweep_spec.threads, "worker threads");

  ValidateConfig validate_config;
  validate_config.threads = default_threads();
  bool validate_quick = false;
  std::string validate_out = "-";
  CLI::App* validate = app.add_subcommand(
      "validate", "analytic vs click-statistics vs Monte Carlo consistency report");
  validate->add_flag("--quick", validate_quick, "small Monte Carlo budget (m=1e5, runs=30)");
  validate->add_option("--n", validate_config.n_mean, "per-bin mean photon number");
  validate->add_option("--dalpha", validate_config.delta_alpha, "defect depth");
  validate->add_option("--m", validate_config.m_click, "bins for the click-vs-analytic table");
  validate->add_option("--mc-m", validate_config.mc_m, "bins per Monte Carlo exposure");
  validate->add_option("--runs", validate_config.mc_runs, "Monte Carlo runs per scan");
  validate->add_option("--seed", validate_config.seed, "reproducibility seed");
  validate->add_option("--threads", validate_config.threads, "worker threads");
  validate->add_option("--tol-click", validate_config.tol_click, "click-vs-analytic tolerance");
  validate->add_option("--tol-mc", validate_config.tol_mc_sigma, "Monte Carlo z tolerance");
  validate->add_option("--out", validate_out, "report path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (point->parsed()) return cmd_point(point, point_flags);
    if (mc->parsed()) return cmd_mc(mc, mc_flags, mc_config);
    if (sweep->parsed()) {
      SweepSpec spec;
      if (!preset_name.empty()) spec = preset_spec(preset_name);
      spec.threads = sweep_spec.threads;
      if (!config_path.empty()) apply_config_file(spec, config_path);
      // Flags override both the preset and the file.
      for (const std::string& arg : axis_args) {
        AxisSpec axis;
        std::istringstream ss(arg);
        std::string field;
        std::vector<std::string> parts;
        while (std::getline(ss, field, ':')) parts.push_back(field);
        if (parts.size() < 4) throw std::domain_error("axis needs name:min:max:count[:log|lin]");
        axis.name = parts[0];
        axis.min = std::stod(parts[1]);
        axis.max = std::stod(parts[2]);
        axis.count = std::stoi(parts[3]);
        axis.log = parts.size() > 4 && parts[4] == "log";
        if (&arg == &axis_args.front()) spec.axes.clear();
        spec.axes.push_back(axis);
      }
      PointSpec overrides = finish_spec(sweep, sweep_flags);
      PointSpec merged = spec.base;
      if (sweep->count("--alpha")) merged.alpha = overrides.alpha;
      if (sweep->count("--dalpha")) merged.delta_alpha = overrides.delta_alpha;
      if (sweep->count("--gamma")) merged.gamma = overrides.gamma;
      if (overrides.eta) merged.eta = overrides.eta;
      if (overrides.n_dark) merged.n_dark = overrides.n_dark;
      if (overrides.n_dark_total) merged.n_dark_total = overrides.n_dark_total;
      if (overrides.n_mean) merged.n_mean = overrides.n_mean;
      if (overrides.c_bar) merged.c_bar = overrides.c_bar;
      if (overrides.n_eff) merged.n_eff = overrides.n_eff;
      if (overrides.m) merged.m = overrides.m;
      spec.base = merged;
      if (sweep->count("--state")) {
        spec.states.clear();
        for (const std::string& name : sweep_flags.states) spec.states.push_back(parse_state(name));
      }
      if (sweep->count("--out")) spec.out = sweep_out;
      if (sweep->count("--format")) spec.format = sweep_format;
      if (spec.base.n_mean) {
        if (auto w = truncation_warning(*spec.base.n_mean)) {
          std::cerr << "warning: n_mean=" << format_double(w->n_mean)
                    << " exceeds the single-photon truncation range (N <= 0.1)\n";
        }
      }
      run_sweep(spec);
      return 0;
    }
    if (validate->parsed()) {
      ValidateConfig config = validate_config;
      if (validate_quick) {
        const ValidateConfig quick = ValidateConfig::quick();
        if (!validate->count("--mc-m")) config.mc_m = quick.mc_m;
        if (!validate->count("--runs")) config.mc_runs = quick.mc_runs;
      }
      const ValidateReport report = run_validate(config);
      if (validate_out == "-") {
        std::cout << report.text;
      } else {
        std::ofstream out(validate_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report: " + validate_out);
        out << report.text;
      }
      return report.pass ? 0 : 3;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
