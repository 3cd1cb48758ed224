#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gtsc/errors.hpp"
#include "gtsc/gtsc_model.hpp"
#include "gtsc/limit_laws.hpp"
#include "gtsc/run_config.hpp"
#include "gtsc/simulator.hpp"
#include "gtsc/verification.hpp"

namespace gtsc::cli {
namespace {

constexpr std::array<Law, 3> kLaws{Law::Overshoot, Law::Undershoot, Law::MaxUndershoot};

const std::vector<std::string> kModelKeys{"q",        "dH",       "c",      "alpha", "rho",
                                          "seed",     "out",      "grid-min", "grid-max",
                                          "grid-n",   "alphas"};
const std::vector<std::string> kSimulationKeys{"u",       "n-ruined", "max-paths", "epsilon",
                                               "dt",      "barrier",  "horizon",   "workers",
                                               "gaussian-correction"};

const std::map<std::string, std::string> kHelp{
    {"q", "killing rate of the ladder process (minus the mean of X_1)"},
    {"dH", "drift of the ladder height process"},
    {"c", "jump intensity scale"},
    {"alpha", "exponential tempering"},
    {"rho", "power index, in [-1, 1)"},
    {"seed", "random seed (default: $GTSC_SEED or 20240601)"},
    {"out", "output file (default: standard output)"},
    {"grid-min", "first grid point"},
    {"grid-max", "last grid point"},
    {"grid-n", "number of grid points"},
    {"alphas", "comma-separated alpha values"},
    {"u", "initial reserve"},
    {"n-ruined", "number of ruined paths to collect"},
    {"max-paths", "path budget"},
    {"epsilon", "small-jump truncation level"},
    {"dt", "maximal Brownian sub-step"},
    {"barrier", "paths below -barrier are treated as never ruined"},
    {"horizon", "time after which paths are censored"},
    {"workers", "OpenMP threads (0: default)"},
    {"gaussian-correction", "replace small jumps by extra Brownian variance (true/false)"},
};

// Raw flag values of one subcommand; applied on top of defaults and the config file.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;

  void add(CLI::App& app, const std::vector<std::string>& keys) {
    for (const auto& key : keys) {
      options[key] = app.add_option("--" + key, values[key], kHelp.at(key))
                         ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, FlagSet& flags,
                      bool simulation) {
  CLI::App* cmd = app.add_subcommand(name, help);
  flags.add(*cmd, kModelKeys);
  if (simulation) flags.add(*cmd, kSimulationKeys);
  cmd->add_option("--config", flags.config_path, "flat key = value file; flags take precedence");
  return cmd;
}

RunConfig build_config(const FlagSet& flags, RunConfig defaults) {
  RunConfig config = std::move(defaults);
  config.seed = default_seed();
  if (!flags.config_path.empty()) apply_config_file(config, flags.config_path);
  for (const auto& [key, option] : flags.options) {
    if (option->count() > 0) set_option(config, key, flags.values.at(key));
  }
  config.validate();
  return config;
}

// Writes to the --out file when given.
class Sink {
 public:
  Sink(const RunConfig& config, std::ostream& fallback) : stream_(&fallback) {
    if (!config.out.empty()) {
      file_.open(config.out);
      if (!file_) throw DomainError("cannot open output file " + config.out);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void require_not_boundary(const RegimeReport& report) {
  if (report.regime == Regime::Boundary) {
    throw StateError(
        "the model lies on the regime boundary f(alpha) = 0, where neither the Cramer nor the "
        "convolution-equivalent limit laws apply");
  }
}

std::array<CdfCurve, 3> analytic_curves(const GtscParams& p, const RegimeReport& report,
                                        std::span<const double> grid) {
  std::array<CdfCurve, 3> curves;
  if (p.rho > 0.0 && p.rho < 1.0) {
    const GtscLimitLaws laws(p, report);
    for (std::size_t i = 0; i < kLaws.size(); ++i) curves[i] = tabulate(laws, kLaws[i], grid);
  } else {
    const LadderModel model = gtsc_ladder(p, report);
    for (std::size_t i = 0; i < kLaws.size(); ++i) curves[i] = tabulate(model, kLaws[i], grid);
  }
  return curves;
}

std::string header_line(const std::string& key, double value) {
  return "# " + key + "=" + format_number(value) + "\n";
}

// ---- classify --------------------------------------------------------------------

void cmd_classify(const RunConfig& config, bool json, std::ostream& out) {
  const RegimeReport r = classify(config.model);
  std::vector<std::pair<std::string, double>> fields{{"f_alpha", r.f_alpha}};
  if (r.nu0) fields.emplace_back("nu0", *r.nu0);
  if (r.gap) fields.emplace_back("gap", *r.gap);
  if (r.m_star) fields.emplace_back("m_star", *r.m_star);
  if (r.beta1) fields.emplace_back("beta1", *r.beta1);
  if (r.beta2) fields.emplace_back("beta2", *r.beta2);

  if (!json) {
    out << "regime=" << to_string(r.regime) << '\n';
    for (const auto& [k, v] : fields) out << k << '=' << format_number(v) << '\n';
    return;
  }
  // written by hand so every number carries 17 significant digits
  const auto number = [](double v) {
    return std::isfinite(v) ? format_number(v) : std::string("null");
  };
  out << "{\"regime\": " << nlohmann::json(std::string(to_string(r.regime))).dump();
  const GtscParams& p = config.model;
  out << ", \"params\": {\"q\": " << number(p.q) << ", \"dH\": " << number(p.d_H)
      << ", \"c\": " << number(p.c) << ", \"alpha\": " << number(p.alpha)
      << ", \"rho\": " << number(p.rho) << '}';
  for (const auto& [k, v] : fields) out << ", \"" << k << "\": " << number(v);
  out << "}\n";
}

// ---- laws ------------------------------------------------------------------------

void cmd_laws(const RunConfig& config, std::ostream& out) {
  const std::vector<double> grid = config.grid();
  if (config.alphas.empty()) {
    const RegimeReport report = classify(config.model);
    require_not_boundary(report);
    const auto curves = analytic_curves(config.model, report, grid);
    out << metadata_header(config, &report);
    for (std::size_t i = 0; i < kLaws.size(); ++i) {
      out << header_line("mass_at_infinity_" + std::string(to_string(kLaws[i])),
                         curves[i].mass_at_infinity);
    }
    out << "grid,overshoot,undershoot,max_undershoot\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out << format_number(grid[j]);
      for (const auto& c : curves) out << ',' << format_number(c.values[j]);
      out << '\n';
    }
    return;
  }

  // long format, one block of rows per alpha
  std::ostringstream body;
  out << metadata_header(config);
  for (double alpha : config.alphas) {
    GtscParams p = config.model;
    p.alpha = alpha;
    const RegimeReport report = classify(p);
    require_not_boundary(report);
    const auto curves = analytic_curves(p, report, grid);
    out << "# regime_at_" << format_number(alpha) << '=' << to_string(report.regime) << '\n';
    for (std::size_t j = 0; j < grid.size(); ++j) {
      body << format_number(alpha) << ',' << to_string(report.regime) << ','
           << format_number(grid[j]);
      for (const auto& c : curves) body << ',' << format_number(c.values[j]);
      body << '\n';
    }
  }
  out << "alpha,regime,grid,overshoot,undershoot,max_undershoot\n" << body.str();
}

// ---- discriminant ----------------------------------------------------------------

void cmd_discriminant(const RunConfig& config, std::ostream& out) {
  const std::vector<double> alphas = config.alphas.empty() ? config.grid() : config.alphas;
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("discriminant: alpha values must lie in (0, 1)");
  }
  std::vector<double> f(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    GtscParams p = config.model;
    p.alpha = alphas[i];
    f[i] = discriminant_f(p);
  }
  const std::optional<double> root = locate_discriminant_root(config.model, alphas);
  out << metadata_header(config);
  out << "# root_alpha=" << (root ? format_number(*root) : std::string("none")) << '\n';
  out << "alpha,f\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    out << format_number(alphas[i]) << ',' << format_number(f[i]) << '\n';
  }
}

// ---- simulate --------------------------------------------------------------------

int cmd_simulate(const RunConfig& config, const std::string& events_path, std::ostream& out,
                 std::ostream& err) {
  const GtscParams& p = config.model;
  const RegimeReport report = classify(p);
  require_not_boundary(report);
  const SimScheme scheme = config.scheme(report);
  const std::vector<double> grid = config.grid();

  EstimateOptions options;
  options.max_paths = config.max_paths;
  options.workers = config.workers;
  options.keep_events = !events_path.empty();
  const ConditionalLaws sim =
      estimate_conditional_laws(p, config.u, config.n_ruined, scheme, grid, options);
  const auto curves = analytic_curves(p, report, grid);

  std::array<double, 3> sup{};
  for (std::size_t i = 0; i < kLaws.size(); ++i) {
    sup[i] = sup_distance(sim.law(kLaws[i]).values, curves[i].values);
  }
  const double creep_analytic = report.exponent(p) * p.d_H / p.q;
  const double ruin_asymptotic = ruin_probability_asymptotic(p, report, config.u);

  out << metadata_header(config, &report, true);
  out << header_line("epsilon_used", scheme.epsilon) << header_line("barrier_used", scheme.barrier)
      << header_line("horizon_used", scheme.horizon);
  out << "# n_paths=" << sim.n_paths << "\n# n_ruined_observed=" << sim.n_ruined
      << "\n# n_censored=" << sim.n_censored << '\n';
  out << header_line("ruin_fraction", sim.ruin_fraction)
      << header_line("ruin_half_width", sim.ruin_half_width)
      << header_line("ruin_asymptotic", ruin_asymptotic)
      << header_line("creep_fraction", sim.creep_fraction)
      << header_line("creep_analytic", creep_analytic);
  for (std::size_t i = 0; i < kLaws.size(); ++i) {
    out << header_line("sup_" + std::string(to_string(kLaws[i])), sup[i]);
  }
  out << "grid,overshoot_empirical,overshoot,undershoot_empirical,undershoot,"
         "max_undershoot_empirical,max_undershoot\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out << format_number(grid[j]);
    for (std::size_t i = 0; i < kLaws.size(); ++i) {
      out << ',' << format_number(sim.law(kLaws[i]).values[j]) << ','
          << format_number(curves[i].values[j]);
    }
    out << '\n';
  }

  if (!events_path.empty()) {
    std::ofstream events(events_path);
    if (!events) throw DomainError("cannot open events file " + events_path);
    write_events_csv(events, sim.events);
  }

  char line[512];
  std::snprintf(line, sizeof line,
                "ruin_fraction=%.5g +/- %.2g (asymptotic %.5g) creep_fraction=%.4f (analytic "
                "%.4f) sup: overshoot=%.4f undershoot=%.4f max_undershoot=%.4f "
                "n_ruined=%ld paths=%ld\n",
                sim.ruin_fraction, sim.ruin_half_width, ruin_asymptotic, sim.creep_fraction,
                creep_analytic, sup[0], sup[1], sup[2], sim.n_ruined, sim.n_paths);
  err << line;
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------------

int cmd_verify(const RunConfig& config, bool mc, double tol_scale, std::ostream& out) {
  VerifyOptions o;
  o.base = config.model;
  o.tol_scale = tol_scale;
  o.seed = config.seed;
  o.mc.n_ruined = config.n_ruined;
  o.mc.max_paths = config.max_paths;
  o.mc.workers = config.workers;
  if (config.epsilon) o.mc.epsilon = *config.epsilon;
  o.mc.dt = config.dt;

  std::vector<CheckResult> results = run_identity_checks(o);
  if (mc) {
    for (auto& r : run_mc_checks(o)) results.push_back(std::move(r));
  }
  int failed = 0;
  for (const auto& r : results) {
    out << format_check(r) << '\n';
    failed += r.passed ? 0 : 1;
  }
  out << results.size() - failed << " of " << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ruin limit laws for the GTSC Levy insurance risk model"};
  app.require_subcommand(1);

  FlagSet classify_flags, laws_flags, disc_flags, sim_flags, verify_flags;
  bool json = false;
  bool mc = false;
  double tol_scale = 1.0;
  std::string events_path;

  CLI::App* classify_cmd =
      add_command(app, "classify", "regime and regime constants", classify_flags, false);
  classify_cmd->add_flag("--json", json, "JSON output");
  CLI::App* laws_cmd = add_command(app, "laws", "limit-law CDFs on a grid", laws_flags, false);
  CLI::App* disc_cmd =
      add_command(app, "discriminant", "f(alpha) on an alpha grid", disc_flags, false);
  CLI::App* sim_cmd =
      add_command(app, "simulate", "Monte Carlo conditional laws", sim_flags, true);
  sim_cmd->add_option("--events", events_path, "write per-path events to this CSV");
  CLI::App* verify_cmd = add_command(app, "verify", "run the check suite", verify_flags, true);
  verify_cmd->add_flag("--mc", mc, "include the Monte Carlo checks");
  verify_cmd->add_option("--tol-scale", tol_scale, "multiply every tolerance")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify_cmd->parsed()) {
      const RunConfig config = build_config(classify_flags, {});
      Sink sink(config, out);
      cmd_classify(config, json, *sink);
    } else if (laws_cmd->parsed()) {
      const RunConfig config = build_config(laws_flags, {});
      Sink sink(config, out);
      cmd_laws(config, *sink);
    } else if (disc_cmd->parsed()) {
      RunConfig defaults;
      defaults.grid_min = 0.01;
      defaults.grid_max = 0.2;
      defaults.grid_n = 39;
      const RunConfig config = build_config(disc_flags, defaults);
      Sink sink(config, out);
      cmd_discriminant(config, *sink);
    } else if (sim_cmd->parsed()) {
      const RunConfig config = build_config(sim_flags, {});
      Sink sink(config, out);
      return cmd_simulate(config, events_path, *sink, err);
    } else if (verify_cmd->parsed()) {
      RunConfig defaults;
      defaults.n_ruined = 100'000;
      const RunConfig config = build_config(verify_flags, defaults);
      Sink sink(config, out);
      return cmd_verify(config, mc, tol_scale, *sink);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StateError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
  return kExitOk;
}

}  // namespace gtsc::cli
