#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using alscan::cli::Command;
using alscan::cli::ConfigError;
using alscan::cli::RunConfig;

namespace {

struct RawFlags {
  std::string stats = "pbj";
  std::string threshold = "lemma";
  std::string sided = "one";
  std::string beta_grid;
  std::string zeta_grid;
  std::string tau_grid;
  std::string quantiles;
  std::string n_grid;
  std::string mu_grid;
};

void add_common(CLI::App* sub, RunConfig& cfg, RawFlags& raw) {
  sub->add_option("--input", cfg.input, "Input matrix (CSV or ALSC binary)");
  sub->add_option("--output", cfg.output, "Output path (stdout if omitted)");
  sub->add_option("--stat", raw.stats, "Statistic(s): phc, pbj, alr; comma separated");
  sub->add_option("--threshold", raw.threshold, "lemma | value:X | file:PATH");
  sub->add_option("--level", cfg.threshold.level,
                  "Quantile level used from a calibration table");
  sub->add_option("--seed", cfg.seed, "Master seed");
  sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--sided", raw.sided, "one | two");
  sub->add_option("--quadrature-nodes", cfg.quadrature_nodes,
                  "Gauss-Legendre nodes per beta piece");
}

void add_segment(CLI::App* sub, RunConfig& cfg) {
  auto& s = cfg.segment;
  sub->add_option("--j", s.j, "Segment start (0-based, default centred)");
  sub->add_option("--beta", s.beta, "Sparsity exponent");
  sub->add_option("--epsilon", s.epsilon, "Signed offset: pi = N^-(beta - epsilon)");
  sub->add_option("--pi", s.pi, "Explicit carrier fraction");
  sub->add_option("--zeta", s.zeta, "Explicit scale exponent");
  sub->add_option("--mu", s.mu, "Explicit signal mean");
  sub->add_option("--kappa", s.kappa, "Mean as a multiple of the boundary");
  sub->add_option("--tau", s.tau, "Extra signal variance");
}

std::vector<alscan::StatKind> parse_stats(const std::string& text) {
  std::vector<alscan::StatKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(alscan::parse_stat_kind(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : alscan::cli::parse_grid(text)) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ConfigError("expected positive integers in '" + text + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void finish(RunConfig& cfg, const RawFlags& raw) {
  cfg.stats = parse_stats(raw.stats);
  const double level = cfg.threshold.level;
  cfg.threshold = alscan::cli::ThresholdSource::parse(raw.threshold);
  cfg.threshold.level = level;
  try {
    cfg.sided = alscan::parse_sidedness(raw.sided);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!raw.beta_grid.empty()) cfg.beta_grid = alscan::cli::parse_grid(raw.beta_grid);
  if (!raw.zeta_grid.empty()) cfg.zeta_grid = alscan::cli::parse_grid(raw.zeta_grid);
  if (!raw.tau_grid.empty()) cfg.tau_grid = alscan::cli::parse_grid(raw.tau_grid);
  if (!raw.quantiles.empty()) cfg.quantiles = alscan::cli::parse_grid(raw.quantiles);
  if (!raw.n_grid.empty()) cfg.n_grid = parse_counts(raw.n_grid);
  if (!raw.mu_grid.empty()) cfg.mu_grid = alscan::cli::parse_grid(raw.mu_grid);
  if (cfg.ell) cfg.segment.ell = cfg.ell;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detection of sparse signals aligned across many sequences"};
  app.require_subcommand(1);
  RunConfig cfg;
  RawFlags raw;

  auto* gen = app.add_subcommand("gen", "Generate a data matrix from a signal model");
  add_common(gen, cfg, raw);
  add_segment(gen, cfg);
  gen->add_option("--model", cfg.model, "Signal model JSON");
  gen->add_option("--n", cfg.n, "Number of sequences N");
  gen->add_option("--T", cfg.T, "Sequence length T");
  gen->add_option("--ell", cfg.ell, "Segment length");
  gen->add_option("--truth", cfg.truth_output, "Write carrier rows as JSON");
  gen->add_flag("--nonaligned", cfg.nonaligned,
                "Place each carrier's segment at its own random start");

  auto* scan = app.add_subcommand("scan", "Run PHC, PBJ and/or ALR scans");
  add_common(scan, cfg, raw);
  scan->add_option("--intervals", cfg.intervals_prefix,
                   "Write per-window CSVs to PREFIX.<stat>.csv");
  scan->add_option("--scanset", cfg.scanset_output, "Write the scanning set as CSV");

  auto* ident = app.add_subcommand("identify", "Identify signal segments");
  add_common(ident, cfg, raw);
  ident->add_option("--c", cfg.c, "Score threshold (default: the test threshold)");
  ident->add_option("--f", cfg.f, "Overlap fraction f >= 0");
  ident->add_option("--intervals-input", cfg.intervals_input,
                    "Identify from a per-window CSV instead of scanning");

  auto* bound = app.add_subcommand("boundary", "Tabulate detection boundaries");
  add_common(bound, cfg, raw);
  bound->add_option("--n", cfg.n, "Number of sequences N");
  bound->add_option("--T", cfg.T, "Sequence length (with --ell, derives zeta)");
  bound->add_option("--ell", cfg.ell, "Window length; adds a b_N/sqrt(ell) column");
  bound->add_option("--beta-grid", raw.beta_grid, "list a,b,c or range start:stop:step");
  bound->add_option("--zeta-grid", raw.zeta_grid, "list or range");
  bound->add_option("--tau-grid", raw.tau_grid, "list or range (default 0)");

  auto* cal = app.add_subcommand("calibrate", "Empirical null quantiles");
  add_common(cal, cfg, raw);
  cal->add_option("--n", cfg.n, "Number of sequences N");
  cal->add_option("--T", cfg.T, "Sequence length T");
  cal->add_option("--reps", cfg.reps, "Null replicates (>= 100)");
  cal->add_option("--quantiles", raw.quantiles, "Quantile levels");

  auto* power = app.add_subcommand("power", "Monte Carlo error rates over a grid");
  add_common(power, cfg, raw);
  add_segment(power, cfg);
  power->add_option("--T", cfg.T, "Sequence length T (default 256)");
  power->add_option("--ell", cfg.ell, "Segment length");
  power->add_option("--target-zeta", cfg.target_zeta,
                    "Choose the segment length per N so zeta is closest to this");
  power->add_option("--n-grid", raw.n_grid, "Values of N");
  power->add_option("--mu-grid", raw.mu_grid, "Multiples of the boundary");
  power->add_option("--reps", cfg.reps, "Replicates per cell and hypothesis");
  power->add_option("--csv", cfg.csv_output, "Also write a CSV summary");

  auto* prof = app.add_subcommand("profile", "Likelihood profiles over j and beta");
  add_common(prof, cfg, raw);
  prof->add_option("--ell", cfg.ell, "Window length");
  prof->add_option("--beta-grid", raw.beta_grid, "beta values (default 0.01:0.99:0.01)");
  prof->add_option("--beta-output", cfg.beta_output, "CSV of the beta profile");
  prof->add_option("--summary", cfg.summary_output, "JSON with j_hat and beta_hat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return alscan::cli::report_error(ConfigError(e.what()), std::cerr);
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      cfg.command = alscan::cli::parse_command(sub->get_name());
    }
    finish(cfg, raw);
  } catch (const std::exception& e) {
    return alscan::cli::report_error(e, std::cerr);
  }
  return alscan::cli::run_reporting(cfg, std::cerr);
}
