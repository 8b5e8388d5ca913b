#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "alscan/alr.hpp"
#include "alscan/boundary.hpp"
#include "alscan/identify.hpp"
#include "alscan/io.hpp"
#include "alscan/scanset.hpp"
#include "alscan/serialize.hpp"
#include "alscan/sim.hpp"

namespace alscan::cli {
namespace {

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  fn(out);
  if (!out) throw FormatError("failed writing '" + path + "'");
}

void emit_json(const std::string& path, const Json& doc) {
  with_output(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

double resolve_threshold(const RunConfig& config, StatKind kind, std::size_t n) {
  const auto& src = config.threshold;
  switch (src.kind) {
    case ThresholdSource::Kind::lemma:
      return default_threshold(kind, n);
    case ThresholdSource::Kind::value:
      return src.value;
    case ThresholdSource::Kind::file: {
      const Json doc = read_json_file(src.path);
      if (doc.contains("statistic") && doc.at("statistic").is_string() &&
          parse_stat_kind(doc.at("statistic").get<std::string>()) != kind) {
        throw ConfigError("threshold file '" + src.path + "' was calibrated for " +
                          doc.at("statistic").get<std::string>() + ", not " +
                          to_string(kind));
      }
      return threshold_from_json(doc, src.level);
    }
  }
  throw std::logic_error("unhandled threshold source");
}

SignalModel model_from_flags(const RunConfig& config) {
  if (!config.model.empty()) return model_from_json(read_json_file(config.model));
  if (!config.n || !config.T) {
    throw ConfigError("gen needs --model or both --n and --T");
  }
  SignalModel model = SignalModel::null(*config.n, *config.T);
  const auto& s = config.segment;
  if (s.ell) {
    const std::size_t j = s.j.value_or((*config.T - std::min(*config.T, *s.ell)) / 2);
    SegmentSpec seg;
    seg.interval = {j, *s.ell};
    seg.beta = s.beta;
    seg.epsilon = s.epsilon;
    seg.pi = s.pi;
    seg.zeta = s.zeta;
    seg.mu = s.mu;
    seg.kappa = s.kappa;
    seg.tau = s.tau;
    if (!seg.mu && !seg.kappa) seg.kappa = 1.0;
    model.segments.push_back(seg);
  }
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return model;
}

void run_gen(const RunConfig& config) {
  Sample sample = [&] {
    if (config.nonaligned) {
      const auto& s = config.segment;
      if (!config.n || !config.T || !s.ell || !s.pi || !s.mu) {
        throw ConfigError("gen --nonaligned needs --n, --T, --ell, --pi and --mu");
      }
      return generate_nonaligned(*config.n, *config.T, *s.ell, *s.pi, *s.mu,
                                 config.seed);
    }
    return generate(model_from_flags(config), config.seed);
  }();
  if (config.output.empty()) {
    write_matrix_csv(std::cout, sample.data);
  } else {
    write_matrix(config.output, sample.data, format_for_path(config.output));
  }
  if (!config.truth_output.empty()) {
    write_json_file(config.truth_output, truth_to_json(sample.truth));
  }
}

struct ScanOutcome {
  std::vector<ScanReport> reports;
  std::vector<std::string> sources;
};

ScanOutcome scan_all(const RunConfig& config, const DataMatrix& data, const ScanSet& set,
                     bool keep_records) {
  const std::size_t n = data.rows();
  const PrefixSums prefix(data);
  ScanOutcome out;
  std::optional<std::pair<ScanReport, ScanReport>> both;
  auto wants = [&](StatKind k) {
    return std::find(config.stats.begin(), config.stats.end(), k) != config.stats.end();
  };
  for (StatKind kind : config.stats) {
    const double threshold = resolve_threshold(config, kind, n);
    ScanReport report;
    if (kind == StatKind::alr) {
      if (n < 2) throw ConfigError("the ALR scan needs at least 2 sequences");
      AlrConfig cfg;
      cfg.quadrature_nodes = config.quadrature_nodes;
      cfg.threshold = threshold;
      cfg.workers = config.workers;
      cfg.keep_records = keep_records;
      report = alr_statistic(prefix, set, cfg);
    } else {
      ScanOptions opts;
      opts.sided = config.sided;
      opts.workers = config.workers;
      opts.keep_records = keep_records;
      if (wants(StatKind::phc) && wants(StatKind::pbj)) {
        // One pass serves both statistics.
        if (!both) both = penalized_scans(prefix, set, opts);
        report = kind == StatKind::phc ? both->first : both->second;
      } else {
        report = penalized_scan(prefix, set, kind, opts);
      }
      report.threshold = threshold;
      report.reject = report.global_value >= threshold;
    }
    out.reports.push_back(std::move(report));
    out.sources.push_back(config.threshold.describe());
  }
  return out;
}

void run_scan(const RunConfig& config) {
  const DataMatrix data = read_matrix(config.input);
  const ScanSet set = build_scan_set(data.cols());
  const ScanOutcome outcome = scan_all(config, data, set, !config.intervals_prefix.empty());
  Json doc;
  if (outcome.reports.size() == 1) {
    doc = report_to_json(outcome.reports[0], outcome.sources[0]);
  } else {
    doc["schema_version"] = kSchemaVersion;
    doc["reports"] = Json::array();
    for (std::size_t i = 0; i < outcome.reports.size(); ++i) {
      doc["reports"].push_back(report_to_json(outcome.reports[i], outcome.sources[i]));
    }
  }
  emit_json(config.output, doc);
  if (!config.intervals_prefix.empty()) {
    for (const auto& r : outcome.reports) {
      with_output(config.intervals_prefix + "." + to_string(r.kind) + ".csv",
                  [&](std::ostream& out) { write_interval_csv(out, r); });
    }
  }
  if (!config.scanset_output.empty()) {
    with_output(config.scanset_output,
                [&](std::ostream& out) { write_scan_set_csv(out, set); });
  }
}

void run_identify(const RunConfig& config) {
  IdentificationConfig cfg;
  cfg.overlap_fraction = config.f;
  IdentifiedSegments segments;
  if (!config.intervals_input.empty()) {
    if (!config.c) throw ConfigError("identify from an interval CSV needs --c");
    std::ifstream in(config.intervals_input);
    if (!in) throw FormatError("cannot open '" + config.intervals_input + "'");
    std::vector<Segment> candidates;
    for (const auto& rec : read_interval_csv(in)) {
      candidates.push_back({rec.interval, rec.penalized});
    }
    cfg.threshold = *config.c;
    segments = identify(std::move(candidates), cfg);
  } else {
    if (config.stats.size() != 1) {
      throw ConfigError("identify takes exactly one --stat");
    }
    const DataMatrix data = read_matrix(config.input);
    const ScanSet set = build_scan_set(data.cols());
    const ScanReport report = scan_all(config, data, set, true).reports.front();
    // ALR windows carry log contributions, so the default cut is on that scale.
    cfg.threshold = config.c.value_or(report.kind == StatKind::alr
                                          ? std::log(report.threshold)
                                          : report.threshold);
    segments = identify(report, cfg);
  }
  with_output(config.output, [&](std::ostream& out) { write_segments_csv(out, segments); });
}

void run_boundary(const RunConfig& config) {
  if (!config.n) throw ConfigError("boundary needs --n");
  const double n = static_cast<double>(*config.n);
  std::vector<double> zetas = config.zeta_grid;
  if (zetas.empty()) {
    if (!config.ell || !config.T) {
      throw ConfigError("boundary needs --zeta-grid, or --T and --ell to derive zeta");
    }
    zetas.push_back(zeta_of_scale(n, *config.T, *config.ell));
  }
  if (config.beta_grid.empty()) throw ConfigError("boundary needs --beta-grid");
  for (double b : config.beta_grid) {
    if (!(b > 0.0 && b < 1.0)) throw ConfigError("beta grid values must lie in (0, 1)");
  }
  for (double z : zetas) {
    if (!(z >= 0.0)) throw ConfigError("zeta grid values must be >= 0");
  }
  for (double t : config.tau_grid) {
    if (!(t >= 0.0)) throw ConfigError("tau grid values must be >= 0");
  }
  with_output(config.output, [&](std::ostream& out) {
    out << "beta,zeta,tau,b_N,branch";
    if (config.ell) out << ",b_N_per_sqrt_ell";
    out << '\n';
    for (double beta : config.beta_grid) {
      for (double zeta : zetas) {
        for (double tau : config.tau_grid) {
          double value = std::nan("");
          std::string branch = "undefined";
          try {
            const auto b = b_hetero_branch({n, beta, zeta, tau});
            value = b.value;
            branch = std::string(to_string(b.branch));
          } catch (const std::invalid_argument&) {
            // tau > 0 is only defined below zeta = 1 - beta.
          }
          out << format_double(beta) << ',' << format_double(zeta) << ','
              << format_double(tau) << ',' << format_double(value) << ',' << branch;
          if (config.ell) {
            out << ',' << format_double(value / std::sqrt(static_cast<double>(*config.ell)));
          }
          out << '\n';
        }
      }
    }
  });
}

MonteCarloOptions mc_options(const RunConfig& config) {
  MonteCarloOptions opts;
  opts.sided = config.sided;
  opts.quadrature_nodes = config.quadrature_nodes;
  opts.workers = config.workers;
  return opts;
}

void run_calibrate(const RunConfig& config) {
  if (!config.n || !config.T) throw ConfigError("calibrate needs --n and --T");
  if (config.stats.size() != 1) throw ConfigError("calibrate takes exactly one --stat");
  if (config.reps < 100) throw ConfigError("calibrate needs --reps >= 100");
  const QuantileTable table = calibrate(*config.n, *config.T, config.stats.front(),
                                        config.reps, config.quantiles, config.seed,
                                        mc_options(config));
  emit_json(config.output, quantile_table_to_json(table));
}

void run_power(const RunConfig& config) {
  if (config.n_grid.empty() || config.mu_grid.empty()) {
    throw ConfigError("power needs --n-grid and --mu-grid");
  }
  PowerConfig pc;
  pc.cols = config.T.value_or(256);
  pc.rows_grid = config.n_grid;
  pc.mu_multiples = config.mu_grid;
  pc.kinds = config.stats;
  pc.reps = config.reps;
  pc.seed = config.seed;
  pc.options = mc_options(config);
  pc.target_zeta = config.target_zeta;
  const auto& s = config.segment;
  pc.segment.beta = s.beta;
  pc.segment.epsilon = s.epsilon;
  pc.segment.pi = s.pi;
  pc.segment.zeta = s.zeta;
  pc.segment.tau = s.tau;
  if (!pc.target_zeta) {
    if (!s.ell) throw ConfigError("power needs --ell or --target-zeta");
    pc.segment.interval = {s.j.value_or((pc.cols - std::min(pc.cols, *s.ell)) / 2), *s.ell};
  }
  switch (config.threshold.kind) {
    case ThresholdSource::Kind::lemma:
      break;
    case ThresholdSource::Kind::value:
      pc.threshold = config.threshold.value;
      break;
    case ThresholdSource::Kind::file:
      throw ConfigError("power takes --threshold lemma or value:X");
  }
  std::vector<PowerCell> cells;
  try {
    cells = power_study(pc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  emit_json(config.output, power_to_json(cells));
  if (!config.csv_output.empty()) {
    with_output(config.csv_output, [&](std::ostream& out) { write_power_csv(out, cells); });
  }
}

void run_profile(const RunConfig& config) {
  if (!config.ell) throw ConfigError("profile needs --ell");
  const DataMatrix data = read_matrix(config.input);
  if (data.rows() < 2) throw ConfigError("profile needs at least 2 sequences");
  if (*config.ell < 1 || *config.ell > data.cols()) {
    throw ConfigError("--ell must lie in [1, T]");
  }
  AlrConfig cfg;
  cfg.quadrature_nodes = config.quadrature_nodes;
  cfg.workers = config.workers;
  const auto jprof = likelihood_profile_over_j(data, *config.ell, cfg);
  const std::size_t jhat = jprof[profile_argmax(jprof)].j;
  std::vector<double> betas = config.beta_grid;
  if (betas.empty()) betas = parse_grid("0.01:0.99:0.01");
  const auto bprof = likelihood_profile_over_beta(data, *config.ell, jhat, betas);
  const auto& best = bprof[profile_argmax(bprof)];

  with_output(config.output, [&](std::ostream& out) { write_profile_csv(out, jprof); });
  if (!config.beta_output.empty()) {
    with_output(config.beta_output,
                [&](std::ostream& out) { write_beta_profile_csv(out, bprof); });
  }
  if (!config.summary_output.empty()) {
    Json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["ell"] = *config.ell;
    summary["j_hat"] = jhat;
    summary["beta_hat"] = best.beta;
    summary["fraction_hat"] = best.fraction;
    write_json_file(config.summary_output, summary);
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  static const std::pair<const char*, Command> table[] = {
      {"gen", Command::gen},           {"scan", Command::scan},
      {"identify", Command::identify}, {"boundary", Command::boundary},
      {"calibrate", Command::calibrate}, {"power", Command::power},
      {"profile", Command::profile}};
  for (const auto& [text, cmd] : table) {
    if (name == text) return cmd;
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::gen: return "gen";
    case Command::scan: return "scan";
    case Command::identify: return "identify";
    case Command::boundary: return "boundary";
    case Command::calibrate: return "calibrate";
    case Command::power: return "power";
    case Command::profile: return "profile";
  }
  return "unknown";
}

ThresholdSource ThresholdSource::parse(const std::string& text) {
  ThresholdSource src;
  if (text == "lemma") return src;
  if (text.starts_with("value:")) {
    src.kind = Kind::value;
    try {
      src.value = parse_double(text.substr(6));
    } catch (const FormatError&) {
      throw ConfigError("bad threshold value in '" + text + "'");
    }
    return src;
  }
  if (text.starts_with("file:") && text.size() > 5) {
    src.kind = Kind::file;
    src.path = text.substr(5);
    return src;
  }
  throw ConfigError("threshold must be lemma, value:X or file:PATH, got '" + text + "'");
}

std::string ThresholdSource::describe() const {
  switch (kind) {
    case Kind::lemma: return "lemma";
    case Kind::value: return "value";
    case Kind::file: return "file:" + path;
  }
  return "unknown";
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(parse_double(item));
      if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
        throw ConfigError("range grid must be start:stop:step with step > 0");
      }
      const auto count =
          static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
      for (std::size_t k = 0; k <= count; ++k) {
        out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
      }
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  } catch (const FormatError&) {
    throw ConfigError("bad grid '" + text + "'");
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

void RunConfig::validate() const {
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  if (stats.empty()) throw ConfigError("at least one --stat is required");
  if (quadrature_nodes < 8) throw ConfigError("--quadrature-nodes must be >= 8");
  const bool needs_input = command == Command::scan || command == Command::profile ||
                           (command == Command::identify && intervals_input.empty());
  if (needs_input && input.empty()) {
    throw ConfigError(to_string(command) + " needs --input");
  }
  if (f < 0.0) throw ConfigError("--f must be >= 0");
  if (reps < 1) throw ConfigError("--reps must be >= 1");
  for (double q : quantiles) {
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantiles must lie in [0, 1]");
  }
  if (!(threshold.level > 0.0 && threshold.level <= 1.0)) {
    throw ConfigError("--level must lie in (0, 1]");
  }
}

void run(const RunConfig& config) {
  config.validate();
  switch (config.command) {
    case Command::gen: return run_gen(config);
    case Command::scan: return run_scan(config);
    case Command::identify: return run_identify(config);
    case Command::boundary: return run_boundary(config);
    case Command::calibrate: return run_calibrate(config);
    case Command::power: return run_power(config);
    case Command::profile: return run_profile(config);
  }
}

int report_error(const std::exception& e, std::ostream& err) {
  std::string kind = "internal";
  int code = kExitInternal;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) {
    kind = "config";
    code = kExitConfig;
  } else if (dynamic_cast<const FormatError*>(&e) != nullptr) {
    kind = "format";
    code = kExitFormat;
  } else if (dynamic_cast<const NumericError*>(&e) != nullptr) {
    kind = "numeric";
    code = kExitNumeric;
  } else if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr ||
             dynamic_cast<const std::out_of_range*>(&e) != nullptr) {
    kind = "config";
    code = kExitConfig;
  }
  Json doc;
  doc["error"] = {{"kind", kind}, {"message", e.what()}};
  err << doc.dump() << '\n';
  return code;
}

int run_reporting(const RunConfig& config, std::ostream& err) {
  try {
    run(config);
    return 0;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

}  // namespace alscan::cli
