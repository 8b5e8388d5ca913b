#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "alscan/alr.hpp"
#include "alscan/boundary.hpp"
#include "alscan/core.hpp"
#include "alscan/gof.hpp"
#include "alscan/identify.hpp"
#include "alscan/io.hpp"
#include "alscan/scanset.hpp"
#include "alscan/serialize.hpp"
#include "alscan/sim.hpp"

namespace py = pybind11;
using namespace alscan;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DataMatrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    return DataMatrix(1, a.shape(0), std::vector<double>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() != 2) throw py::value_error("expected a 1-D or 2-D array");
  return DataMatrix(a.shape(0), a.shape(1),
                    std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const DataMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

py::dict report_dict(const ScanReport& r) {
  py::dict d;
  d["statistic"] = to_string(r.kind);
  d["N"] = r.rows;
  d["T"] = r.cols;
  d["intervals"] = r.intervals;
  d["global_value"] = r.global_value;
  d["log_global_value"] = r.log_global_value;
  d["threshold"] = r.threshold;
  d["reject"] = r.reject;
  if (r.argmax) {
    d["argmax"] = py::make_tuple(r.argmax->level, r.argmax->interval.start,
                                 r.argmax->interval.length);
  } else {
    d["argmax"] = py::none();
  }
  py::list records;
  for (const auto& rec : r.records) {
    records.append(py::make_tuple(rec.level, rec.interval.start, rec.interval.length,
                                  rec.raw, rec.penalty, rec.penalized, rec.arg_n));
  }
  d["records"] = records;
  return d;
}

SignalModel model_from_dict(const py::dict& d) {
  const std::string text = py::module_::import("json").attr("dumps")(d).cast<std::string>();
  return model_from_json(Json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_alscan, m) {
  m.doc() = "Penalized higher-criticism, Berk-Jones and average likelihood ratio "
            "scans for sparse aligned signals";
  m.attr("__version__") = "0.1.0";

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("scan_set", [](std::size_t T) {
    std::vector<std::tuple<int, std::size_t, std::size_t>> out;
    for (const auto& mem : build_scan_set(T).members()) {
      out.emplace_back(mem.level, mem.interval.start, mem.interval.length);
    }
    return out;
  }, py::arg("T"), "Members of the scanning set as (r, j, ell) in scan order.");
  m.def("grid_spacing", &grid_spacing, py::arg("r"), py::arg("T"));

  m.def("pooled_scores", [](const Array& data, std::size_t j, std::size_t ell) {
    const auto mat = to_matrix(data);
    return pooled_scores(PrefixSums(mat), {j, ell}).scores;
  }, py::arg("data"), py::arg("j"), py::arg("ell"));
  m.def("p_value", [](double y, const std::string& sided) {
    return p_value(y, parse_sidedness(sided));
  }, py::arg("y"), py::arg("sided") = "one");

  m.def("penalty_s", &penalty_s, py::arg("ell"), py::arg("T"));
  m.def("kl_berk_jones", &kl_berk_jones, py::arg("x"), py::arg("t"));
  m.def("lemma_threshold", &lemma_threshold, py::arg("N"));

  m.def("penalized_scan", [](const Array& data, const std::string& stat,
                             const std::string& sided, std::optional<double> threshold,
                             bool records) {
    ScanOptions opts;
    opts.sided = parse_sidedness(sided);
    opts.threshold = threshold;
    opts.keep_records = records;
    const auto mat = to_matrix(data);
    return report_dict(penalized_scan(mat, build_scan_set(mat.cols()),
                                      parse_stat_kind(stat), opts));
  }, py::arg("data"), py::arg("stat") = "pbj", py::arg("sided") = "one",
     py::arg("threshold") = py::none(), py::arg("records") = false);

  m.def("alr_statistic", [](const Array& data, std::size_t nodes,
                            std::optional<double> threshold, bool records) {
    AlrConfig cfg;
    cfg.quadrature_nodes = nodes;
    cfg.threshold = threshold;
    cfg.keep_records = records;
    const auto mat = to_matrix(data);
    ScanReport report;
    {
      py::gil_scoped_release release;
      report = alr_statistic(mat, build_scan_set(mat.cols()), cfg);
    }
    return report_dict(report);
  }, py::arg("data"), py::arg("quadrature_nodes") = 64,
     py::arg("threshold") = py::none(), py::arg("records") = false);

  m.def("log_alr_sparse_mixture", [](const std::vector<double>& x, std::size_t nodes) {
    AlrConfig cfg;
    cfg.quadrature_nodes = nodes;
    return log_alr_sparse_mixture(x, cfg);
  }, py::arg("x"), py::arg("quadrature_nodes") = 64);
  m.def("log_alr_single_sequence", [](const std::vector<double>& row) {
    return log_alr_single_sequence(row, build_scan_set(row.size()));
  }, py::arg("row"));

  m.def("profile_over_j", [](const Array& data, std::size_t ell) {
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto& p : likelihood_profile_over_j(to_matrix(data), ell)) {
      out.emplace_back(p.j, p.log_likelihood);
    }
    return out;
  }, py::arg("data"), py::arg("ell"), "(j, log L) for every start j.");
  m.def("profile_over_beta", [](const Array& data, std::size_t ell, std::size_t j,
                                const std::vector<double>& betas) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : likelihood_profile_over_beta(to_matrix(data), ell, j, betas)) {
      out.emplace_back(p.beta, p.log_likelihood);
    }
    return out;
  }, py::arg("data"), py::arg("ell"), py::arg("j"), py::arg("betas"));

  m.def("b_aligned", &b_aligned, py::arg("N"), py::arg("beta"), py::arg("zeta"));
  m.def("b_hetero", &b_hetero, py::arg("N"), py::arg("beta"), py::arg("zeta"),
        py::arg("tau"));
  m.def("boundary_branch", [](double n, double beta, double zeta, double tau) {
    return std::string(to_string(b_hetero_branch({n, beta, zeta, tau}).branch));
  }, py::arg("N"), py::arg("beta"), py::arg("zeta"), py::arg("tau") = 0.0);
  m.def("b_nonaligned", &b_nonaligned, py::arg("N"), py::arg("beta"), py::arg("zeta"));
  m.def("b_single_sequence", &b_single_sequence, py::arg("T"), py::arg("ell"));
  m.def("rho_star", &rho_star, py::arg("beta"));
  m.def("zeta_of_scale", &zeta_of_scale, py::arg("N"), py::arg("T"), py::arg("ell"));

  m.def("identify", [](const std::vector<std::tuple<std::size_t, std::size_t, double>>& cands,
                       double c, double f) {
    std::vector<Segment> segs;
    for (const auto& [j, ell, score] : cands) segs.push_back({{j, ell}, score});
    std::vector<std::tuple<std::size_t, std::size_t, double>> out;
    for (const auto& s : identify(std::move(segs), {c, f})) {
      out.emplace_back(s.interval.start, s.interval.length, s.score);
    }
    return out;
  }, py::arg("candidates"), py::arg("c"), py::arg("f") = 0.0,
     "Greedy identification over (j, ell, score) candidates.");

  m.def("generate", [](const py::dict& model, std::uint64_t seed) {
    Sample s = generate(model_from_dict(model), seed);
    return py::make_tuple(to_array(s.data), s.truth.carriers);
  }, py::arg("model"), py::arg("seed"),
     "Draws (data, carriers) from a model dict with keys N, T, segments.");

  m.def("estimate_errors", [](const py::dict& model, const std::string& stat,
                              std::optional<double> threshold, std::size_t reps,
                              std::uint64_t seed, unsigned workers) {
    const SignalModel sm = model_from_dict(model);
    const StatKind kind = parse_stat_kind(stat);
    MonteCarloOptions opts;
    opts.workers = workers;
    MonteCarloSummary s;
    {
      py::gil_scoped_release release;
      s = estimate_errors(sm, kind, threshold.value_or(default_threshold(kind, sm.rows)),
                          reps, seed, opts);
    }
    py::dict d;
    d["type1_rate"] = s.type1_rate;
    d["type1_se"] = s.type1_se;
    d["type2_rate"] = s.type2_rate;
    d["type2_se"] = s.type2_se;
    d["threshold"] = s.threshold;
    d["replicates"] = s.replicates;
    return d;
  }, py::arg("model"), py::arg("stat") = "pbj", py::arg("threshold") = py::none(),
     py::arg("reps") = 100, py::arg("seed") = 1, py::arg("workers") = 1);

  m.def("calibrate", [](std::size_t n, std::size_t T, const std::string& stat,
                        std::size_t reps, const std::vector<double>& levels,
                        std::uint64_t seed) {
    const auto table = calibrate(n, T, parse_stat_kind(stat), reps, levels, seed);
    std::vector<std::pair<double, double>> q;
    for (const auto& p : table.quantiles) q.emplace_back(p.level, p.value);
    return q;
  }, py::arg("N"), py::arg("T"), py::arg("stat"), py::arg("reps"),
     py::arg("levels"), py::arg("seed") = 1);

  m.def("read_matrix", [](const std::string& path) { return to_array(read_matrix(path)); },
        py::arg("path"));
  m.def("write_matrix", [](const std::string& path, const Array& data) {
    write_matrix(path, to_matrix(data), format_for_path(path));
  }, py::arg("path"), py::arg("data"));
}
