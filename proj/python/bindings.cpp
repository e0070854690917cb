#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lpmatch/failprob.hpp"
#include "lpmatch/graph.hpp"
#include "lpmatch/matching.hpp"
#include "lpmatch/montecarlo.hpp"
#include "lpmatch/structure.hpp"
#include "lpmatch/threshold.hpp"

namespace py = pybind11;
using namespace lpm;

namespace {

DegreeDistribution distribution_from(const std::map<unsigned, double>& masses) {
  std::vector<DegreeMass> entries;
  for (const auto& [d, p] : masses) entries.push_back({d, p});
  return make_distribution(entries);
}

py::dict report_dict(const InequalityReport& r) {
  py::dict out;
  out["lhs"] = r.lhs;
  out["rhs"] = r.rhs;
  out["holds"] = r.holds;
  out["derived"] = r.derived;
  return out;
}

py::dict record_dict(const ExperimentRecord& r) {
  py::dict out;
  out["param"] = r.param;
  out["trials"] = r.trials;
  out["failures"] = r.failures;
  out["rate"] = r.rate;
  out["ci_low"] = r.ci_low;
  out["ci_high"] = r.ci_high;
  out["realized_dbar"] = r.realized_dbar;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random bipartite matching: sampling, structure, failure probabilities, thresholds";

  static py::exception<Error> error_type(m, "LpmatchError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::enum_<SamplingMode>(m, "SamplingMode")
      .value("WITH_REPLACEMENT", SamplingMode::WithReplacement)
      .value("WITHOUT_REPLACEMENT", SamplingMode::WithoutReplacement);

  py::enum_<SpecMode>(m, "SpecMode")
      .value("FIXED", SpecMode::Fixed)
      .value("BINOMIAL", SpecMode::Binomial)
      .value("CUSTOM", SpecMode::Custom);

  py::class_<DegreeDistribution>(m, "DegreeDistribution")
      .def(py::init(&distribution_from), py::arg("masses"),
           "Build from a {degree: probability} mapping.")
      .def_static("point_mass", &DegreeDistribution::point_mass, py::arg("degree"))
      .def_property_readonly("mean", &DegreeDistribution::mean)
      .def("probability", &DegreeDistribution::probability, py::arg("degree"))
      .def("masses", [](const DegreeDistribution& d) {
        std::map<unsigned, double> out;
        for (const auto& e : d.support()) out[e.degree] = e.probability;
        return out;
      });

  py::class_<DegreeSpec>(m, "DegreeSpec")
      .def(py::init<std::vector<DegreeDistribution>>(), py::arg("per_node"))
      .def("__len__", &DegreeSpec::size)
      .def("__getitem__", [](const DegreeSpec& s, std::size_t x) {
        if (x >= s.size()) throw py::index_error();
        return s[x];
      })
      .def_property_readonly("average_mean", &DegreeSpec::average_mean);

  m.def(
      "near_optimal_spec",
      [](std::size_t n, double dbar, SpecMode mode, const std::vector<double>& custom_p) {
        return near_optimal_spec(n, dbar, mode, custom_p);
      },
      py::arg("n"), py::arg("dbar"),
        py::arg("mode") = SpecMode::Fixed, py::arg("custom_p") = std::vector<double>{});

  py::class_<BipartiteMultigraph>(m, "Graph")
      .def(py::init<std::size_t, const std::vector<std::vector<Node>>&>(), py::arg("m"),
           py::arg("adjacency"))
      .def_property_readonly("left_count", &BipartiteMultigraph::left_count)
      .def_property_readonly("right_count", &BipartiteMultigraph::right_count)
      .def("neighbors", [](const BipartiteMultigraph& g, std::size_t x) {
        if (x >= g.left_count()) throw py::index_error();
        const auto row = g.neighbors(x);
        return std::vector<Node>(row.begin(), row.end());
      })
      .def("to_text", [](const BipartiteMultigraph& g) {
        std::ostringstream out;
        write_graph(out, g);
        return out.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return read_graph(in);
      })
      .def(py::self == py::self);

  m.def("sample_graph", &sample_graph, py::arg("spec"), py::arg("m"), py::arg("seed"),
        py::arg("sampling") = SamplingMode::WithReplacement);

  m.def(
      "match",
      [](const BipartiteMultigraph& g) {
        const auto r = has_left_perfect_matching(g);
        return py::make_tuple(r.is_matched(), r.is_matched() ? r.assignment() : r.violator());
      },
      py::arg("graph"),
      "Returns (True, assignment) or (False, Hall violator).");

  m.def(
      "classify_right_nodes",
      [](const BipartiteMultigraph& g) {
        std::vector<std::string> out;
        for (auto c : classify_right_nodes(g)) out.emplace_back(to_string(c));
        return out;
      },
      py::arg("graph"));

  m.def(
      "bi_partition",
      [](const BipartiteMultigraph& g) {
        const auto p = bi_partition(g);
        py::dict out;
        out["blocked"] = p.blocked;
        out["classes"] = p.classes;
        out["b"] = p.bi.b;
        out["sizes"] = p.bi.sizes;
        return out;
      },
      py::arg("graph"));

  m.def(
      "fail_closed_form",
      [](unsigned dy, unsigned dz, double beta, std::vector<double> gammas) {
        return fail_closed_form(dy, dz, NormalizedBI::from_reals(beta, std::move(gammas)));
      },
      py::arg("d_y"), py::arg("d_z"), py::arg("beta"), py::arg("gammas"));
  m.def("fail_total", &fail_total, py::arg("d_y"), py::arg("d_z"), py::arg("residual"));

  m.def("success_probability_exact", &success_probability_exact, py::arg("spec"), py::arg("m"),
        py::arg("sampling") = SamplingMode::WithReplacement);

  m.def(
      "lemma2_check",
      [](unsigned k, unsigned l, double beta, std::vector<double> gammas) {
        return report_dict(lemma2_check(k, l, NormalizedBI::from_reals(beta, std::move(gammas))));
      },
      py::arg("k"), py::arg("l"), py::arg("beta"), py::arg("gammas"));
  m.def(
      "lemma3_check",
      [](unsigned l, double beta, std::vector<double> gammas) {
        return report_dict(lemma3_check(l, NormalizedBI::from_reals(beta, std::move(gammas))));
      },
      py::arg("l"), py::arg("beta"), py::arg("gammas"));
  m.def(
      "convexity_K_check",
      [](unsigned l, double beta, std::vector<double> gammas) {
        return report_dict(convexity_K_check(l, NormalizedBI::from_reals(beta, std::move(gammas))));
      },
      py::arg("l"), py::arg("beta"), py::arg("gammas"));

  m.def("threshold_c_star", py::overload_cast<double>(&threshold_c_star), py::arg("dbar"));
  m.def(
      "core_density",
      [](double c, unsigned l, double alpha) {
        const auto s = core_density(c, ThresholdQuery{l, alpha});
        return py::make_tuple(s.xi, s.density ? py::cast(*s.density) : py::none());
      },
      py::arg("c"), py::arg("l"), py::arg("alpha"),
      "Returns (xi, density); density is None when the core is empty.");

  m.def(
      "failure_rate",
      [](const DegreeSpec& spec, std::size_t m, std::size_t trials, std::uint64_t seed,
         SamplingMode sampling, unsigned threads) {
        ExperimentRecord r;
        {
          py::gil_scoped_release release;
          r = failure_rate(spec, m, trials, seed, sampling, threads);
        }
        return record_dict(r);
      },
      py::arg("spec"), py::arg("m"), py::arg("trials"), py::arg("seed"),
      py::arg("sampling") = SamplingMode::WithReplacement, py::arg("threads") = 1);
}
