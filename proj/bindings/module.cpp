#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rotorlab/circulation.hpp"
#include "rotorlab/delta.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/experiments.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/metrics.hpp"
#include "rotorlab/report_json.hpp"
#include "rotorlab/rr_engine.hpp"

namespace py = pybind11;
using namespace rotorlab;

PYBIND11_MODULE(_core, m) {
    m.doc() = "rotor-router dynamics: simulation, circulations, offset distances";

    py::register_exception<Error>(m, "RotorlabError");
    py::register_exception<BipartiteError>(m, "BipartiteRefusal");
    py::register_exception<BudgetError>(m, "BudgetExceeded");

    py::class_<Graph>(m, "Graph")
        .def_static("from_edges",
                    [](NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
                        return Graph::from_edges(n, edges);
                    },
                    py::arg("nodes"), py::arg("edges"))
        .def_static("from_text", [](const std::string& text) { return load_graph(text); },
                    py::arg("text"))
        .def_static("generate", [](const std::string& spec) { return generate(spec); },
                    py::arg("spec"))
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("arc_count", &Graph::arc_count)
        .def("pred", &Graph::pred, py::arg("arc"))
        .def("succ", &Graph::succ, py::arg("arc"))
        .def("reverse", &Graph::reverse, py::arg("arc"))
        .def("out_degree", &Graph::out_degree, py::arg("node"))
        .def("ports", [](const Graph& g, NodeId v) { return g.ports(v); }, py::arg("node"))
        .def("is_bipartite", &Graph::is_bipartite)
        .def("is_tree", &Graph::is_tree)
        .def("diameter", [](const Graph& g) { return graph_diameter(g); })
        .def("to_text", &Graph::to_text)
        .def("__repr__", [](const Graph& g) {
            return "<Graph nodes=" + std::to_string(g.node_count()) +
                   " arcs=" + std::to_string(g.arc_count()) + ">";
        });

    py::class_<LoadTrace>(m, "LoadTrace")
        .def_readonly("preperiod", &LoadTrace::preperiod)
        .def_readonly("period", &LoadTrace::period)
        .def_readonly("token_count", &LoadTrace::token_count)
        .def_readonly("arc_count", &LoadTrace::arc_count)
        .def("load_at", &LoadTrace::load_at, py::arg("t"), py::arg("arc"))
        .def("__repr__", [](const LoadTrace& t) {
            return "<LoadTrace preperiod=" + std::to_string(t.preperiod) +
                   " period=" + std::to_string(t.period) + ">";
        });

    py::class_<Circulation>(m, "Circulation")
        .def_readonly("phi", &Circulation::phi)
        .def_readonly("cycles", &Circulation::cycles)
        .def_readonly("cycle_tokens", &Circulation::cycle_tokens)
        .def_readonly("token_count", &Circulation::token_count)
        .def_property_readonly("cycle_count", &Circulation::cycle_count)
        .def("shift_modulus",
             [](const Circulation& c, std::int64_t cap) { return c.shift_modulus(cap); },
             py::arg("cap") = 1'000'000)
        .def("advance", &Circulation::advance, py::arg("arc"), py::arg("steps"));

    py::class_<DeltaTable>(m, "DeltaTable")
        .def_static("build",
                    [](const Graph& g, const Circulation& c, std::int64_t shift_cap,
                       std::int64_t state_cap) {
                        return DeltaTable::build(g, c, DeltaCaps{shift_cap, state_cap});
                    },
                    py::arg("graph"), py::arg("circulation"),
                    py::arg("shift_cap") = 1'000'000, py::arg("state_cap") = 1'000'000)
        .def_property_readonly("modulus", &DeltaTable::modulus)
        .def_property_readonly_static("UNREACHABLE",
                                      [](py::object) { return DeltaTable::kUnreachable; })
        .def("value", &DeltaTable::value, py::arg("e1"), py::arg("e2"), py::arg("offset"))
        .def("diag_max", &DeltaTable::diag_max, py::arg("offset"));

    py::class_<Pipeline>(m, "Pipeline")
        .def_readonly("graph", &Pipeline::graph)
        .def_readonly("trace", &Pipeline::trace)
        .def_readonly("circulation", &Pipeline::circ)
        .def_readonly("diameter", &Pipeline::diameter)
        .def_readonly("shift_modulus", &Pipeline::shift_modulus)
        .def_readonly("eta", &Pipeline::eta)
        .def_property_readonly("intersection_values",
                               [](const Pipeline& pl) { return pl.alam.values(); })
        .def_property_readonly("labels", [](const Pipeline& pl) { return pl.labeling.lambda; });

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("check", &CheckResult::check)
        .def_readonly("instance", &CheckResult::instance)
        .def_readonly("applicable", &CheckResult::applicable)
        .def_readonly("asserted", &CheckResult::asserted)
        .def_readonly("passed", &CheckResult::pass)
        .def_readonly("detail", &CheckResult::detail)
        .def_readonly("stats", &CheckResult::stats)
        .def("__repr__", [](const CheckResult& c) {
            return "<CheckResult " + c.check + " " +
                   (c.applicable ? (c.pass ? "pass" : "fail") : "skip") + ">";
        });

    m.def("simulate",
          [](const Graph& g, std::int64_t k, std::uint64_t seed, std::int64_t max_steps) {
              RunBudget budget;
              budget.max_steps = max_steps;
              return run_until_recurrent(g, make_state_random(g, k, seed), budget);
          },
          py::arg("graph"), py::arg("k"), py::arg("seed") = 1, py::arg("max_steps") = -1,
          "run until the recurrent class and return one full period of loads");

    m.def("extract_circulation",
          [](const Graph& g, const LoadTrace& trace) { return extract_circulation(g, trace); },
          py::arg("graph"), py::arg("trace"));

    m.def("idleness",
          [](const LoadTrace& trace) {
              const IdlenessReport r = idleness(trace);
              return py::make_tuple(r.max_gap, r.all_visited, r.per_arc);
          },
          py::arg("trace"), "returns (max_gap, all_visited, per_arc_gaps)");

    m.def("load_period", &load_period, py::arg("trace"));

    m.def("empirical_delta", &empirical_delta, py::arg("trace"), py::arg("e1"), py::arg("e2"),
          py::arg("offset"));

    m.def("time_average_deviation",
          [](const LoadTrace& trace, std::int64_t T) {
              const TimeAverageDeviation d = time_average_deviation(trace, T);
              return py::make_tuple(d.deviation.num, d.deviation.den);
          },
          py::arg("trace"), py::arg("window"),
          "largest |window load - k*T/m| as an exact fraction (num, den)");

    m.def("cumulated_discrepancy", &cumulated_discrepancy, py::arg("trace"), py::arg("dt"));

    m.def("run_pipeline",
          [](const std::string& generate, const std::string& graph_text, std::int64_t k,
             std::uint64_t seed, std::int64_t eta, std::int64_t max_steps, const std::string& id) {
              InstanceSpec spec;
              spec.id = id.empty() ? "py-instance" : id;
              spec.generate = generate;
              spec.graph_text = graph_text;
              spec.k = k;
              spec.seed = seed;
              PipelineCaps caps;
              caps.eta_override = eta;
              caps.budget.max_steps = max_steps;
              return run_pipeline(spec, caps);
          },
          py::arg("generate") = "", py::arg("graph_text") = "", py::arg("k") = 1,
          py::arg("seed") = 1, py::arg("eta") = 0, py::arg("max_steps") = -1,
          py::arg("id") = "");

    m.def("known_checks", &known_checks);

    m.def("run_check",
          [](const Pipeline& pl, const std::string& id) { return run_check(pl, id, {}); },
          py::arg("pipeline"), py::arg("check"));

    m.def("metrics_report",
          [](const Pipeline& pl) { return metrics_json(build_metrics_report(pl, {})).dump(); },
          py::arg("pipeline"), "full per-instance report as a JSON string");
}
