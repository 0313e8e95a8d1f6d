#include "rotorlab/report_json.hpp"

#include <fstream>
#include <sstream>

#include "rotorlab/errors.hpp"

namespace rotorlab {

namespace {

using nlohmann::json;

json rational_json(const Rational& r) {
    return json{{"num", r.num}, {"den", r.den}, {"text", r.str()}, {"value", r.value()}};
}

}  // namespace

json metrics_json(const MetricsReport& r) {
    json doc;
    doc["schema"] = "rotorlab-report-v1";
    doc["instance"] = r.instance;
    doc["nodes"] = r.nodes;
    doc["arcs"] = r.arcs;
    doc["tokens"] = r.tokens;
    doc["cycles"] = r.cycles;
    doc["eta"] = r.eta;
    doc["preperiod"] = r.preperiod;
    doc["period"] = r.period;
    doc["load_period"] = r.load_period;
    doc["idleness"] = r.idleness;
    doc["all_arcs_visited"] = r.all_arcs_visited;
    doc["idleness_per_arc"] = r.idleness_per_arc;
    json disc = json::array();
    for (const auto& [dt, v] : r.cumulated_discrepancy) {
        disc.push_back(json{{"dt", dt}, {"value", v}});
    }
    doc["cumulated_discrepancy"] = std::move(disc);
    json dev = json::array();
    for (const auto& [T, v] : r.time_avg_deviation) {
        dev.push_back(json{{"window", T}, {"deviation", rational_json(v)}});
    }
    doc["time_average_deviation"] = std::move(dev);
    doc["empirical_delta_diag_max"] = r.empirical_delta_diag_max;
    json ratios = json::object();
    for (const auto& [key, v] : r.bound_ratios) ratios[key] = v;
    doc["bound_ratios"] = std::move(ratios);
    return doc;
}

json checks_json(const std::string& instance, const std::vector<CheckResult>& checks) {
    json doc;
    doc["schema"] = "rotorlab-checks-v1";
    doc["instance"] = instance;
    json list = json::array();
    bool pass = true;
    for (const CheckResult& c : checks) {
        json row;
        row["check"] = c.check;
        row["instance"] = c.instance;
        row["applicable"] = c.applicable;
        row["asserted"] = c.asserted;
        row["pass"] = c.pass;
        row["detail"] = c.detail;
        json stats = json::object();
        for (const auto& [key, v] : c.stats) stats[key] = v;
        row["stats"] = std::move(stats);
        list.push_back(std::move(row));
        if (c.applicable && c.asserted && !c.pass) pass = false;
    }
    doc["checks"] = std::move(list);
    doc["pass"] = pass;
    return doc;
}

json suite_json(const SuiteResult& s) {
    json doc;
    doc["schema"] = "rotorlab-suite-v1";
    doc["suite"] = s.suite;
    doc["pass"] = s.pass;
    if (!s.checks.empty()) {
        doc["checks"] = checks_json("", s.checks)["checks"];
    }
    if (!s.table.empty()) {
        json rows = json::array();
        for (const SuiteRow& row : s.table) {
            rows.push_back(json{{"instance", row.instance},
                                {"k", row.k},
                                {"m", row.m},
                                {"gcd_km", row.gcd_km},
                                {"cycles", row.cycles},
                                {"idleness", row.idle},
                                {"bound", row.bound},
                                {"ratio", row.ratio}});
        }
        doc["table"] = std::move(rows);
    }
    if (!s.baseline.empty()) {
        json rows = json::array();
        for (const BaselineRow& row : s.baseline) {
            rows.push_back(json{{"instance", row.instance},
                                {"m", row.m},
                                {"k", row.k},
                                {"rr_idleness", row.rr_idle},
                                {"horizon", row.horizon},
                                {"walk_median_gap", row.walk_median_gap},
                                {"separation", row.separation}});
        }
        doc["baseline"] = std::move(rows);
    }
    if (!s.reports.empty()) {
        json rows = json::array();
        for (const MetricsReport& r : s.reports) rows.push_back(metrics_json(r));
        doc["reports"] = std::move(rows);
    }
    return doc;
}

json circulation_json(const Graph& g, const Circulation& c) {
    json doc;
    doc["schema"] = "rotorlab-circulation-v1";
    doc["arcs"] = g.arc_count();
    doc["phi"] = c.phi;
    json cycles = json::array();
    for (size_t i = 0; i < c.cycles.size(); ++i) {
        cycles.push_back(json{{"arcs", c.cycles[i]},
                              {"length", static_cast<std::int64_t>(c.cycles[i].size())},
                              {"tokens", c.cycle_tokens[i]}});
    }
    doc["cycles"] = std::move(cycles);
    doc["tokens"] = c.token_count;
    return doc;
}

std::string trace_csv(const LoadTrace& trace) {
    std::ostringstream out;
    out << "t,arc,load\n";
    for (std::int64_t t = 0; t < trace.period; ++t) {
        for (ArcId e = 0; e < trace.arc_count; ++e) {
            out << t << ',' << e << ',' << trace.load_at(t, e) << '\n';
        }
    }
    return out.str();
}

std::string delta_summary_csv(const DeltaTable& table) {
    std::ostringstream out;
    out << "offset,diag_max\n";
    for (std::int64_t x = 0; x < table.modulus(); ++x) {
        const std::int32_t v = table.diag_max(x);
        out << x << ',';
        if (v == DeltaTable::kUnreachable) {
            out << "unreachable";
        } else {
            out << v;
        }
        out << '\n';
    }
    return out.str();
}

std::string suite_rows_csv(const std::vector<SuiteRow>& rows) {
    std::ostringstream out;
    out << "instance,k,m,gcd_km,cycles,idleness,bound,ratio\n";
    for (const SuiteRow& row : rows) {
        out << row.instance << ',' << row.k << ',' << row.m << ',' << row.gcd_km << ','
            << row.cycles << ',' << row.idle << ',' << row.bound << ',' << row.ratio << '\n';
    }
    return out.str();
}

std::string baseline_csv(const std::vector<BaselineRow>& rows) {
    std::ostringstream out;
    out << "instance,m,k,rr_idleness,horizon,walk_median_gap,separation\n";
    for (const BaselineRow& row : rows) {
        out << row.instance << ',' << row.m << ',' << row.k << ',' << row.rr_idle << ','
            << row.horizon << ',' << row.walk_median_gap << ',' << row.separation << '\n';
    }
    return out.str();
}

std::string checks_csv(const std::vector<CheckResult>& checks) {
    std::ostringstream out;
    out << "instance,check,applicable,asserted,pass,detail\n";
    for (const CheckResult& c : checks) {
        std::string detail = c.detail;
        for (char& ch : detail) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        out << c.instance << ',' << c.check << ',' << (c.applicable ? 1 : 0) << ','
            << (c.asserted ? 1 : 0) << ',' << (c.pass ? 1 : 0) << ',' << detail << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace rotorlab
