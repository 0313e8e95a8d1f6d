#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rotorlab/delta.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/experiments.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/metrics.hpp"
#include "rotorlab/report_json.hpp"

namespace fs = std::filesystem;
using namespace rotorlab;

namespace {

struct Options {
    std::string graph_file;
    std::string generate_spec;
    std::string batch_file;
    std::string suite;
    std::string instance_id;
    std::int64_t k = 1;
    std::uint64_t seed = 1;
    std::int64_t eta = 0;
    std::int64_t max_steps = -1;
    std::int64_t shift_cap = 1'000'000;
    std::int64_t state_cap = 4'000'000;
    std::vector<std::string> verify;
    std::vector<std::string> family_kinds;
    std::vector<std::int64_t> family_sizes;
    std::vector<std::int64_t> family_ks;
    std::vector<std::uint64_t> family_seeds;
    bool family_prime_m = false;
    bool family_coprime = false;
    std::string out_dir;
    int workers = 0;
    std::string format = "json";
    std::string dump_circulation;
    std::string dump_trace;
    std::string dump_delta;
};

PipelineCaps caps_from(const Options& opt) {
    PipelineCaps caps;
    caps.budget.max_steps = opt.max_steps;
    caps.shift_cap = opt.shift_cap;
    caps.delta_state_cap = opt.state_cap;
    caps.eta_override = opt.eta;
    return caps;
}

std::string default_id(const Options& opt) {
    if (!opt.instance_id.empty()) return opt.instance_id;
    std::string base = !opt.generate_spec.empty() ? opt.generate_spec
                                                  : fs::path(opt.graph_file).stem().string();
    for (char& ch : base) {
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '-';
    }
    return base + "-k" + std::to_string(opt.k) + "-s" + std::to_string(opt.seed);
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::vector<std::string> expand_verify(const std::vector<std::string>& requested, bool& strict) {
    strict = false;
    if (requested.empty()) return {};
    if (requested.size() == 1 && requested.front() == "all") return known_checks();
    const auto known = known_checks();
    for (const std::string& id : requested) {
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            throw ParseError("unknown check id: " + id);
        }
    }
    strict = true;
    return requested;
}

// Explicitly requested checks must be answerable; refusing is an error.
void enforce_strict(const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks) {
        if (c.applicable) continue;
        if (c.detail.find("bipartite") != std::string::npos) {
            throw BipartiteError("check '" + c.check + "' refused: " + c.detail);
        }
        throw Error("check '" + c.check + "' refused: " + c.detail);
    }
}

int print_checks(const std::vector<CheckResult>& checks) {
    int failures = 0;
    for (const CheckResult& c : checks) {
        const char* tag = !c.applicable ? "SKIP" : (c.pass ? "PASS" : (c.asserted ? "FAIL" : "WARN"));
        if (c.applicable && c.asserted && !c.pass) ++failures;
        std::cout << tag << ' ' << c.check << ": " << c.detail << '\n';
    }
    return failures;
}

void write_instance_files(const Options& opt, const Pipeline& pl, const MetricsReport& report,
                          const std::vector<CheckResult>& checks) {
    if (opt.out_dir.empty()) return;
    ensure_dir(opt.out_dir);
    const fs::path dir(opt.out_dir);
    write_text_file((dir / (pl.spec.id + ".report.json")).string(), metrics_json(report).dump(2) + "\n");
    if (!checks.empty()) {
        if (opt.format == "csv") {
            write_text_file((dir / (pl.spec.id + ".checks.csv")).string(), checks_csv(checks));
        } else {
            write_text_file((dir / (pl.spec.id + ".checks.json")).string(),
                            checks_json(pl.spec.id, checks).dump(2) + "\n");
        }
    }
}

void write_dumps(const Options& opt, const Pipeline& pl) {
    if (!opt.dump_circulation.empty()) {
        write_text_file(opt.dump_circulation, circulation_json(pl.graph, pl.circ).dump(2) + "\n");
    }
    if (!opt.dump_trace.empty()) {
        write_text_file(opt.dump_trace, trace_csv(pl.trace));
    }
    if (!opt.dump_delta.empty()) {
        const DeltaTable table =
            DeltaTable::build(pl.graph, pl.circ, DeltaCaps{opt.shift_cap, opt.state_cap});
        write_text_file(opt.dump_delta, delta_summary_csv(table));
    }
}

int run_single(const Options& opt) {
    InstanceSpec spec;
    spec.id = default_id(opt);
    spec.generate = opt.generate_spec;
    if (!opt.graph_file.empty()) {
        spec.graph_text.clear();
        std::ifstream in(opt.graph_file);
        if (!in) throw Error("cannot read graph file '" + opt.graph_file + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        spec.graph_text = buf.str();
    }
    spec.k = opt.k;
    spec.seed = opt.seed;

    const PipelineCaps caps = caps_from(opt);
    const Pipeline pl = run_pipeline(spec, caps);
    bool strict = false;
    const std::vector<std::string> ids = expand_verify(opt.verify, strict);
    const std::vector<CheckResult> checks = run_checks(pl, ids, caps);
    if (strict) enforce_strict(checks);

    const MetricsReport report = build_metrics_report(pl, caps);
    std::cout << "instance " << pl.spec.id << '\n'
              << "  nodes " << report.nodes << ", arcs " << report.arcs << ", tokens "
              << report.tokens << '\n'
              << "  preperiod " << report.preperiod << ", period " << report.period << '\n'
              << "  orbits " << report.cycles << ", label modulus " << report.eta << '\n';
    if (report.all_arcs_visited) {
        std::cout << "  idleness " << report.idleness << '\n';
    } else {
        std::cout << "  idleness undefined, some arc is never traversed\n";
    }
    const int failures = print_checks(checks);
    write_instance_files(opt, pl, report, checks);
    write_dumps(opt, pl);
    return failures > 0 ? 1 : 0;
}

struct BatchOutcome {
    std::string id;
    bool ok = false;
    std::string message;
};

int run_batch(const Options& opt) {
    std::ifstream in(opt.batch_file);
    if (!in) throw Error("cannot read batch file '" + opt.batch_file + "'");
    std::vector<InstanceSpec> specs;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string gen;
        std::int64_t k = 0;
        std::uint64_t seed = 0;
        if (!(row >> gen)) continue;
        if (!(row >> k >> seed)) {
            throw ParseError("batch line " + std::to_string(lineno) +
                             " needs '<generate-spec> <k> <seed>'");
        }
        InstanceSpec spec;
        spec.generate = gen;
        spec.k = k;
        spec.seed = seed;
        std::string base = gen;
        for (char& ch : base) {
            if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '-';
        }
        spec.id = base + "-k" + std::to_string(k) + "-s" + std::to_string(seed);
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw ParseError("batch file has no instances");
    std::sort(specs.begin(), specs.end(),
              [](const InstanceSpec& a, const InstanceSpec& b) { return a.id < b.id; });

    const PipelineCaps caps = caps_from(opt);
    bool strict = false;
    const std::vector<std::string> ids = expand_verify(opt.verify, strict);
    ensure_dir(opt.out_dir);

    std::vector<BatchOutcome> outcomes(specs.size());
    parallel_for(static_cast<std::int64_t>(specs.size()), opt.workers, [&](std::int64_t i) {
        const InstanceSpec& spec = specs[static_cast<size_t>(i)];
        BatchOutcome& out = outcomes[static_cast<size_t>(i)];
        out.id = spec.id;
        try {
            const Pipeline pl = run_pipeline(spec, caps);
            const std::vector<CheckResult> checks = run_checks(pl, ids, caps);
            if (strict) enforce_strict(checks);
            const MetricsReport report = build_metrics_report(pl, caps);
            int failures = 0;
            for (const CheckResult& c : checks) {
                if (c.applicable && c.asserted && !c.pass) ++failures;
            }
            if (!opt.out_dir.empty()) {
                const fs::path dir(opt.out_dir);
                write_text_file((dir / (spec.id + ".report.json")).string(),
                                metrics_json(report).dump(2) + "\n");
                if (!checks.empty()) {
                    if (opt.format == "csv") {
                        write_text_file((dir / (spec.id + ".checks.csv")).string(),
                                        checks_csv(checks));
                    } else {
                        write_text_file((dir / (spec.id + ".checks.json")).string(),
                                        checks_json(spec.id, checks).dump(2) + "\n");
                    }
                }
            }
            out.ok = failures == 0;
            std::ostringstream msg;
            msg << "period " << pl.trace.period << ", orbits " << pl.circ.cycle_count();
            if (failures > 0) msg << ", " << failures << " check(s) failed";
            out.message = msg.str();
        } catch (const Error& err) {
            out.ok = false;
            out.message = err.what();
        }
    });

    int failed = 0;
    for (const BatchOutcome& out : outcomes) {
        std::cout << (out.ok ? "ok   " : "fail ") << out.id << ": " << out.message << '\n';
        if (!out.ok) ++failed;
    }
    std::cout << outcomes.size() << " instances, " << failed << " failed\n";
    return failed > 0 ? 1 : 0;
}

int run_suite_mode(const Options& opt) {
    FamilySpec family;
    family.kinds = opt.family_kinds;
    family.sizes = opt.family_sizes;
    family.ks = opt.family_ks;
    if (!opt.family_seeds.empty()) family.seeds = opt.family_seeds;
    family.require_prime_m = opt.family_prime_m;
    family.require_coprime = opt.family_coprime;

    const SuiteResult result = run_suite(opt.suite, family, caps_from(opt), opt.workers);

    std::int64_t pass = 0, fail = 0, skip = 0;
    for (const CheckResult& c : result.checks) {
        if (!c.applicable) {
            ++skip;
        } else if (c.pass || !c.asserted) {
            ++pass;
        } else {
            ++fail;
        }
    }
    std::cout << "suite " << result.suite << ": " << pass << " checks passed, " << fail
              << " failed, " << skip << " not applicable\n";
    for (const BaselineRow& row : result.baseline) {
        std::cout << "  " << row.instance << ": walk median gap " << row.walk_median_gap
                  << " vs idleness " << row.rr_idle << " (x" << row.separation << ")\n";
    }

    if (!opt.out_dir.empty()) {
        ensure_dir(opt.out_dir);
        const fs::path dir(opt.out_dir);
        write_text_file((dir / ("suite_" + result.suite + ".json")).string(),
                        suite_json(result).dump(2) + "\n");
        if (!result.table.empty()) {
            write_text_file((dir / ("suite_" + result.suite + ".csv")).string(),
                            suite_rows_csv(result.table));
        }
        if (!result.baseline.empty()) {
            write_text_file((dir / ("suite_" + result.suite + ".csv")).string(),
                            baseline_csv(result.baseline));
        }
        if (opt.format == "csv" && !result.checks.empty()) {
            write_text_file((dir / ("suite_" + result.suite + "_checks.csv")).string(),
                            checks_csv(result.checks));
        }
    }
    return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotor-router dynamics simulator and verifier"};
    app.set_config("--config", "", "flat key=value config file; command-line flags win");
    app.allow_config_extras(false);

    Options opt;
    auto* graph_opt = app.add_option("--graph", opt.graph_file, "graph description file");
    auto* gen_opt = app.add_option("--generate", opt.generate_spec,
                                   "generator spec, e.g. cycle:n=7 or random_regular:n=10,d=3,seed=4");
    auto* batch_opt = app.add_option("--batch", opt.batch_file,
                                     "file with one '<generate-spec> <k> <seed>' per line");
    auto* suite_opt =
        app.add_option("--suite", opt.suite, "run a named suite")
            ->check(CLI::IsMember({"lemmas", "idleness", "discrepancy", "baseline"}));
    app.add_option("--id", opt.instance_id, "instance id used in reports and file names");
    app.add_option("--k", opt.k, "number of tokens")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "seed for token placement and rotor pointers");
    app.add_option("--eta", opt.eta,
                   "label modulus; 0 picks the gcd of the orbit lengths, other values must divide it");
    app.add_option("--max-steps", opt.max_steps, "step budget; -1 derives one from the graph");
    app.add_option("--shift-cap", opt.shift_cap, "largest allowed shift modulus");
    app.add_option("--state-cap", opt.state_cap, "largest allowed offset-machine state count");
    app.add_option("--verify", opt.verify, "check ids to run, or 'all'")->delimiter(',');
    app.add_option("--family-kinds", opt.family_kinds, "suite family kinds")->delimiter(',');
    app.add_option("--family-sizes", opt.family_sizes, "suite family sizes")->delimiter(',');
    app.add_option("--family-ks", opt.family_ks, "suite family token counts")->delimiter(',');
    app.add_option("--family-seeds", opt.family_seeds, "suite family seeds")->delimiter(',');
    app.add_flag("--family-prime-m", opt.family_prime_m, "keep only instances with a prime arc count");
    app.add_flag("--family-coprime", opt.family_coprime, "keep only instances with gcd(k, m) = 1");
    app.add_option("--out-dir", opt.out_dir, "directory for report files")
        ->envname("ROTORLAB_OUT_DIR");
    app.add_option("--workers", opt.workers, "worker threads; 0 uses all cores");
    app.add_option("--format", opt.format, "check report file format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--dump-circulation", opt.dump_circulation, "write the circulation as JSON");
    app.add_option("--dump-trace", opt.dump_trace, "write one recurrent period as CSV");
    app.add_option("--dump-delta", opt.dump_delta, "write the offset-distance diagonal as CSV");

    CLI11_PARSE(app, argc, argv);

    const int modes = (graph_opt->count() > 0 ? 1 : 0) + (gen_opt->count() > 0 ? 1 : 0) +
                      (batch_opt->count() > 0 ? 1 : 0) + (suite_opt->count() > 0 ? 1 : 0);
    if (modes != 1) {
        std::cerr << "error: pass exactly one of --graph, --generate, --batch, --suite\n";
        return 2;
    }

    try {
        if (suite_opt->count() > 0) return run_suite_mode(opt);
        if (batch_opt->count() > 0) return run_batch(opt);
        return run_single(opt);
    } catch (const BipartiteError& err) {
        std::cerr << "refused (bipartite): " << err.what() << '\n';
        return 2;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}
