#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/delta.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/metrics.hpp"
#include "rotorlab/rr_engine.hpp"

namespace rotorlab {

// One experiment instance. Exactly one of generate / graph_text is set;
// seed drives the initial placement and pointers (generator randomness is
// baked into the generate string so the graph is part of the identity).
struct InstanceSpec {
    std::string id;
    std::string generate;
    std::string graph_text;
    std::int64_t k = 1;
    std::uint64_t seed = 1;
};

Graph instance_graph(const InstanceSpec& spec);

struct PipelineCaps {
    RunBudget budget{};
    std::int64_t shift_cap = 1'000'000;        // lcm of orbit lengths
    std::int64_t delta_state_cap = 4'000'000;  // arc x shift machine states
    std::int64_t eta_override = 0;             // 0 keeps the gcd default
};

// Shared per-instance preparation: simulate to recurrence, extract the
// circulation, build the canonical labeling (eta = gcd of orbit lengths
// unless overridden by a divisor of it, zero shifts) and its intersection
// set. Everything downstream reads from this.
struct Pipeline {
    InstanceSpec spec;
    Graph graph;
    std::int64_t diameter = 0;
    LoadTrace trace;
    Circulation circ;
    std::int64_t shift_modulus = 0;  // 0 when the lcm exceeds shift_cap
    std::int64_t eta = 1;
    Labeling labeling;
    IntersectionSet alam;
};

Pipeline run_pipeline(const InstanceSpec& spec, const PipelineCaps& caps = {});

// Outcome of one named check on one instance. applicable=false means the
// instance does not satisfy the check's hypotheses; such results carry a
// reason in detail and count as neither pass nor fail.
struct CheckResult {
    std::string check;
    std::string instance;
    bool applicable = true;
    bool pass = true;
    bool asserted = true;  // false for ratio-reporting checks that never fail
    std::string detail;
    std::vector<std::pair<std::string, double>> stats;
};

// Check ids, named by what they verify:
//   structure       circulation re-verification, exact orbit token ratios,
//                   orbit count divides gcd(k, m), single orbit for prime m
//   labeling        label increments, modulus choice, intersection set basics
//   delta-axioms    distance table axioms, plus diagonal <= 1 on labeled
//                   offsets for single-orbit instances
//   delta-diag      window distance at offset 4 is <= 3 (non-bipartite)
//   delta-table     window distance <= table distance at every entry
//   delta-max       table diagonal maximum vs log^2 m (ratio only)
//   int-mod         residue product interval witnesses over the
//                   intersection set (non-bipartite)
//   bohr            Bohr(A + A, 1/6) = {0} for the intersection set
//                   (non-bipartite, eta >= 2)
//   cover           iterated sumset cover count <= 16 ceil(log2^2 eta)
//                   (single orbit, eta >= 2)
//   spectrum-cover  trivial-spectrum implies difference cover (eta >= 2)
//   shrink-chain    difference chain flattens the spectrum (non-bipartite,
//                   eta >= 2)
//   time-average    window averages vs the diagonal window distance; zero
//                   deviation exactly at whole periods
//   idle            idleness floor (pigeonhole) and the three ceiling rows
//   idle-wait       T > (m/k) * table delta_T(e,e) forces idle(e) <= T
//   tree-window     windowed diagonal minimum on trees (constant only)
//   loops-diag      diagonal vs orbit-graph diameter; asserted only when
//                   every node carries a loop, reported otherwise
//   vertex-time     time-stamped reachability diameter vs g log^2 n
//                   (ratio only; bipartite non-trees refused upstream)
//   stabilization   steps to recurrence <= 10x structural bound
//   walk            closed-walk reconstruction replays correctly and uses
//                   few fragments (single orbit)
std::vector<std::string> known_checks();

CheckResult run_check(const Pipeline& pl, const std::string& id,
                      const PipelineCaps& caps = {});
std::vector<CheckResult> run_checks(const Pipeline& pl,
                                    const std::vector<std::string>& ids,
                                    const PipelineCaps& caps = {});

// Cartesian sweep over (kind, size, k, seed). Empty ks selects the
// standing token ladder {1, 2, 3, m/4, 3m/4 + 1} (deduplicated, clamped
// to >= 1). Filters drop instances after expansion.
struct FamilySpec {
    std::vector<std::string> kinds;  // cycle, tree, grid, regular, complete,
                                     // looped_cycle, loops_everywhere
    std::vector<std::int64_t> sizes;
    std::vector<std::int64_t> ks;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    bool require_prime_m = false;
    bool require_coprime = false;  // gcd(k, m) == 1
};

std::vector<InstanceSpec> build_family(const FamilySpec& fs);

// The standing instance battery: cycles, random trees, grids, random
// regular graphs, completes, and the loop-carrying variants, swept over
// the token ladder and three seeds.
std::vector<InstanceSpec> acceptance_suite();

// Cycles whose node counts are the primes {11, 23, 47, 97}.
std::vector<InstanceSpec> prime_cycle_specs(std::int64_t k);

// Table row mirroring the idleness comparison: measured idleness against
// the (m/k) log^2 m target.
struct SuiteRow {
    std::string instance;
    std::int64_t k = 0;
    std::int64_t m = 0;
    std::int64_t gcd_km = 0;
    std::int64_t cycles = 0;
    std::int64_t idle = 0;  // IdlenessReport::kNever when an arc is starved
    double bound = 0.0;
    double ratio = 0.0;
};

struct BaselineRow {
    std::string instance;
    std::int64_t m = 0;
    std::int64_t k = 0;
    std::int64_t rr_idle = 0;
    std::int64_t horizon = 0;
    double walk_median_gap = 0.0;
    double separation = 0.0;  // walk median / rr idle
};

struct SuiteResult {
    std::string suite;
    bool pass = true;  // asserted checks only; ratio reports never fail
    std::vector<CheckResult> checks;
    std::vector<SuiteRow> table;
    std::vector<BaselineRow> baseline;
    std::vector<MetricsReport> reports;
};

// Named batteries: "lemmas" runs the labeled-set and distance checks over
// a prime-arc-count family, "idleness" fills the comparison table,
// "discrepancy" collects window-spread curves, "baseline" races the
// dynamics against independent random walks. An empty family selects each
// suite's default instances. Unknown names throw.
SuiteResult run_suite(const std::string& name, const FamilySpec& family,
                      const PipelineCaps& caps = {}, int workers = 0);

// Random-walk comparison on prime cycles; horizon = horizon_factor * m^2.
std::vector<BaselineRow> baseline_rows(const std::vector<std::int64_t>& node_counts,
                                       std::int64_t k, std::int64_t horizon_factor,
                                       std::int64_t trials, std::uint64_t seed,
                                       int workers = 0);

// Full metrics bundle for one prepared instance, including the reported
// bound ratios.
MetricsReport build_metrics_report(const Pipeline& pl, const PipelineCaps& caps = {});

// Runs body(0..count-1) on a small thread pool; workers <= 0 picks the
// hardware count. The first exception is rethrown after all workers join.
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& body);

}  // namespace rotorlab
