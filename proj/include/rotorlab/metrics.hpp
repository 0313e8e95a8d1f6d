#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/rational.hpp"
#include "rotorlab/rr_engine.hpp"

namespace rotorlab {

// Number of traversals of e during steps [t, t + dt), exact; t extends
// periodically in both directions, dt may span many periods.
std::int64_t cumulated_load(const LoadTrace& trace, ArcId e, std::int64_t t, std::int64_t dt);

// Largest |window sum at e1 minus window sum at e2 started t later|, over
// window starts in one period and window lengths from 0 to one period.
// Longer windows add whole periods, which contribute the same total to every
// arc, so this range already realizes the supremum.
std::int64_t empirical_delta(const LoadTrace& trace, ArcId e1, ArcId e2, std::int64_t t);

// One value per entry of ts, sharing the column prefix work across offsets.
std::vector<std::int64_t> empirical_delta_many(const LoadTrace& trace, ArcId e1, ArcId e2,
                                               const std::vector<std::int64_t>& ts);

struct IdlenessReport {
    static constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> per_arc;  // largest wait for the next traversal
    bool all_visited = false;
    std::int64_t max_gap = kNever;  // kNever when some arc is never traversed
};

// Exact periodic gap analysis of the recurrent window; the long-run value
// equals the in-period maximum because the trace repeats exactly.
IdlenessReport idleness(const LoadTrace& trace);

// Largest spread between two arcs' window sums over a common window of
// length dt, maximized over window starts.
std::int64_t cumulated_discrepancy(const LoadTrace& trace, std::int64_t dt);

struct TimeAverageDeviation {
    Rational deviation;   // max over e, t of |window sum - tokens*T/arcs|
    Rational normalized;  // deviation / T
};

TimeAverageDeviation time_average_deviation(const LoadTrace& trace, std::int64_t T);

// Minimal r such that the load rows repeat with period r. In a recurrent
// trace this always equals the state period: any send that is not a whole
// multiple of the degree pins its pointer, and sends that are whole
// multiples leave the pointer where it was. Computed independently so the
// equality stays checkable.
std::int64_t load_period(const LoadTrace& trace);

// Bulk empirical deltas. Columns along one orbit are shifts of the orbit
// representative's column, and each representative column has a small
// period, so the full (e1, e2, x) table collapses to one short row per
// ordered orbit pair.
class EmpiricalDeltaTable {
public:
    static EmpiricalDeltaTable build(const LoadTrace& trace, const Circulation& c);

    std::int64_t value(ArcId e1, ArcId e2, std::int64_t x) const;
    std::int64_t diag_max(std::int64_t x) const;  // max over e of value(e, e, x)
    std::int64_t cycle_count() const { return g_; }
    std::int64_t column_period(std::int64_t cycle) const { return q_.at(static_cast<size_t>(cycle)); }

private:
    std::int64_t g_ = 0;
    std::vector<std::int64_t> q_;  // per-orbit column period
    std::vector<std::int32_t> cycle_of_;
    std::vector<std::int32_t> pos_;
    std::vector<std::vector<std::int64_t>> table_;  // [i*g+j], length gcd(q_i, q_j)
};

// Independent walkers, each stepping along a uniformly random outgoing arc.
// Per trial: the largest observed gap between consecutive traversals of any
// arc, censoring at both horizon boundaries, so an arc that is never
// traversed contributes the whole horizon. Deterministic per seed; trials
// draw from independent streams.
std::vector<std::int64_t> random_walk_baseline(const Graph& g, std::int64_t k, std::int64_t horizon,
                                               std::int64_t trials, std::uint64_t seed);

struct MetricsReport {
    std::string instance;
    std::int64_t nodes = 0;
    std::int64_t arcs = 0;
    std::int64_t tokens = 0;
    std::int64_t cycles = 0;
    std::int64_t eta = 0;
    std::int64_t preperiod = 0;
    std::int64_t period = 0;
    std::int64_t load_period = 0;
    std::vector<std::int64_t> idleness_per_arc;
    bool all_arcs_visited = false;
    std::int64_t idleness = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> cumulated_discrepancy;  // (dt, value)
    std::vector<std::pair<std::int64_t, Rational>> time_avg_deviation;         // (T, value)
    std::int64_t empirical_delta_diag_max = 0;
    std::vector<std::pair<std::string, double>> bound_ratios;  // measured / stated bound
};

}  // namespace rotorlab
