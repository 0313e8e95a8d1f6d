#pragma once

#include <cstdint>
#include <vector>

#include "rotorlab/graph.hpp"

namespace rotorlab {

// Full configuration of the dynamics: one rotor pointer per node (an index
// into that node's port order) and one token count per node.
struct RRState {
    std::vector<int> pointers;
    std::vector<std::int64_t> loads;
    bool operator==(const RRState&) const = default;
};

RRState make_state(const Graph& g, const std::vector<std::int64_t>& loads,
                   const std::vector<int>& pointers);
// k tokens dropped independently and uniformly on nodes; pointers uniform.
RRState make_state_random(const Graph& g, std::int64_t k, std::uint64_t seed);

std::int64_t total_tokens(const RRState& s);

// One synchronous step. Every node with l tokens sends them along l
// consecutive ports starting at its pointer, which then advances by l.
// All sent tokens arrive at their arc heads within the same step.
// arc_loads receives the number of tokens sent along each arc.
void rr_step(const Graph& g, RRState& s, std::vector<std::int64_t>& arc_loads);

// m^4 * diam^2 + m * diam * log2(k + 1), saturating. Recurrence is always
// reached within a constant multiple of this.
std::int64_t structural_step_bound(const Graph& g, std::int64_t k);

struct RunBudget {
    // -1 selects 10 * structural_step_bound, clamped to max_steps_cap.
    std::int64_t max_steps = -1;
    std::int64_t max_steps_cap = 10'000'000;
    // Distinct hashed states kept before switching to Brent cycle finding.
    std::int64_t state_map_cap = 1'000'000;
};

// Largest period * arc_count product kept in memory. Multi-orbit instances
// can have periods up to the lcm of the orbit lengths, which is unbounded
// in m, so the matrix size needs an explicit cap.
inline constexpr std::int64_t kMaxTraceEntries = 25'000'000;

// Arc-load history of one full period of the recurrent regime.
struct LoadTrace {
    std::int64_t preperiod = 0; // first step index whose state recurs
    std::int64_t period = 0;
    std::int64_t token_count = 0;
    ArcId arc_count = 0;
    RRState start_state; // state at t = preperiod
    // period x arc_count row-major; row i holds the loads sent during
    // absolute step preperiod + i. Element type is narrow on purpose:
    // a row sums to token_count, which run_until_recurrent bounds.
    std::vector<std::int32_t> loads;

    // t is an offset into the recurrent window and wraps modulo period
    // (negative offsets wrap too); offset i is absolute step preperiod + i.
    std::int64_t load_at(std::int64_t t, ArcId e) const;
    // Sum of one column over a full period.
    std::int64_t period_total(ArcId e) const;
};

// Simulates until some state repeats, then reports the exact preperiod,
// the exact minimal period, and one period of arc loads. Detection hashes
// full states and falls back to Brent cycle finding past state_map_cap;
// every candidate is confirmed by whole-state comparison, so hash
// collisions cannot produce a wrong answer.
LoadTrace run_until_recurrent(const Graph& g, const RRState& start,
                              const RunBudget& budget = {});

} // namespace rotorlab
