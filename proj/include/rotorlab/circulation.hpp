#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rotorlab/graph.hpp"
#include "rotorlab/rr_engine.hpp"

namespace rotorlab {

// Arc bijection phi with pred(phi(e)) = succ(e) whose orbits partition the
// arcs into cycles, each carrying a fixed token count. Satisfies
// load(t, e) == load(t+1, phi(e)) for the trace it was extracted from.
struct Circulation {
    std::vector<ArcId> phi;
    std::vector<ArcId> phi_inv;
    std::vector<std::vector<ArcId>> cycles; // orbit arcs in phi order
    std::vector<int> cycle_of;              // arc -> orbit index
    std::vector<std::int64_t> pos_in_cycle; // steps from the orbit's first arc
    std::vector<std::int64_t> cycle_tokens; // tokens riding each orbit
    std::int64_t token_count = 0;

    int cycle_count() const { return static_cast<int>(cycles.size()); }
    std::int64_t cycle_length(int i) const {
        return static_cast<std::int64_t>(cycles[i].size());
    }
    // lcm of cycle lengths, the natural shift modulus; saturates at cap.
    std::int64_t shift_modulus(std::int64_t cap) const;

    ArcId advance(ArcId e, std::int64_t steps) const; // phi^steps(e)
};

// Recovers phi from a recurrent trace by matching, at every vertex, the
// incoming load columns (delayed one step) against the outgoing load
// columns. Within a group of identical columns, arcs pair up in port order.
// Throws CirculationError if some vertex admits no such matching.
Circulation extract_circulation(const Graph& g, const LoadTrace& trace);

// Full re-verification of a circulation against a trace; throws on failure.
void check_circulation(const Graph& g, const LoadTrace& trace, const Circulation& c);

// Labels with lambda(phi(e)) = lambda(e) + 1 (mod eta). Exists iff eta
// divides every cycle length.
struct Labeling {
    std::int64_t eta = 0;
    std::vector<std::int64_t> lambda;
};

// gcd of all cycle lengths, the largest valid eta.
std::int64_t max_label_modulus(const Circulation& c);

// shifts rotates each orbit's labels independently; empty means all zero.
Labeling make_labeling(const Circulation& c, std::int64_t eta,
                       const std::vector<std::int64_t>& shifts = {});

// Differences of labels over pairs of arcs leaving a common vertex.
struct IntersectionSet {
    std::int64_t eta = 0;
    std::vector<bool> member;
    std::vector<std::int64_t> values() const;
    bool contains(std::int64_t x) const;
};

IntersectionSet intersection_set(const Graph& g, const Labeling& l);

// Orbit adjacency: two cycles touch if they leave a common vertex; the
// label-respecting variant requires equal labels on such a pair of arcs.
struct CycleGraphs {
    int g = 0;
    std::vector<std::vector<char>> adj;        // shared vertex
    std::vector<std::vector<char>> adj_label;  // shared vertex with equal labels
    std::vector<std::vector<int>> dist;        // -1 when disconnected
    std::vector<std::vector<int>> dist_label;
    // witness arc pair (e_i, e_j) for each adjacent cycle pair, e_i in cycle i
    std::vector<std::vector<std::pair<ArcId, ArcId>>> witness;

    int diameter() const;       // -1 when disconnected
    int diameter_label() const; // -1 when disconnected
};

CycleGraphs cycle_graphs(const Graph& g, const Circulation& c, const Labeling& l);

// Rotates per-cycle label offsets so the label-respecting adjacency
// contains a spanning tree of the plain adjacency; afterwards the
// label-respecting orbit graph is connected and its diameter is at most
// twice the plain one.
Labeling shift_labeling(const Graph& g, const Circulation& c, const Labeling& l);

} // namespace rotorlab
