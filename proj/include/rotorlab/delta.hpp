#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/graph.hpp"

namespace rotorlab {

struct DeltaCaps {
    std::int64_t shift_cap = 1'000'000; // largest allowed shift modulus L
    std::int64_t state_cap = 1'000'000; // largest allowed arc x shift state space
};

// Minimal mismatch cost delta_x(e1, e2) over the state space
// (arc, shift mod L): following the circulation one step in either
// direction is free and changes the shift by +-1, hopping between arcs
// that leave a common vertex costs 1 and keeps the shift. Runs one
// zero-one BFS per orbit; lookups exploit that advancing the source arc
// along the circulation only rotates the shift coordinate.
class DeltaTable {
public:
    static constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

    static DeltaTable build(const Graph& g, const Circulation& c, const DeltaCaps& caps = {});

    std::int64_t modulus() const { return L_; }
    std::int32_t value(ArcId e1, ArcId e2, std::int64_t x) const;
    // max over arcs of value(e, e, x); kUnreachable wins if present
    std::int32_t diag_max(std::int64_t x) const;

private:
    std::int64_t L_ = 0;
    ArcId m_ = 0;
    std::vector<int> cycle_of_;
    std::vector<std::int64_t> pos_;
    std::vector<std::vector<std::int32_t>> dist_; // per orbit, arc*L + shift
};

// a + b with kUnreachable absorbing.
std::int32_t delta_sat_add(std::int32_t a, std::int32_t b);

struct DeltaAxiomReport {
    bool zero_diagonal = false;      // value(e, e, 0) == 0
    bool circulation_step = false;   // value(e, phi(e), 1) == 0
    bool shared_tail = false;        // value(e1, e2, 0) <= 1 when preds match
    bool symmetry = false;           // value(e1, e2, x) == value(e2, e1, -x)
    bool triangle = false;           // subadditive over intermediate stops
    std::int64_t symmetry_checked = 0;
    std::int64_t triangle_checked = 0;
    bool all() const {
        return zero_diagonal && circulation_step && shared_tail && symmetry && triangle;
    }
};

// Symmetry is checked exhaustively while m^2 * L stays within
// exhaustive_budget and on a deterministic sample otherwise; the triangle
// inequality is always sampled (triangle_samples tuples), plus
// exhaustively in tiny cases by the unit tests.
DeltaAxiomReport check_delta_axioms(const Graph& g, const Circulation& c,
                                    const DeltaTable& table, std::uint64_t seed,
                                    std::int64_t exhaustive_budget = 20'000'000,
                                    std::int64_t triangle_samples = 10'000);

// Exact diameter of the quotient of the vertex-time reachability graph on
// V x Z_L: nodes (v, t), and one edge linking (u, s) with (v, s + t)
// whenever some circulation fragment starting at u covers t + 1 arcs and
// ends at v. The quotient is faithful because following the circulation L
// steps is the identity. Bipartite non-tree inputs are refused.
std::int64_t gphi_diameter(const Graph& g, const Circulation& c, const DeltaCaps& caps = {});

// One contiguous stretch of the circulation: starting at arc `start`,
// follow phi `length` times (backwards when negative).
struct WalkFragment {
    ArcId start = -1;
    std::int64_t length = 0;
};

struct Walk {
    NodeId base = -1;
    std::int64_t residue = 0; // requested length class mod m
    std::vector<WalkFragment> fragments;
    std::int64_t total_length() const;
};

// Closed walk at v whose length is congruent to l mod m, assembled from
// as few circulation fragments as the shift distances allow (fragment
// count is at most value(e, e', l) + 1 over out-arcs of v). Requires a
// single-orbit circulation. When nonnegative is set, backward fragments
// are lifted by whole circuits, which preserves the length class.
Walk reconstruct_walk(const Graph& g, const Circulation& c, NodeId v, std::int64_t l,
                      const DeltaCaps& caps = {}, bool nonnegative = true);

// Expands a walk with nonnegative fragment lengths into its arc sequence
// and re-verifies closure and the length class; throws on any mismatch.
std::vector<ArcId> replay_walk(const Graph& g, const Circulation& c, const Walk& w);

} // namespace rotorlab
