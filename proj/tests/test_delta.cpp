#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/delta.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/metrics.hpp"
#include "rotorlab/rr_engine.hpp"

using namespace rotorlab;

namespace {

struct Extracted {
    Graph g;
    LoadTrace trace;
    Circulation c;
};

Extracted extract(const std::string& spec, std::int64_t k, std::uint64_t seed) {
    Graph g = generate(spec);
    const RRState start = make_state_random(g, k, seed);
    LoadTrace trace = run_until_recurrent(g, start);
    Circulation c = extract_circulation(g, trace);
    return {std::move(g), std::move(trace), std::move(c)};
}

// Reference diameter of the vertex-time graph, built literally from its
// definition: nodes (v, s) in V x Z_L, one undirected edge per circulation
// fragment. Cubic in the state count, only for tiny inputs.
std::int64_t naive_gphi_diameter(const Graph& g, const Circulation& c) {
    const std::int64_t L = c.shift_modulus(1'000'000);
    const std::int64_t nodes = g.node_count() * L;
    std::vector<std::vector<std::int64_t>> adj(nodes);
    auto id = [&](NodeId v, std::int64_t s) { return v * L + ((s % L) + L) % L; };
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        ArcId cur = e;
        for (std::int64_t t = 0; t < L; ++t) {
            // fragment of t + 1 arcs from pred(e) to succ(cur) shifts by t
            for (std::int64_t s = 0; s < L; ++s) {
                const std::int64_t u = id(g.pred(e), s);
                const std::int64_t w = id(g.succ(cur), s + t);
                adj[u].push_back(w);
                adj[w].push_back(u);
            }
            cur = c.phi[cur];
        }
    }
    std::int64_t diam = 0;
    for (std::int64_t s0 = 0; s0 < nodes; ++s0) {
        std::vector<std::int64_t> dist(nodes, -1);
        std::deque<std::int64_t> q{s0};
        dist[s0] = 0;
        while (!q.empty()) {
            const std::int64_t u = q.front();
            q.pop_front();
            for (std::int64_t w : adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        for (std::int64_t d : dist) {
            if (d < 0) return -1; // disconnected, caller treats as failure
            diam = std::max(diam, d);
        }
    }
    return diam;
}

} // namespace

TEST_CASE("triangle distances satisfy every axiom exhaustively") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    const DeltaTable table = DeltaTable::build(g, c);
    CHECK(table.modulus() == 6);
    CHECK(table.diag_max(0) == 0);
    const DeltaAxiomReport report = check_delta_axioms(g, c, table, 7);
    CHECK(report.zero_diagonal);
    CHECK(report.circulation_step);
    CHECK(report.shared_tail);
    CHECK(report.symmetry);
    CHECK(report.triangle);
    CHECK(report.all());
    CHECK(report.symmetry_checked > 0);
    CHECK(report.triangle_checked > 0);

    // exhaustive triangle inequality on the full 6x6x6 state space
    const std::int64_t L = table.modulus();
    for (ArcId e1 = 0; e1 < g.arc_count(); ++e1) {
        for (ArcId e2 = 0; e2 < g.arc_count(); ++e2) {
            for (ArcId e3 = 0; e3 < g.arc_count(); ++e3) {
                for (std::int64_t x = 0; x < L; ++x) {
                    for (std::int64_t y = 0; y < L; ++y) {
                        CHECK(table.value(e1, e3, x + y) <=
                              delta_sat_add(table.value(e1, e2, x), table.value(e2, e3, y)));
                    }
                }
            }
        }
    }
}

TEST_CASE("observed window spreads never exceed the machine distances") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    const DeltaTable table = DeltaTable::build(g, c);
    const EmpiricalDeltaTable emp = EmpiricalDeltaTable::build(trace, c);
    const std::int64_t L = table.modulus();
    for (ArcId e1 = 0; e1 < g.arc_count(); ++e1) {
        for (ArcId e2 = 0; e2 < g.arc_count(); ++e2) {
            for (std::int64_t x = 0; x < L; ++x) {
                const std::int32_t machine = table.value(e1, e2, x);
                if (machine == DeltaTable::kUnreachable) continue;
                CHECK(emp.value(e1, e2, x) <= machine);
            }
        }
    }
}

TEST_CASE("advancing the source arc rotates the shift coordinate") {
    const auto [g, trace, c] = extract("cycle:n=5", 1, 2);
    const DeltaTable table = DeltaTable::build(g, c);
    const std::int64_t L = table.modulus();
    for (ArcId e1 = 0; e1 < g.arc_count(); ++e1) {
        for (ArcId e2 = 0; e2 < g.arc_count(); ++e2) {
            for (std::int64_t x = 0; x < L; ++x) {
                // one free circulation step on the source absorbs one shift
                CHECK(table.value(c.phi[e1], e2, x) == table.value(e1, e2, x + 1));
            }
        }
    }
}

TEST_CASE("bipartite parity splits the reachable offsets") {
    const auto [g, trace, c] = extract("cycle:n=4", 1, 1);
    const DeltaTable table = DeltaTable::build(g, c);
    const std::int64_t L = table.modulus();
    REQUIRE(g.is_bipartite());
    // on an even cycle, closed detours shift time by even amounts only
    for (std::int64_t x = 0; x < L; ++x) {
        if (x % 2 == 1) {
            CHECK(table.diag_max(x) == DeltaTable::kUnreachable);
        } else {
            CHECK(table.diag_max(x) != DeltaTable::kUnreachable);
        }
    }
    CHECK_THROWS_AS(gphi_diameter(g, c), BipartiteError);
}

TEST_CASE("trees are exempt from the bipartite refusal") {
    const auto [g, trace, c] = extract("path:n=3", 1, 1);
    REQUIRE(g.is_bipartite());
    REQUIRE(g.is_tree());
    CHECK(gphi_diameter(g, c) >= 0);
}

TEST_CASE("vertex-time diameter matches the brute-force reference") {
    {
        const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
        CHECK(gphi_diameter(g, c) == naive_gphi_diameter(g, c));
    }
    {
        const auto [g, trace, c] = extract("cycle:n=5", 1, 4);
        CHECK(gphi_diameter(g, c) == naive_gphi_diameter(g, c));
    }
}

TEST_CASE("reconstructed walks replay to the requested length class") {
    // cycle with one loop: m = 7 arcs, coprime token count keeps one orbit
    const auto [g, trace, c] = extract("looped_cycle:n=3", 1, 1);
    REQUIRE(c.cycle_count() == 1);
    const DeltaTable table = DeltaTable::build(g, c);
    const std::int64_t m = g.arc_count();
    const NodeId v = 0;
    for (std::int64_t l = 0; l < m; ++l) {
        std::int32_t best = DeltaTable::kUnreachable;
        for (ArcId e : g.ports(v)) {
            for (ArcId f : g.ports(v)) {
                best = std::min(best, table.value(e, f, l));
            }
        }
        REQUIRE(best != DeltaTable::kUnreachable);
        const Walk w = reconstruct_walk(g, c, v, l);
        CHECK(w.base == v);
        CHECK(w.residue == ((l % m) + m) % m);
        CHECK(static_cast<std::int64_t>(w.fragments.size()) <= best + 1);
        const std::vector<ArcId> arcs = replay_walk(g, c, w);
        CHECK(static_cast<std::int64_t>(arcs.size()) % m == w.residue);
        if (!arcs.empty()) {
            CHECK(g.pred(arcs.front()) == v);
            CHECK(g.succ(arcs.back()) == v);
        }
    }
}

TEST_CASE("a zero residue walk is one full circuit") {
    const auto [g, trace, c] = extract("looped_cycle:n=3", 1, 1);
    const Walk w = reconstruct_walk(g, c, 1, 0);
    REQUIRE(w.fragments.size() == 1);
    CHECK(w.fragments[0].length == g.arc_count());
    const std::vector<ArcId> arcs = replay_walk(g, c, w);
    CHECK(static_cast<std::int64_t>(arcs.size()) == g.arc_count());
}

TEST_CASE("distance construction respects its caps") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    DeltaCaps caps;
    caps.shift_cap = 1;
    CHECK_THROWS_AS(DeltaTable::build(g, c, caps), CapError);
    DeltaCaps tight;
    tight.state_cap = 1;
    CHECK_THROWS_AS(DeltaTable::build(g, c, tight), CapError);
}
