#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/graph.hpp"
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

} // namespace

TEST_CASE("one token on a triangle yields a single six-arc orbit") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    REQUIRE(c.cycle_count() == 1);
    CHECK(c.cycle_length(0) == 6);
    CHECK(c.cycle_tokens == std::vector<std::int64_t>{1});
    CHECK(c.token_count == 1);
    CHECK_NOTHROW(check_circulation(g, trace, c));
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        CHECK(g.pred(c.phi[e]) == g.succ(e));
        CHECK(c.phi_inv[c.phi[e]] == e);
        CHECK(c.advance(e, 1) == c.phi[e]);
        CHECK(c.advance(e, 6) == e);
        CHECK(c.advance(e, -1) == c.phi_inv[e]);
    }
    CHECK(c.shift_modulus(1'000'000) == 6);
    CHECK(max_label_modulus(c) == 6);
}

TEST_CASE("orbits partition the arcs and carry exact token shares") {
    const auto [g, trace, c] = extract("cycle:n=4", 2, 1);
    std::vector<int> seen(g.arc_count(), 0);
    std::int64_t total_len = 0;
    for (int i = 0; i < c.cycle_count(); ++i) {
        total_len += c.cycle_length(i);
        for (ArcId e : c.cycles[i]) {
            CHECK(c.cycle_of[e] == i);
            ++seen[e];
        }
        // tokens per orbit are proportional to orbit length, exactly
        CHECK(c.cycle_tokens[i] * g.arc_count() == c.token_count * c.cycle_length(i));
    }
    CHECK(total_len == g.arc_count());
    CHECK(std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; }));
    std::int64_t gcd_len = 0;
    for (int i = 0; i < c.cycle_count(); ++i) gcd_len = std::gcd(gcd_len, c.cycle_length(i));
    // exact token shares cap the orbit count at gcd(k, m) and force every
    // orbit length to be a multiple of m / gcd(k, m)
    const std::int64_t gk = std::gcd<std::int64_t>(2, 8);
    CHECK(c.cycle_count() <= gk);
    for (int i = 0; i < c.cycle_count(); ++i) {
        CHECK(c.cycle_length(i) % (g.arc_count() / gk) == 0);
    }
    CHECK(max_label_modulus(c) == gcd_len);
    // positions count phi steps from the orbit head
    for (int i = 0; i < c.cycle_count(); ++i) {
        const ArcId head = c.cycles[i].front();
        CHECK(c.pos_in_cycle[head] == 0);
        for (std::int64_t s = 0; s < c.cycle_length(i); ++s) {
            CHECK(c.pos_in_cycle[c.advance(head, s)] == s);
        }
    }
}

TEST_CASE("labelings step by one along the orbit") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    for (std::int64_t eta : {6, 3, 2, 1}) {
        const Labeling l = make_labeling(c, eta);
        CHECK(l.eta == eta);
        for (ArcId e = 0; e < g.arc_count(); ++e) {
            CHECK(l.lambda[c.phi[e]] == (l.lambda[e] + 1) % eta);
        }
    }
    // 4 does not divide the orbit length 6
    CHECK_THROWS_AS(make_labeling(c, 4), Error);
    CHECK_THROWS_AS(make_labeling(c, 0), Error);
}

TEST_CASE("per-orbit shifts rotate the labels") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    const Labeling base = make_labeling(c, 6);
    const Labeling shifted = make_labeling(c, 6, {2});
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        CHECK(shifted.lambda[e] == (base.lambda[e] + 2) % 6);
    }
}

TEST_CASE("the intersection set matches a direct recomputation") {
    const auto [g, trace, c] = extract("cycle:n=5", 2, 3);
    const Labeling l = make_labeling(c, max_label_modulus(c));
    const IntersectionSet a = intersection_set(g, l);
    CHECK(a.eta == l.eta);
    CHECK(a.contains(0));

    std::set<std::int64_t> direct;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (ArcId e1 : g.ports(v)) {
            for (ArcId e2 : g.ports(v)) {
                const std::int64_t d = ((l.lambda[e1] - l.lambda[e2]) % a.eta + a.eta) % a.eta;
                direct.insert(d);
            }
        }
    }
    const std::vector<std::int64_t> vals = a.values();
    CHECK(std::vector<std::int64_t>(direct.begin(), direct.end()) == vals);
    for (std::int64_t x : vals) {
        CHECK(a.contains((a.eta - x) % a.eta)); // symmetric by construction
    }
}

TEST_CASE("the shift modulus saturates at its cap") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    CHECK_THROWS_AS(c.shift_modulus(5), CapError);
}

TEST_CASE("a single orbit makes the orbit graph a point") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    const Labeling l = make_labeling(c, max_label_modulus(c));
    const CycleGraphs cg = cycle_graphs(g, c, l);
    CHECK(cg.g == 1);
    CHECK(cg.diameter() == 0);
    CHECK(cg.diameter_label() == 0);
}

TEST_CASE("shifted labelings connect the label-respecting orbit graph") {
    // two tokens on an eight-node cycle often split into several orbits
    const auto [g, trace, c] = extract("cycle:n=8", 4, 5);
    const Labeling l = make_labeling(c, max_label_modulus(c));
    const CycleGraphs before = cycle_graphs(g, c, l);
    REQUIRE(before.diameter() >= 0); // orbit graph itself is connected
    const Labeling fixed = shift_labeling(g, c, l);
    const CycleGraphs after = cycle_graphs(g, c, fixed);
    CHECK(after.diameter_label() >= 0);
    CHECK(after.diameter_label() <= 2 * after.diameter());
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        CHECK(fixed.lambda[c.phi[e]] == (fixed.lambda[e] + 1) % fixed.eta);
    }
}

TEST_CASE("extraction satisfies the one-step load shift on a busy grid") {
    const auto [g, trace, c] = extract("grid:rows=3,cols=3", 9, 2);
    CHECK_NOTHROW(check_circulation(g, trace, c));
    for (std::int64_t t = 0; t < trace.period; ++t) {
        for (ArcId e = 0; e < g.arc_count(); ++e) {
            CHECK(trace.load_at(t, e) == trace.load_at(t + 1, c.phi[e]));
        }
    }
}
