#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/metrics.hpp"
#include "rotorlab/rational.hpp"
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

// Window sum straight from the trace rows, quadratic on purpose.
std::int64_t slow_window(const LoadTrace& trace, ArcId e, std::int64_t t, std::int64_t dt) {
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < dt; ++i) sum += trace.load_at(t + i, e);
    return sum;
}

// Reference for the pairwise window spread: all starts in one period, all
// window lengths up to one period.
std::int64_t slow_delta(const LoadTrace& trace, ArcId e1, ArcId e2, std::int64_t t) {
    std::int64_t best = 0;
    for (std::int64_t tau = 0; tau < trace.period; ++tau) {
        for (std::int64_t dt = 0; dt <= trace.period; ++dt) {
            const std::int64_t d =
                slow_window(trace, e1, tau, dt) - slow_window(trace, e2, tau + t, dt);
            best = std::max(best, d < 0 ? -d : d);
        }
    }
    return best;
}

} // namespace

TEST_CASE("pairwise window spreads match a quadratic reference") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    REQUIRE(trace.period == 6);
    const std::vector<std::pair<ArcId, ArcId>> pairs = {{0, 0}, {0, 1}, {2, 5}};
    for (const auto& [e1, e2] : pairs) {
        for (std::int64_t t = 0; t < 3 * trace.period; ++t) {
            CHECK(empirical_delta(trace, e1, e2, t) == slow_delta(trace, e1, e2, t));
        }
    }
}

TEST_CASE("batched window spreads equal the one-offset calls") {
    const auto [g, trace, c] = extract("cycle:n=5", 2, 3);
    const std::vector<std::int64_t> ts = {0, 1, 2, 5, 7, 12};
    for (ArcId e1 : {0, 3}) {
        for (ArcId e2 : {0, 6}) {
            const auto many = empirical_delta_many(trace, e1, e2, ts);
            REQUIRE(many.size() == ts.size());
            for (size_t i = 0; i < ts.size(); ++i) {
                CHECK(many[i] == empirical_delta(trace, e1, e2, ts[i]));
            }
        }
    }
}

TEST_CASE("the bulk table agrees with the scalar spreads everywhere") {
    const auto [g, trace, c] = extract("cycle:n=5", 2, 3);
    const EmpiricalDeltaTable table = EmpiricalDeltaTable::build(trace, c);
    CHECK(table.cycle_count() == c.cycle_count());
    const std::int64_t L = c.shift_modulus(1'000'000);
    for (int i = 0; i < c.cycle_count(); ++i) {
        CHECK(table.column_period(i) > 0);
        CHECK(trace.period % table.column_period(i) == 0);
    }
    for (ArcId e1 = 0; e1 < g.arc_count(); ++e1) {
        for (ArcId e2 = 0; e2 < g.arc_count(); ++e2) {
            for (std::int64_t x = 0; x < L; ++x) {
                CHECK(table.value(e1, e2, x) == empirical_delta(trace, e1, e2, x));
            }
        }
    }
    for (std::int64_t x = 0; x < L; ++x) {
        std::int64_t diag = 0;
        for (ArcId e = 0; e < g.arc_count(); ++e) {
            diag = std::max(diag, empirical_delta(trace, e, e, x));
        }
        CHECK(table.diag_max(x) == diag);
    }
}

TEST_CASE("cumulated loads wrap and accumulate whole periods") {
    const auto [g, trace, c] = extract("cycle:n=5", 2, 3);
    const std::int64_t p = trace.period;
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        CHECK(cumulated_load(trace, e, 0, 0) == 0);
        CHECK(cumulated_load(trace, e, 3, p) == trace.period_total(e));
        CHECK(cumulated_load(trace, e, -3, 2) == cumulated_load(trace, e, p - 3, 2));
        CHECK(cumulated_load(trace, e, 1, 2 * p + 3) ==
              2 * trace.period_total(e) + cumulated_load(trace, e, 1, 3));
        CHECK(cumulated_load(trace, e, 2, 5) == slow_window(trace, e, 2, 5));
    }
}

TEST_CASE("single token discrepancy is one for unit windows and zero over a period") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    CHECK(cumulated_discrepancy(trace, 0) == 0);
    CHECK(cumulated_discrepancy(trace, 1) == 1);
    CHECK(cumulated_discrepancy(trace, trace.period) == 0);
}

TEST_CASE("load rows repeat exactly at the state period") {
    for (const auto& [spec, k] : std::vector<std::pair<std::string, std::int64_t>>{
             {"cycle:n=3", 1}, {"cycle:n=5", 2}, {"grid:rows=2,cols=3", 3}}) {
        const auto [g, trace, c] = extract(spec, k, 2);
        CHECK(load_period(trace) == trace.period);
    }
}

TEST_CASE("time averages deviate by five sixths at one step and vanish at the period") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    const TimeAverageDeviation one = time_average_deviation(trace, 1);
    CHECK(one.deviation == Rational::make(5, 6));
    CHECK(one.normalized == Rational::make(5, 6));
    const TimeAverageDeviation full = time_average_deviation(trace, trace.period);
    CHECK(full.deviation == Rational::make(0, 1));
    const TimeAverageDeviation twice = time_average_deviation(trace, 2 * trace.period);
    CHECK(twice.deviation == Rational::make(0, 1));
    const TimeAverageDeviation half = time_average_deviation(trace, 3);
    CHECK(half.normalized == Rational::make(half.deviation.num, half.deviation.den * 3));
}

TEST_CASE("idleness on the triangle is the full period for every arc") {
    const auto [g, trace, c] = extract("cycle:n=3", 1, 1);
    const IdlenessReport r = idleness(trace);
    CHECK(r.all_visited);
    CHECK(r.max_gap == 6);
    REQUIRE(r.per_arc.size() == 6);
    for (std::int64_t gap : r.per_arc) CHECK(gap == 6);
}

TEST_CASE("an arc missing from the recurrent window is reported as never visited") {
    LoadTrace trace;
    trace.preperiod = 0;
    trace.period = 2;
    trace.token_count = 1;
    trace.arc_count = 2;
    trace.loads = {1, 0, 1, 0}; // arc 1 never fires
    const IdlenessReport r = idleness(trace);
    CHECK_FALSE(r.all_visited);
    CHECK(r.max_gap == IdlenessReport::kNever);
    CHECK(r.per_arc[0] == 1);
    CHECK(r.per_arc[1] == IdlenessReport::kNever);
}

TEST_CASE("random walk gap baselines are deterministic per seed") {
    const Graph g = generate("cycle:n=11");
    const auto a = random_walk_baseline(g, 2, 500, 5, 9);
    const auto b = random_walk_baseline(g, 2, 500, 5, 9);
    CHECK(a == b);
    CHECK(a.size() == 5);
    for (std::int64_t gap : a) {
        CHECK(gap >= 1);
        CHECK(gap <= 500);
    }
    CHECK_THROWS_AS(random_walk_baseline(g, 0, 500, 5, 9), Error);
    CHECK_THROWS_AS(random_walk_baseline(g, 2, 500, 0, 9), Error);
}
