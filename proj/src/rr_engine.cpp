#include "rotorlab/rr_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "rotorlab/errors.hpp"
#include "rotorlab/rng.hpp"

namespace rotorlab {

RRState make_state(const Graph& g, const std::vector<std::int64_t>& loads,
                   const std::vector<int>& pointers) {
    if (static_cast<NodeId>(loads.size()) != g.node_count() ||
        static_cast<NodeId>(pointers.size()) != g.node_count()) {
        throw StateError("state vectors must have one entry per node");
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (loads[v] < 0) throw StateError("negative load at node " + std::to_string(v));
        if (pointers[v] < 0 || pointers[v] >= g.out_degree(v)) {
            throw StateError("pointer out of range at node " + std::to_string(v));
        }
    }
    return RRState{pointers, loads};
}

RRState make_state_random(const Graph& g, std::int64_t k, std::uint64_t seed) {
    if (k < 0) throw StateError("token count must be nonnegative");
    auto rng = seeded_rng(seed, 0x696e6974ULL);
    RRState s;
    s.loads.assign(g.node_count(), 0);
    s.pointers.assign(g.node_count(), 0);
    for (std::int64_t i = 0; i < k; ++i) {
        s.loads[uniform_below(rng, g.node_count())] += 1;
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        s.pointers[v] = static_cast<int>(uniform_below(rng, g.out_degree(v)));
    }
    return s;
}

std::int64_t total_tokens(const RRState& s) {
    return std::accumulate(s.loads.begin(), s.loads.end(), std::int64_t{0});
}

void rr_step(const Graph& g, RRState& s, std::vector<std::int64_t>& arc_loads) {
    arc_loads.assign(g.arc_count(), 0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::int64_t l = s.loads[v];
        if (l == 0) continue;
        const auto& ports = g.ports(v);
        const int d = static_cast<int>(ports.size());
        const std::int64_t whole = l / d;
        const int rest = static_cast<int>(l % d);
        if (whole > 0) {
            for (ArcId e : ports) arc_loads[e] += whole;
        }
        int ptr = s.pointers[v];
        for (int i = 0; i < rest; ++i) {
            arc_loads[ports[ptr]] += 1;
            ptr = (ptr + 1) % d;
        }
        s.pointers[v] = ptr; // advanced by l mod d
    }
    std::fill(s.loads.begin(), s.loads.end(), 0);
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        s.loads[g.succ(e)] += arc_loads[e];
    }
}

std::int64_t structural_step_bound(const Graph& g, std::int64_t k) {
    const long double m = static_cast<long double>(g.arc_count());
    const long double diam = static_cast<long double>(std::max(1, graph_diameter(g)));
    const long double bound =
        m * m * m * m * diam * diam + m * diam * std::log2(static_cast<long double>(k) + 1.0L);
    const long double cap = 1e18L;
    return static_cast<std::int64_t>(std::min(bound, cap));
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t state_hash(const RRState& s) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (int p : s.pointers) h = mix64(h ^ static_cast<std::uint64_t>(p));
    for (std::int64_t l : s.loads) h = mix64(h ^ static_cast<std::uint64_t>(l));
    return h;
}

struct Stepper {
    const Graph& g;
    std::vector<std::int64_t> scratch;
    explicit Stepper(const Graph& g_) : g(g_) {}
    void advance(RRState& s) { rr_step(g, s, scratch); }
    void advance(RRState& s, std::int64_t steps) {
        for (std::int64_t i = 0; i < steps; ++i) rr_step(g, s, scratch);
    }
};

[[noreturn]] void budget_exhausted(std::int64_t steps) {
    throw BudgetError("no recurrence within " + std::to_string(steps) + " simulated steps");
}

// Returns a multiple of the true period via Brent's algorithm; O(1) states.
std::int64_t brent_period(const Graph& g, const RRState& start, std::int64_t max_steps) {
    Stepper st(g);
    std::int64_t power = 1, lam = 1, spent = 0;
    RRState tortoise = start;
    RRState hare = start;
    st.advance(hare);
    ++spent;
    while (!(tortoise == hare)) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        st.advance(hare);
        ++lam;
        if (++spent > max_steps) budget_exhausted(spent);
    }
    return lam;
}

} // namespace

std::int64_t LoadTrace::load_at(std::int64_t t, ArcId e) const {
    std::int64_t r = t % period;
    if (r < 0) r += period;
    return loads[static_cast<size_t>(r) * arc_count + e];
}

std::int64_t LoadTrace::period_total(ArcId e) const {
    std::int64_t sum = 0;
    for (std::int64_t t = 0; t < period; ++t) {
        sum += loads[static_cast<size_t>(t) * arc_count + e];
    }
    return sum;
}

LoadTrace run_until_recurrent(const Graph& g, const RRState& start, const RunBudget& budget) {
    // validate by round-tripping through make_state
    make_state(g, start.loads, start.pointers);

    std::int64_t max_steps = budget.max_steps;
    if (max_steps < 0) {
        const std::int64_t structural = structural_step_bound(g, total_tokens(start));
        max_steps = structural > budget.max_steps_cap / 10 ? budget.max_steps_cap
                                                           : 10 * structural;
    }

    Stepper st(g);
    std::int64_t period_multiple = -1;

    // Phase 1: hash every visited state; confirm hits by replaying from the
    // start, so a hash collision only costs time.
    {
        std::unordered_map<std::uint64_t, std::int64_t> first_seen;
        RRState s = start;
        std::int64_t t = 0;
        first_seen.emplace(state_hash(s), 0);
        while (true) {
            if (t >= max_steps) {
                period_multiple = brent_period(g, start, max_steps);
                break;
            }
            st.advance(s);
            ++t;
            const std::uint64_t h = state_hash(s);
            auto it = first_seen.find(h);
            if (it != first_seen.end()) {
                RRState probe = start;
                st.advance(probe, it->second);
                if (probe == s) {
                    period_multiple = t - it->second;
                    break;
                }
                continue; // genuine collision, keep the earlier entry
            }
            if (static_cast<std::int64_t>(first_seen.size()) >= budget.state_map_cap) {
                period_multiple = brent_period(g, start, max_steps);
                break;
            }
            first_seen.emplace(h, t);
        }
    }

    // Phase 2: exact preperiod with two cursors a period-multiple apart.
    RRState slow = start;
    RRState fast = start;
    st.advance(fast, period_multiple);
    std::int64_t preperiod = 0;
    while (!(slow == fast)) {
        st.advance(slow);
        st.advance(fast);
        if (++preperiod > max_steps) budget_exhausted(preperiod);
    }

    // Phase 3: exact minimal period from the recurrent state.
    RRState cursor = slow;
    std::int64_t period = 0;
    do {
        st.advance(cursor);
        ++period;
    } while (!(cursor == slow) && period <= period_multiple);
    if (!(cursor == slow)) {
        throw BudgetError("period refinement failed"); // unreachable by construction
    }

    LoadTrace trace;
    trace.preperiod = preperiod;
    trace.period = period;
    trace.token_count = total_tokens(start);
    trace.arc_count = g.arc_count();
    trace.start_state = slow;
    const std::int64_t entries = period * g.arc_count();
    if (entries > kMaxTraceEntries) {
        throw BudgetError("recurrent window needs " + std::to_string(entries) +
                          " load entries, cap is " + std::to_string(kMaxTraceEntries));
    }
    if (trace.token_count > std::numeric_limits<std::int32_t>::max()) {
        throw BudgetError("token count does not fit the trace element type");
    }
    trace.loads.resize(static_cast<size_t>(entries));
    RRState run = slow;
    std::vector<std::int64_t> arc_loads;
    for (std::int64_t i = 0; i < period; ++i) {
        rr_step(g, run, arc_loads);
        std::transform(arc_loads.begin(), arc_loads.end(),
                       trace.loads.begin() + static_cast<size_t>(i) * g.arc_count(),
                       [](std::int64_t l) { return static_cast<std::int32_t>(l); });
    }
    if (!(run == slow)) {
        throw BudgetError("trace window does not close up"); // engine bug guard
    }
    return trace;
}

} // namespace rotorlab
