#include "rotorlab/metrics.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "rotorlab/errors.hpp"
#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

std::int64_t reduce(std::int64_t x, std::int64_t p) {
    x %= p;
    if (x < 0) x += p;
    return x;
}

struct Prefix {
    std::int64_t p = 0;
    ArcId m = 0;
    std::int64_t tokens = 0;
    std::vector<std::vector<std::int64_t>> s;  // per arc, sums of the first 0..p rows
    bool uniform = false;  // every arc's period total equals tokens * p / m

    std::int64_t at(ArcId e, std::int64_t x) const {
        const auto& se = s[static_cast<size_t>(e)];
        return (x / p) * se[static_cast<size_t>(p)] + se[static_cast<size_t>(x % p)];
    }
};

// arcs empty builds every column; otherwise only the listed ones (the
// uniformity flag is then left unset and must not be consulted).
Prefix build_prefix(const LoadTrace& trace, const std::vector<ArcId>& arcs = {}) {
    Prefix pf;
    pf.p = trace.period;
    pf.m = trace.arc_count;
    pf.tokens = trace.token_count;
    pf.s.assign(static_cast<size_t>(pf.m), {});
    std::vector<ArcId> wanted = arcs;
    if (wanted.empty()) {
        wanted.resize(static_cast<size_t>(pf.m));
        for (ArcId e = 0; e < pf.m; ++e) wanted[static_cast<size_t>(e)] = e;
    }
    for (ArcId e : wanted) {
        auto& se = pf.s[static_cast<size_t>(e)];
        if (!se.empty()) continue;
        se.assign(static_cast<size_t>(pf.p) + 1, 0);
        for (std::int64_t i = 0; i < pf.p; ++i) {
            se[static_cast<size_t>(i) + 1] = se[static_cast<size_t>(i)] + trace.load_at(i, e);
        }
    }
    if (arcs.empty()) {
        pf.uniform = true;
        for (ArcId e = 0; e < pf.m; ++e) {
            if (pf.m * pf.s[static_cast<size_t>(e)][static_cast<size_t>(pf.p)] != pf.tokens * pf.p) {
                pf.uniform = false;
                break;
            }
        }
    }
    return pf;
}

// max over a in [0, p), b in [a, a+p] of |F(b) - F(a)| with
// F(x) = S_{e1}(x) - S_{e2}(x + t), via sliding window extrema.
std::int64_t delta_scan(const Prefix& pf, ArcId e1, ArcId e2, std::int64_t t) {
    const std::int64_t p = pf.p;
    t = reduce(t, p);
    std::vector<std::int64_t> f(static_cast<size_t>(2 * p) + 1);
    for (std::int64_t x = 0; x <= 2 * p; ++x) {
        f[static_cast<size_t>(x)] = pf.at(e1, x) - pf.at(e2, x + t);
    }
    std::deque<std::int64_t> qmax, qmin;
    const auto push = [&](std::int64_t idx) {
        while (!qmax.empty() && f[static_cast<size_t>(qmax.back())] <= f[static_cast<size_t>(idx)]) {
            qmax.pop_back();
        }
        qmax.push_back(idx);
        while (!qmin.empty() && f[static_cast<size_t>(qmin.back())] >= f[static_cast<size_t>(idx)]) {
            qmin.pop_back();
        }
        qmin.push_back(idx);
    };
    for (std::int64_t b = 0; b <= p; ++b) push(b);
    std::int64_t best = 0;
    for (std::int64_t a = 0; a < p; ++a) {
        while (qmax.front() < a) qmax.pop_front();
        while (qmin.front() < a) qmin.pop_front();
        const std::int64_t fa = f[static_cast<size_t>(a)];
        best = std::max({best, f[static_cast<size_t>(qmax.front())] - fa,
                         fa - f[static_cast<size_t>(qmin.front())]});
        if (a + p + 1 <= 2 * p) push(a + p + 1);
    }
    return best;
}

void check_arc(const LoadTrace& trace, ArcId e) {
    if (e < 0 || e >= trace.arc_count) throw Error("arc id out of range");
}

}  // namespace

std::int64_t cumulated_load(const LoadTrace& trace, ArcId e, std::int64_t t, std::int64_t dt) {
    if (dt < 0) throw Error("window length must be nonnegative");
    check_arc(trace, e);
    const std::int64_t p = trace.period;
    std::vector<std::int64_t> s(static_cast<size_t>(p) + 1, 0);
    for (std::int64_t i = 0; i < p; ++i) {
        s[static_cast<size_t>(i) + 1] = s[static_cast<size_t>(i)] + trace.load_at(i, e);
    }
    const auto at = [&](std::int64_t x) {
        return (x / p) * s[static_cast<size_t>(p)] + s[static_cast<size_t>(x % p)];
    };
    t = reduce(t, p);
    return at(t + dt) - at(t);
}

std::int64_t empirical_delta(const LoadTrace& trace, ArcId e1, ArcId e2, std::int64_t t) {
    check_arc(trace, e1);
    check_arc(trace, e2);
    return delta_scan(build_prefix(trace, {e1, e2}), e1, e2, t);
}

std::vector<std::int64_t> empirical_delta_many(const LoadTrace& trace, ArcId e1, ArcId e2,
                                               const std::vector<std::int64_t>& ts) {
    check_arc(trace, e1);
    check_arc(trace, e2);
    const Prefix pf = build_prefix(trace, {e1, e2});
    std::vector<std::int64_t> out(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) out[i] = delta_scan(pf, e1, e2, ts[i]);
    return out;
}

IdlenessReport idleness(const LoadTrace& trace) {
    const std::int64_t p = trace.period;
    const ArcId m = trace.arc_count;
    IdlenessReport rep;
    rep.per_arc.assign(static_cast<size_t>(m), IdlenessReport::kNever);
    rep.all_visited = true;
    std::int64_t worst = 0;
    std::vector<std::int64_t> visits;
    for (ArcId e = 0; e < m; ++e) {
        visits.clear();
        for (std::int64_t t = 0; t < p; ++t) {
            if (trace.load_at(t, e) > 0) visits.push_back(t);
        }
        if (visits.empty()) {
            rep.all_visited = false;
            continue;
        }
        std::int64_t gap = visits.front() + p - visits.back();  // wraparound gap
        for (size_t i = 1; i < visits.size(); ++i) {
            gap = std::max(gap, visits[i] - visits[i - 1]);
        }
        rep.per_arc[static_cast<size_t>(e)] = gap;
        worst = std::max(worst, gap);
    }
    if (rep.all_visited) rep.max_gap = worst;
    return rep;
}

std::int64_t cumulated_discrepancy(const LoadTrace& trace, std::int64_t dt) {
    if (dt < 0) throw Error("window length must be nonnegative");
    const Prefix pf = build_prefix(trace);
    const std::int64_t p = pf.p;
    std::int64_t r = dt;
    if (dt > p) {
        // whole periods add the same amount to every arc, so they cancel in
        // every pairwise difference
        if (!pf.uniform) throw Error("period totals differ across arcs; cannot reduce the window");
        r = dt % p;
    }
    std::int64_t best = 0;
    for (std::int64_t t = 0; t < p; ++t) {
        std::int64_t mx = std::numeric_limits<std::int64_t>::min();
        std::int64_t mn = std::numeric_limits<std::int64_t>::max();
        for (ArcId e = 0; e < pf.m; ++e) {
            const std::int64_t c = pf.at(e, t + r) - pf.at(e, t);
            mx = std::max(mx, c);
            mn = std::min(mn, c);
        }
        best = std::max(best, mx - mn);
    }
    return best;
}

TimeAverageDeviation time_average_deviation(const LoadTrace& trace, std::int64_t T) {
    if (T < 1) throw Error("window length must be at least 1");
    const Prefix pf = build_prefix(trace);
    const std::int64_t p = pf.p;
    std::int64_t r = T;
    if (T > p) {
        if (!pf.uniform) throw Error("period totals differ across arcs; cannot reduce the window");
        r = T % p;
    }
    // |C - tokens*T/m| == |m*C - tokens*T| / m, and whole periods cancel
    std::int64_t best = 0;
    for (std::int64_t t = 0; t < p; ++t) {
        for (ArcId e = 0; e < pf.m; ++e) {
            const std::int64_t c = pf.at(e, t + r) - pf.at(e, t);
            best = std::max(best, std::abs(pf.m * c - pf.tokens * r));
        }
    }
    TimeAverageDeviation out;
    out.deviation = Rational::make(best, pf.m);
    out.normalized = Rational::make(best, pf.m * T);
    return out;
}

std::int64_t load_period(const LoadTrace& trace) {
    const std::int64_t p = trace.period;
    const ArcId m = trace.arc_count;
    for (std::int64_t d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        bool ok = true;
        for (std::int64_t t = 0; ok && t < p - d; ++t) {
            for (ArcId e = 0; e < m; ++e) {
                if (trace.load_at(t, e) != trace.load_at(t + d, e)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return d;
    }
    return p;
}

EmpiricalDeltaTable EmpiricalDeltaTable::build(const LoadTrace& trace, const Circulation& c) {
    const Prefix pf = build_prefix(trace);
    EmpiricalDeltaTable out;
    out.g_ = c.cycle_count();
    out.cycle_of_.assign(c.cycle_of.begin(), c.cycle_of.end());
    out.pos_.assign(c.pos_in_cycle.begin(), c.pos_in_cycle.end());

    const std::int64_t p = pf.p;
    out.q_.resize(static_cast<size_t>(out.g_));
    for (std::int64_t i = 0; i < out.g_; ++i) {
        const ArcId rep = c.cycles[static_cast<size_t>(i)].front();
        const std::int64_t len = static_cast<std::int64_t>(c.cycles[static_cast<size_t>(i)].size());
        // the orbit length is a period of the representative column, so the
        // minimal period divides gcd(len, p)
        const std::int64_t bound = std::gcd(len, p);
        std::int64_t found = 0;
        for (std::int64_t d = 1; d <= bound && found == 0; ++d) {
            if (bound % d != 0) continue;
            bool ok = true;
            for (std::int64_t t = 0; t < p; ++t) {
                if (trace.load_at(t, rep) != trace.load_at((t + d) % p, rep)) {
                    ok = false;
                    break;
                }
            }
            if (ok) found = d;
        }
        if (found == 0) throw Error("orbit column has no period dividing gcd(orbit, period)");
        out.q_[static_cast<size_t>(i)] = found;
    }

    std::int64_t scan_work = 0;
    for (std::int64_t i = 0; i < out.g_; ++i) {
        for (std::int64_t j = 0; j < out.g_; ++j) {
            scan_work += std::gcd(out.q_[static_cast<size_t>(i)], out.q_[static_cast<size_t>(j)]) * (2 * p);
        }
    }
    if (scan_work > 2'000'000'000) {
        throw CapError("empirical distance table needs " + std::to_string(scan_work) +
                       " column scans");
    }

    out.table_.resize(static_cast<size_t>(out.g_ * out.g_));
    for (std::int64_t i = 0; i < out.g_; ++i) {
        for (std::int64_t j = 0; j < out.g_; ++j) {
            const std::int64_t q = std::gcd(out.q_[static_cast<size_t>(i)], out.q_[static_cast<size_t>(j)]);
            auto& row = out.table_[static_cast<size_t>(i * out.g_ + j)];
            row.resize(static_cast<size_t>(q));
            const ArcId ri = c.cycles[static_cast<size_t>(i)].front();
            const ArcId rj = c.cycles[static_cast<size_t>(j)].front();
            for (std::int64_t y = 0; y < q; ++y) {
                row[static_cast<size_t>(y)] = delta_scan(pf, ri, rj, y);
            }
        }
    }
    return out;
}

std::int64_t EmpiricalDeltaTable::value(ArcId e1, ArcId e2, std::int64_t x) const {
    const std::int64_t i = cycle_of_[static_cast<size_t>(e1)];
    const std::int64_t j = cycle_of_[static_cast<size_t>(e2)];
    const auto& row = table_[static_cast<size_t>(i * g_ + j)];
    const std::int64_t q = static_cast<std::int64_t>(row.size());
    // shifting an arc along its orbit shifts its column, which folds into x
    const std::int64_t y = reduce(x + pos_[static_cast<size_t>(e1)] - pos_[static_cast<size_t>(e2)], q);
    return row[static_cast<size_t>(y)];
}

std::int64_t EmpiricalDeltaTable::diag_max(std::int64_t x) const {
    std::int64_t best = 0;
    for (std::int64_t i = 0; i < g_; ++i) {
        const auto& row = table_[static_cast<size_t>(i * g_ + i)];
        best = std::max(best, row[static_cast<size_t>(reduce(x, static_cast<std::int64_t>(row.size())))]);
    }
    return best;
}

std::vector<std::int64_t> random_walk_baseline(const Graph& g, std::int64_t k, std::int64_t horizon,
                                               std::int64_t trials, std::uint64_t seed) {
    if (k < 1 || horizon < 1 || trials < 1) {
        throw Error("baseline needs walkers, horizon and trials all at least 1");
    }
    std::vector<std::int64_t> out;
    out.reserve(static_cast<size_t>(trials));
    std::vector<NodeId> at(static_cast<size_t>(k));
    std::vector<std::int64_t> last(static_cast<size_t>(g.arc_count()));
    std::vector<std::int64_t> best(static_cast<size_t>(g.arc_count()));
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        auto rng = seeded_rng(seed, 0x77616c6b00000000ULL + static_cast<std::uint64_t>(trial));
        for (auto& v : at) {
            v = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(g.node_count())));
        }
        std::fill(last.begin(), last.end(), 0);
        std::fill(best.begin(), best.end(), 0);
        for (std::int64_t t = 1; t <= horizon; ++t) {
            for (auto& v : at) {
                const auto& ports = g.ports(v);
                const ArcId a = ports[uniform_below(rng, ports.size())];
                best[static_cast<size_t>(a)] =
                    std::max(best[static_cast<size_t>(a)], t - last[static_cast<size_t>(a)]);
                last[static_cast<size_t>(a)] = t;
                v = g.succ(a);
            }
        }
        std::int64_t worst = 0;
        for (ArcId e = 0; e < g.arc_count(); ++e) {
            worst = std::max({worst, best[static_cast<size_t>(e)],
                              horizon - last[static_cast<size_t>(e)]});
        }
        out.push_back(worst);
    }
    return out;
}

}  // namespace rotorlab
