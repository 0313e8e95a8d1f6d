#include "rotorlab/delta.hpp"

#include <algorithm>
#include <deque>

#include "rotorlab/errors.hpp"
#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

std::int64_t machine_modulus(const Graph& g, const Circulation& c, const DeltaCaps& caps) {
    const std::int64_t L = c.shift_modulus(caps.shift_cap);
    if (static_cast<std::int64_t>(g.arc_count()) * L > caps.state_cap) {
        throw CapError("state space " + std::to_string(g.arc_count()) + " x " +
                       std::to_string(L) + " exceeds cap " + std::to_string(caps.state_cap));
    }
    return L;
}

// Zero-one BFS over (arc, shift) from the given zero-cost sources.
// parents records the predecessor state when requested.
std::vector<std::int32_t> machine_bfs(const Graph& g, const Circulation& c, std::int64_t L,
                                      const std::vector<std::int64_t>& sources,
                                      std::vector<std::int64_t>* parents) {
    const std::int64_t m = g.arc_count();
    std::vector<std::int32_t> dist(static_cast<size_t>(m) * L, DeltaTable::kUnreachable);
    if (parents) parents->assign(static_cast<size_t>(m) * L, -1);
    std::deque<std::int64_t> queue;
    for (std::int64_t s : sources) {
        if (dist[s] == 0) continue;
        dist[s] = 0;
        queue.push_back(s);
    }
    auto relax = [&](std::int64_t from, std::int64_t to, std::int32_t w) {
        if (delta_sat_add(dist[from], w) < dist[to]) {
            dist[to] = dist[from] + w;
            if (parents) (*parents)[to] = from;
            if (w == 0) queue.push_front(to);
            else queue.push_back(to);
        }
    };
    std::vector<char> settled(static_cast<size_t>(m) * L, 0);
    while (!queue.empty()) {
        const std::int64_t cur = queue.front();
        queue.pop_front();
        if (settled[cur]) continue;
        settled[cur] = 1;
        const ArcId e = static_cast<ArcId>(cur / L);
        const std::int64_t x = cur % L;
        relax(cur, static_cast<std::int64_t>(c.phi[e]) * L + (x + 1) % L, 0);
        relax(cur, static_cast<std::int64_t>(c.phi_inv[e]) * L + (x + L - 1) % L, 0);
        for (ArcId e2 : g.ports(g.pred(e))) {
            if (e2 != e) relax(cur, static_cast<std::int64_t>(e2) * L + x, 1);
        }
    }
    return dist;
}

} // namespace

std::int32_t delta_sat_add(std::int32_t a, std::int32_t b) {
    if (a == DeltaTable::kUnreachable || b == DeltaTable::kUnreachable) {
        return DeltaTable::kUnreachable;
    }
    return a + b;
}

DeltaTable DeltaTable::build(const Graph& g, const Circulation& c, const DeltaCaps& caps) {
    DeltaTable t;
    t.L_ = machine_modulus(g, c, caps);
    t.m_ = g.arc_count();
    t.cycle_of_ = c.cycle_of;
    t.pos_.assign(t.m_, 0);
    for (ArcId e = 0; e < t.m_; ++e) t.pos_[e] = c.pos_in_cycle[e];
    t.dist_.resize(c.cycle_count());
    for (int i = 0; i < c.cycle_count(); ++i) {
        const ArcId rep = c.cycles[i][0];
        t.dist_[i] = machine_bfs(g, c, t.L_, {static_cast<std::int64_t>(rep) * t.L_},
                                 nullptr);
    }
    return t;
}

std::int32_t DeltaTable::value(ArcId e1, ArcId e2, std::int64_t x) const {
    // moving the source along the circulation rotates the shift coordinate:
    // dist((phi^s(r), 0), (e2, x)) == dist((r, 0), (e2, x + s))
    std::int64_t shift = (x + pos_[e1]) % L_;
    if (shift < 0) shift += L_;
    return dist_[cycle_of_[e1]][static_cast<size_t>(e2) * L_ + shift];
}

std::int32_t DeltaTable::diag_max(std::int64_t x) const {
    std::int32_t worst = 0;
    for (ArcId e = 0; e < m_; ++e) {
        worst = std::max(worst, value(e, e, x));
    }
    return worst;
}

DeltaAxiomReport check_delta_axioms(const Graph& g, const Circulation& c,
                                    const DeltaTable& table, std::uint64_t seed,
                                    std::int64_t exhaustive_budget,
                                    std::int64_t triangle_samples) {
    const ArcId m = g.arc_count();
    const std::int64_t L = table.modulus();
    DeltaAxiomReport rep;

    rep.zero_diagonal = true;
    for (ArcId e = 0; e < m; ++e) {
        if (table.value(e, e, 0) != 0) rep.zero_diagonal = false;
    }
    rep.circulation_step = true;
    for (ArcId e = 0; e < m; ++e) {
        if (table.value(e, c.phi[e], 1) != 0) rep.circulation_step = false;
    }
    rep.shared_tail = true;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (ArcId e1 : g.ports(v)) {
            for (ArcId e2 : g.ports(v)) {
                if (table.value(e1, e2, 0) > 1) rep.shared_tail = false;
            }
        }
    }

    auto rng = seeded_rng(seed, 0x64656c7461ULL);
    rep.symmetry = true;
    const std::int64_t full = static_cast<std::int64_t>(m) * m * L;
    if (full <= exhaustive_budget) {
        for (ArcId e1 = 0; e1 < m; ++e1) {
            for (ArcId e2 = 0; e2 < m; ++e2) {
                for (std::int64_t x = 0; x < L; ++x) {
                    if (table.value(e1, e2, x) != table.value(e2, e1, (L - x) % L)) {
                        rep.symmetry = false;
                    }
                }
            }
        }
        rep.symmetry_checked = full;
    } else {
        for (std::int64_t i = 0; i < exhaustive_budget / 4; ++i) {
            const ArcId e1 = static_cast<ArcId>(uniform_below(rng, m));
            const ArcId e2 = static_cast<ArcId>(uniform_below(rng, m));
            const std::int64_t x = static_cast<std::int64_t>(uniform_below(rng, L));
            if (table.value(e1, e2, x) != table.value(e2, e1, (L - x) % L)) {
                rep.symmetry = false;
            }
        }
        rep.symmetry_checked = exhaustive_budget / 4;
    }

    rep.triangle = true;
    for (std::int64_t i = 0; i < triangle_samples; ++i) {
        const ArcId e1 = static_cast<ArcId>(uniform_below(rng, m));
        const ArcId e2 = static_cast<ArcId>(uniform_below(rng, m));
        const ArcId e3 = static_cast<ArcId>(uniform_below(rng, m));
        const std::int64_t x = static_cast<std::int64_t>(uniform_below(rng, L));
        const std::int64_t y = static_cast<std::int64_t>(uniform_below(rng, L));
        const std::int32_t lhs = table.value(e1, e3, (x + y) % L);
        if (lhs > delta_sat_add(table.value(e1, e2, x), table.value(e2, e3, y))) {
            rep.triangle = false;
        }
    }
    rep.triangle_checked = triangle_samples;
    return rep;
}

std::int64_t gphi_diameter(const Graph& g, const Circulation& c, const DeltaCaps& caps) {
    if (g.is_bipartite() && !g.is_tree()) {
        throw BipartiteError("vertex-time diameter is reported for non-bipartite graphs and trees only");
    }
    const std::int64_t L = c.shift_modulus(caps.shift_cap);
    const NodeId n = g.node_count();
    const ArcId m = g.arc_count();
    const std::int64_t states = static_cast<std::int64_t>(n) * L;
    if (states > caps.state_cap) {
        throw CapError("vertex-time state space " + std::to_string(states) + " exceeds cap");
    }
    // n BFS runs, each touching every (node, shift) state through adjacency
    // lists of total size at most 2 m L.
    const long double work = 2.0L * n * m * static_cast<long double>(L) * L;
    if (work > 2e9L) throw CapError("vertex-time diameter work exceeds cap");

    // A fragment starting at u and covering t + 1 arcs links (u, s) with
    // (v, s + t). fwd[u] holds the distinct (v, t mod L); bwd is its mirror.
    std::vector<std::vector<std::pair<NodeId, std::int32_t>>> fwd(n), bwd(n);
    {
        std::vector<char> seen(static_cast<size_t>(states), 0);
        std::vector<size_t> marked;
        for (NodeId u = 0; u < n; ++u) {
            marked.clear();
            for (ArcId e0 : g.ports(u)) {
                ArcId e = e0;
                for (std::int64_t t = 0; t < L; ++t) {
                    const NodeId v = g.succ(e);
                    const size_t key = static_cast<size_t>(v) * L + t;
                    if (!seen[key]) {
                        seen[key] = 1;
                        marked.push_back(key);
                        fwd[u].push_back({v, static_cast<std::int32_t>(t)});
                        bwd[v].push_back({u, static_cast<std::int32_t>(t)});
                    }
                    e = c.phi[e];
                }
            }
            for (size_t key : marked) seen[key] = 0;
        }
    }

    std::int64_t diameter = 0;
    std::vector<std::int32_t> dist(static_cast<size_t>(states));
    std::vector<std::int64_t> queue;
    queue.reserve(static_cast<size_t>(states));
    for (NodeId u = 0; u < n; ++u) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.clear();
        dist[static_cast<size_t>(u) * L] = 0;
        queue.push_back(static_cast<std::int64_t>(u) * L);
        for (size_t head = 0; head < queue.size(); ++head) {
            const std::int64_t cur = queue[head];
            const NodeId w = static_cast<NodeId>(cur / L);
            const std::int64_t s = cur % L;
            const std::int32_t d = dist[static_cast<size_t>(cur)];
            diameter = std::max(diameter, static_cast<std::int64_t>(d));
            for (const auto& [v, t] : fwd[w]) {
                const std::int64_t nxt = static_cast<std::int64_t>(v) * L + (s + t) % L;
                if (dist[static_cast<size_t>(nxt)] < 0) {
                    dist[static_cast<size_t>(nxt)] = d + 1;
                    queue.push_back(nxt);
                }
            }
            for (const auto& [v, t] : bwd[w]) {
                const std::int64_t nxt = static_cast<std::int64_t>(v) * L + (s - t % L + L) % L;
                if (dist[static_cast<size_t>(nxt)] < 0) {
                    dist[static_cast<size_t>(nxt)] = d + 1;
                    queue.push_back(nxt);
                }
            }
        }
        if (static_cast<std::int64_t>(queue.size()) != states) {
            throw Error("vertex-time graph is disconnected");
        }
    }
    return diameter;
}

std::int64_t Walk::total_length() const {
    std::int64_t sum = 0;
    for (const auto& f : fragments) sum += f.length;
    return sum;
}

Walk reconstruct_walk(const Graph& g, const Circulation& c, NodeId v, std::int64_t l,
                      const DeltaCaps& caps, bool nonnegative) {
    if (c.cycle_count() != 1) {
        throw Error("walk reconstruction needs a single-orbit circulation");
    }
    if (v < 0 || v >= g.node_count()) throw Error("walk base out of range");
    const std::int64_t L = machine_modulus(g, c, caps); // == m for one orbit
    std::int64_t target = l % L;
    if (target < 0) target += L;

    Walk w;
    w.base = v;
    w.residue = target;
    if (target == 0) {
        // the full circuit itself
        w.fragments.push_back({g.ports(v).front(), L});
        return w;
    }

    std::vector<std::int64_t> sources;
    for (ArcId e : g.ports(v)) sources.push_back(static_cast<std::int64_t>(e) * L);
    std::vector<std::int64_t> parents;
    const auto dist = machine_bfs(g, c, L, sources, &parents);

    std::int64_t goal = -1;
    std::int32_t best = DeltaTable::kUnreachable;
    for (ArcId e : g.ports(v)) {
        const std::int64_t idx = static_cast<std::int64_t>(e) * L + target;
        if (dist[idx] < best) {
            best = dist[idx];
            goal = idx;
        }
    }
    if (goal < 0 || best == DeltaTable::kUnreachable) {
        throw Error("no walk with the requested length class (bipartite parity?)");
    }

    // Replay the parent chain. Each hop is one machine move, classified by
    // its shift change mod L: 0 is a paid switch, +1/-1 are free steps
    // along the circulation. Maximal free runs become fragments whose
    // signed length is the exact net number of forward steps, so the
    // fragment count equals the number of switches plus one.
    std::vector<std::int64_t> path{goal};
    while (parents[path.back()] >= 0) path.push_back(parents[path.back()]);
    std::reverse(path.begin(), path.end());

    auto arc_of = [&](std::int64_t s) { return static_cast<ArcId>(s / L); };
    auto shift_of = [&](std::int64_t s) { return s % L; };
    ArcId run_start = arc_of(path[0]);
    std::int64_t net = 0;
    for (size_t i = 1; i < path.size(); ++i) {
        std::int64_t d = (shift_of(path[i]) - shift_of(path[i - 1])) % L;
        if (d < 0) d += L;
        if (d == 0) {
            if (net != 0) w.fragments.push_back({run_start, net});
            run_start = arc_of(path[i]);
            net = 0;
        } else if (d == 1) {
            ++net;
        } else {
            --net;
        }
    }
    if (net != 0) w.fragments.push_back({run_start, net});
    if (((w.total_length() - target) % L + L) % L != 0 || w.fragments.empty()) {
        throw Error("walk reconstruction produced an inconsistent fragment list");
    }

    if (nonnegative) {
        for (auto& f : w.fragments) {
            if (f.length < 0) {
                const std::int64_t lift = ((-f.length) / L + 1) * L;
                f.length += lift;
            }
        }
    }
    return w;
}

std::vector<ArcId> replay_walk(const Graph& g, const Circulation& c, const Walk& w) {
    std::vector<ArcId> arcs;
    NodeId at = w.base;
    for (const auto& f : w.fragments) {
        if (f.length < 0) throw Error("cannot replay a walk with backward fragments");
        if (g.pred(f.start) != at) throw Error("fragment does not start at the walk position");
        ArcId e = f.start;
        for (std::int64_t i = 0; i < f.length; ++i) {
            arcs.push_back(e);
            at = g.succ(e);
            e = c.phi[e];
        }
    }
    if (at != w.base) throw Error("walk does not close up");
    const std::int64_t m = g.arc_count();
    if ((static_cast<std::int64_t>(arcs.size()) - w.residue) % m != 0) {
        throw Error("walk length is in the wrong class");
    }
    return arcs;
}

} // namespace rotorlab
