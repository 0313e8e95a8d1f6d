#include "rotorlab/circulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "rotorlab/errors.hpp"

namespace rotorlab {

std::int64_t Circulation::shift_modulus(std::int64_t cap) const {
    std::int64_t l = 1;
    for (const auto& cyc : cycles) {
        l = std::lcm(l, static_cast<std::int64_t>(cyc.size()));
        if (l > cap) {
            throw CapError("shift modulus " + std::to_string(l) + " exceeds cap " +
                           std::to_string(cap));
        }
    }
    return l;
}

ArcId Circulation::advance(ArcId e, std::int64_t steps) const {
    const auto& cyc = cycles[cycle_of[e]];
    const std::int64_t len = static_cast<std::int64_t>(cyc.size());
    std::int64_t pos = (pos_in_cycle[e] + steps) % len;
    if (pos < 0) pos += len;
    return cyc[pos];
}

namespace {

// Column of arc loads delayed by `delay` steps, as a comparable key.
std::vector<std::int64_t> load_column(const LoadTrace& trace, ArcId e, std::int64_t delay) {
    std::vector<std::int64_t> col(trace.period);
    for (std::int64_t t = 0; t < trace.period; ++t) {
        col[t] = trace.load_at(t + delay, e);
    }
    return col;
}

} // namespace

Circulation extract_circulation(const Graph& g, const LoadTrace& trace) {
    if (trace.arc_count != g.arc_count()) {
        throw CirculationError("trace does not match graph arc count");
    }
    const ArcId m = g.arc_count();
    Circulation c;
    c.phi.assign(m, -1);
    c.phi_inv.assign(m, -1);
    c.token_count = trace.token_count;

    for (NodeId v = 0; v < g.node_count(); ++v) {
        // out-arcs in port order; in-arcs are their reverses, also in port
        // order, so both sides of the matching advance round robin.
        std::map<std::vector<std::int64_t>, std::deque<ArcId>> out_by_column;
        for (ArcId e : g.ports(v)) {
            out_by_column[load_column(trace, e, 0)].push_back(e);
        }
        for (ArcId out : g.ports(v)) {
            const ArcId in = g.reverse(out); // succ(in) == v
            // phi(in) must satisfy load(t, in) == load(t+1, phi(in)), so the
            // incoming column shifted back one step must equal an outgoing
            // column.
            auto it = out_by_column.find(load_column(trace, in, -1));
            if (it == out_by_column.end() || it->second.empty()) {
                throw CirculationError("no arc bijection at node " + std::to_string(v) +
                                       ": unmatched incoming column");
            }
            c.phi[in] = it->second.front();
            it->second.pop_front();
        }
    }

    for (ArcId e = 0; e < m; ++e) {
        if (c.phi[e] < 0) throw CirculationError("arc left unmapped");
        c.phi_inv[c.phi[e]] = e;
    }
    for (ArcId e = 0; e < m; ++e) {
        if (c.phi_inv[e] < 0) throw CirculationError("phi is not a bijection");
    }

    // Orbit decomposition; each orbit starts at its smallest arc id.
    c.cycle_of.assign(m, -1);
    c.pos_in_cycle.assign(m, 0);
    for (ArcId e = 0; e < m; ++e) {
        if (c.cycle_of[e] >= 0) continue;
        const int id = c.cycle_count();
        std::vector<ArcId> orbit;
        ArcId cur = e;
        do {
            c.cycle_of[cur] = id;
            c.pos_in_cycle[cur] = static_cast<std::int64_t>(orbit.size());
            orbit.push_back(cur);
            cur = c.phi[cur];
        } while (cur != e);
        c.cycles.push_back(std::move(orbit));
    }

    c.cycle_tokens.assign(c.cycle_count(), 0);
    for (ArcId e = 0; e < m; ++e) {
        c.cycle_tokens[c.cycle_of[e]] += trace.load_at(0, e);
    }

    check_circulation(g, trace, c);
    return c;
}

void check_circulation(const Graph& g, const LoadTrace& trace, const Circulation& c) {
    const ArcId m = g.arc_count();
    if (static_cast<ArcId>(c.phi.size()) != m) throw CirculationError("phi size mismatch");
    std::vector<char> hit(m, 0);
    for (ArcId e = 0; e < m; ++e) {
        const ArcId f = c.phi[e];
        if (f < 0 || f >= m || hit[f]) throw CirculationError("phi is not a bijection");
        hit[f] = 1;
        if (g.pred(f) != g.succ(e)) {
            throw CirculationError("phi(e) does not leave the head of e");
        }
        for (std::int64_t t = 0; t < trace.period; ++t) {
            if (trace.load_at(t, e) != trace.load_at(t + 1, f)) {
                throw CirculationError("load columns disagree along phi");
            }
        }
    }
    // orbits partition the arcs
    std::vector<char> seen(m, 0);
    std::int64_t covered = 0;
    for (int i = 0; i < c.cycle_count(); ++i) {
        for (std::int64_t j = 0; j < c.cycle_length(i); ++j) {
            const ArcId e = c.cycles[i][j];
            if (seen[e]) throw CirculationError("orbit overlap");
            seen[e] = 1;
            ++covered;
            if (c.cycle_of[e] != i || c.pos_in_cycle[e] != j) {
                throw CirculationError("orbit index tables disagree");
            }
            if (c.phi[e] != c.cycles[i][(j + 1) % c.cycle_length(i)]) {
                throw CirculationError("orbit does not follow phi");
            }
        }
    }
    if (covered != m) throw CirculationError("orbits do not cover all arcs");
    // per-orbit token counts are time independent
    for (std::int64_t t = 0; t < trace.period; ++t) {
        std::vector<std::int64_t> tokens(c.cycle_count(), 0);
        for (ArcId e = 0; e < m; ++e) tokens[c.cycle_of[e]] += trace.load_at(t, e);
        if (tokens != c.cycle_tokens) {
            throw CirculationError("orbit token counts vary over time");
        }
    }
}

std::int64_t max_label_modulus(const Circulation& c) {
    std::int64_t d = 0;
    for (const auto& cyc : c.cycles) d = std::gcd(d, static_cast<std::int64_t>(cyc.size()));
    return d;
}

Labeling make_labeling(const Circulation& c, std::int64_t eta,
                       const std::vector<std::int64_t>& shifts) {
    if (eta < 1) throw Error("label modulus must be positive");
    if (!shifts.empty() && static_cast<int>(shifts.size()) != c.cycle_count()) {
        throw Error("one shift per cycle expected");
    }
    for (const auto& cyc : c.cycles) {
        if (static_cast<std::int64_t>(cyc.size()) % eta != 0) {
            throw Error("label modulus " + std::to_string(eta) +
                        " does not divide cycle length " + std::to_string(cyc.size()));
        }
    }
    Labeling l;
    l.eta = eta;
    l.lambda.assign(c.phi.size(), 0);
    for (int i = 0; i < c.cycle_count(); ++i) {
        std::int64_t shift = shifts.empty() ? 0 : ((shifts[i] % eta) + eta) % eta;
        for (std::int64_t j = 0; j < c.cycle_length(i); ++j) {
            l.lambda[c.cycles[i][j]] = (shift + j) % eta;
        }
    }
    return l;
}

std::vector<std::int64_t> IntersectionSet::values() const {
    std::vector<std::int64_t> out;
    for (std::int64_t x = 0; x < eta; ++x) {
        if (member[x]) out.push_back(x);
    }
    return out;
}

bool IntersectionSet::contains(std::int64_t x) const {
    std::int64_t r = x % eta;
    if (r < 0) r += eta;
    return member[r];
}

IntersectionSet intersection_set(const Graph& g, const Labeling& l) {
    IntersectionSet a;
    a.eta = l.eta;
    a.member.assign(l.eta, false);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& ports = g.ports(v);
        for (ArcId e1 : ports) {
            for (ArcId e2 : ports) {
                std::int64_t d = (l.lambda[e1] - l.lambda[e2]) % l.eta;
                if (d < 0) d += l.eta;
                a.member[d] = true;
            }
        }
    }
    return a;
}

namespace {

std::vector<std::vector<int>> all_pairs_bfs(const std::vector<std::vector<char>>& adj) {
    const int g = static_cast<int>(adj.size());
    std::vector<std::vector<int>> dist(g, std::vector<int>(g, -1));
    for (int s = 0; s < g; ++s) {
        std::deque<int> queue{s};
        dist[s][s] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int w = 0; w < g; ++w) {
                if (adj[u][w] && dist[s][w] < 0) {
                    dist[s][w] = dist[s][u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return dist;
}

int table_diameter(const std::vector<std::vector<int>>& dist) {
    int d = 0;
    for (const auto& row : dist) {
        for (int x : row) {
            if (x < 0) return -1;
            d = std::max(d, x);
        }
    }
    return d;
}

} // namespace

int CycleGraphs::diameter() const { return table_diameter(dist); }
int CycleGraphs::diameter_label() const { return table_diameter(dist_label); }

CycleGraphs cycle_graphs(const Graph& g, const Circulation& c, const Labeling& l) {
    CycleGraphs cg;
    cg.g = c.cycle_count();
    cg.adj.assign(cg.g, std::vector<char>(cg.g, 0));
    cg.adj_label.assign(cg.g, std::vector<char>(cg.g, 0));
    cg.witness.assign(cg.g, std::vector<std::pair<ArcId, ArcId>>(cg.g, {-1, -1}));
    for (int i = 0; i < cg.g; ++i) {
        cg.adj[i][i] = 1;
        cg.adj_label[i][i] = 1;
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& ports = g.ports(v);
        for (ArcId e1 : ports) {
            for (ArcId e2 : ports) {
                const int i = c.cycle_of[e1], j = c.cycle_of[e2];
                cg.adj[i][j] = 1;
                if (cg.witness[i][j].first < 0) cg.witness[i][j] = {e1, e2};
                if (l.lambda[e1] == l.lambda[e2]) cg.adj_label[i][j] = 1;
            }
        }
    }
    cg.dist = all_pairs_bfs(cg.adj);
    cg.dist_label = all_pairs_bfs(cg.adj_label);
    return cg;
}

Labeling shift_labeling(const Graph& g, const Circulation& c, const Labeling& l) {
    CycleGraphs cg = cycle_graphs(g, c, l);
    if (cg.diameter() < 0) {
        // cycles of a connected graph always share vertices transitively
        throw CirculationError("orbit adjacency graph is disconnected");
    }
    std::vector<std::int64_t> shift(c.cycle_count(), 0);
    // current label of an arc under per-cycle shift s_i:
    //   lambda'(e) = lambda(e) + s_i (mod eta)
    // BFS tree edges (i -> j) get s_j fixed so that the witness pair gets
    // equal labels, which embeds the tree in the label-respecting graph.
    std::vector<char> done(c.cycle_count(), 0);
    std::deque<int> queue{0};
    done[0] = 1;
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        for (int j = 0; j < c.cycle_count(); ++j) {
            if (!cg.adj[i][j] || done[j]) continue;
            auto [ei, ej] = cg.witness[i][j];
            std::int64_t want = (l.lambda[ei] + shift[i]) % l.eta;
            std::int64_t have = l.lambda[ej] % l.eta;
            shift[j] = ((want - have) % l.eta + l.eta) % l.eta;
            done[j] = 1;
            queue.push_back(j);
        }
    }
    return make_labeling(c, l.eta, shift);
}

} // namespace rotorlab
