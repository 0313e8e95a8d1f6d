#include "rotorlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "rotorlab/addcomb.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

bool is_prime(std::int64_t x) {
    if (x < 2) return false;
    for (std::int64_t d = 2; d * d <= x; ++d) {
        if (x % d == 0) return false;
    }
    return true;
}

double log2_sq(std::int64_t x) {
    const double l = std::log2(static_cast<double>(x));
    return l * l;
}

// {1, 2, 3, m/4, 3m/4 + 1}, deduplicated, floored at 1
std::vector<std::int64_t> token_ladder(std::int64_t m) {
    std::vector<std::int64_t> ks{1, 2, 3, m / 4, 3 * m / 4 + 1};
    for (auto& k : ks) k = std::max<std::int64_t>(1, k);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

std::string sanitize_id(const std::string& raw) {
    std::string out;
    for (char ch : raw) {
        out.push_back(std::isalnum(static_cast<unsigned char>(ch)) ? ch : '-');
    }
    return out;
}

std::vector<ArcId> orbit_reps(const Circulation& c) {
    std::vector<ArcId> reps;
    reps.reserve(c.cycles.size());
    for (const auto& cyc : c.cycles) reps.push_back(cyc.front());
    return reps;
}

// Undirected diameter of the subgraph spanned by one orbit's arcs.
std::int64_t orbit_subgraph_diameter(const Graph& g, const Circulation& c, int cycle) {
    std::vector<NodeId> verts;
    std::vector<std::vector<NodeId>> adj(static_cast<size_t>(g.node_count()));
    std::vector<char> seen(static_cast<size_t>(g.node_count()), 0);
    for (ArcId e : c.cycles[static_cast<size_t>(cycle)]) {
        const NodeId u = g.pred(e), v = g.succ(e);
        adj[static_cast<size_t>(u)].push_back(v);
        adj[static_cast<size_t>(v)].push_back(u);
        for (NodeId w : {u, v}) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                verts.push_back(w);
            }
        }
    }
    std::int64_t diameter = 0;
    std::vector<std::int64_t> dist(static_cast<size_t>(g.node_count()));
    for (NodeId s : verts) {
        std::fill(dist.begin(), dist.end(), -1);
        std::vector<NodeId> queue{s};
        dist[static_cast<size_t>(s)] = 0;
        for (size_t head = 0; head < queue.size(); ++head) {
            const NodeId u = queue[head];
            diameter = std::max(diameter, dist[static_cast<size_t>(u)]);
            for (NodeId w : adj[static_cast<size_t>(u)]) {
                if (dist[static_cast<size_t>(w)] < 0) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return diameter;
}

// Per-arc circular window sums: q whole periods plus an r-step remainder.
struct ArcWindows {
    std::int64_t p = 0;
    std::int64_t total = 0;
    std::vector<std::int64_t> s;  // prefix sums, 0..p

    static ArcWindows build(const LoadTrace& trace, ArcId e) {
        ArcWindows w;
        w.p = trace.period;
        w.s.assign(static_cast<size_t>(w.p) + 1, 0);
        for (std::int64_t i = 0; i < w.p; ++i) {
            w.s[static_cast<size_t>(i) + 1] = w.s[static_cast<size_t>(i)] + trace.load_at(i, e);
        }
        w.total = w.s[static_cast<size_t>(w.p)];
        return w;
    }

    std::int64_t sum(std::int64_t t, std::int64_t len) const {
        const std::int64_t q = len / p, r = len % p;
        std::int64_t part;
        if (t + r <= p) {
            part = s[static_cast<size_t>(t + r)] - s[static_cast<size_t>(t)];
        } else {
            part = total - s[static_cast<size_t>(t)] + s[static_cast<size_t>(t + r - p)];
        }
        return q * total + part;
    }
};

CheckResult base_result(const Pipeline& pl, const std::string& id) {
    CheckResult r;
    r.check = id;
    r.instance = pl.spec.id;
    return r;
}

void put(CheckResult& r, const std::string& key, double v) { r.stats.emplace_back(key, v); }

CheckResult not_applicable(CheckResult r, const std::string& why) {
    r.applicable = false;
    r.pass = true;
    r.detail = why;
    return r;
}

struct BuiltTable {
    bool ok = false;
    std::string why;
    DeltaTable table;
};

BuiltTable try_delta_table(const Pipeline& pl, const PipelineCaps& caps) {
    BuiltTable b;
    try {
        b.table = DeltaTable::build(pl.graph, pl.circ,
                                    DeltaCaps{caps.shift_cap, caps.delta_state_cap});
        b.ok = true;
    } catch (const CapError& err) {
        b.why = err.what();
    }
    return b;
}

CheckResult check_structure(const Pipeline& pl) {
    CheckResult r = base_result(pl, "structure");
    const std::int64_t m = pl.graph.arc_count();
    const std::int64_t k = pl.trace.token_count;
    const int g = pl.circ.cycle_count();
    std::ostringstream why;
    try {
        check_circulation(pl.graph, pl.trace, pl.circ);
    } catch (const Error& err) {
        r.pass = false;
        why << "re-verification failed: " << err.what() << "; ";
    }
    for (int i = 0; i < g; ++i) {
        if (pl.circ.cycle_tokens[static_cast<size_t>(i)] * m != k * pl.circ.cycle_length(i)) {
            r.pass = false;
            why << "orbit " << i << " breaks the token ratio; ";
        }
    }
    // Integral token ratios force every orbit length to be a multiple of
    // m / gcd(k, m), so at most gcd(k, m) orbits fit. The orbit count need
    // not divide gcd(k, m): lengths (4, 8, 8) at gcd 5 occur in practice.
    const std::int64_t gk = std::gcd(k, m);
    const std::int64_t stride = m / gk;
    for (int i = 0; i < g; ++i) {
        if (pl.circ.cycle_length(i) % stride != 0) {
            r.pass = false;
            why << "orbit " << i << " has length " << pl.circ.cycle_length(i)
                << ", not a multiple of " << stride << "; ";
        }
    }
    if (g > gk) {
        r.pass = false;
        why << "orbit count " << g << " exceeds gcd(k, m) = " << gk << "; ";
    }
    if (is_prime(m) && k < m && g != 1) {
        r.pass = false;
        why << "prime arc count with k < m must give a single orbit; ";
    }
    r.detail = r.pass ? "circulation verified" : why.str();
    put(r, "orbits", static_cast<double>(g));
    put(r, "gcd_km", static_cast<double>(gk));
    put(r, "orbits_divide_gcd", gk % g == 0 ? 1.0 : 0.0);
    return r;
}

CheckResult check_labeling(const Pipeline& pl) {
    CheckResult r = base_result(pl, "labeling");
    const auto& l = pl.labeling;
    const std::int64_t eta = l.eta;
    std::ostringstream why;
    for (ArcId e = 0; e < pl.graph.arc_count(); ++e) {
        const std::int64_t want = (l.lambda[static_cast<size_t>(e)] + 1) % eta;
        if (l.lambda[static_cast<size_t>(pl.circ.phi[static_cast<size_t>(e)])] != want) {
            r.pass = false;
            why << "label increment fails at arc " << e << "; ";
            break;
        }
    }
    if (max_label_modulus(pl.circ) % eta != 0) {
        r.pass = false;
        why << "modulus does not divide the orbit gcd; ";
    }
    for (int i = 0; i < pl.circ.cycle_count(); ++i) {
        if (pl.circ.cycle_length(i) % eta != 0) {
            r.pass = false;
            why << "modulus does not divide orbit " << i << "; ";
        }
    }
    // the set must match a direct enumeration over same-vertex arc pairs
    ResidueSet direct(eta);
    for (NodeId v = 0; v < pl.graph.node_count(); ++v) {
        for (ArcId a : pl.graph.ports(v)) {
            for (ArcId b : pl.graph.ports(v)) {
                direct.insert(l.lambda[static_cast<size_t>(a)] - l.lambda[static_cast<size_t>(b)]);
            }
        }
    }
    const ResidueSet rs = residue_set(pl.alam);
    if (!(direct == rs)) {
        r.pass = false;
        why << "intersection set mismatch with direct enumeration; ";
    }
    if (!rs.contains(0) || !(rs == rs.negated())) {
        r.pass = false;
        why << "intersection set must contain 0 and be symmetric; ";
    }
    r.detail = r.pass ? "labeling and intersection set verified" : why.str();
    put(r, "eta", static_cast<double>(eta));
    put(r, "set_size", static_cast<double>(rs.size()));
    return r;
}

CheckResult check_delta_axioms(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "delta-axioms");
    BuiltTable b = try_delta_table(pl, caps);
    if (!b.ok) return not_applicable(std::move(r), b.why);
    const DeltaAxiomReport rep =
        check_delta_axioms(pl.graph, pl.circ, b.table, pl.spec.seed ^ 0x64656c7461ULL);
    r.pass = rep.all();
    std::ostringstream detail;
    if (!r.pass) {
        detail << "axiom failures:";
        if (!rep.zero_diagonal) detail << " zero-diagonal";
        if (!rep.circulation_step) detail << " circulation-step";
        if (!rep.shared_tail) detail << " shared-tail";
        if (!rep.symmetry) detail << " symmetry";
        if (!rep.triangle) detail << " triangle";
    } else {
        detail << "axioms hold";
    }
    if (pl.circ.cycle_count() == 1 && pl.eta == b.table.modulus()) {
        // labeled offsets admit a one-switch walk, so the diagonal is <= 1
        std::int64_t worst = 0;
        for (std::int64_t x : pl.alam.values()) {
            for (ArcId e = 0; e < pl.graph.arc_count(); ++e) {
                worst = std::max<std::int64_t>(worst, b.table.value(e, e, x));
            }
        }
        if (worst > 1) {
            r.pass = false;
            detail << "; labeled offset exceeds 1 switch (" << worst << ")";
        }
        put(r, "labeled_offset_max", static_cast<double>(worst));
    }
    r.detail = detail.str();
    put(r, "symmetry_checked", static_cast<double>(rep.symmetry_checked));
    put(r, "triangle_checked", static_cast<double>(rep.triangle_checked));
    return r;
}

CheckResult check_delta_diag(const Pipeline& pl) {
    CheckResult r = base_result(pl, "delta-diag");
    if (pl.graph.is_bipartite()) return not_applicable(std::move(r), "bipartite instance");
    std::int64_t worst = 0;
    for (ArcId rep : orbit_reps(pl.circ)) {
        worst = std::max(worst, empirical_delta(pl.trace, rep, rep, 4));
    }
    r.pass = worst <= 3;
    r.detail = "window distance at offset 4: " + std::to_string(worst);
    put(r, "offset4_max", static_cast<double>(worst));
    return r;
}

CheckResult check_delta_table(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "delta-table");
    const std::int64_t L = pl.shift_modulus;
    if (L <= 0 || L > 10'000) {
        return not_applicable(std::move(r), "shift modulus over the exhaustive cap");
    }
    BuiltTable b = try_delta_table(pl, caps);
    if (!b.ok) return not_applicable(std::move(r), b.why);
    EmpiricalDeltaTable emp;
    try {
        emp = EmpiricalDeltaTable::build(pl.trace, pl.circ);
    } catch (const CapError& err) {
        return not_applicable(std::move(r), err.what());
    }
    // (rep, e2, y) with y over the shift modulus covers every (e1, e2, x):
    // moving e1 along its orbit only shifts the offset coordinate.
    std::int64_t checked = 0, violations = 0;
    std::int64_t first_bad_y = -1;
    ArcId first_bad_e = -1;
    for (ArcId rep : orbit_reps(pl.circ)) {
        for (ArcId e2 = 0; e2 < pl.graph.arc_count(); ++e2) {
            for (std::int64_t y = 0; y < L; ++y) {
                const std::int64_t lhs = emp.value(rep, e2, y);
                const std::int64_t rhs = b.table.value(rep, e2, y);
                ++checked;
                if (lhs > rhs) {
                    ++violations;
                    if (first_bad_y < 0) {
                        first_bad_y = y;
                        first_bad_e = e2;
                    }
                }
            }
        }
    }
    r.pass = violations == 0;
    std::ostringstream detail;
    detail << checked << " entries compared";
    if (violations > 0) {
        detail << "; " << violations << " exceed the table, first at (e2=" << first_bad_e
               << ", offset=" << first_bad_y << ")";
    }
    r.detail = detail.str();
    put(r, "entries", static_cast<double>(checked));
    return r;
}

CheckResult check_delta_max(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "delta-max");
    r.asserted = false;
    if (pl.circ.cycle_count() != 1) return not_applicable(std::move(r), "needs a single orbit");
    if (pl.graph.is_bipartite()) return not_applicable(std::move(r), "bipartite instance");
    BuiltTable b = try_delta_table(pl, caps);
    if (!b.ok) return not_applicable(std::move(r), b.why);
    std::int64_t worst = 0;
    std::int64_t unreachable = 0;
    for (std::int64_t x = 0; x < b.table.modulus(); ++x) {
        const std::int32_t v = b.table.diag_max(x);
        if (v == DeltaTable::kUnreachable) {
            ++unreachable;
        } else {
            worst = std::max<std::int64_t>(worst, v);
        }
    }
    r.detail = "diagonal max " + std::to_string(worst) +
               (unreachable > 0 ? " (" + std::to_string(unreachable) + " offsets unreachable)" : "");
    put(r, "table_diag_max", static_cast<double>(worst));
    put(r, "table_diag_ratio", static_cast<double>(worst) / log2_sq(pl.graph.arc_count()));
    return r;
}

CheckResult check_int_mod(const Pipeline& pl) {
    CheckResult r = base_result(pl, "int-mod");
    if (pl.graph.is_bipartite()) return not_applicable(std::move(r), "bipartite instance");
    const IntModReport rep = verify_int_mod(pl.alam);
    r.pass = rep.pass;
    std::ostringstream detail;
    detail << rep.checked << " multipliers checked";
    if (rep.violating_xi) detail << "; no witness for multiplier " << *rep.violating_xi;
    if (!rep.borderline_xi.empty()) {
        detail << "; " << rep.borderline_xi.size() << " rely on an interval endpoint";
    }
    r.detail = detail.str();
    put(r, "multipliers", static_cast<double>(rep.checked));
    return r;
}

CheckResult check_bohr(const Pipeline& pl) {
    CheckResult r = base_result(pl, "bohr");
    if (pl.graph.is_bipartite()) return not_applicable(std::move(r), "bipartite instance");
    if (pl.eta < 2) return not_applicable(std::move(r), "modulus below 2");
    const ResidueSet a = residue_set(pl.alam);
    const ResidueSet b = bohr_set(sumset(a, a), Rational::make(1, 6));
    r.pass = b.size() == 1 && b.contains(0);
    r.detail = r.pass ? "doubled-set Bohr set is trivial"
                      : "Bohr set has " + std::to_string(b.size()) + " elements";
    put(r, "bohr_size", static_cast<double>(b.size()));
    return r;
}

CheckResult check_cover(const Pipeline& pl) {
    CheckResult r = base_result(pl, "cover");
    if (pl.eta < 2) return not_applicable(std::move(r), "modulus below 2");
    // bipartite graphs trap the intersection set in even residues, so the
    // round bound is only guaranteed (and only asserted) without that parity
    r.asserted = !pl.graph.is_bipartite();
    const std::int64_t bound =
        16 * static_cast<std::int64_t>(std::ceil(log2_sq(pl.eta) - 1e-9));
    const auto kappa = cover_kappa(residue_set(pl.alam), bound + 1);
    if (!kappa) {
        r.pass = !r.asserted;
        r.detail = "no cover within " + std::to_string(bound + 1) + " rounds";
        put(r, "cover_kappa", -1.0);
        return r;
    }
    if (r.asserted) r.pass = *kappa <= bound;
    r.detail = "cover after " + std::to_string(*kappa) + " rounds, bound " + std::to_string(bound);
    put(r, "cover_kappa", static_cast<double>(*kappa));
    put(r, "cover_ratio", static_cast<double>(*kappa) / log2_sq(pl.eta));
    return r;
}

CheckResult check_spectrum_cover(const Pipeline& pl) {
    CheckResult r = base_result(pl, "spectrum-cover");
    if (pl.eta < 2) return not_applicable(std::move(r), "modulus below 2");
    const SpectrumCoverReport rep = verify_spectrum_cover(residue_set(pl.alam), 576);
    r.pass = rep.pass;
    std::ostringstream detail;
    if (!rep.spectrum_trivial) {
        detail << "spectrum not trivial, implication vacuous";
    } else {
        detail << "cover at " << rep.kappa << " rounds " << (rep.covered ? "holds" : "fails");
    }
    r.detail = detail.str();
    put(r, "kappa", static_cast<double>(rep.kappa));
    return r;
}

CheckResult check_shrink_chain(const Pipeline& pl) {
    CheckResult r = base_result(pl, "shrink-chain");
    if (pl.graph.is_bipartite()) return not_applicable(std::move(r), "bipartite instance");
    if (pl.eta < 2) return not_applicable(std::move(r), "modulus below 2");
    const ShrinkChainReport rep = verify_shrink_chain(residue_set(pl.alam));
    r.pass = rep.pass;
    std::ostringstream detail;
    if (!rep.hypothesis_met) {
        detail << "hypothesis not met: " << rep.hypothesis_note;
    } else {
        detail << "trivial spectrum after " << rep.iterations << " of " << rep.cap << " rounds";
    }
    r.detail = detail.str();
    put(r, "iterations", static_cast<double>(rep.iterations));
    return r;
}

CheckResult check_time_average(const Pipeline& pl) {
    CheckResult r = base_result(pl, "time-average");
    const LoadTrace& trace = pl.trace;
    const std::int64_t p = trace.period;
    const std::int64_t m = trace.arc_count;
    const std::int64_t k = trace.token_count;
    std::ostringstream why;

    if (load_period(trace) != p) {
        r.pass = false;
        why << "load rows repeat before the state does; ";
    }

    std::vector<std::int64_t> ts;
    const std::int64_t dense = std::min<std::int64_t>(2 * p, p > 20'000 ? 16 : 64);
    for (std::int64_t T = 1; T <= dense; ++T) ts.push_back(T);
    for (std::int64_t T : {p - 1, p, p + 1, 2 * p - 1, 2 * p}) {
        if (T >= 1 && T <= 2 * p) ts.push_back(T);
    }
    auto rng = seeded_rng(pl.spec.seed, 0x74617667ULL);
    for (int i = 0; i < 24; ++i) ts.push_back(1 + static_cast<std::int64_t>(uniform_below(rng, 2 * p)));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    const std::vector<ArcId> reps = orbit_reps(pl.circ);
    std::vector<std::vector<std::int64_t>> diag(reps.size());
    std::vector<ArcWindows> windows(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        diag[i] = empirical_delta_many(trace, reps[i], reps[i], ts);
        windows[i] = ArcWindows::build(trace, reps[i]);
    }

    std::int64_t checked = 0;
    double worst_norm = 0.0;
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        const std::int64_t T = ts[ti];
        std::int64_t global_max = 0;
        for (size_t i = 0; i < reps.size(); ++i) {
            std::int64_t arc_max = 0;
            for (std::int64_t t = 0; t < p; ++t) {
                const std::int64_t diff = m * windows[i].sum(t, T) - k * T;
                arc_max = std::max(arc_max, diff < 0 ? -diff : diff);
                ++checked;
            }
            // |window average - k/m| <= the arc's own diagonal distance
            if (arc_max > m * diag[i][ti]) {
                r.pass = false;
                why << "window spread " << arc_max << "/" << m << " exceeds distance "
                    << diag[i][ti] << " at T=" << T << "; ";
            }
            global_max = std::max(global_max, arc_max);
        }
        if ((global_max == 0) != (T % p == 0)) {
            r.pass = false;
            why << "zero deviation must happen exactly at whole periods (T=" << T << "); ";
        }
        worst_norm = std::max(worst_norm, static_cast<double>(global_max) /
                                              (static_cast<double>(m) * static_cast<double>(T)));
        if (T == 1 || T == p) {
            const TimeAverageDeviation dev = time_average_deviation(trace, T);
            if (!(dev.deviation == Rational::make(global_max, m))) {
                r.pass = false;
                why << "deviation disagrees with the direct scan at T=" << T << "; ";
            }
        }
    }
    r.detail = r.pass ? std::to_string(checked) + " (t, T) pairs checked exactly" : why.str();
    put(r, "pairs", static_cast<double>(checked));
    put(r, "max_normalized_deviation", worst_norm);
    return r;
}

CheckResult check_idle(const Pipeline& pl) {
    CheckResult r = base_result(pl, "idle");
    const std::int64_t m = pl.graph.arc_count();
    const std::int64_t k = pl.trace.token_count;
    const IdlenessReport ir = idleness(pl.trace);
    std::ostringstream why;
    if (!ir.all_visited) {
        r.pass = false;
        r.detail = "some arc is never traversed";
        return r;
    }
    const std::int64_t idle = ir.max_gap;
    if (idle < (m + k - 1) / k) {
        r.pass = false;
        why << "below the pigeonhole floor; ";
    }
    if (4 * k > 3 * m && idle > 4) {
        r.pass = false;
        why << "dense-token ceiling broken; ";
    }
    if (pl.graph.is_tree() && idle * k > 8 * m) {
        r.pass = false;
        why << "tree ceiling broken; ";
    }
    const bool coprime = std::gcd(k, m) == 1;
    if (coprime && m >= 2) {
        const double cap = 16.0 * static_cast<double>(m) * log2_sq(m);
        if (static_cast<double>(idle) * static_cast<double>(k) > cap) {
            r.pass = false;
            why << "coprime ceiling broken; ";
        }
        put(r, "coprime_constant",
            static_cast<double>(idle) * static_cast<double>(k) /
                (static_cast<double>(m) * log2_sq(m)));
    }
    r.detail = r.pass ? "idleness " + std::to_string(idle) + " within all rows" : why.str();
    put(r, "idleness", static_cast<double>(idle));
    put(r, "idle_times_k_over_m",
        static_cast<double>(idle) * static_cast<double>(k) / static_cast<double>(m));
    return r;
}

CheckResult check_idle_wait(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "idle-wait");
    BuiltTable b = try_delta_table(pl, caps);
    if (!b.ok) return not_applicable(std::move(r), b.why);
    const IdlenessReport ir = idleness(pl.trace);
    if (!ir.all_visited) {
        r.pass = false;
        r.detail = "some arc is never traversed";
        return r;
    }
    const std::int64_t m = pl.graph.arc_count();
    const std::int64_t k = pl.trace.token_count;
    const std::int64_t L = b.table.modulus();
    std::vector<std::int64_t> ts;
    for (std::int64_t T = 1; T <= std::min<std::int64_t>(2 * L, 48); ++T) ts.push_back(T);
    ts.push_back(4);
    ts.push_back((m + k - 1) / k);
    ts.push_back((8 * m + k - 1) / k);
    ts.push_back(static_cast<std::int64_t>(std::ceil(16.0 * static_cast<double>(m) / k * log2_sq(std::max<std::int64_t>(2, m)))));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::int64_t fired = 0, violations = 0;
    for (std::int64_t T : ts) {
        if (T < 1) continue;
        for (ArcId e = 0; e < m; ++e) {
            const std::int32_t d = b.table.value(e, e, T);
            if (d == DeltaTable::kUnreachable) continue;
            if (k * T > m * static_cast<std::int64_t>(d)) {
                ++fired;
                if (ir.per_arc[static_cast<size_t>(e)] > T) ++violations;
            }
        }
    }
    r.pass = violations == 0;
    r.detail = std::to_string(fired) + " implications fired, " + std::to_string(violations) +
               " violated";
    put(r, "fired", static_cast<double>(fired));
    return r;
}

CheckResult check_tree_window(const Pipeline& pl) {
    CheckResult r = base_result(pl, "tree-window");
    r.asserted = false;
    if (!pl.graph.is_tree()) return not_applicable(std::move(r), "not a tree");
    const std::int64_t n = pl.graph.node_count();
    std::vector<std::int64_t> xs;
    for (std::int64_t x = 1; x <= 4 * n; ++x) xs.push_back(x);
    std::int64_t worst = 0;
    for (ArcId rep : orbit_reps(pl.circ)) {
        const std::vector<std::int64_t> diag = empirical_delta_many(pl.trace, rep, rep, xs);
        for (std::int64_t B = 1; B <= 2 * n; ++B) {
            std::int64_t best = diag[static_cast<size_t>(B - 1)];
            for (std::int64_t x = B; x <= 2 * B; ++x) {
                best = std::min(best, diag[static_cast<size_t>(x - 1)]);
            }
            worst = std::max(worst, best);
        }
    }
    r.detail = "windowed diagonal minimum peaks at " + std::to_string(worst);
    put(r, "tree_window_max", static_cast<double>(worst));
    return r;
}

CheckResult check_loops_diag(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "loops-diag");
    BuiltTable b = try_delta_table(pl, caps);
    if (!b.ok) return not_applicable(std::move(r), b.why);
    const bool loops = pl.graph.has_loop_at_every_node();
    r.asserted = loops;
    const std::int64_t L = b.table.modulus();
    const double l2m = log2_sq(std::max<std::int64_t>(2, pl.graph.arc_count()));
    double worst_ratio = 0.0;
    for (int i = 0; i < pl.circ.cycle_count(); ++i) {
        const std::int64_t diam = std::max<std::int64_t>(1, orbit_subgraph_diameter(pl.graph, pl.circ, i));
        std::int64_t diag = 0;
        for (ArcId e : pl.circ.cycles[static_cast<size_t>(i)]) {
            for (std::int64_t x = 0; x < L; ++x) {
                const std::int32_t v = b.table.value(e, e, x);
                if (v != DeltaTable::kUnreachable) diag = std::max<std::int64_t>(diag, v);
            }
        }
        worst_ratio = std::max(worst_ratio, static_cast<double>(diag) / static_cast<double>(diam));
    }
    if (loops && worst_ratio > 16.0 * l2m) r.pass = false;
    r.detail = (loops ? "asserted, " : "reported only, ") +
               std::string("diagonal max is ") + std::to_string(worst_ratio) +
               "x the orbit diameter";
    put(r, "diag_over_orbit_diameter", worst_ratio);
    return r;
}

CheckResult check_vertex_time(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "vertex-time");
    r.asserted = false;
    if (pl.graph.is_bipartite() && !pl.graph.is_tree()) {
        return not_applicable(std::move(r), "bipartite non-tree instance");
    }
    std::int64_t d = 0;
    try {
        d = gphi_diameter(pl.graph, pl.circ, DeltaCaps{caps.shift_cap, caps.delta_state_cap});
    } catch (const CapError& err) {
        return not_applicable(std::move(r), err.what());
    } catch (const Error& err) {
        r.detail = err.what();
        return r;
    }
    const std::int64_t n = pl.graph.node_count();
    r.detail = "vertex-time diameter " + std::to_string(d);
    put(r, "vertex_time_diameter", static_cast<double>(d));
    if (n >= 2) {
        put(r, "vertex_time_ratio",
            static_cast<double>(d) /
                (static_cast<double>(pl.circ.cycle_count()) * log2_sq(n)));
    }
    return r;
}

CheckResult check_stabilization(const Pipeline& pl) {
    CheckResult r = base_result(pl, "stabilization");
    const std::int64_t bound = structural_step_bound(pl.graph, pl.trace.token_count);
    r.pass = pl.trace.preperiod <= 10 * bound;
    r.detail = "reached the recurrent class after " + std::to_string(pl.trace.preperiod) +
               " steps, structural bound " + std::to_string(bound);
    put(r, "steps", static_cast<double>(pl.trace.preperiod));
    put(r, "stabilization_ratio",
        static_cast<double>(pl.trace.preperiod) / static_cast<double>(std::max<std::int64_t>(1, bound)));
    return r;
}

CheckResult check_walk(const Pipeline& pl, const PipelineCaps& caps) {
    CheckResult r = base_result(pl, "walk");
    if (pl.circ.cycle_count() != 1) return not_applicable(std::move(r), "needs a single orbit");
    BuiltTable b = try_delta_table(pl, caps);
    if (!b.ok) return not_applicable(std::move(r), b.why);
    const std::int64_t m = pl.graph.arc_count();
    const NodeId v = pl.graph.pred(pl.circ.cycles[0][0]);
    std::vector<std::int64_t> ls{0, 1, 2, m / 2, m - 1};
    auto rng = seeded_rng(pl.spec.seed, 0x77616c6bULL);
    for (int i = 0; i < 4; ++i) ls.push_back(static_cast<std::int64_t>(uniform_below(rng, m)));
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    std::int64_t replayed = 0, skipped = 0;
    std::size_t max_fragments = 0;
    std::ostringstream why;
    for (std::int64_t l : ls) {
        // realizable iff some out-arc pair of the base reaches offset l
        std::int32_t best_pair = DeltaTable::kUnreachable;
        for (ArcId e : pl.graph.ports(v)) {
            for (ArcId f : pl.graph.ports(v)) {
                best_pair = std::min(best_pair, b.table.value(e, f, l));
            }
        }
        if (best_pair == DeltaTable::kUnreachable) {
            ++skipped;
            continue;
        }
        try {
            const Walk w = reconstruct_walk(pl.graph, pl.circ, v, l,
                                            DeltaCaps{caps.shift_cap, caps.delta_state_cap});
            replay_walk(pl.graph, pl.circ, w);
            max_fragments = std::max(max_fragments, w.fragments.size());
            if (w.fragments.size() > static_cast<size_t>(best_pair) + 1) {
                r.pass = false;
                why << "walk for class " << l << " uses " << w.fragments.size()
                    << " fragments, cap " << (best_pair + 1) << "; ";
            }
            ++replayed;
        } catch (const Error& err) {
            r.pass = false;
            why << "class " << l << ": " << err.what() << "; ";
        }
    }
    if (r.pass) {
        r.detail = std::to_string(replayed) + " walks replayed" +
                   (skipped > 0 ? ", " + std::to_string(skipped) + " classes unrealizable" : "");
    } else {
        r.detail = why.str();
    }
    put(r, "max_fragments", static_cast<double>(max_fragments));
    return r;
}

}  // namespace

Graph instance_graph(const InstanceSpec& spec) {
    const bool has_gen = !spec.generate.empty();
    const bool has_text = !spec.graph_text.empty();
    if (has_gen == has_text) {
        throw ParseError("instance '" + spec.id + "' needs exactly one graph source");
    }
    return has_gen ? generate(spec.generate) : load_graph(spec.graph_text);
}

Pipeline run_pipeline(const InstanceSpec& spec, const PipelineCaps& caps) {
    Graph graph = instance_graph(spec);
    const std::int64_t diameter = graph_diameter(graph);
    const RRState start = make_state_random(graph, spec.k, spec.seed);
    LoadTrace trace = run_until_recurrent(graph, start, caps.budget);
    Circulation circ = extract_circulation(graph, trace);
    std::int64_t shift_modulus = 0;
    try {
        shift_modulus = circ.shift_modulus(caps.shift_cap);
    } catch (const CapError&) {
        shift_modulus = 0;
    }
    const std::int64_t gcd_eta = max_label_modulus(circ);
    std::int64_t eta = gcd_eta;
    if (caps.eta_override > 0) {
        if (gcd_eta % caps.eta_override != 0) {
            throw Error("label modulus " + std::to_string(caps.eta_override) +
                        " must divide the orbit gcd " + std::to_string(gcd_eta));
        }
        eta = caps.eta_override;
    }
    Labeling labeling = make_labeling(circ, eta);
    IntersectionSet alam = intersection_set(graph, labeling);
    return Pipeline{spec,          std::move(graph), diameter, std::move(trace),
                    std::move(circ), shift_modulus,  eta,      std::move(labeling),
                    std::move(alam)};
}

std::vector<std::string> known_checks() {
    return {"structure",  "labeling",    "delta-axioms", "delta-diag",     "delta-table",
            "delta-max",  "int-mod",     "bohr",         "cover",          "spectrum-cover",
            "shrink-chain", "time-average", "idle",      "idle-wait",      "tree-window",
            "loops-diag", "vertex-time", "stabilization", "walk"};
}

CheckResult run_check(const Pipeline& pl, const std::string& id, const PipelineCaps& caps) {
    if (id == "structure") return check_structure(pl);
    if (id == "labeling") return check_labeling(pl);
    if (id == "delta-axioms") return check_delta_axioms(pl, caps);
    if (id == "delta-diag") return check_delta_diag(pl);
    if (id == "delta-table") return check_delta_table(pl, caps);
    if (id == "delta-max") return check_delta_max(pl, caps);
    if (id == "int-mod") return check_int_mod(pl);
    if (id == "bohr") return check_bohr(pl);
    if (id == "cover") return check_cover(pl);
    if (id == "spectrum-cover") return check_spectrum_cover(pl);
    if (id == "shrink-chain") return check_shrink_chain(pl);
    if (id == "time-average") return check_time_average(pl);
    if (id == "idle") return check_idle(pl);
    if (id == "idle-wait") return check_idle_wait(pl, caps);
    if (id == "tree-window") return check_tree_window(pl);
    if (id == "loops-diag") return check_loops_diag(pl, caps);
    if (id == "vertex-time") return check_vertex_time(pl, caps);
    if (id == "stabilization") return check_stabilization(pl);
    if (id == "walk") return check_walk(pl, caps);
    throw Error("unknown check id: " + id);
}

std::vector<CheckResult> run_checks(const Pipeline& pl, const std::vector<std::string>& ids,
                                    const PipelineCaps& caps) {
    std::vector<CheckResult> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(run_check(pl, id, caps));
    return out;
}

std::vector<InstanceSpec> build_family(const FamilySpec& fs) {
    std::vector<InstanceSpec> out;
    for (const std::string& kind : fs.kinds) {
        const bool verbatim = kind.find(':') != std::string::npos;
        const std::vector<std::int64_t> sizes = verbatim ? std::vector<std::int64_t>{0} : fs.sizes;
        for (std::int64_t size : sizes) {
            for (std::uint64_t seed : fs.seeds) {
                InstanceSpec proto;
                std::ostringstream id;
                if (verbatim) {
                    proto.generate = kind;
                    id << sanitize_id(kind);
                } else if (kind == "cycle") {
                    proto.generate = "cycle:n=" + std::to_string(size);
                    id << "cycle-n" << size;
                } else if (kind == "tree") {
                    proto.generate = "tree:n=" + std::to_string(size) + ",seed=" + std::to_string(seed);
                    id << "tree-n" << size;
                } else if (kind == "grid") {
                    proto.generate = "grid:rows=" + std::to_string(size) + ",cols=" + std::to_string(size);
                    id << "grid-" << size << "x" << size;
                } else if (kind == "regular") {
                    const int d = (size * 3) % 2 == 0 ? 3 : 4;
                    proto.generate = "random_regular:n=" + std::to_string(size) +
                                     ",d=" + std::to_string(d) + ",seed=" + std::to_string(seed);
                    id << "regular-n" << size << "d" << d;
                } else if (kind == "complete") {
                    proto.generate = "complete:n=" + std::to_string(size);
                    id << "complete-n" << size;
                } else if (kind == "looped_cycle") {
                    proto.generate = "looped_cycle:n=" + std::to_string(size);
                    id << "looped-cycle-n" << size;
                } else if (kind == "loops_everywhere") {
                    proto.generate = "loops_everywhere:n=" + std::to_string(size);
                    id << "loops-everywhere-n" << size;
                } else {
                    throw ParseError("unknown family kind: " + kind);
                }
                const Graph g = proto.generate.empty() ? load_graph(proto.graph_text)
                                                       : generate(proto.generate);
                const std::int64_t m = g.arc_count();
                if (fs.require_prime_m && !is_prime(m)) continue;
                std::vector<std::int64_t> ks = fs.ks.empty() ? token_ladder(m) : fs.ks;
                for (std::int64_t k : ks) {
                    if (k < 1) continue;
                    if (fs.require_coprime && std::gcd(k, m) != 1) continue;
                    InstanceSpec spec = proto;
                    spec.k = k;
                    spec.seed = seed;
                    std::ostringstream full;
                    full << id.str() << "-k" << k << "-s" << seed;
                    spec.id = full.str();
                    out.push_back(std::move(spec));
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const InstanceSpec& a, const InstanceSpec& b) { return a.id < b.id; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const InstanceSpec& a, const InstanceSpec& b) { return a.id == b.id; }),
              out.end());
    return out;
}

std::vector<InstanceSpec> acceptance_suite() {
    std::vector<InstanceSpec> out;
    const auto append = [&](std::vector<std::string> kinds, std::vector<std::int64_t> sizes) {
        FamilySpec fs;
        fs.kinds = std::move(kinds);
        fs.sizes = std::move(sizes);
        auto part = build_family(fs);
        out.insert(out.end(), part.begin(), part.end());
    };
    append({"cycle"}, {3, 4, 5, 6, 7, 9, 11, 15});
    append({"tree"}, {2, 5, 9, 17, 33});
    append({"grid:rows=2,cols=2", "grid:rows=2,cols=3", "grid:rows=3,cols=3",
            "grid:rows=3,cols=4", "grid:rows=4,cols=5", "grid:rows=5,cols=6"},
           {});
    append({"regular"}, {6, 8, 10, 12, 16, 20, 40});
    append({"random_regular:n=10,d=4,seed=1", "random_regular:n=16,d=4,seed=1"}, {});
    append({"complete"}, {4, 5, 6});
    append({"looped_cycle"}, {3, 5, 11, 23});
    append({"loops_everywhere"}, {3, 5});
    std::sort(out.begin(), out.end(),
              [](const InstanceSpec& a, const InstanceSpec& b) { return a.id < b.id; });
    return out;
}

std::vector<InstanceSpec> prime_cycle_specs(std::int64_t k) {
    std::vector<InstanceSpec> out;
    for (std::int64_t n : {11, 23, 47, 97}) {
        InstanceSpec spec;
        spec.generate = "cycle:n=" + std::to_string(n);
        spec.k = k;
        spec.seed = 1;
        spec.id = "cycle-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s1";
        out.push_back(std::move(spec));
    }
    return out;
}

MetricsReport build_metrics_report(const Pipeline& pl, const PipelineCaps& caps) {
    MetricsReport r;
    r.instance = pl.spec.id;
    r.nodes = pl.graph.node_count();
    r.arcs = pl.graph.arc_count();
    r.tokens = pl.trace.token_count;
    r.cycles = pl.circ.cycle_count();
    r.eta = pl.eta;
    r.preperiod = pl.trace.preperiod;
    r.period = pl.trace.period;
    r.load_period = load_period(pl.trace);

    const IdlenessReport ir = idleness(pl.trace);
    r.idleness_per_arc = ir.per_arc;
    r.all_arcs_visited = ir.all_visited;
    r.idleness = ir.max_gap;

    const std::int64_t p = pl.trace.period;
    std::vector<std::int64_t> dts{0, 1, 2, 4, 8, p / 4, p / 2, p};
    std::sort(dts.begin(), dts.end());
    dts.erase(std::unique(dts.begin(), dts.end()), dts.end());
    std::int64_t disc_max = 0;
    for (std::int64_t dt : dts) {
        if (dt < 0 || dt > p) continue;
        const std::int64_t v = cumulated_discrepancy(pl.trace, dt);
        disc_max = std::max(disc_max, v);
        r.cumulated_discrepancy.emplace_back(dt, v);
    }
    for (std::int64_t T : {std::int64_t{1}, std::int64_t{2}, std::int64_t{4}, p}) {
        if (T < 1) continue;
        r.time_avg_deviation.emplace_back(T, time_average_deviation(pl.trace, T).deviation);
    }

    r.empirical_delta_diag_max = -1;
    try {
        const EmpiricalDeltaTable t = EmpiricalDeltaTable::build(pl.trace, pl.circ);
        std::int64_t worst = 0;
        for (std::int64_t i = 0; i < t.cycle_count(); ++i) {
            const ArcId rep = pl.circ.cycles[static_cast<size_t>(i)].front();
            for (std::int64_t x = 0; x < t.column_period(i); ++x) {
                worst = std::max(worst, t.value(rep, rep, x));
            }
        }
        r.empirical_delta_diag_max = worst;
    } catch (const CapError&) {
        // leave the sentinel; the ratio entry below is skipped
    }

    const std::int64_t m = r.arcs;
    const std::int64_t k = r.tokens;
    const double l2m = m >= 2 ? log2_sq(m) : 1.0;
    if (ir.all_visited) {
        r.bound_ratios.emplace_back("idleness_times_k_over_m",
                                    static_cast<double>(ir.max_gap) * static_cast<double>(k) /
                                        static_cast<double>(m));
        r.bound_ratios.emplace_back("idleness_times_k_over_m_log2",
                                    static_cast<double>(ir.max_gap) * static_cast<double>(k) /
                                        (static_cast<double>(m) * l2m));
    }
    r.bound_ratios.emplace_back("discrepancy_over_gcd_log2",
                                static_cast<double>(disc_max) /
                                    (static_cast<double>(std::gcd(k, m)) * l2m));
    r.bound_ratios.emplace_back("discrepancy_over_diameter",
                                static_cast<double>(disc_max) /
                                    static_cast<double>(std::max<std::int64_t>(1, pl.diameter)));
    r.bound_ratios.emplace_back("discrepancy_over_sqrt_nodes_log2",
                                static_cast<double>(disc_max) /
                                    (std::sqrt(static_cast<double>(r.nodes)) * l2m));
    const std::int64_t sbound = structural_step_bound(pl.graph, k);
    r.bound_ratios.emplace_back("stabilization_ratio",
                                static_cast<double>(r.preperiod) /
                                    static_cast<double>(std::max<std::int64_t>(1, sbound)));
    if (r.empirical_delta_diag_max >= 0) {
        r.bound_ratios.emplace_back("window_distance_over_log2",
                                    static_cast<double>(r.empirical_delta_diag_max) / l2m);
    }
    (void)caps;
    return r;
}

void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& body) {
    if (count <= 0) return;
    int pool = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    pool = std::max(1, std::min<int>(pool, static_cast<int>(count)));
    if (pool == 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex mu;
    std::exception_ptr first_error;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(pool));
    for (int w = 0; w < pool; ++w) {
        threads.emplace_back([&]() {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                {
                    std::lock_guard<std::mutex> hold(mu);
                    if (first_error) return;
                }
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

double median_of(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return static_cast<double>(v[n / 2]);
    return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

}  // namespace

std::vector<BaselineRow> baseline_rows(const std::vector<std::int64_t>& node_counts,
                                       std::int64_t k, std::int64_t horizon_factor,
                                       std::int64_t trials, std::uint64_t seed, int workers) {
    std::vector<BaselineRow> rows(node_counts.size());
    parallel_for(static_cast<std::int64_t>(node_counts.size()), workers, [&](std::int64_t i) {
        const std::int64_t n = node_counts[static_cast<size_t>(i)];
        InstanceSpec spec;
        spec.generate = "cycle:n=" + std::to_string(n);
        spec.k = k;
        spec.seed = 1;
        spec.id = "cycle-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s1";
        const Pipeline pl = run_pipeline(spec);
        const IdlenessReport ir = idleness(pl.trace);
        const std::int64_t m = pl.graph.arc_count();
        const std::int64_t horizon = horizon_factor * m * m;
        const std::vector<std::int64_t> gaps =
            random_walk_baseline(pl.graph, k, horizon, trials, seed);
        BaselineRow row;
        row.instance = spec.id;
        row.m = m;
        row.k = k;
        row.rr_idle = ir.max_gap;
        row.horizon = horizon;
        row.walk_median_gap = median_of(gaps);
        row.separation = ir.max_gap > 0 ? row.walk_median_gap / static_cast<double>(ir.max_gap) : 0.0;
        rows[static_cast<size_t>(i)] = std::move(row);
    });
    return rows;
}

SuiteResult run_suite(const std::string& name, const FamilySpec& family,
                      const PipelineCaps& caps, int workers) {
    SuiteResult result;
    result.suite = name;

    const bool custom = !family.kinds.empty();
    std::vector<InstanceSpec> specs;
    std::vector<std::string> checks;

    if (name == "lemmas") {
        if (custom) {
            specs = build_family(family);
        } else {
            FamilySpec def;
            def.kinds = {"looped_cycle"};
            def.sizes = {3, 5, 11, 23};
            def.ks = {1, 2, 3};
            specs = build_family(def);
        }
        checks = {"structure", "labeling", "int-mod", "bohr", "cover", "delta-diag"};
    } else if (name == "idleness") {
        specs = custom ? build_family(family) : acceptance_suite();
        checks = {"idle"};
    } else if (name == "discrepancy") {
        if (custom) {
            specs = build_family(family);
        } else {
            FamilySpec a;
            a.kinds = {"cycle"};
            a.sizes = {5, 9, 15};
            a.seeds = {1};
            specs = build_family(a);
            FamilySpec b;
            b.kinds = {"grid:rows=3,cols=4", "complete:n=5", "looped_cycle"};
            b.sizes = {5};
            b.seeds = {1};
            auto extra = build_family(b);
            specs.insert(specs.end(), extra.begin(), extra.end());
        }
        checks = {"structure", "time-average"};
    } else if (name == "baseline") {
        result.baseline = baseline_rows({11, 23, 47, 97}, 2, 50, 20, 0x57414c4bULL, workers);
        return result;
    } else {
        throw Error("unknown suite: " + name);
    }

    std::vector<std::vector<CheckResult>> per_instance(specs.size());
    std::vector<SuiteRow> rows(specs.size());
    std::vector<MetricsReport> reports(specs.size());
    const bool want_rows = name == "idleness";
    const bool want_reports = name == "discrepancy";
    parallel_for(static_cast<std::int64_t>(specs.size()), workers, [&](std::int64_t i) {
        const Pipeline pl = run_pipeline(specs[static_cast<size_t>(i)], caps);
        per_instance[static_cast<size_t>(i)] = run_checks(pl, checks, caps);
        if (want_rows) {
            const IdlenessReport ir = idleness(pl.trace);
            SuiteRow row;
            row.instance = pl.spec.id;
            row.k = pl.trace.token_count;
            row.m = pl.graph.arc_count();
            row.gcd_km = std::gcd(row.k, row.m);
            row.cycles = pl.circ.cycle_count();
            row.idle = ir.max_gap;
            const double l2m = row.m >= 2 ? log2_sq(row.m) : 1.0;
            row.bound = static_cast<double>(row.m) / static_cast<double>(row.k) * l2m;
            row.ratio = ir.all_visited ? static_cast<double>(row.idle) / row.bound : -1.0;
            rows[static_cast<size_t>(i)] = std::move(row);
        }
        if (want_reports) {
            reports[static_cast<size_t>(i)] = build_metrics_report(pl, caps);
        }
    });

    for (auto& list : per_instance) {
        for (auto& cr : list) {
            if (cr.applicable && cr.asserted && !cr.pass) result.pass = false;
            result.checks.push_back(std::move(cr));
        }
    }
    std::sort(result.checks.begin(), result.checks.end(),
              [](const CheckResult& a, const CheckResult& b) {
                  return std::tie(a.instance, a.check) < std::tie(b.instance, b.check);
              });
    if (want_rows) {
        std::sort(rows.begin(), rows.end(),
                  [](const SuiteRow& a, const SuiteRow& b) { return a.instance < b.instance; });
        result.table = std::move(rows);
    }
    if (want_reports) {
        std::sort(reports.begin(), reports.end(),
                  [](const MetricsReport& a, const MetricsReport& b) {
                      return a.instance < b.instance;
                  });
        result.reports = std::move(reports);
    }
    return result;
}

}  // namespace rotorlab
