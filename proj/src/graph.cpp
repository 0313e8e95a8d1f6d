#include "rotorlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rotorlab/errors.hpp"
#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

bool bipartite_check(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<int> color(n, -1);
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& [u, v] : edges) {
        if (u == v) return false; // odd closed walk of length 1
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::deque<NodeId> queue;
    color[0] = 0;
    queue.push_back(0);
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId w : adj[u]) {
            if (color[w] < 0) {
                color[w] = color[u] ^ 1;
                queue.push_back(w);
            } else if (color[w] == color[u]) {
                return false;
            }
        }
    }
    return true;
}

void check_connected(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(n, 0);
    std::deque<NodeId> queue{0};
    seen[0] = 1;
    NodeId reached = 1;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId w : adj[u]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    if (reached != n) {
        throw GraphError("graph is not connected (" + std::to_string(reached) + " of " +
                         std::to_string(n) + " nodes reachable)");
    }
}

} // namespace

Graph Graph::from_edges(NodeId node_count,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
    if (node_count <= 0) throw GraphError("node count must be positive");
    if (edges.empty()) throw GraphError("graph has no arcs");
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= node_count || v < 0 || v >= node_count) {
            throw GraphError("edge endpoint out of range: " + std::to_string(u) + " " +
                             std::to_string(v));
        }
    }
    check_connected(node_count, edges);

    Graph g;
    g.n_ = node_count;
    g.edges_ = edges;
    for (const auto& [u, v] : edges) {
        ArcId id = static_cast<ArcId>(g.pred_.size());
        if (u == v) {
            g.pred_.push_back(u);
            g.succ_.push_back(u);
            g.reverse_.push_back(id);
        } else {
            g.pred_.push_back(u);
            g.succ_.push_back(v);
            g.reverse_.push_back(id + 1);
            g.pred_.push_back(v);
            g.succ_.push_back(u);
            g.reverse_.push_back(id);
        }
    }
    g.ports_.assign(node_count, {});
    for (ArcId e = 0; e < g.arc_count(); ++e) g.ports_[g.pred_[e]].push_back(e);
    g.port_pos_.assign(g.arc_count(), 0);
    for (NodeId v = 0; v < node_count; ++v) g.rebuild_port_positions(v);
    g.bipartite_ = bipartite_check(node_count, edges);
    return g;
}

void Graph::rebuild_port_positions(NodeId v) {
    for (int i = 0; i < static_cast<int>(ports_[v].size()); ++i) {
        port_pos_[ports_[v][i]] = i;
    }
}

void Graph::set_ports(NodeId v, const std::vector<ArcId>& order) {
    if (v < 0 || v >= n_) throw GraphError("port override for unknown node");
    std::vector<ArcId> sorted_new = order;
    std::vector<ArcId> sorted_old = ports_[v];
    std::sort(sorted_new.begin(), sorted_new.end());
    std::sort(sorted_old.begin(), sorted_old.end());
    if (sorted_new != sorted_old) {
        throw GraphError("port order for node " + std::to_string(v) +
                         " is not a permutation of its outgoing arcs");
    }
    ports_[v] = order;
    rebuild_port_positions(v);
}

bool Graph::is_tree() const {
    if (static_cast<NodeId>(edges_.size()) != n_ - 1) return false;
    for (const auto& [u, v] : edges_) {
        if (u == v) return false;
    }
    return true; // connected with n-1 loop-free edges
}

bool Graph::has_loop_at_every_node() const {
    std::vector<char> has(n_, 0);
    for (ArcId e = 0; e < arc_count(); ++e) {
        if (is_loop(e)) has[pred_[e]] = 1;
    }
    return std::all_of(has.begin(), has.end(), [](char c) { return c != 0; });
}

std::string Graph::to_text() const {
    std::ostringstream out;
    out << "nodes " << n_ << "\n";
    for (const auto& [u, v] : edges_) out << u << " " << v << "\n";
    for (NodeId v = 0; v < n_; ++v) {
        bool sorted = std::is_sorted(ports_[v].begin(), ports_[v].end());
        if (!sorted) {
            out << "ports " << v << ":";
            for (ArcId e : ports_[v]) out << " " << e;
            out << "\n";
        }
    }
    return out.str();
}

Graph load_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    NodeId n = -1;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::pair<NodeId, std::vector<ArcId>>> port_overrides;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        auto fail = [&](const std::string& msg) {
            throw ParseError("line " + std::to_string(lineno) + ": " + msg);
        };
        if (first == "nodes") {
            if (n >= 0) fail("duplicate nodes header");
            if (!(ls >> n) || n <= 0) fail("bad node count");
        } else if (first == "ports") {
            if (n < 0) fail("ports before nodes header");
            std::string vtok;
            if (!(ls >> vtok)) fail("missing node in ports line");
            if (!vtok.empty() && vtok.back() == ':') vtok.pop_back();
            else {
                std::string colon;
                ls >> colon;
                if (colon != ":") fail("expected ':' in ports line");
            }
            NodeId v = 0;
            try {
                v = std::stoi(vtok);
            } catch (...) {
                fail("bad node in ports line");
            }
            std::vector<ArcId> order;
            ArcId e;
            while (ls >> e) order.push_back(e);
            if (!ls.eof()) fail("bad arc id in ports line");
            port_overrides.emplace_back(v, std::move(order));
        } else {
            if (n < 0) fail("edge before nodes header");
            NodeId u, v;
            std::istringstream es(line);
            if (!(es >> u >> v)) fail("bad edge line");
            std::string extra;
            if (es >> extra) fail("trailing tokens on edge line");
            edges.emplace_back(u, v);
        }
    }
    if (n < 0) throw ParseError("missing nodes header");
    Graph g = [&] {
        try {
            return Graph::from_edges(n, edges);
        } catch (const GraphError& err) {
            throw ParseError(err.what());
        }
    }();
    for (const auto& [v, order] : port_overrides) {
        if (v < 0 || v >= n) throw ParseError("ports line for unknown node");
        try {
            g.set_ports(v, order);
        } catch (const GraphError& err) {
            throw ParseError(err.what());
        }
    }
    return g;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_graph(buf.str());
}

Graph generate_cycle(int n) {
    if (n < 3) throw GraphError("cycle needs at least 3 nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, edges);
}

Graph generate_path(int n) {
    if (n < 2) throw GraphError("path needs at least 2 nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

Graph generate_tree(int n, std::uint64_t seed) {
    if (n < 2) throw GraphError("tree needs at least 2 nodes");
    auto rng = seeded_rng(seed, 0x7265657473ULL);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 1; i < n; ++i) {
        edges.emplace_back(static_cast<NodeId>(uniform_below(rng, i)), i);
    }
    return Graph::from_edges(n, edges);
}

Graph generate_grid(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2) throw GraphError("grid too small");
    auto id = [&](int r, int c) { return r * cols + c; };
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    }
    return Graph::from_edges(rows * cols, edges);
}

Graph generate_complete(int n) {
    if (n < 2) throw GraphError("complete graph needs at least 2 nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

Graph generate_looped_cycle(int n) {
    if (n < 3) throw GraphError("looped cycle needs at least 3 nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    edges.emplace_back(0, 0);
    return Graph::from_edges(n, edges);
}

Graph generate_loops_everywhere(int n) {
    if (n < 3) throw GraphError("looped cycle needs at least 3 nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, i);
    return Graph::from_edges(n, edges);
}

Graph generate_random_regular(int n, int degree, std::uint64_t seed) {
    if (degree < 1 || degree >= n) throw GraphError("regular degree must be in [1, n)");
    if ((static_cast<long long>(n) * degree) % 2 != 0) {
        throw GraphError("n * degree must be even for a regular graph");
    }
    auto rng = seeded_rng(seed, 0x72656775ULL);
    // Pairing model, resampled until the matching is simple and connected.
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<NodeId> stubs;
        stubs.reserve(static_cast<size_t>(n) * degree);
        for (NodeId v = 0; v < n; ++v)
            for (int i = 0; i < degree; ++i) stubs.push_back(v);
        for (size_t i = stubs.size(); i > 1; --i) {
            std::swap(stubs[i - 1], stubs[uniform_below(rng, i)]);
        }
        std::set<std::pair<NodeId, NodeId>> seen;
        std::vector<std::pair<NodeId, NodeId>> edges;
        bool ok = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId u = stubs[i], v = stubs[i + 1];
            if (u == v) { ok = false; break; }
            auto key = std::minmax(u, v);
            if (!seen.insert({key.first, key.second}).second) { ok = false; break; }
            edges.emplace_back(u, v);
        }
        if (!ok) continue;
        try {
            return Graph::from_edges(n, edges);
        } catch (const GraphError&) {
            continue; // disconnected pairing, resample
        }
    }
    throw GraphError("random regular sampling did not converge");
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& s) {
    std::map<std::string, std::string> kv;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("bad generator parameter: " + item);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

long long kv_int(const std::map<std::string, std::string>& kv, const std::string& key,
                 long long fallback, bool required) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (required) throw ParseError("missing generator parameter: " + key);
        return fallback;
    }
    try {
        size_t pos = 0;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw ParseError("");
        return v;
    } catch (...) {
        throw ParseError("bad integer for generator parameter " + key + ": " + it->second);
    }
}

} // namespace

Graph generate(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) kv = parse_kv(spec.substr(colon + 1));
    try {
        if (kind == "cycle") return generate_cycle(static_cast<int>(kv_int(kv, "n", 0, true)));
        if (kind == "path") return generate_path(static_cast<int>(kv_int(kv, "n", 0, true)));
        if (kind == "tree") {
            return generate_tree(static_cast<int>(kv_int(kv, "n", 0, true)),
                                 static_cast<std::uint64_t>(kv_int(kv, "seed", 0, false)));
        }
        if (kind == "grid") {
            return generate_grid(static_cast<int>(kv_int(kv, "rows", 0, true)),
                                 static_cast<int>(kv_int(kv, "cols", 0, true)));
        }
        if (kind == "complete") return generate_complete(static_cast<int>(kv_int(kv, "n", 0, true)));
        if (kind == "looped_cycle") {
            return generate_looped_cycle(static_cast<int>(kv_int(kv, "n", 0, true)));
        }
        if (kind == "loops_everywhere") {
            return generate_loops_everywhere(static_cast<int>(kv_int(kv, "n", 0, true)));
        }
        if (kind == "random_regular") {
            return generate_random_regular(static_cast<int>(kv_int(kv, "n", 0, true)),
                                           static_cast<int>(kv_int(kv, "d", 0, true)),
                                           static_cast<std::uint64_t>(kv_int(kv, "seed", 0, false)));
        }
    } catch (const GraphError& err) {
        throw ParseError(std::string("generator '") + spec + "': " + err.what());
    }
    throw ParseError("unknown generator kind: " + kind);
}

int graph_diameter(const Graph& g) {
    int diameter = 0;
    std::vector<int> dist(g.node_count());
    for (NodeId s = 0; s < g.node_count(); ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<NodeId> queue{s};
        dist[s] = 0;
        while (!queue.empty()) {
            NodeId u = queue.front();
            queue.pop_front();
            diameter = std::max(diameter, dist[u]);
            for (ArcId e : g.ports(u)) {
                NodeId w = g.succ(e);
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return diameter;
}

} // namespace rotorlab
