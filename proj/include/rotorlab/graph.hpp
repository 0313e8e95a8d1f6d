#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rotorlab {

using NodeId = std::int32_t;
using ArcId = std::int32_t;

// Symmetric directed multigraph. Every arc e = (u, v) has a reverse arc
// (v, u); a loop is a single arc that is its own reverse. Each node owns a
// cyclic order over its outgoing arcs (its port order), which drives the
// round-robin dynamics. Connectivity and the reverse involution are
// enforced at construction; instances are immutable afterwards except for
// port-order overrides.
class Graph {
public:
    // edges are undirected: (u, v) with u != v adds the arc pair
    // (u->v, v->u) with consecutive ids; (v, v) adds one loop arc.
    static Graph from_edges(NodeId node_count,
                            const std::vector<std::pair<NodeId, NodeId>>& edges);

    NodeId node_count() const { return n_; }
    ArcId arc_count() const { return static_cast<ArcId>(pred_.size()); }

    NodeId pred(ArcId e) const { return pred_[e]; }
    NodeId succ(ArcId e) const { return succ_[e]; }
    ArcId reverse(ArcId e) const { return reverse_[e]; }
    bool is_loop(ArcId e) const { return reverse_[e] == e; }

    // Cyclic outgoing-arc order at v.
    const std::vector<ArcId>& ports(NodeId v) const { return ports_[v]; }
    int out_degree(NodeId v) const { return static_cast<int>(ports_[v].size()); }
    // Position of e within ports(pred(e)).
    int port_position(ArcId e) const { return port_pos_[e]; }

    // Replaces the port order at v; order must be a permutation of the
    // current outgoing arcs of v.
    void set_ports(NodeId v, const std::vector<ArcId>& order);

    bool is_bipartite() const { return bipartite_; }
    bool is_tree() const;
    bool has_loop_at_every_node() const;

    // Undirected edge list in creation order (loops as (v, v)).
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

    // Round-trips through load_graph; byte-identical for equal inputs.
    std::string to_text() const;

private:
    Graph() = default;

    NodeId n_ = 0;
    std::vector<NodeId> pred_, succ_;
    std::vector<ArcId> reverse_;
    std::vector<std::vector<ArcId>> ports_;
    std::vector<int> port_pos_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    bool bipartite_ = false;

    void rebuild_port_positions(NodeId v);
};

// Text format: '#' comments, a "nodes N" header line, one "u v" line per
// undirected edge (u == v for a loop), then optional "ports v: e0 e1 ..."
// overrides listing arc ids.
Graph load_graph(const std::string& text);
Graph load_graph_file(const std::string& path);

Graph generate_cycle(int n);
Graph generate_path(int n);
Graph generate_tree(int n, std::uint64_t seed);
Graph generate_grid(int rows, int cols);
Graph generate_complete(int n);
Graph generate_random_regular(int n, int degree, std::uint64_t seed);
// Cycle with one loop at node 0; the odd arc count breaks bipartiteness.
Graph generate_looped_cycle(int n);
// Cycle with a loop at every node.
Graph generate_loops_everywhere(int n);

// Spec strings like "cycle:n=7", "grid:rows=3,cols=4",
// "random_regular:n=10,d=3,seed=7".
Graph generate(const std::string& spec);

// Exact node-to-node diameter by BFS from every node.
int graph_diameter(const Graph& g);

} // namespace rotorlab
