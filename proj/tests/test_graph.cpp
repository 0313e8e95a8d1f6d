#include "doctest.h"

#include "rotorlab/errors.hpp"
#include "rotorlab/graph.hpp"

using namespace rotorlab;

TEST_CASE("triangle arcs come in reverse pairs") {
    const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(g.node_count() == 3);
    CHECK(g.arc_count() == 6);
    for (ArcId e = 0; e < g.arc_count(); ++e) {
        CHECK(g.reverse(g.reverse(e)) == e);
        CHECK(g.pred(g.reverse(e)) == g.succ(e));
        CHECK(g.succ(g.reverse(e)) == g.pred(e));
        CHECK_FALSE(g.is_loop(e));
    }
    CHECK_FALSE(g.is_bipartite());
    CHECK_FALSE(g.is_tree());
}

TEST_CASE("a loop is a single self-reverse arc") {
    const Graph g = Graph::from_edges(1, {{0, 0}});
    CHECK(g.arc_count() == 1);
    CHECK(g.is_loop(0));
    CHECK(g.reverse(0) == 0);
    CHECK(g.pred(0) == 0);
    CHECK(g.succ(0) == 0);
    CHECK(g.has_loop_at_every_node());
}

TEST_CASE("port positions index the out-arc order") {
    const Graph g = generate("complete:n=4");
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& ports = g.ports(v);
        for (size_t i = 0; i < ports.size(); ++i) {
            CHECK(g.pred(ports[i]) == v);
            CHECK(g.port_position(ports[i]) == static_cast<int>(i));
        }
    }
}

TEST_CASE("text form round-trips byte for byte") {
    const Graph g = generate("tree:n=9,seed=4");
    const std::string text = g.to_text();
    const Graph back = load_graph(text);
    CHECK(back.to_text() == text);
    CHECK(back.node_count() == g.node_count());
    CHECK(back.arc_count() == g.arc_count());
}

TEST_CASE("text parser accepts comments and port overrides") {
    const std::string text =
        "# a triangle\n"
        "nodes 3\n"
        "0 1\n"
        "1 2\n"
        "2 0\n";
    const Graph g = load_graph(text);
    CHECK(g.arc_count() == 6);

    // reversing a port order must be visible in ports()
    const Graph h = load_graph(text);
    const auto original = h.ports(0);
    std::string with_ports = text + "ports 0:";
    for (auto it = original.rbegin(); it != original.rend(); ++it) {
        with_ports += " " + std::to_string(*it);
    }
    with_ports += "\n";
    const Graph j = load_graph(with_ports);
    const auto reordered = j.ports(0);
    REQUIRE(reordered.size() == original.size());
    for (size_t i = 0; i < original.size(); ++i) {
        CHECK(reordered[i] == original[original.size() - 1 - i]);
    }
}

TEST_CASE("generator shapes have the expected sizes") {
    CHECK(generate("cycle:n=7").arc_count() == 14);
    CHECK(generate("cycle:n=7").node_count() == 7);
    CHECK(generate("path:n=5").arc_count() == 8);
    CHECK(generate("path:n=5").is_tree());
    CHECK(generate("grid:rows=2,cols=3").arc_count() == 14);
    CHECK(generate("grid:rows=2,cols=3").is_bipartite());
    CHECK(generate("complete:n=4").arc_count() == 12);
    const Graph r = generate("random_regular:n=10,d=3,seed=2");
    CHECK(r.arc_count() == 30);
    for (NodeId v = 0; v < r.node_count(); ++v) CHECK(r.out_degree(v) == 3);
    const Graph t = generate("tree:n=9,seed=1");
    CHECK(t.is_tree());
    CHECK(t.arc_count() == 16);
}

TEST_CASE("generators are deterministic in their seed") {
    CHECK(generate("tree:n=17,seed=5").to_text() == generate("tree:n=17,seed=5").to_text());
    CHECK(generate("random_regular:n=12,d=3,seed=9").to_text() ==
          generate("random_regular:n=12,d=3,seed=9").to_text());
    CHECK(generate("tree:n=17,seed=5").to_text() != generate("tree:n=17,seed=6").to_text());
}

TEST_CASE("parity of cycles drives bipartiteness") {
    CHECK(generate("cycle:n=6").is_bipartite());
    CHECK_FALSE(generate("cycle:n=5").is_bipartite());
    CHECK(generate("tree:n=12,seed=3").is_bipartite());
}

TEST_CASE("diameter matches hand values") {
    CHECK(graph_diameter(generate("path:n=5")) == 4);
    CHECK(graph_diameter(generate("cycle:n=6")) == 3);
    CHECK(graph_diameter(generate("complete:n=5")) == 1);
}

TEST_CASE("malformed specs raise parse errors") {
    CHECK_THROWS_AS(generate("nonsense:n=3"), ParseError);
    CHECK_THROWS_AS(generate("cycle"), ParseError);
    CHECK_THROWS_AS(load_graph("0 1\n"), ParseError);
}
