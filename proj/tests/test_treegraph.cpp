#include <doctest.h>

#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "collatz/treegraph.hpp"

using namespace collatz;

namespace {

// Minimal structural check of the DOT digraph dialect we emit.
bool dot_parses(const std::string& dot) {
    std::size_t i = 0;
    auto expect = [&](const std::string& tok) {
        if (dot.compare(i, tok.size(), tok) != 0) return false;
        i += tok.size();
        return true;
    };
    auto skip_ws = [&] { while (i < dot.size() && std::isspace((unsigned char)dot[i])) ++i; };
    auto quoted = [&] {
        if (dot[i] != '"') return false;
        ++i;
        while (i < dot.size() && dot[i] != '"') ++i;
        if (i == dot.size()) return false;
        ++i;
        return true;
    };
    skip_ws();
    if (!expect("digraph")) return false;
    skip_ws();
    while (i < dot.size() && dot[i] != '{') ++i;
    if (!expect("{")) return false;
    skip_ws();
    while (i < dot.size() && dot[i] != '}') {
        if (!quoted()) return false;
        skip_ws();
        if (!expect("->")) return false;
        skip_ws();
        if (!quoted()) return false;
        skip_ws();
        if (dot[i] == '[') {
            while (i < dot.size() && dot[i] != ']') ++i;
            if (!expect("]")) return false;
        }
        skip_ws();
        if (!expect(";")) return false;
        skip_ws();
    }
    return expect("}");
}

}  // namespace

TEST_CASE("degree-zero tree is the sink self-loop") {
    const auto g = build_tree(0);
    CHECK(g.node_count() == 1);
    REQUIRE(g.contains(BitPoly{1}));
    CHECK(g.edges.at(BitPoly{1}).to == BitPoly{1});
    CHECK(g.edges.at(BitPoly{1}).q == 2);
    CHECK_FALSE(g.truncated);
}

TEST_CASE("degree-2 closure") {
    const auto g = build_tree(2);
    CHECK(g.seeds == std::vector<BitPoly>{BitPoly{1}, BitPoly{3}, BitPoly{5}, BitPoly{7}});
    for (std::uint64_t n : {1, 3, 5, 7, 11, 17, 13}) CHECK(g.contains(BitPoly{n}));
    CHECK(g.node_count() == 7);
    for (const auto& [node, _] : g.edges)
        CHECK(path_to_sink(g, node).back() == BitPoly{1});
}

TEST_CASE("degree-4 closure contains the long mersenne path") {
    const auto g = build_tree(4);
    const auto path = path_to_sink(g, BitPoly{31});
    // 31 -> 47 -> 71 -> 107 -> 161 -> ... -> 23 -> 35 -> 53 -> 5 -> 1
    CHECK(path[1] == BitPoly{47});
    CHECK(path[4] == BitPoly{161});
    bool has23 = false;
    for (const auto& n : path) has23 = has23 || n == BitPoly{23};
    CHECK(has23);
    CHECK(path.back() == BitPoly{1});
    // Intermediate nodes above degree 4 are present in full.
    CHECK(g.contains(BitPoly{3077}));
}

TEST_CASE("path_to_sink") {
    const auto g = build_tree(2);
    CHECK(path_to_sink(g, BitPoly{1}) == std::vector<BitPoly>{BitPoly{1}});
    CHECK(path_to_sink(g, BitPoly{7}) ==
          std::vector<BitPoly>{BitPoly{7}, BitPoly{11}, BitPoly{17}, BitPoly{13}, BitPoly{5},
                               BitPoly{1}});
    CHECK_THROWS_AS((void)path_to_sink(g, BitPoly{9}), std::invalid_argument);
}

TEST_CASE("graph invariants") {
    for (std::uint64_t d = 0; d <= 8; ++d) {
        const auto g = build_tree(d);
        const auto rep = graph_invariants(g);
        CHECK(rep.single_sink);
        CHECK(rep.out_degree_one);
        CHECK(rep.acyclic_except_sink);
        CHECK(rep.div3_sources);
    }
    const auto g = build_tree(6);
    const auto rep = graph_invariants(g);
    // 27 = 3*9 is in the closed degree-6 graph and must be a source.
    REQUIRE(g.contains(BitPoly{27}));
    bool starts27 = false;
    for (const auto& n : rep.starting_nodes) starts27 = starts27 || n == BitPoly{27};
    CHECK(starts27);
}

TEST_CASE("graph monotonicity in max_degree") {
    const auto small = build_tree(4);
    const auto large = build_tree(6);
    for (const auto& [node, edge] : small.edges) {
        REQUIRE(large.contains(node));
        CHECK(large.edges.at(node).to == edge.to);
    }
}

TEST_CASE("DOT output") {
    const auto g0 = build_tree(0);
    const auto dot0 = to_dot(g0);
    CHECK(dot0.find("\"1\" -> \"1\" [label=\"q=2\"];") != std::string::npos);
    CHECK(dot_parses(dot0));

    const auto g2 = build_tree(2);
    const auto dot2 = to_dot(g2);
    CHECK(dot_parses(dot2));
    CHECK(std::count(dot2.begin(), dot2.end(), '>') == 7);  // 7 edges

    DotOptions poly_opts;
    poly_opts.label = NodeLabel::Poly;
    const auto dot_poly = to_dot(build_tree(4), poly_opts);
    CHECK(dot_poly.find("\"x^4+1\"") != std::string::npos);

    // Byte-stable across rebuilds.
    CHECK(to_dot(build_tree(4)) == to_dot(build_tree(4)));
}

TEST_CASE("DOT elision collapses high-degree runs") {
    DotOptions opts;
    opts.max_label_degree = 4;
    const auto dot = to_dot(build_tree(4), opts);
    CHECK(dot_parses(dot));
    CHECK(dot.find("style=dotted") != std::string::npos);
    CHECK(dot.find("\"3077\"") == std::string::npos);
}

TEST_CASE("graph JSON dump") {
    const auto j = nlohmann::json::parse(to_graph_json(build_tree(2)));
    CHECK(j["nodes"].size() == 7);
    CHECK(j["edges"].size() == 7);
    CHECK(j["truncated"] == false);
    bool found = false;
    for (const auto& e : j["edges"])
        found = found || (e["from"] == "7" && e["to"] == "11" && e["q"] == 1);
    CHECK(found);
}
