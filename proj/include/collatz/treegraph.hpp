#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collatz/core.hpp"

namespace collatz {

// Functional graph of the accelerated map over odd values: every node
// has one outgoing edge n -> collatz_step(n), the node 1 carries its
// self-loop (q = 2), and in a fully closed graph every node reaches 1.
struct TreeGraph {
    struct Edge {
        BitPoly to;
        std::uint64_t q = 0;
    };
    std::map<BitPoly, Edge> edges;   // node -> successor; node set = keys
    std::vector<BitPoly> seeds;      // degree-bounded generating set
    std::uint64_t seed_max_degree = 0;
    bool truncated = false;          // some path hit the step limit

    bool contains(const BitPoly& n) const { return edges.contains(n); }
    std::size_t node_count() const { return edges.size(); }
};

struct TreeLimits {
    std::uint64_t max_steps = 1'000'000;  // per-seed closure budget
};

// Seeds every odd value of degree <= max_degree and follows the map,
// adding all intermediate nodes (of any degree) until each path reaches
// 1 or an already-present node.
TreeGraph build_tree(std::uint64_t max_degree, const TreeLimits& limits = {});

// Unique node sequence from n to 1 inclusive. Throws on unknown nodes
// and on paths cut short by truncation.
std::vector<BitPoly> path_to_sink(const TreeGraph& g, const BitPoly& n);

struct GraphInvariantReport {
    bool single_sink = false;          // exactly one self-loop node, and it is 1
    bool out_degree_one = false;       // every node has its edge
    bool acyclic_except_sink = false;  // no cycle besides the loop at 1
    bool div3_sources = false;         // nodes divisible by 3 have in-degree 0
    std::vector<BitPoly> starting_nodes;  // in-degree 0 within the graph
    bool all_ok() const {
        return single_sink && out_degree_one && acyclic_except_sink && div3_sources;
    }
};

GraphInvariantReport graph_invariants(const TreeGraph& g);

enum class NodeLabel { Decimal, Poly };

struct DotOptions {
    NodeLabel label = NodeLabel::Decimal;
    // When set, runs of nodes with degree above this are collapsed into
    // a single dotted edge, mirroring an abbreviated figure.
    std::optional<std::uint64_t> max_label_degree;
};

// Deterministic DOT rendering: nodes ascending by value, edges labeled
// with q.
std::string to_dot(const TreeGraph& g, const DotOptions& opts = {});

// {"nodes":[...], "edges":[{"from","to","q"}]} with decimal strings.
std::string to_graph_json(const TreeGraph& g);

}  // namespace collatz
