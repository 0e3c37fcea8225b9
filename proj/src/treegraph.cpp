#include "collatz/treegraph.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace collatz {

using u64 = std::uint64_t;

TreeGraph build_tree(u64 max_degree, const TreeLimits& limits) {
    TreeGraph g;
    g.seed_max_degree = max_degree;
    for (BitPoly n{1}; n.degree() <= max_degree; n = n.add_small(2))
        g.seeds.push_back(n);

    for (const BitPoly& seed : g.seeds) {
        BitPoly v = seed;
        u64 budget = limits.max_steps;
        while (!g.edges.contains(v)) {
            if (budget-- == 0) {
                g.truncated = true;
                break;
            }
            if (v == BitPoly{1}) {
                g.edges.emplace(v, TreeGraph::Edge{BitPoly{1}, 2});  // C_2[1] = 1
                break;
            }
            auto [next, q] = collatz_step(v);
            g.edges.emplace(v, TreeGraph::Edge{next, q});
            v = next;
        }
    }
    return g;
}

std::vector<BitPoly> path_to_sink(const TreeGraph& g, const BitPoly& n) {
    if (!g.contains(n)) throw std::invalid_argument("path_to_sink: node not in graph");
    std::vector<BitPoly> path;
    BitPoly v = n;
    while (true) {
        path.push_back(v);
        if (v == BitPoly{1}) return path;
        auto it = g.edges.find(v);
        if (it == g.edges.end())
            throw std::runtime_error("path_to_sink: path truncated before reaching 1");
        v = it->second.to;
    }
}

GraphInvariantReport graph_invariants(const TreeGraph& g) {
    GraphInvariantReport rep;
    rep.out_degree_one = !g.truncated;

    std::map<BitPoly, u64> in_degree;
    u64 self_loops = 0;
    bool sink_is_one = false;
    for (const auto& [from, edge] : g.edges) {
        ++in_degree[edge.to];
        if (edge.to == from) {
            ++self_loops;
            sink_is_one = from == BitPoly{1};
        }
    }
    rep.single_sink = self_loops == 1 && sink_is_one;

    // Cycle check over the functional graph: walk with memoized colors.
    enum class Color : unsigned char { White, Gray, Done };
    std::map<BitPoly, Color> color;
    rep.acyclic_except_sink = true;
    for (const auto& [node, _] : g.edges) {
        std::vector<BitPoly> stack;
        BitPoly v = node;
        while (true) {
            if (v == BitPoly{1}) break;
            auto [it, inserted] = color.try_emplace(v, Color::Gray);
            if (!inserted) {
                if (it->second == Color::Gray) rep.acyclic_except_sink = false;
                break;
            }
            stack.push_back(v);
            auto e = g.edges.find(v);
            if (e == g.edges.end()) break;  // truncated frontier
            v = e->second.to;
        }
        for (const auto& s : stack) color[s] = Color::Done;
        if (!rep.acyclic_except_sink) break;
    }

    rep.div3_sources = true;
    for (const auto& [node, _] : g.edges) {
        const u64 deg_in = in_degree.count(node) ? in_degree.at(node) : 0;
        if (deg_in == 0) rep.starting_nodes.push_back(node);
        if (node.mod_small(3) == 0 && deg_in != 0) rep.div3_sources = false;
    }
    return rep;
}

namespace {

std::string node_label(const BitPoly& n, NodeLabel kind) {
    return kind == NodeLabel::Decimal ? n.to_decimal_string() : n.format_poly();
}

}  // namespace

std::string to_dot(const TreeGraph& g, const DotOptions& opts) {
    std::ostringstream os;
    os << "digraph collatz {\n";
    auto visible = [&](const BitPoly& n) {
        return !opts.max_label_degree || n.is_zero() || n.degree() <= *opts.max_label_degree;
    };
    for (const auto& [from, edge] : g.edges) {
        if (!visible(from)) continue;
        if (visible(edge.to)) {
            os << "  \"" << node_label(from, opts.label) << "\" -> \""
               << node_label(edge.to, opts.label) << "\" [label=\"q=" << edge.q << "\"];\n";
            continue;
        }
        // Collapse the run of high-degree nodes into one dotted edge.
        BitPoly v = edge.to;
        u64 skipped = 0;
        while (!visible(v)) {
            auto it = g.edges.find(v);
            if (it == g.edges.end()) break;
            v = it->second.to;
            ++skipped;
        }
        if (visible(v))
            os << "  \"" << node_label(from, opts.label) << "\" -> \""
               << node_label(v, opts.label) << "\" [style=dotted, label=\"" << skipped
               << " nodes\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_graph_json(const TreeGraph& g) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [from, edge] : g.edges) {
        j["nodes"].push_back(from.to_decimal_string());
        j["edges"].push_back({{"from", from.to_decimal_string()},
                              {"to", edge.to.to_decimal_string()},
                              {"q", edge.q}});
    }
    j["truncated"] = g.truncated;
    j["seed_max_degree"] = g.seed_max_degree;
    return j.dump();
}

}  // namespace collatz
