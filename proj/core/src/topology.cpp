// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0

#include "vqekit/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vqekit/bundled.hpp"

namespace vqekit {

namespace {

using Adjacency = std::map<std::size_t, std::set<std::size_t>>;

Adjacency adjacency_of(const CouplingGraph& g) {
    Adjacency adj;
    for (const std::size_t u : g.nodes) adj[u];
    for (const auto& [key, weight] : g.edges) {
        adj[key.first].insert(key.second);
        adj[key.second].insert(key.first);
    }
    return adj;
}

// Pattern visit order: per component, start at the (min degree, min id) node
// — a path is then walked from an endpoint, which lets the greedy tiler
// consume low-degree target nodes before they get orphaned — then repeatedly
// take the unvisited node with the most already-visited neighbors (ties to
// the smallest id). Isolated remainder starts fresh components the same way.
// A caller may force the initial node (used when the first pattern node is
// pinned to a specific target node).
std::vector<std::size_t> pattern_order_impl(const Adjacency& adj,
                                            std::optional<std::size_t> root) {
    std::vector<std::size_t> order;
    std::set<std::size_t> visited;
    if (root) {
        order.push_back(*root);
        visited.insert(*root);
    }
    while (visited.size() < adj.size()) {
        std::size_t best = 0;
        bool found = false;
        std::size_t best_mapped = 0, best_degree = 0;
        for (const auto& [u, nbrs] : adj) {
            if (visited.count(u)) continue;
            std::size_t mapped = 0;
            for (const std::size_t v : nbrs) mapped += visited.count(v);
            const bool better =
                !found || mapped > best_mapped ||
                (mapped == best_mapped &&
                 (mapped > 0 ? u < best
                             : (nbrs.size() < best_degree ||
                                (nbrs.size() == best_degree && u < best))));
            if (better) {
                best = u;
                best_mapped = mapped;
                best_degree = nbrs.size();
                found = true;
            }
        }
        order.push_back(best);
        visited.insert(best);
    }
    return order;
}

std::vector<std::size_t> pattern_order(const Adjacency& adj) {
    return pattern_order_impl(adj, std::nullopt);
}

struct MatchState {
    const Adjacency& pattern;
    const Adjacency& target;
    const std::set<std::size_t>& allowed;
    const std::vector<std::size_t>& order;
    std::map<std::size_t, std::size_t> assignment;  // pattern -> target
    std::set<std::size_t> used;

    std::size_t allowed_degree(std::size_t t) const {
        std::size_t d = 0;
        for (const std::size_t v : target.at(t)) d += allowed.count(v);
        return d;
    }

    std::size_t free_degree(std::size_t t) const {
        std::size_t d = 0;
        for (const std::size_t v : target.at(t))
            d += allowed.count(v) && !used.count(v) ? 1 : 0;
        return d;
    }

    bool search(std::size_t idx) {
        if (idx == order.size()) return true;
        const std::size_t u = order[idx];
        const auto& u_nbrs = pattern.at(u);

        std::vector<std::size_t> mapped_images;
        for (const std::size_t v : u_nbrs) {
            const auto it = assignment.find(v);
            if (it != assignment.end()) mapped_images.push_back(it->second);
        }

        std::vector<std::size_t> candidates;
        if (mapped_images.empty()) {
            candidates.assign(allowed.begin(), allowed.end());
        } else {
            for (const std::size_t t : target.at(mapped_images.front()))
                candidates.push_back(t);
        }

        std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (free degree, node)
        for (const std::size_t t : candidates) {
            if (!allowed.count(t) || used.count(t)) continue;
            if (allowed_degree(t) < u_nbrs.size()) continue;
            bool adjacent_to_all = true;
            for (const std::size_t img : mapped_images) {
                if (!target.at(t).count(img)) {
                    adjacent_to_all = false;
                    break;
                }
            }
            if (!adjacent_to_all) continue;
            ranked.emplace_back(free_degree(t), t);
        }
        std::sort(ranked.begin(), ranked.end());

        for (const auto& [fd, t] : ranked) {
            assignment[u] = t;
            used.insert(t);
            if (search(idx + 1)) return true;
            used.erase(t);
            assignment.erase(u);
        }
        return false;
    }
};

// Witness enumeration used by the tiling planner. Witnesses are collected
// keyed by their image node set (two mappings with the same image occupy the
// same hardware qubits, so only the first found is kept), and enumeration
// stops once `budget` distinct images have been seen.
using WitnessByImage = std::map<std::vector<std::size_t>, EmbeddingWitness>;

struct EnumState {
    const Adjacency& pattern;
    const Adjacency& target;
    const std::set<std::size_t>& allowed;
    const std::vector<std::size_t>& order;
    WitnessByImage& out;
    std::size_t budget;
    std::map<std::size_t, std::size_t> assignment;  // pattern -> target
    std::set<std::size_t> used;

    std::size_t allowed_degree(std::size_t t) const {
        std::size_t d = 0;
        for (const std::size_t v : target.at(t)) d += allowed.count(v);
        return d;
    }

    void search(std::size_t idx) {
        if (out.size() >= budget) return;
        if (idx == order.size()) {
            out.emplace(std::vector<std::size_t>(used.begin(), used.end()), assignment);
            return;
        }
        const std::size_t u = order[idx];
        const auto& u_nbrs = pattern.at(u);

        std::vector<std::size_t> mapped_images;
        for (const std::size_t v : u_nbrs) {
            const auto it = assignment.find(v);
            if (it != assignment.end()) mapped_images.push_back(it->second);
        }

        std::vector<std::size_t> candidates;
        if (mapped_images.empty()) {
            candidates.assign(allowed.begin(), allowed.end());
        } else {
            for (const std::size_t t : target.at(mapped_images.front()))
                candidates.push_back(t);
        }

        for (const std::size_t t : candidates) {
            if (!allowed.count(t) || used.count(t)) continue;
            if (allowed_degree(t) < u_nbrs.size()) continue;
            bool adjacent_to_all = true;
            for (const std::size_t img : mapped_images) {
                if (!target.at(t).count(img)) {
                    adjacent_to_all = false;
                    break;
                }
            }
            if (!adjacent_to_all) continue;
            assignment[u] = t;
            used.insert(t);
            search(idx + 1);
            used.erase(t);
            assignment.erase(u);
            if (out.size() >= budget) return;
        }
    }
};

// All embeddings (up to `budget` distinct images) whose image contains the
// anchor target node: every pattern node takes a turn as the anchor's
// preimage, so blocks through a chain's interior are found as well.
void enumerate_anchored(const Adjacency& pattern, const Adjacency& target,
                        const std::set<std::size_t>& allowed, std::size_t anchor,
                        std::size_t budget, WitnessByImage& out) {
    std::size_t anchor_degree = 0;
    for (const std::size_t v : target.at(anchor)) anchor_degree += allowed.count(v);
    for (const auto& [u, nbrs] : pattern) {
        if (out.size() >= budget) break;
        if (anchor_degree < nbrs.size()) continue;
        const std::vector<std::size_t> order = pattern_order_impl(pattern, u);
        EnumState state{pattern, target, allowed, order, out, budget, {{u, anchor}}, {anchor}};
        state.search(1);
    }
}

// Waste estimate for a partially packed target: connected components smaller
// than the pattern can never host another block, and a larger component can
// cover at most a multiple of the pattern size.
std::size_t packing_waste(const Adjacency& target, const std::set<std::size_t>& remaining,
                          std::size_t k) {
    std::size_t waste = 0;
    std::set<std::size_t> seen;
    for (const std::size_t start : remaining) {
        if (!seen.insert(start).second) continue;
        std::vector<std::size_t> stack{start};
        std::size_t size = 0;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            ++size;
            for (const std::size_t v : target.at(u))
                if (remaining.count(v) && seen.insert(v).second) stack.push_back(v);
        }
        waste += size < k ? size : size % k;
    }
    return waste;
}

// Packing count of the waste-minimizing greedy, used to score candidate
// blocks in plan_tiling: each round anchors at the smallest remaining node,
// takes the witness whose removal leaves the least component waste (ties to
// the lexicographically smallest image), and discards the anchor when no
// witness covers it.
std::size_t greedy_pack_count(const Adjacency& pattern, const Adjacency& target,
                              std::set<std::size_t> remaining, std::size_t budget) {
    const std::size_t k = pattern.size();
    std::size_t count = 0;
    while (!remaining.empty()) {
        const std::size_t anchor = *remaining.begin();
        WitnessByImage cands;
        if (remaining.size() >= k)
            enumerate_anchored(pattern, target, remaining, anchor, budget, cands);
        if (cands.empty()) {
            remaining.erase(remaining.begin());
            continue;
        }
        const std::vector<std::size_t>* best = nullptr;
        std::size_t best_waste = 0;
        for (const auto& [image, witness] : cands) {
            std::set<std::size_t> rest = remaining;
            for (const std::size_t v : image) rest.erase(v);
            const std::size_t w = packing_waste(target, rest, k);
            if (best == nullptr || w < best_waste) {
                best = &image;
                best_waste = w;
            }
        }
        for (const std::size_t v : *best) remaining.erase(v);
        ++count;
    }
    return count;
}

}  // namespace

void HardwareTopology::validate() const {
    if (graph.nodes.empty())
        throw std::invalid_argument("HardwareTopology: graph has no nodes");
    for (const auto& [key, weight] : graph.edges)
        if (weight != 1)
            throw std::invalid_argument("HardwareTopology: edge weights must be 1");
    // Connectivity by breadth-first traversal.
    const Adjacency adj = adjacency_of(graph);
    std::set<std::size_t> seen;
    std::vector<std::size_t> frontier{*graph.nodes.begin()};
    seen.insert(frontier.front());
    while (!frontier.empty()) {
        const std::size_t u = frontier.back();
        frontier.pop_back();
        for (const std::size_t v : adj.at(u))
            if (seen.insert(v).second) frontier.push_back(v);
    }
    if (seen.size() != graph.nodes.size())
        throw std::invalid_argument("HardwareTopology: graph is not connected");
}

HardwareTopology parse_topology(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("topology: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw std::invalid_argument("topology: expected object with nodes and edges");

    HardwareTopology t;
    try {
        if (j.contains("name")) t.name = j.at("name").get<std::string>();
        for (const auto& node : j.at("nodes"))
            t.graph.add_node(node.get<std::size_t>());
        for (const auto& edge : j.at("edges")) {
            if (!edge.is_array() || edge.size() != 2)
                throw std::invalid_argument("topology: edges must be [u, v] pairs");
            const auto u = edge[0].get<std::size_t>();
            const auto v = edge[1].get<std::size_t>();
            if (!t.graph.nodes.count(u) || !t.graph.nodes.count(v))
                throw std::invalid_argument("topology: edge references unknown node");
            if (t.graph.has_edge(u, v))
                throw std::invalid_argument("topology: duplicate edge");
            t.graph.add_edge(u, v);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("topology: ") + e.what());
    }
    t.validate();
    return t;
}

HardwareTopology load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_topology(buffer.str());
}

bool is_bundled_topology(std::string_view name) {
    for (const auto& n : bundled::topology_names())
        if (n == name) return true;
    return false;
}

HardwareTopology load_bundled_topology(std::string_view name) {
    return parse_topology(bundled::topology_text(name));
}

std::optional<EmbeddingWitness> find_subgraph_embedding(const CouplingGraph& pattern,
                                                        const CouplingGraph& target) {
    return find_subgraph_embedding(pattern, target, target.nodes);
}

std::optional<EmbeddingWitness> find_subgraph_embedding(const CouplingGraph& pattern,
                                                        const CouplingGraph& target,
                                                        const std::set<std::size_t>& allowed) {
    if (pattern.nodes.empty()) return EmbeddingWitness{};
    if (pattern.nodes.size() > allowed.size()) return std::nullopt;

    const Adjacency pat_adj = adjacency_of(pattern);
    const Adjacency tgt_adj = adjacency_of(target);
    for (const std::size_t t : allowed)
        if (!tgt_adj.count(t))
            throw std::invalid_argument("find_subgraph_embedding: allowed node not in target");

    const std::vector<std::size_t> order = pattern_order(pat_adj);
    MatchState state{pat_adj, tgt_adj, allowed, order, {}, {}};
    if (state.search(0)) return state.assignment;
    return std::nullopt;
}

bool subgraph_isomorphic(const CouplingGraph& pattern, const CouplingGraph& target) {
    return find_subgraph_embedding(pattern, target).has_value();
}

void check_embedding_witness(const CouplingGraph& pattern, const CouplingGraph& target,
                             const EmbeddingWitness& witness) {
    std::set<std::size_t> images;
    for (const std::size_t u : pattern.nodes) {
        const auto it = witness.find(u);
        if (it == witness.end())
            throw std::invalid_argument("embedding witness: node " + std::to_string(u) +
                                        " unmapped");
        if (!target.nodes.count(it->second))
            throw std::invalid_argument("embedding witness: image not a target node");
        if (!images.insert(it->second).second)
            throw std::invalid_argument("embedding witness: mapping is not injective");
    }
    for (const auto& [key, weight] : pattern.edges) {
        if (!target.has_edge(witness.at(key.first), witness.at(key.second)))
            throw std::invalid_argument("embedding witness: edge (" +
                                        std::to_string(key.first) + ", " +
                                        std::to_string(key.second) +
                                        ") maps to a non-edge");
    }
}

void BiasOptions::validate() const {
    if (!(strength > 0.0)) throw std::invalid_argument("BiasOptions: strength must be > 0");
    if (candidate_budget == 0)
        throw std::invalid_argument("BiasOptions: candidate budget must be positive");
}

namespace {

std::uint64_t deletion_cost(const CouplingGraph& g, const std::vector<std::size_t>& subset,
                            bool single_count) {
    if (!single_count) {
        std::uint64_t s = 0;
        for (const std::size_t u : subset) s += g.node_strength(u);
        return s;
    }
    std::uint64_t s = 0;
    for (const auto& [key, weight] : g.edges) {
        const bool hit = std::find(subset.begin(), subset.end(), key.first) != subset.end() ||
                         std::find(subset.begin(), subset.end(), key.second) != subset.end();
        if (hit) s += weight;
    }
    return s;
}

CouplingGraph delete_nodes(const CouplingGraph& g, const std::vector<std::size_t>& subset) {
    CouplingGraph out;
    for (const std::size_t u : g.nodes)
        if (std::find(subset.begin(), subset.end(), u) == subset.end()) out.add_node(u);
    for (const auto& [key, weight] : g.edges)
        if (out.nodes.count(key.first) && out.nodes.count(key.second))
            out.add_edge(key.first, key.second, weight);
    return out;
}

void enumerate_subsets(const std::vector<std::size_t>& nodes, std::size_t d,
                       std::vector<std::size_t>& current,
                       std::vector<std::vector<std::size_t>>& out, std::size_t first) {
    if (current.size() == d) {
        out.push_back(current);
        return;
    }
    for (std::size_t i = first; i < nodes.size(); ++i) {
        current.push_back(nodes[i]);
        enumerate_subsets(nodes, d, current, out, i + 1);
        current.pop_back();
    }
}

}  // namespace

double isomorphism_bias(const CouplingGraph& interaction_graph, const HardwareTopology& target,
                        const BiasOptions& options) {
    options.validate();
    if (subgraph_isomorphic(interaction_graph, target.graph)) return 1.0;

    const double total = static_cast<double>(interaction_graph.total_weight());
    const std::vector<std::size_t> nodes(interaction_graph.nodes.begin(),
                                         interaction_graph.nodes.end());

    for (std::size_t d = 1; d <= options.max_depth && d <= nodes.size(); ++d) {
        std::vector<std::vector<std::size_t>> subsets;
        std::vector<std::size_t> scratch;
        enumerate_subsets(nodes, d, scratch, subsets, 0);

        std::vector<std::pair<std::uint64_t, std::size_t>> ranked;  // (s, subset index)
        ranked.reserve(subsets.size());
        for (std::size_t i = 0; i < subsets.size(); ++i)
            ranked.emplace_back(deletion_cost(interaction_graph, subsets[i],
                                              options.single_count_s),
                                i);
        // Lexicographic node order breaks cost ties: enumeration is already
        // lexicographic, and the sort is stable.
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        if (ranked.size() > options.candidate_budget) ranked.resize(options.candidate_budget);

        for (const auto& [cost, idx] : ranked) {
            const CouplingGraph pruned = delete_nodes(interaction_graph, subsets[idx]);
            if (subgraph_isomorphic(pruned, target.graph)) {
                const double fraction = 1.0 - static_cast<double>(cost) / total;
                return std::pow(std::max(0.0, fraction), options.strength);
            }
        }
    }
    return 0.0;
}

CouplingGraph extend_with_exponential(CouplingGraph graph, const PauliString& p) {
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < p.n_qubits(); ++q)
        if (p.letter(q) != 'I') support.push_back(q);
    for (const std::size_t q : support) graph.add_node(q);
    for (std::size_t i = 0; i + 1 < support.size(); ++i)
        graph.add_edge(support[i], support[i + 1]);
    return graph;
}

double isomorphism_bias(const PauliString& p, const Circuit& circuit,
                        const HardwareTopology& target, const BiasOptions& options) {
    return isomorphism_bias(extend_with_exponential(coupling_graph(circuit), p), target,
                            options);
}

TilingPlan plan_tiling(const CouplingGraph& interaction_graph, const HardwareTopology& target) {
    if (interaction_graph.nodes.empty())
        throw std::invalid_argument("plan_tiling: interaction graph has no nodes");

    const Adjacency pat_adj = adjacency_of(interaction_graph);
    const Adjacency tgt_adj = adjacency_of(target.graph);
    const std::size_t k = pat_adj.size();
    constexpr std::size_t kEnumerationBudget = 4096;

    // Greedy packing, anchored at the smallest remaining node each round so
    // no region is left behind. A plain first-fit strands nodes next to the
    // chosen block, so every candidate witness through the anchor is scored
    // by greedily completing the packing from the state it leaves behind and
    // the best completion wins (ties to the lexicographically smallest
    // image). An anchor no witness covers can never be used later — every
    // other node of such a witness is still remaining — so it is dropped.
    TilingPlan plan;
    std::set<std::size_t> remaining = target.graph.nodes;
    while (!remaining.empty()) {
        const std::size_t anchor = *remaining.begin();
        WitnessByImage cands;
        if (remaining.size() >= k)
            enumerate_anchored(pat_adj, tgt_adj, remaining, anchor, kEnumerationBudget, cands);
        if (cands.empty()) {
            remaining.erase(remaining.begin());
            continue;
        }
        const std::vector<std::size_t>* best_image = nullptr;
        const EmbeddingWitness* best_witness = nullptr;
        std::size_t best_score = 0;
        for (const auto& [image, witness] : cands) {
            if (cands.size() == 1) {
                best_image = &image;
                best_witness = &witness;
                break;
            }
            std::set<std::size_t> rest = remaining;
            for (const std::size_t v : image) rest.erase(v);
            const std::size_t score =
                1 + greedy_pack_count(pat_adj, tgt_adj, std::move(rest), kEnumerationBudget);
            if (best_image == nullptr || score > best_score) {
                best_image = &image;
                best_witness = &witness;
                best_score = score;
            }
        }
        TilingPlan::Block block;
        block.mapping = *best_witness;
        for (const std::size_t v : *best_image) {
            block.nodes.insert(v);
            remaining.erase(v);
        }
        plan.blocks.push_back(std::move(block));
    }
    plan.unused = target.graph.nodes;
    for (const auto& block : plan.blocks)
        for (const std::size_t v : block.nodes) plan.unused.erase(v);
    if (plan.blocks.empty())
        throw std::runtime_error("plan_tiling: circuit graph does not embed in " + target.name);
    return plan;
}

}  // namespace vqekit
