// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Hardware coupling topologies, subgraph-isomorphism matching, the
// approximate-isomorphism bias used by hardware-aware operator scoring, and
// the greedy circuit-tiling planner.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vqekit/circuit.hpp"
#include "vqekit/pauli.hpp"

namespace vqekit {

struct HardwareTopology {
    std::string name;
    CouplingGraph graph;  // unit weights

    // Throws std::invalid_argument unless nonempty and connected.
    void validate() const;
};

// JSON shape: {"name": "...", "nodes": [0, 1, ...], "edges": [[u, v], ...]}.
HardwareTopology parse_topology(std::string_view json_text);
HardwareTopology load_topology_file(const std::string& path);

// Bundled chips: "falcon27" (27 qubits) and "eagle127" (127 qubits).
bool is_bundled_topology(std::string_view name);
HardwareTopology load_bundled_topology(std::string_view name);

// Injective node map with (u,v) in pattern edges => (map u, map v) in target
// edges. Empty optional when no embedding exists (including the trivial case
// of more pattern nodes than allowed target nodes).
using EmbeddingWitness = std::map<std::size_t, std::size_t>;
std::optional<EmbeddingWitness> find_subgraph_embedding(const CouplingGraph& pattern,
                                                        const CouplingGraph& target);
// Restricts the image to `allowed` target nodes (used by the tiler).
std::optional<EmbeddingWitness> find_subgraph_embedding(const CouplingGraph& pattern,
                                                        const CouplingGraph& target,
                                                        const std::set<std::size_t>& allowed);
bool subgraph_isomorphic(const CouplingGraph& pattern, const CouplingGraph& target);

// Throws std::invalid_argument if any pattern edge fails to map to a target
// edge under `witness` (also checks injectivity and completeness).
void check_embedding_witness(const CouplingGraph& pattern, const CouplingGraph& target,
                             const EmbeddingWitness& witness);

struct BiasOptions {
    double strength = 1.0;          // exponent b > 0
    std::size_t max_depth = 2;      // deletion search depth D
    std::size_t candidate_budget = 20000;  // deletion candidates kept per depth
    // The deletion cost s(n) sums each deleted node's incident weight, so an
    // edge inside the deleted set counts once per endpoint. This switch
    // changes it to count each incident edge once in total.
    bool single_count_s = false;

    void validate() const;
};

// Deletion-search bias on an explicit interaction graph: 1 when already
// embeddable; otherwise the first embeddable deletion of size d = 1..D in
// ascending (s(n), lexicographic) order yields max(0, 1 - s/W)^b; exhaustion
// yields 0.
double isomorphism_bias(const CouplingGraph& interaction_graph, const HardwareTopology& target,
                        const BiasOptions& options = {});

// Same, on the graph of `circuit` extended by the two-qubit pairs that
// compiling e^{i theta p} would add.
double isomorphism_bias(const PauliString& p, const Circuit& circuit,
                        const HardwareTopology& target, const BiasOptions& options = {});

// Adds p's support qubits and the CNOT-ladder pairs (consecutive support
// qubits, ascending) to a copy of `graph` — the interaction graph of the
// circuit extended by e^{i theta p}, without recompiling.
CouplingGraph extend_with_exponential(CouplingGraph graph, const PauliString& p);

struct TilingPlan {
    struct Block {
        std::set<std::size_t> nodes;   // image on the hardware
        EmbeddingWitness mapping;      // circuit qubit -> hardware qubit
    };
    std::vector<Block> blocks;
    std::set<std::size_t> unused;
};

// Greedy maximal packing of disjoint embeddings; deterministic. Throws
// std::runtime_error when the graph does not embed even once.
TilingPlan plan_tiling(const CouplingGraph& interaction_graph, const HardwareTopology& target);

}  // namespace vqekit
