#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qaemu/graph.hpp"
#include "qaemu/ising.hpp"
#include "qaemu/sampleset.hpp"

namespace qaemu {

// Map from logical variables to disjoint chains of hardware qubits, plus
// the ferromagnetic chain strength gamma applied as coupling -gamma on every
// intra-chain hardware edge.
struct Embedding {
    std::map<std::uint32_t, std::vector<std::uint32_t>> chains;  // logical -> sorted qubits
    double chain_strength = 1.0;

    // All chain qubits, sorted ascending. Embedded models index spins by
    // position in this list; unembed relies on the same order.
    std::vector<std::uint32_t> active_qubits() const;
};

struct EmbeddingValidation {
    bool ok = true;
    std::vector<std::string> violations;
};

// Logical coupling graph of a model: the (i, j) pairs with J != 0.
std::vector<std::pair<std::uint32_t, std::uint32_t>> logical_edges(const IsingModel& model);

// Checks the three embedding invariants: chains pairwise disjoint, each
// chain connected in the hardware graph, and every logical edge covered by
// at least one hardware edge between the two chains.
EmbeddingValidation validate_embedding(
    const Embedding& emb, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
    const HardwareGraph& hardware);

// Randomized greedy embedding: variables are placed in degree order (random
// tie-break), each new chain grown by BFS paths through free qubits toward
// the already-placed neighbor chains. Bounded restarts with per-restart
// sub-seeds; the first restart index that succeeds wins, so the result is
// deterministic per seed. Throws "provably impossible" when the problem has
// more variables than the hardware has qubits, and "no embedding found"
// when all restarts fail.
Embedding find_embedding(std::size_t num_variables,
                         const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                         const HardwareGraph& hardware, std::uint64_t seed,
                         unsigned max_restarts = 64);

// Hardware-indexed model: each logical h_i is split equally across chain(i),
// each logical J_ij is placed on the lowest-id hardware edge joining the two
// chains, and every intra-chain hardware edge receives coupling -gamma.
// Spins are indexed densely by position in emb.active_qubits(); the logical
// offset carries over unchanged.
IsingModel embed_model(const IsingModel& model, const Embedding& emb,
                       const HardwareGraph& hardware);

// Number of hardware edges internal to chains. For an unbroken read,
// hardware_energy = logical_energy - gamma * intra_chain_edges.
std::size_t intra_chain_edges(const Embedding& emb, const HardwareGraph& hardware);

enum class ChainBreakPolicy { Majority, Discard };

struct UnembedResult {
    Sampleset sampleset;
    double break_fraction = 0.0;
};

// Collapses each chain of every read to one logical spin. Majority takes
// the majority sign (even-split ties resolved by a seeded coin flip per row
// and chain); discard drops reads containing any broken chain. Logical
// energies are recomputed against the logical model.
UnembedResult unembed(const Sampleset& sampleset, const IsingModel& logical_model,
                      const Embedding& emb, ChainBreakPolicy policy, std::uint64_t seed);

}  // namespace qaemu
