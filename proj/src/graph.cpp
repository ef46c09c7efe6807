#include "qaemu/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace qaemu {

HardwareGraph::HardwareGraph(std::vector<std::uint32_t> nodes,
                             std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                             TopologyDescriptor topology)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), topology_(std::move(topology)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    if (nodes_.empty()) throw std::invalid_argument("hardware graph must have at least one node");

    const std::uint32_t max_id = nodes_.back();
    node_index_.assign(static_cast<std::size_t>(max_id) + 1, UINT32_MAX);
    for (std::uint32_t k = 0; k < nodes_.size(); ++k) node_index_[nodes_[k]] = k;

    for (auto& [a, b] : edges_) {
        if (a == b) throw std::invalid_argument("hardware graph edge is a self-loop");
        if (a > b) std::swap(a, b);
        if (!has_node(a) || !has_node(b))
            throw std::invalid_argument("hardware graph edge references unknown node");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    adjacency_.resize(nodes_.size());
    for (const auto& [a, b] : edges_) {
        adjacency_[node_index_[a]].push_back(b);
        adjacency_[node_index_[b]].push_back(a);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool HardwareGraph::has_node(std::uint32_t id) const {
    return id < node_index_.size() && node_index_[id] != UINT32_MAX;
}

bool HardwareGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
}

const std::vector<std::uint32_t>& HardwareGraph::neighbors(std::uint32_t id) const {
    static const std::vector<std::uint32_t> empty;
    if (!has_node(id)) return empty;
    return adjacency_[node_index_[id]];
}

HardwareGraph chimera_graph(unsigned m) {
    if (m == 0) throw std::invalid_argument("chimera grid parameter must be >= 1");

    std::vector<std::uint32_t> nodes;
    nodes.reserve(8u * m * m);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    const auto qubit = [m](unsigned row, unsigned col, unsigned k) {
        return static_cast<std::uint32_t>(8u * (row * m + col) + k);
    };

    for (unsigned row = 0; row < m; ++row) {
        for (unsigned col = 0; col < m; ++col) {
            for (unsigned k = 0; k < 8; ++k) nodes.push_back(qubit(row, col, k));
            for (unsigned a = 0; a < 4; ++a)
                for (unsigned b = 4; b < 8; ++b)
                    edges.emplace_back(qubit(row, col, a), qubit(row, col, b));
            if (row + 1 < m)
                for (unsigned k = 0; k < 4; ++k)
                    edges.emplace_back(qubit(row, col, k), qubit(row + 1, col, k));
            if (col + 1 < m)
                for (unsigned k = 4; k < 8; ++k)
                    edges.emplace_back(qubit(row, col, k), qubit(row, col + 1, k));
        }
    }
    return HardwareGraph(std::move(nodes), std::move(edges), {"chimera", m});
}

}  // namespace qaemu
