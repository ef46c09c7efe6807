#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qaemu {

struct TopologyDescriptor {
    std::string family;  // "chimera" or "custom"
    unsigned size = 0;   // grid parameter m for chimera

    friend bool operator==(const TopologyDescriptor&, const TopologyDescriptor&) = default;
};

// Undirected coupler graph of the emulated device. Node ids need not be
// contiguous; edges are stored as (low, high) pairs with no self-loops.
class HardwareGraph {
public:
    HardwareGraph(std::vector<std::uint32_t> nodes,
                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                  TopologyDescriptor topology = {"custom", 0});

    const std::vector<std::uint32_t>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
    const TopologyDescriptor& topology() const { return topology_; }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    bool has_node(std::uint32_t id) const;
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
    // Sorted neighbor list; empty for unknown ids.
    const std::vector<std::uint32_t>& neighbors(std::uint32_t id) const;

private:
    std::vector<std::uint32_t> nodes_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    TopologyDescriptor topology_;
    std::vector<std::vector<std::uint32_t>> adjacency_;  // indexed by position in nodes_
    std::vector<std::uint32_t> node_index_;              // id -> position lookup (dense)
};

// m x m grid of complete-bipartite 4+4 cells with the standard inter-cell
// couplers: shore 0..3 couples to the cell below, shore 4..7 to the cell on
// the right. Qubit id = 8*(row*m + col) + k. 8m^2 nodes, 16m^2 + 8m(m-1)
// edges, maximum degree 6.
HardwareGraph chimera_graph(unsigned m);

}  // namespace qaemu
