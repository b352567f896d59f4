#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace covsmooth {

using NodeId = std::uint32_t;
using EdgePair = std::pair<NodeId, NodeId>;

/// Simple undirected graph: node count plus an unordered edge set.
/// Edges are stored canonically (first < second), sorted, deduplicated.
/// Immutable after construction.
class Graph {
public:
    /// Validates and normalizes the edge list: endpoints in [0, n),
    /// no self-loops, (i, j) and (j, i) collapse to one edge.
    Graph(std::size_t node_count, std::vector<EdgePair> edges);

    static Graph empty(std::size_t node_count) { return Graph(node_count, {}); }

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<EdgePair>& edges() const noexcept { return edges_; }

    bool has_edge(NodeId i, NodeId j) const noexcept {
        if (i == j) return false;
        return adjacency_[static_cast<std::size_t>(i) * n_ + j];
    }

    /// Adjacency matrix entry: 1.0 if there is an edge, 0.0 otherwise
    /// (symmetric, zero diagonal).
    double adjacency(NodeId i, NodeId j) const noexcept { return has_edge(i, j) ? 1.0 : 0.0; }

    std::vector<std::size_t> degrees() const;

    bool operator==(const Graph& other) const noexcept {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    std::size_t n_;
    std::vector<EdgePair> edges_;
    std::vector<bool> adjacency_; // n x n, row-major
};

} // namespace covsmooth
