#include "covsmooth/graph.hpp"

#include <algorithm>
#include <string>

#include "covsmooth/errors.hpp"

namespace covsmooth {

Graph::Graph(std::size_t node_count, std::vector<EdgePair> edges) : n_(node_count) {
    if (n_ < 1) {
        throw DegenerateInputError("graph needs at least one node");
    }
    for (auto& [a, b] : edges) {
        if (a == b) {
            throw InvalidArgumentError("self-loop on node " + std::to_string(a));
        }
        if (a >= n_ || b >= n_) {
            throw InvalidArgumentError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                       ") out of range for n = " + std::to_string(n_));
        }
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    adjacency_.assign(n_ * n_, false);
    for (const auto& [a, b] : edges_) {
        adjacency_[static_cast<std::size_t>(a) * n_ + b] = true;
        adjacency_[static_cast<std::size_t>(b) * n_ + a] = true;
    }
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> result(n_, 0);
    for (const auto& [a, b] : edges_) {
        ++result[a];
        ++result[b];
    }
    return result;
}

} // namespace covsmooth
