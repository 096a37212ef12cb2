#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ktree {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable undirected simple graph in compressed sparse row form.
/// Neighbor lists are sorted ascending.
class Graph {
public:
    Graph() = default;
    Graph(std::vector<std::uint64_t> offsets, std::vector<Vertex> neighbors);

    /// Builds from an undirected edge list; duplicates and self loops are rejected
    /// with invalid-params.
    static Graph from_edges(Vertex vertex_count, std::span<const Edge> edges);

    Vertex vertex_count() const noexcept {
        return offsets_.empty() ? 0 : static_cast<Vertex>(offsets_.size() - 1);
    }
    std::uint64_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::uint32_t degree(Vertex v) const noexcept {
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }
    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    bool has_edge(Vertex u, Vertex v) const noexcept;

    /// Calls f(u, v) for every edge with u < v in ascending lexicographic order.
    template <class F>
    void for_each_edge(F&& f) const {
        const Vertex n = vertex_count();
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v : neighbors(u))
                if (u < v) f(u, v);
    }

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<Vertex> neighbors_;
};

} // namespace ktree
