#include "ktree/graph.hpp"

#include <algorithm>
#include <string>

#include "ktree/error.hpp"

namespace ktree {

Graph::Graph(std::vector<std::uint64_t> offsets, std::vector<Vertex> neighbors)
    : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)) {}

Graph Graph::from_edges(Vertex vertex_count, std::span<const Edge> edges) {
    std::vector<std::uint64_t> offsets(static_cast<std::size_t>(vertex_count) + 1, 0);
    for (auto [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count)
            throw Error(ErrorCode::invalid_params, "edge endpoint out of range: " +
                                                       std::to_string(u) + " " + std::to_string(v));
        if (u == v) throw Error(ErrorCode::invalid_params, "self loop at " + std::to_string(u));
        ++offsets[u + 1];
        ++offsets[v + 1];
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];

    std::vector<Vertex> neighbors(offsets.back());
    std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
    for (auto [u, v] : edges) {
        neighbors[fill[u]++] = v;
        neighbors[fill[v]++] = u;
    }
    for (Vertex v = 0; v < vertex_count; ++v) {
        auto first = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
        auto last = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last)
            throw Error(ErrorCode::invalid_params, "duplicate edge at vertex " + std::to_string(v));
    }
    return Graph(std::move(offsets), std::move(neighbors));
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
    if (u >= vertex_count() || v >= vertex_count()) return false;
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

} // namespace ktree
