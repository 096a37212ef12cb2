#include "ktree/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ktree/error.hpp"

namespace ktree {

namespace {

std::uint64_t clique_total(std::uint64_t k, std::uint64_t n) { return (n - k - 1) * k + (k + 1); }

} // namespace

void validate(const ProcessParams& params) {
    if (params.k < 2)
        throw Error(ErrorCode::invalid_params, "k must be at least 2, got " + std::to_string(params.k));
    if (params.n < params.k + 1)
        throw Error(ErrorCode::invalid_params,
                    "n must be at least k+1 = " + std::to_string(params.k + 1) + ", got " +
                        std::to_string(params.n));
}

std::size_t estimated_memory(const ProcessParams& params) {
    const std::uint64_t k = params.k;
    const std::uint64_t n = params.n;
    const std::uint64_t cliques = clique_total(k, n);
    const std::uint64_t edges = k * (k + 1) / 2 + k * (n - k - 1);
    // clique store, attachments, degrees, then the CSR adjacency.
    return cliques * k * sizeof(Vertex) + n * sizeof(std::uint32_t) * 2 +
           (n + 1) * sizeof(std::uint64_t) + 2 * edges * sizeof(Vertex);
}

std::uint64_t KTree::edge_count() const noexcept {
    const std::uint64_t k = params_.k;
    return k * (k + 1) / 2 + k * (vertex_count() - k - 1);
}

Graph KTree::adjacency() const {
    const Vertex n = vertex_count();
    const std::uint32_t k = params_.k;
    std::vector<std::uint64_t> offsets(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + degrees_[v];

    std::vector<Vertex> neighbors(offsets.back());
    std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);

    // Lists come out sorted without a general sort: the seed clique is
    // emitted in order, each later vertex first receives its (sorted)
    // attachment clique, and children arrive in increasing id order.
    for (Vertex v = 0; v <= k; ++v)
        for (Vertex u = 0; u <= k; ++u)
            if (u != v) neighbors[fill[v]++] = u;

    std::vector<Vertex> members(k);
    for (Vertex v = k + 1; v < n; ++v) {
        auto c = clique(attachment_of(v));
        std::copy(c.begin(), c.end(), members.begin());
        std::sort(members.begin(), members.end());
        for (Vertex u : members) {
            neighbors[fill[v]++] = u;
            neighbors[fill[u]++] = v;
        }
    }
    return Graph(std::move(offsets), std::move(neighbors));
}

KTree new_process(const ProcessParams& params) {
    validate(params);
    if (clique_total(params.k, params.n) > std::numeric_limits<std::uint32_t>::max())
        throw Error(ErrorCode::resource_exhausted, "clique count exceeds 32-bit index range");

    const std::uint32_t k = params.k;
    KTree tree;
    tree.params_ = params;
    tree.degrees_.assign(k + 1, k);
    tree.cliques_.reserve(static_cast<std::size_t>(k + 1) * k);
    for (Vertex omitted = 0; omitted <= k; ++omitted)
        for (Vertex v = 0; v <= k; ++v)
            if (v != omitted) tree.cliques_.push_back(v);
    return tree;
}

void step(KTree& tree, Rng& rng) {
    const std::uint32_t k = tree.params_.k;
    const auto vertex = static_cast<Vertex>(tree.degrees_.size());
    const auto chosen = static_cast<std::uint32_t>(rng.bounded(tree.clique_count()));

    tree.attachments_.push_back(chosen);
    tree.degrees_.push_back(k);

    const std::size_t base = static_cast<std::size_t>(chosen) * k;
    for (std::uint32_t i = 0; i < k; ++i) ++tree.degrees_[tree.cliques_[base + i]];

    // Appending may reallocate; index rather than hold a span into cliques_.
    for (std::uint32_t replaced = 0; replaced < k; ++replaced) {
        for (std::uint32_t i = 0; i < k; ++i)
            tree.cliques_.push_back(i == replaced ? vertex : tree.cliques_[base + i]);
    }
}

KTree generate(const ProcessParams& params, std::size_t memory_budget) {
    validate(params);
    const std::size_t needed = estimated_memory(params);
    if (needed > memory_budget)
        throw Error(ErrorCode::resource_exhausted,
                    "n=" + std::to_string(params.n) + " needs ~" + std::to_string(needed >> 20) +
                        " MiB, budget is " + std::to_string(memory_budget >> 20) + " MiB");

    KTree tree = new_process(params);
    tree.cliques_.reserve(clique_total(params.k, params.n) * params.k);
    tree.attachments_.reserve(params.n - params.k - 1);
    tree.degrees_.reserve(params.n);

    Rng rng(params.seed);
    while (!tree.complete()) step(tree, rng);
    return tree;
}

std::uint32_t retained_out_degree(std::uint32_t k, double b) {
    if (!(b > 0.0 && b <= 1.0))
        throw Error(ErrorCode::invalid_b, "b must lie in (0, 1], got " + std::to_string(b));
    const auto kept = static_cast<std::uint32_t>(std::floor(b * k + 0.5));
    if (kept < 1)
        throw Error(ErrorCode::invalid_b, "round(b*k) must be at least 1 (b=" + std::to_string(b) +
                                              ", k=" + std::to_string(k) + ")");
    return kept;
}

Graph generate_partial(const ProcessParams& params, double b, std::size_t memory_budget) {
    validate(params);
    const std::uint32_t kept = retained_out_degree(params.k, b);
    const KTree tree = generate(params, memory_budget);
    const std::uint32_t k = params.k;
    const Vertex n = tree.vertex_count();

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(k) * (k + 1) / 2 + static_cast<std::size_t>(kept) * (n - k - 1));
    for (Vertex u = 0; u <= k; ++u)
        for (Vertex v = u + 1; v <= k; ++v) edges.emplace_back(u, v);

    Rng rng(deletion_seed(params.seed));
    std::vector<Vertex> targets(k);
    for (Vertex v = k + 1; v < n; ++v) {
        auto c = tree.clique(tree.attachment_of(v));
        std::copy(c.begin(), c.end(), targets.begin());
        if (kept < k) {
            // Partial Fisher-Yates: the first `kept` slots are a uniform subset.
            for (std::uint32_t i = 0; i < kept; ++i) {
                const auto j = i + static_cast<std::uint32_t>(rng.bounded(k - i));
                std::swap(targets[i], targets[j]);
            }
        }
        for (std::uint32_t i = 0; i < kept; ++i) edges.emplace_back(targets[i], v);
    }
    return Graph::from_edges(n, edges);
}

void TreeDecomposition::add_bag(std::span<const Vertex> bag) {
    vertices.insert(vertices.end(), bag.begin(), bag.end());
    offsets.push_back(vertices.size());
}

TreeDecomposition build_tree_decomposition(const KTree& tree) {
    const std::uint32_t k = tree.k();
    const Vertex n = tree.vertex_count();
    if (tree.attachments().size() + k + 1 != n || tree.clique_count() != clique_total(k, n))
        throw Error(ErrorCode::missing_history, "attachment history does not match vertex count");

    TreeDecomposition td;
    td.vertex_count = n;
    td.width = k;
    td.offsets.reserve(static_cast<std::size_t>(n - k) + 1);
    td.vertices.reserve(static_cast<std::size_t>(n - k) * (k + 1));
    td.tree_edges.reserve(n - k - 1);

    std::vector<Vertex> bag(k + 1);
    for (Vertex v = 0; v <= k; ++v) bag[v] = v;
    td.add_bag(bag);

    for (Vertex v = k + 1; v < n; ++v) {
        const std::uint32_t c = tree.attachment_of(v);
        auto members = tree.clique(c);
        std::copy(members.begin(), members.end(), bag.begin());
        bag[k] = v;
        std::sort(bag.begin(), bag.end());
        td.add_bag(bag);

        // Cliques k+1+j*k .. k+1+j*k+k-1 were created by the vertex of bag j+1.
        const std::uint32_t parent = c <= k ? 0 : 1 + (c - (k + 1)) / k;
        td.tree_edges.emplace_back(parent, static_cast<std::uint32_t>(v - k));
    }
    return td;
}

} // namespace ktree
