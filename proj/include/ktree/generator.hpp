#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ktree/graph.hpp"
#include "ktree/rng.hpp"

namespace ktree {

/// One instance of the k-tree process: clique size k, final vertex count n
/// and the PRNG seed. Requires k >= 2 and n >= k + 1.
struct ProcessParams {
    std::uint32_t k = 2;
    std::uint32_t n = 3;
    std::uint64_t seed = 0;

    bool operator==(const ProcessParams&) const = default;
};

/// Throws invalid-params unless k >= 2 and n >= k + 1.
void validate(const ProcessParams& params);

/// Default cap on the memory generate() may allocate (4 GiB).
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{4} << 30;

/// Bytes generate() and KTree::adjacency() need for the given parameters.
std::size_t estimated_memory(const ProcessParams& params);

/// A random k-tree together with its construction history.
///
/// Vertices are 0-based in insertion order; the seed clique is 0..k. The
/// clique store is append-only and flat: clique c occupies
/// [c*k, c*k + k). The first k+1 entries are the k-subsets of the seed clique,
/// clique j omitting vertex j. When vertex i attaches to clique c, the k new
/// cliques appended are c with position 0, 1, ..., k-1 (in that order)
/// replaced by i; vertex order inside a clique is therefore not sorted.
class KTree {
public:
    const ProcessParams& params() const noexcept { return params_; }
    std::uint32_t k() const noexcept { return params_.k; }
    Vertex vertex_count() const noexcept { return static_cast<Vertex>(degrees_.size()); }
    bool complete() const noexcept { return vertex_count() == params_.n; }

    std::uint64_t clique_count() const noexcept { return cliques_.size() / params_.k; }
    std::span<const Vertex> clique(std::uint64_t index) const noexcept {
        return {cliques_.data() + index * params_.k, params_.k};
    }
    std::span<const Vertex> clique_store() const noexcept { return cliques_; }

    /// attachments()[j] is the clique index vertex k+1+j attached to.
    std::span<const std::uint32_t> attachments() const noexcept { return attachments_; }
    std::uint32_t attachment_of(Vertex v) const noexcept { return attachments_[v - params_.k - 1]; }

    std::uint32_t degree(Vertex v) const noexcept { return degrees_[v]; }
    std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
    std::uint64_t edge_count() const noexcept;

    /// Sorted adjacency lists rebuilt from the history in O(k n).
    Graph adjacency() const;

    bool operator==(const KTree&) const = default;

private:
    friend KTree new_process(const ProcessParams&);
    friend void step(KTree&, Rng&);
    friend KTree generate(const ProcessParams&, std::size_t);

    ProcessParams params_;
    std::vector<Vertex> cliques_;
    std::vector<std::uint32_t> attachments_;
    std::vector<std::uint32_t> degrees_;
};

/// The seed graph K_{k+1} with all k+1 of its k-cliques stored.
KTree new_process(const ProcessParams& params);

/// Adds one vertex attached to a uniformly drawn stored clique.
/// Precondition: !tree.complete().
void step(KTree& tree, Rng& rng);

/// new_process followed by n-(k+1) steps driven by Rng(params.seed).
/// Throws resource-exhausted if estimated_memory exceeds the budget.
KTree generate(const ProcessParams& params, std::size_t memory_budget = kDefaultMemoryBudget);

/// Exploratory partial k-tree: generate(params), then every vertex added
/// after the seed clique keeps round(b*k) (half rounded up) of its k attachment
/// edges, chosen uniformly. Deletion uses the stream deletion_seed(params.seed).
/// Throws invalid-b unless 0 < b <= 1 and round(b*k) >= 1.
Graph generate_partial(const ProcessParams& params, double b,
                       std::size_t memory_budget = kDefaultMemoryBudget);

/// Number of attachment edges each non-seed vertex keeps in generate_partial.
std::uint32_t retained_out_degree(std::uint32_t k, double b);

/// Tree decomposition with bags stored contiguously: bag i is
/// vertices[offsets[i] .. offsets[i+1]).
struct TreeDecomposition {
    Vertex vertex_count = 0;
    std::vector<std::uint64_t> offsets{0};
    std::vector<Vertex> vertices;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> tree_edges;
    std::uint32_t width = 0;

    std::size_t bag_count() const noexcept { return offsets.size() - 1; }
    std::span<const Vertex> bag(std::size_t i) const noexcept {
        return {vertices.data() + offsets[i], vertices.data() + offsets[i + 1]};
    }
    void add_bag(std::span<const Vertex> bag);
};

/// Width-k decomposition read off the attachment history: bag 0 is the seed
/// clique, bag j >= 1 is vertex k+j plus its attachment clique, linked to the
/// bag that created that clique.
TreeDecomposition build_tree_decomposition(const KTree& tree);

} // namespace ktree
