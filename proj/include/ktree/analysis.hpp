#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ktree/generator.hpp"
#include "ktree/graph.hpp"
#include "ktree/theory.hpp"

namespace ktree::analysis {

/// Vertex counts per degree, summed over `trials` graphs of n vertices each.
struct DegreeHistogram {
    std::uint32_t k = 2;
    std::uint64_t n = 0;
    std::uint64_t trials = 1;
    std::map<std::uint32_t, std::uint64_t> counts;

    std::uint64_t count(std::uint32_t d) const {
        auto it = counts.find(d);
        return it == counts.end() ? 0 : it->second;
    }
    /// count(d) / (n * trials); equals the mean of the per-trial fractions.
    double fraction(std::uint32_t d) const;
    std::uint64_t total() const;
    std::uint64_t degree_sum() const;
    std::uint32_t max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }

    /// Sums another histogram over the same (k, n) into this one.
    DegreeHistogram& operator+=(const DegreeHistogram& other);
    bool operator==(const DegreeHistogram&) const = default;
};

DegreeHistogram degree_histogram(const Graph& graph, std::uint32_t k);
DegreeHistogram degree_histogram(const KTree& tree);

/// Degree count of one degree, without building the whole histogram.
std::uint64_t count_degree(const KTree& tree, std::uint32_t d);

using VertexSet = std::vector<Vertex>; // sorted ascending
using CliqueSet = std::set<VertexSet>;

inline constexpr Vertex kDefaultBruteForceLimit = 30;

/// Every k-vertex subset of the graph that is complete, by exhaustive search.
/// Throws too-large when the graph has more than `limit` vertices.
CliqueSet brute_force_k_cliques(const Graph& graph, std::uint32_t k,
                                Vertex limit = kDefaultBruteForceLimit);

/// The clique store as a set of sorted vertex sets.
CliqueSet stored_cliques(const KTree& tree);

struct Lemma1Report {
    enum class Status { pass, fail, not_applicable };
    Status status = Status::pass;
    std::string witness; // first counterexample, or why the check does not apply

    bool passed() const { return status == Status::pass; }
};

/// Minimum degree >= k, and no listed clique (flat, k ids each) holds two
/// vertices of degree exactly k. Not applicable below k+2 vertices.
Lemma1Report verify_lemma1(const Graph& graph, std::uint32_t k, std::span<const Vertex> cliques);
Lemma1Report verify_lemma1(const KTree& tree);

struct TreeDecompositionCheck {
    bool is_tree = false;
    bool covers_vertices = false;
    bool covers_edges = false;
    bool running_intersection = false;
    std::uint32_t width = 0;
    std::string witness;

    bool valid() const { return is_tree && covers_vertices && covers_edges && running_intersection; }
};

TreeDecompositionCheck validate_tree_decomposition(const Graph& graph, const TreeDecomposition& td);

struct DeviationRow {
    std::uint32_t d = 0;
    double empirical_fraction = 0.0;
    double beta = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
};

struct DeviationReport {
    std::uint32_t k = 2;
    std::uint64_t n = 0;
    std::uint64_t trials = 1;
    std::uint32_t d_cut = 0;
    std::vector<DeviationRow> rows; // d = k .. d_cut
    double max_abs_error = 0.0;     // over the rows
    double total_variation = 0.0;   // over all degrees, beta tail included
};

/// Compares empirical fractions with beta_d for d in [k, d_cut].
/// Throws k-mismatch when hist.k != theory.k.
DeviationReport deviation_report(const DegreeHistogram& hist, const theory::TheoreticalDistribution& theory,
                                 std::uint32_t d_cut);

struct ExponentFit {
    double gamma_hat = 0.0;
    double std_error = 0.0;
    std::uint32_t d_min = 10;
    std::uint64_t tail_samples = 0;
    std::string method = "discrete-mle";
    double ccdf_gamma = 0.0; // 1 - slope of least squares on log-log CCDF
};

inline constexpr std::uint32_t kDefaultDMin = 10;

/// Discrete power-law MLE on degrees >= d_min,
///   gamma = 1 + m / sum ln(d_i / (d_min - 1/2)),
/// with standard error (gamma - 1)/sqrt(m). Throws insufficient-tail unless at
/// least 10 distinct degrees >= d_min are present.
ExponentFit fit_tail_exponent(const DegreeHistogram& hist, std::uint32_t d_min = kDefaultDMin);

struct ConcentrationReport {
    std::uint32_t k = 2;
    std::uint64_t n = 0;
    std::uint32_t d = 2;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double sample_std = 0.0;
    std::string expectation_source = "sample-mean"; // or "dp"
    double expectation = 0.0;
    double max_abs_deviation = 0.0; // max |X_d - expectation|
    double azuma_lambda_at_1pct = 0.0;
    std::uint64_t violations = 0; // trials with |X_d - expectation| > lambda
};

/// Statistics of X_d over trial samples. When `exact_expectation` is given it
/// replaces the sample mean as the centre for deviations. Requires >= 2 samples.
ConcentrationReport concentration_report(std::uint32_t k, std::uint64_t n, std::uint32_t d, std::uint64_t seed,
                                         std::span<const std::uint64_t> samples,
                                         std::optional<double> exact_expectation = std::nullopt);

} // namespace ktree::analysis
