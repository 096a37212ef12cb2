#include "ktree/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ktree/error.hpp"

namespace ktree::analysis {

double DegreeHistogram::fraction(std::uint32_t d) const {
    const double denom = static_cast<double>(n) * static_cast<double>(trials);
    return denom > 0 ? static_cast<double>(count(d)) / denom : 0.0;
}

std::uint64_t DegreeHistogram::total() const {
    std::uint64_t sum = 0;
    for (auto [d, c] : counts) sum += c;
    return sum;
}

std::uint64_t DegreeHistogram::degree_sum() const {
    std::uint64_t sum = 0;
    for (auto [d, c] : counts) sum += static_cast<std::uint64_t>(d) * c;
    return sum;
}

DegreeHistogram& DegreeHistogram::operator+=(const DegreeHistogram& other) {
    if (other.k != k || other.n != n)
        throw Error(ErrorCode::k_mismatch, "cannot merge histograms of different (k, n)");
    for (auto [d, c] : other.counts) counts[d] += c;
    trials += other.trials;
    return *this;
}

namespace {

template <class DegreeOf>
DegreeHistogram histogram_from(std::uint32_t k, Vertex n, DegreeOf degree_of) {
    DegreeHistogram hist;
    hist.k = k;
    hist.n = n;
    // Dense counting first; most of the mass sits at small degrees.
    std::vector<std::uint64_t> dense;
    for (Vertex v = 0; v < n; ++v) {
        const std::uint32_t d = degree_of(v);
        if (d >= dense.size()) dense.resize(static_cast<std::size_t>(d) + 1, 0);
        ++dense[d];
    }
    for (std::size_t d = 0; d < dense.size(); ++d)
        if (dense[d] != 0) hist.counts.emplace_hint(hist.counts.end(), static_cast<std::uint32_t>(d), dense[d]);
    return hist;
}

} // namespace

DegreeHistogram degree_histogram(const Graph& graph, std::uint32_t k) {
    return histogram_from(k, graph.vertex_count(), [&](Vertex v) { return graph.degree(v); });
}

DegreeHistogram degree_histogram(const KTree& tree) {
    return histogram_from(tree.k(), tree.vertex_count(), [&](Vertex v) { return tree.degree(v); });
}

std::uint64_t count_degree(const KTree& tree, std::uint32_t d) {
    auto degrees = tree.degrees();
    return static_cast<std::uint64_t>(std::count(degrees.begin(), degrees.end(), d));
}

CliqueSet brute_force_k_cliques(const Graph& graph, std::uint32_t k, Vertex limit) {
    const Vertex n = graph.vertex_count();
    if (n > limit)
        throw Error(ErrorCode::too_large, "brute-force clique enumeration limited to " +
                                              std::to_string(limit) + " vertices, got " + std::to_string(n));
    std::vector<char> adjacent(static_cast<std::size_t>(n) * n, 0);
    graph.for_each_edge([&](Vertex u, Vertex v) {
        adjacent[static_cast<std::size_t>(u) * n + v] = 1;
        adjacent[static_cast<std::size_t>(v) * n + u] = 1;
    });

    CliqueSet found;
    if (k == 0) return found;
    VertexSet current;
    current.reserve(k);
    // Lexicographic walk over k-subsets; a prefix that is not complete cannot
    // extend to a clique, so its subtree is skipped.
    auto extend = [&](auto&& self, Vertex start) -> void {
        if (current.size() == k) {
            found.insert(current);
            return;
        }
        for (Vertex v = start; v < n; ++v) {
            bool complete = true;
            for (Vertex u : current)
                if (!adjacent[static_cast<std::size_t>(u) * n + v]) {
                    complete = false;
                    break;
                }
            if (!complete) continue;
            current.push_back(v);
            self(self, v + 1);
            current.pop_back();
        }
    };
    extend(extend, 0);
    return found;
}

CliqueSet stored_cliques(const KTree& tree) {
    CliqueSet result;
    for (std::uint64_t c = 0; c < tree.clique_count(); ++c) {
        auto members = tree.clique(c);
        VertexSet s(members.begin(), members.end());
        std::sort(s.begin(), s.end());
        result.insert(std::move(s));
    }
    return result;
}

Lemma1Report verify_lemma1(const Graph& graph, std::uint32_t k, std::span<const Vertex> cliques) {
    using Status = Lemma1Report::Status;
    const Vertex n = graph.vertex_count();
    if (n < k + 2) return {Status::not_applicable, "needs at least k+2 vertices, graph has " + std::to_string(n)};

    for (Vertex v = 0; v < n; ++v)
        if (graph.degree(v) < k)
            return {Status::fail, "vertex " + std::to_string(v) + " has degree " +
                                      std::to_string(graph.degree(v)) + " < k = " + std::to_string(k)};

    for (std::size_t c = 0; c + k <= cliques.size(); c += k) {
        std::vector<Vertex> minimal;
        for (std::size_t i = 0; i < k; ++i) {
            const Vertex v = cliques[c + i];
            if (v >= n) return {Status::fail, "clique " + std::to_string(c / k) + " names vertex " + std::to_string(v)};
            if (graph.degree(v) == k) minimal.push_back(v);
        }
        if (minimal.size() > 1)
            return {Status::fail, "clique " + std::to_string(c / k) + " holds degree-k vertices " +
                                      std::to_string(minimal[0]) + " and " + std::to_string(minimal[1])};
    }
    return {Status::pass, {}};
}

Lemma1Report verify_lemma1(const KTree& tree) {
    return verify_lemma1(tree.adjacency(), tree.k(), tree.clique_store());
}

TreeDecompositionCheck validate_tree_decomposition(const Graph& graph, const TreeDecomposition& td) {
    TreeDecompositionCheck check;
    const std::size_t bags = td.bag_count();
    const Vertex n = graph.vertex_count();
    auto fail = [&](std::string why) {
        if (check.witness.empty()) check.witness = std::move(why);
    };

    std::vector<std::vector<Vertex>> sorted(bags);
    std::size_t widest = 0;
    for (std::size_t i = 0; i < bags; ++i) {
        auto b = td.bag(i);
        sorted[i].assign(b.begin(), b.end());
        std::sort(sorted[i].begin(), sorted[i].end());
        widest = std::max(widest, sorted[i].size());
        for (Vertex v : sorted[i])
            if (v >= n) {
                fail("bag " + std::to_string(i) + " names vertex " + std::to_string(v) + " outside the graph");
                return check;
            }
    }
    check.width = widest == 0 ? 0 : static_cast<std::uint32_t>(widest - 1);

    // Tree: bags-1 edges and no cycle.
    check.is_tree = bags > 0 && td.tree_edges.size() + 1 == bags;
    if (!check.is_tree) fail("expected " + std::to_string(bags == 0 ? 0 : bags - 1) + " tree edges, found " +
                             std::to_string(td.tree_edges.size()));
    std::vector<std::size_t> parent(bags);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : td.tree_edges) {
        if (a >= bags || b >= bags) {
            check.is_tree = false;
            fail("tree edge names missing bag");
            break;
        }
        const std::size_t ra = find(a), rb = find(b);
        if (ra == rb) {
            check.is_tree = false;
            fail("tree edges contain a cycle through bag " + std::to_string(a));
            break;
        }
        parent[ra] = rb;
    }

    std::vector<std::uint64_t> bag_count(n, 0);
    std::vector<std::vector<std::uint32_t>> bags_of(n);
    for (std::size_t i = 0; i < bags; ++i)
        for (Vertex v : sorted[i]) {
            ++bag_count[v];
            bags_of[v].push_back(static_cast<std::uint32_t>(i));
        }

    check.covers_vertices = true;
    for (Vertex v = 0; v < n; ++v)
        if (bag_count[v] == 0) {
            check.covers_vertices = false;
            fail("vertex " + std::to_string(v) + " is in no bag");
            break;
        }

    check.covers_edges = true;
    graph.for_each_edge([&](Vertex u, Vertex v) {
        if (!check.covers_edges) return;
        const Vertex probe = bags_of[u].size() <= bags_of[v].size() ? u : v;
        const Vertex other = probe == u ? v : u;
        const bool covered = std::any_of(bags_of[probe].begin(), bags_of[probe].end(), [&](std::uint32_t b) {
            return std::binary_search(sorted[b].begin(), sorted[b].end(), other);
        });
        if (!covered) {
            check.covers_edges = false;
            fail("edge " + std::to_string(u) + "-" + std::to_string(v) + " is in no bag");
        }
    });

    // In a forest the bags holding v induce a connected subtree exactly when
    // the tree edges with v at both ends number one less than those bags.
    if (check.is_tree) {
        std::vector<std::uint64_t> shared(n, 0);
        std::vector<Vertex> common;
        for (auto [a, b] : td.tree_edges) {
            common.clear();
            std::set_intersection(sorted[a].begin(), sorted[a].end(), sorted[b].begin(), sorted[b].end(),
                                  std::back_inserter(common));
            for (Vertex v : common) ++shared[v];
        }
        check.running_intersection = true;
        for (Vertex v = 0; v < n; ++v)
            if (bag_count[v] > 0 && shared[v] + 1 != bag_count[v]) {
                check.running_intersection = false;
                fail("bags containing vertex " + std::to_string(v) + " are not connected");
                break;
            }
    }
    return check;
}

DeviationReport deviation_report(const DegreeHistogram& hist, const theory::TheoreticalDistribution& theory,
                                 std::uint32_t d_cut) {
    if (hist.k != theory.k)
        throw Error(ErrorCode::k_mismatch, "histogram k=" + std::to_string(hist.k) + " vs theory k=" +
                                               std::to_string(theory.k));
    DeviationReport report;
    report.k = hist.k;
    report.n = hist.n;
    report.trials = hist.trials;
    report.d_cut = d_cut;

    for (std::uint32_t d = hist.k; d <= d_cut; ++d) {
        DeviationRow row;
        row.d = d;
        row.empirical_fraction = hist.fraction(d);
        row.beta = theory.at(d);
        row.abs_error = std::abs(row.empirical_fraction - row.beta);
        row.rel_error = row.beta > 0 ? row.abs_error / row.beta : 0.0;
        report.max_abs_error = std::max(report.max_abs_error, row.abs_error);
        report.rows.push_back(row);
    }

    const std::uint32_t top = std::max(hist.max_degree(), d_cut);
    double l1 = 0.0;
    for (auto [d, c] : hist.counts)
        if (d < hist.k) l1 += hist.fraction(d);
    for (std::uint32_t d = hist.k; d <= top; ++d) l1 += std::abs(hist.fraction(d) - theory.at(d));
    l1 += theory::beta_tail_mass(hist.k, static_cast<std::uint64_t>(top) + 1);
    report.total_variation = 0.5 * l1;
    return report;
}

ExponentFit fit_tail_exponent(const DegreeHistogram& hist, std::uint32_t d_min) {
    if (d_min < 1) throw Error(ErrorCode::invalid_params, "d_min must be at least 1");
    std::vector<std::pair<std::uint32_t, std::uint64_t>> tail;
    for (auto it = hist.counts.lower_bound(d_min); it != hist.counts.end(); ++it)
        if (it->second > 0) tail.emplace_back(it->first, it->second);
    if (tail.size() < 10)
        throw Error(ErrorCode::insufficient_tail, "need at least 10 distinct degrees >= " + std::to_string(d_min) +
                                                      ", found " + std::to_string(tail.size()));

    ExponentFit fit;
    fit.d_min = d_min;
    const double shift = d_min - 0.5;
    double log_sum = 0.0;
    for (auto [d, c] : tail) {
        fit.tail_samples += c;
        log_sum += static_cast<double>(c) * std::log(d / shift);
    }
    const double m = static_cast<double>(fit.tail_samples);
    fit.gamma_hat = 1.0 + m / log_sum;
    fit.std_error = (fit.gamma_hat - 1.0) / std::sqrt(m);

    // Least squares on (ln d, ln P[D >= d]) over the observed tail degrees.
    double above = m;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [d, c] : tail) {
        const double x = std::log(static_cast<double>(d));
        const double y = std::log(above / m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        above -= static_cast<double>(c);
    }
    const double count = static_cast<double>(tail.size());
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.ccdf_gamma = 1.0 - slope;
    return fit;
}

ConcentrationReport concentration_report(std::uint32_t k, std::uint64_t n, std::uint32_t d, std::uint64_t seed,
                                         std::span<const std::uint64_t> samples,
                                         std::optional<double> exact_expectation) {
    if (samples.size() < 2) throw Error(ErrorCode::invalid_params, "concentration needs at least 2 trials");
    ConcentrationReport report;
    report.k = k;
    report.n = n;
    report.d = d;
    report.seed = seed;
    report.trials = samples.size();

    double sum = 0.0;
    for (auto x : samples) sum += static_cast<double>(x);
    report.mean = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (auto x : samples) ss += (static_cast<double>(x) - report.mean) * (static_cast<double>(x) - report.mean);
    report.sample_std = std::sqrt(ss / static_cast<double>(samples.size() - 1));

    report.expectation_source = exact_expectation ? "dp" : "sample-mean";
    report.expectation = exact_expectation.value_or(report.mean);
    report.azuma_lambda_at_1pct = theory::azuma_lambda(k, n, 0.01);
    for (auto x : samples) {
        const double dev = std::abs(static_cast<double>(x) - report.expectation);
        report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
        if (dev > report.azuma_lambda_at_1pct) ++report.violations;
    }
    return report;
}

} // namespace ktree::analysis
