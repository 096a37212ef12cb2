#pragma once

#include <cstdint>
#include <vector>

namespace ktree::theory {

/// Coefficients of the attachment probability (a d - b) / (c n).
/// c depends on n and is kept as the exact fraction c_numerator / n, where
/// c_numerator = k n - k^2 + 1 is the clique count.
struct Coefficients {
    std::int64_t a = 0;           // k - 1
    std::int64_t b = 0;           // k (k - 2)
    std::int64_t c_numerator = 0; // k n - (k^2 - 1)
    std::int64_t c_denominator = 1; // n

    double c() const { return static_cast<double>(c_numerator) / static_cast<double>(c_denominator); }
};

Coefficients coefficients(std::uint32_t k, std::uint64_t n);

/// (n-k-1) k + (k+1): number of k-cliques after n vertices.
std::uint64_t total_k_cliques(std::uint32_t k, std::uint64_t n);

/// k + (k-1)(d-k): stored cliques containing a vertex of degree d.
/// Throws degree-below-k for d < k.
std::uint64_t cliques_containing(std::uint32_t k, std::uint64_t d);

/// Probability that a degree-d vertex of the n-vertex graph joins the next
/// vertex: cliques_containing(k, d) / total_k_cliques(k, n).
double attachment_probability(std::uint32_t k, std::uint64_t d, std::uint64_t n);

/// 1 + k/(k-1).
double tail_exponent(std::uint32_t k);

/// Limiting degree distribution. beta[i] is the fraction of vertices of
/// degree k + i.
struct TheoreticalDistribution {
    std::uint32_t k = 2;
    std::vector<double> beta;
    double gamma = 3.0;

    std::uint64_t d_max() const { return k + beta.size() - 1; }
    /// beta_d from the table when d <= d_max(), from the closed form beyond.
    double at(std::uint64_t d) const;
};

/// beta_k = 1/2 and beta_d = (a(d-1) - b) / (a d - b + k) beta_{d-1} up to d_max.
TheoreticalDistribution beta_table(std::uint32_t k, std::uint64_t d_max);

/// Gamma-function form of beta_d, evaluated through log-Gamma:
///   beta_d = 1/2 * G(3 + 2/(k-1)) / G(1 + 1/(k-1)) * G(d - b/a) / G(d - b/a + k/a + 1).
/// The leading 1/2 is what makes the sequence sum to one.
double beta_closed_form(std::uint32_t k, std::uint64_t d);

/// The same Gamma expression without the leading 1/2. It equals 2 beta_d and
/// sums to 2; kept to document the normalisation.
double unnormalized_closed_form(std::uint32_t k, std::uint64_t d);

/// Exact sum_{d >= from} beta_d, by telescoping the Gamma ratios.
double beta_tail_mass(std::uint32_t k, std::uint64_t from);

/// Exact sum_{d >= from} d beta_d.
double beta_tail_first_moment(std::uint32_t k, std::uint64_t from);

/// Smallest d with beta_d * n < 1e-4, capped at 1e5.
std::uint64_t default_d_max(std::uint32_t k, std::uint64_t n);

/// Exact expectations E[X_d(n)] for d in [k, d_max].
struct ExpectedDegreeTable {
    std::uint32_t k = 2;
    std::uint64_t n = 0;
    std::vector<double> expected; // expected[i] is E[X_{k+i}(n)]
    double overflow = 0.0;        // expected number of vertices with degree > d_max

    std::uint64_t d_max() const { return k + expected.size() - 1; }
    double at(std::uint64_t d) const {
        return d < k || d > d_max() ? 0.0 : expected[d - k];
    }
};

/// Default ceiling on overflow mass, as a fraction of n.
inline constexpr double kDefaultOverflowTolerance = 1e-6;

/// Runs the expected-degree recurrences from the deterministic graph at
/// k+2 vertices (Y_k = 2, Y_{k+1} = k) up to n. Mass leaving d_max is
/// accumulated in `overflow`; throws d_max-too-small if it exceeds
/// overflow_tolerance * n. d_max == 0 selects default_d_max(k, n).
/// Requires n >= k+2 and d_max >= k+1.
ExpectedDegreeTable expected_histogram_dp(std::uint32_t k, std::uint64_t n, std::uint64_t d_max = 0,
                                          double overflow_tolerance = kDefaultOverflowTolerance);

/// exp(-lambda^2 / (8 k n)).
double azuma_bound(std::uint32_t k, std::uint64_t n, double lambda);

/// exp(-lambda^2 / (8 k^2 n)): the bound that differences of at most 2k over
/// about n steps actually yield. Never smaller than azuma_bound.
double azuma_bound_conservative(std::uint32_t k, std::uint64_t n, double lambda);

/// lambda at which azuma_bound equals `probability`: sqrt(8 k n ln(1/p)).
double azuma_lambda(std::uint32_t k, std::uint64_t n, double probability);

} // namespace ktree::theory
