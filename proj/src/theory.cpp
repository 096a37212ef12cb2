#include "ktree/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "ktree/error.hpp"

namespace ktree::theory {

namespace {

void require_k(std::uint32_t k) {
    if (k < 2) throw Error(ErrorCode::invalid_params, "k must be at least 2, got " + std::to_string(k));
}

void require_n(std::uint32_t k, std::uint64_t n) {
    require_k(k);
    if (n < static_cast<std::uint64_t>(k) + 1)
        throw Error(ErrorCode::invalid_params, "n must be at least k+1, got " + std::to_string(n));
}

double lgam(double x) { return boost::math::lgamma(x); }

// beta_d = exp(log_pref) / 2 * G(d + p) / G(d + q).
struct GammaShape {
    double p;        // -b/a
    double q;        // p + k/a + 1
    double log_pref; // log of G(3 + 2/(k-1)) / G(1 + 1/(k-1))
};

GammaShape shape(std::uint32_t k) {
    const double a = k - 1.0;
    const double b = static_cast<double>(k) * (k - 2.0);
    const double p = -b / a;
    const double q = p + k / a + 1.0;
    return {p, q, lgam(3.0 + 2.0 / a) - lgam(1.0 + 1.0 / a)};
}

} // namespace

Coefficients coefficients(std::uint32_t k, std::uint64_t n) {
    require_n(k, n);
    const auto kk = static_cast<std::int64_t>(k);
    const auto nn = static_cast<std::int64_t>(n);
    return {kk - 1, kk * (kk - 2), kk * nn - (kk * kk - 1), nn};
}

std::uint64_t total_k_cliques(std::uint32_t k, std::uint64_t n) {
    require_n(k, n);
    return (n - k - 1) * k + (k + 1);
}

std::uint64_t cliques_containing(std::uint32_t k, std::uint64_t d) {
    require_k(k);
    if (d < k)
        throw Error(ErrorCode::degree_below_k,
                    "degree " + std::to_string(d) + " is below k = " + std::to_string(k));
    return k + (k - 1) * (d - k);
}

double attachment_probability(std::uint32_t k, std::uint64_t d, std::uint64_t n) {
    const std::uint64_t total = total_k_cliques(k, n);
    return static_cast<double>(cliques_containing(k, d)) / static_cast<double>(total);
}

double tail_exponent(std::uint32_t k) {
    require_k(k);
    return 1.0 + static_cast<double>(k) / (k - 1.0);
}

double TheoreticalDistribution::at(std::uint64_t d) const {
    if (d < k) return 0.0;
    if (d <= d_max()) return beta[d - k];
    return beta_closed_form(k, d);
}

TheoreticalDistribution beta_table(std::uint32_t k, std::uint64_t d_max) {
    require_k(k);
    if (d_max < k)
        throw Error(ErrorCode::invalid_params, "d_max must be at least k, got " + std::to_string(d_max));
    const double a = k - 1.0;
    const double b = static_cast<double>(k) * (k - 2.0);

    TheoreticalDistribution dist;
    dist.k = k;
    dist.gamma = tail_exponent(k);
    dist.beta.resize(d_max - k + 1);
    dist.beta[0] = 0.5;
    for (std::uint64_t d = k + 1; d <= d_max; ++d) {
        const double dd = static_cast<double>(d);
        dist.beta[d - k] = (a * (dd - 1.0) - b) / (a * dd - b + k) * dist.beta[d - k - 1];
    }
    return dist;
}

double unnormalized_closed_form(std::uint32_t k, std::uint64_t d) {
    require_k(k);
    if (d < k) return 0.0;
    const GammaShape s = shape(k);
    const double dd = static_cast<double>(d);
    return std::exp(s.log_pref + lgam(dd + s.p) - lgam(dd + s.q));
}

double beta_closed_form(std::uint32_t k, std::uint64_t d) { return 0.5 * unnormalized_closed_form(k, d); }

// Both tails telescope through
//   G(d+p)/G(d+q) = [G(d+p)/G(d+q-1) - G(d+p+1)/G(d+q)] / (q-p-1),
// which sums to G(D+p) / ((q-p-1) G(D+q-1)) over d >= D when q-p-1 > 0.
double beta_tail_mass(std::uint32_t k, std::uint64_t from) {
    require_k(k);
    from = std::max<std::uint64_t>(from, k);
    const GammaShape s = shape(k);
    const double D = static_cast<double>(from);
    const double y = s.q - s.p - 1.0;
    return 0.5 * std::exp(s.log_pref + lgam(D + s.p) - lgam(D + s.q - 1.0)) / y;
}

double beta_tail_first_moment(std::uint32_t k, std::uint64_t from) {
    require_k(k);
    from = std::max<std::uint64_t>(from, k);
    const GammaShape s = shape(k);
    const double D = static_cast<double>(from);
    const double y = s.q - s.p - 1.0;
    // d = (d + p) - p; the shifted series has q - (p+1) - 1 = y - 1 = 1/(k-1) > 0.
    const double shifted = std::exp(s.log_pref + lgam(D + s.p + 1.0) - lgam(D + s.q - 1.0)) / (y - 1.0);
    const double plain = std::exp(s.log_pref + lgam(D + s.p) - lgam(D + s.q - 1.0)) / y;
    return 0.5 * (shifted - s.p * plain);
}

std::uint64_t default_d_max(std::uint32_t k, std::uint64_t n) {
    require_k(k);
    constexpr std::uint64_t cap = 100000;
    const double a = k - 1.0;
    const double b = static_cast<double>(k) * (k - 2.0);
    double beta = 0.5;
    std::uint64_t d = k;
    while (beta * static_cast<double>(n) >= 1e-4 && d < cap) {
        ++d;
        const double dd = static_cast<double>(d);
        beta *= (a * (dd - 1.0) - b) / (a * dd - b + k);
    }
    return std::max<std::uint64_t>(d, k + 1);
}

ExpectedDegreeTable expected_histogram_dp(std::uint32_t k, std::uint64_t n, std::uint64_t d_max,
                                          double overflow_tolerance) {
    require_k(k);
    if (n < static_cast<std::uint64_t>(k) + 2)
        throw Error(ErrorCode::invalid_params, "n must be at least k+2, got " + std::to_string(n));
    if (d_max == 0) d_max = default_d_max(k, n);
    if (d_max < static_cast<std::uint64_t>(k) + 1)
        throw Error(ErrorCode::invalid_params, "d_max must be at least k+1, got " + std::to_string(d_max));

    const double a = k - 1.0;
    const double b = static_cast<double>(k) * (k - 2.0);

    ExpectedDegreeTable table;
    table.k = k;
    table.n = n;
    std::vector<double>& y = table.expected;
    y.assign(d_max - k + 1, 0.0);
    y[0] = 2.0;
    y[1] = static_cast<double>(k);

    for (std::uint64_t m = k + 2; m < n; ++m) {
        const double inv_cliques = 1.0 / static_cast<double>(total_k_cliques(k, m));
        auto prob = [&](std::uint64_t d) { return (a * static_cast<double>(d) - b) * inv_cliques; };

        // Degrees above m-1 are unreachable in an m-vertex graph.
        const std::uint64_t top = std::min<std::uint64_t>(d_max, m - 1);
        if (top == d_max) table.overflow += prob(d_max) * y[d_max - k];
        const std::uint64_t upper = std::min<std::uint64_t>(d_max, m);
        // Descending so y[d-1] still holds the step-m value when y[d] is updated.
        for (std::uint64_t d = upper; d > k; --d) {
            const std::size_t i = d - k;
            const double stay = d <= top ? (1.0 - prob(d)) * y[i] : 0.0;
            y[i] = prob(d - 1) * y[i - 1] + stay;
        }
        y[0] = 1.0 + (1.0 - prob(k)) * y[0];
    }

    if (table.overflow > overflow_tolerance * static_cast<double>(n))
        throw Error(ErrorCode::d_max_too_small,
                    "expected mass above d_max=" + std::to_string(d_max) + " is " +
                        std::to_string(table.overflow) + " vertices (tolerance " +
                        std::to_string(overflow_tolerance * static_cast<double>(n)) + ")");
    return table;
}

double azuma_bound(std::uint32_t k, std::uint64_t n, double lambda) {
    require_n(k, n);
    if (lambda < 0.0) throw Error(ErrorCode::invalid_params, "lambda must be non-negative");
    return std::exp(-lambda * lambda / (8.0 * k * static_cast<double>(n)));
}

double azuma_bound_conservative(std::uint32_t k, std::uint64_t n, double lambda) {
    require_n(k, n);
    if (lambda < 0.0) throw Error(ErrorCode::invalid_params, "lambda must be non-negative");
    return std::exp(-lambda * lambda / (8.0 * k * static_cast<double>(k) * static_cast<double>(n)));
}

double azuma_lambda(std::uint32_t k, std::uint64_t n, double probability) {
    require_n(k, n);
    if (!(probability > 0.0 && probability <= 1.0))
        throw Error(ErrorCode::invalid_params, "probability must lie in (0, 1]");
    return std::sqrt(8.0 * k * static_cast<double>(n) * std::log(1.0 / probability));
}

} // namespace ktree::theory
