#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "ktree/analysis.hpp"
#include "ktree/error.hpp"
#include "ktree/generator.hpp"
#include "ktree/theory.hpp"
#include "oracles.hpp"

using namespace ktree;
using namespace ktree::theory;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected ktree::Error");
    return ErrorCode::io_error;
}

} // namespace

TEST_CASE("total_k_cliques and cliques_containing") {
    CHECK(total_k_cliques(2, 4) == 5);
    CHECK(total_k_cliques(3, 10) == 22);
    for (std::uint32_t k = 2; k < 9; ++k) CHECK(total_k_cliques(k, k + 1) == k + 1);
    CHECK(code_of([] { total_k_cliques(1, 5); }) == ErrorCode::invalid_params);
    CHECK(code_of([] { total_k_cliques(3, 3); }) == ErrorCode::invalid_params);

    CHECK(cliques_containing(2, 2) == 2);
    CHECK(cliques_containing(3, 5) == 7);
    CHECK(code_of([] { cliques_containing(3, 2); }) == ErrorCode::degree_below_k);
}

TEST_CASE("coefficients: c n is the clique count") {
    for (std::uint32_t k = 2; k < 10; ++k)
        for (std::uint64_t n = k + 1; n < 200; n += 7) {
            const auto c = coefficients(k, n);
            CHECK(c.a == k - 1);
            CHECK(c.b == static_cast<std::int64_t>(k) * (k - 2));
            CHECK(c.c_denominator == static_cast<std::int64_t>(n));
            CHECK(c.c_numerator == static_cast<std::int64_t>(total_k_cliques(k, n)));
            CHECK(c.c() > 0);
            // (a d - b) is exactly the cliques-containing count.
            for (std::uint64_t d = k; d < k + 10; ++d)
                CHECK(c.a * static_cast<std::int64_t>(d) - c.b == static_cast<std::int64_t>(cliques_containing(k, d)));
        }
}

TEST_CASE("attachment_probability") {
    CHECK(attachment_probability(2, 2, 10) == doctest::Approx(2.0 / 17.0).epsilon(1e-15));
    for (std::uint32_t k = 2; k < 9; ++k) {
        CHECK(attachment_probability(k, k, k + 1) == doctest::Approx(k / (k + 1.0)).epsilon(1e-15));
        double previous = 0;
        for (std::uint64_t d = k; d < k + 50; ++d) {
            const double p = attachment_probability(k, d, 1000);
            CHECK(p > previous);
            // affine in d: constant increments of a / (c n)
            if (d > k) CHECK(p - previous == doctest::Approx((k - 1.0) / total_k_cliques(k, 1000)));
            previous = p;
        }
    }
}

TEST_CASE("attachment_probability: expected one-step balance on generated histograms") {
    // sum_d P(k, d, n) X_d(n) = k whenever sum X_d = n and sum d X_d = 2|E|.
    for (std::uint32_t k = 2; k <= 5; ++k)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto hist = analysis::degree_histogram(generate({k, 3000, seed}));
            double balance = 0;
            for (auto [d, c] : hist.counts) balance += attachment_probability(k, d, hist.n) * static_cast<double>(c);
            CHECK(balance == doctest::Approx(k).epsilon(1e-12));
        }
}

TEST_CASE("tail_exponent") {
    CHECK(tail_exponent(2) == 3.0);
    CHECK(tail_exponent(3) == 2.5);
    double previous = tail_exponent(2);
    for (std::uint32_t k = 3; k < 1000; ++k) {
        const double g = tail_exponent(k);
        CHECK(g > 2.0);
        CHECK(g < previous);
        previous = g;
    }
    CHECK(tail_exponent(1000000) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("beta_table") {
    SUBCASE("k=2 leading values") {
        const auto t = beta_table(2, 5);
        REQUIRE(t.beta.size() == 4);
        CHECK(t.beta[0] == 0.5);
        CHECK(t.beta[1] == doctest::Approx(1.0 / 5).epsilon(1e-15));
        CHECK(t.beta[2] == doctest::Approx(1.0 / 10).epsilon(1e-15));
        CHECK(t.beta[3] == doctest::Approx(2.0 / 35).epsilon(1e-15));
        CHECK(t.gamma == 3.0);
    }
    SUBCASE("first ratio is k / (3k - 1)") {
        for (std::uint32_t k = 2; k < 12; ++k) {
            const auto t = beta_table(k, k + 1);
            CHECK(t.beta[1] / t.beta[0] == doctest::Approx(k / (3.0 * k - 1.0)).epsilon(1e-14));
        }
    }
    SUBCASE("strictly decreasing inside (0, 1)") {
        for (std::uint32_t k = 2; k < 9; ++k) {
            const auto t = beta_table(k, 5000);
            for (std::size_t i = 0; i < t.beta.size(); ++i) {
                CHECK(t.beta[i] > 0);
                CHECK(t.beta[i] < 1);
                if (i) CHECK(t.beta[i] < t.beta[i - 1]);
            }
        }
    }
    SUBCASE("k=2 partial sums telescope to 1 - 6/((D+1)(D+2))") {
        const std::uint64_t D = 1000000;
        const auto t = beta_table(2, D);
        double sum = 0;
        for (double b : t.beta) sum += b;
        CHECK(std::abs(sum - (1.0 - 6.0 / ((D + 1.0) * (D + 2.0)))) < 1e-9);
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
    SUBCASE("power-law ratio for k=2 near 2^-3 beyond d=100") {
        const auto t = beta_table(2, 20000);
        for (std::uint64_t d = 100; d <= 10000; d += 37) {
            const double r = t.at(2 * d) / t.at(d);
            CHECK(r >= 0.125 - 0.02);
            CHECK(r <= 0.125 + 0.02);
        }
    }
    SUBCASE("ratio tends to 2^-gamma for other k") {
        for (std::uint32_t k = 3; k <= 6; ++k) {
            const auto t = beta_table(k, 200000);
            CHECK(t.at(200000) / t.at(100000) == doctest::Approx(std::pow(2.0, -t.gamma)).epsilon(1e-3));
        }
    }
}

TEST_CASE("beta_closed_form") {
    SUBCASE("k=2 reduces to 12 / (d (d+1) (d+2))") {
        for (std::uint64_t d = 2; d < 500; ++d)
            CHECK(beta_closed_form(2, d) == doctest::Approx(12.0 / (d * (d + 1.0) * (d + 2.0))).epsilon(1e-12));
        CHECK(beta_closed_form(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(beta_closed_form(2, 5) == doctest::Approx(2.0 / 35).epsilon(1e-14));
    }
    SUBCASE("agrees with the recurrence to 1e-10") {
        for (std::uint32_t k = 2; k <= 8; ++k) {
            const auto t = beta_table(k, 10000);
            double worst = 0;
            for (std::uint64_t d = k; d <= 10000; ++d)
                worst = std::max(worst, std::abs(beta_closed_form(k, d) - t.at(d)));
            CHECK(worst < 1e-10);
        }
    }
    SUBCASE("without the 1/2 the expression is twice beta") {
        CHECK(unnormalized_closed_form(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
        for (std::uint32_t k = 2; k <= 8; ++k)
            for (std::uint64_t d = k; d < k + 40; ++d)
                CHECK(unnormalized_closed_form(k, d) == doctest::Approx(2 * beta_closed_form(k, d)).epsilon(1e-14));
    }
}

TEST_CASE("beta tails") {
    SUBCASE("k=2 tail mass is 6 / (D (D+1))") {
        for (std::uint64_t D : {2ULL, 3ULL, 10ULL, 1000ULL})
            CHECK(beta_tail_mass(2, D) == doctest::Approx(6.0 / (D * (D + 1.0))).epsilon(1e-11));
    }
    SUBCASE("whole-support sums are 1 and 2k") {
        for (std::uint32_t k = 2; k <= 8; ++k) {
            CHECK(beta_tail_mass(k, k) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(beta_tail_first_moment(k, k) == doctest::Approx(2.0 * k).epsilon(1e-12));
        }
    }
    SUBCASE("consecutive tails differ by one term") {
        for (std::uint32_t k = 2; k <= 6; ++k) {
            const auto t = beta_table(k, 400);
            for (std::uint64_t d = k; d < 400; d += 13) {
                CHECK(beta_tail_mass(k, d) - beta_tail_mass(k, d + 1) == doctest::Approx(t.at(d)).epsilon(1e-9));
                CHECK(beta_tail_first_moment(k, d) - beta_tail_first_moment(k, d + 1) ==
                      doctest::Approx(d * t.at(d)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("default_d_max") {
    for (std::uint32_t k = 2; k <= 5; ++k)
        for (std::uint64_t n : {1000ULL, 100000ULL}) {
            const auto d = default_d_max(k, n);
            const auto t = beta_table(k, d);
            CHECK((t.at(d) * n < 1e-4 || d == 100000));
            CHECK(t.at(d - 1) * n >= 1e-4);
        }
    CHECK(default_d_max(2, 1ULL << 40) == 100000);
}

TEST_CASE("expected_histogram_dp: base values") {
    for (std::uint32_t k = 2; k <= 7; ++k) {
        const auto t = expected_histogram_dp(k, k + 2, k + 5);
        CHECK(t.at(k) == 2.0);
        CHECK(t.at(k + 1) == static_cast<double>(k));
        CHECK(t.at(k + 2) == 0.0);
    }
}

TEST_CASE("expected_histogram_dp: frozen exact values") {
    // Exact rational expectations from enumerating every clique-choice sequence.
    const std::map<std::pair<std::uint32_t, std::uint32_t>, std::map<std::uint32_t, double>> frozen{
        {{2, 5}, {{2, 11.0 / 5}, {3, 8.0 / 5}, {4, 6.0 / 5}}},
        {{2, 6}, {{2, 18.0 / 7}, {3, 54.0 / 35}, {4, 6.0 / 5}, {5, 24.0 / 35}}},
        {{2, 7}, {{2, 3.0}, {3, 8.0 / 5}, {4, 124.0 / 105}, {5, 88.0 / 105}, {6, 8.0 / 21}}},
        {{3, 6}, {{3, 15.0 / 7}, {4, 12.0 / 7}, {5, 15.0 / 7}}},
        {{3, 7}, {{3, 2.5}, {4, 1.5}, {5, 1.5}, {6, 1.5}}},
    };
    for (const auto& [kn, values] : frozen) {
        const auto [k, n] = kn;
        const auto t = expected_histogram_dp(k, n, n);
        for (std::uint64_t d = k; d <= n; ++d) {
            auto it = values.find(static_cast<std::uint32_t>(d));
            CHECK(t.at(d) == doctest::Approx(it == values.end() ? 0.0 : it->second).epsilon(1e-13));
        }
    }
}

TEST_CASE("expected_histogram_dp: matches exhaustive enumeration") {
    const std::pair<std::uint32_t, std::uint32_t> cases[] = {{2, 8}, {2, 9}, {3, 8}, {4, 8}, {5, 9}};
    for (auto [k, n] : cases) {
        CAPTURE(k);
        CAPTURE(n);
        const auto exact = oracle::enumerate_expected_histogram(k, n);
        const auto t = expected_histogram_dp(k, n, n);
        for (std::uint64_t d = k; d <= n; ++d) {
            auto it = exact.find(static_cast<std::uint32_t>(d));
            CHECK(t.at(d) == doctest::Approx(it == exact.end() ? 0.0 : it->second).epsilon(1e-12));
        }
    }
}

TEST_CASE("expected_histogram_dp: mass balance and degree-k half") {
    for (std::uint32_t k = 2; k <= 5; ++k)
        for (std::uint64_t n : {50ULL, 1000ULL, 20000ULL}) {
            const auto t = expected_histogram_dp(k, n);
            double mass = t.overflow;
            double degree_mass = 0;
            for (std::uint64_t d = k; d <= t.d_max(); ++d) {
                CHECK(t.at(d) >= 0);
                mass += t.at(d);
                degree_mass += static_cast<double>(d) * t.at(d);
            }
            CHECK(std::abs(mass - static_cast<double>(n)) <= 1e-6 * n);
            if (t.overflow == 0)
                CHECK(degree_mass == doctest::Approx(2.0 * (k * (k + 1) / 2 + k * (n - k - 1.0))).epsilon(1e-9));
        }
    const auto t = expected_histogram_dp(2, 10000);
    CHECK(std::abs(t.at(2) / 10000 - 0.5) < 1e-3);
}

TEST_CASE("expected_histogram_dp: |Y_d(n) - n beta_d| stays bounded as n grows") {
    // Deviation at n=1e5 no larger than at 1e3 or 1e4, up to slack.
    for (std::uint32_t k : {2u, 3u}) {
        const auto beta = beta_table(k, k + 10);
        const auto small = expected_histogram_dp(k, 1000);
        const auto mid = expected_histogram_dp(k, 10000);
        const auto large = expected_histogram_dp(k, 100000);
        for (std::uint64_t d = k; d <= k + 5; ++d) {
            const double e3 = std::abs(small.at(d) - 1000 * beta.at(d));
            const double e4 = std::abs(mid.at(d) - 10000 * beta.at(d));
            const double e5 = std::abs(large.at(d) - 100000 * beta.at(d));
            const double c = std::max({e3, e4, e5});
            CAPTURE(d);
            CHECK(c < 5.0);
            CHECK(e5 <= std::max(e3, e4) + 0.05);
            CHECK(std::abs(large.at(d) / 100000 - beta.at(d)) <= c / 100000 + 1e-15);
        }
    }
}

TEST_CASE("expected_histogram_dp: errors") {
    CHECK(code_of([] { expected_histogram_dp(2, 3); }) == ErrorCode::invalid_params);
    CHECK(code_of([] { expected_histogram_dp(2, 100, 2); }) == ErrorCode::invalid_params);
    CHECK(code_of([] { expected_histogram_dp(2, 1000, 6); }) == ErrorCode::d_max_too_small);
    // Tolerance is configurable.
    CHECK(expected_histogram_dp(2, 1000, 6, 1.0).overflow > 0);
}

TEST_CASE("azuma bounds") {
    CHECK(azuma_bound(2, 1000, 0.0) == 1.0);
    CHECK(azuma_bound_conservative(2, 1000, 0.0) == 1.0);
    double previous = 1.0;
    for (double lambda = 10; lambda < 2000; lambda += 10) {
        const double b = azuma_bound(3, 10000, lambda);
        CHECK(b < previous);
        CHECK(b <= azuma_bound_conservative(3, 10000, lambda));
        CHECK(azuma_bound(3, 20000, lambda) > b);
        previous = b;
    }
    for (std::uint32_t k = 2; k <= 5; ++k) {
        const std::uint64_t n = 100000;
        const double lambda = std::sqrt(8.0 * k * n * std::log(100.0));
        CHECK(azuma_bound(k, n, lambda) == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(azuma_lambda(k, n, 0.01) == doctest::Approx(lambda).epsilon(1e-14));
    }
    CHECK(code_of([] { azuma_bound(2, 100, -1.0); }) == ErrorCode::invalid_params);
}
