// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <streambuf>
#include <string>
#include <vector>

#include "ktree/analysis.hpp"
#include "ktree/experiment.hpp"
#include "ktree/generator.hpp"
#include "ktree/io.hpp"
#include "ktree/theory.hpp"

using namespace ktree;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) { return io::format_double(x); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<double> as_doubles(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

// FNV-1a over everything written to it.
class HashBuf : public std::streambuf {
public:
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    std::uint64_t bytes = 0;

protected:
    std::streamsize xsputn(const char* s, std::streamsize count) override {
        for (std::streamsize i = 0; i < count; ++i) absorb(static_cast<unsigned char>(s[i]));
        return count;
    }
    int_type overflow(int_type c) override {
        if (!traits_type::eq_int_type(c, traits_type::eof())) absorb(static_cast<unsigned char>(c));
        return traits_type::not_eof(c);
    }

private:
    void absorb(unsigned char c) {
        hash = (hash ^ c) * 0x100000001b3ULL;
        ++bytes;
    }
};

unsigned threads() { return experiment::default_threads(); }

Outcome clique_count_identity() {
    std::uint64_t instances = 0;
    for (std::uint32_t k = 2; k <= 4; ++k)
        for (std::uint32_t n = k + 2; n <= 25; ++n)
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const KTree t = generate({k, n, seed});
                const std::uint64_t expected = static_cast<std::uint64_t>(n - k - 1) * k + (k + 1);
                if (t.clique_count() != expected)
                    return {false, "k=" + std::to_string(k) + " n=" + std::to_string(n) + " store size " +
                                       std::to_string(t.clique_count()) + " != " + std::to_string(expected)};
                const auto stored = analysis::stored_cliques(t);
                if (stored.size() != expected || analysis::brute_force_k_cliques(t.adjacency(), k) != stored)
                    return {false, "k=" + std::to_string(k) + " n=" + std::to_string(n) + " seed=" +
                                       std::to_string(seed) + " store differs from brute force"};
                ++instances;
            }
    return {true, std::to_string(instances) + " instances exact"};
}

Outcome half_mass() {
    std::string detail;
    bool pass = true;
    for (std::uint32_t k = 2; k <= 5; ++k) {
        const auto counts = experiment::sample_degree_counts({k, 100000, 1000 + k}, k, 30, threads());
        const double frac = mean_of(as_doubles(counts)) / 100000.0;
        pass &= std::abs(frac - 0.5) <= 0.01;
        detail += "k=" + std::to_string(k) + ":" + fmt(frac) + " ";
    }
    return {pass, detail + "(target 0.5 +- 0.01)"};
}

Outcome beta_agreement() {
    const auto hist = experiment::aggregate(experiment::run_histograms({2, 1000000, 3003}, 10, threads()));
    const auto beta = theory::beta_table(2, 10);
    double worst = 0;
    for (std::uint32_t d = 2; d <= 10; ++d)
        worst = std::max(worst, std::abs(hist.fraction(d) - beta.at(d)) / beta.at(d));
    const bool anchors = std::abs(beta.at(2) - 0.5) < 1e-15 && std::abs(beta.at(3) - 0.2) < 1e-15 &&
                         std::abs(beta.at(4) - 0.1) < 1e-15 && std::abs(beta.at(5) - 2.0 / 35) < 1e-15;
    return {worst < 0.05 && anchors, "max relative error over d=2..10: " + fmt(worst) + " (limit 0.05)"};
}

Outcome dp_oracle() {
    const std::uint32_t k = 3, n = 2000, trials = 2000;
    const auto table = theory::expected_histogram_dp(k, n);
    const auto per_trial = experiment::run_histograms({k, n, 4004}, trials, threads());
    double worst_z = 0;
    std::uint32_t worst_d = k;
    for (std::uint32_t d = k; d <= 15; ++d) {
        std::vector<double> x;
        x.reserve(trials);
        for (const auto& h : per_trial) x.push_back(static_cast<double>(h.count(d)));
        const double se = sample_std(x) / std::sqrt(static_cast<double>(trials));
        const double gap = std::abs(mean_of(x) - table.at(d));
        const double z = se > 0 ? gap / se : (gap == 0 ? 0 : INFINITY);
        if (z > worst_z) worst_z = z, worst_d = d;
    }
    return {worst_z <= 3.0, "max |mean - E|/SE over d=3..15: " + fmt(worst_z) + " at d=" + std::to_string(worst_d)};
}

Outcome closed_form() {
    double worst = 0;
    for (std::uint32_t k = 2; k <= 8; ++k) {
        const auto t = theory::beta_table(k, 10000);
        for (std::uint64_t d = k; d <= 10000; ++d)
            worst = std::max(worst, std::abs(theory::beta_closed_form(k, d) - t.at(d)));
    }
    const double literal = theory::unnormalized_closed_form(2, 2);
    const double beta = theory::beta_closed_form(2, 2);
    const bool factor_two = std::abs(literal - 1.0) < 1e-12 && std::abs(beta - 0.5) < 1e-12;
    return {worst < 1e-10 && factor_two,
            "max gap " + fmt(worst) + "; without 1/2 the k=2, d=2 value is " + fmt(literal) + " vs beta " + fmt(beta)};
}

Outcome normalization() {
    bool pass = true;
    std::string detail;
    const std::uint64_t D = 100000;
    for (std::uint32_t k = 2; k <= 4; ++k) {
        const auto t = theory::beta_table(k, D);
        double mass = 0, moment = 0;
        for (std::uint64_t d = k; d <= D; ++d) {
            mass += t.at(d);
            moment += static_cast<double>(d) * t.at(d);
        }
        mass += theory::beta_tail_mass(k, D + 1);
        moment += theory::beta_tail_first_moment(k, D + 1);
        pass &= std::abs(mass - 1.0) <= 1e-6 && std::abs(moment - 2.0 * k) <= 1e-4;
        detail += "k=" + std::to_string(k) + ": sum=" + fmt(mass) + " mean=" + fmt(moment) + " ";
    }
    return {pass, detail};
}

Outcome tail_exponent() {
    bool pass = true;
    std::string detail;
    for (std::uint32_t k : {2u, 3u}) {
        std::vector<double> fits;
        for (const auto& h : experiment::run_histograms({k, 1000000, 7007 + k}, 5, threads()))
            fits.push_back(analysis::fit_tail_exponent(h, 10).gamma_hat);
        const double g = median(fits);
        const double target = theory::tail_exponent(k);
        pass &= std::abs(g - target) <= 0.15;
        detail += "k=" + std::to_string(k) + ": median " + fmt(g) + " vs " + fmt(target) + " ";
    }
    return {pass, detail + "(tolerance 0.15)"};
}

Outcome concentration() {
    const std::uint32_t k = 2, d = 2;
    const std::uint64_t n = 100000;
    const auto samples = experiment::sample_degree_counts({k, n, 8008}, d, 200, threads());
    const double expectation = theory::expected_histogram_dp(k, n).at(d);
    const auto report = analysis::concentration_report(k, n, d, 8008, samples, expectation);

    const std::uint64_t scaling_trials = 1000;
    const double small = sample_std(as_doubles(experiment::sample_degree_counts({k, 10000, 8108}, d, scaling_trials, threads())));
    const double large = sample_std(as_doubles(experiment::sample_degree_counts({k, 40000, 8208}, d, scaling_trials, threads())));
    const double ratio = large / small;

    return {report.violations == 0 && ratio >= 1.6 && ratio <= 2.4,
            "exceedances " + std::to_string(report.violations) + "/200 of lambda=" +
                fmt(report.azuma_lambda_at_1pct) + " (max deviation " + fmt(report.max_abs_deviation) +
                "); std ratio n=4e4/1e4: " + fmt(ratio)};
}

Outcome structure() {
    Rng pick(9009);
    for (int i = 0; i < 100; ++i) {
        const std::uint32_t k = 2 + static_cast<std::uint32_t>(pick.bounded(4));
        const std::uint32_t n = k + 2 + static_cast<std::uint32_t>(pick.bounded(200 - (k + 2) + 1));
        const KTree t = generate({k, n, pick()});
        const auto lemma = analysis::verify_lemma1(t);
        if (!lemma.passed()) return {false, "instance " + std::to_string(i) + ": " + lemma.witness};
        const auto td = analysis::validate_tree_decomposition(t.adjacency(), build_tree_decomposition(t));
        if (!td.valid() || td.width != k)
            return {false, "instance " + std::to_string(i) + " decomposition: " + td.witness + " width " +
                               std::to_string(td.width)};
    }
    return {true, "100 instances: lemma checks and decompositions valid, width = k"};
}

Outcome performance() {
    const ProcessParams p{2, 10000000, 10010};
    std::uint64_t hashes[2] = {0, 0};
    double seconds[2] = {0, 0};
    std::uint64_t bytes = 0;
    for (int run = 0; run < 2; ++run) {
        const auto t0 = Clock::now();
        HashBuf sink;
        std::ostream out(&sink);
        {
            const KTree tree = generate(p);
            io::write_edge_list(out, tree.adjacency(), {p.k, p.n, p.seed, {}});
        }
        seconds[run] = since(t0);
        hashes[run] = sink.hash;
        bytes = sink.bytes;
    }
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    const double peak_gb = static_cast<double>(usage.ru_maxrss) * 1024.0 / 1e9;
    char hash_text[20];
    std::snprintf(hash_text, sizeof hash_text, "%016llx", static_cast<unsigned long long>(hashes[0]));
    const double slowest = std::max(seconds[0], seconds[1]);
    return {slowest < 10.0 && peak_gb < 1.5 && hashes[0] == hashes[1],
            "runs " + fmt(seconds[0]) + " s / " + fmt(seconds[1]) + " s, peak RSS " + fmt(peak_gb) + " GB, " +
                std::to_string(bytes) + " bytes, hash " + hash_text + (hashes[0] == hashes[1] ? " (identical)" : " (DIFFERENT)")};
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> check;
};

Outcome timed(const Criterion& c) {
    const auto t0 = Clock::now();
    Outcome o = c.check();
    o.seconds = since(t0);
    if (o.seconds >= c.budget_seconds) {
        o.pass = false;
        o.detail += " [over time budget " + fmt(c.budget_seconds) + " s]";
    }
    return o;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "clique-count identity", 10, clique_count_identity},
        {2, "half of the vertices have degree k", 120, half_mass},
        {3, "empirical degree fractions match beta_d", 300, beta_agreement},
        {4, "Monte Carlo means match the exact expectations", 300, dp_oracle},
        {5, "closed form matches the recurrence", 5, closed_form},
        {6, "beta sums to 1 with mean degree 2k", 5, normalization},
        {7, "tail exponent fit", 300, tail_exponent},
        {8, "concentration of X_d", 300, concentration},
        {9, "structural checks and tree decompositions", 30, structure},
        {10, "performance and reproducibility", 40, performance},
    };

    // Performance first, so peak RSS reflects only that run.
    std::vector<Outcome> outcomes(criteria.size());
    outcomes.back() = timed(criteria.back());
    for (std::size_t i = 0; i + 1 < criteria.size(); ++i) outcomes[i] = timed(criteria[i]);

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto& o = outcomes[i];
        failures += !o.pass;
        std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), o.seconds);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
