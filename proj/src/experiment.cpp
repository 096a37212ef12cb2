#include "ktree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "ktree/error.hpp"
#include "ktree/theory.hpp"

namespace ktree::experiment {

unsigned default_threads() {
    if (const char* env = std::getenv("KTREE_LAB_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_trial(std::uint64_t trials, unsigned threads, const std::function<void(std::uint64_t)>& body) {
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(trials, 1)));
    if (threads == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) body(t);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::uint64_t t = next++; t < trials && !stop; t = next++) {
            try {
                body(t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

ProcessParams trial_params(const ProcessParams& base, std::uint64_t trial) {
    ProcessParams p = base;
    p.seed = trial_seed(base.seed, trial);
    return p;
}

std::vector<analysis::DegreeHistogram> run_histograms(const ProcessParams& base, std::uint64_t trials,
                                                      unsigned threads) {
    validate(base);
    std::vector<analysis::DegreeHistogram> out(trials);
    for_each_trial(trials, threads, [&](std::uint64_t t) {
        out[t] = analysis::degree_histogram(generate(trial_params(base, t)));
    });
    return out;
}

analysis::DegreeHistogram aggregate(const std::vector<analysis::DegreeHistogram>& per_trial) {
    if (per_trial.empty()) return {};
    analysis::DegreeHistogram total = per_trial.front();
    for (std::size_t i = 1; i < per_trial.size(); ++i) total += per_trial[i];
    return total;
}

std::vector<std::uint64_t> sample_degree_counts(const ProcessParams& base, std::uint32_t d, std::uint64_t trials,
                                                unsigned threads) {
    validate(base);
    std::vector<std::uint64_t> out(trials);
    for_each_trial(trials, threads, [&](std::uint64_t t) {
        out[t] = analysis::count_degree(generate(trial_params(base, t)), d);
    });
    return out;
}

analysis::ConcentrationReport concentration_experiment(std::uint32_t k, std::uint64_t n, std::uint32_t d,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       unsigned threads) {
    if (trials < 2) throw Error(ErrorCode::invalid_params, "concentration needs at least 2 trials");
    if (n > std::numeric_limits<Vertex>::max())
        throw Error(ErrorCode::invalid_params, "n exceeds the 32-bit vertex range");
    const ProcessParams base{k, static_cast<Vertex>(n), seed};
    validate(base);

    std::optional<double> exact;
    if (n <= 10000 && n >= static_cast<std::uint64_t>(k) + 2) {
        const auto table = theory::expected_histogram_dp(k, n);
        if (d <= table.d_max()) exact = table.at(d);
    }
    const auto samples = sample_degree_counts(base, d, trials, threads);
    return analysis::concentration_report(k, n, d, seed, samples, exact);
}

} // namespace ktree::experiment
