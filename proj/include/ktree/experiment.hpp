#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ktree/analysis.hpp"
#include "ktree/generator.hpp"

namespace ktree::experiment {

/// Worker count: KTREE_LAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned default_threads();

/// Calls body(t) once for every t in [0, trials) on up to `threads` workers.
/// body must only write state owned by trial t. The first exception thrown
/// by any trial is rethrown after all workers stop.
void for_each_trial(std::uint64_t trials, unsigned threads, const std::function<void(std::uint64_t)>& body);

/// Parameters of trial t: `base` with seed trial_seed(base.seed, t).
ProcessParams trial_params(const ProcessParams& base, std::uint64_t trial);

/// One histogram per trial, index-aligned with the trial number, so the
/// result does not depend on scheduling.
std::vector<analysis::DegreeHistogram> run_histograms(const ProcessParams& base, std::uint64_t trials,
                                                      unsigned threads);

/// Sum of per-trial histograms.
analysis::DegreeHistogram aggregate(const std::vector<analysis::DegreeHistogram>& per_trial);

/// X_d(n) for every trial.
std::vector<std::uint64_t> sample_degree_counts(const ProcessParams& base, std::uint32_t d, std::uint64_t trials,
                                                unsigned threads);

/// Runs `trials` independent generations and compares the spread of X_d(n)
/// with the Azuma bound at the 1% level. For n <= 1e4 the exact expectation
/// from the recurrence is used as the centre when d is inside its table.
analysis::ConcentrationReport concentration_experiment(std::uint32_t k, std::uint64_t n, std::uint32_t d,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       unsigned threads);

} // namespace ktree::experiment
