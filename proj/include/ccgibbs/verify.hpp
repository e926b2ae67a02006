#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccgibbs/chain.hpp"
#include "ccgibbs/cube.hpp"
#include "ccgibbs/gibbs_model.hpp"

namespace ccgibbs {
namespace verify {

// Shared measurement helpers for the verification suites and the
// acceptance harness.

// Empirical TV distance between `samples` chain draws (params.t_mix
// transitions each) and the exact distribution.
double empirical_tv(const GibbsModel& m, const mh::ChainParams& params, int samples,
                    std::uint64_t seed);

// Batch transitions vs per-chain replay under shared keys; true iff every
// intermediate state matrix matches bitwise.
bool batch_matches_reference(const GibbsModel& m, int chains, int transitions, double p,
                             std::uint64_t seed);

// Same contract for the event-driven hardcore path.
bool fast_path_matches_reference(const GibbsModel& m, int chains, int transitions, double p,
                                 std::uint64_t seed);

struct ContractionStats {
    double mean = 0.0;
    double stderr_mean = 0.0;
    double bound = 0.0;
    int trials = 0;
    bool within(double sigmas) const { return mean <= bound + sigmas * stderr_mean; }
};

// Monte-Carlo one-step coupled-Hamming experiment on `m.graph()` at
// activation probability p, against the closed-form bound.
ContractionStats contraction_experiment(const GibbsModel& m, double p, int trials,
                                        std::uint64_t seed);

struct LoadStats {
    std::int64_t max_machine_words = 0;
    std::int64_t rounds = 0;
};

// Per-transition routing loads of the batch simulator at (n, k = n); they
// are data-independent, so any model/graph gives the same numbers.
LoadStats batch_transition_loads(int n);

// Random support member (test fixture), keyed.
Labeling random_support_state(const GibbsModel& m, std::uint64_t seed, std::int64_t tag);

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::vector<std::string> lines;
    std::vector<std::string> csv; // optional export rows (header first)
};

struct SuiteOptions {
    int n = 10;            // largest instance size
    int seeds = 3;
    int transitions = 12;
    int samples = 20000;   // per empirical distribution
    int trials = 20000;    // per contraction experiment
    int random_graphs = 50;
    std::uint64_t seed = 1;
    double tv_tol = 0.08;
};

SuiteResult suite_oracle_equivalence(const SuiteOptions& o);
SuiteResult suite_gather(const SuiteOptions& o);
SuiteResult suite_stationarity(const SuiteOptions& o);
SuiteResult suite_contraction(const SuiteOptions& o);
SuiteResult suite_kernel(const SuiteOptions& o);
SuiteResult suite_ledger(const SuiteOptions& o);
SuiteResult suite_triangle(const SuiteOptions& o);
SuiteResult suite_schedule(const SuiteOptions& o);

std::vector<SuiteResult> run_suites(const std::string& which, const SuiteOptions& o);

} // namespace verify
} // namespace ccgibbs
