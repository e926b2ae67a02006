#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ccgibbs/gibbs_model.hpp"

namespace ccgibbs {

constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

// Exact partition function in the lambda parameterization:
//   Z(lambda) = sum_j level_counts[j] * lambda^j,
// where level_counts[j] is the number of support labelings with H = j.
// Coefficients are exact integers; evaluation at lambda in {0, 1} is exact
// integer arithmetic.
struct PartitionPolynomial {
    std::vector<std::int64_t> level_counts;

    long double evaluate(double lambda) const;
    long double evaluate_beta(double beta) const; // beta may be +infinity
    std::int64_t at_lambda_zero() const { return level_counts.empty() ? 0 : level_counts[0]; }
    std::int64_t at_lambda_one() const;
    int degree() const { return static_cast<int>(level_counts.size()) - 1; }
};

// Brute-force oracle over the whole support.  Throws EnumerationCapError
// when the admissible state space exceeds `cap`; the pointer family falls
// back to an exact edge-subset inclusion-exclusion count in that case
// (feasible while 2^m stays small).
PartitionPolynomial exact_partition_poly(const GibbsModel& m,
                                         std::int64_t cap = kDefaultEnumerationCap);

// Z at an explicit temperature, via the exact polynomial.
long double exact_partition(const GibbsModel& m, Temperature t,
                            std::int64_t cap = kDefaultEnumerationCap);

// Pointer-model specializations (exact, no state enumeration):
//   Z(1) = prod_v (3n + deg v)
//   full polynomial via inclusion-exclusion over edge subsets.
std::int64_t pointer_total_labelings(const Graph& g);
PartitionPolynomial pointer_partition_poly_ie(const Graph& g);

// Exact Gibbs distribution of the model at its own weight, keyed by the
// mixed-radix encoding of the labeling.  Probabilities sum to 1 within
// 1e-12.  Throws EnumerationCapError over the cap and std::runtime_error
// on an empty support.
struct ExactDistribution {
    std::unordered_map<std::uint64_t, double> prob;
    long double partition_value = 0.0L;

    double prob_of(std::uint64_t code) const {
        auto it = prob.find(code);
        return it == prob.end() ? 0.0 : it->second;
    }
};

ExactDistribution exact_distribution(const GibbsModel& m,
                                     std::int64_t cap = kDefaultEnumerationCap);

// Mixed-radix encoding of a labeling with radix |alphabet|.
std::uint64_t encode_labeling(const GibbsModel& m, const Labeling& x);
Labeling decode_labeling(const GibbsModel& m, std::uint64_t code);

// Total variation distance between an empirical map (counts / total) and an
// exact distribution.
double tv_distance(const std::unordered_map<std::uint64_t, std::int64_t>& counts,
                   std::int64_t total, const ExactDistribution& exact);

} // namespace ccgibbs
