#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ccgibbs/gibbs_model.hpp"
#include "ccgibbs/labels.hpp"

namespace ccgibbs {
namespace mh {

struct ChainParams {
    double p = 0.5;     // activation probability, in (0, 1]
    int t_mix = 0;      // transitions to run before a sample is taken
    double delta = 0.0; // TV budget the t_mix was derived from (informational)
};

// Activation + proposal step.  Entry v is the proposed label, or kInactive.
// Both draws come from the single stream keyed (v, t, chain).
std::vector<std::int32_t> propose(const GibbsModel& m, double p, std::uint64_t seed,
                                  std::int64_t t, std::int64_t chain);
// Same, writing the n entries at out[0..n).
void propose_into(const GibbsModel& m, double p, std::uint64_t seed, std::int64_t t,
                  std::int64_t chain, std::int32_t* out);

// Acceptance probability of edge {u,v}: the product of the three A_e
// fractions, a factor counting as 1 whenever a proposal in it is absent.
double edge_accept_probability(const GibbsModel& m, std::int32_t xu, std::int32_t xv,
                               std::int32_t su, std::int32_t sv);

// Draws the edge's single shared acceptance coin (keyed by the canonical
// edge id) only when the probability is strictly between 0 and 1.
bool edge_accept(const GibbsModel& m, int u, int v, std::int32_t xu, std::int32_t xv,
                 std::int32_t su, std::int32_t sv, std::uint64_t seed, std::int64_t t,
                 std::int64_t chain);
// Same with the (seed, t, chain) part of the key prehashed.
bool edge_accept(const GibbsModel& m, int u, int v, std::int32_t xu, std::int32_t xv,
                 std::int32_t su, std::int32_t sv, const RngStream::Base& accept_base);

// One full transition: propose, accept edges, then every active vertex
// adopts its proposal iff all incident edges accepted.
Labeling step(const GibbsModel& m, const Labeling& x, double p, std::uint64_t seed,
              std::int64_t t, std::int64_t chain);

// Initial state followed by params.t_mix transitions.
Labeling sample(const GibbsModel& m, const ChainParams& params, std::uint64_t seed,
                std::int64_t chain);

// Closed-form one-step expected-Hamming contraction factors of the coupled
// chains, as functions of the activation probability.
double contraction_bound_hardcore(int max_degree, double lambda, double p);
double contraction_bound_potts(int max_degree, int q, double p);
double contraction_bound(const GibbsModel& m, double p);

// Activation probability minimizing the contraction bound over the grid
// p in {0.01, 0.02, ..., 0.50}.
double choose_p(const GibbsModel& m);

// ceil(ln(n/delta) / ln(1/rho)) + 1 transitions, rho the contraction factor
// at the chosen (or given) p.  Throws RegimeError outside the guaranteed
// regime (hardcore: lambda*(Delta-1) < 1 when Delta >= 2; Potts: q > 2*Delta)
// or when no p on the grid contracts.
int mixing_time(const GibbsModel& m, int n, double delta,
                std::optional<double> p_override = std::nullopt);

// Per-sample TV budget when `total_samples` draws feed one estimate.
double sampling_delta(std::int64_t total_samples);

// Three-coin acceptance of edge {u,v} (u the min endpoint): coins forgive
// the clashes (X_u vs sigma_v), (X_v vs sigma_u) and (sigma_u vs sigma_v);
// a clash involving an absent proposal never rejects.
bool coin_edge_accepted(std::int32_t xu, std::int32_t xv, std::int32_t su, std::int32_t sv,
                        bool c1, bool c2, bool c3);

// Potts-only transition in the directed-edge three-coin view; induces the
// same kernel as step().  Coins are Bernoulli(lambda), keyed so that coin 1
// of (u,v) is coin 2 of (v,u) and coin 3 is shared.
Labeling potts_coin_step(const GibbsModel& m, const Labeling& x, double p,
                         std::uint64_t seed, std::int64_t t, std::int64_t chain);

struct CoupledResult {
    Labeling x_next, y_next;
    int hamming;
};

// One coupled transition of two chains differing at exactly one vertex.
// Hardcore couples by sharing all keyed randomness; Potts uses the
// three-coin coupling with the red/blue proposal swap.  Each side is
// marginally one step() transition.
CoupledResult coupled_step(const GibbsModel& m, const Labeling& x, const Labeling& y,
                           double p, std::uint64_t seed, std::int64_t t);

int hamming_distance(const Labeling& a, const Labeling& b);

} // namespace mh
} // namespace ccgibbs
