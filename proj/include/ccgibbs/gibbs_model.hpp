#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccgibbs/graph.hpp"
#include "ccgibbs/labels.hpp"
#include "ccgibbs/rng.hpp"

namespace ccgibbs {

// Inverse temperature, carried as the weight lambda = exp(-beta) so the
// beta = infinity limit degenerates cleanly to lambda = 0.
class Temperature {
  public:
    static Temperature from_beta(double beta);
    static Temperature infinite() { return Temperature(0.0, true); }
    static Temperature from_lambda(double lambda);

    double lambda() const { return lambda_; }
    bool is_infinite() const { return infinite_; }
    double beta() const;

  private:
    Temperature(double lambda, bool inf) : lambda_(lambda), infinite_(inf) {}
    double lambda_;
    bool infinite_;
};

enum class ModelFamily { kPotts, kHardcore, kPointer };

std::string family_name(ModelFamily f);

// A pairwise Markov random field over a graph: per-vertex weights b_v, a
// per-edge constraint A_e evaluated in the pinned (min id, max id)
// orientation, and a Hamiltonian decomposed into vertex and edge
// subfunctions with values in {0, 1}.
//
// Three concrete families:
//   Potts    — alphabet [q], A_e(x,y) = lambda iff x == y, H counts
//              monochromatic edges.
//   Hardcore — alphabet {0,1}, b_v = (1, lambda), A_e zero only at (1,1),
//              H counts occupied vertices; support = independent sets.
//   Pointer  — alphabet [3n] + vertex labels; each vertex may take any of
//              the 3n free labels or a neighbor; H counts edges whose two
//              endpoints carry the same vertex label.
class GibbsModel {
  public:
    static GibbsModel potts(Graph g, int colors, Temperature t);
    static GibbsModel hardcore(Graph g, double lambda);
    static GibbsModel pointer(Graph g, Temperature t);

    // Same family and graph at a different weight (used by cooling schedules).
    GibbsModel at_lambda(double lambda) const;

    ModelFamily family() const { return family_; }
    const Graph& graph() const { return graph_; }
    double lambda() const { return lambda_; }
    int colors() const { return colors_; }
    int alphabet_size() const { return alphabet_; }

    // Tight upper bound on H over the support (used for schedule steps);
    // each subfunction is individually bounded by subfunction_bound().
    int hamiltonian_bound() const;
    int subfunction_bound() const { return 1; }

    double vertex_weight(int v, std::int32_t a) const;
    // A_e in the canonical orientation: `a` labels the min-id endpoint.
    double edge_constraint(std::int32_t a, std::int32_t b) const;
    double max_edge_constraint() const { return 1.0; }

    int vertex_hamiltonian(int v, std::int32_t a) const;
    int edge_hamiltonian(std::int32_t a, std::int32_t b) const;

    bool label_admissible(int v, std::int32_t a) const;
    bool in_support(const Labeling& x) const;

    // Exact H of a support member; throws std::invalid_argument otherwise.
    int hamiltonian(const Labeling& x) const;

    // Proposal from the distribution proportional to b_v.
    std::int32_t sample_proposal(int v, RngStream& rng) const;
    double proposal_probability(int v, std::int32_t a) const;

    // Number of admissible labels at v (pointer: 3n + deg v; else |alphabet|).
    int admissible_count(int v) const;

    // Pointer-model helpers.
    bool is_vertex_label(std::int32_t a) const;
    int free_label_count() const { return 3 * graph_.vertex_count(); }

  private:
    GibbsModel(ModelFamily f, Graph g, int colors, double lambda);

    ModelFamily family_;
    Graph graph_;
    int colors_;   // Potts q; unused otherwise
    int alphabet_; // |A|
    double lambda_;
};

// Deterministic member of the support for chain i: Potts draws a uniform
// labeling, hardcore starts from the empty independent set, the pointer
// model draws uniformly among the 3n free labels.  Keyed per vertex so the
// batch simulator reproduces it exactly.
Labeling initial_state(const GibbsModel& m, std::uint64_t seed, std::int64_t chain);

} // namespace ccgibbs
