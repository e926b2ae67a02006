#include "ccgibbs/gibbs_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ccgibbs {

Temperature Temperature::from_beta(double beta) {
    if (std::isnan(beta) || beta < 0.0)
        throw std::invalid_argument("temperature: beta must be >= 0");
    if (std::isinf(beta)) return Temperature(0.0, true);
    return Temperature(std::exp(-beta), false);
}

Temperature Temperature::from_lambda(double lambda) {
    if (std::isnan(lambda) || lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("temperature: lambda must be in [0,1]");
    return Temperature(lambda, lambda == 0.0);
}

double Temperature::beta() const {
    if (infinite_) return std::numeric_limits<double>::infinity();
    return -std::log(lambda_);
}

std::string family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::kPotts: return "potts";
        case ModelFamily::kHardcore: return "hardcore";
        case ModelFamily::kPointer: return "pointer";
    }
    return "?";
}

GibbsModel::GibbsModel(ModelFamily f, Graph g, int colors, double lambda)
    : family_(f), graph_(std::move(g)), colors_(colors), lambda_(lambda) {
    switch (family_) {
        case ModelFamily::kPotts: alphabet_ = colors_; break;
        case ModelFamily::kHardcore: alphabet_ = 2; break;
        case ModelFamily::kPointer: alphabet_ = 4 * graph_.vertex_count(); break;
    }
}

GibbsModel GibbsModel::potts(Graph g, int colors, Temperature t) {
    if (colors < 1) throw std::invalid_argument("potts: q must be >= 1");
    return GibbsModel(ModelFamily::kPotts, std::move(g), colors, t.lambda());
}

GibbsModel GibbsModel::hardcore(Graph g, double lambda) {
    if (std::isnan(lambda) || lambda < 0.0)
        throw std::invalid_argument("hardcore: lambda must be >= 0");
    return GibbsModel(ModelFamily::kHardcore, std::move(g), 0, lambda);
}

GibbsModel GibbsModel::pointer(Graph g, Temperature t) {
    return GibbsModel(ModelFamily::kPointer, std::move(g), 0, t.lambda());
}

GibbsModel GibbsModel::at_lambda(double lambda) const {
    GibbsModel copy = *this;
    copy.lambda_ = lambda;
    return copy;
}

int GibbsModel::hamiltonian_bound() const {
    // tight over the support: Potts/pointer H only counts edges, hardcore
    // only occupied vertices
    switch (family_) {
        case ModelFamily::kPotts:
        case ModelFamily::kPointer: return graph_.edge_count();
        case ModelFamily::kHardcore: return graph_.vertex_count();
    }
    return 0;
}

double GibbsModel::vertex_weight(int v, std::int32_t a) const {
    switch (family_) {
        case ModelFamily::kPotts: return (a >= 0 && a < colors_) ? 1.0 : 0.0;
        case ModelFamily::kHardcore:
            if (a == 0) return 1.0;
            if (a == 1) return lambda_;
            return 0.0;
        case ModelFamily::kPointer: return label_admissible(v, a) ? 1.0 : 0.0;
    }
    return 0.0;
}

double GibbsModel::edge_constraint(std::int32_t a, std::int32_t b) const {
    switch (family_) {
        case ModelFamily::kPotts: return a == b ? lambda_ : 1.0;
        case ModelFamily::kHardcore: return (a == 1 && b == 1) ? 0.0 : 1.0;
        case ModelFamily::kPointer: return (a == b && is_vertex_label(a)) ? lambda_ : 1.0;
    }
    return 1.0;
}

int GibbsModel::vertex_hamiltonian(int, std::int32_t a) const {
    return family_ == ModelFamily::kHardcore && a == 1 ? 1 : 0;
}

int GibbsModel::edge_hamiltonian(std::int32_t a, std::int32_t b) const {
    switch (family_) {
        case ModelFamily::kPotts: return a == b ? 1 : 0;
        case ModelFamily::kHardcore: return 0;
        case ModelFamily::kPointer: return (a == b && is_vertex_label(a)) ? 1 : 0;
    }
    return 0;
}

bool GibbsModel::is_vertex_label(std::int32_t a) const {
    return family_ == ModelFamily::kPointer && a >= free_label_count();
}

bool GibbsModel::label_admissible(int v, std::int32_t a) const {
    if (a < 0 || a >= alphabet_) return false;
    if (family_ != ModelFamily::kPointer) return true;
    const int free = free_label_count();
    return a < free || graph_.adjacent(v, a - free);
}

bool GibbsModel::in_support(const Labeling& x) const {
    const int n = graph_.vertex_count();
    if (static_cast<int>(x.size()) != n) return false;
    for (int v = 0; v < n; ++v)
        if (!label_admissible(v, x[v])) return false;
    if (family_ == ModelFamily::kHardcore) {
        for (const auto& e : graph_.edges())
            if (x[e.u] == 1 && x[e.v] == 1) return false;
    }
    return true;
}

int GibbsModel::hamiltonian(const Labeling& x) const {
    if (!in_support(x)) throw std::invalid_argument("hamiltonian: labeling not in support");
    int h = 0;
    for (int v = 0; v < graph_.vertex_count(); ++v) h += vertex_hamiltonian(v, x[v]);
    for (const auto& e : graph_.edges()) h += edge_hamiltonian(x[e.u], x[e.v]);
    return h;
}

int GibbsModel::admissible_count(int v) const {
    if (family_ == ModelFamily::kPointer) return free_label_count() + graph_.degree(v);
    return alphabet_;
}

std::int32_t GibbsModel::sample_proposal(int v, RngStream& rng) const {
    switch (family_) {
        case ModelFamily::kPotts:
            return static_cast<std::int32_t>(rng.next_below(static_cast<std::uint32_t>(colors_)));
        case ModelFamily::kHardcore:
            return rng.next_bernoulli(lambda_ / (1.0 + lambda_)) ? 1 : 0;
        case ModelFamily::kPointer: {
            // uniform over the admissible set by rejection from the alphabet
            for (;;) {
                const auto a = static_cast<std::int32_t>(
                    rng.next_below(static_cast<std::uint32_t>(alphabet_)));
                if (label_admissible(v, a)) return a;
            }
        }
    }
    return 0;
}

double GibbsModel::proposal_probability(int v, std::int32_t a) const {
    switch (family_) {
        case ModelFamily::kPotts:
            return (a >= 0 && a < colors_) ? 1.0 / colors_ : 0.0;
        case ModelFamily::kHardcore:
            if (a == 1) return lambda_ / (1.0 + lambda_);
            if (a == 0) return 1.0 / (1.0 + lambda_);
            return 0.0;
        case ModelFamily::kPointer:
            return label_admissible(v, a) ? 1.0 / admissible_count(v) : 0.0;
    }
    return 0.0;
}

Labeling initial_state(const GibbsModel& m, std::uint64_t seed, std::int64_t chain) {
    const int n = m.graph().vertex_count();
    Labeling x(n, 0);
    switch (m.family()) {
        case ModelFamily::kHardcore:
            break; // empty independent set
        case ModelFamily::kPotts:
            for (int v = 0; v < n; ++v) {
                RngStream rng(seed, {vertex_entity(v), 0, RngTag::kInit,
                                     static_cast<std::uint64_t>(chain)});
                x[v] = static_cast<std::int32_t>(
                    rng.next_below(static_cast<std::uint32_t>(m.colors())));
            }
            break;
        case ModelFamily::kPointer:
            for (int v = 0; v < n; ++v) {
                RngStream rng(seed, {vertex_entity(v), 0, RngTag::kInit,
                                     static_cast<std::uint64_t>(chain)});
                x[v] = static_cast<std::int32_t>(
                    rng.next_below(static_cast<std::uint32_t>(m.free_label_count())));
            }
            break;
    }
    return x;
}

} // namespace ccgibbs
