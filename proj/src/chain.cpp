#include "ccgibbs/chain.hpp"

#include <cmath>
#include <stdexcept>

#include "ccgibbs/errors.hpp"

namespace ccgibbs {
namespace mh {

namespace {

inline bool coin(const GibbsModel& m, int u, int v, RngTag tag, std::uint64_t seed, std::int64_t t,
                 std::int64_t chain) {
    RngStream rng(seed, {edge_entity(u, v), static_cast<std::uint64_t>(t), tag,
                         static_cast<std::uint64_t>(chain)});
    return rng.next_unit() < m.lambda();
}

} // namespace

void propose_into(const GibbsModel& m, double p, std::uint64_t seed, std::int64_t t,
                  std::int64_t chain, std::int32_t* out) {
    const int n = m.graph().vertex_count();
    const RngStream::Base base(seed, static_cast<std::uint64_t>(t), RngTag::kVertex,
                               static_cast<std::uint64_t>(chain));
    for (int v = 0; v < n; ++v) {
        RngStream rng(base, vertex_entity(v));
        out[v] = rng.next_unit() < p ? m.sample_proposal(v, rng) : kInactive;
    }
}

std::vector<std::int32_t> propose(const GibbsModel& m, double p, std::uint64_t seed,
                                  std::int64_t t, std::int64_t chain) {
    std::vector<std::int32_t> sigma(m.graph().vertex_count(), kInactive);
    propose_into(m, p, seed, t, chain, sigma.data());
    return sigma;
}

double edge_accept_probability(const GibbsModel& m, std::int32_t xu, std::int32_t xv,
                               std::int32_t su, std::int32_t sv) {
    const double max_a = m.max_edge_constraint();
    double prob = 1.0;
    if (sv != kInactive) prob *= m.edge_constraint(xu, sv) / max_a;
    if (su != kInactive) prob *= m.edge_constraint(su, xv) / max_a;
    if (su != kInactive && sv != kInactive) prob *= m.edge_constraint(su, sv) / max_a;
    return prob;
}

bool edge_accept(const GibbsModel& m, int u, int v, std::int32_t xu, std::int32_t xv,
                 std::int32_t su, std::int32_t sv, const RngStream::Base& accept_base) {
    if (u > v) { // pin the (min, max) orientation
        std::swap(u, v);
        std::swap(xu, xv);
        std::swap(su, sv);
    }
    const double prob = edge_accept_probability(m, xu, xv, su, sv);
    if (prob >= 1.0) return true;
    if (prob <= 0.0) return false;
    RngStream rng(accept_base, edge_entity(u, v));
    return rng.next_unit() < prob;
}

bool edge_accept(const GibbsModel& m, int u, int v, std::int32_t xu, std::int32_t xv,
                 std::int32_t su, std::int32_t sv, std::uint64_t seed, std::int64_t t,
                 std::int64_t chain) {
    const RngStream::Base base(seed, static_cast<std::uint64_t>(t), RngTag::kEdgeAccept,
                               static_cast<std::uint64_t>(chain));
    return edge_accept(m, u, v, xu, xv, su, sv, base);
}

Labeling step(const GibbsModel& m, const Labeling& x, double p, std::uint64_t seed,
              std::int64_t t, std::int64_t chain) {
    const auto& g = m.graph();
    const int n = g.vertex_count();
    const auto sigma = propose(m, p, seed, t, chain);
    const RngStream::Base accept_base(seed, static_cast<std::uint64_t>(t), RngTag::kEdgeAccept,
                                      static_cast<std::uint64_t>(chain));
    std::vector<std::uint8_t> all_ok(n, 1);
    for (const auto& e : g.edges()) {
        if (!edge_accept(m, e.u, e.v, x[e.u], x[e.v], sigma[e.u], sigma[e.v], accept_base)) {
            all_ok[e.u] = 0;
            all_ok[e.v] = 0;
        }
    }
    Labeling next = x;
    for (int v = 0; v < n; ++v)
        if (sigma[v] != kInactive && all_ok[v]) next[v] = sigma[v];
    return next;
}

Labeling sample(const GibbsModel& m, const ChainParams& params, std::uint64_t seed,
                std::int64_t chain) {
    Labeling x = initial_state(m, seed, chain);
    for (int t = 0; t < params.t_mix; ++t) x = step(m, x, params.p, seed, t, chain);
    return x;
}

double contraction_bound_hardcore(int max_degree, double lambda, double p) {
    const double occ = lambda / (1.0 + lambda);
    return 1.0 - p + p * (max_degree * p * occ) + max_degree * p * occ;
}

double contraction_bound_potts(int max_degree, int q, double p) {
    const double d = max_degree;
    const double keep =
        p * ((q - d) / q) * std::pow(1.0 - p + p * (static_cast<double>(q - 3) / q), d);
    return 1.0 - keep + d * p / q;
}

double contraction_bound(const GibbsModel& m, double p) {
    const int delta = m.graph().max_degree();
    switch (m.family()) {
        case ModelFamily::kHardcore: return contraction_bound_hardcore(delta, m.lambda(), p);
        case ModelFamily::kPotts: return contraction_bound_potts(delta, m.colors(), p);
        case ModelFamily::kPointer:
            // proposals are uniform over >= 3n labels, so the Potts bound
            // with q = 3n applies
            return contraction_bound_potts(delta, 3 * m.graph().vertex_count(), p);
    }
    return 1.0;
}

double choose_p(const GibbsModel& m) {
    double best_p = 0.01, best = contraction_bound(m, 0.01);
    for (int i = 2; i <= 50; ++i) {
        const double p = i * 0.01;
        const double b = contraction_bound(m, p);
        if (b < best) { best = b; best_p = p; }
    }
    return best_p;
}

int mixing_time(const GibbsModel& m, int n, double delta, std::optional<double> p_override) {
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("mixing_time: delta must be in (0,1)");
    const int max_deg = m.graph().max_degree();
    switch (m.family()) {
        case ModelFamily::kHardcore:
            if (max_deg >= 2 && m.lambda() * (max_deg - 1) >= 1.0)
                throw RegimeError("hardcore mixing guarantee needs lambda*(Delta-1) < 1");
            break;
        case ModelFamily::kPotts:
            if (m.colors() <= 2 * max_deg)
                throw RegimeError("potts mixing guarantee needs q > 2*Delta");
            break;
        case ModelFamily::kPointer:
            break; // 3n > 2*Delta always
    }
    const double p = p_override.value_or(choose_p(m));
    const double rho = contraction_bound(m, p);
    if (rho >= 1.0)
        throw RegimeError("no contraction at the requested activation probability");
    const double t = std::ceil(std::log(n / delta) / std::log(1.0 / rho));
    return static_cast<int>(t) + 1;
}

double sampling_delta(std::int64_t total_samples) {
    return 1.0 / (8.0 * static_cast<double>(total_samples));
}

bool coin_edge_accepted(std::int32_t xu, std::int32_t xv, std::int32_t su, std::int32_t sv,
                        bool c1, bool c2, bool c3) {
    if (sv != kInactive && xu == sv && !c1) return false;
    if (su != kInactive && xv == su && !c2) return false;
    if (su != kInactive && sv != kInactive && su == sv && !c3) return false;
    return true;
}

Labeling potts_coin_step(const GibbsModel& m, const Labeling& x, double p, std::uint64_t seed,
                         std::int64_t t, std::int64_t chain) {
    if (m.family() != ModelFamily::kPotts)
        throw std::invalid_argument("potts_coin_step: Potts model required");
    const auto& g = m.graph();
    const int n = g.vertex_count();
    const auto sigma = propose(m, p, seed, t, chain);
    std::vector<std::uint8_t> all_ok(n, 1);
    for (const auto& e : g.edges()) {
        const bool c1 = coin(m, e.u, e.v, RngTag::kCoin1, seed, t, chain);
        const bool c2 = coin(m, e.u, e.v, RngTag::kCoin2, seed, t, chain);
        const bool c3 = coin(m, e.u, e.v, RngTag::kCoin3, seed, t, chain);
        if (!coin_edge_accepted(x[e.u], x[e.v], sigma[e.u], sigma[e.v], c1, c2, c3)) {
            all_ok[e.u] = 0;
            all_ok[e.v] = 0;
        }
    }
    Labeling next = x;
    for (int v = 0; v < n; ++v)
        if (sigma[v] != kInactive && all_ok[v]) next[v] = sigma[v];
    return next;
}

int hamming_distance(const Labeling& a, const Labeling& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

namespace {

CoupledResult coupled_step_potts(const GibbsModel& m, const Labeling& x, const Labeling& y,
                                 double p, std::uint64_t seed, std::int64_t t, int vp) {
    const auto& g = m.graph();
    const int n = g.vertex_count();
    const std::int32_t red = x[vp];
    const std::int32_t blue = y[vp];

    // coins per canonical edge; coin1 belongs to the (min -> max) direction
    struct Coins { bool c1, c2, c3; };
    std::vector<Coins> coins(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges()[e];
        coins[e] = {coin(m, ed.u, ed.v, RngTag::kCoin1, seed, t, 0),
                    coin(m, ed.u, ed.v, RngTag::kCoin2, seed, t, 0),
                    coin(m, ed.u, ed.v, RngTag::kCoin3, seed, t, 0)};
    }
    auto edge_index = [&](int a, int b) {
        // linear scan; coupling experiments run on small graphs
        for (int e = 0; e < g.edge_count(); ++e) {
            const auto& ed = g.edges()[e];
            if ((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) return e;
        }
        throw std::logic_error("coupled_step: edge lookup failed");
    };
    // coin 1 of the directed edge (a -> b)
    auto type1 = [&](int a, int b) {
        const int e = edge_index(a, b);
        return a < b ? !coins[e].c1 : !coins[e].c2; // "active" means tails
    };
    auto type2 = [&](int a, int b) { return !coins[edge_index(a, b)].c3; };

    const auto sigma_x = propose(m, p, seed, t, 0);
    auto in_tilde = [&](int w) { return g.adjacent(vp, w) && type1(vp, w); };

    std::vector<std::int32_t> sigma_y = sigma_x;
    for (int u : g.neighbors(vp)) {
        if (sigma_x[u] == kInactive || !in_tilde(u)) continue;
        bool keep_same = false;
        for (int w : g.neighbors(u)) {
            if (w == vp) continue;
            if (type1(w, u) && (x[w] == red || x[w] == blue)) { keep_same = true; break; }
            if (!in_tilde(w) && type2(w, u) && sigma_x[w] != kInactive &&
                (sigma_x[w] == red || sigma_x[w] == blue)) {
                keep_same = true;
                break;
            }
        }
        if (!keep_same) {
            if (sigma_x[u] == red) sigma_y[u] = blue;
            else if (sigma_x[u] == blue) sigma_y[u] = red;
        }
    }

    auto apply = [&](const Labeling& state, const std::vector<std::int32_t>& sigma) {
        std::vector<std::uint8_t> all_ok(n, 1);
        for (int e = 0; e < g.edge_count(); ++e) {
            const auto& ed = g.edges()[e];
            if (!coin_edge_accepted(state[ed.u], state[ed.v], sigma[ed.u], sigma[ed.v],
                                    coins[e].c1, coins[e].c2, coins[e].c3)) {
                all_ok[ed.u] = 0;
                all_ok[ed.v] = 0;
            }
        }
        Labeling next = state;
        for (int v = 0; v < n; ++v)
            if (sigma[v] != kInactive && all_ok[v]) next[v] = sigma[v];
        return next;
    };

    CoupledResult r;
    r.x_next = apply(x, sigma_x);
    r.y_next = apply(y, sigma_y);
    r.hamming = hamming_distance(r.x_next, r.y_next);
    return r;
}

} // namespace

CoupledResult coupled_step(const GibbsModel& m, const Labeling& x, const Labeling& y, double p,
                           std::uint64_t seed, std::int64_t t) {
    if (hamming_distance(x, y) != 1)
        throw std::invalid_argument("coupled_step: states must differ at exactly one vertex");
    int vp = 0;
    for (std::size_t v = 0; v < x.size(); ++v)
        if (x[v] != y[v]) { vp = static_cast<int>(v); break; }

    switch (m.family()) {
        case ModelFamily::kHardcore: {
            // identity coupling: both chains consume the same keyed draws
            CoupledResult r;
            r.x_next = step(m, x, p, seed, t, 0);
            r.y_next = step(m, y, p, seed, t, 0);
            r.hamming = hamming_distance(r.x_next, r.y_next);
            return r;
        }
        case ModelFamily::kPotts:
            return coupled_step_potts(m, x, y, p, seed, t, vp);
        case ModelFamily::kPointer:
            throw std::invalid_argument("coupled_step: no coupling implemented for this family");
    }
    throw std::logic_error("coupled_step: unreachable");
}

} // namespace mh
} // namespace ccgibbs
