#include "ccgibbs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ccgibbs/errors.hpp"

namespace ccgibbs {

long double PartitionPolynomial::evaluate(double lambda) const {
    long double acc = 0.0L;
    for (int j = static_cast<int>(level_counts.size()) - 1; j >= 0; --j)
        acc = acc * lambda + static_cast<long double>(level_counts[j]);
    return acc;
}

long double PartitionPolynomial::evaluate_beta(double beta) const {
    const double lambda = std::isinf(beta) ? 0.0 : std::exp(-beta);
    return evaluate(lambda);
}

std::int64_t PartitionPolynomial::at_lambda_one() const {
    return std::accumulate(level_counts.begin(), level_counts.end(), std::int64_t{0});
}

namespace {

__int128 state_space_size(const GibbsModel& m) {
    __int128 total = 1;
    const auto& g = m.graph();
    for (int v = 0; v < g.vertex_count(); ++v) {
        total *= m.admissible_count(v);
        if (total > static_cast<__int128>(4) * kDefaultEnumerationCap * 1000) break;
    }
    return total;
}

// Iterates every admissible labeling (not necessarily in support) and calls
// fn(labeling).  Admissible lists are materialized per vertex.
template <typename Fn>
void for_each_admissible(const GibbsModel& m, Fn&& fn) {
    const auto& g = m.graph();
    const int n = g.vertex_count();
    if (n == 0) {
        Labeling empty;
        fn(empty);
        return;
    }
    std::vector<std::vector<std::int32_t>> labels(n);
    for (int v = 0; v < n; ++v) {
        for (std::int32_t a = 0; a < m.alphabet_size(); ++a)
            if (m.label_admissible(v, a)) labels[v].push_back(a);
        if (labels[v].empty()) return; // empty support
    }
    std::vector<std::size_t> idx(n, 0);
    Labeling x(n);
    for (int v = 0; v < n; ++v) x[v] = labels[v][0];
    for (;;) {
        fn(x);
        int v = 0;
        while (v < n) {
            if (++idx[v] < labels[v].size()) {
                x[v] = labels[v][idx[v]];
                break;
            }
            idx[v] = 0;
            x[v] = labels[v][0];
            ++v;
        }
        if (v == n) break;
    }
}

constexpr int kIeEdgeLimit = 20; // inclusion-exclusion subsets capped at 2^20

} // namespace

std::int64_t pointer_total_labelings(const Graph& g) {
    std::int64_t total = 1;
    for (int v = 0; v < g.vertex_count(); ++v) total *= 3 * g.vertex_count() + g.degree(v);
    return total;
}

PartitionPolynomial pointer_partition_poly_ie(const Graph& g) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    if (m > kIeEdgeLimit)
        throw EnumerationCapError("pointer oracle: too many edges for subset expansion");

    // sum over edge subsets F of N(F) * (x-1)^|F|, where N(F) counts the
    // labelings forcing every edge of F into a same-vertex-label conflict:
    // each F-component must agree on one common neighbor, other vertices
    // are free.
    std::vector<__int128> by_size(m + 1, 0);
    const auto& edges = g.edges();
    std::vector<int> parent(n);
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        for (int v = 0; v < n; ++v) parent[v] = v;
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        int bits = 0;
        for (int e = 0; e < m; ++e) {
            if (!(mask >> e & 1u)) continue;
            ++bits;
            parent[find(edges[e].u)] = find(edges[e].v);
        }
        __int128 ways = 1;
        std::vector<char> touched(n, 0);
        for (int e = 0; e < m; ++e) {
            if (!(mask >> e & 1u)) continue;
            touched[edges[e].u] = touched[edges[e].v] = 1;
        }
        // component roots among touched vertices
        std::vector<int> comp_of(n, -1);
        std::vector<std::vector<int>> members;
        for (int v = 0; v < n && ways != 0; ++v) {
            if (!touched[v]) {
                ways *= 3 * n + g.degree(v);
                continue;
            }
            const int r = find(v);
            if (comp_of[r] == -1) {
                comp_of[r] = static_cast<int>(members.size());
                members.emplace_back();
            }
            members[comp_of[r]].push_back(v);
        }
        for (const auto& comp : members) {
            if (ways == 0) break;
            int common = 0;
            for (int w = 0; w < n; ++w) {
                bool all = true;
                for (int u : comp)
                    if (!g.adjacent(u, w)) { all = false; break; }
                if (all) ++common;
            }
            ways *= common;
        }
        by_size[bits] += ways;
    }

    // expand (x-1)^s into the level-count basis
    std::vector<std::vector<std::int64_t>> binom(m + 1, std::vector<std::int64_t>(m + 1, 0));
    for (int s = 0; s <= m; ++s) {
        binom[s][0] = 1;
        for (int j = 1; j <= s; ++j) binom[s][j] = binom[s - 1][j - 1] + (j <= s - 1 ? binom[s - 1][j] : 0);
    }
    PartitionPolynomial poly;
    poly.level_counts.assign(m + 1, 0);
    for (int j = 0; j <= m; ++j) {
        __int128 c = 0;
        for (int s = j; s <= m; ++s) {
            const __int128 term = by_size[s] * binom[s][j];
            c += ((s - j) % 2 == 0) ? term : -term;
        }
        poly.level_counts[j] = static_cast<std::int64_t>(c);
        if (poly.level_counts[j] < 0)
            throw std::logic_error("pointer oracle: negative level count");
    }
    while (poly.level_counts.size() > 1 && poly.level_counts.back() == 0)
        poly.level_counts.pop_back();
    return poly;
}

PartitionPolynomial exact_partition_poly(const GibbsModel& m, std::int64_t cap) {
    const __int128 states = state_space_size(m);
    if (states > cap) {
        if (m.family() == ModelFamily::kPointer && m.graph().edge_count() <= kIeEdgeLimit)
            return pointer_partition_poly_ie(m.graph());
        throw EnumerationCapError("oracle: state space exceeds enumeration cap");
    }
    PartitionPolynomial poly;
    poly.level_counts.assign(m.hamiltonian_bound() + 1, 0);
    for_each_admissible(m, [&](const Labeling& x) {
        if (!m.in_support(x)) return;
        int h = 0;
        for (int v = 0; v < m.graph().vertex_count(); ++v) h += m.vertex_hamiltonian(v, x[v]);
        for (const auto& e : m.graph().edges()) h += m.edge_hamiltonian(x[e.u], x[e.v]);
        ++poly.level_counts[h];
    });
    while (poly.level_counts.size() > 1 && poly.level_counts.back() == 0)
        poly.level_counts.pop_back();
    return poly;
}

long double exact_partition(const GibbsModel& m, Temperature t, std::int64_t cap) {
    return exact_partition_poly(m, cap).evaluate(t.lambda());
}

std::uint64_t encode_labeling(const GibbsModel& m, const Labeling& x) {
    const auto radix = static_cast<__uint128_t>(m.alphabet_size());
    __uint128_t code = 0;
    for (int v = static_cast<int>(x.size()) - 1; v >= 0; --v) {
        code = code * radix + static_cast<std::uint32_t>(x[v]);
        if (code > ~static_cast<std::uint64_t>(0))
            throw std::overflow_error("labeling encoding exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(code);
}

Labeling decode_labeling(const GibbsModel& m, std::uint64_t code) {
    const auto radix = static_cast<std::uint64_t>(m.alphabet_size());
    Labeling x(m.graph().vertex_count());
    for (int v = 0; v < m.graph().vertex_count(); ++v) {
        x[v] = static_cast<std::int32_t>(code % radix);
        code /= radix;
    }
    return x;
}

ExactDistribution exact_distribution(const GibbsModel& m, std::int64_t cap) {
    const __int128 states = state_space_size(m);
    if (states > cap) throw EnumerationCapError("oracle: state space exceeds enumeration cap");
    ExactDistribution dist;
    std::vector<std::pair<std::uint64_t, int>> support;
    for_each_admissible(m, [&](const Labeling& x) {
        if (!m.in_support(x)) return;
        int h = 0;
        for (int v = 0; v < m.graph().vertex_count(); ++v) h += m.vertex_hamiltonian(v, x[v]);
        for (const auto& e : m.graph().edges()) h += m.edge_hamiltonian(x[e.u], x[e.v]);
        support.emplace_back(encode_labeling(m, x), h);
    });
    if (support.empty()) throw std::runtime_error("oracle: empty support");
    long double z = 0.0L;
    for (const auto& [code, h] : support) z += std::pow(static_cast<long double>(m.lambda()), h);
    if (z <= 0.0L) throw std::runtime_error("oracle: zero partition value");
    dist.partition_value = z;
    dist.prob.reserve(support.size());
    for (const auto& [code, h] : support) {
        const long double w = std::pow(static_cast<long double>(m.lambda()), h);
        if (w > 0.0L) dist.prob[code] = static_cast<double>(w / z);
    }
    return dist;
}

double tv_distance(const std::unordered_map<std::uint64_t, std::int64_t>& counts,
                   std::int64_t total, const ExactDistribution& exact) {
    long double acc = 0.0L;
    for (const auto& [code, p] : exact.prob) {
        const auto it = counts.find(code);
        const long double emp =
            it == counts.end() ? 0.0L : static_cast<long double>(it->second) / total;
        acc += std::fabs(emp - static_cast<long double>(p));
    }
    for (const auto& [code, c] : counts) {
        if (exact.prob.find(code) == exact.prob.end())
            acc += static_cast<long double>(c) / total;
    }
    return static_cast<double>(acc / 2.0L);
}

} // namespace ccgibbs
