#include "ccgibbs/cube.hpp"

#include <algorithm>
#include <stdexcept>

#include "ccgibbs/chain.hpp"
#include "ccgibbs/errors.hpp"

namespace ccgibbs {

namespace {

int block_side_for(int n) {
    // smallest s with s^3 >= n^2, i.e. ceil(n^(2/3)) without FP edge cases
    int s = 1;
    const long long nn = static_cast<long long>(n) * n;
    while (static_cast<long long>(s) * s * s < nn) ++s;
    return s;
}

} // namespace

CubePartition CubePartition::make(int n) {
    if (n < 1) throw std::invalid_argument("cube partition: n must be >= 1");
    CubePartition part;
    part.n_ = n;
    part.side_ = block_side_for(n);
    part.blocks_ = (n + part.side_ - 1) / part.side_;
    // a ragged last block can push the subcube count past the two-per-machine
    // budget (pairs on fresh machines, unpaired diagonals shared two a
    // machine needs ceil(B^3/2) machines); widen blocks until it fits
    while (part.blocks_ > 1) {
        const long long b3 = static_cast<long long>(part.blocks_) * part.blocks_ * part.blocks_;
        if ((b3 + 1) / 2 <= n) break;
        --part.blocks_;
        part.side_ = (n + part.blocks_ - 1) / part.blocks_;
        part.blocks_ = (n + part.side_ - 1) / part.side_;
    }
    const int b = part.blocks_;

    for (int x = 0; x < b; ++x)
        for (int y = x; y < b; ++y)
            for (int z = 0; z < b; ++z) part.units_.push_back({x, y, z, -1});

    // One unit per machine when they fit; otherwise pack pairs onto fresh
    // machines and share machines between two unpaired diagonal subcubes.
    if (static_cast<int>(part.units_.size()) <= n) {
        for (std::size_t j = 0; j < part.units_.size(); ++j)
            part.units_[j].machine = static_cast<int>(j);
    } else {
        int next_free = 0;
        int open_single = -1;
        for (auto& u : part.units_) {
            const int size = u.x == u.y ? 1 : 2;
            if (size == 2) {
                u.machine = next_free++;
            } else if (open_single >= 0) {
                u.machine = open_single;
                open_single = -1;
            } else {
                u.machine = next_free++;
                open_single = u.machine;
            }
        }
        if (next_free > n)
            throw std::logic_error("cube partition: machines exhausted");
    }

    part.unit_of_canonical_.assign(static_cast<std::size_t>(b) * b * b, -1);
    part.machine_subcubes_.assign(n, 0);
    for (std::size_t j = 0; j < part.units_.size(); ++j) {
        const auto& u = part.units_[j];
        part.unit_of_canonical_[(static_cast<std::size_t>(u.x) * b + u.y) * b + u.z] =
            static_cast<int>(j);
        part.machine_subcubes_[u.machine] += u.x == u.y ? 1 : 2;
    }
    return part;
}

int CubePartition::block_end(int b) const { return std::min((b + 1) * side_, n_); }

int CubePartition::machine_for(int x, int y, int z) const {
    if (x > y) std::swap(x, y);
    const int j = unit_of_canonical_[(static_cast<std::size_t>(x) * blocks_ + y) * blocks_ + z];
    return j < 0 ? -1 : units_[j].machine;
}

int CubePartition::subcubes_on_machine(int m) const { return machine_subcubes_[m]; }

void flatten_or_into(const std::uint8_t* cells, int sx, int sy, int sz, std::uint8_t* slab) {
    std::fill(slab, slab + static_cast<std::size_t>(sx) * sz, 0);
    for (int i = 0; i < sx; ++i)
        for (int j = 0; j < sy; ++j) {
            const std::uint8_t* row = cells + (static_cast<std::size_t>(i) * sy + j) * sz;
            for (int k = 0; k < sz; ++k) slab[static_cast<std::size_t>(i) * sz + k] |= row[k];
        }
}

void flatten_sum_into(const std::int32_t* cells, int sx, int sy, int sz, std::int32_t* slab) {
    std::fill(slab, slab + static_cast<std::size_t>(sx) * sz, 0);
    for (int i = 0; i < sx; ++i)
        for (int j = 0; j < sy; ++j) {
            const std::int32_t* row = cells + (static_cast<std::size_t>(i) * sy + j) * sz;
            for (int k = 0; k < sz; ++k) slab[static_cast<std::size_t>(i) * sz + k] += row[k];
        }
}

std::vector<std::uint8_t> flatten_or(const std::vector<std::uint8_t>& cells, int sx, int sy,
                                     int sz) {
    if (static_cast<std::size_t>(sx) * sy * sz != cells.size())
        throw std::invalid_argument("flatten: cell count mismatch");
    std::vector<std::uint8_t> slab(static_cast<std::size_t>(sx) * sz);
    flatten_or_into(cells.data(), sx, sy, sz, slab.data());
    return slab;
}

std::vector<std::int32_t> flatten_sum(const std::vector<std::int32_t>& cells, int sx, int sy,
                                      int sz) {
    if (static_cast<std::size_t>(sx) * sy * sz != cells.size())
        throw std::invalid_argument("flatten: cell count mismatch");
    std::vector<std::int32_t> slab(static_cast<std::size_t>(sx) * sz);
    flatten_sum_into(cells.data(), sx, sy, sz, slab.data());
    return slab;
}

namespace {

// Chains live on the z axis; a block's usable chain range is clipped to k.
struct ZRange {
    int lo, hi;
    int size() const { return hi - lo; }
};

ZRange z_range(const CubePartition& part, int z, int k) {
    return {std::min(part.block_begin(z), k), std::min(part.block_end(z), k)};
}

RoutingPlan build_distribute_plan(const CubePartition& part, int k, bool with_proposals) {
    std::vector<RoutingRequest> reqs;
    for (const auto& u : part.units()) {
        const auto zr = z_range(part, u.z, k);
        if (zr.size() == 0) continue;
        const std::int64_t sy = part.block_end(u.y) - part.block_begin(u.y);
        const std::int64_t state_words = (with_proposals ? 2 : 1) * zr.size();
        for (int v = part.block_begin(u.x); v < part.block_end(u.x); ++v)
            reqs.push_back({v, u.machine, sy + state_words});
        if (u.x != u.y)
            for (int w = part.block_begin(u.y); w < part.block_end(u.y); ++w)
                reqs.push_back({w, u.machine, state_words});
    }
    return RoutingPlan::from_requests(part.n(), reqs);
}

RoutingPlan build_collect_plan(const CubePartition& part, int k) {
    std::vector<RoutingRequest> reqs;
    for (const auto& u : part.units()) {
        const auto zr = z_range(part, u.z, k);
        if (zr.size() == 0) continue;
        for (int v = part.block_begin(u.x); v < part.block_end(u.x); ++v)
            reqs.push_back({u.machine, v, zr.size()});
        if (u.x != u.y)
            for (int w = part.block_begin(u.y); w < part.block_end(u.y); ++w)
                reqs.push_back({u.machine, w, zr.size()});
    }
    return RoutingPlan::from_requests(part.n(), reqs);
}

} // namespace

BatchSimulator::BatchSimulator(const GibbsModel& m, int chains, double p, std::uint64_t seed,
                               MessageLedger* ledger, std::int64_t chain_base)
    : model_(m), k_(chains), p_(p), seed_(seed), chain_base_(chain_base), ledger_(ledger),
      part_(CubePartition::make(m.graph().vertex_count())),
      proposals_(m.graph().vertex_count(), chains),
      rejected_(static_cast<std::size_t>(m.graph().vertex_count()) * chains, 0) {
    const int n = m.graph().vertex_count();
    if (chains < 1 || chains > n)
        throw std::invalid_argument("batch simulator: need 1 <= chains <= n");
    distribute_plan_ = build_distribute_plan(part_, k_, /*with_proposals=*/true);
    collect_plan_ = build_collect_plan(part_, k_);
}

void BatchSimulator::transition(LabelMatrix& x, std::int64_t t) {
    const auto& g = model_.graph();
    const int n = g.vertex_count();

    // every machine draws its own activations and proposals
    for (int i = 0; i < k_; ++i)
        mh::propose_into(model_, p_, seed_, t, chain_base_ + i, proposals_.column_data(i));

    accept_bases_.clear();
    for (int i = 0; i < k_; ++i)
        accept_bases_.emplace_back(seed_, static_cast<std::uint64_t>(t), RngTag::kEdgeAccept,
                                   static_cast<std::uint64_t>(chain_base_ + i));

    if (ledger_) distribute_plan_.charge(*ledger_);

    std::fill(rejected_.begin(), rejected_.end(), 0);
    auto reject_at = [&](int v, int i) -> std::uint8_t& {
        return rejected_[static_cast<std::size_t>(v) * k_ + i];
    };

    for (const auto& u : part_.units()) {
        const auto zr = z_range(part_, u.z, k_);
        if (zr.size() == 0) continue;
        const int x0 = part_.block_begin(u.x), x1 = part_.block_end(u.x);
        const int y0 = part_.block_begin(u.y), y1 = part_.block_end(u.y);
        const int sx = x1 - x0, sy = y1 - y0, sz = zr.size();

        // fill the owned subcube(s); the mirrored cell always carries the
        // same value because the acceptance coin is keyed by the canonical
        // edge id
        cube_scratch_.assign(static_cast<std::size_t>(sx) * sy * sz, 0);
        slab_scratch_.resize(static_cast<std::size_t>(sx) * sz);
        auto cell = [&](int v, int w, int i) -> std::uint8_t& {
            return cube_scratch_[(static_cast<std::size_t>(v - x0) * sy + (w - y0)) * sz +
                                 (i - zr.lo)];
        };
        for (int v = x0; v < x1; ++v) {
            for (int w : g.neighbors(v)) {
                if (w < y0 || w >= y1) continue;
                if (u.x == u.y && w < v) continue; // mirror filled below
                for (int i = zr.lo; i < zr.hi; ++i) {
                    const bool ok = mh::edge_accept(model_, v, w, x.at(v, i), x.at(w, i),
                                                    proposals_.at(v, i), proposals_.at(w, i),
                                                    accept_bases_[i]);
                    if (!ok) {
                        cell(v, w, i) = 1;
                        if (u.x == u.y) cell(w, v, i) = 1;
                        else reject_at(w, i) = 1; // mirrored subcube row
                    }
                }
            }
        }
        flatten_or_into(cube_scratch_.data(), sx, sy, sz, slab_scratch_.data());
        for (int v = x0; v < x1; ++v)
            for (int i = zr.lo; i < zr.hi; ++i)
                reject_at(v, i) |= slab_scratch_[static_cast<std::size_t>(v - x0) * sz + (i - zr.lo)];
    }

    if (ledger_) collect_plan_.charge(*ledger_);

    for (int i = 0; i < k_; ++i)
        for (int v = 0; v < n; ++v) {
            const auto s = proposals_.at(v, i);
            if (s != kInactive && !reject_at(v, i)) x.at(v, i) = s;
        }
}

void BatchSimulator::run(LabelMatrix& x, std::int64_t t_begin, int steps) {
    for (int s = 0; s < steps; ++s) transition(x, t_begin + s);
}

LabelMatrix simulate_transition_batch(const GibbsModel& m, const LabelMatrix& x, double p,
                                      std::uint64_t seed, std::int64_t t, MessageLedger& ledger,
                                      std::int64_t chain_base) {
    if (x.chain_count() > m.graph().vertex_count())
        throw std::invalid_argument("batch transition: chain count exceeds machine count");
    BatchSimulator sim(m, x.chain_count(), p, seed, &ledger, chain_base);
    LabelMatrix next = x;
    sim.transition(next, t);
    return next;
}

std::vector<std::int64_t> gather_hamiltonians(const GibbsModel& m, const LabelMatrix& x,
                                              MessageLedger& ledger) {
    const auto& g = m.graph();
    const int n = g.vertex_count();
    const int k = x.chain_count();
    if (k > n) throw std::invalid_argument("gather: chain count exceeds machine count");
    const auto part = CubePartition::make(n);

    build_distribute_plan(part, k, /*with_proposals=*/false).charge(ledger);

    // summation cube: cells hold the edge subfunction, slabs add along the
    // neighbor axis
    std::vector<std::int64_t> edge_sum(static_cast<std::size_t>(n) * k, 0);
    for (const auto& u : part.units()) {
        const auto zr = z_range(part, u.z, k);
        if (zr.size() == 0) continue;
        const int x0 = part.block_begin(u.x), x1 = part.block_end(u.x);
        const int y0 = part.block_begin(u.y), y1 = part.block_end(u.y);
        const int sx = x1 - x0, sy = y1 - y0, sz = zr.size();
        std::vector<std::int32_t> cells(static_cast<std::size_t>(sx) * sy * sz, 0);
        std::vector<std::int32_t> mirror;
        if (u.x != u.y) mirror.assign(static_cast<std::size_t>(sy) * sx * sz, 0);
        for (int v = x0; v < x1; ++v) {
            for (int w : g.neighbors(v)) {
                if (w < y0 || w >= y1) continue;
                if (u.x == u.y && w < v) continue;
                for (int i = zr.lo; i < zr.hi; ++i) {
                    const auto h = static_cast<std::int32_t>(m.edge_hamiltonian(x.at(v, i), x.at(w, i)));
                    if (h == 0) continue;
                    cells[(static_cast<std::size_t>(v - x0) * sy + (w - y0)) * sz + (i - zr.lo)] = h;
                    if (u.x == u.y)
                        cells[(static_cast<std::size_t>(w - x0) * sy + (v - y0)) * sz + (i - zr.lo)] = h;
                    else
                        mirror[(static_cast<std::size_t>(w - y0) * sx + (v - x0)) * sz + (i - zr.lo)] = h;
                }
            }
        }
        const auto slab = flatten_sum(cells, sx, sy, sz);
        for (int v = x0; v < x1; ++v)
            for (int i = zr.lo; i < zr.hi; ++i)
                edge_sum[static_cast<std::size_t>(v) * k + i] +=
                    slab[static_cast<std::size_t>(v - x0) * sz + (i - zr.lo)];
        if (u.x != u.y) {
            const auto slab_y = flatten_sum(mirror, sy, sx, sz);
            for (int w = y0; w < y1; ++w)
                for (int i = zr.lo; i < zr.hi; ++i)
                    edge_sum[static_cast<std::size_t>(w) * k + i] +=
                        slab_y[static_cast<std::size_t>(w - y0) * sz + (i - zr.lo)];
        }
    }

    build_collect_plan(part, k).charge(ledger);

    // doubled units: every edge term is counted at both endpoints, so the
    // chain totals halve exactly; a parity failure would expose an
    // asymmetric cell
    std::vector<std::int64_t> h(k, 0);
    for (int i = 0; i < k; ++i) {
        std::int64_t doubled = 0;
        for (int v = 0; v < n; ++v)
            doubled += 2 * m.vertex_hamiltonian(v, x.at(v, i)) +
                       edge_sum[static_cast<std::size_t>(v) * k + i];
        if (doubled % 2 != 0) throw std::logic_error("gather: odd doubled Hamiltonian total");
        h[i] = doubled / 2;
    }

    // vertices report their shares to the chain's machine, then machine 0
    // collects the k totals
    std::vector<RoutingRequest> share;
    share.reserve(static_cast<std::size_t>(n) * k);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < k; ++i)
            if (v != i) share.push_back({v, i, 1});
    schedule_routing(share, ledger);
    std::vector<RoutingRequest> final_gather;
    for (int i = 1; i < k; ++i) final_gather.push_back({i, 0, 1});
    schedule_routing(final_gather, ledger);
    return h;
}

FastBatchResult hardcore_fast_batch(const GibbsModel& m, int chains, double p, int t_mix,
                                    std::uint64_t seed, MessageLedger& ledger,
                                    std::int64_t chain_base) {
    if (m.family() != ModelFamily::kHardcore)
        throw std::invalid_argument("fast batch: hardcore model required");
    const auto& g = m.graph();
    const int n = g.vertex_count();
    const int max_deg = g.max_degree();
    if (max_deg >= 2 && m.lambda() * (max_deg - 1) >= 1.0)
        throw RegimeError("fast batch: sparse-occupancy regime needs lambda*(Delta-1) < 1");
    if (chains < 1 || chains > n)
        throw std::invalid_argument("fast batch: need 1 <= chains <= n");

    FastBatchResult result;
    result.samples = LabelMatrix(n, chains, 0); // all chains start empty
    auto& x = result.samples;
    std::vector<std::int64_t> sent(n, 0), recv(n, 0);
    LabelMatrix sigma(n, chains, kInactive);
    std::vector<RoutingRequest> reqs;

    for (int t = 0; t < t_mix; ++t) {
        for (int i = 0; i < chains; ++i)
            mh::propose_into(m, p, seed, t, chain_base + i, sigma.column_data(i));

        // a vertex speaks to its neighbors only in rounds where it holds or
        // proposes label 1 in some chain
        reqs.clear();
        for (int v = 0; v < n; ++v) {
            std::int64_t active_chains = 0;
            for (int i = 0; i < chains; ++i)
                if (x.at(v, i) == 1 || sigma.at(v, i) == 1) ++active_chains;
            if (active_chains == 0) continue;
            for (int u : g.neighbors(v)) {
                reqs.push_back({v, u, active_chains});
                sent[v] += active_chains;
                recv[u] += active_chains;
            }
        }
        result.rounds += schedule_routing(reqs, ledger);

        for (int i = 0; i < chains; ++i) {
            const RngStream::Base base(seed, static_cast<std::uint64_t>(t), RngTag::kEdgeAccept,
                                       static_cast<std::uint64_t>(chain_base + i));
            std::vector<std::uint8_t> all_ok(n, 1);
            for (const auto& e : g.edges()) {
                if (!mh::edge_accept(m, e.u, e.v, x.at(e.u, i), x.at(e.v, i), sigma.at(e.u, i),
                                     sigma.at(e.v, i), base)) {
                    all_ok[e.u] = 0;
                    all_ok[e.v] = 0;
                }
            }
            for (int v = 0; v < n; ++v) {
                const auto s = sigma.at(v, i);
                if (s != kInactive && all_ok[v]) x.at(v, i) = s;
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        result.max_vertex_sent = std::max(result.max_vertex_sent, sent[v]);
        result.max_vertex_received = std::max(result.max_vertex_received, recv[v]);
    }
    return result;
}

} // namespace ccgibbs
