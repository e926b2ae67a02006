#pragma once

#include <cstdint>
#include <vector>

#include "ccgibbs/gibbs_model.hpp"
#include "ccgibbs/labels.hpp"
#include "ccgibbs/ledger.hpp"

namespace ccgibbs {

// Partition of the n x n x n (vertex, vertex, chain) cube into subcubes of
// side ceil(n^(2/3)).  Subcube [x,y,z] covers rows in block x, columns in
// block y, chains in block z; [x,y,z] and [y,x,z] are co-located on one
// machine and every machine owns at most two subcubes.
class CubePartition {
  public:
    struct Unit {
        int x, y, z; // canonical x <= y; owns [x,y,z] and, if x != y, [y,x,z]
        int machine;
    };

    static CubePartition make(int n);

    int n() const { return n_; }
    int block_side() const { return side_; }
    int block_count() const { return blocks_; }
    int block_of(int index) const { return index / side_; }
    int block_begin(int b) const { return b * side_; }
    int block_end(int b) const; // exclusive, clipped to n

    const std::vector<Unit>& units() const { return units_; }
    int machine_for(int x, int y, int z) const; // any orientation
    int subcubes_on_machine(int m) const;

  private:
    int n_ = 0, side_ = 1, blocks_ = 1;
    std::vector<Unit> units_;
    std::vector<int> unit_of_canonical_; // (x<=y,z) -> unit index
    std::vector<int> machine_subcubes_;
};

// Flatten along the neighbor axis.  cells is an sx*sy*sz array indexed
// (row, col, chain) with chain fastest; the result is sx*sz.
std::vector<std::uint8_t> flatten_or(const std::vector<std::uint8_t>& cells, int sx, int sy,
                                     int sz);
std::vector<std::int32_t> flatten_sum(const std::vector<std::int32_t>& cells, int sx, int sy,
                                      int sz);
void flatten_or_into(const std::uint8_t* cells, int sx, int sy, int sz, std::uint8_t* slab);
void flatten_sum_into(const std::int32_t* cells, int sx, int sy, int sz, std::int32_t* slab);

// Batch simulator: one transition of k <= n chain instances per call, with
// all randomness keyed identically to the per-chain reference so outputs
// match it bitwise.  Routing loads of the two communication phases are
// data-independent and precomputed once.
class BatchSimulator {
  public:
    BatchSimulator(const GibbsModel& m, int chains, double p, std::uint64_t seed,
                   MessageLedger* ledger, std::int64_t chain_base = 0);

    void transition(LabelMatrix& x, std::int64_t t);
    void run(LabelMatrix& x, std::int64_t t_begin, int steps);

    const CubePartition& partition() const { return part_; }
    std::int64_t distribute_rounds() const { return distribute_plan_.rounds(); }
    std::int64_t collect_rounds() const { return collect_plan_.rounds(); }

  private:
    const GibbsModel& model_;
    int k_;
    double p_;
    std::uint64_t seed_;
    std::int64_t chain_base_;
    MessageLedger* ledger_;
    CubePartition part_;
    RoutingPlan distribute_plan_, collect_plan_;
    LabelMatrix proposals_;
    std::vector<std::uint8_t> rejected_; // n*k, chain fastest
    std::vector<std::uint8_t> cube_scratch_;
    std::vector<std::uint8_t> slab_scratch_;
    std::vector<RngStream::Base> accept_bases_;
};

// One batch transition (convenience wrapper; validates k <= n).
LabelMatrix simulate_transition_batch(const GibbsModel& m, const LabelMatrix& x, double p,
                                      std::uint64_t seed, std::int64_t t, MessageLedger& ledger,
                                      std::int64_t chain_base = 0);

// Exact H of every chain via the summation variant of the cube: cells hold
// the edge subfunction values, slabs are added, and every vertex reports
// 2*H_v + sum of its incident edge terms so the final halving stays in
// integers (the total must be even; asserted).
std::vector<std::int64_t> gather_hamiltonians(const GibbsModel& m, const LabelMatrix& x,
                                              MessageLedger& ledger);

struct FastBatchResult {
    LabelMatrix samples;
    std::int64_t max_vertex_sent = 0;
    std::int64_t max_vertex_received = 0;
    std::int64_t rounds = 0;
};

// Event-driven hardcore sampler: a vertex messages a neighbor only in
// transitions where it holds or proposes the occupied label in some chain.
// Output is bitwise equal to k independent reference chains.  Requires the
// sparse regime lambda*(Delta-1) < 1 (any lambda when Delta < 2).
FastBatchResult hardcore_fast_batch(const GibbsModel& m, int chains, double p, int t_mix,
                                    std::uint64_t seed, MessageLedger& ledger,
                                    std::int64_t chain_base = 0);

} // namespace ccgibbs
