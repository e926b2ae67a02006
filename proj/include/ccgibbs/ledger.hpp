#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccgibbs {

// One routing demand: src sends `words` machine words to dst.
// A word carries one label, one vertex id, or one integer bounded by a
// polynomial in n.  Self-delivery is free and never ledgered.
struct RoutingRequest {
    int src;
    int dst;
    std::int64_t words;
};

// Per-machine send/receive accounting for a simulated all-to-all network of
// n machines.  Message contents move instantaneously in the simulation;
// only costs are recorded.
class MessageLedger {
  public:
    explicit MessageLedger(int machines, bool detailed = false);

    int machine_count() const { return n_; }
    std::int64_t rounds_total() const { return rounds_total_; }
    std::int64_t event_count() const { return event_count_; }

    std::int64_t machine_sent(int m) const { return sent_[m]; }
    std::int64_t machine_received(int m) const { return recv_[m]; }
    std::int64_t total_words() const;

    // max over machines of max(total sent, total received)
    std::int64_t max_machine_words() const;
    int busiest_machine() const;

    // Raw recording hook used by schedule_routing / RoutingPlan.
    void record_event(const std::vector<std::int64_t>& sent,
                      const std::vector<std::int64_t>& recv, std::int64_t rounds);

    // CSV rows: machine_id,round,words_sent,words_received.  Detailed
    // ledgers emit one row per machine per event; otherwise cumulative
    // totals with the final round count.
    void write_csv(std::ostream& out) const;

  private:
    struct Event {
        std::int64_t start_round;
        std::int64_t rounds;
        std::vector<std::int64_t> sent, recv;
    };

    int n_;
    bool detailed_;
    std::int64_t rounds_total_ = 0;
    std::int64_t event_count_ = 0;
    std::vector<std::int64_t> sent_, recv_;
    std::vector<Event> events_;

    friend class RoutingPlan;
};

// Delivers a batch of requests, charging ceil(L / n) rounds where L is the
// maximum per-machine load (words sent or received by any one machine).
// Returns the round count; an empty batch costs zero rounds.
std::int64_t schedule_routing(const std::vector<RoutingRequest>& requests, MessageLedger& ledger);

// Precomputed load profile of a request batch whose word counts do not
// depend on data.  charge() applies it to a ledger in O(n).
class RoutingPlan {
  public:
    RoutingPlan() = default;
    static RoutingPlan from_requests(int machines, const std::vector<RoutingRequest>& requests);

    std::int64_t rounds() const { return rounds_; }
    std::int64_t charge(MessageLedger& ledger) const;

  private:
    std::int64_t rounds_ = 0;
    std::vector<std::int64_t> sent_, recv_;
};

struct AuditReport {
    std::int64_t max_machine_words = 0;
    std::int64_t rounds_total = 0;
    std::int64_t word_bound = 0;
    std::int64_t round_bound = 0;
    int worst_machine = -1;
    bool words_ok = true;
    bool rounds_ok = true;

    bool pass() const { return words_ok && rounds_ok; }
    std::string summary() const;
};

AuditReport audit_ledger(const MessageLedger& ledger, std::int64_t word_bound_per_machine,
                         std::int64_t round_bound);

} // namespace ccgibbs
