#include "ccgibbs/ledger.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ccgibbs {

MessageLedger::MessageLedger(int machines, bool detailed)
    : n_(machines), detailed_(detailed), sent_(machines, 0), recv_(machines, 0) {
    if (machines <= 0) throw std::invalid_argument("ledger: machine count must be positive");
}

std::int64_t MessageLedger::total_words() const {
    std::int64_t t = 0;
    for (auto w : sent_) t += w;
    return t;
}

std::int64_t MessageLedger::max_machine_words() const {
    std::int64_t best = 0;
    for (int m = 0; m < n_; ++m) best = std::max({best, sent_[m], recv_[m]});
    return best;
}

int MessageLedger::busiest_machine() const {
    int best = 0;
    std::int64_t load = -1;
    for (int m = 0; m < n_; ++m) {
        const std::int64_t l = std::max(sent_[m], recv_[m]);
        if (l > load) { load = l; best = m; }
    }
    return best;
}

void MessageLedger::record_event(const std::vector<std::int64_t>& sent,
                                 const std::vector<std::int64_t>& recv, std::int64_t rounds) {
    if (detailed_) events_.push_back({rounds_total_, rounds, sent, recv});
    for (int m = 0; m < n_; ++m) {
        sent_[m] += sent[m];
        recv_[m] += recv[m];
    }
    rounds_total_ += rounds;
    ++event_count_;
}

void MessageLedger::write_csv(std::ostream& out) const {
    out << "machine_id,round,words_sent,words_received\n";
    if (detailed_) {
        for (const auto& e : events_)
            for (int m = 0; m < n_; ++m)
                out << m << "," << e.start_round << "," << e.sent[m] << "," << e.recv[m] << "\n";
    } else {
        for (int m = 0; m < n_; ++m)
            out << m << "," << rounds_total_ << "," << sent_[m] << "," << recv_[m] << "\n";
    }
}

RoutingPlan RoutingPlan::from_requests(int machines, const std::vector<RoutingRequest>& requests) {
    RoutingPlan plan;
    plan.sent_.assign(machines, 0);
    plan.recv_.assign(machines, 0);
    for (const auto& r : requests) {
        if (r.src == r.dst) continue; // local delivery is free
        if (r.words < 1) throw std::invalid_argument("routing: word count must be >= 1");
        if (r.src < 0 || r.dst < 0 || r.src >= machines || r.dst >= machines)
            throw std::invalid_argument("routing: machine id out of range");
        plan.sent_[r.src] += r.words;
        plan.recv_[r.dst] += r.words;
    }
    std::int64_t load = 0;
    for (int m = 0; m < machines; ++m) load = std::max({load, plan.sent_[m], plan.recv_[m]});
    plan.rounds_ = (load + machines - 1) / machines;
    return plan;
}

std::int64_t RoutingPlan::charge(MessageLedger& ledger) const {
    if (static_cast<int>(sent_.size()) != ledger.machine_count())
        throw std::invalid_argument("routing plan: machine count mismatch");
    ledger.record_event(sent_, recv_, rounds_);
    return rounds_;
}

std::int64_t schedule_routing(const std::vector<RoutingRequest>& requests, MessageLedger& ledger) {
    return RoutingPlan::from_requests(ledger.machine_count(), requests).charge(ledger);
}

std::string AuditReport::summary() const {
    std::ostringstream os;
    os << "max_words=" << max_machine_words << " (bound " << word_bound
       << (words_ok ? ", ok" : ", EXCEEDED by machine " + std::to_string(worst_machine)) << "); "
       << "rounds=" << rounds_total << " (bound " << round_bound << (rounds_ok ? ", ok" : ", EXCEEDED")
       << ")";
    return os.str();
}

AuditReport audit_ledger(const MessageLedger& ledger, std::int64_t word_bound_per_machine,
                         std::int64_t round_bound) {
    AuditReport r;
    r.max_machine_words = ledger.max_machine_words();
    r.rounds_total = ledger.rounds_total();
    r.word_bound = word_bound_per_machine;
    r.round_bound = round_bound;
    r.worst_machine = ledger.busiest_machine();
    r.words_ok = r.max_machine_words <= word_bound_per_machine;
    r.rounds_ok = r.rounds_total <= round_bound;
    return r;
}

} // namespace ccgibbs
