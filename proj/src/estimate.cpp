#include "ccgibbs/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ccgibbs/chain.hpp"
#include "ccgibbs/cube.hpp"
#include "ccgibbs/errors.hpp"
#include "ccgibbs/oracle.hpp"

namespace ccgibbs {

namespace {

double kahan_total(const std::vector<double>& xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t k = xs.size();
    if (k == 0) return 0.0;
    return k % 2 == 1 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

double log_anchor_of(const GibbsModel& m) {
    const auto& g = m.graph();
    switch (m.family()) {
        case ModelFamily::kPotts: // Z(1) = q^n
            return g.vertex_count() * std::log(static_cast<double>(m.colors()));
        case ModelFamily::kPointer: { // Z(1) = prod_v (3n + deg v)
            double s = 0.0;
            for (int v = 0; v < g.vertex_count(); ++v)
                s += std::log(static_cast<double>(3 * g.vertex_count() + g.degree(v)));
            return s;
        }
        case ModelFamily::kHardcore: // Z at lambda = 0 is exactly 1
            return 0.0;
    }
    return 0.0;
}

} // namespace

CoolingSchedule build_schedule(const GibbsModel& m, Temperature beta_target, double eps,
                               double samples_coeff) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("schedule: eps must be in (0,1)");
    CoolingSchedule s;
    s.family = m.family();
    s.eps = eps;
    s.hamiltonian_bound = m.hamiltonian_bound();
    const int h = s.hamiltonian_bound;

    if (m.family() == ModelFamily::kHardcore) {
        // anchored at fugacity ~0 where the partition value is 1 within the
        // truncation share of eps; multiplicative unit steps upward
        const double target = m.lambda();
        s.truncated = target > 0.0;
        if (target == 0.0) {
            s.lambdas = {0.0};
        } else {
            const double start =
                std::min(target, std::log1p(kScheduleTruncationShare * eps) / h);
            const int len = std::max(1, static_cast<int>(std::ceil(h * std::log(target / start))));
            s.lambdas.resize(len + 1);
            for (int i = 0; i < len; ++i) s.lambdas[i] = start * std::exp(static_cast<double>(i) / h);
            s.lambdas[len] = target;
        }
        s.log_anchor = 0.0;
    } else {
        // anchored at beta = 0; beta = infinity is cut at the point where
        // the residual Z(0) * exp(-beta_cap) is under the truncation share
        s.log_anchor = log_anchor_of(m);
        double beta_end;
        if (beta_target.is_infinite()) {
            s.truncated = true;
            s.beta_cap = std::log(2.0 / eps) + s.log_anchor + 1.0;
            beta_end = s.beta_cap;
        } else {
            beta_end = beta_target.beta();
        }
        if (h == 0 || beta_end == 0.0) {
            s.lambdas = {1.0, beta_target.is_infinite() ? 0.0 : beta_target.lambda()};
            if (beta_end == 0.0) s.lambdas = {1.0};
        } else {
            const int len = std::max(1, static_cast<int>(std::ceil(beta_end * h)));
            s.lambdas.resize(len + 1);
            for (int i = 0; i < len; ++i) s.lambdas[i] = std::exp(-static_cast<double>(i) / h);
            s.lambdas[len] = std::exp(-beta_end);
        }
    }

    s.eps_sampling = s.truncated ? (1.0 - kScheduleTruncationShare) * eps : eps;
    const int len = s.length();
    s.per_term_samples =
        len == 0 ? 0
                 : static_cast<int>(std::ceil(samples_coeff * len / (s.eps_sampling * s.eps_sampling)));
    return s;
}

double estimate_ratio_lambda(const std::vector<std::int64_t>& hamiltonians, double lambda_i,
                             double lambda_next) {
    if (hamiltonians.empty()) throw std::invalid_argument("ratio estimator: empty sample set");
    const double r = lambda_next / lambda_i;
    double sum = 0.0, carry = 0.0;
    for (const auto h : hamiltonians) {
        const double w = h == 0 ? 1.0 : std::pow(r, static_cast<double>(h));
        const double y = w - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(hamiltonians.size());
}

double estimate_ratio(const std::vector<std::int64_t>& hamiltonians, double beta_i,
                      double beta_next) {
    const double li = std::isinf(beta_i) ? 0.0 : std::exp(-beta_i);
    const double ln = std::isinf(beta_next) ? 0.0 : std::exp(-beta_next);
    return estimate_ratio_lambda(hamiltonians, li, ln);
}

BatchSampler cube_wave_sampler() {
    return [](const GibbsModel& m, int count, int t_mix, double p, std::uint64_t seed,
              std::int64_t chain_base, MessageLedger& ledger) {
        const int n = m.graph().vertex_count();
        std::vector<std::int64_t> hams;
        hams.reserve(count);
        int done = 0;
        while (done < count) {
            const int wave = std::min(n, count - done);
            LabelMatrix x(n, wave);
            for (int j = 0; j < wave; ++j)
                x.set_column(j, initial_state(m, seed, chain_base + done + j));
            BatchSimulator sim(m, wave, p, seed, &ledger, chain_base + done);
            sim.run(x, 0, t_mix);
            const auto h = gather_hamiltonians(m, x, ledger);
            hams.insert(hams.end(), h.begin(), h.end());
            done += wave;
        }
        return hams;
    };
}

BatchSampler hardcore_fast_sampler() {
    return [](const GibbsModel& m, int count, int t_mix, double p, std::uint64_t seed,
              std::int64_t chain_base, MessageLedger& ledger) {
        const int n = m.graph().vertex_count();
        std::vector<std::int64_t> hams;
        hams.reserve(count);
        std::vector<RoutingRequest> reqs;
        int done = 0;
        while (done < count) {
            const int wave = std::min(n, count - done);
            const auto r = hardcore_fast_batch(m, wave, p, t_mix, seed, ledger, chain_base + done);
            // occupied vertices report one word each to the chain's machine,
            // machine 0 then collects the totals
            reqs.clear();
            for (int i = 0; i < wave; ++i) {
                std::int64_t h = 0;
                for (int v = 0; v < n; ++v) {
                    if (r.samples.at(v, i) == 1) {
                        ++h;
                        if (v != i) reqs.push_back({v, i, 1});
                    }
                }
                if (i != 0) reqs.push_back({i, 0, 1});
                hams.push_back(h);
            }
            schedule_routing(reqs, ledger);
            done += wave;
        }
        return hams;
    };
}

BatchSampler reference_sampler() {
    return [](const GibbsModel& m, int count, int t_mix, double p, std::uint64_t seed,
              std::int64_t chain_base, MessageLedger&) {
        std::vector<std::int64_t> hams;
        hams.reserve(count);
        mh::ChainParams params{p, t_mix, 0.0};
        for (int j = 0; j < count; ++j)
            hams.push_back(m.hamiltonian(mh::sample(m, params, seed, chain_base + j)));
        return hams;
    };
}

double EstimateResult::estimate() const {
    if (log_estimate > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_estimate);
}

EstimateResult estimate_partition(const GibbsModel& m, Temperature beta_target,
                                  const EstimateOptions& opts, const BatchSampler& sampler,
                                  MessageLedger& ledger) {
    const int n = m.graph().vertex_count();
    if (opts.repetitions < 1) throw std::invalid_argument("estimate: repetitions must be >= 1");
    const auto sched = build_schedule(m, beta_target, opts.eps, opts.samples_coeff);
    const int len = sched.length();
    const std::int64_t total =
        static_cast<std::int64_t>(len) * sched.per_term_samples * opts.repetitions;

    EstimateResult res;
    res.model = family_name(m.family());
    res.eps = opts.eps;
    res.repetitions = opts.repetitions;
    res.schedule_length = len;
    res.per_term_samples = sched.per_term_samples;
    res.total_samples = total;
    res.delta = total > 0 ? mh::sampling_delta(total) : 0.0;
    res.seed = opts.seed;

    const std::int64_t rounds_before = ledger.rounds_total();

    if (len == 0) {
        res.per_rep_log.assign(opts.repetitions, sched.log_anchor);
        res.log_estimate = sched.log_anchor;
        return res;
    }

    // precompute per-term activation probabilities and mixing times; the
    // whole sampling plan is known before any sample is drawn
    std::vector<double> p_term(len);
    std::vector<int> t_term(len);
    for (int i = 0; i < len; ++i) {
        const auto mi = m.at_lambda(sched.lambdas[i]);
        p_term[i] = opts.p_override.value_or(mh::choose_p(mi));
        t_term[i] = opts.t_mix_override ? *opts.t_mix_override
                                        : mh::mixing_time(mi, n, res.delta, p_term[i]);
    }

    std::int64_t chain_base = 0;
    for (int rep = 0; rep < opts.repetitions; ++rep) {
        std::vector<double> log_ratios(len);
        for (int i = 0; i < len; ++i) {
            const auto mi = m.at_lambda(sched.lambdas[i]);
            const auto hams = sampler(mi, sched.per_term_samples, t_term[i], p_term[i], opts.seed,
                                      chain_base, ledger);
            chain_base += sched.per_term_samples;
            log_ratios[i] =
                std::log(estimate_ratio_lambda(hams, sched.lambdas[i], sched.lambdas[i + 1]));
        }
        res.per_rep_log.push_back(sched.log_anchor + kahan_total(log_ratios));
    }
    res.log_estimate = median_of(res.per_rep_log);
    res.rounds_total = ledger.rounds_total() - rounds_before;
    res.max_machine_words = ledger.max_machine_words();
    return res;
}

EstimateResult count_colorings(const Graph& g, int q, const EstimateOptions& opts,
                               MessageLedger& ledger) {
    if (!opts.force && q <= 2 * g.max_degree())
        throw RegimeError("coloring count needs q > 2*Delta (override with force)");
    const auto m = GibbsModel::potts(g, q, Temperature::infinite());
    auto res = estimate_partition(m, Temperature::infinite(), opts, cube_wave_sampler(), ledger);
    res.model = "potts";
    return res;
}

EstimateResult count_hardcore(const Graph& g, double lambda, const EstimateOptions& opts,
                              MessageLedger& ledger) {
    if (!opts.force && g.max_degree() >= 2 && lambda * (g.max_degree() - 1) >= 1.0)
        throw RegimeError("hardcore count needs lambda*(Delta-1) < 1 (override with force)");
    const auto m = GibbsModel::hardcore(g, lambda);
    // the hardcore schedule targets the model's own fugacity
    auto res = estimate_partition(m, Temperature::infinite(), opts, hardcore_fast_sampler(), ledger);
    res.model = "hardcore";
    return res;
}

TriangleReport detect_triangle(const Graph& g, TriangleMode mode, const EstimateOptions& opts,
                               std::int64_t sample_budget) {
    const int n = g.vertex_count();
    TriangleReport rep;
    const long double z0 = static_cast<long double>(pointer_total_labelings(g));
    rep.z_zero = z0;
    const long double slack = 1.0L / (32.0L * n * n);
    rep.threshold = (1.0L - slack) * z0;

    if (mode == TriangleMode::kExactOracle) {
        const auto m = GibbsModel::pointer(g, Temperature::infinite());
        const auto poly = g.edge_count() <= 20 ? pointer_partition_poly_ie(g)
                                               : exact_partition_poly(m);
        if (poly.at_lambda_one() != pointer_total_labelings(g))
            throw std::logic_error("pointer oracle mismatch at beta = 0");
        rep.z_estimate = static_cast<long double>(poly.at_lambda_zero());
        // integer-exact comparison: no triangle iff 32 n^2 z_inf >= (32 n^2 - 1) z0
        const __int128 lhs = static_cast<__int128>(32) * n * n * poly.at_lambda_zero();
        const __int128 rhs =
            (static_cast<__int128>(32) * n * n - 1) * pointer_total_labelings(g);
        rep.triangle_found = lhs < rhs;
        return rep;
    }

    // estimated mode is pinned to the decision precision eps = 1/(32 n^2);
    // the projected sample bill almost always exceeds the budget, which is
    // reported as a regime error rather than silently loosening eps
    EstimateOptions eopts = opts;
    eopts.eps = static_cast<double>(slack);
    const auto m = GibbsModel::pointer(g, Temperature::infinite());
    const auto sched = build_schedule(m, Temperature::infinite(), eopts.eps, eopts.samples_coeff);
    const double projected = static_cast<double>(sched.length()) * sched.per_term_samples *
                             std::max(1, eopts.repetitions);
    if (projected > static_cast<double>(sample_budget))
        throw RegimeError("triangle detection at eps = 1/(32 n^2) exceeds the sample budget (" +
                          std::to_string(static_cast<long long>(projected)) + " samples needed)");
    MessageLedger ledger(std::max(1, n));
    const auto res = estimate_partition(m, Temperature::infinite(), eopts, cube_wave_sampler(), ledger);
    rep.z_estimate = std::exp(static_cast<long double>(res.log_estimate));
    rep.triangle_found = rep.z_estimate < rep.threshold;
    return rep;
}

} // namespace ccgibbs
