// Acceptance harness: one line per criterion, nonzero exit if any fails.
// Tolerances and frozen regression constants are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccgibbs/chain.hpp"
#include "ccgibbs/cube.hpp"
#include "ccgibbs/estimate.hpp"
#include "ccgibbs/oracle.hpp"
#include "ccgibbs/verify.hpp"
#include "test_util.hpp"

using namespace ccgibbs;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: batch transitions replay the per-chain reference bitwise
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    int cases = 0;
    bool ok = true;
    for (int n = 4; n <= 12 && ok; ++n) {
        const auto g = Graph::gnp(n, 0.5, 900 + n);
        const GibbsModel models[] = {GibbsModel::potts(g, 4, Temperature::from_beta(0.4)),
                                     GibbsModel::hardcore(g, 0.8),
                                     GibbsModel::pointer(g, Temperature::from_beta(0.9))};
        for (const auto& m : models)
            for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
                ok = verify::batch_matches_reference(m, n, 20, 0.5, seed);
                ++cases;
            }
    }
    const double elapsed = seconds_since(t0);
    report(1, ok && elapsed < 60.0,
           "batch == reference bitwise, 3 models, n=4..12, 10 seeds, 20 transitions (" +
               std::to_string(cases) + " cases, " + std::to_string(elapsed) + " s, cap 60)");
}

// ---- criterion 2: gathered Hamiltonians equal the direct computation
void criterion_2() {
    bool ok = true;
    int cases = 0;
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
        const int n = 4 + static_cast<int>(seed % 9); // 4..12
        const auto g = Graph::gnp(n, 0.5, 1700 + seed);
        const GibbsModel models[] = {GibbsModel::potts(g, 5, Temperature::from_beta(0.3)),
                                     GibbsModel::hardcore(g, 0.5),
                                     GibbsModel::pointer(g, Temperature::from_beta(0.6))};
        for (const auto& m : models) {
            LabelMatrix x(n, n);
            for (int i = 0; i < n; ++i)
                x.set_column(i, verify::random_support_state(m, seed, i));
            MessageLedger ledger(n);
            const auto h = gather_hamiltonians(m, x, ledger);
            for (int i = 0; i < n; ++i)
                if (h[i] != m.hamiltonian(x.column(i))) ok = false;
            ++cases;
        }
    }
    report(2, ok, "gathered Hamiltonians exact on random states, all models, 100 seeds (" +
                      std::to_string(cases) + " matrices)");
}

// ---- criterion 3: empirical stationarity against the enumeration oracle
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const int samples = 100000;

    const auto hc = GibbsModel::hardcore(Graph::path(2), 1.0);
    const double p_hc = mh::choose_p(hc);
    const mh::ChainParams hc_params{p_hc, mh::mixing_time(hc, 2, 0.005, p_hc), 0.005};
    const double tv_hc = verify::empirical_tv(hc, hc_params, samples, 31);

    // K3 with q = 3 sits outside the contraction guarantee (q <= 2*Delta),
    // so the transition count is supplied manually; the chain is absorbed
    // into the uniform proper-coloring law long before 200 transitions
    const auto potts = GibbsModel::potts(Graph::complete(3), 3, Temperature::infinite());
    const mh::ChainParams potts_params{0.5, 200, 0.005};
    const double tv_potts = verify::empirical_tv(potts, potts_params, samples, 32);

    const double elapsed = seconds_since(t0);
    const bool ok = tv_hc <= 0.05 && tv_potts <= 0.05 && elapsed < 120.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "stationarity TV <= 0.05: hardcore edge %.4f (t=%d), potts K3 %.4f (t=%d) "
                  "(%.1f s, cap 120)",
                  tv_hc, hc_params.t_mix, tv_potts, potts_params.t_mix, elapsed);
    report(3, ok, buf);
}

// ---- criterion 4: coupled contraction under the closed-form bounds
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const double exact = mh::contraction_bound_hardcore(2, 0.5, 0.2);
    bool ok = std::fabs(exact - 0.96) < 1e-12;
    double worst_margin = 1e9;
    const int trials = 60000;

    for (int delta : {2, 3, 5}) {
        const auto g = delta == 2 ? Graph::cycle(12) : Graph::random_regular(12, delta, 7);
        for (double frac : {0.3, 0.6, 0.9}) {
            const double lambda = frac / (delta - 1);
            const auto m = GibbsModel::hardcore(g, lambda);
            for (double p : {mh::choose_p(m), 0.2}) {
                const auto st = verify::contraction_experiment(m, p, trials, 101 + delta);
                ok = ok && st.within(3.0);
                worst_margin = std::min(worst_margin,
                                        (st.bound + 3 * st.stderr_mean - st.mean));
            }
        }
    }
    for (int delta : {2, 3}) {
        const auto g = delta == 2 ? Graph::cycle(12) : Graph::random_regular(12, delta, 8);
        for (int q : {2 * delta + 1, 3 * delta}) {
            const auto m = GibbsModel::potts(g, q, Temperature::from_beta(0.8));
            for (double p : {mh::choose_p(m), 0.15}) {
                const auto st = verify::contraction_experiment(m, p, trials, 202 + q);
                ok = ok && st.within(3.0);
                worst_margin = std::min(worst_margin,
                                        (st.bound + 3 * st.stderr_mean - st.mean));
            }
        }
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "contraction grid within bound+3se (worst margin %.4f); closed form at "
                  "(2,1/2,0.2) = %.17g (%.1f s)",
                  worst_margin, exact, seconds_since(t0));
    report(4, ok, buf);
}

// ---- criterion 5: exact kernel equality of the three-coin view
void criterion_5() {
    bool ok = true;
    for (int q : {2, 3}) {
        const auto m =
            GibbsModel::potts(Graph::path(2), q, Temperature::from_beta(std::log(2.0)));
        for (std::int32_t a = 0; a < q && ok; ++a)
            for (std::int32_t b = 0; b < q && ok; ++b) {
                const Labeling x{a, b};
                ok = testutil::direct_kernel_single_edge(m, x) ==
                     testutil::coin_kernel_single_edge(m, x);
            }
    }
    report(5, ok,
           "three-coin kernel == direct kernel, exact integer enumeration, q in {2,3}, p=1");
}

// ---- criterion 6: end-to-end counting accuracy over 20 independent runs
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Instance {
        std::string name;
        double target, eps;
        std::function<double(std::uint64_t)> run;
    };
    std::vector<Instance> instances;

    instances.push_back(
        {"hardcore path3 lambda=0.4 (2.36)", 2.36, 0.1, [](std::uint64_t seed) {
             MessageLedger ledger(3);
             EstimateOptions opts;
             opts.eps = 0.1;
             opts.repetitions = 3;
             opts.seed = seed;
             return count_hardcore(Graph::path(3), 0.4, opts, ledger).estimate();
         }});
    instances.push_back({"colorings K3 q=7 (210)", 210.0, 0.15, [](std::uint64_t seed) {
                             MessageLedger ledger(3);
                             EstimateOptions opts;
                             opts.eps = 0.15;
                             opts.repetitions = 3;
                             opts.seed = seed;
                             return count_colorings(Graph::complete(3), 7, opts, ledger)
                                 .estimate();
                         }});
    instances.push_back({"colorings C4 q=9 (4104)", 4104.0, 0.15, [](std::uint64_t seed) {
                             MessageLedger ledger(4);
                             EstimateOptions opts;
                             opts.eps = 0.15;
                             opts.repetitions = 3;
                             opts.seed = seed;
                             return count_colorings(Graph::cycle(4), 9, opts, ledger).estimate();
                         }});

    bool ok = true;
    std::string detail;
    for (const auto& inst : instances) {
        int hits = 0;
        for (std::uint64_t run = 1; run <= 20; ++run) {
            const double est = inst.run(5000 + 37 * run);
            if (est >= (1.0 - inst.eps) * inst.target && est <= (1.0 + inst.eps) * inst.target)
                ++hits;
        }
        ok = ok && hits >= 14;
        detail += inst.name + " " + std::to_string(hits) + "/20; ";
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 600.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.1f s, cap 600)", elapsed);
    report(6, ok, "counting accuracy >= 14/20 in the eps band: " + detail + buf);
}

// ---- criterion 7: closed-form anchors, exact
void criterion_7() {
    bool ok = true;

    const auto potts_k3 = exact_partition_poly(
        GibbsModel::potts(Graph::complete(3), 3, Temperature::from_beta(0.0)));
    ok = ok && potts_k3.at_lambda_one() == 27; // q^n

    const auto potts_k3_q7 = exact_partition_poly(
        GibbsModel::potts(Graph::complete(3), 7, Temperature::from_beta(0.0)));
    ok = ok && potts_k3_q7.at_lambda_one() == 343;

    const auto hc_p3 = exact_partition_poly(GibbsModel::hardcore(Graph::path(3), 0.7));
    ok = ok && hc_p3.at_lambda_zero() == 1; // empty independent set only

    const auto hc_c5 = exact_partition_poly(GibbsModel::hardcore(Graph::cycle(5), 0.3));
    ok = ok && hc_c5.at_lambda_zero() == 1;

    const auto ptr_k3 = pointer_partition_poly_ie(Graph::complete(3));
    ok = ok && ptr_k3.at_lambda_one() == 1331 &&
         pointer_total_labelings(Graph::complete(3)) == 1331;

    report(7, ok,
           "anchors exact: potts Z(0)=q^n (27, 343), hardcore Z at lambda=0 is 1, pointer K3 "
           "Z(0)=1331");
}

// ---- criterion 8: triangle reduction on every 4-vertex graph + 200 random
void criterion_8() {
    bool agree = true, gap = true;
    int checked = 0;
    auto check_graph = [&](const Graph& g) {
        const auto rep = detect_triangle(g, TriangleMode::kExactOracle);
        if (rep.triangle_found != g.has_triangle()) agree = false;
        if (g.has_triangle()) {
            // 1 - Z(inf)/Z(0) >= 1/(16 n^2), in exact integers
            const auto poly = pointer_partition_poly_ie(g);
            const auto z0 = static_cast<__int128>(poly.at_lambda_one());
            const auto zi = static_cast<__int128>(poly.at_lambda_zero());
            const int n = g.vertex_count();
            if ((z0 - zi) * 16 * n * n < z0) gap = false;
        }
        ++checked;
    };
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
        std::vector<std::pair<int, int>> e;
        int bit = 0;
        for (int u = 0; u < 4; ++u)
            for (int v = u + 1; v < 4; ++v, ++bit)
                if (mask >> bit & 1u) e.push_back({u, v});
        check_graph(Graph(4, e));
    }
    for (int i = 0; i < 200; ++i) check_graph(Graph::gnp(5 + i % 2, 0.5, 2200 + i));
    report(8, agree && gap,
           "triangle reduction agrees with enumeration and meets the 1/(16 n^2) gap on " +
               std::to_string(checked) + " graphs");
}

// ---- criterion 9: communication scaling against frozen constants
void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    // constants measured once on the reference run and frozen; the checks
    // accept a factor-2 envelope either way
    const double frozen_words_c = 5.5;  // max per-machine words / n^(4/3)
    const double frozen_rounds_c = 6.75; // rounds per transition / n^(1/3)
    const std::int64_t frozen_fast_words = 4800; // max per-vertex words, n=k=64, Delta=8

    bool ok = true;
    std::string detail;
    for (int n : {8, 27, 64}) {
        const auto l = verify::batch_transition_loads(n);
        const double wc = l.max_machine_words / std::pow(n, 4.0 / 3.0);
        const double rc = l.rounds / std::pow(n, 1.0 / 3.0);
        ok = ok && wc >= frozen_words_c / 2 && wc <= frozen_words_c * 2;
        ok = ok && rc >= frozen_rounds_c / 2 && rc <= frozen_rounds_c * 2;
        char buf[64];
        std::snprintf(buf, sizeof buf, "n=%d words %.2f rounds %.2f; ", n, wc, rc);
        detail += buf;
    }
    {
        const auto g = Graph::random_regular(64, 8, 11);
        const auto m = GibbsModel::hardcore(g, 0.5 / 7.0);
        const double p = mh::choose_p(m);
        const int t = mh::mixing_time(m, 64, mh::sampling_delta(64), p);
        MessageLedger ledger(64);
        const auto r = hardcore_fast_batch(m, 64, p, t, 5, ledger, 0);
        const auto words = std::max(r.max_vertex_sent, r.max_vertex_received);
        ok = ok && words >= frozen_fast_words / 2 && words <= frozen_fast_words * 2;
        char buf[96];
        std::snprintf(buf, sizeof buf, "fast path words %lld (frozen %lld, t=%d)",
                      static_cast<long long>(words),
                      static_cast<long long>(frozen_fast_words), t);
        detail += buf;
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 180.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, " (%.1f s, cap 180)", elapsed);
    report(9, ok, "scaling within factor 2 of frozen constants: " + detail + buf);
}

// ---- criterion 10: schedule condition and oracle-exact telescoping
void criterion_10() {
    struct Case {
        std::string name;
        GibbsModel m;
        double eps;
    };
    const std::vector<Case> cases = {
        {"hardcore path3", GibbsModel::hardcore(Graph::path(3), 0.4), 0.1},
        {"potts K3 q=7", GibbsModel::potts(Graph::complete(3), 7, Temperature::infinite()), 0.15},
        {"potts C4 q=9", GibbsModel::potts(Graph::cycle(4), 9, Temperature::infinite()), 0.15},
        {"pointer K3", GibbsModel::pointer(Graph::complete(3), Temperature::infinite()), 0.1},
    };
    const double b_limit = std::exp(2.0);
    bool ok = true;
    double worst_cond = 0.0, worst_rel = 0.0, worst_trunc = 0.0;
    for (const auto& c : cases) {
        const auto s = build_schedule(c.m, Temperature::infinite(), c.eps);
        const auto poly = exact_partition_poly(c.m);
        for (int i = 0; i < s.length(); ++i) {
            const double li = s.lambdas[i], ln_ = s.lambdas[i + 1];
            const long double zi = poly.evaluate(li);
            const long double zn = poly.evaluate(ln_);
            const long double z2 = poly.evaluate(li == 0.0 ? 0.0 : ln_ * ln_ / li);
            const double cond = static_cast<double>(zi * z2 / (zn * zn));
            worst_cond = std::max(worst_cond, cond);
            if (cond > b_limit) ok = false;
        }
        // exact telescoping of the ratio product, then the anchored product
        // against the true target within the truncation share
        long double log_ratios = 0.0L;
        for (int i = 0; i < s.length(); ++i)
            log_ratios += std::log(poly.evaluate(s.lambdas[i + 1]) / poly.evaluate(s.lambdas[i]));
        const long double span =
            poly.evaluate(s.lambdas.back()) / poly.evaluate(s.lambdas.front());
        const double rel = std::fabs(static_cast<double>(std::exp(log_ratios) / span) - 1.0);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-9) ok = false;
        const long double target = c.m.family() == ModelFamily::kHardcore
                                       ? poly.evaluate(c.m.lambda())
                                       : poly.evaluate(0.0);
        const double trunc = std::fabs(
            static_cast<double>(std::exp(s.log_anchor + log_ratios) / target) - 1.0);
        worst_trunc = std::max(worst_trunc, trunc);
        if (trunc > kScheduleTruncationShare * c.eps + 1e-9) ok = false;
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "schedules: worst second-moment condition %.4f <= e^2, telescoping rel err "
                  "%.2e, truncation residual %.2e within budget",
                  worst_cond, worst_rel, worst_trunc);
    report(10, ok, buf);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d/10 criteria passed (%.1f s total)\n", 10 - g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
