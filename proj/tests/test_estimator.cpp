#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccgibbs/errors.hpp"
#include "ccgibbs/estimate.hpp"
#include "ccgibbs/oracle.hpp"

using namespace ccgibbs;

TEST_CASE("schedule anchors and shape") {
    SUBCASE("potts anchored at q^n with unit steps") {
        const auto m = GibbsModel::potts(Graph::complete(3), 7, Temperature::infinite());
        const auto s = build_schedule(m, Temperature::infinite(), 0.15);
        CHECK(s.log_anchor == doctest::Approx(3.0 * std::log(7.0)));
        CHECK(s.lambdas.front() == 1.0);
        CHECK(s.truncated);
        CHECK(s.hamiltonian_bound == 3);
        // strictly decreasing weights, step ratio exp(-1/h)
        for (int i = 0; i + 1 < static_cast<int>(s.lambdas.size()); ++i) {
            CHECK(s.lambdas[i + 1] < s.lambdas[i]);
            if (i + 2 < static_cast<int>(s.lambdas.size()))
                CHECK(s.lambdas[i + 1] / s.lambdas[i] ==
                      doctest::Approx(std::exp(-1.0 / 3.0)));
        }
    }
    SUBCASE("hardcore runs the fugacity upward from a near-zero anchor") {
        const auto m = GibbsModel::hardcore(Graph::path(3), 0.4);
        const auto s = build_schedule(m, Temperature::infinite(), 0.1);
        CHECK(s.log_anchor == 0.0);
        CHECK(s.lambdas.back() == doctest::Approx(0.4));
        CHECK(s.lambdas.front() > 0.0);
        CHECK(s.lambdas.front() < 0.01);
        for (int i = 0; i + 1 < static_cast<int>(s.lambdas.size()); ++i)
            CHECK(s.lambdas[i] < s.lambdas[i + 1]);
        // the anchor gap is inside the truncation share of eps
        const auto poly = exact_partition_poly(m);
        CHECK(static_cast<double>(poly.evaluate(s.lambdas.front())) <=
              1.0 + kScheduleTruncationShare * 0.1);
    }
    SUBCASE("edgeless potts degenerates to a single unit ratio") {
        const auto m = GibbsModel::potts(Graph::empty(4), 3, Temperature::infinite());
        const auto s = build_schedule(m, Temperature::infinite(), 0.1);
        CHECK(s.hamiltonian_bound == 0);
        CHECK(s.length() == 1);
    }
    SUBCASE("hardcore lambda=0 needs no sampling at all") {
        const auto m = GibbsModel::hardcore(Graph::path(3), 0.0);
        const auto s = build_schedule(m, Temperature::infinite(), 0.1);
        CHECK(s.length() == 0);
        CHECK(s.log_anchor == 0.0);
    }
    SUBCASE("beta-infinity truncation error fits the budget (oracle check)") {
        const auto m = GibbsModel::potts(Graph::complete(3), 3, Temperature::infinite());
        const double eps = 0.1;
        const auto s = build_schedule(m, Temperature::infinite(), eps);
        const auto poly = exact_partition_poly(m);
        const auto z_cap = poly.evaluate(std::exp(-s.beta_cap));
        const auto z_inf = poly.evaluate(0.0);
        CHECK(static_cast<double>(z_cap - z_inf) <= (eps / 2.0) * static_cast<double>(z_inf));
    }
}

TEST_CASE("ratio estimator") {
    SUBCASE("all-zero Hamiltonians give ratio one") {
        CHECK(estimate_ratio({0, 0, 0}, 0.5, 0.75) == 1.0);
    }
    SUBCASE("single sample is the exact exponential") {
        CHECK(estimate_ratio({4}, 0.5, 0.75) == doctest::Approx(std::exp(-0.25 * 4)));
    }
    SUBCASE("empty input rejected") {
        CHECK_THROWS_AS(estimate_ratio({}, 0.1, 0.2), std::invalid_argument);
    }
    SUBCASE("exact unbiasedness under the oracle distribution") {
        // E[(l2/l1)^H] at fugacity l1 equals Z(l2)/Z(l1); both sides from
        // the level-count polynomial in exact arithmetic
        const auto m = GibbsModel::hardcore(Graph::path(2), 0.3);
        const auto poly = exact_partition_poly(m);
        const double l1 = 0.3, l2 = 0.36;
        long double expectation = 0.0L;
        const auto z1 = poly.evaluate(l1);
        for (std::size_t h = 0; h < poly.level_counts.size(); ++h)
            expectation += poly.level_counts[h] * std::pow(static_cast<long double>(l1), h) *
                           std::pow(static_cast<long double>(l2 / l1), h) / z1;
        CHECK(static_cast<double>(expectation) ==
              doctest::Approx(static_cast<double>(poly.evaluate(l2) / z1)).epsilon(1e-12));
    }
    SUBCASE("monte carlo mean lands near the oracle ratio") {
        const auto m = GibbsModel::hardcore(Graph::path(2), 0.5);
        const auto poly = exact_partition_poly(m);
        // draw exact samples from the oracle distribution at lambda=0.5
        const auto dist = exact_distribution(m);
        std::vector<std::pair<double, int>> support; // cumulative prob, H
        double acc = 0.0;
        for (const auto& [code, p] : dist.prob) {
            acc += p;
            support.push_back({acc, m.hamiltonian(decode_labeling(m, code))});
        }
        RngStream rng(3, {0, 0, RngTag::kTest, 5});
        std::vector<std::int64_t> hams;
        const int samples = 100000;
        for (int s = 0; s < samples; ++s) {
            const double u = rng.next_unit();
            for (const auto& [cum, h] : support)
                if (u <= cum) { hams.push_back(h); break; }
        }
        const double est = estimate_ratio_lambda(hams, 0.5, 0.6);
        const double exact = static_cast<double>(poly.evaluate(0.6) / poly.evaluate(0.5));
        CHECK(std::fabs(est - exact) < 3.0 * 0.2 / std::sqrt(samples));
    }
}

TEST_CASE("schedule second-moment condition and telescoping") {
    struct Case {
        GibbsModel m;
        double eps;
    };
    const Case cases[] = {
        {GibbsModel::hardcore(Graph::path(3), 0.4), 0.1},
        {GibbsModel::potts(Graph::complete(3), 7, Temperature::infinite()), 0.15},
        {GibbsModel::potts(Graph::cycle(4), 9, Temperature::infinite()), 0.15},
        {GibbsModel::pointer(Graph::complete(3), Temperature::infinite()), 0.1},
    };
    const double b_limit = std::exp(2.0);
    for (const auto& c : cases) {
        const auto s = build_schedule(c.m, Temperature::infinite(), c.eps);
        const auto poly = exact_partition_poly(c.m);
        // condition Z(b_i) Z(2 b_{i+1} - b_i) <= B Z(b_{i+1})^2 on every
        // consecutive step, evaluated through the exact polynomial
        for (int i = 0; i < s.length(); ++i) {
            const double li = s.lambdas[i], ln_ = s.lambdas[i + 1];
            const long double zi = poly.evaluate(li);
            const long double zn = poly.evaluate(ln_);
            const long double z2 = poly.evaluate(li == 0.0 ? 0.0 : ln_ * ln_ / li);
            REQUIRE(static_cast<double>(zi * z2 / (zn * zn)) <= b_limit);
        }
        // the ratio product telescopes exactly ...
        long double log_ratios = 0.0L;
        for (int i = 0; i < s.length(); ++i)
            log_ratios += std::log(poly.evaluate(s.lambdas[i + 1]) / poly.evaluate(s.lambdas[i]));
        const long double product = std::exp(log_ratios);
        const long double span = poly.evaluate(s.lambdas.back()) / poly.evaluate(s.lambdas.front());
        REQUIRE(std::fabs(static_cast<double>(product / span) - 1.0) < 1e-9);
        // ... and the anchored product reproduces the target within the
        // truncation share (the hardcore anchor and the beta cap are the
        // only approximations)
        const long double anchored = std::exp(s.log_anchor + log_ratios);
        const long double target = c.m.family() == ModelFamily::kHardcore
                                       ? poly.evaluate(c.m.lambda())
                                       : poly.evaluate(0.0);
        REQUIRE(std::fabs(static_cast<double>(anchored / target) - 1.0) <=
                kScheduleTruncationShare * c.eps + 1e-9);
    }
}

TEST_CASE("partition estimates hit their targets") {
    SUBCASE("hardcore single edge lambda=1") {
        const auto g = Graph::path(2);
        MessageLedger ledger(2);
        EstimateOptions opts;
        opts.eps = 0.1;
        opts.repetitions = 3;
        opts.seed = 10;
        const auto res = count_hardcore(g, 1.0, opts, ledger);
        CHECK(res.estimate() == doctest::Approx(3.0).epsilon(0.1));
        CHECK(res.total_samples ==
              static_cast<std::int64_t>(res.schedule_length) * res.per_term_samples * 3);
        CHECK(res.delta == doctest::Approx(1.0 / (8.0 * res.total_samples)));
    }
    SUBCASE("empty graph hardcore is (1+lambda)^n") {
        MessageLedger ledger(5);
        EstimateOptions opts;
        opts.eps = 0.1;
        opts.repetitions = 3;
        opts.seed = 4;
        const auto res = count_hardcore(Graph::empty(5), 1.0, opts, ledger);
        CHECK(res.estimate() == doctest::Approx(32.0).epsilon(0.1));
    }
    SUBCASE("edgeless coloring count is exactly anchored") {
        MessageLedger ledger(6);
        EstimateOptions opts;
        opts.seed = 2;
        opts.repetitions = 1;
        const auto res = count_colorings(Graph::empty(6), 3, opts, ledger);
        CHECK(res.log_estimate == doctest::Approx(6.0 * std::log(3.0)).epsilon(1e-12));
    }
    SUBCASE("potts path3 q=4 via a manual transition count") {
        // q = 2*Delta sits outside the guarantee; the caller supplies t_mix
        const auto g = Graph::path(3);
        const auto m = GibbsModel::potts(g, 4, Temperature::infinite());
        MessageLedger ledger(3);
        EstimateOptions opts;
        opts.eps = 0.15;
        opts.repetitions = 3;
        opts.seed = 6;
        opts.t_mix_override = 60;
        opts.p_override = 0.5;
        const auto res =
            estimate_partition(m, Temperature::infinite(), opts, cube_wave_sampler(), ledger);
        CHECK(res.estimate() == doctest::Approx(36.0).epsilon(0.15));
        CHECK(ledger.rounds_total() > 0);
    }
    SUBCASE("hardcore lambda=0 is exactly one, no samples drawn") {
        MessageLedger ledger(4);
        EstimateOptions opts;
        opts.seed = 7;
        const auto res = count_hardcore(Graph::cycle(4), 0.0, opts, ledger);
        CHECK(res.log_estimate == 0.0);
        CHECK(res.total_samples == 0);
        CHECK(ledger.total_words() == 0);
    }
    SUBCASE("star graph hardcore") {
        MessageLedger ledger(5);
        EstimateOptions opts;
        opts.eps = 0.1;
        opts.repetitions = 3;
        opts.seed = 12;
        const auto res = count_hardcore(Graph::star(4), 0.2, opts, ledger);
        // (1+lambda)^4 + lambda
        CHECK(res.estimate() == doctest::Approx(2.2736).epsilon(0.1));
    }
}

TEST_CASE("regime gates") {
    SUBCASE("colorings need q > 2*Delta") {
        MessageLedger ledger(3);
        EstimateOptions opts;
        CHECK_THROWS_AS(count_colorings(Graph::complete(3), 4, opts, ledger), RegimeError);
    }
    SUBCASE("force overrides the gate") {
        MessageLedger ledger(3);
        EstimateOptions opts;
        opts.force = true;
        opts.eps = 0.2;
        opts.repetitions = 1;
        opts.t_mix_override = 40;
        opts.p_override = 0.5;
        const auto res = count_colorings(Graph::complete(3), 4, opts, ledger);
        CHECK(res.estimate() == doctest::Approx(24.0).epsilon(0.3)); // 4*3*2
    }
    SUBCASE("hardcore boundary alpha = 1 is rejected") {
        MessageLedger ledger(4);
        EstimateOptions opts;
        CHECK_THROWS_AS(count_hardcore(Graph::cycle(4), 1.0, opts, ledger), RegimeError);
    }
}

TEST_CASE("triangle detection") {
    SUBCASE("K3 exact mode") {
        const auto rep = detect_triangle(Graph::complete(3), TriangleMode::kExactOracle);
        CHECK(rep.triangle_found);
        CHECK(rep.z_zero == 1331.0L);
    }
    SUBCASE("C4 exact mode") {
        const auto rep = detect_triangle(Graph::cycle(4), TriangleMode::kExactOracle);
        CHECK_FALSE(rep.triangle_found);
        CHECK(rep.z_estimate == rep.z_zero);
    }
    SUBCASE("all labeled 4-vertex graphs agree with direct enumeration") {
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            std::vector<std::pair<int, int>> e;
            int bit = 0;
            for (int u = 0; u < 4; ++u)
                for (int v = u + 1; v < 4; ++v, ++bit)
                    if (mask >> bit & 1u) e.push_back({u, v});
            const Graph g(4, e);
            REQUIRE(detect_triangle(g, TriangleMode::kExactOracle).triangle_found ==
                    g.has_triangle());
        }
    }
    SUBCASE("estimated mode reports its sample bill honestly") {
        CHECK_THROWS_AS(detect_triangle(Graph::complete(3), TriangleMode::kEstimated),
                        RegimeError);
    }
}
