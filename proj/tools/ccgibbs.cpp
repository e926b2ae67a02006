// Command line front end: sampling, counting, verification suites and
// benchmark sweeps over the simulated all-to-all network.
//
// Exit codes: 0 success, 2 regime/resource gate, 3 I/O, 4 suite failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccgibbs/chain.hpp"
#include "ccgibbs/cube.hpp"
#include "ccgibbs/errors.hpp"
#include "ccgibbs/estimate.hpp"
#include "ccgibbs/gibbs_model.hpp"
#include "ccgibbs/graph.hpp"
#include "ccgibbs/oracle.hpp"
#include "ccgibbs/verify.hpp"

using nlohmann::json;
using namespace ccgibbs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRegime = 2;
constexpr int kExitIo = 3;
constexpr int kExitSuite = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CCGIBBS_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw IoError("CCGIBBS_SEED is not an integer");
        }
    }
    return 1;
}

Temperature parse_beta(const std::string& text) {
    if (text == "inf" || text == "infinity") return Temperature::infinite();
    try {
        return Temperature::from_beta(std::stod(text));
    } catch (const std::invalid_argument&) {
        throw IoError("bad beta value '" + text + "' (number or 'inf')");
    }
}

struct ModelArgs {
    std::string family = "hardcore";
    int q = 0;
    double lambda = -1.0;
    std::string beta = "";
    std::string config_path = "";
};

void apply_model_config(CLI::App* cmd, ModelArgs& args, EstimateOptions* eopts = nullptr) {
    if (args.config_path.empty()) return;
    std::ifstream in(args.config_path);
    if (!in) throw IoError("cannot open model config: " + args.config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& ex) {
        throw IoError("bad model config " + args.config_path + ": " + ex.what());
    }
    // config supplies defaults; explicit flags win
    if (cmd->count("--model") == 0 && cfg.contains("model")) args.family = cfg["model"];
    if (cmd->count("--q") == 0 && cfg.contains("q")) args.q = cfg["q"];
    if (cmd->count("--lambda") == 0 && cfg.contains("lambda")) args.lambda = cfg["lambda"];
    if (cmd->count("--beta") == 0 && cfg.contains("beta"))
        args.beta = cfg["beta"].is_string() ? cfg["beta"].get<std::string>()
                                            : std::to_string(cfg["beta"].get<double>());
    if (eopts && cmd->count("--eps") == 0 && cfg.contains("eps")) eopts->eps = cfg["eps"];
}

GibbsModel build_model(const ModelArgs& args, const Graph& g) {
    if (args.family == "hardcore") {
        if (args.lambda < 0.0) throw IoError("hardcore model needs --lambda");
        return GibbsModel::hardcore(g, args.lambda);
    }
    if (args.family == "potts") {
        if (args.q < 1) throw IoError("potts model needs --q");
        const Temperature t = args.beta.empty() ? Temperature::infinite() : parse_beta(args.beta);
        return GibbsModel::potts(g, args.q, t);
    }
    if (args.family == "pointer") {
        const Temperature t = args.beta.empty() ? Temperature::infinite() : parse_beta(args.beta);
        return GibbsModel::pointer(g, t);
    }
    throw IoError("unknown model family '" + args.family + "'");
}

json result_to_json(const EstimateResult& r, const std::string& graph_spec, const json& params) {
    json j;
    j["model"] = r.model;
    j["graph"] = graph_spec;
    j["params"] = params;
    j["eps"] = r.eps;
    j["repetitions"] = r.repetitions;
    j["schedule_length"] = r.schedule_length;
    j["per_term_samples"] = r.per_term_samples;
    j["total_samples"] = r.total_samples;
    j["delta"] = r.delta;
    j["log_estimate"] = r.log_estimate;
    j["estimate"] = r.estimate();
    j["per_rep_log"] = r.per_rep_log;
    j["rounds_total"] = r.rounds_total;
    j["max_machine_words"] = r.max_machine_words;
    j["seed"] = r.seed;
    return j;
}

void print_count_summary(std::ostream& out, const json& j) {
    out << "model=" << j["model"].get<std::string>() << " graph=" << j["graph"].get<std::string>()
        << " eps=" << j["eps"].get<double>() << "\n";
    out << "estimate=" << j["estimate"].get<double>()
        << " log_estimate=" << j["log_estimate"].get<double>() << "\n";
    out << "schedule_length=" << j["schedule_length"].get<int>()
        << " per_term_samples=" << j["per_term_samples"].get<int>()
        << " total_samples=" << j["total_samples"].get<std::int64_t>()
        << " repetitions=" << j["repetitions"].get<int>() << " delta=" << j["delta"].get<double>()
        << "\n";
    out << "rounds_total=" << j["rounds_total"].get<std::int64_t>()
        << " max_machine_words=" << j["max_machine_words"].get<std::int64_t>()
        << " seed=" << j["seed"].get<std::uint64_t>() << "\n";
}

int run_sample(const ModelArgs& margs, const std::string& graph_spec, int chains,
               std::uint64_t seed, std::optional<int> t_mix, std::optional<double> p_opt,
               const std::string& sampler, const std::string& out_samples,
               const std::string& out_ledger) {
    const Graph g = make_graph(graph_spec);
    const GibbsModel m = build_model(margs, g);
    const int n = g.vertex_count();
    if (chains < 1) throw IoError("--chains must be >= 1");

    const double delta = mh::sampling_delta(chains);
    const double p = p_opt ? *p_opt : mh::choose_p(m);
    const int t = t_mix ? *t_mix : mh::mixing_time(m, n, delta, p);

    MessageLedger ledger(n, /*detailed=*/true);
    LabelMatrix samples(n, chains);
    if (sampler == "batch") {
        if (chains > n) throw IoError("batch sampler needs --chains <= n");
        for (int i = 0; i < chains; ++i) samples.set_column(i, initial_state(m, seed, i));
        BatchSimulator sim(m, chains, p, seed, &ledger, 0);
        sim.run(samples, 0, t);
    } else if (sampler == "fast") {
        if (chains > n) throw IoError("fast sampler needs --chains <= n");
        const auto r = hardcore_fast_batch(m, chains, p, t, seed, ledger, 0);
        samples = r.samples;
    } else if (sampler == "reference") {
        mh::ChainParams params{p, t, delta};
        for (int i = 0; i < chains; ++i) samples.set_column(i, mh::sample(m, params, seed, i));
    } else {
        throw IoError("unknown sampler '" + sampler + "' (batch|reference|fast)");
    }

    std::ostringstream body;
    body << "# model=" << family_name(m.family()) << " graph=" << graph_spec << " n=" << n
         << " chains=" << chains << " seed=" << seed << " p=" << p << " t_mix=" << t << "\n";
    for (int i = 0; i < chains; ++i) {
        const auto x = samples.column(i);
        body << i << " " << m.hamiltonian(x);
        for (const auto l : x) body << " " << l;
        body << "\n";
    }
    if (out_samples.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(out_samples);
        if (!f) throw IoError("cannot write " + out_samples);
        f << body.str();
    }
    if (!out_ledger.empty()) {
        std::ofstream f(out_ledger);
        if (!f) throw IoError("cannot write " + out_ledger);
        ledger.write_csv(f);
    }
    std::cerr << "sampled " << chains << " chains after " << t << " transitions; rounds="
              << ledger.rounds_total() << " max_words=" << ledger.max_machine_words() << "\n";
    return kExitOk;
}

int run_count(const ModelArgs& margs, const std::string& graph_spec, const EstimateOptions& opts,
              const std::string& json_path) {
    const Graph g = make_graph(graph_spec);
    const int n = g.vertex_count();
    if (opts.eps <= 1.0 / std::sqrt(static_cast<double>(std::max(1, n))))
        std::cerr << "note: eps below 1/sqrt(n); the sample bill grows steeply\n";

    MessageLedger ledger(std::max(1, n));
    EstimateResult res;
    json params;
    if (margs.family == "hardcore") {
        if (margs.lambda < 0.0) throw IoError("hardcore model needs --lambda");
        params["lambda"] = margs.lambda;
        res = count_hardcore(g, margs.lambda, opts, ledger);
    } else if (margs.family == "potts") {
        if (margs.q < 1) throw IoError("potts model needs --q");
        const std::string beta = margs.beta.empty() ? "inf" : margs.beta;
        params["q"] = margs.q;
        params["beta"] = beta;
        if (beta != "inf" && beta != "infinity") {
            if (!opts.force && margs.q <= 2 * g.max_degree())
                throw RegimeError("coloring count needs q > 2*Delta (override with --force)");
            const auto m = GibbsModel::potts(g, margs.q, parse_beta(beta));
            res = estimate_partition(m, parse_beta(beta), opts, cube_wave_sampler(), ledger);
            res.model = "potts";
        } else {
            res = count_colorings(g, margs.q, opts, ledger);
        }
    } else if (margs.family == "pointer") {
        const Temperature t = margs.beta.empty() ? Temperature::infinite() : parse_beta(margs.beta);
        params["beta"] = margs.beta.empty() ? "inf" : margs.beta;
        const auto m = GibbsModel::pointer(g, t);
        res = estimate_partition(m, t, opts, cube_wave_sampler(), ledger);
        res.model = "pointer";
    } else {
        throw IoError("unknown model family '" + margs.family + "'");
    }

    const json j = result_to_json(res, graph_spec, params);
    print_count_summary(std::cout, j);
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw IoError("cannot write " + json_path);
        f << j.dump(2) << "\n";
    }
    return kExitOk;
}

int run_verify(const std::string& suite, const verify::SuiteOptions& opts,
               const std::string& csv_path) {
    const auto results = verify::run_suites(suite, opts);
    bool all = true;
    for (const auto& r : results) {
        std::cout << "[" << (r.passed ? "PASS" : "FAIL") << "] suite " << r.name << "\n";
        for (const auto& line : r.lines) std::cout << line << "\n";
        all = all && r.passed;
        if (!csv_path.empty() && !r.csv.empty()) {
            std::ofstream f(csv_path);
            if (!f) throw IoError("cannot write " + csv_path);
            for (const auto& row : r.csv) f << row << "\n";
        }
    }
    return all ? kExitOk : kExitSuite;
}

int run_bench(const std::vector<int>& sizes, bool triangle4, const std::string& out_path) {
    std::ostringstream csv;
    if (triangle4) {
        csv << "mask,n,detected,expected\n";
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            std::vector<std::pair<int, int>> e;
            int bit = 0;
            for (int u = 0; u < 4; ++u)
                for (int v = u + 1; v < 4; ++v, ++bit)
                    if (mask >> bit & 1u) e.push_back({u, v});
            const Graph g(4, e);
            const auto rep = detect_triangle(g, TriangleMode::kExactOracle);
            csv << mask << ",4," << (rep.triangle_found ? 1 : 0) << ","
                << (g.has_triangle() ? 1 : 0) << "\n";
        }
    } else {
        csv << "n,model,rounds,max_words,wall_time_ms\n";
        for (int n : sizes) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto loads = verify::batch_transition_loads(n);
            const auto t1 = std::chrono::steady_clock::now();
            const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            csv << n << ",hardcore," << loads.rounds << "," << loads.max_machine_words << ","
                << ms << "\n";
        }
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw IoError("cannot write " + out_path);
        f << csv.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"congested-clique Gibbs sampling and counting"};
    app.require_subcommand(1);

    ModelArgs margs;
    std::string graph_spec = "path:8";
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--model", margs.family, "model family: hardcore|potts|pointer");
        cmd->add_option("--q", margs.q, "color count (potts)");
        cmd->add_option("--lambda", margs.lambda, "fugacity (hardcore)");
        cmd->add_option("--beta", margs.beta, "inverse temperature, number or 'inf'");
        cmd->add_option("--model-config", margs.config_path, "JSON file with model defaults");
        cmd->add_option("--graph", graph_spec,
                        "graph spec (path:n, cycle:n, kN, star:n, empty:n, reg:n:d:seed, "
                        "gnp:n:p:seed, file:PATH) or an edge-list file path");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed = s; seed_given = true; }, "global seed");
    };

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw mixed samples, dump labelings and ledger");
    int chains = 4;
    std::optional<int> t_mix_flag;
    std::optional<double> p_flag;
    std::string sampler = "reference";
    std::string out_samples, out_ledger;
    add_model_flags(sample_cmd);
    sample_cmd->add_option("--chains", chains, "number of samples / chains");
    sample_cmd->add_option("--t-mix", t_mix_flag, "manual transition count");
    sample_cmd->add_option("--p", p_flag, "manual activation probability");
    sample_cmd->add_option("--sampler", sampler, "batch|reference|fast");
    sample_cmd->add_option("--out", out_samples, "samples output file (default stdout)");
    sample_cmd->add_option("--ledger", out_ledger, "ledger CSV output file");

    // count
    auto* count_cmd = app.add_subcommand("count", "estimate a partition function / count");
    EstimateOptions eopts;
    eopts.repetitions = 3; // desk-scale default; estimate_partition itself defaults to 9
    std::string json_path;
    add_model_flags(count_cmd);
    count_cmd->add_option("--eps", eopts.eps, "multiplicative error target");
    count_cmd->add_option("--reps", eopts.repetitions, "median-trick repetitions");
    count_cmd->add_option("--cm", eopts.samples_coeff, "per-term sample coefficient");
    count_cmd->add_flag("--force", eopts.force, "bypass the fast-mixing regime gates");
    count_cmd->add_option("--json", json_path, "write the result record to this JSON file");
    std::optional<int> count_tmix;
    std::optional<double> count_p;
    count_cmd->add_option("--t-mix", count_tmix, "manual transition count");
    count_cmd->add_option("--p", count_p, "manual activation probability");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify::SuiteOptions vopts;
    verify_cmd->add_option("--suite", suite,
                           "all|oracle|gather|tv|contraction|kernel|ledger|triangle|schedule");
    verify_cmd->add_option("--n", vopts.n, "largest instance size");
    verify_cmd->add_option("--seeds", vopts.seeds, "seeds per oracle-equivalence case");
    verify_cmd->add_option("--transitions", vopts.transitions, "transitions per equivalence case");
    verify_cmd->add_option("--samples", vopts.samples, "samples per empirical distribution");
    verify_cmd->add_option("--trials", vopts.trials, "trials per contraction experiment");
    verify_cmd->add_option("--graphs", vopts.random_graphs, "random graphs in the triangle suite");
    verify_cmd->add_option("--tv-tol", vopts.tv_tol, "TV tolerance for the stationarity suite");
    verify_cmd->add_option("--seed", vopts.seed, "suite seed");
    std::string verify_csv;
    verify_cmd->add_option("--csv", verify_csv, "export suite measurement rows to this CSV file");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "communication benchmark sweeps (CSV)");
    std::vector<int> sizes;
    bool triangle4 = false;
    std::string bench_out;
    bench_cmd->add_option("--sizes", sizes, "instance sizes, e.g. --sizes 8 27 64");
    bench_cmd->add_flag("--triangle4", triangle4, "triangle reduction over all 4-vertex graphs");
    bench_cmd->add_option("--out", bench_out, "CSV output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!seed_given) seed = default_seed();
        eopts.seed = seed;
        if (sample_cmd->parsed()) {
            apply_model_config(sample_cmd, margs);
            return run_sample(margs, graph_spec, chains, seed, t_mix_flag, p_flag, sampler,
                              out_samples, out_ledger);
        }
        if (count_cmd->parsed()) {
            apply_model_config(count_cmd, margs, &eopts);
            eopts.t_mix_override = count_tmix;
            eopts.p_override = count_p;
            return run_count(margs, graph_spec, eopts, json_path);
        }
        if (verify_cmd->parsed()) return run_verify(suite, vopts, verify_csv);
        if (bench_cmd->parsed()) return run_bench(sizes, triangle4, bench_out);
    } catch (const RegimeError& ex) {
        std::cerr << "regime error: " << ex.what() << "\n";
        return kExitRegime;
    } catch (const EnumerationCapError& ex) {
        std::cerr << "resource error: " << ex.what() << "\n";
        return kExitRegime;
    } catch (const IoError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitIo;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return kExitOk;
}
