// subdiff command-line front end: certify / project / simulate / spread /
// greedy / multi / falsify over a JSON network file. Reports are JSON on
// stdout (or --out), with a short human summary on stderr.
//
// Exit codes: 0 success, 1 domain error (non-convergence, infeasibility
// where feasibility is required), 2 input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subdiff/certify.hpp"
#include "subdiff/maximize.hpp"
#include "subdiff/model.hpp"
#include "subdiff/project.hpp"
#include "subdiff/rng.hpp"
#include "subdiff/simulate.hpp"

namespace {

using json = nlohmann::json;
using namespace subdiff;

constexpr const char* kVersion = "0.1.0";

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

json names_of(const Network& net, const VertexSet& set) {
    json arr = json::array();
    for (int v : set) arr.push_back(net.names[v]);
    return arr;
}

void emit(const json& report, const std::string& out_path, double wall_ms,
          const std::string& summary) {
    json doc;
    doc["report"] = report;
    doc["metadata"] = {{"wall_clock_ms", wall_ms}};
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot write output file: " + out_path);
        f << text;
    }
    std::cerr << summary << "\n";
}

json certificate_json(const Network& net, const ModelCertificate& mc) {
    json vertices = json::object();
    for (int v = 0; v < net.vertex_count(); ++v) {
        const auto& c = mc.vertices[v];
        json entry;
        entry["feasible"] = c.feasible;
        entry["residual"] = c.residual;
        json parents = json::array();
        for (int u : net.parents[v]) parents.push_back(net.names[u]);
        entry["parents"] = std::move(parents);
        if (c.feasible) {
            entry["b"] = c.b;
        } else {
            entry["witness_pattern"] = c.witness_pattern;
            entry["witness_value"] = c.witness_value;
        }
        vertices[net.names[v]] = std::move(entry);
    }
    return {{"feasible", mc.feasible}, {"eps", mc.eps}, {"vertices", vertices}};
}

struct CommonOpts {
    std::string network_path;
    std::string out_path;
    std::string seeds_csv;
    std::vector<std::string> typed_seeds{4};
    std::int64_t samples = 10000;
    std::int64_t sim_samples = 1;
    std::int64_t falsify_samples = 1000;
    std::uint64_t rng_seed = 0;
    double tol = kDefaultProjectionTol;
    double eps = kDefaultFeasibilityTol;
    int budget = 1;
    int workers = 1;
    int max_iter = kDefaultProjectionMaxIter;
    int k = 3;
    std::string estimator = "exact";
    std::string engine = "plmmi";
    std::string tie_rule = "lowest-type-index";
    std::string emit_network;
    bool exact = false;
    bool no_lazy = false;
    bool opt_check = false;
    bool strict_normalization = false;
};

json config_echo(const std::string& command, const CommonOpts& o) {
    json cfg{{"command", command}};
    if (!o.network_path.empty()) cfg["network"] = o.network_path;
    cfg["rng_seed"] = o.rng_seed;
    return cfg;
}

std::vector<VertexSet> typed_seed_sets(const Network& net, const CommonOpts& o) {
    std::vector<VertexSet> seeds;
    int last = 0;
    for (std::size_t n = 0; n < o.typed_seeds.size(); ++n)
        if (!o.typed_seeds[n].empty()) last = static_cast<int>(n) + 1;
    for (int n = 0; n < last; ++n)
        seeds.push_back(seed_set(net, split_csv(o.typed_seeds[n])));
    if (seeds.empty()) throw std::invalid_argument("no per-type seed sets given");
    return seeds;
}

void check_strict_normalization(const Network& net) {
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (!net.multi[v]) continue;
        double total = 0.0;
        for (const auto& wu : net.multi[v]->w)
            for (double x : wu) total += x;
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("vertex '" + net.names[v] +
                                        "': weights do not sum to 1 "
                                        "(strict normalization requested)");
    }
}

int run_certify(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    Network net = load_network_file(o.network_path);
    ModelCertificate mc = certify_model(net, o.eps);
    json report = certificate_json(net, mc);
    report["version"] = kVersion;
    report["config"] = config_echo("certify", o);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    emit(report, o.out_path, ms,
         std::string("certify: model is ") + (mc.feasible ? "feasible" : "infeasible"));
    return 0;
}

int run_project(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    Network net = load_network_file(o.network_path);
    ModelProjection proj = project_model(net, o.tol, o.max_iter);
    json vertices = json::object();
    double total_objective = 0.0;
    int replaced = 0;
    for (int v = 0; v < net.vertex_count(); ++v) {
        const auto& r = proj.per_vertex[v];
        double max_delta = 0.0;
        for (std::size_t i = 0; i < r.a_star.a.size(); ++i)
            max_delta = std::max(max_delta, std::abs(r.a_star.a[i] - net.tables[v].a[i]));
        vertices[net.names[v]] = {{"objective", r.objective},
                                  {"iterations", r.iterations},
                                  {"converged", r.converged},
                                  {"max_entry_delta", max_delta}};
        total_objective += r.objective;
        if (r.objective > 0.0) ++replaced;
    }
    json report{{"vertices", vertices},
                {"total_objective", total_objective},
                {"replaced_vertices", replaced},
                {"converged", proj.converged},
                {"tol", o.tol},
                {"version", kVersion},
                {"config", config_echo("project", o)}};
    if (!o.emit_network.empty()) {
        std::ofstream f(o.emit_network);
        if (!f) throw std::invalid_argument("cannot write network file: " + o.emit_network);
        f << serialize_network(proj.net);
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    std::ostringstream sum;
    sum << "project: replaced " << replaced << " vertex tables, total objective "
        << total_objective;
    emit(report, o.out_path, ms, sum.str());
    if (!proj.converged) throw DomainError("projection did not converge at every vertex");
    return 0;
}

int run_simulate(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    Network net = load_network_file(o.network_path);
    VertexSet seeds = seed_set(net, split_csv(o.seeds_csv));
    json report{{"version", kVersion},
                {"config", config_echo("simulate", o)},
                {"seeds", names_of(net, seeds)},
                {"samples", o.sim_samples},
                {"rng_seed", o.rng_seed},
                {"workers", o.workers}};
    std::ostringstream sum;
    if (o.sim_samples <= 1) {
        VertexSet activated = simulate_once(net, seeds, o.rng_seed);
        report["activated"] = names_of(net, activated);
        sum << "simulate: " << activated.size() << " vertices activated";
    } else {
        SpreadEstimate est =
            estimate_spread(net, seeds, o.sim_samples, o.rng_seed, o.workers);
        report["mean"] = est.mean;
        report["stderr"] = est.stderr_;
        sum << "simulate: mean spread " << est.mean << " +- " << est.stderr_;
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    emit(report, o.out_path, ms, sum.str());
    return 0;
}

int run_spread(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    Network net = load_network_file(o.network_path);
    VertexSet seeds = seed_set(net, split_csv(o.seeds_csv));
    json report{{"version", kVersion},
                {"config", config_echo("spread", o)},
                {"seeds", names_of(net, seeds)}};
    std::ostringstream sum;
    if (o.exact) {
        double mean = exact_spread(net, seeds);
        report["mean"] = mean;
        report["exact"] = true;
        sum << "spread (exact): " << mean;
    } else {
        SpreadEstimate est = estimate_spread(net, seeds, o.samples, o.rng_seed, o.workers);
        report["mean"] = est.mean;
        report["stderr"] = est.stderr_;
        report["samples"] = o.samples;
        report["rng_seed"] = o.rng_seed;
        report["workers"] = o.workers;
        sum << "spread: " << est.mean << " +- " << est.stderr_;
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    emit(report, o.out_path, ms, sum.str());
    return 0;
}

int run_greedy(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    Network net = load_network_file(o.network_path);
    Estimator est;
    if (o.estimator == "exact") {
        est.kind = Estimator::Kind::Exact;
    } else if (o.estimator == "mc") {
        est.kind = Estimator::Kind::MonteCarlo;
        est.samples = o.samples;
        est.rng_seed = o.rng_seed;
        est.workers = o.workers;
    } else {
        throw std::invalid_argument("estimator must be 'exact' or 'mc'");
    }
    GreedyTrace trace = greedy_select(net, o.budget, est, !o.no_lazy);
    bool certified = certify_model(net).feasible;

    json chosen = json::array();
    for (int v : trace.chosen) chosen.push_back(net.names[v]);
    json guarantee{{"certified", certified}};
    if (o.opt_check && est.kind == Estimator::Kind::Exact) {
        OptResult opt = brute_force_opt(net, o.budget);
        double greedy_spread = 0.0;
        for (double g : trace.marginal_gains) greedy_spread += g;
        guarantee["opt_spread"] = opt.spread;
        guarantee["ratio_vs_opt"] = opt.spread > 0.0 ? greedy_spread / opt.spread : 1.0;
    }
    json report{{"chosen", chosen},
                {"marginal_gains", trace.marginal_gains},
                {"evaluations", trace.evaluations},
                {"estimator",
                 {{"kind", o.estimator},
                  {"samples", o.samples},
                  {"rng_seed", o.rng_seed},
                  {"workers", o.workers}}},
                {"guarantee", guarantee},
                {"version", kVersion},
                {"config", config_echo("greedy", o)}};
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    std::ostringstream sum;
    sum << "greedy: chose " << trace.chosen.size() << " seeds with "
        << trace.evaluations << " evaluations";
    emit(report, o.out_path, ms, sum.str());
    return 0;
}

int run_multi(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    Network net = load_network_file(o.network_path);
    if (o.strict_normalization) check_strict_normalization(net);
    std::vector<VertexSet> seeds = typed_seed_sets(net, o);
    TieRule rule = o.tie_rule == "highest-weight" ? TieRule::HighestWeight
                                                  : TieRule::LowestTypeIndex;
    if (o.tie_rule != "highest-weight" && o.tie_rule != "lowest-type-index")
        throw std::invalid_argument("tie rule must be lowest-type-index or highest-weight");

    json report{{"version", kVersion},
                {"config", config_echo("multi", o)},
                {"engine", o.engine},
                {"rng_seed", o.rng_seed},
                {"samples", o.samples}};
    json seed_names = json::array();
    for (const auto& s : seeds) seed_names.push_back(names_of(net, s));
    report["seeds"] = std::move(seed_names);

    const int n_types = std::max(plmmi_type_count(net), static_cast<int>(seeds.size()));
    std::ostringstream sum;
    if (o.exact) {
        auto dist = o.engine == "cltm" ? exact_cltm_distribution(net, seeds, rule)
                                       : exact_multi_distribution(net, seeds);
        json entries = json::array();
        const int base = n_types + 1;
        for (const auto& [code, prob] : dist) {
            if (prob < 1e-15) continue;
            json labels = json::array();
            std::uint64_t c = code;
            for (int v = 0; v < net.vertex_count(); ++v) {
                labels.push_back(static_cast<int>(c % base));
                c /= base;
            }
            entries.push_back({{"labels", labels}, {"probability", prob}});
        }
        report["distribution"] = std::move(entries);
        sum << "multi (exact " << o.engine << "): " << dist.size() << " outcomes";
    } else {
        std::vector<std::vector<std::int64_t>> counts(
            net.vertex_count(), std::vector<std::int64_t>(n_types + 1, 0));
        for (std::int64_t j = 0; j < o.samples; ++j) {
            std::uint64_t s = rng::mix(o.rng_seed, static_cast<std::uint64_t>(j));
            MultiState labels = o.engine == "cltm" ? simulate_cltm(net, seeds, s, rule)
                                                   : simulate_multi(net, seeds, s);
            for (int v = 0; v < net.vertex_count(); ++v) ++counts[v][labels[v]];
        }
        json freq = json::object();
        for (int v = 0; v < net.vertex_count(); ++v) {
            json f = json::array();
            for (std::int64_t c : counts[v])
                f.push_back(static_cast<double>(c) / static_cast<double>(o.samples));
            freq[net.names[v]] = std::move(f);
        }
        report["label_frequencies"] = std::move(freq);
        sum << "multi (" << o.engine << "): " << o.samples << " samples";
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    emit(report, o.out_path, ms, sum.str());
    return 0;
}

int run_falsify(const CommonOpts& o) {
    auto t0 = std::chrono::steady_clock::now();
    auto divergences =
        falsify_equivalence(o.k, static_cast<int>(o.falsify_samples), o.rng_seed);
    json list = json::array();
    for (const auto& t : divergences) {
        CoverageCertificate cert = certify_vertex(t);
        list.push_back({{"a", t.a},
                        {"witness_pattern", cert.witness_pattern},
                        {"witness_value", cert.witness_value}});
    }
    json report{{"k", o.k},
                {"samples", o.falsify_samples},
                {"rng_seed", o.rng_seed},
                {"divergences", list},
                {"note",
                 "tables passing the per-vertex diminishing-returns check but "
                 "lacking a coverage representation; reported as data"},
                {"version", kVersion},
                {"config", config_echo("falsify", o)}};
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
    std::ostringstream sum;
    sum << "falsify: k=" << o.k << ", " << divergences.size() << " divergent tables";
    emit(report, o.out_path, ms, sum.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"submodularity certification, projection and influence toolkit"};
    app.require_subcommand(1);
    CommonOpts o;

    auto add_common = [&](CLI::App* cmd, bool needs_network = true) {
        if (needs_network)
            cmd->add_option("network", o.network_path, "network JSON file")->required();
        cmd->add_option("--out", o.out_path, "write the JSON report to this file");
        cmd->add_option("--rng-seed", o.rng_seed, "random seed");
    };

    auto* certify = app.add_subcommand("certify", "coverage-certify every vertex");
    add_common(certify);
    certify->add_option("--eps", o.eps, "feasibility tolerance");

    auto* project = app.add_subcommand("project", "project onto the submodular class");
    add_common(project);
    project->add_option("--tol", o.tol, "solver tolerance");
    project->add_option("--max-iter", o.max_iter, "iteration cap");
    project->add_option("--emit-network", o.emit_network,
                        "write the projected network to this file");

    auto* simulate = app.add_subcommand("simulate", "run propagations");
    add_common(simulate);
    simulate->add_option("--seeds", o.seeds_csv, "comma-separated seed vertices")
        ->required();
    simulate->add_option("--samples", o.sim_samples, "number of runs (default 1)");
    simulate->add_option("--workers", o.workers, "worker threads");

    auto* spread = app.add_subcommand("spread", "estimate the expected spread");
    add_common(spread);
    spread->add_option("--seeds", o.seeds_csv, "comma-separated seed vertices")->required();
    spread->add_option("--samples", o.samples, "Monte Carlo sample budget");
    spread->add_option("--workers", o.workers, "worker threads");
    spread->add_flag("--exact", o.exact, "exact enumeration instead of sampling");

    auto* greedy = app.add_subcommand("greedy", "greedy influence maximization");
    add_common(greedy);
    greedy->add_option("--budget", o.budget, "seed budget K")->required();
    greedy->add_option("--estimator", o.estimator, "exact | mc");
    greedy->add_option("--samples", o.samples, "Monte Carlo sample budget");
    greedy->add_option("--workers", o.workers, "worker threads");
    greedy->add_flag("--no-lazy", o.no_lazy, "disable lazy re-evaluation");
    greedy->add_flag("--opt-check", o.opt_check, "compare against the brute-force optimum");

    auto* multi = app.add_subcommand("multi", "multi-information propagation");
    add_common(multi);
    multi->add_option("--seeds-type-1", o.typed_seeds[0], "seeds for information type 1");
    multi->add_option("--seeds-type-2", o.typed_seeds[1], "seeds for information type 2");
    multi->add_option("--seeds-type-3", o.typed_seeds[2], "seeds for information type 3");
    multi->add_option("--seeds-type-4", o.typed_seeds[3], "seeds for information type 4");
    multi->add_option("--samples", o.samples, "number of sampled runs");
    multi->add_option("--engine", o.engine, "plmmi | cltm");
    multi->add_option("--tie-rule", o.tie_rule, "lowest-type-index | highest-weight");
    multi->add_flag("--exact", o.exact, "exact label distribution");
    multi->add_flag("--strict-normalization", o.strict_normalization,
                    "require per-vertex weights to sum to exactly 1");

    auto* falsify = app.add_subcommand("falsify", "probe the equivalence of the checks");
    add_common(falsify, false);
    falsify->add_option("--k", o.k, "parent count (2..6)");
    falsify->add_option("--samples", o.falsify_samples, "random tables to draw");

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) return run_certify(o);
        if (project->parsed()) return run_project(o);
        if (simulate->parsed()) return run_simulate(o);
        if (spread->parsed()) return run_spread(o);
        if (greedy->parsed()) return run_greedy(o);
        if (multi->parsed()) return run_multi(o);
        if (falsify->parsed()) return run_falsify(o);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
