// fraccol: column-generation and branch-and-price experiment harness for
// graph coloring. Subcommands: cg, bnp, collect, train, oracle.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fraccol/bnp.hpp"
#include "fraccol/colgen.hpp"
#include "fraccol/collect.hpp"
#include "fraccol/graph.hpp"
#include "fraccol/mlmodel.hpp"

namespace fs = std::filesystem;
using namespace fraccol;
using nlohmann::ordered_json;

namespace {

struct Manifest {
    std::vector<std::string> graphs;
    std::string seeds = "1..24";
    std::vector<std::string> backends{"mlph"};
    std::string selection = "add_partial";
    int theta = 0;
    int lambda = 0;
    double budget_total = -1.0;
    double budget_pricing = -1.0;
    std::string profile = "ci";
    std::string model_path;
    std::string out_dir = "out";
    std::string dump_lp_path;
    int jobs = 1;
};

uint64_t seed_salt() {
    const char* env = std::getenv("FRACCOL_SEED_SALT");
    if (!env || !*env) return 0;
    return std::strtoull(env, nullptr, 10);
}

std::vector<uint64_t> parse_seeds(const std::string& spec) {
    std::vector<uint64_t> seeds;
    auto pos = spec.find("..");
    try {
        if (pos == std::string::npos) {
            seeds.push_back(std::stoull(spec));
        } else {
            uint64_t lo = std::stoull(spec.substr(0, pos));
            uint64_t hi = std::stoull(spec.substr(pos + 2));
            for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        }
    } catch (const std::exception&) {
        seeds.clear();
    }
    if (seeds.empty())
        throw CLI::ValidationError("--seeds", "empty or malformed seed range: " + spec);
    return seeds;
}

void resolve_budgets(Manifest& m) {
    double total = 60.0, pricing = 5.0;
    if (m.profile == "paper") {
        total = 1800.0;
        pricing = 30.0;
    }
    if (m.budget_total < 0) m.budget_total = total;
    if (m.budget_pricing < 0) m.budget_pricing = pricing;
}

CgConfig make_cg_config(const Manifest& m, const std::string& backend,
                        uint64_t seed) {
    CgConfig cfg;
    auto b = backend_from_string(backend);
    if (!b) throw std::runtime_error("unknown backend: " + backend);
    cfg.backend = *b;
    auto sel = selection_from_string(m.selection);
    if (!sel) throw std::runtime_error("unknown selection: " + m.selection);
    cfg.selection = *sel;
    cfg.theta = m.theta;
    cfg.lambda = m.lambda;
    cfg.cutoff_total = m.budget_total;
    cfg.cutoff_pricing = m.budget_pricing;
    cfg.seed = seed + seed_salt();
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double geomean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += std::log(x);
    return std::exp(acc / double(xs.size()));
}

struct LoadedGraph {
    std::string path;
    std::string error;
    std::shared_ptr<Graph> graph;
};

std::vector<LoadedGraph> load_graphs(const Manifest& m, const fs::path& out) {
    std::vector<LoadedGraph> loaded;
    for (const auto& path : m.graphs) {
        LoadedGraph lg;
        lg.path = path;
        try {
            lg.graph = std::make_shared<Graph>(load_dimacs_file(path));
        } catch (const std::exception& e) {
            lg.error = e.what();
            ordered_json j;
            j["file"] = path;
            j["error"] = lg.error;
            write_file(out / ("error_" + fs::path(path).stem().string() + ".json"),
                       j.dump(2) + "\n");
            std::cerr << "error: " << path << ": " << lg.error << "\n";
        }
        loaded.push_back(std::move(lg));
    }
    return loaded;
}

// Runs `tasks` indexes through `fn` on `jobs` threads; results must be
// written into preallocated slots so the output is independent of scheduling.
void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

int cmd_cg(const Manifest& manifest) {
    Manifest m = manifest;
    resolve_budgets(m);
    fs::path out(m.out_dir);
    fs::create_directories(out);
    auto seeds = parse_seeds(m.seeds);
    auto loaded = load_graphs(m, out);

    SvmModel model = default_svm_model();
    LogisticParams params = default_logistic_params();
    if (!m.model_path.empty())
        std::tie(model, params) = load_model_file(m.model_path);

    struct Task {
        const LoadedGraph* graph;
        std::string backend;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& lg : loaded) {
        if (!lg.graph) continue;
        for (const auto& backend : m.backends)
            for (uint64_t seed : seeds) tasks.push_back({&lg, backend, seed});
    }

    struct RunResult {
        std::string record;
        std::string status;
        double objective = 0.0;
        double wall = 0.0;
        std::string error;
    };
    std::vector<RunResult> results(tasks.size());

    parallel_for(tasks.size(), m.jobs, [&](size_t i) {
        const Task& t = tasks[i];
        RunResult& r = results[i];
        try {
            CgConfig cfg = make_cg_config(m, t.backend, t.seed);
            auto [state, stats] = run_cg(*t.graph->graph, cfg, &model, &params);
            r.status = to_string(stats.status);
            r.objective = state->objective();
            r.wall = stats.wall_time;
            std::ostringstream rec;
            write_cg_record(rec, t.graph->graph->name(), t.seed, cfg,
                            r.objective, stats);
            r.record = rec.str();
            if (!m.dump_lp_path.empty()) {
                std::ofstream dump(m.dump_lp_path + "." +
                                   t.graph->graph->name() + ".s" +
                                   std::to_string(t.seed) + ".lp");
                state->dump_lp(dump);
            }
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });

    // Per-run records, written in task order.
    for (size_t i = 0; i < tasks.size(); ++i) {
        const Task& t = tasks[i];
        std::string stem = t.graph->graph->name() + "_" + t.backend + "_" +
                           m.selection + "_s" + std::to_string(t.seed);
        if (!results[i].error.empty()) {
            ordered_json j;
            j["graph"] = t.graph->graph->name();
            j["seed"] = t.seed;
            j["error"] = results[i].error;
            write_file(out / ("error_cg_" + stem + ".json"), j.dump(2) + "\n");
            continue;
        }
        write_file(out / ("cg_" + stem + ".json"), results[i].record);
    }

    // Aggregate CSV, one row per (graph, backend).
    std::ostringstream csv;
    csv << "graph,backend,solved_count,geomean_objective,geomean_time_s\n";
    for (const auto& lg : loaded) {
        if (!lg.graph) continue;
        for (const auto& backend : m.backends) {
            int solved = 0;
            std::vector<double> objectives, times;
            for (size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].graph != &lg || tasks[i].backend != backend)
                    continue;
                if (!results[i].error.empty()) continue;
                if (results[i].status == "optimal") ++solved;
                objectives.push_back(results[i].objective);
                times.push_back(std::max(results[i].wall, 0.01));
            }
            csv << lg.graph->name() << ',' << backend << ',' << solved << ','
                << format_double(geomean(objectives)) << ','
                << format_double(geomean(times)) << '\n';
        }
    }
    write_file(out / "cg_aggregate.csv", csv.str());
    std::cout << "cg: " << tasks.size() << " runs -> " << out.string() << "\n";
    return 0;
}

int cmd_bnp(const Manifest& manifest) {
    Manifest m = manifest;
    resolve_budgets(m);
    fs::path out(m.out_dir);
    fs::create_directories(out);
    auto seeds = parse_seeds(m.seeds);
    auto loaded = load_graphs(m, out);

    SvmModel model = default_svm_model();
    LogisticParams params = default_logistic_params();
    if (!m.model_path.empty())
        std::tie(model, params) = load_model_file(m.model_path);

    struct Task {
        const LoadedGraph* graph;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& lg : loaded) {
        if (!lg.graph) continue;
        for (uint64_t seed : seeds) tasks.push_back({&lg, seed});
    }

    struct RunResult {
        std::string record;
        std::string status;
        double gap = 0.0;
        std::string error;
    };
    std::vector<RunResult> results(tasks.size());
    const std::string backend = m.backends.empty() ? "mlph" : m.backends[0];

    parallel_for(tasks.size(), m.jobs, [&](size_t i) {
        const Task& t = tasks[i];
        RunResult& r = results[i];
        try {
            BnpConfig cfg;
            cfg.cg = make_cg_config(m, backend, t.seed);
            cfg.cg.lambda = m.lambda;  // 0 = 10n at the root
            cfg.node_cutoff = m.budget_total / 4;
            cfg.total_cutoff = m.budget_total;
            BnpStats stats = run_bnp(*t.graph->graph, cfg, &model, &params);
            r.status = to_string(stats.status);
            r.gap = stats.gap_pct;
            std::ostringstream rec;
            write_bnp_record(rec, t.graph->graph->name(), t.seed, stats);
            r.record = rec.str();
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });

    for (size_t i = 0; i < tasks.size(); ++i) {
        const Task& t = tasks[i];
        std::string stem =
            t.graph->graph->name() + "_s" + std::to_string(t.seed);
        if (!results[i].error.empty()) {
            ordered_json j;
            j["graph"] = t.graph->graph->name();
            j["seed"] = t.seed;
            j["error"] = results[i].error;
            write_file(out / ("error_bnp_" + stem + ".json"), j.dump(2) + "\n");
            continue;
        }
        write_file(out / ("bnp_" + stem + ".json"), results[i].record);
    }

    // Gap curve: for each threshold, the number of runs with a reported gap
    // at or below it; root-unsolved runs are excluded.
    std::ostringstream csv;
    csv << "threshold,runs_within\n";
    for (int thr = 0; thr <= 50; ++thr) {
        int count = 0;
        for (const auto& r : results) {
            if (!r.error.empty() || r.status == "root_unsolved") continue;
            if (r.gap <= double(thr) + 1e-9) ++count;
        }
        csv << thr << ',' << count << '\n';
    }
    write_file(out / "bnp_gap_curve.csv", csv.str());
    std::cout << "bnp: " << tasks.size() << " runs -> " << out.string() << "\n";
    return 0;
}

int cmd_collect(const Manifest& manifest) {
    Manifest m = manifest;
    resolve_budgets(m);
    fs::path out(m.out_dir);
    fs::create_directories(out);
    auto seeds = parse_seeds(m.seeds);
    auto loaded = load_graphs(m, out);

    TrainingSet all;
    int skipped = 0;
    for (const auto& lg : loaded) {
        if (!lg.graph) continue;
        for (uint64_t seed : seeds) {
            CgConfig cfg = make_cg_config(m, "exact", seed);
            Rng rng(mix_seed(cfg.seed, 0));
            int count = 10 * lg.graph->num_vertices();
            CgDriver driver(*lg.graph, cfg, nullptr, nullptr,
                            initial_columns(*lg.graph, count, rng));
            CollectConfig cc;
            cc.exact_budget = m.budget_pricing;
            cc.seed = cfg.seed;
            CollectOutcome outcome = collect_training_data(driver, cc);
            skipped += outcome.skipped;
            for (auto& row : outcome.data.rows) all.rows.push_back(std::move(row));
        }
    }
    std::ostringstream csv;
    save_training_csv(all, csv);
    write_file(out / "training.csv", csv.str());
    std::cout << "collect: " << all.rows.size() << " rows";
    if (skipped) std::cout << " (" << skipped << " iterations skipped: exact budget)";
    std::cout << " -> " << (out / "training.csv").string() << "\n";
    return 0;
}

int cmd_train(const std::string& data_path, const Manifest& manifest,
              double C, int epochs, uint64_t seed) {
    fs::path out(manifest.out_dir);
    fs::create_directories(out);
    std::ifstream in(data_path);
    if (!in) {
        std::cerr << "error: cannot open " << data_path << "\n";
        return 1;
    }
    TrainingSet data = load_training_csv(in);
    SvmTrainConfig cfg{C, epochs, seed + seed_salt()};
    SvmTrainReport report;
    SvmModel model = train_svm(data, cfg, &report);

    std::ostringstream model_out;
    save_model(model, default_logistic_params(), model_out);
    write_file(out / "model.json", model_out.str());

    ordered_json rep;
    rep["rows"] = data.rows.size();
    rep["accuracy"] = report.accuracy;
    rep["positive_hinge"] = report.positive_hinge;
    rep["negative_hinge"] = report.negative_hinge;
    rep["objective"] = report.objective;
    write_file(out / "train_report.json", rep.dump(2) + "\n");
    std::cout << "train: accuracy " << report.accuracy << " -> "
              << (out / "model.json").string() << "\n";
    return 0;
}

int cmd_oracle(const Manifest& manifest) {
    Manifest m = manifest;
    fs::path out(m.out_dir);
    fs::create_directories(out);
    auto loaded = load_graphs(m, out);
    for (const auto& lg : loaded) {
        if (!lg.graph) continue;
        const Graph& g = *lg.graph;
        ordered_json j;
        j["graph"] = g.name();
        j["n"] = g.num_vertices();
        j["m"] = g.num_edges();
        try {
            auto sets = enumerate_maximal_independent_sets(g);
            std::vector<Column> cols;
            for (auto& s : sets) cols.push_back(make_column(g, std::move(s)));
            RmpState state = build_rmp(g, std::move(cols));
            WorkClock clock;
            state.solve(clock);
            j["mis_count"] = sets.size();
            j["lp_objective"] = state.objective();
            std::cout << g.name() << ": chi_f = " << state.objective() << " over "
                      << sets.size() << " maximal independent sets\n";
        } catch (const std::exception& e) {
            j["error"] = e.what();
            std::cerr << g.name() << ": " << e.what() << "\n";
        }
        write_file(out / ("oracle_" + g.name() + ".json"), j.dump(2) + "\n");
    }
    return 0;
}

void add_common_options(CLI::App* cmd, Manifest& m, bool with_backend = true) {
    cmd->add_option("--graphs", m.graphs, "DIMACS .col files")->required();
    cmd->add_option("--seeds", m.seeds, "seed range A..B (default 1..24)");
    if (with_backend)
        cmd->add_option("--backend", m.backends,
                        "pricing backend(s): mlph|greedy|aco|exact");
    cmd->add_option("--selection", m.selection,
                    "column selection: add_all|add_partial|replace_existing");
    cmd->add_option("--theta", m.theta, "add_partial column limit (0 = n)");
    cmd->add_option("--lambda", m.lambda, "MLPH sample count (0 = default)");
    cmd->add_option("--budget-total", m.budget_total,
                    "total budget in work-clock seconds");
    cmd->add_option("--budget-pricing", m.budget_pricing,
                    "per-pricing budget in work-clock seconds");
    cmd->add_option("--profile", m.profile, "budget profile: ci|paper")
        ->check(CLI::IsMember({"ci", "paper"}));
    cmd->add_option("--model", m.model_path, "model JSON (default: shipped)");
    cmd->add_option("--out", m.out_dir, "output directory");
    cmd->add_option("--jobs", m.jobs, "parallel runs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"column generation and branch-and-price for graph coloring"};
    app.require_subcommand(1);

    Manifest m;
    std::string train_data;
    double train_C = 1.0;
    int train_epochs = 200;
    uint64_t train_seed = 1;

    auto* cg = app.add_subcommand("cg", "batch CG runs with aggregate CSV");
    add_common_options(cg, m);
    cg->add_option("--dump-lp", m.dump_lp_path,
                   "debug: dump final RMPs as CPLEX-LP text");

    auto* bnp = app.add_subcommand("bnp", "branch-and-price runs + gap curve");
    add_common_options(bnp, m);

    auto* collect = app.add_subcommand(
        "collect", "record exactly solved pricing problems as training data");
    add_common_options(collect, m, false);

    auto* train = app.add_subcommand("train", "train the linear SVM scorer");
    train->add_option("--data", train_data, "training CSV")->required();
    train->add_option("--C", train_C, "hinge cost");
    train->add_option("--epochs", train_epochs, "training epochs");
    train->add_option("--seed", train_seed, "training seed");
    train->add_option("--out", m.out_dir, "output directory");

    auto* oracle = app.add_subcommand(
        "oracle", "full MIS enumeration LP objective (small graphs)");
    oracle->add_option("--graphs", m.graphs, "DIMACS .col files")->required();
    oracle->add_option("--out", m.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cg->parsed()) return cmd_cg(m);
        if (bnp->parsed()) return cmd_bnp(m);
        if (collect->parsed()) return cmd_collect(m);
        if (train->parsed())
            return cmd_train(train_data, m, train_C, train_epochs, train_seed);
        if (oracle->parsed()) return cmd_oracle(m);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
