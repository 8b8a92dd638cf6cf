#include "fraccol/colgen.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

namespace fraccol {

const char* to_string(PricingBackend b) {
    switch (b) {
        case PricingBackend::Mlph: return "mlph";
        case PricingBackend::Greedy: return "greedy";
        case PricingBackend::Aco: return "aco";
        case PricingBackend::Exact: return "exact";
    }
    return "?";
}

const char* to_string(SelectionStrategy s) {
    switch (s) {
        case SelectionStrategy::AddAll: return "add_all";
        case SelectionStrategy::AddPartial: return "add_partial";
        case SelectionStrategy::ReplaceExisting: return "replace_existing";
    }
    return "?";
}

const char* to_string(CgStatus s) {
    switch (s) {
        case CgStatus::Optimal: return "optimal";
        case CgStatus::TimeLimit: return "time_limit";
        case CgStatus::Stalled: return "stalled";
    }
    return "?";
}

std::optional<PricingBackend> backend_from_string(const std::string& s) {
    if (s == "mlph") return PricingBackend::Mlph;
    if (s == "greedy") return PricingBackend::Greedy;
    if (s == "aco") return PricingBackend::Aco;
    if (s == "exact") return PricingBackend::Exact;
    return std::nullopt;
}

std::optional<SelectionStrategy> selection_from_string(const std::string& s) {
    if (s == "add_all") return SelectionStrategy::AddAll;
    if (s == "add_partial") return SelectionStrategy::AddPartial;
    if (s == "replace_existing") return SelectionStrategy::ReplaceExisting;
    return std::nullopt;
}

std::vector<Column> initial_columns(const Graph& g, int count, Rng& rng) {
    if (count < 1)
        throw std::invalid_argument("initial_columns: count must be >= 1");
    std::vector<Column> pool;
    Bitset covered(g.num_vertices());
    for (auto& s : sample_uniform_mis(g, count, rng)) {
        for (int v : s.members) covered.set(v);
        Column c;
        c.set = std::move(s);
        pool.push_back(std::move(c));
    }
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (covered.test(v)) continue;
        Column c;
        c.set = extend_to_maximal_lowest(g, VertexSet({v}));
        for (int u : c.set.members) covered.set(u);
        pool.push_back(std::move(c));
    }
    return pool;
}

PoolUpdatePlan select_columns(SelectionStrategy strategy,
                              const RmpState& current,
                              const PricingResult& found, int theta,
                              int capacity) {
    PoolUpdatePlan plan;
    switch (strategy) {
        case SelectionStrategy::AddAll:
            plan.add = found.columns;
            return plan;
        case SelectionStrategy::AddPartial: {
            int take = std::min<int>(theta, int(found.columns.size()));
            if (theta < 1)
                throw std::invalid_argument("add_partial requires theta >= 1");
            plan.add.assign(found.columns.begin(),
                            found.columns.begin() + take);
            return plan;
        }
        case SelectionStrategy::ReplaceExisting: break;
    }
    if (capacity < 1)
        throw std::invalid_argument("replace_existing requires capacity >= 1");

    plan.replace = true;
    const int n = current.graph().num_vertices();
    std::vector<int> entry_count(n, 0);
    std::vector<VertexSet> admitted_sets;

    // Columns carrying the current optimum are mandatory; they occupy every
    // entry of their member vertices.
    const auto& pool = current.columns();
    const auto& primal = current.primal();
    std::vector<const Column*> scan_old;
    for (size_t j = 0; j < pool.size(); ++j) {
        if (primal[j] > 1e-9) {
            plan.keep_ids.push_back(pool[j].id);
            admitted_sets.push_back(pool[j].set);
            for (int v : pool[j].set.members) ++entry_count[v];
        } else {
            scan_old.push_back(&pool[j]);
        }
    }

    // Remaining current columns and the new ones compete by reduced cost; a
    // column is admitted into the lowest-index member entry with spare
    // capacity.
    struct Scanned {
        const Column* col;
        bool is_new;
    };
    std::vector<Scanned> scan;
    for (const Column* c : scan_old) scan.push_back({c, false});
    for (const auto& c : found.columns) scan.push_back({&c, true});
    std::stable_sort(scan.begin(), scan.end(),
                     [](const Scanned& a, const Scanned& b) {
                         if (a.col->reduced_cost != b.col->reduced_cost)
                             return a.col->reduced_cost < b.col->reduced_cost;
                         return a.col->set < b.col->set;
                     });
    for (const auto& [col, is_new] : scan) {
        bool dup = false;
        for (const auto& s : admitted_sets)
            if (s == col->set) { dup = true; break; }
        if (dup) continue;
        int slot = -1;
        for (int v : col->set.members)
            if (entry_count[v] < capacity) { slot = v; break; }
        if (slot < 0) continue;
        ++entry_count[slot];
        admitted_sets.push_back(col->set);
        if (is_new)
            plan.new_columns.push_back(*col);
        else
            plan.keep_ids.push_back(col->id);
    }
    return plan;
}

void apply_plan(RmpState& state, const PoolUpdatePlan& plan) {
    if (plan.replace)
        state.replace_columns(plan.keep_ids, plan.new_columns);
    else
        state.add_columns(plan.add);
}

CgDriver::CgDriver(const Graph& g, const CgConfig& config,
                   const SvmModel* model, const LogisticParams* params,
                   std::vector<Column> pool, WorkClock* shared_clock)
    : graph_(&g), config_(config), model_(model), params_(params) {
    if (config_.backend == PricingBackend::Mlph && (!model_ || !params_))
        throw std::invalid_argument("mlph backend requires a model");
    if (config_.theta == 0) config_.theta = g.num_vertices();
    if (config_.lambda == 0) config_.lambda = 50 * g.num_vertices();
    clock_ = shared_clock ? shared_clock : &own_clock_;
    start_time_ = clock_->seconds();
    rmp_ = std::make_unique<RmpState>(build_rmp(g, std::move(pool)));
}

PricingResult CgDriver::price_backend(uint64_t seed) {
    PricingProblem p{graph_, rmp_->duals(), -1e-6};
    switch (config_.backend) {
        case PricingBackend::Mlph:
            return mlph_price(p, *model_, *params_, config_.lambda, seed,
                              *clock_);
        case PricingBackend::Greedy:
            return greedy_price(p, *clock_);
        case PricingBackend::Aco: {
            AcoConfig ac;
            ac.seed = seed;
            return aco_price(p, ac, *clock_);
        }
        case PricingBackend::Exact:
            return exact_price(p, *clock_, config_.cutoff_pricing);
    }
    throw std::logic_error("unknown backend");
}

void CgDriver::finish(CgStatus status) {
    stats_.status = status;
    stats_.wall_time = clock_->seconds() - start_time_;
}

void CgDriver::ensure_initial_solve() {
    if (first_solve_done_) return;
    rmp_->solve(*clock_);
    stats_.objective_trace.push_back(rmp_->objective());
    last_objective_ = rmp_->objective();
    first_solve_done_ = true;
}

CgDriver::Step CgDriver::step() {
    ensure_initial_solve();
    if (config_.cutoff_total > 0 &&
        clock_->seconds() - start_time_ >= config_.cutoff_total) {
        finish(CgStatus::TimeLimit);
        return Step::TimeLimit;
    }

    uint64_t iter_seed = mix_seed(config_.seed, 1000 + uint64_t(stats_.iterations));
    bool ran_exact = force_exact_ || config_.backend == PricingBackend::Exact;
    force_exact_ = false;
    PricingProblem problem{graph_, rmp_->duals(), -1e-6};
    PricingResult found =
        ran_exact ? exact_price(problem, *clock_, config_.cutoff_pricing)
                  : price_backend(iter_seed);

    // Exact fallback doubles as the optimality certifier.
    if (found.columns.empty() && !ran_exact) {
        found = exact_price(problem, *clock_, config_.cutoff_pricing);
        ran_exact = true;
    }
    stats_.nrc_counts.push_back(int(found.columns.size()));
    stats_.best_rc_trace.push_back(found.best_reduced_cost);

    if (ran_exact && found.proven_optimal) {
        double obj = rmp_->objective();
        double farley = found.best_reduced_cost < 0
                            ? obj / (1.0 - found.best_reduced_cost)
                            : obj;
        if (!stats_.has_lagrangian_bound || farley > stats_.lagrangian_bound) {
            stats_.lagrangian_bound = farley;
            stats_.has_lagrangian_bound = true;
        }
        if (found.best_reduced_cost >= -1e-6) {
            ++stats_.iterations;
            finish(CgStatus::Optimal);
            return Step::Optimal;
        }
        if (config_.farley_early_stop &&
            std::ceil(farley - 1e-6) == std::ceil(obj - 1e-6)) {
            ++stats_.iterations;
            stats_.early_stopped = true;
            finish(CgStatus::Stalled);
            return Step::EarlyBound;
        }
    }

    if (found.columns.empty()) {
        // Heuristic found nothing and exact could not certify within budget.
        ++stats_.iterations;
        finish(CgStatus::Stalled);
        return Step::Stalled;
    }

    PoolUpdatePlan plan = select_columns(config_.selection, *rmp_, found,
                                         config_.theta,
                                         config_.replace_capacity);
    size_t before = rmp_->columns().size();
    apply_plan(*rmp_, plan);
    bool admitted_new = plan.replace ? !plan.new_columns.empty()
                                     : rmp_->columns().size() > before;
    rmp_->solve(*clock_);
    ++stats_.iterations;
    stats_.objective_trace.push_back(rmp_->objective());

    if (!admitted_new) {
        // Every priced column was already pooled; force certification next
        // round, and stall out if that cannot settle it.
        if (ran_exact) {
            finish(CgStatus::Stalled);
            return Step::Stalled;
        }
        force_exact_ = true;
    }

    double improvement = last_objective_ - rmp_->objective();
    last_objective_ = rmp_->objective();
    if (improvement < 1e-9) {
        if (++no_improve_run_ >= 50 && config_.stall_exact_kick &&
            config_.backend != PricingBackend::Exact) {
            force_exact_ = true;
            no_improve_run_ = 0;
        }
    } else {
        no_improve_run_ = 0;
    }
    return Step::Continue;
}

CgDriver::Step CgDriver::run() {
    while (true) {
        Step s = step();
        if (s != Step::Continue) return s;
    }
}

std::pair<std::unique_ptr<RmpState>, CgStats> run_cg(
    const Graph& g, const CgConfig& config, const SvmModel* model,
    const LogisticParams* params) {
    int count = config.initial_columns > 0 ? config.initial_columns
                                           : 10 * g.num_vertices();
    Rng rng(mix_seed(config.seed, 0));
    CgDriver driver(g, config, model, params,
                    initial_columns(g, count, rng));
    driver.run();
    CgStats stats = driver.stats();
    auto state = std::make_unique<RmpState>(std::move(driver.rmp()));
    return {std::move(state), std::move(stats)};
}

void write_cg_record(std::ostream& out, const std::string& graph_name,
                     uint64_t seed, const CgConfig& config, double objective,
                     const CgStats& stats) {
    nlohmann::ordered_json j;
    j["graph"] = graph_name;
    j["seed"] = seed;
    j["backend"] = to_string(config.backend);
    j["selection"] = to_string(config.selection);
    j["status"] = to_string(stats.status);
    j["objective"] = objective;
    j["iterations"] = stats.iterations;
    j["wall_time_s"] = stats.wall_time;
    j["nrc_counts"] = stats.nrc_counts;
    j["objective_trace"] = stats.objective_trace;
    out << j.dump(2) << '\n';
}

}  // namespace fraccol
