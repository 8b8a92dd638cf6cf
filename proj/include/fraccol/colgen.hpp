#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fraccol/clock.hpp"
#include "fraccol/graph.hpp"
#include "fraccol/lp.hpp"
#include "fraccol/mlmodel.hpp"
#include "fraccol/pricing.hpp"

namespace fraccol {

enum class PricingBackend { Mlph, Greedy, Aco, Exact };
enum class SelectionStrategy { AddAll, AddPartial, ReplaceExisting };

const char* to_string(PricingBackend b);
const char* to_string(SelectionStrategy s);
std::optional<PricingBackend> backend_from_string(const std::string& s);
std::optional<SelectionStrategy> selection_from_string(const std::string& s);

struct CgConfig {
    PricingBackend backend = PricingBackend::Mlph;
    SelectionStrategy selection = SelectionStrategy::AddPartial;
    int theta = 0;            // add_partial cap; 0 = n
    int lambda = 0;           // sample count for mlph; 0 = 50n
    int initial_columns = 0;  // 0 = 10n
    double cutoff_total = 1800.0;    // work-clock seconds
    double cutoff_pricing = 30.0;    // per pricing call
    uint64_t seed = 1;
    int replace_capacity = 10;  // k for replace_existing
    bool stall_exact_kick = true;
    bool farley_early_stop = false;  // used by branch-and-price nodes
};

enum class CgStatus { Optimal, TimeLimit, Stalled };
const char* to_string(CgStatus s);

struct CgStats {
    int iterations = 0;
    std::vector<double> objective_trace;  // initial solve + one per iteration
    std::vector<int> nrc_counts;
    std::vector<double> best_rc_trace;
    CgStatus status = CgStatus::Stalled;
    double wall_time = 0.0;  // work-clock seconds
    // Best Farley bound certified by exact pricing during the run; quiet NaN
    // until one exists.
    double lagrangian_bound = 0.0;
    bool has_lagrangian_bound = false;
    bool early_stopped = false;
};

// `count` uniformly sampled MISs plus greedy repairs so that every vertex is
// covered.
std::vector<Column> initial_columns(const Graph& g, int count, Rng& rng);

struct PoolUpdatePlan {
    bool replace = false;
    std::vector<Column> add;          // add_all / add_partial
    std::vector<int> keep_ids;        // replace_existing
    std::vector<Column> new_columns;  // replace_existing
};

// Builds the pool update for one iteration. `found.columns` must be sorted
// ascending by reduced cost (pricing backends guarantee it). For
// replace_existing, `capacity` is the per-vertex entry budget k (>= 1).
PoolUpdatePlan select_columns(SelectionStrategy strategy,
                              const RmpState& current,
                              const PricingResult& found, int theta,
                              int capacity);

void apply_plan(RmpState& state, const PoolUpdatePlan& plan);

// One column-generation run driven step by step. Branch-and-price reuses the
// driver with inherited pools and its own stopping rule.
class CgDriver {
public:
    enum class Step { Continue, Optimal, TimeLimit, Stalled, EarlyBound };

    // With `shared_clock`, budgets and reported times are measured against
    // the caller's clock (branch-and-price accounts all node runs together).
    CgDriver(const Graph& g, const CgConfig& config, const SvmModel* model,
             const LogisticParams* params, std::vector<Column> pool,
             WorkClock* shared_clock = nullptr);

    Step step();
    Step run();  // steps until a terminal outcome, filling stats

    // Solves the initial RMP if that has not happened yet, making duals
    // available before the first pricing round.
    void ensure_initial_solve();

    const RmpState& rmp() const { return *rmp_; }
    RmpState& rmp() { return *rmp_; }
    const CgStats& stats() const { return stats_; }
    WorkClock& clock() { return *clock_; }
    const Graph& graph() const { return *graph_; }
    int iteration() const { return stats_.iterations; }
    const DualSolution& duals() const { return rmp_->duals(); }

private:
    PricingResult price_backend(uint64_t seed);
    void finish(CgStatus status);

    const Graph* graph_;
    CgConfig config_;
    const SvmModel* model_;
    const LogisticParams* params_;
    std::unique_ptr<RmpState> rmp_;
    CgStats stats_;
    WorkClock own_clock_;
    WorkClock* clock_;
    double start_time_ = 0.0;
    bool first_solve_done_ = false;
    bool force_exact_ = false;
    int no_improve_run_ = 0;
    double last_objective_ = 0.0;
};

// The full loop: build the initial pool, run to a terminal status.
std::pair<std::unique_ptr<RmpState>, CgStats> run_cg(
    const Graph& g, const CgConfig& config, const SvmModel* model = nullptr,
    const LogisticParams* params = nullptr);

// Run-record JSON ({graph, seed, backend, selection, status, objective,
// iterations, wall_time_s, nrc_counts[], objective_trace[]}).
void write_cg_record(std::ostream& out, const std::string& graph_name,
                     uint64_t seed, const CgConfig& config, double objective,
                     const CgStats& stats);

}  // namespace fraccol
