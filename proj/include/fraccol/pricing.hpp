#pragma once

#include <vector>

#include "fraccol/clock.hpp"
#include "fraccol/graph.hpp"
#include "fraccol/lp.hpp"
#include "fraccol/mlmodel.hpp"

namespace fraccol {

// One MWISP instance: find maximal independent sets minimizing
// 1 - sum of pi over members.
struct PricingProblem {
    const Graph* graph;
    DualSolution duals;
    double nrc_threshold = -1e-6;
};

struct PricingResult {
    // Deduplicated columns with reduced cost below the threshold, ascending
    // by reduced cost (ties broken by member lexicographic order).
    std::vector<Column> columns;
    // Minimum reduced cost over every set generated, including non-NRC ones.
    double best_reduced_cost = 1.0;
    bool proven_optimal = false;
    int generated_count = 0;
    double elapsed = 0.0;  // work-clock seconds
};

struct AcoConfig {
    int ants = 0;        // 0 = one per vertex
    int iterations = 50;
    double evaporation = 0.1;
    double alpha = 1.0;
    double beta = 2.0;
    uint64_t seed = 0;
};

// SVM-guided sampler: scores every vertex once, then draws `lambda` MISs;
// the first vertex of each set is uniform, later picks are proportional to
// the logistic-rescaled score over the open candidates. Sample t uses the
// derived seed (seed, t), so sharding the loop over workers cannot change
// the result.
PricingResult mlph_price(const PricingProblem& p, const SvmModel& model,
                         const LogisticParams& params, int lambda,
                         uint64_t seed, WorkClock& clock);

// Deterministic single-column search: grow by maximum dual weight, lowest id
// on ties.
PricingResult greedy_price(const PricingProblem& p, WorkClock& clock);

// Vertex-pheromone ant system: selection proportional to tau^alpha * pi^beta,
// iteration-best reinforcement, all NRC sets collected.
PricingResult aco_price(const PricingProblem& p, const AcoConfig& config,
                        WorkClock& clock);

// Branch-and-bound to proven optimality (weight-sum bound plus a greedy
// clique-cover bound on dense graphs). Degrades to the best incumbent with
// proven_optimal = false when the work budget runs out.
PricingResult exact_price(const PricingProblem& p, WorkClock& clock,
                          double budget_seconds = 0.0);

// Full enumeration over all subsets; refuses graphs with more than 20
// vertices. Returns every NRC column and the exact minimum reduced cost.
PricingResult brute_force_oracle(const PricingProblem& p);

// Canonical ordering + dedup applied by every backend.
void finalize_columns(const PricingProblem& p, std::vector<VertexSet> sets,
                      PricingResult& out);

}  // namespace fraccol
