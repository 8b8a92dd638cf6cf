#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraccol/colgen.hpp"

namespace fraccol {

struct BranchDecision {
    enum class Kind { Same, Differ };
    Kind kind;
    int u, v;  // original-graph vertex ids, u < v
};

// A branch-and-price tree node. `mapping[orig]` is the contracted vertex
// standing for an original vertex; SAME merges shrink the graph, DIFFER adds
// an edge.
struct BnpNode {
    std::vector<BranchDecision> decisions;
    std::shared_ptr<const Graph> contracted;
    std::vector<int> mapping;
    std::vector<Column> pool;  // valid MISs of `contracted`
    double local_lb = 0.0;
    int depth = 0;
};

enum class BnpStatus { Optimal, GapReported, RootUnsolved };
const char* to_string(BnpStatus s);

struct BnpStats {
    int upper_bound = 0;           // best proper coloring found
    double global_lower_bound = 0.0;
    double gap_pct = 0.0;          // 100 * (UB - GLB) / UB
    long nodes_explored = 0;
    BnpStatus status = BnpStatus::RootUnsolved;
    double wall_time = 0.0;        // work-clock seconds
    std::vector<int> best_coloring;  // color per original vertex
};

struct BnpConfig {
    CgConfig cg;  // seed, backend, selection; theta/lambda set per node
    double node_cutoff = 60.0;
    double total_cutoff = 1800.0;
    double theta_child_factor = 0.1;  // theta = n at root, 0.1n below
};

// DSATUR greedy coloring: max saturation, then max degree, then lowest id.
std::vector<int> primal_heuristic(const Graph& g);
int color_count(const std::vector<int>& coloring);

// Farley's ratio bound on the node LP optimum. The PricingResult overload
// enforces that the minimum is proven; calling it on an unproven result is a
// contract violation.
double lagrangian_bound(double rmp_objective, double min_reduced_cost);
double lagrangian_bound(double rmp_objective, const PricingResult& pricing);

// Zykov branching on a solved fractional node: picks a non-adjacent vertex
// pair appearing together in one fractional column and apart in another,
// maximizing the total fractional value of the columns separating it.
// Returns nullopt when the LP solution is integral (leaf).
std::optional<std::pair<BnpNode, BnpNode>> branch(const BnpNode& node,
                                                  const RmpState& fractional);

BnpStats run_bnp(const Graph& g, const BnpConfig& config,
                 const SvmModel* model = nullptr,
                 const LogisticParams* params = nullptr);

// B&P record JSON ({graph, seed, status, chi_upper, global_lb, gap_pct,
// nodes, wall_time_s}).
void write_bnp_record(std::ostream& out, const std::string& graph_name,
                      uint64_t seed, const BnpStats& stats);

}  // namespace fraccol
