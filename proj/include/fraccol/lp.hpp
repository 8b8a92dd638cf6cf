#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "fraccol/clock.hpp"
#include "fraccol/graph.hpp"
#include "fraccol/simplex.hpp"

namespace fraccol {

// A master-problem variable: one maximal independent set with its weight and
// reduced cost cached against a particular dual vector.
struct Column {
    VertexSet set;
    int id = -1;
    double weight = 0.0;        // sum of pi over members
    double reduced_cost = 1.0;  // 1 - weight

    void price(const std::vector<double>& pi) {
        weight = 0.0;
        for (int v : set.members) weight += pi[v];
        reduced_cost = 1.0 - weight;
    }
};

struct DualSolution {
    std::vector<double> pi;
};

struct RmpInfeasible : std::runtime_error {
    int vertex;
    explicit RmpInfeasible(int v)
        : std::runtime_error("RMP infeasible: vertex " + std::to_string(v) +
                             " is covered by no column"),
          vertex(v) {}
};

struct SolverStall : std::runtime_error {
    double last_objective;
    explicit SolverStall(double obj)
        : std::runtime_error("simplex iteration limit exceeded"),
          last_objective(obj) {}
};

// The restricted master problem: column pool plus the simplex state that
// carries the warm-start basis between column-generation iterations.
class RmpState {
public:
    RmpState(const Graph& g, std::vector<Column> initial_columns);

    const Graph& graph() const { return *graph_; }
    const std::vector<Column>& columns() const { return columns_; }
    bool solved() const { return kernel_->solved(); }

    // Throws SolverStall on iteration-limit; otherwise leaves the state
    // primal/dual optimal.
    void solve(WorkClock& clock);

    double objective() const;
    const std::vector<double>& primal() const { return primal_; }
    const DualSolution& duals() const { return duals_; }

    // Pool extension; duplicate member sets are skipped. Returns the number
    // of columns actually added. The basis survives (new columns enter
    // nonbasic at 0).
    int add_columns(const std::vector<Column>& new_columns);

    // Pool replacement per the fixed-size column-management scheme: `keep`
    // must contain every column whose primal value exceeds 1e-9. Throws
    // std::invalid_argument otherwise.
    void replace_columns(const std::vector<int>& keep_ids,
                         const std::vector<Column>& new_columns);

    // Columns with primal value > 1e-9 (valid after solve).
    std::vector<int> nonzero_primal_ids() const;

    // CPLEX-LP text dump of the current pool (debug aid).
    void dump_lp(std::ostream& out) const;

private:
    void rebuild_kernel();
    bool contains_set(const VertexSet& s) const;

    const Graph* graph_;
    std::vector<Column> columns_;
    int next_id_ = 0;
    std::unique_ptr<CoveringSimplex> kernel_;
    std::vector<double> primal_;
    DualSolution duals_;
};

// Validates that every column is a maximal independent set and every vertex
// is covered, then builds the unsolved state. Throws RmpInfeasible naming the
// first uncovered vertex.
RmpState build_rmp(const Graph& g, std::vector<Column> initial_columns);

Column make_column(const Graph& g, VertexSet s);

}  // namespace fraccol
