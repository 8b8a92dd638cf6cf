#include "fraccol/lp.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace fraccol {

Column make_column(const Graph& g, VertexSet s) {
    if (!is_maximal_independent(g, s))
        throw std::invalid_argument(
            "Column: set is not a maximal independent set");
    Column c;
    c.set = std::move(s);
    return c;
}

RmpState::RmpState(const Graph& g, std::vector<Column> initial_columns)
    : graph_(&g), columns_(std::move(initial_columns)) {
    for (auto& c : columns_) c.id = next_id_++;
    rebuild_kernel();
}

void RmpState::rebuild_kernel() {
    kernel_ = std::make_unique<CoveringSimplex>(graph_->num_vertices());
    for (const auto& c : columns_) kernel_->add_column(c.set.members);
    primal_.assign(columns_.size(), 0.0);
    duals_.pi.assign(graph_->num_vertices(), 0.0);
}

bool RmpState::contains_set(const VertexSet& s) const {
    for (const auto& c : columns_)
        if (c.set == s) return true;
    return false;
}

void RmpState::solve(WorkClock& clock) {
    if (kernel_->solve(clock) == SimplexStatus::IterationLimit)
        throw SolverStall(kernel_->objective());
    primal_ = kernel_->primal();
    duals_.pi = kernel_->duals();
    for (auto& c : columns_) c.price(duals_.pi);
}

double RmpState::objective() const { return kernel_->objective(); }

int RmpState::add_columns(const std::vector<Column>& new_columns) {
    int added = 0;
    for (const auto& nc : new_columns) {
        if (contains_set(nc.set)) continue;
        Column c = nc;
        c.id = next_id_++;
        kernel_->add_column(c.set.members);
        columns_.push_back(std::move(c));
        primal_.push_back(0.0);
        ++added;
    }
    return added;
}

std::vector<int> RmpState::nonzero_primal_ids() const {
    std::vector<int> out;
    for (size_t j = 0; j < columns_.size(); ++j)
        if (primal_[j] > 1e-9) out.push_back(columns_[j].id);
    return out;
}

void RmpState::replace_columns(const std::vector<int>& keep_ids,
                               const std::vector<Column>& new_columns) {
    std::set<int> keep(keep_ids.begin(), keep_ids.end());
    for (size_t j = 0; j < columns_.size(); ++j)
        if (primal_[j] > 1e-9 && !keep.count(columns_[j].id))
            throw std::invalid_argument(
                "replace_columns: keep list omits column " +
                std::to_string(columns_[j].id) + " with nonzero primal value");

    std::vector<Column> next;
    for (const auto& c : columns_)
        if (keep.count(c.id)) next.push_back(c);
    columns_ = std::move(next);
    for (const auto& nc : new_columns) {
        if (contains_set(nc.set)) continue;
        Column c = nc;
        c.id = next_id_++;
        columns_.push_back(std::move(c));
    }
    // The kept support still covers every vertex, so a fresh crash basis is
    // feasible; rebuilding avoids patching a basis whose columns moved.
    rebuild_kernel();
}

void RmpState::dump_lp(std::ostream& out) const {
    out << "\\ covering RMP over " << columns_.size() << " columns\n";
    out << "Minimize\n obj:";
    for (size_t j = 0; j < columns_.size(); ++j) out << " + x" << columns_[j].id;
    out << "\nSubject To\n";
    for (int i = 0; i < graph_->num_vertices(); ++i) {
        out << " cover_" << i << ":";
        for (const auto& c : columns_)
            if (c.set.contains(i)) out << " + x" << c.id;
        out << " >= 1\n";
    }
    out << "Bounds\n";
    for (const auto& c : columns_) out << " 0 <= x" << c.id << " <= 1\n";
    out << "End\n";
}

RmpState build_rmp(const Graph& g, std::vector<Column> initial_columns) {
    Bitset covered(g.num_vertices());
    for (const auto& c : initial_columns) {
        if (!is_maximal_independent(g, c.set))
            throw std::invalid_argument(
                "build_rmp: column is not a maximal independent set");
        for (int v : c.set.members) covered.set(v);
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!covered.test(v)) throw RmpInfeasible(v);
    // Pool-level dedup on member sets.
    std::vector<Column> pool;
    for (auto& c : initial_columns) {
        bool dup = false;
        for (const auto& p : pool)
            if (p.set == c.set) { dup = true; break; }
        if (!dup) pool.push_back(std::move(c));
    }
    return RmpState(g, std::move(pool));
}

}  // namespace fraccol
