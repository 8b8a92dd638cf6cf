#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fraccol/clock.hpp"

namespace fraccol {

enum class SimplexStatus { Optimal, IterationLimit };

// Bounded-variable revised primal simplex specialized to the covering LP
//
//   min sum_j x_j   s.t.   sum_{j : i in col_j} x_j - t_i = 1   for every row i,
//                          0 <= x_j <= u_j,  t_i >= 0.
//
// Structural columns are 0/1 member lists; row i's surplus column is -e_i.
// The initial basis is the surplus identity with every structural nonbasic at
// its upper bound, which is primal feasible whenever every row is covered, so
// no phase 1 is needed. Structural bounds start at 1; a bound whose reduced
// cost stays negative at termination is relaxed to +inf and the column is
// pivoted in, which restores dual feasibility over the whole pool (the
// covering optimum never exceeds 1, so these pivots cannot cut below it).
class CoveringSimplex {
public:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    explicit CoveringSimplex(int rows);

    // Appends a structural column (cost 1, bounds [0,1]); returns its index.
    // After a solve, new columns enter nonbasic at lower bound 0.
    int add_column(std::vector<int> members);

    int rows() const { return n_; }
    int num_columns() const { return int(cols_.size()); }

    bool solved() const { return solved_; }
    SimplexStatus solve(WorkClock& clock);

    double objective() const;
    // Structural primal values, zero-snapped at 1e-9.
    std::vector<double> primal() const;
    // Row duals pi.
    std::vector<double> duals() const;
    // 1 - sum_{i in col_j} pi_i for every structural column.
    std::vector<double> reduced_costs() const;

    int pivot_count() const { return pivots_; }

    static constexpr double kFeasTol = 1e-7;
    static constexpr double kOptTol = 1e-6;
    static constexpr double kZeroSnap = 1e-9;

private:
    enum class VarStatus : uint8_t { Basic, AtLower, AtUpper };

    // Variable ids: [0, n) surplus, [n, n + cols) structural.
    bool is_structural(int var) const { return var >= n_; }
    int col_of(int var) const { return var - n_; }

    double upper_of(int var) const {
        return is_structural(var) ? upper_[col_of(var)] : kInf;
    }
    double cost_of(int var) const { return is_structural(var) ? 1.0 : 0.0; }

    double nonbasic_value(int var) const;
    Eigen::VectorXd column_in_basis(int var) const;  // B^{-1} A_var
    void compute_duals();
    double reduced_cost(int var) const;

    void crash_basis();
    void refactorize();
    int price(bool bland) const;          // entering var or -1
    int find_stuck_upper_bound() const;   // structural at finite UB, rc < 0

    int n_;
    std::vector<std::vector<int>> cols_;
    std::vector<double> upper_;

    bool solved_ = false;
    bool basis_ready_ = false;
    std::vector<VarStatus> status_;   // per variable
    std::vector<int> basic_var_;      // row -> variable id
    Eigen::VectorXd basic_value_;     // row -> value of basic variable
    Eigen::MatrixXd binv_;
    Eigen::VectorXd y_;               // row duals of the current basis
    int pivots_ = 0;
    int pivots_since_refactor_ = 0;
};

}  // namespace fraccol
