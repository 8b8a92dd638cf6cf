#include "fraccol/simplex.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fraccol {

CoveringSimplex::CoveringSimplex(int rows) : n_(rows) {
    if (rows < 1) throw std::invalid_argument("CoveringSimplex: rows must be >= 1");
    status_.assign(n_, VarStatus::Basic);
    y_ = Eigen::VectorXd::Zero(n_);
}

int CoveringSimplex::add_column(std::vector<int> members) {
    for (int i : members)
        if (i < 0 || i >= n_)
            throw std::invalid_argument("CoveringSimplex: column row out of range");
    cols_.push_back(std::move(members));
    upper_.push_back(1.0);
    status_.push_back(basis_ready_ ? VarStatus::AtLower : VarStatus::AtUpper);
    solved_ = false;
    return int(cols_.size()) - 1;
}

double CoveringSimplex::nonbasic_value(int var) const {
    return status_[var] == VarStatus::AtUpper ? upper_of(var) : 0.0;
}

void CoveringSimplex::crash_basis() {
    for (int i = 0; i < n_; ++i) status_[i] = VarStatus::Basic;
    for (size_t j = 0; j < cols_.size(); ++j)
        status_[n_ + int(j)] = VarStatus::AtUpper;
    basic_var_.resize(n_);
    for (int i = 0; i < n_; ++i) basic_var_[i] = i;
    binv_ = -Eigen::MatrixXd::Identity(n_, n_);
    // t_i = coverage_i - 1 with every structural at its upper bound 1.
    Eigen::VectorXd cover = Eigen::VectorXd::Zero(n_);
    for (const auto& col : cols_)
        for (int i : col) cover[i] += 1.0;
    basic_value_ = cover - Eigen::VectorXd::Ones(n_);
    for (int i = 0; i < n_; ++i)
        if (basic_value_[i] < -kFeasTol)
            throw std::invalid_argument(
                "CoveringSimplex: row " + std::to_string(i) +
                " is uncovered; the crash basis is infeasible");
    basis_ready_ = true;
    pivots_since_refactor_ = 0;
}

void CoveringSimplex::refactorize() {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n_, n_);
    for (int r = 0; r < n_; ++r) {
        int var = basic_var_[r];
        if (is_structural(var)) {
            for (int i : cols_[col_of(var)]) basis(i, r) = 1.0;
        } else {
            basis(var, r) = -1.0;
        }
    }
    binv_ = Eigen::PartialPivLU<Eigen::MatrixXd>(basis).inverse();
    // x_B = B^{-1}(b - N x_N)
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n_);
    for (size_t j = 0; j < cols_.size(); ++j)
        if (status_[n_ + int(j)] == VarStatus::AtUpper)
            for (int i : cols_[j]) rhs[i] -= upper_[j];
    basic_value_ = binv_ * rhs;
    pivots_since_refactor_ = 0;
}

Eigen::VectorXd CoveringSimplex::column_in_basis(int var) const {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_);
    if (is_structural(var)) {
        for (int i : cols_[col_of(var)]) alpha += binv_.col(i);
    } else {
        alpha = -binv_.col(var);
    }
    return alpha;
}

void CoveringSimplex::compute_duals() {
    y_ = Eigen::VectorXd::Zero(n_);
    for (int r = 0; r < n_; ++r)
        if (is_structural(basic_var_[r])) y_ += binv_.row(r);
}

double CoveringSimplex::reduced_cost(int var) const {
    if (is_structural(var)) {
        double sum = 0.0;
        for (int i : cols_[col_of(var)]) sum += y_[i];
        return 1.0 - sum;
    }
    return y_[var];
}

int CoveringSimplex::price(bool bland) const {
    int best = -1;
    double best_violation = kOptTol;
    const int total = n_ + int(cols_.size());
    for (int var = 0; var < total; ++var) {
        if (status_[var] == VarStatus::Basic) continue;
        double d = reduced_cost(var);
        double violation = status_[var] == VarStatus::AtLower ? -d : d;
        if (violation <= kOptTol) continue;
        if (bland) return var;
        if (violation > best_violation) {
            best_violation = violation;
            best = var;
        }
    }
    return best;
}

int CoveringSimplex::find_stuck_upper_bound() const {
    const int total = n_ + int(cols_.size());
    for (int var = n_; var < total; ++var) {
        if (status_[var] != VarStatus::AtUpper) continue;
        if (upper_[col_of(var)] == kInf) continue;
        if (reduced_cost(var) < -kZeroSnap) return var;
    }
    return -1;
}

SimplexStatus CoveringSimplex::solve(WorkClock& clock) {
    if (!basis_ready_) crash_basis();
    const int m = int(cols_.size());
    const long iter_limit = 50000L + 500L * (n_ + m);
    int degenerate_run = 0;
    bool bland = false;
    long iter = 0;
    int verify_rounds = 0;

    compute_duals();
    while (true) {
        if (++iter > iter_limit) return SimplexStatus::IterationLimit;

        int entering = price(bland);
        double enter_start, dir;
        double own_range;
        if (entering >= 0) {
            bool from_upper = status_[entering] == VarStatus::AtUpper;
            dir = from_upper ? -1.0 : 1.0;
            enter_start = nonbasic_value(entering);
            own_range = upper_of(entering);
        } else {
            // Candidate optimum. Refactorize and re-price to clear drift.
            if (verify_rounds < 3) {
                ++verify_rounds;
                refactorize();
                compute_duals();
                if (price(bland) >= 0) continue;
            }
            // Clear structurals stuck at the artificial bound 1 with negative
            // reduced cost: relax the bound and pivot them in. The covering
            // optimum never exceeds 1 per variable, so this cannot cut below
            // the optimum already reached; the pivots restore dual
            // feasibility over the whole pool.
            entering = find_stuck_upper_bound();
            if (entering < 0) {
                solved_ = true;
                return SimplexStatus::Optimal;
            }
            enter_start = upper_[col_of(entering)];
            upper_[col_of(entering)] = kInf;
            dir = 1.0;
            own_range = kInf;
        }

        Eigen::VectorXd alpha = column_in_basis(entering);
        clock.charge_pivot(n_, m);

        // Ratio test: basics move by -delta * dir * alpha.
        constexpr double kPivTol = 1e-9;
        double row_min = kInf;
        int leave_row = -1;
        double leave_abs_coef = 0.0;
        for (int r = 0; r < n_; ++r) {
            double coef = dir * alpha[r];
            double limit;
            if (coef > kPivTol) {
                limit = std::max(basic_value_[r], 0.0) / coef;
            } else if (coef < -kPivTol) {
                double ub = upper_of(basic_var_[r]);
                if (ub == kInf) continue;
                limit = std::max(ub - basic_value_[r], 0.0) / (-coef);
            } else {
                continue;
            }
            bool better = limit < row_min - kPivTol;
            bool tie = !better && limit < row_min + kPivTol;
            if (better || (tie && std::abs(coef) > leave_abs_coef + kPivTol)) {
                row_min = limit;
                leave_row = r;
                leave_abs_coef = std::abs(coef);
            }
        }

        if (leave_row < 0 && own_range == kInf)
            throw std::logic_error(
                "CoveringSimplex: unbounded direction in a covering LP");

        bool flip = leave_row < 0 || own_range < row_min - kPivTol;
        double delta = flip ? own_range : row_min;

        if (delta <= kZeroSnap) {
            if (++degenerate_run > 5 * n_) bland = true;
        } else {
            degenerate_run = 0;
            bland = false;
        }

        basic_value_ -= delta * dir * alpha;
        double enter_value = enter_start + delta * dir;

        if (flip) {
            status_[entering] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
            continue;  // basis unchanged, duals unchanged
        }

        int leaving = basic_var_[leave_row];
        double leave_coef = dir * alpha[leave_row];
        status_[leaving] = leave_coef > 0 ? VarStatus::AtLower : VarStatus::AtUpper;
        status_[entering] = VarStatus::Basic;
        basic_var_[leave_row] = entering;
        basic_value_[leave_row] = enter_value;

        // Product-form update of B^{-1}.
        double piv = alpha[leave_row];
        binv_.row(leave_row) /= piv;
        for (int q = 0; q < n_; ++q) {
            if (q == leave_row) continue;
            double f = alpha[q];
            if (f != 0.0) binv_.row(q) -= f * binv_.row(leave_row);
        }
        ++pivots_;
        if (++pivots_since_refactor_ >= 64) refactorize();
        compute_duals();
    }
}

double CoveringSimplex::objective() const {
    if (!basis_ready_) return std::numeric_limits<double>::quiet_NaN();
    double obj = 0.0;
    for (int r = 0; r < n_; ++r)
        if (is_structural(basic_var_[r])) obj += basic_value_[r];
    for (size_t j = 0; j < cols_.size(); ++j)
        if (status_[n_ + int(j)] == VarStatus::AtUpper) obj += upper_[j];
    return obj;
}

std::vector<double> CoveringSimplex::primal() const {
    std::vector<double> x(cols_.size(), 0.0);
    if (!basis_ready_) return x;
    for (size_t j = 0; j < cols_.size(); ++j)
        if (status_[n_ + int(j)] == VarStatus::AtUpper) x[j] = upper_[j];
    for (int r = 0; r < n_; ++r) {
        int var = basic_var_[r];
        if (is_structural(var)) x[col_of(var)] = basic_value_[r];
    }
    for (auto& v : x) {
        if (std::abs(v) < kZeroSnap) v = 0.0;
        if (std::abs(v - 1.0) < kZeroSnap) v = 1.0;
    }
    return x;
}

std::vector<double> CoveringSimplex::duals() const {
    std::vector<double> pi(n_);
    for (int i = 0; i < n_; ++i) pi[i] = y_[i];
    return pi;
}

std::vector<double> CoveringSimplex::reduced_costs() const {
    std::vector<double> rc(cols_.size());
    for (size_t j = 0; j < cols_.size(); ++j) rc[j] = reduced_cost(n_ + int(j));
    return rc;
}

}  // namespace fraccol
