#pragma once

#include <cstdint>

namespace fraccol {

// Deterministic work clock. Budgets and all reported durations are measured
// in cost-model seconds derived from operation counts, not wall time, so a
// run's trace, status, and output files are bit-reproducible. One unit is
// roughly a nanosecond of work on a reference core (1e9 units/second).
class WorkClock {
public:
    void charge(uint64_t units) { units_ += units; }
    void charge_pivot(int rows, int cols) {
        charge(uint64_t(rows) * uint64_t(rows + cols) / 2 + 256);
    }
    void charge_sample(int n) { charge(uint64_t(n) * n + 256); }
    void charge_bnb_node(int n) { charge(uint64_t(n) * 32 + 64); }

    double seconds() const { return double(units_) * 1e-9; }
    uint64_t units() const { return units_; }

private:
    uint64_t units_ = 0;
};

// Budget window over a WorkClock: [start, start + limit_seconds).
class Deadline {
public:
    Deadline(const WorkClock& clock, double limit_seconds)
        : clock_(&clock), start_(clock.seconds()), limit_(limit_seconds) {}

    bool expired() const {
        return limit_ > 0 && clock_->seconds() - start_ >= limit_;
    }
    double elapsed() const { return clock_->seconds() - start_; }

private:
    const WorkClock* clock_;
    double start_;
    double limit_;  // <= 0 means unlimited
};

}  // namespace fraccol
