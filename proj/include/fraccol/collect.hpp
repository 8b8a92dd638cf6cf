#pragma once

#include "fraccol/colgen.hpp"
#include "fraccol/mlmodel.hpp"

namespace fraccol {

struct CollectConfig {
    int every = 5;
    int max_iter = 25;
    bool include_initial = true;
    double exact_budget = 30.0;  // per recorded MWISP, work-clock seconds
    uint64_t seed = 1;
};

struct CollectOutcome {
    TrainingSet data;
    int recorded = 0;
    int skipped = 0;  // exact pricing hit its budget without a proof
};

// Drives CG while recording exactly solved MWISPs: at the configured
// iterations the pricing problem is solved to proven optimality, every vertex
// is labeled by membership in the optimal MIS, and features are extracted
// from that iteration's duals.
CollectOutcome collect_training_data(CgDriver& driver,
                                     const CollectConfig& config);

}  // namespace fraccol
