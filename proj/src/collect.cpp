#include "fraccol/collect.hpp"

namespace fraccol {

CollectOutcome collect_training_data(CgDriver& driver,
                                     const CollectConfig& config) {
    CollectOutcome out;
    const Graph& g = driver.graph();
    const int n = g.num_vertices();

    auto record_now = [&](int iteration) {
        // Loose threshold so the optimal set is returned even when its
        // reduced cost is nonnegative (any maximal set has rc < 2).
        PricingProblem loose{&g, driver.duals(), 2.0};
        PricingResult exact =
            exact_price(loose, driver.clock(), config.exact_budget);
        if (!exact.proven_optimal || exact.columns.empty()) {
            ++out.skipped;
            return;
        }
        Bitset in_opt(n);
        for (int v : exact.columns.front().set.members) in_opt.set(v);
        Rng pool_rng(mix_seed(config.seed, 0xfea70 + uint64_t(iteration)));
        SamplePool pool =
            build_sample_pool(g, driver.duals(), std::max(2, n), pool_rng);
        auto features = extract_features(g, driver.duals(), pool);
        for (int v = 0; v < n; ++v) {
            TrainingRow row;
            row.graph = g.name();
            row.iteration = iteration;
            row.vertex = v;
            row.features = features[v];
            row.label = in_opt.test(v) ? 1 : 0;
            out.data.rows.push_back(std::move(row));
        }
        ++out.recorded;
    };

    driver.ensure_initial_solve();
    if (config.include_initial) record_now(0);
    while (driver.iteration() < config.max_iter) {
        CgDriver::Step s = driver.step();
        if (s != CgDriver::Step::Continue) break;
        int it = driver.iteration();
        if (it > 0 && it % config.every == 0 && it <= config.max_iter)
            record_now(it);
    }
    return out;
}

}  // namespace fraccol
