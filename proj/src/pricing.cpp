#include "fraccol/pricing.hpp"

#include <algorithm>
#include <cmath>

namespace fraccol {

void finalize_columns(const PricingProblem& p, std::vector<VertexSet> sets,
                      PricingResult& out) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    for (auto& s : sets) {
        Column c;
        c.set = std::move(s);
        c.price(p.duals.pi);
        out.best_reduced_cost = std::min(out.best_reduced_cost, c.reduced_cost);
        if (c.reduced_cost < p.nrc_threshold) out.columns.push_back(std::move(c));
    }
    std::sort(out.columns.begin(), out.columns.end(),
              [](const Column& a, const Column& b) {
                  if (a.reduced_cost != b.reduced_cost)
                      return a.reduced_cost < b.reduced_cost;
                  return a.set < b.set;
              });
}

PricingResult mlph_price(const PricingProblem& p, const SvmModel& model,
                         const LogisticParams& params, int lambda,
                         uint64_t seed, WorkClock& clock) {
    if (lambda < 1)
        throw std::invalid_argument("mlph_price: lambda must be >= 1");
    const Graph& g = *p.graph;
    const int n = g.num_vertices();
    double start = clock.seconds();

    Rng pool_rng(mix_seed(seed, 0));
    SamplePool pool =
        build_sample_pool(g, p.duals, std::max(2, n), pool_rng);
    for (int k = 0; k < pool.size(); ++k) clock.charge_sample(n);
    auto features = extract_features(g, p.duals, pool);
    std::vector<double> sigma(n);
    for (int v = 0; v < n; ++v)
        sigma[v] = logistic(params, svm_score(model, features[v]));

    std::vector<VertexSet> sets;
    sets.reserve(lambda);
    std::vector<double> weights(n);
    for (int t = 0; t < lambda; ++t) {
        Rng rng(mix_seed(seed, 1 + uint64_t(t)));
        std::vector<int> members;
        int first = rng.uniform_int(n);
        members.push_back(first);
        Bitset cand(n);
        cand.set_all();
        cand.reset(first);
        cand.and_not(g.neighbor_bits(first));
        while (cand.any()) {
            double total = 0.0;
            std::fill(weights.begin(), weights.end(), 0.0);
            cand.for_each([&](int v) {
                weights[v] = sigma[v];
                total += sigma[v];
            });
            int v = rng.discrete(weights, total);
            members.push_back(v);
            cand.reset(v);
            cand.and_not(g.neighbor_bits(v));
        }
        sets.push_back(VertexSet(std::move(members)));
        clock.charge_sample(n);
    }

    PricingResult out;
    out.generated_count = lambda;
    finalize_columns(p, std::move(sets), out);
    out.elapsed = clock.seconds() - start;
    return out;
}

PricingResult greedy_price(const PricingProblem& p, WorkClock& clock) {
    const Graph& g = *p.graph;
    const int n = g.num_vertices();
    double start = clock.seconds();

    std::vector<int> members;
    Bitset cand(n);
    cand.set_all();
    while (cand.any()) {
        int best = -1;
        double best_w = -1.0;
        cand.for_each([&](int v) {
            if (p.duals.pi[v] > best_w) {
                best_w = p.duals.pi[v];
                best = v;
            }
        });
        members.push_back(best);
        cand.reset(best);
        cand.and_not(g.neighbor_bits(best));
    }
    clock.charge_sample(n);

    PricingResult out;
    out.generated_count = 1;
    finalize_columns(p, {VertexSet(std::move(members))}, out);
    out.elapsed = clock.seconds() - start;
    return out;
}

PricingResult aco_price(const PricingProblem& p, const AcoConfig& config,
                        WorkClock& clock) {
    const Graph& g = *p.graph;
    const int n = g.num_vertices();
    int ants = config.ants > 0 ? config.ants : n;
    if (ants * config.iterations < 1)
        throw std::invalid_argument("aco_price: need at least one construction");
    double start = clock.seconds();

    Rng rng(config.seed);
    std::vector<double> tau(n, 1.0);
    std::vector<double> weights(n);
    std::vector<VertexSet> sets;

    auto construct = [&]() {
        std::vector<int> members;
        Bitset cand(n);
        cand.set_all();
        while (cand.any()) {
            double total = 0.0;
            std::fill(weights.begin(), weights.end(), 0.0);
            cand.for_each([&](int v) {
                double piv = std::max(p.duals.pi[v], 0.0);
                double w = piv > 0.0
                               ? std::pow(tau[v], config.alpha) *
                                     std::pow(piv, config.beta)
                               : 0.0;
                weights[v] = w;
                total += w;
            });
            int v;
            if (total > 0.0) {
                v = rng.discrete(weights, total);
            } else {
                v = cand.nth_set(rng.uniform_int(cand.count()));
            }
            members.push_back(v);
            cand.reset(v);
            cand.and_not(g.neighbor_bits(v));
        }
        clock.charge_sample(n);
        return VertexSet(std::move(members));
    };

    for (int it = 0; it < config.iterations; ++it) {
        int best_of_iter = -1;
        double best_weight = -1.0;
        for (int a = 0; a < ants; ++a) {
            VertexSet s = construct();
            double w = 0.0;
            for (int v : s.members) w += p.duals.pi[v];
            if (w > best_weight) {
                best_weight = w;
                best_of_iter = int(sets.size());
            }
            sets.push_back(std::move(s));
        }
        for (auto& t : tau) t *= 1.0 - config.evaporation;
        if (best_of_iter >= 0 && best_weight > 0.0)
            for (int v : sets[best_of_iter].members) tau[v] += best_weight;
        for (auto& t : tau) t = std::max(t, 1e-6);
    }

    PricingResult out;
    out.generated_count = ants * config.iterations;
    finalize_columns(p, std::move(sets), out);
    out.elapsed = clock.seconds() - start;
    return out;
}

namespace {

// DFS maximum-weight independent set. Weights are clamped at zero for the
// bound (duals may carry tiny negative noise).
class MwisSearch {
public:
    MwisSearch(const Graph& g, const std::vector<double>& pi, WorkClock& clock,
               const Deadline& deadline)
        : g_(g), clock_(clock), deadline_(deadline), n_(g.num_vertices()) {
        w_.resize(n_);
        for (int v = 0; v < n_; ++v) w_[v] = std::max(pi[v], 0.0);
        use_clique_bound_ = g.density() > 0.3;
        best_set_.assign(n_, 0);
    }

    // Returns true if the search completed within budget.
    bool run() {
        Bitset cand(n_);
        cand.set_all();
        std::vector<int> chosen;
        complete_ = true;
        dfs(cand, chosen, 0.0);
        return complete_;
    }

    double best_weight() const { return best_weight_; }
    std::vector<int> best_members() const {
        std::vector<int> out;
        for (int v = 0; v < n_; ++v)
            if (best_set_[v]) out.push_back(v);
        return out;
    }

private:
    double bound(const Bitset& cand, double weight) const {
        double sum = weight;
        cand.for_each([&](int v) { sum += w_[v]; });
        if (!use_clique_bound_) return sum;
        // Greedy clique cover over candidates: each clique contributes at
        // most its maximum weight.
        double cover = weight;
        Bitset rest = cand;
        while (rest.any()) {
            int seed = rest.nth_set(0);
            Bitset clique_cand = rest;
            clique_cand.and_with(g_.neighbor_bits(seed));
            double mx = w_[seed];
            rest.reset(seed);
            while (clique_cand.any()) {
                int v = clique_cand.nth_set(0);
                mx = std::max(mx, w_[v]);
                rest.reset(v);
                clique_cand.reset(v);
                clique_cand.and_with(g_.neighbor_bits(v));
            }
            cover += mx;
        }
        return std::min(sum, cover);
    }

    void dfs(Bitset cand, std::vector<int>& chosen, double weight) {
        clock_.charge_bnb_node(n_);
        if (deadline_.expired()) {
            complete_ = false;
            return;
        }
        if (!cand.any()) {
            if (weight > best_weight_ + 1e-12) {
                best_weight_ = weight;
                std::fill(best_set_.begin(), best_set_.end(), 0);
                for (int v : chosen) best_set_[v] = 1;
            }
            return;
        }
        if (bound(cand, weight) <= best_weight_ + 1e-12) return;

        // Branch on the heaviest candidate, lowest id on ties.
        int pick = -1;
        double pick_w = -1.0;
        cand.for_each([&](int v) {
            if (w_[v] > pick_w) {
                pick_w = w_[v];
                pick = v;
            }
        });

        // Include branch.
        Bitset inc = cand;
        inc.reset(pick);
        inc.and_not(g_.neighbor_bits(pick));
        chosen.push_back(pick);
        dfs(inc, chosen, weight + w_[pick]);
        chosen.pop_back();
        if (!complete_) return;

        // Exclude branch.
        Bitset exc = cand;
        exc.reset(pick);
        dfs(exc, chosen, weight);
    }

    const Graph& g_;
    WorkClock& clock_;
    const Deadline& deadline_;
    int n_;
    std::vector<double> w_;
    bool use_clique_bound_ = false;
    bool complete_ = true;
    double best_weight_ = -1.0;
    std::vector<uint8_t> best_set_;
};

}  // namespace

PricingResult exact_price(const PricingProblem& p, WorkClock& clock,
                          double budget_seconds) {
    const Graph& g = *p.graph;
    double start = clock.seconds();
    Deadline deadline(clock, budget_seconds);

    MwisSearch search(g, p.duals.pi, clock, deadline);
    bool complete = search.run();
    // The optimum over independent sets extends to a maximal set without
    // losing clamped weight; extra members only improve the true reduced
    // cost when their duals are nonnegative.
    VertexSet best = extend_to_maximal_lowest(g, VertexSet(search.best_members()));

    PricingResult out;
    out.generated_count = 1;
    finalize_columns(p, {std::move(best)}, out);
    out.proven_optimal = complete;
    out.elapsed = clock.seconds() - start;
    return out;
}

PricingResult brute_force_oracle(const PricingProblem& p) {
    const Graph& g = *p.graph;
    const int n = g.num_vertices();
    if (n > 20)
        throw std::invalid_argument(
            "brute_force_oracle: refuses graphs with more than 20 vertices");
    std::vector<VertexSet> maximal;
    for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) members.push_back(v);
        VertexSet s(std::move(members));
        if (is_maximal_independent(g, s)) maximal.push_back(std::move(s));
    }
    PricingResult out;
    out.generated_count = int(maximal.size());
    finalize_columns(p, std::move(maximal), out);
    out.proven_optimal = true;
    return out;
}

}  // namespace fraccol
