#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraccol/graph.hpp"
#include "fraccol/lp.hpp"
#include "fraccol/rng.hpp"

namespace fraccol {

// Pool of sampled maximal independent sets with their pricing objectives and
// ranks. Feeds the two statistical vertex features.
struct SamplePool {
    std::vector<VertexSet> sets;
    std::vector<double> objectives;     // o_k = 1 - sum of pi over set k
    std::vector<int> ranks;             // 1 = smallest objective
    std::vector<std::vector<uint8_t>> presence;  // [vertex][sample]
    std::vector<double> vertex_frequency;
    double mean_objective = 0.0;

    int size() const { return int(sets.size()); }
};

// Feature order is fixed: [ranking, correlation, weight, degree, upper_bound].
constexpr int kNumFeatures = 5;
extern const std::array<std::string, kNumFeatures> kFeatureOrder;

using FeatureVector = std::array<double, kNumFeatures>;

struct SvmModel {
    std::array<double, kNumFeatures> weights{};
    double intercept = 0.0;
};

struct LogisticParams {
    double beta0 = 0.0;
    double beta1 = 0.0;
};

// Coefficients of the shipped scorer (ranking, correlation, weight, degree,
// upper bound; intercept) and the tuned logistic rescaling parameters.
SvmModel default_svm_model();
LogisticParams default_logistic_params();

struct TrainingRow {
    std::string graph;
    int iteration = 0;
    int vertex = 0;
    FeatureVector features{};
    int label = 0;  // 1 iff the vertex is in the recorded optimal MIS
};

struct TrainingSet {
    std::vector<TrainingRow> rows;
};

// Builds K uniformly sampled MISs with objectives and dense ranks (ties
// broken by sample index). K must be >= 2.
SamplePool build_sample_pool(const Graph& g, const DualSolution& duals, int K,
                             Rng& rng);

// Pearson correlation between vertex presence and sample objectives; 0 when
// either side has zero variance.
double correlation_feature(const SamplePool& pool, int vertex);

// Sum over samples containing the vertex of 1/rank.
double ranking_feature(const SamplePool& pool, int vertex);

// Raw features per vertex followed by per-feature min-max normalization over
// the instance; a feature constant across the instance maps to 0.
std::vector<FeatureVector> extract_features(const Graph& g,
                                            const DualSolution& duals,
                                            const SamplePool& pool);

double svm_score(const SvmModel& model, const FeatureVector& f);

// 1 / (1 + exp(beta0 * d + beta1)), overflow-safe.
double logistic(const LogisticParams& params, double d);

struct SvmTrainConfig {
    double C = 1.0;
    int epochs = 200;
    uint64_t seed = 0;
};

struct SvmTrainReport {
    double accuracy = 0.0;
    double positive_hinge = 0.0;  // mean hinge loss on positive rows
    double negative_hinge = 0.0;
    double objective = 0.0;       // regularized hinge objective at the model
};

// Linear SVM on the primal hinge objective with class-weighted costs
// (positive cost scaled by #neg/#pos). Deterministic given the seed.
// Throws std::invalid_argument if only one class is present.
SvmModel train_svm(const TrainingSet& data, const SvmTrainConfig& config,
                   SvmTrainReport* report = nullptr);

// Regularized class-weighted hinge objective used by the trainer, exposed for
// the stationarity check: 0.5*lambda*|w|^2 + mean weighted hinge.
double svm_objective(const TrainingSet& data, double C, const SvmModel& m);

// Grid argmin of a scalar objective (mean best reduced cost); ties keep the
// earliest grid entry.
LogisticParams tune_logistic(
    const std::vector<LogisticParams>& grid,
    const std::function<double(const LogisticParams&)>& objective);

// 11x11 default grid: beta0 log-spaced in [0.1, 100], beta1 linear in
// [-20, 20].
std::vector<LogisticParams> default_logistic_grid();

// Model file round-trip (JSON).
void save_model(const SvmModel& model, const LogisticParams& params,
                std::ostream& out);
std::pair<SvmModel, LogisticParams> load_model(std::istream& in);
std::pair<SvmModel, LogisticParams> load_model_file(const std::string& path);

// TrainingSet CSV: header `graph,iter,vertex,f_rank,f_corr,f_w,f_deg,f_ub,label`.
void save_training_csv(const TrainingSet& data, std::ostream& out);
TrainingSet load_training_csv(std::istream& in);

}  // namespace fraccol
