#include "fraccol/mlmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fraccol {

const std::array<std::string, kNumFeatures> kFeatureOrder = {
    "ranking", "correlation", "weight", "degree", "upper_bound"};

SvmModel default_svm_model() {
    SvmModel m;
    m.weights = {1.6557, -1.0619, -4.6320, -1.5342, 5.4064};
    m.intercept = 1.1727;
    return m;
}

LogisticParams default_logistic_params() { return {9.7750, 12.5564}; }

SamplePool build_sample_pool(const Graph& g, const DualSolution& duals, int K,
                             Rng& rng) {
    if (K < 2)
        throw std::invalid_argument(
            "build_sample_pool: K must be >= 2 (correlation undefined)");
    SamplePool pool;
    pool.sets = sample_uniform_mis(g, K, rng);
    pool.objectives.resize(K);
    for (int k = 0; k < K; ++k) {
        double w = 0.0;
        for (int v : pool.sets[k].members) w += duals.pi[v];
        pool.objectives[k] = 1.0 - w;
    }
    // Dense ranks, ties broken by sample index (earlier sample ranks better).
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pool.objectives[a] < pool.objectives[b];
    });
    pool.ranks.resize(K);
    for (int pos = 0; pos < K; ++pos) pool.ranks[order[pos]] = pos + 1;

    int n = g.num_vertices();
    pool.presence.assign(n, std::vector<uint8_t>(K, 0));
    for (int k = 0; k < K; ++k)
        for (int v : pool.sets[k].members) pool.presence[v][k] = 1;
    pool.vertex_frequency.resize(n);
    for (int v = 0; v < n; ++v) {
        int c = 0;
        for (int k = 0; k < K; ++k) c += pool.presence[v][k];
        pool.vertex_frequency[v] = double(c) / K;
    }
    pool.mean_objective =
        std::accumulate(pool.objectives.begin(), pool.objectives.end(), 0.0) / K;
    return pool;
}

double correlation_feature(const SamplePool& pool, int vertex) {
    int K = pool.size();
    double sbar = pool.vertex_frequency[vertex];
    double obar = pool.mean_objective;
    double cov = 0.0, vs = 0.0, vo = 0.0;
    for (int k = 0; k < K; ++k) {
        double ds = pool.presence[vertex][k] - sbar;
        double dk = pool.objectives[k] - obar;
        cov += ds * dk;
        vs += ds * ds;
        vo += dk * dk;
    }
    if (vs < 1e-15 || vo < 1e-15) return 0.0;
    return cov / (std::sqrt(vs) * std::sqrt(vo));
}

double ranking_feature(const SamplePool& pool, int vertex) {
    double sum = 0.0;
    for (int k = 0; k < pool.size(); ++k)
        if (pool.presence[vertex][k]) sum += 1.0 / pool.ranks[k];
    return sum;
}

std::vector<FeatureVector> extract_features(const Graph& g,
                                            const DualSolution& duals,
                                            const SamplePool& pool) {
    int n = g.num_vertices();
    double pi_total = std::accumulate(duals.pi.begin(), duals.pi.end(), 0.0);
    std::vector<FeatureVector> raw(n);
    for (int v = 0; v < n; ++v) {
        double neighbor_pi = 0.0;
        for (int u : g.neighbors(v)) neighbor_pi += duals.pi[u];
        raw[v] = {ranking_feature(pool, v),
                  correlation_feature(pool, v),
                  duals.pi[v],
                  double(g.degree(v)),
                  // pi_v plus weights of all non-neighbors other than v
                  duals.pi[v] + (pi_total - duals.pi[v] - neighbor_pi)};
    }
    // Instance-wise min-max normalization; constant features map to 0.
    for (int f = 0; f < kNumFeatures; ++f) {
        double lo = raw[0][f], hi = raw[0][f];
        for (int v = 1; v < n; ++v) {
            lo = std::min(lo, raw[v][f]);
            hi = std::max(hi, raw[v][f]);
        }
        double span = hi - lo;
        for (int v = 0; v < n; ++v)
            raw[v][f] = span > 1e-12 ? (raw[v][f] - lo) / span : 0.0;
    }
    return raw;
}

double svm_score(const SvmModel& model, const FeatureVector& f) {
    double d = model.intercept;
    for (int i = 0; i < kNumFeatures; ++i) d += model.weights[i] * f[i];
    return d;
}

double logistic(const LogisticParams& params, double d) {
    double z = params.beta0 * d + params.beta1;
    double p;
    if (z >= 0) {
        double e = std::exp(-z);
        p = e / (1.0 + e);
    } else {
        p = 1.0 / (1.0 + std::exp(z));
    }
    // keep the output strictly inside (0,1) even where exp saturates
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon();
    return std::min(std::max(p, lo), hi);
}

namespace {

struct WeightedRow {
    const FeatureVector* f;
    double y;     // +1 / -1
    double cost;  // class cost
};

std::vector<WeightedRow> weighted_rows(const TrainingSet& data, double C,
                                       int* pos_out = nullptr,
                                       int* neg_out = nullptr) {
    int pos = 0, neg = 0;
    for (const auto& r : data.rows) (r.label ? pos : neg)++;
    if (pos_out) *pos_out = pos;
    if (neg_out) *neg_out = neg;
    double cpos = pos > 0 ? C * double(neg) / double(pos) : C;
    std::vector<WeightedRow> rows;
    rows.reserve(data.rows.size());
    for (const auto& r : data.rows)
        rows.push_back({&r.features, r.label ? 1.0 : -1.0,
                        r.label ? cpos : C});
    return rows;
}

}  // namespace

double svm_objective(const TrainingSet& data, double C, const SvmModel& m) {
    auto rows = weighted_rows(data, C);
    double total_cost = 0.0;
    for (const auto& r : rows) total_cost += r.cost;
    double lambda = 1.0 / total_cost;
    double reg = 0.0;
    for (double w : m.weights) reg += w * w;
    double loss = 0.0;
    for (const auto& r : rows) {
        double margin = r.y * svm_score(m, *r.f);
        loss += r.cost * std::max(0.0, 1.0 - margin);
    }
    return 0.5 * lambda * reg + loss / total_cost;
}

namespace {

// Minimizes the objective along a direction. Restricted to a line it is
// convex piecewise quadratic, so its one-sided derivative is nondecreasing
// in t; bisection on that derivative finds the minimizer (a kink or an
// interior quadratic minimum) to machine precision.
double exact_line_search(const std::vector<WeightedRow>& rows,
                         double total_cost, double lambda, const SvmModel& m,
                         const std::array<double, kNumFeatures>& dw,
                         double db) {
    double w_dot_d = 0.0, d_dot_d = 0.0;
    for (int i = 0; i < kNumFeatures; ++i) {
        w_dot_d += m.weights[i] * dw[i];
        d_dot_d += dw[i] * dw[i];
    }
    std::vector<double> g(rows.size()), margin(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
        double s = 0.0;
        for (int i = 0; i < kNumFeatures; ++i) s += dw[i] * (*rows[k].f)[i];
        g[k] = rows[k].y * (s + db);
        margin[k] = rows[k].y * svm_score(m, *rows[k].f);
    }
    // Right derivative of F at step t.
    auto deriv = [&](double t) {
        double d = lambda * (w_dot_d + t * d_dot_d);
        for (size_t k = 0; k < rows.size(); ++k)
            if (margin[k] + t * g[k] < 1.0)
                d -= rows[k].cost / total_cost * g[k];
        return d;
    };
    if (deriv(0.0) >= 0.0 && deriv(-1e-12) <= 0.0) return 0.0;
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (deriv(lo) > 0.0 && ++guard < 80) lo *= 2.0;
    guard = 0;
    while (deriv(hi) < 0.0 && ++guard < 80) hi *= 2.0;
    if (deriv(lo) > 0.0 || deriv(hi) < 0.0) return 0.0;  // no usable bracket
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (deriv(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SvmModel train_svm(const TrainingSet& data, const SvmTrainConfig& config,
                   SvmTrainReport* report) {
    int pos = 0, neg = 0;
    auto rows = weighted_rows(data, config.C, &pos, &neg);
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("train_svm: both classes required");

    double total_cost = 0.0;
    for (const auto& r : rows) total_cost += r.cost;
    double lambda = 1.0 / total_cost;

    // Pegasos-style subgradient descent on
    //   0.5*lambda*|w|^2 + (1/total_cost) * sum_k cost_k * hinge_k
    // with seeded per-epoch shuffling and tail averaging.
    const size_t N = rows.size();
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(config.seed, 0x5f3759df));

    SvmModel m;  // zero init
    SvmModel avg;
    long avg_count = 0;
    long t = 0;
    const int tail_epochs = std::max(1, config.epochs / 4);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (size_t i = N - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_int(int(i + 1))]);
        for (size_t i = 0; i < N; ++i) {
            const auto& r = rows[order[i]];
            ++t;
            double eta = 1.0 / (lambda * double(t));
            double margin = r.y * svm_score(m, *r.f);
            double shrink = 1.0 - eta * lambda;
            for (auto& w : m.weights) w *= shrink;
            if (margin < 1.0) {
                // Per-sample estimate of the loss term: sample k uniformly,
                // E[N * c_k / total * hinge_k] recovers the weighted mean.
                double g = eta * double(N) * r.cost / total_cost * r.y;
                for (int f = 0; f < kNumFeatures; ++f)
                    m.weights[f] += g * (*r.f)[f];
                m.intercept += g;
            }
        }
        if (epoch >= config.epochs - tail_epochs) {
            for (int f = 0; f < kNumFeatures; ++f) avg.weights[f] += m.weights[f];
            avg.intercept += m.intercept;
            ++avg_count;
        }
    }
    for (int f = 0; f < kNumFeatures; ++f) avg.weights[f] /= double(avg_count);
    avg.intercept /= double(avg_count);

    // Polish: alternating exact line searches along the subgradient and the
    // coordinate axes, keeping the best point seen. This pins the model near
    // stationarity of the hinge objective.
    auto objective = [&](const SvmModel& mm) {
        double reg = 0.0;
        for (double w : mm.weights) reg += w * w;
        double loss = 0.0;
        for (const auto& r : rows)
            loss += r.cost *
                    std::max(0.0, 1.0 - r.y * svm_score(mm, *r.f));
        return 0.5 * lambda * reg + loss / total_cost;
    };
    auto search_and_move = [&](SvmModel& mm,
                               const std::array<double, kNumFeatures>& dw,
                               double db) {
        double step = exact_line_search(rows, total_cost, lambda, mm, dw, db);
        for (int f = 0; f < kNumFeatures; ++f) mm.weights[f] += step * dw[f];
        mm.intercept += step * db;
        return std::abs(step);
    };
    SvmModel cur = avg;
    SvmModel best = avg;
    double best_f = objective(best);
    for (int round = 0; round < 40; ++round) {
        std::array<double, kNumFeatures> gw{};
        double gb = 0.0;
        for (const auto& r : rows) {
            if (r.y * svm_score(cur, *r.f) >= 1.0) continue;
            double coef = r.cost / total_cost * r.y;
            for (int f = 0; f < kNumFeatures; ++f) gw[f] -= coef * (*r.f)[f];
            gb -= coef;
        }
        for (int f = 0; f < kNumFeatures; ++f)
            gw[f] += lambda * cur.weights[f];
        std::array<double, kNumFeatures> dir;
        for (int f = 0; f < kNumFeatures; ++f) dir[f] = -gw[f];
        double moved = search_and_move(cur, dir, -gb);
        std::array<double, kNumFeatures> axis{};
        moved += search_and_move(cur, axis, 1.0);  // intercept axis
        for (int f = 0; f < kNumFeatures; ++f) {
            axis.fill(0.0);
            axis[f] = 1.0;
            moved += search_and_move(cur, axis, 0.0);
        }
        double f_cur = objective(cur);
        if (f_cur < best_f) {
            best_f = f_cur;
            best = cur;
        }
        if (moved < 1e-13) break;
    }
    avg = best;

    if (report) {
        int correct = 0;
        double ph = 0.0, nh = 0.0;
        for (const auto& r : data.rows) {
            double d = svm_score(avg, r.features);
            int pred = d >= 0 ? 1 : 0;
            if (pred == r.label) ++correct;
            double y = r.label ? 1.0 : -1.0;
            double h = std::max(0.0, 1.0 - y * d);
            (r.label ? ph : nh) += h;
        }
        report->accuracy = double(correct) / double(N);
        report->positive_hinge = pos ? ph / pos : 0.0;
        report->negative_hinge = neg ? nh / neg : 0.0;
        report->objective = svm_objective(data, config.C, avg);
    }
    return avg;
}

LogisticParams tune_logistic(
    const std::vector<LogisticParams>& grid,
    const std::function<double(const LogisticParams&)>& objective) {
    if (grid.empty())
        throw std::invalid_argument("tune_logistic: grid must be nonempty");
    int best = 0;
    double best_val = objective(grid[0]);
    for (size_t i = 1; i < grid.size(); ++i) {
        double val = objective(grid[i]);
        if (val < best_val) {
            best_val = val;
            best = int(i);
        }
    }
    return grid[best];
}

std::vector<LogisticParams> default_logistic_grid() {
    std::vector<LogisticParams> grid;
    for (int i = 0; i < 11; ++i) {
        double b0 = 0.1 * std::pow(1000.0, i / 10.0);  // 0.1 .. 100
        for (int j = 0; j < 11; ++j) {
            double b1 = -20.0 + 4.0 * j;
            grid.push_back({b0, b1});
        }
    }
    return grid;
}

void save_model(const SvmModel& model, const LogisticParams& params,
                std::ostream& out) {
    nlohmann::ordered_json j;
    j["feature_order"] = kFeatureOrder;
    j["weights"] = model.weights;
    j["intercept"] = model.intercept;
    j["beta0"] = params.beta0;
    j["beta1"] = params.beta1;
    j["normalization"] = "minmax";
    out << j.dump(2) << '\n';
}

std::pair<SvmModel, LogisticParams> load_model(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    SvmModel m;
    auto order = j.at("feature_order").get<std::vector<std::string>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    if (order.size() != kNumFeatures || weights.size() != kNumFeatures)
        throw std::runtime_error("model file: expected 5 features");
    for (int i = 0; i < kNumFeatures; ++i)
        if (order[i] != kFeatureOrder[i])
            throw std::runtime_error("model file: unexpected feature order");
    std::copy(weights.begin(), weights.end(), m.weights.begin());
    m.intercept = j.at("intercept").get<double>();
    LogisticParams p{j.at("beta0").get<double>(), j.at("beta1").get<double>()};
    return {m, p};
}

std::pair<SvmModel, LogisticParams> load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_model(in);
}

void save_training_csv(const TrainingSet& data, std::ostream& out) {
    out << "graph,iter,vertex,f_rank,f_corr,f_w,f_deg,f_ub,label\n";
    char buf[64];
    for (const auto& r : data.rows) {
        out << r.graph << ',' << r.iteration << ',' << r.vertex;
        for (int f = 0; f < kNumFeatures; ++f) {
            std::snprintf(buf, sizeof buf, "%.9g", r.features[f]);
            out << ',' << buf;
        }
        out << ',' << r.label << '\n';
    }
}

TrainingSet load_training_csv(std::istream& in) {
    TrainingSet data;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("training CSV: row " + std::to_string(lineno) +
                                 ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line.rfind("graph,iter,vertex", 0) != 0)
                fail("missing header");
            continue;
        }
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 4 + kNumFeatures) fail("expected 9 columns");
        TrainingRow r;
        try {
            r.graph = fields[0];
            r.iteration = std::stoi(fields[1]);
            r.vertex = std::stoi(fields[2]);
            for (int f = 0; f < kNumFeatures; ++f)
                r.features[f] = std::stod(fields[3 + f]);
            r.label = std::stoi(fields.back());
        } catch (const std::exception&) {
            fail("malformed value");
        }
        if (r.label != 0 && r.label != 1) fail("label must be 0 or 1");
        data.rows.push_back(std::move(r));
    }
    return data;
}

}  // namespace fraccol
