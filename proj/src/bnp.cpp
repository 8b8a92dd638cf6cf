#include "fraccol/bnp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

namespace fraccol {

const char* to_string(BnpStatus s) {
    switch (s) {
        case BnpStatus::Optimal: return "optimal";
        case BnpStatus::GapReported: return "gap_reported";
        case BnpStatus::RootUnsolved: return "root_unsolved";
    }
    return "?";
}

std::vector<int> primal_heuristic(const Graph& g) {
    const int n = g.num_vertices();
    std::vector<int> color(n, -1);
    std::vector<Bitset> saturation(n, Bitset(n));  // colors seen next door
    for (int step = 0; step < n; ++step) {
        int pick = -1, pick_sat = -1, pick_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (color[v] >= 0) continue;
            int sat = saturation[v].count();
            if (sat > pick_sat ||
                (sat == pick_sat && g.degree(v) > pick_deg)) {
                pick = v;
                pick_sat = sat;
                pick_deg = g.degree(v);
            }
        }
        int c = 0;
        while (saturation[pick].test(c)) ++c;
        color[pick] = c;
        for (int u : g.neighbors(pick)) saturation[u].set(c);
    }
    return color;
}

int color_count(const std::vector<int>& coloring) {
    int mx = -1;
    for (int c : coloring) mx = std::max(mx, c);
    return mx + 1;
}

double lagrangian_bound(double rmp_objective, double min_reduced_cost) {
    if (min_reduced_cost < 0.0)
        return rmp_objective / (1.0 - min_reduced_cost);
    return rmp_objective;
}

double lagrangian_bound(double rmp_objective, const PricingResult& pricing) {
    if (!pricing.proven_optimal)
        throw std::invalid_argument(
            "lagrangian_bound: minimum reduced cost is not proven");
    return lagrangian_bound(rmp_objective, pricing.best_reduced_cost);
}

namespace {

constexpr double kIntTol = 1e-6;

// Rebuilds a child node from a parent by applying one decision to the
// parent's contracted graph (a, b are contracted ids, a < b).
BnpNode make_child(const BnpNode& parent, BranchDecision decision, int a,
                   int b) {
    const Graph& pg = *parent.contracted;
    const int pn = pg.num_vertices();
    BnpNode child;
    child.decisions = parent.decisions;
    child.decisions.push_back(decision);
    child.depth = parent.depth + 1;
    child.local_lb = parent.local_lb;

    std::vector<int> remap(pn);
    std::vector<std::pair<int, int>> edges;
    if (decision.kind == BranchDecision::Kind::Same) {
        // Merge b into a; vertices above b shift down.
        for (int v = 0; v < pn; ++v)
            remap[v] = v == b ? a : (v > b ? v - 1 : v);
        for (auto [u, v] : pg.edge_list()) {
            int x = remap[u], y = remap[v];
            if (x != y) edges.emplace_back(std::min(x, y), std::max(x, y));
        }
        child.contracted = std::make_shared<Graph>(pn - 1, edges, pg.name());
    } else {
        for (int v = 0; v < pn; ++v) remap[v] = v;
        edges = pg.edge_list();
        edges.emplace_back(a, b);
        child.contracted = std::make_shared<Graph>(pn, edges, pg.name());
    }
    child.mapping.resize(parent.mapping.size());
    for (size_t v = 0; v < parent.mapping.size(); ++v)
        child.mapping[v] = remap[parent.mapping[v]];

    // Project inherited columns: drop violators, remap, restore maximality.
    for (const auto& col : parent.pool) {
        bool has_a = col.set.contains(a);
        bool has_b = col.set.contains(b);
        if (decision.kind == BranchDecision::Kind::Same) {
            if (has_a != has_b) continue;
        } else {
            if (has_a && has_b) continue;
        }
        std::vector<int> members;
        for (int v : col.set.members) members.push_back(remap[v]);
        VertexSet s(std::move(members));
        if (!is_independent(*child.contracted, s)) continue;
        Column c;
        c.set = extend_to_maximal_lowest(*child.contracted, s);
        bool dup = false;
        for (const auto& existing : child.pool)
            if (existing.set == c.set) { dup = true; break; }
        if (!dup) child.pool.push_back(std::move(c));
    }
    return child;
}

// Original-graph representatives of a contracted vertex pair: the lowest
// original ids mapping onto each side.
std::pair<int, int> original_pair(const BnpNode& node, int a, int b) {
    int ou = -1, ov = -1;
    for (size_t v = 0; v < node.mapping.size(); ++v) {
        if (node.mapping[v] == a && ou < 0) ou = int(v);
        if (node.mapping[v] == b && ov < 0) ov = int(v);
    }
    if (ou > ov) std::swap(ou, ov);
    return {ou, ov};
}

}  // namespace

std::optional<std::pair<BnpNode, BnpNode>> branch(const BnpNode& node,
                                                  const RmpState& fractional) {
    const auto& cols = fractional.columns();
    const auto& x = fractional.primal();
    std::vector<int> frac;
    for (size_t j = 0; j < cols.size(); ++j)
        if (x[j] > kIntTol && x[j] < 1.0 - kIntTol) frac.push_back(int(j));
    if (frac.empty()) return std::nullopt;

    const int n = node.contracted->num_vertices();
    // Candidate pairs co-occur in a fractional column (hence non-adjacent).
    int best_a = -1, best_b = -1;
    double best_score = -1.0;
    std::vector<std::vector<uint8_t>> seen(n, std::vector<uint8_t>(n, 0));
    for (int j : frac) {
        const auto& mem = cols[j].set.members;
        for (size_t p = 0; p < mem.size(); ++p) {
            for (size_t q = p + 1; q < mem.size(); ++q) {
                int a = mem[p], b = mem[q];
                if (seen[a][b]) continue;
                seen[a][b] = 1;
                double separating = 0.0;
                bool together = false, apart = false;
                for (int jj : frac) {
                    bool ha = cols[jj].set.contains(a);
                    bool hb = cols[jj].set.contains(b);
                    if (ha && hb) together = true;
                    if (ha != hb) {
                        apart = true;
                        separating += x[jj];
                    }
                }
                if (!together || !apart) continue;
                if (separating > best_score + 1e-12 ||
                    (separating > best_score - 1e-12 &&
                     (best_a < 0 || a < best_a ||
                      (a == best_a && b < best_b)))) {
                    best_score = separating;
                    best_a = a;
                    best_b = b;
                }
            }
        }
    }
    if (best_a < 0) return std::nullopt;

    auto [ou, ov] = original_pair(node, best_a, best_b);
    BnpNode same = make_child(
        node, {BranchDecision::Kind::Same, ou, ov}, best_a, best_b);
    BnpNode differ = make_child(
        node, {BranchDecision::Kind::Differ, ou, ov}, best_a, best_b);
    return std::make_pair(std::move(same), std::move(differ));
}

namespace {

// Coverage repair for inherited pools: any uncovered vertex gets a greedy
// maximal set seeded there.
void repair_pool(const Graph& g, std::vector<Column>& pool) {
    Bitset covered(g.num_vertices());
    for (const auto& c : pool)
        for (int v : c.set.members) covered.set(v);
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (covered.test(v)) continue;
        Column c;
        c.set = extend_to_maximal_lowest(g, VertexSet({v}));
        for (int u : c.set.members) covered.set(u);
        pool.push_back(std::move(c));
    }
}

// Proper coloring of the original graph from an integral covering solution.
std::vector<int> extract_coloring(const BnpNode& node,
                                  const RmpState& solved) {
    const auto& cols = solved.columns();
    const auto& x = solved.primal();
    const int cn = node.contracted->num_vertices();
    std::vector<int> contracted_color(cn, -1);
    int next = 0;
    for (size_t j = 0; j < cols.size(); ++j) {
        if (x[j] < 1.0 - kIntTol) continue;
        bool used = false;
        for (int v : cols[j].set.members)
            if (contracted_color[v] < 0) {
                contracted_color[v] = next;
                used = true;
            }
        if (used) ++next;
    }
    std::vector<int> coloring(node.mapping.size());
    for (size_t v = 0; v < node.mapping.size(); ++v)
        coloring[v] = contracted_color[node.mapping[v]];
    return coloring;
}

bool is_integral(const RmpState& solved) {
    for (double v : solved.primal())
        if (v > kIntTol && v < 1.0 - kIntTol) return false;
    return true;
}

}  // namespace

BnpStats run_bnp(const Graph& g, const BnpConfig& config, const SvmModel* model,
                 const LogisticParams* params) {
    const int n = g.num_vertices();
    BnpStats stats;
    WorkClock clock;
    Deadline total(clock, config.total_cutoff);

    // DSATUR incumbent; its classes seed the root pool with random columns.
    std::vector<int> incumbent = primal_heuristic(g);
    stats.upper_bound = color_count(incumbent);
    stats.best_coloring = incumbent;

    BnpNode root;
    root.contracted = std::make_shared<Graph>(n, g.edge_list(), g.name());
    root.mapping.resize(n);
    for (int v = 0; v < n; ++v) root.mapping[v] = v;
    {
        std::vector<std::vector<int>> classes(stats.upper_bound);
        for (int v = 0; v < n; ++v) classes[incumbent[v]].push_back(v);
        for (auto& cls : classes) {
            Column c;
            c.set = extend_to_maximal_lowest(g, VertexSet(std::move(cls)));
            root.pool.push_back(std::move(c));
        }
        Rng rng(mix_seed(config.cg.seed, 0));
        int count = config.cg.initial_columns > 0 ? config.cg.initial_columns
                                                  : 10 * n;
        for (auto& c : initial_columns(g, count, rng)) root.pool.push_back(std::move(c));
    }

    // Best-first on ceil(lb) with depth-3 plunging after each branching.
    struct OpenNode {
        BnpNode node;
        long seq;
    };
    std::deque<OpenNode> open;      // kept sorted by (ceil(lb), seq)
    std::deque<OpenNode> plunge;    // LIFO, bounded depth
    long seq_counter = 0;
    int plunge_run = 0;
    std::vector<double> unresolved_lbs;
    bool root_solved = false;

    auto push_open = [&](BnpNode&& node) {
        OpenNode entry{std::move(node), seq_counter++};
        auto key = [](const OpenNode& e) {
            return std::make_pair(std::ceil(e.node.local_lb - 1e-6), e.seq);
        };
        auto it = std::lower_bound(
            open.begin(), open.end(), entry,
            [&](const OpenNode& a, const OpenNode& b) { return key(a) < key(b); });
        open.insert(it, std::move(entry));
    };

    push_open(std::move(root));

    while (!open.empty() || !plunge.empty()) {
        if (total.expired()) break;
        OpenNode current = [&]() {
            if (!plunge.empty() && plunge_run < 3) {
                ++plunge_run;
                OpenNode e = std::move(plunge.back());
                plunge.pop_back();
                return e;
            }
            plunge_run = 0;
            while (!plunge.empty()) {
                push_open(std::move(plunge.back().node));
                plunge.pop_back();
            }
            OpenNode e = std::move(open.front());
            open.pop_front();
            return e;
        }();
        BnpNode& node = current.node;

        if (std::ceil(node.local_lb - 1e-6) >= stats.upper_bound) continue;
        ++stats.nodes_explored;

        CgConfig cg = config.cg;
        const int cn = node.contracted->num_vertices();
        cg.theta = node.depth == 0
                       ? cn
                       : std::max(1, int(std::ceil(config.theta_child_factor * cn)));
        if (cg.lambda == 0) cg.lambda = 10 * n;
        cg.cutoff_total = config.node_cutoff;
        cg.farley_early_stop = true;
        cg.seed = mix_seed(config.cg.seed, 0xb00 + uint64_t(current.seq));

        std::vector<Column> pool = node.pool;
        repair_pool(*node.contracted, pool);
        CgDriver driver(*node.contracted, cg, model, params, std::move(pool),
                        &clock);
        CgDriver::Step outcome = driver.run();

        double node_lb = node.local_lb;
        bool lp_certified = outcome == CgDriver::Step::Optimal;
        if (lp_certified)
            node_lb = std::max(node_lb, driver.rmp().objective());
        else if (driver.stats().has_lagrangian_bound)
            node_lb = std::max(node_lb, driver.stats().lagrangian_bound);
        else if (node.depth == 0) {
            // Root LP not solved and no valid bound: no gap to report.
            stats.status = BnpStatus::RootUnsolved;
            stats.global_lower_bound = 0.0;
            stats.gap_pct = std::numeric_limits<double>::quiet_NaN();
            stats.wall_time = clock.seconds();
            return stats;
        }
        if (node.depth == 0) root_solved = true;
        node.local_lb = node_lb;

        // Incumbent update from any integral covering solution.
        if (driver.rmp().solved() && is_integral(driver.rmp())) {
            std::vector<int> coloring = extract_coloring(node, driver.rmp());
            int used = color_count(coloring);
            if (used < stats.upper_bound) {
                stats.upper_bound = used;
                stats.best_coloring = std::move(coloring);
            }
        }

        if (std::ceil(node_lb - 1e-6) >= stats.upper_bound) continue;

        if (lp_certified && is_integral(driver.rmp())) continue;  // leaf

        node.pool = driver.rmp().columns();
        auto children = branch(node, driver.rmp());
        if (!children) {
            if (lp_certified) continue;  // integral certified solution: leaf
            // Not certified and nothing to branch on: the node stays open in
            // spirit; its bound keeps contributing to the global bound.
            unresolved_lbs.push_back(node_lb);
            continue;
        }
        children->first.local_lb = node_lb;
        children->second.local_lb = node_lb;
        plunge.push_back(OpenNode{std::move(children->second), seq_counter++});
        plunge.push_back(OpenNode{std::move(children->first), seq_counter++});
    }

    if (!root_solved) {
        stats.status = BnpStatus::RootUnsolved;
        stats.gap_pct = std::numeric_limits<double>::quiet_NaN();
        stats.wall_time = clock.seconds();
        return stats;
    }

    double glb = double(stats.upper_bound);
    for (const auto& e : open) glb = std::min(glb, e.node.local_lb);
    for (const auto& e : plunge) glb = std::min(glb, e.node.local_lb);
    for (double lb : unresolved_lbs) glb = std::min(glb, lb);
    if (std::ceil(glb - 1e-6) >= stats.upper_bound) glb = stats.upper_bound;

    stats.global_lower_bound = glb;
    stats.gap_pct = 100.0 * (stats.upper_bound - glb) / stats.upper_bound;
    stats.status = stats.gap_pct == 0.0 ? BnpStatus::Optimal
                                        : BnpStatus::GapReported;
    stats.wall_time = clock.seconds();
    return stats;
}

void write_bnp_record(std::ostream& out, const std::string& graph_name,
                      uint64_t seed, const BnpStats& stats) {
    nlohmann::ordered_json j;
    j["graph"] = graph_name;
    j["seed"] = seed;
    j["status"] = to_string(stats.status);
    j["chi_upper"] = stats.upper_bound;
    j["global_lb"] = stats.global_lower_bound;
    if (std::isnan(stats.gap_pct))
        j["gap_pct"] = nullptr;
    else
        j["gap_pct"] = stats.gap_pct;
    j["nodes"] = stats.nodes_explored;
    j["wall_time_s"] = stats.wall_time;
    out << j.dump(2) << '\n';
}

}  // namespace fraccol
