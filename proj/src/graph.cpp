#include "fraccol/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fraccol {

VertexSet::VertexSet(std::vector<int> m) : members(std::move(m)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool VertexSet::contains(int v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges,
             std::string name)
    : n_(n), m_(0), name_(std::move(name)) {
    if (n < 1) throw std::invalid_argument("Graph: vertex count must be >= 1");
    adj_bits_.assign(n, Bitset(n));
    neighbors_.resize(n);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("Graph: vertex id out of range");
        if (u == v) continue;
        if (adj_bits_[u].test(v)) continue;
        adj_bits_[u].set(v);
        adj_bits_[v].set(u);
        ++m_;
    }
    for (int v = 0; v < n; ++v) neighbors_[v] = adj_bits_[v].to_vector();
    density_ = n > 1 ? 2.0 * m_ / (double(n) * (n - 1)) : 0.0;
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
        for (int v : neighbors_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph parse_dimacs(std::istream& in, std::string name,
                   DimacsWarnings* warnings) {
    DimacsWarnings local;
    DimacsWarnings& warn = warnings ? *warnings : local;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<Bitset> seen;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("DIMACS parse error at line " + std::to_string(lineno) +
                         ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c' || line[0] == '\r') continue;
        std::istringstream ss(line);
        char tag;
        ss >> tag;
        if (tag == 'p') {
            std::string fmt;
            long long pn = -1, pm = -1;
            ss >> fmt >> pn >> pm;
            if (ss.fail() || (fmt != "edge" && fmt != "edges") || pn < 1 || pm < 0)
                fail("malformed problem line (expected `p edge n m`)");
            if (n >= 0) fail("duplicate problem line");
            n = int(pn);
            seen.assign(n, Bitset(n));
        } else if (tag == 'e') {
            if (n < 0) fail("edge line before `p` line");
            long long u = 0, v = 0;
            ss >> u >> v;
            if (ss.fail()) fail("malformed edge line");
            if (u < 1 || u > n || v < 1 || v > n)
                fail("vertex id out of range [1, " + std::to_string(n) + "]");
            int a = int(u) - 1, b = int(v) - 1;
            if (a == b) { ++warn.self_loops; continue; }
            if (seen[a].test(b)) { ++warn.duplicate_edges; continue; }
            seen[a].set(b);
            seen[b].set(a);
            edges.emplace_back(a, b);
        } else {
            fail(std::string("unknown line tag `") + tag + "`");
        }
    }
    if (n < 0) { lineno = 0; fail("missing `p edge n m` line"); }
    return Graph(n, edges, std::move(name));
}

Graph load_dimacs_file(const std::string& path, DimacsWarnings* warnings) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (name.size() > 4 && name.substr(name.size() - 4) == ".col")
        name = name.substr(0, name.size() - 4);
    return parse_dimacs(in, name, warnings);
}

void write_dimacs(const Graph& g, std::ostream& out) {
    out << "p edge " << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (auto [u, v] : g.edge_list()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

bool is_independent(const Graph& g, const VertexSet& s) {
    Bitset chosen(g.num_vertices());
    for (int v : s.members) {
        if (g.neighbor_bits(v).intersects(chosen)) return false;
        chosen.set(v);
    }
    return true;
}

bool is_maximal_independent(const Graph& g, const VertexSet& s) {
    if (!is_independent(g, s)) return false;
    Bitset excluded(g.num_vertices());
    for (int v : s.members) {
        excluded.set(v);
        excluded.or_with(g.neighbor_bits(v));
    }
    return excluded.count() == g.num_vertices();
}

namespace {

Bitset open_candidates(const Graph& g, const VertexSet& s) {
    Bitset cand(g.num_vertices());
    cand.set_all();
    for (int v : s.members) {
        cand.reset(v);
        cand.and_not(g.neighbor_bits(v));
    }
    return cand;
}

}  // namespace

VertexSet extend_to_maximal(const Graph& g, const VertexSet& s, Rng& rng) {
    if (!is_independent(g, s))
        throw std::invalid_argument("extend_to_maximal: set is not independent");
    std::vector<int> members = s.members;
    Bitset cand = open_candidates(g, s);
    int avail = cand.count();
    while (avail > 0) {
        int v = cand.nth_set(rng.uniform_int(avail));
        members.push_back(v);
        cand.reset(v);
        cand.and_not(g.neighbor_bits(v));
        avail = cand.count();
    }
    return VertexSet(std::move(members));
}

VertexSet extend_to_maximal_lowest(const Graph& g, const VertexSet& s) {
    if (!is_independent(g, s))
        throw std::invalid_argument("extend_to_maximal: set is not independent");
    std::vector<int> members = s.members;
    Bitset cand = open_candidates(g, s);
    while (cand.any()) {
        int v = cand.nth_set(0);
        members.push_back(v);
        cand.reset(v);
        cand.and_not(g.neighbor_bits(v));
    }
    return VertexSet(std::move(members));
}

std::vector<VertexSet> sample_uniform_mis(const Graph& g, int count, Rng& rng) {
    std::vector<VertexSet> out;
    out.reserve(std::max(count, 0));
    for (int k = 0; k < count; ++k)
        out.push_back(extend_to_maximal(g, VertexSet{}, rng));
    return out;
}

namespace {

// Bron-Kerbosch with pivoting over non-adjacency: maximal cliques of the
// complement are exactly the maximal independent sets.
void bron_kerbosch(const Graph& g, const std::vector<Bitset>& nonadj,
                   std::vector<int>& r, Bitset p, Bitset x,
                   std::vector<VertexSet>& out) {
    if (p.none() && x.none()) {
        out.push_back(VertexSet(r));
        return;
    }
    // Pivot: vertex of P | X maximizing |P & nonadj(u)|.
    int pivot = -1, pivot_score = -1;
    auto consider = [&](int u) {
        Bitset tmp = p;
        tmp.and_with(nonadj[u]);
        int score = tmp.count();
        if (score > pivot_score) {
            pivot_score = score;
            pivot = u;
        }
    };
    p.for_each(consider);
    x.for_each(consider);
    Bitset ext = p;
    ext.and_not(nonadj[pivot]);
    ext.for_each([&](int v) {
        Bitset p2 = p, x2 = x;
        p2.and_with(nonadj[v]);
        x2.and_with(nonadj[v]);
        r.push_back(v);
        bron_kerbosch(g, nonadj, r, std::move(p2), std::move(x2), out);
        r.pop_back();
        p.reset(v);
        x.set(v);
    });
}

}  // namespace

std::vector<VertexSet> enumerate_maximal_independent_sets(const Graph& g,
                                                          int max_vertices) {
    const int n = g.num_vertices();
    if (n > max_vertices)
        throw std::invalid_argument(
            "enumerate_maximal_independent_sets: graph too large (" +
            std::to_string(n) + " > " + std::to_string(max_vertices) + ")");
    std::vector<Bitset> nonadj(n, Bitset(n));
    for (int v = 0; v < n; ++v) {
        nonadj[v].set_all();
        nonadj[v].reset(v);
        nonadj[v].and_not(g.neighbor_bits(v));
    }
    Bitset p(n), x(n);
    p.set_all();
    std::vector<int> r;
    std::vector<VertexSet> out;
    bron_kerbosch(g, nonadj, r, std::move(p), std::move(x), out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace fraccol
