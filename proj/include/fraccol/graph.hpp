#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fraccol/bitset.hpp"
#include "fraccol/rng.hpp"

namespace fraccol {

// Sorted, duplicate-free list of vertex ids. The value type for independent
// sets and columns throughout.
struct VertexSet {
    std::vector<int> members;

    VertexSet() = default;
    explicit VertexSet(std::vector<int> m);  // sorts and dedups

    int size() const { return int(members.size()); }
    bool empty() const { return members.empty(); }
    bool contains(int v) const;

    auto operator<=>(const VertexSet&) const = default;
};

// Immutable undirected graph. Adjacency is stored both as bitset rows (fast
// independence probes) and neighbor lists (iteration).
class Graph {
public:
    Graph(int n, const std::vector<std::pair<int, int>>& edges,
          std::string name = {});

    int num_vertices() const { return n_; }
    int num_edges() const { return m_; }
    double density() const { return density_; }
    const std::string& name() const { return name_; }

    bool has_edge(int u, int v) const { return adj_bits_[u].test(v); }
    int degree(int v) const { return int(neighbors_[v].size()); }
    const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
    const Bitset& neighbor_bits(int v) const { return adj_bits_[v]; }

    // Edges as sorted (u < v) pairs, ascending.
    std::vector<std::pair<int, int>> edge_list() const;

private:
    int n_;
    int m_;
    double density_;
    std::string name_;
    std::vector<Bitset> adj_bits_;
    std::vector<std::vector<int>> neighbors_;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimacsWarnings {
    int duplicate_edges = 0;
    int self_loops = 0;
};

// DIMACS .col reader. 1-based ids in the file, 0-based in the Graph.
// Duplicate edges and self-loops are dropped and counted.
Graph parse_dimacs(std::istream& in, std::string name = {},
                   DimacsWarnings* warnings = nullptr);
Graph load_dimacs_file(const std::string& path,
                       DimacsWarnings* warnings = nullptr);

// Writer: `p edge n m` then sorted `e u v` lines, 1-based.
void write_dimacs(const Graph& g, std::ostream& out);

bool is_independent(const Graph& g, const VertexSet& s);
bool is_maximal_independent(const Graph& g, const VertexSet& s);

// Extends an independent set to a maximal one; candidate order is drawn
// uniformly from rng. Throws std::invalid_argument if s is not independent.
VertexSet extend_to_maximal(const Graph& g, const VertexSet& s, Rng& rng);

// Deterministic variant: always extends with the lowest-id candidate.
VertexSet extend_to_maximal_lowest(const Graph& g, const VertexSet& s);

// `count` maximal independent sets, each grown from scratch by uniformly
// random candidate picks. Duplicates permitted.
std::vector<VertexSet> sample_uniform_mis(const Graph& g, int count, Rng& rng);

// All maximal independent sets (Bron-Kerbosch with pivoting on the
// complement). Refuses graphs with more than `max_vertices` vertices.
std::vector<VertexSet> enumerate_maximal_independent_sets(
    const Graph& g, int max_vertices = 25);

}  // namespace fraccol
