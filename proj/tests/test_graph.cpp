#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "fraccol/graph.hpp"
#include "support/oracles.hpp"

using namespace fraccol;
namespace tt = fraccol::test;

TEST_CASE("parse_dimacs handles the basic format") {
    std::istringstream in("c a comment\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    Graph g = parse_dimacs(in);
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
    CHECK(g.density() == doctest::Approx(1.0));
}

TEST_CASE("parse_dimacs edgeless graph") {
    std::istringstream in("p edge 2 0\n");
    Graph g = parse_dimacs(in);
    CHECK(g.num_vertices() == 2);
    CHECK(g.num_edges() == 0);
    CHECK(g.density() == 0.0);
}

TEST_CASE("parse_dimacs drops duplicates and self-loops with counts") {
    std::istringstream in("p edge 3 4\ne 1 2\ne 2 1\ne 2 2\ne 2 3\n");
    DimacsWarnings warn;
    Graph g = parse_dimacs(in, "t", &warn);
    CHECK(g.num_edges() == 2);
    CHECK(warn.duplicate_edges == 1);
    CHECK(warn.self_loops == 1);
}

TEST_CASE("parse_dimacs error cases name the line") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_dimacs(in);
    };
    CHECK_THROWS_WITH_AS(parse("p edge 2 1\ne 1 5\n"),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse("e 1 2\n"), doctest::Contains("line 1"),
                         ParseError);
    CHECK_THROWS_AS(parse("p edge x y\n"), ParseError);
    CHECK_THROWS_AS(parse("c only comments\n"), ParseError);
}

TEST_CASE("myciel4 fixture matches published size and density") {
    DimacsWarnings warn;
    Graph g = load_dimacs_file(std::string(FRACCOL_TEST_DATA) + "/myciel4.col",
                               &warn);
    CHECK(g.num_vertices() == 23);
    CHECK(g.num_edges() == 71);
    CHECK(g.density() == doctest::Approx(0.281).epsilon(1e-2));
    CHECK(g.name() == "myciel4");
}

TEST_CASE("density recomputes from the edge set") {
    Graph g = tt::erdos_renyi(17, 0.4, 7);
    double recomputed =
        2.0 * g.num_edges() / (17.0 * 16.0);
    CHECK(std::abs(g.density() - recomputed) < 1e-12);
}

TEST_CASE("write/parse round-trips the edge set exactly") {
    for (uint64_t seed : {1, 2, 3}) {
        Graph g = tt::erdos_renyi(12, 0.35, seed);
        std::ostringstream out;
        write_dimacs(g, out);
        std::istringstream in(out.str());
        Graph h = parse_dimacs(in);
        CHECK(g.edge_list() == h.edge_list());
    }
}

TEST_CASE("is_independent") {
    Graph tri = tt::triangle();
    CHECK(is_independent(tri, VertexSet({0})));
    CHECK_FALSE(is_independent(tri, VertexSet({0, 1})));
    Graph c5 = tt::cycle(5);
    CHECK(is_independent(c5, VertexSet({0, 2})));
}

TEST_CASE("is_maximal_independent") {
    Graph c5 = tt::cycle(5);
    CHECK(is_maximal_independent(c5, VertexSet({0, 2})));
    CHECK_FALSE(is_maximal_independent(c5, VertexSet({0})));
    Graph e4 = tt::edgeless(4);
    CHECK(is_maximal_independent(e4, VertexSet({0, 1, 2, 3})));
}

TEST_CASE("extend_to_maximal") {
    Graph c5 = tt::cycle(5);
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        VertexSet s = extend_to_maximal(c5, VertexSet({0}), rng);
        bool ok = s == VertexSet({0, 2}) || s == VertexSet({0, 3});
        CHECK(ok);
    }

    // already-maximal input is a fixed point
    VertexSet fixed({0, 2});
    CHECK(extend_to_maximal(c5, fixed, rng) == fixed);

    Graph e3 = tt::edgeless(3);
    CHECK(extend_to_maximal(e3, VertexSet{}, rng) == VertexSet({0, 1, 2}));

    Graph tri = tt::triangle();
    CHECK_THROWS_AS(extend_to_maximal(tri, VertexSet({0, 1}), rng),
                    std::invalid_argument);
}

TEST_CASE("sample_uniform_mis basics") {
    Rng rng(7);
    Graph e3 = tt::edgeless(3);
    auto sets = sample_uniform_mis(e3, 5, rng);
    REQUIRE(sets.size() == 5);
    for (const auto& s : sets) CHECK(s == VertexSet({0, 1, 2}));

    Graph tri = tt::triangle();
    for (const auto& s : sample_uniform_mis(tri, 100, rng))
        CHECK(s.size() == 1);
}

TEST_CASE("sample_uniform_mis reaches every MIS of C5") {
    Graph c5 = tt::cycle(5);
    Rng rng(11);
    std::set<std::vector<int>> seen;
    for (const auto& s : sample_uniform_mis(c5, 1000, rng))
        seen.insert(s.members);
    CHECK(seen.size() == 5);
    for (int i = 0; i < 5; ++i) {
        VertexSet expect({i, (i + 2) % 5});
        CHECK(seen.count(expect.members));
    }
}

TEST_CASE("samples are maximal independent sets and seeds reproduce") {
    for (uint64_t seed : {3, 9}) {
        Graph g = tt::erdos_renyi(20, 0.3, seed);
        Rng a(seed), b(seed);
        auto sa = sample_uniform_mis(g, 40, a);
        auto sb = sample_uniform_mis(g, 40, b);
        CHECK(sa == sb);
        for (const auto& s : sa) CHECK(is_maximal_independent(g, s));
    }
}

TEST_CASE("enumerate_maximal_independent_sets") {
    Graph c5 = tt::cycle(5);
    auto sets = enumerate_maximal_independent_sets(c5);
    CHECK(sets.size() == 5);
    for (const auto& s : sets) CHECK(is_maximal_independent(c5, s));

    Graph tri = tt::triangle();
    CHECK(enumerate_maximal_independent_sets(tri).size() == 3);

    // cross-check against subset enumeration on random graphs
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = tt::erdos_renyi(9, 0.4, 100 + seed);
        auto fast = enumerate_maximal_independent_sets(g);
        int slow = 0;
        for (uint32_t mask = 0; mask < (1u << 9); ++mask) {
            std::vector<int> mem;
            for (int v = 0; v < 9; ++v)
                if (mask >> v & 1) mem.push_back(v);
            if (is_maximal_independent(g, VertexSet(mem))) ++slow;
        }
        CHECK(int(fast.size()) == slow);
    }
}
