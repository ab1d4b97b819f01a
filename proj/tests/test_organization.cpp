#include "organization.hpp"

#include "errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace aida;

TEST_CASE("flat graphs are complete digraphs") {
    CHECK(OrgGraph::flat({"a"}).edge_count() == 0);
    CHECK(OrgGraph::flat({"a", "b", "c"}).edge_count() == 6);
    CHECK(OrgGraph::flat({"a", "b", "c", "d", "e"}).edge_count() == 20);
    CHECK_THROWS_AS(OrgGraph::flat({}), Error);

    // Brute-force pair enumeration for n = 3.
    const auto graph = OrgGraph::flat({"a", "b", "c"});
    for (const std::string from : {"a", "b", "c"}) {
        for (const std::string to : {"a", "b", "c"}) {
            CHECK(graph.can_communicate(from, to) == (from != to));
        }
    }
}

TEST_CASE("can_communicate respects direction and unknown vertices") {
    OrgGraph graph;
    graph.add_vertex("a");
    graph.add_vertex("b");
    graph.add_edge("a", "b");
    CHECK(graph.can_communicate("a", "b"));
    CHECK_FALSE(graph.can_communicate("b", "a"));
    CHECK_FALSE(graph.can_communicate("a", "a"));
    CHECK_THROWS_AS(graph.can_communicate("a", "zz"), Error);
    CHECK_THROWS_AS(graph.add_edge("a", "a"), Error);
}

TEST_CASE("edges carry a kind, defaulting to communication") {
    OrgGraph graph;
    graph.add_vertex("lead");
    graph.add_vertex("dev");
    graph.add_edge("lead", "dev", EdgeKind::instruction);
    graph.add_edge("dev", "lead");
    CHECK(graph.edge_kind("lead", "dev") == EdgeKind::instruction);
    CHECK(graph.edge_kind("dev", "lead") == EdgeKind::communication);
}

TEST_CASE("validate reports dangling endpoints and isolated vertices") {
    const auto ok = OrgGraph::flat({"a", "b", "c", "d"}).validate();
    CHECK(ok.empty());

    OrgGraph dangling;
    dangling.add_vertex("a");
    dangling.add_vertex("b");
    dangling.add_edge("a", "ghost");
    const auto issues = dangling.validate();
    REQUIRE_FALSE(issues.empty());
    CHECK(std::any_of(issues.begin(), issues.end(),
                      [](const auto& issue) { return issue.is_error; }));

    OrgGraph isolated;
    isolated.add_vertex("a");
    isolated.add_vertex("b");
    isolated.add_vertex("loner");
    isolated.add_edge("a", "b");
    const auto warnings = isolated.validate();
    REQUIRE(warnings.size() == 1);
    CHECK_FALSE(warnings[0].is_error);
}

TEST_CASE("flat graphs are vertex-transitive under id permutation") {
    std::mt19937 rng(3);
    std::vector<std::string> ids = {"a1", "a2", "a3", "a4", "a5"};
    const auto graph = OrgGraph::flat(ids);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> permuted = ids;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        const auto relabeled = OrgGraph::flat(permuted);
        CHECK(relabeled.edge_count() == graph.edge_count());
        for (const auto& from : ids) {
            for (const auto& to : ids) {
                if (from != to) {
                    CHECK(relabeled.can_communicate(from, to) == graph.can_communicate(from, to));
                }
            }
        }
    }
}

TEST_CASE("out_neighbors follows vertex order") {
    const auto graph = OrgGraph::flat({"x", "y", "z"});
    CHECK(graph.out_neighbors("y") == std::vector<std::string>{"x", "z"});
}
