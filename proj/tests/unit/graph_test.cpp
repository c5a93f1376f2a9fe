#include <doctest.h>

#include "fixtures.hpp"
#include "uidiff/graph.hpp"

using namespace uidiff;
using testing::make_control;
using testing::make_dets;

TEST_CASE("single control has no neighbours") {
    auto d = make_dets(50, 50, {make_control(0, {0, 0, 5, 5})});
    for (int k : {1, 4, 10}) CHECK(graph::nearest_neighbors(0, d, k).empty());
}

TEST_CASE("collinear boxes pick the closest") {
    auto d = make_dets(100, 10, {make_control(0, {0, 0, 1, 1}), make_control(1, {10, 0, 11, 1}),
                                 make_control(2, {30, 0, 31, 1})});
    CHECK(graph::nearest_neighbors(0, d, 1) == std::vector<graph::NodeIndex>{1});
    CHECK(graph::nearest_neighbors(0, d, 2) == std::vector<graph::NodeIndex>{1, 2});
}

TEST_CASE("distance ties go to the smaller id") {
    auto d = make_dets(100, 100, {make_control(5, {50, 50, 60, 60}), make_control(9, {40, 50, 50, 60}),
                                  make_control(7, {60, 50, 70, 60})});
    CHECK(graph::nearest_neighbors(0, d, 1) == std::vector<graph::NodeIndex>{2});
}

TEST_CASE("empty set gives an empty graph") {
    auto g = graph::build_graph(make_dets(10, 10, {}), {});
    CHECK(g.empty());
    CHECK(g.edges().empty());
}

TEST_CASE("two controls with K = 3") {
    auto d = make_dets(50, 50, {make_control(0, {0, 0, 5, 5}), make_control(1, {10, 10, 15, 15})});
    auto g = graph::build_graph(d, {3});
    CHECK(g.edges().size() == 1);
    CHECK(g.neighbors(0).size() == 1);
    CHECK(g.neighbors(1).size() == 1);
    CHECK(g.has_edge(1, 0));
}

TEST_CASE("random sets agree with the full-sort oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = testing::random_dets(rng, 50);
        const int k = uniform_int(rng, 1, 10);
        auto g = graph::build_graph(d, {k});
        REQUIRE(g.size() == d.controls.size());
        for (std::size_t n = 0; n < d.controls.size(); ++n) {
            const auto expected = testing::reference_neighbors(d, n, k);
            CHECK(g.neighbors(n) == expected);
            CHECK(g.neighbors(n).size() == std::min<std::size_t>(k, d.controls.size() - 1));
            for (auto m : g.neighbors(n)) {
                CHECK(m != n);
                CHECK(g.has_edge(n, m));
                CHECK(g.has_edge(m, n));
            }
        }
        for (auto [a, b] : g.edges()) {
            CHECK(a < b);
            const auto& na = g.neighbors(a);
            const auto& nb = g.neighbors(b);
            CHECK((std::find(na.begin(), na.end(), b) != na.end() ||
                   std::find(nb.begin(), nb.end(), a) != nb.end()));
        }
    }
}

TEST_CASE("ten controls with K = 8 fill every list") {
    Rng rng(4);
    std::vector<Control> cs;
    for (int i = 0; i < 10; ++i) cs.push_back(make_control(i, {i * 20, i * 7, i * 20 + 10, i * 7 + 5}));
    auto g = graph::build_graph(make_dets(400, 200, cs), {8});
    for (std::size_t n = 0; n < g.size(); ++n) {
        CHECK(g.neighbors(n).size() == 8);
        for (std::size_t i = 1; i < g.neighbors(n).size(); ++i) {
            CHECK(euclidean_distance(g.node(n).bbox, g.node(g.neighbors(n)[i - 1]).bbox) <=
                  euclidean_distance(g.node(n).bbox, g.node(g.neighbors(n)[i]).bbox));
        }
    }
}

TEST_CASE("construction is deterministic and dumps as json") {
    Rng rng(2);
    auto d = testing::random_dets(rng, 30);
    auto g1 = graph::build_graph(d, {5});
    auto g2 = graph::build_graph(d, {5});
    CHECK(g1 == g2);
    auto j = graph::to_json(g1);
    CHECK(j.contains("nodes"));
    CHECK(j.contains("edges"));
    CHECK(j["edges"].size() == g1.edges().size());
}
