#include <doctest.h>

#include "fixtures.hpp"
#include "uidiff/matching.hpp"

using namespace uidiff;
using namespace uidiff::matching;
using testing::make_control;
using testing::make_dets;

namespace {

struct Screen {
    Raster image;
    DetectionSet dets;
};

Screen three_controls() {
    Rng rng(77);
    Screen s{Raster(120, 80, Rgb{240, 240, 240}), {}};
    const BBox boxes[] = {{5, 5, 30, 20}, {50, 10, 80, 30}, {20, 50, 60, 70}};
    std::vector<Control> cs;
    for (int i = 0; i < 3; ++i) {
        s.image.blit(testing::random_texture(boxes[i].width(), boxes[i].height(), 3, rng), boxes[i].x1,
                     boxes[i].y1);
        cs.push_back(make_control(i, boxes[i], ControlCategory::Icon));
    }
    s.dets = make_dets(120, 80, cs);
    return s;
}

}  // namespace

TEST_CASE("visited nodes return the leaf score") {
    auto s = three_controls();
    auto g = graph::build_graph(s.dets, {2});
    PairScorer scorer(g, s.image, g, s.image, {});
    VisitedRecord visited(3, 3);
    visited.source[0] = true;
    CHECK(scorer.neighbor_similarity(0, 1, visited, 3) == scorer.base(0, 1));
    VisitedRecord fresh(3, 3);
    CHECK(scorer.neighbor_similarity(0, 1, fresh, 0) == scorer.base(0, 1));
}

TEST_CASE("single-node graphs fall back to the leaf score") {
    Rng rng(3);
    Raster img = testing::random_texture(20, 20, 2, rng);
    auto d = make_dets(20, 20, {make_control(0, {0, 0, 20, 20}, ControlCategory::Image)});
    auto g = graph::build_graph(d, {4});
    PairScorer scorer(g, img, g, img, {});
    CHECK(scorer.score(0, 0) == 1.0);
}

TEST_CASE("identical three-node graphs score 1 on corresponding nodes") {
    auto s = three_controls();
    auto g = graph::build_graph(s.dets, {2});
    for (int depth : {1, 2, 5}) {
        similarity::SimilarityParams p;
        p.context_depth = depth;
        PairScorer scorer(g, s.image, g, s.image, p);
        for (NodeIndex v = 0; v < 3; ++v) CHECK(scorer.score(v, v) == 1.0);
    }
}

TEST_CASE("layout check rejects neighbours on the wrong side") {
    // Two look-alike icons trade places: every pair has identical leaves, only the
    // relative layout tells them apart.
    Rng rng(5);
    Raster img(200, 60, Rgb{250, 250, 250});
    auto tex_a = testing::random_texture(20, 20, 4, rng);
    auto tex_b = testing::random_texture(20, 20, 4, rng);
    img.blit(tex_a, 10, 10);
    img.blit(tex_b, 150, 10);
    Raster swapped(200, 60, Rgb{250, 250, 250});
    swapped.blit(tex_b, 10, 10);
    swapped.blit(tex_a, 150, 10);
    auto d = make_dets(200, 60, {make_control(0, {10, 10, 30, 30}, ControlCategory::Icon),
                                 make_control(1, {150, 10, 170, 30}, ControlCategory::Icon)});
    auto ga = graph::build_graph(d, {1});
    auto gb = graph::build_graph(d, {1});
    similarity::SimilarityParams p;
    p.h = 64;
    PairScorer scorer(ga, img, gb, swapped, p);
    CHECK(scorer.layout_agrees(0, 1, 1, 0) == false);
    p.layout_tolerance = 1.0;
    PairScorer lenient(ga, img, gb, swapped, p);
    CHECK(lenient.layout_agrees(0, 1, 1, 0));
}

TEST_CASE("size gate") {
    CHECK(size_compatible({0, 0, 100, 20}, {0, 0, 92, 20}, 0.1));
    CHECK_FALSE(size_compatible({0, 0, 100, 20}, {0, 0, 80, 20}, 0.1));
    CHECK(size_compatible({0, 0, 100, 20}, {0, 0, 10, 2}, 1.0));
}

TEST_CASE("empty source leaves every target unmatched") {
    Rng rng(1);
    Raster img = testing::random_texture(100, 100, 5, rng);
    std::vector<Control> cs;
    for (int i = 0; i < 5; ++i) cs.push_back(make_control(i, {i * 20, 0, i * 20 + 10, 10}));
    auto gb = graph::build_graph(make_dets(100, 100, cs), {8});
    auto ga = graph::build_graph(make_dets(100, 100, {}), {8});
    auto r = assign_matches(ga, img, gb, img, {});
    CHECK(r.matches.empty());
    CHECK(r.unmatched_target == std::vector<ControlId>{0, 1, 2, 3, 4});
}

TEST_CASE("self matching is complete") {
    auto s = three_controls();
    auto g = graph::build_graph(s.dets, {8});
    auto r = assign_matches(g, s.image, g, s.image, {}, 2);
    REQUIRE(r.matches.size() == 3);
    for (const auto& m : r.matches) CHECK(m.source == m.target);
    CHECK(r.unmatched_source.empty());
    CHECK(r.unmatched_target.empty());
}

TEST_CASE("greedy assignment breaks ties by ids") {
    std::vector<Control> cs = {make_control(0, {0, 0, 5, 5}), make_control(1, {10, 0, 15, 5})};
    auto g = graph::build_graph(make_dets(20, 20, cs), {1});
    std::vector<PairScore> cands = {{1, 0, 0.9}, {0, 1, 0.9}, {0, 0, 0.9}, {1, 1, 0.95}};
    auto r = greedy_assign(cands, g, g);
    REQUIRE(r.matches.size() == 2);
    CHECK(r.matches[0] == PairScore{0, 0, 0.9});
    CHECK(r.matches[1] == PairScore{1, 1, 0.95});
}

TEST_CASE("random instances agree with the exhaustive reference") {
    Rng rng(2024);
    int with_matches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = testing::random_matching_instance(rng);
        auto ga = graph::build_graph(inst.dets_a, {inst.k});
        auto gb = graph::build_graph(inst.dets_b, {inst.k});
        auto got = assign_matches(ga, inst.image_a, gb, inst.image_b, inst.params, 1 + trial % 3);
        auto want = testing::reference_assign(inst);
        CHECK(got == want);
        if (!got.matches.empty()) ++with_matches;
    }
    CHECK(with_matches > 50);
}

TEST_CASE("match result json round trip") {
    MatchResult r{{{0, 1, 0.875}, {2, 0, 1.0}}, {1}, {2, 3}};
    CHECK(match_result_from_json(to_json(r)) == r);
    CHECK_THROWS_AS(match_result_from_json(nlohmann::json::object()), SchemaError);
}
