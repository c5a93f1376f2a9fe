#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "uidiff/similarity.hpp"

using namespace uidiff;
using namespace uidiff::similarity;

TEST_CASE("constant patch sets every bit") {
    Raster r(16, 16, Rgb{0, 0, 0});
    CHECK(average_hash(r, r.bounds()).bits == ~std::uint64_t{0});
}

TEST_CASE("half black half white patch") {
    Raster r(16, 16, Rgb{0, 0, 0});
    r.fill({8, 0, 16, 16}, {255, 255, 255});
    const auto h = average_hash(r, r.bounds());
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) CHECK(h.bit(row, col) == (col >= 4));
    }
}

TEST_CASE("hash of small and odd-sized boxes") {
    Rng rng(1);
    auto r = testing::random_texture(37, 23, 3, rng);
    CHECK(average_hash(r, {3, 4, 8, 7}) == average_hash(r, {3, 4, 8, 7}));
    CHECK_NOTHROW(average_hash(r, {0, 0, 1, 1}));
    CHECK_THROWS_AS(average_hash(r, {5, 5, 5, 9}), DegenerateBox);
    CHECK_THROWS_AS(average_hash(r, {30, 0, 40, 5}), BoundsError);
}

TEST_CASE("a patch and its enlarged copy hash alike") {
    Rng rng(6);
    auto r = testing::random_texture(16, 16, 4, rng);
    auto big = resize_nearest(r, 32, 32);
    CHECK(hash_difference(average_hash(r, r.bounds()), average_hash(big, big.bounds())) == 0);
}

TEST_CASE("hamming distance") {
    const PerceptualHash h{0x0123456789abcdefull};
    CHECK(hash_difference(h, h) == 0);
    CHECK(hash_difference(h, PerceptualHash{~h.bits}) == 64);
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const PerceptualHash a{rng()};
        const PerceptualHash b{rng()};
        CHECK(hash_difference(a, b) == hash_difference(b, a));
    }
}

TEST_CASE("text similarity") {
    CHECK(text_similarity(std::string("Submit"), std::string("Submit")) == 1.0);
    CHECK(text_similarity(std::string("abc"), std::string("xyz")) == 0.0);
    CHECK(std::abs(text_similarity(std::string("kitten"), std::string("sitting")) - (1.0 - 3.0 / 7.0)) < 1e-12);
    CHECK(text_similarity(std::nullopt, std::nullopt) == 1.0);
    CHECK(text_similarity(std::string(""), std::string("")) == 1.0);
    CHECK(text_similarity(std::string("a"), std::nullopt) == 0.0);
    // Distance counts code points, not bytes.
    CHECK(text_similarity(std::string("caf\xC3\xA9"), std::string("cafe")) == 0.75);
    CHECK(levenshtein(decode_utf8("flaw"), decode_utf8("lawn")) == 2);
    CHECK(decode_utf8("\xE2\x82\xAC").size() == 1);
    CHECK(decode_utf8("\xFF") == std::vector<char32_t>{0xFFFD});
}

namespace {

// Two IMAGE patches whose hashes differ in exactly `bits` cells.
void patches_with_difference(int bits, Raster& a, Raster& b) {
    a = Raster(8, 8, Rgb{0, 0, 0});
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            if ((x + y) % 2 == 0) a.set(x, y, {255, 255, 255});
        }
    }
    b = a;
    int flipped = 0;
    for (int y = 0; y < 8 && flipped < bits; ++y) {
        for (int x = 0; x < 8 && flipped < bits; ++x) {
            const bool white = (x + y) % 2 == 0;
            b.set(x, y, white ? Rgb{0, 0, 0} : Rgb{255, 255, 255});
            ++flipped;
        }
    }
}

}  // namespace

TEST_CASE("leaf similarity rules") {
    SimilarityParams p;
    Raster a;
    Raster b;
    patches_with_difference(8, a, b);
    REQUIRE(hash_difference(average_hash(a, a.bounds()), average_hash(b, b.bounds())) == 8);
    const auto img_a = testing::make_control(0, a.bounds(), ControlCategory::Image);
    const auto img_b = testing::make_control(1, b.bounds(), ControlCategory::Image);
    CHECK(base_similarity(img_a, img_b, a, b, p) == 1.0 - 8.0 / 64.0);

    patches_with_difference(12, a, b);
    CHECK(base_similarity(img_a, img_b, a, b, p) == 0.0);

    const auto button = testing::make_control(0, a.bounds(), ControlCategory::Button);
    const auto input = testing::make_control(1, a.bounds(), ControlCategory::Input);
    CHECK(base_similarity(button, input, a, a, p) == 0.0);

    const auto t1 = testing::make_control(0, a.bounds(), ControlCategory::Text, "Submit");
    const auto t2 = testing::make_control(1, a.bounds(), ControlCategory::Text, "Submit");
    const auto t3 = testing::make_control(1, a.bounds(), ControlCategory::Text, "Cancel");
    const auto t4 = testing::make_control(1, a.bounds(), ControlCategory::Text, "Submits");
    CHECK(base_similarity(t1, t2, a, a, p) == 1.0);
    CHECK(base_similarity(t1, t3, a, a, p) == 0.0);
    CHECK(base_similarity(t1, t4, a, a, p) == doctest::Approx(0.5 * (1.0 - 1.0 / 7.0) + 0.5));
}

TEST_CASE("parameter ranges") {
    SimilarityParams p;
    CHECK_NOTHROW(p.validate());
    p.ns = 1.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.h = 65;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.context_depth = 0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.layout_tolerance = -0.1;
    CHECK_THROWS_AS(p.validate(), Error);
}
