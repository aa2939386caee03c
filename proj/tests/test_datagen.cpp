#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qcreg/datagen.hpp"

using namespace qcreg;

TEST_CASE("gen_scene: deterministic squares on a light background")
{
    SceneSpec spec;
    spec.side = 32;
    spec.squares = 2;
    spec.seed = 9;
    Image a = gen_scene(spec);
    Image b = gen_scene(spec);
    CHECK(a.px == b.px);
    CHECK(a.side == 32);
    CHECK(a.px.size() == 32u * 32u);

    // at most one level per square plus the background
    std::set<double> levels(a.px.begin(), a.px.end());
    CHECK(levels.size() <= 3);
    CHECK(levels.count(spec.background) == 1);
    for (double v : a.px) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // the background still dominates for medium squares
    auto bg = static_cast<std::size_t>(
        std::count(a.px.begin(), a.px.end(), spec.background));
    CHECK(bg > a.px.size() / 2);

    SceneSpec other = spec;
    other.seed = 10;
    CHECK(gen_scene(other).px != a.px);

    SceneSpec bad = spec;
    bad.side = 33;
    CHECK_THROWS_AS(gen_scene(bad), std::invalid_argument);
}

TEST_CASE("gen_scene: zero squares leaves the plain background")
{
    SceneSpec spec;
    spec.side = 16;
    spec.squares = 0;
    Image img = gen_scene(spec);
    for (double v : img.px)
        CHECK(v == spec.background);
}

TEST_CASE("apply_noise: monotone map is exact and unclamped")
{
    SceneSpec spec;
    spec.side = 16;
    spec.seed = 3;
    Image img = gen_scene(spec);
    NoiseSpec nz;
    nz.kind = NoiseKind::monotone_map;
    nz.gain = 0.8;
    nz.bias = 0.3;
    Image out = apply_noise(img, nz);
    for (std::size_t i = 0; i < img.px.size(); ++i)
        CHECK(out.px[i] == doctest::Approx(0.8 * img.px[i] + 0.3));
    nz.gain = 0.0;
    CHECK_THROWS_AS(apply_noise(img, nz), std::invalid_argument);
}

TEST_CASE("apply_noise: gaussian perturbs but respects [0, 1]")
{
    SceneSpec spec;
    spec.side = 32;
    Image img = gen_scene(spec);
    NoiseSpec nz;
    nz.kind = NoiseKind::gaussian;
    nz.strength = 0.1;
    nz.seed = 5;
    Image out = apply_noise(img, nz);
    CHECK(out.px != img.px);
    for (double v : out.px) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    nz.strength = 0.0;
    CHECK(apply_noise(img, nz).px == img.px);
}

TEST_CASE("apply_noise: salt and pepper hits roughly the requested rate")
{
    SceneSpec spec;
    spec.side = 64;
    spec.squares = 0;  // uniform 0.9 background, so every flip is visible
    Image img = gen_scene(spec);
    NoiseSpec nz;
    nz.kind = NoiseKind::salt_pepper;
    nz.rate = 0.2;
    nz.seed = 7;
    Image out = apply_noise(img, nz);
    std::size_t flipped = 0, salt = 0;
    for (double v : out.px) {
        if (v == 0.0 || v == 1.0) {
            ++flipped;
            salt += (v == 1.0);
        } else {
            CHECK(v == spec.background);
        }
    }
    double frac = static_cast<double>(flipped) / static_cast<double>(out.px.size());
    CHECK(frac > 0.15);
    CHECK(frac < 0.25);
    // both polarities occur
    CHECK(salt > 0);
    CHECK(salt < flipped);

    nz.rate = 0.0;
    CHECK(apply_noise(img, nz).px == img.px);
    nz.rate = 1.5;
    CHECK_THROWS_AS(apply_noise(img, nz), std::invalid_argument);
}

TEST_CASE("apply_noise: tiny squares darken small patches")
{
    SceneSpec spec;
    spec.side = 32;
    spec.squares = 0;
    Image img = gen_scene(spec);
    NoiseSpec nz;
    nz.kind = NoiseKind::tiny_squares;
    nz.rate = 0.05;
    nz.strength = 0.4;
    nz.seed = 11;
    Image out = apply_noise(img, nz);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < out.px.size(); ++i)
        if (out.px[i] != img.px[i]) {
            ++changed;
            CHECK(out.px[i] <= nz.strength);  // patches are darker than 0.9
        }
    CHECK(changed > 0);
    CHECK(changed < out.px.size() / 4);
}

TEST_CASE("gen_training_set: independent pairs from one master seed")
{
    SceneSpec scene;
    scene.side = 16;
    scene.seed = 21;
    NoiseSpec nz;
    nz.kind = NoiseKind::gaussian;
    nz.strength = 0.05;
    nz.seed = 22;
    auto pairs = gen_training_set(scene, nz, 4);
    REQUIRE(pairs.size() == 4);
    // reproducible
    auto again = gen_training_set(scene, nz, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(pairs[i].clean.px == again[i].clean.px);
        CHECK(pairs[i].noisy.px == again[i].noisy.px);
    }
    // pairs differ from each other
    CHECK(pairs[0].clean.px != pairs[1].clean.px);
    CHECK(pairs[0].noisy.px != pairs[0].clean.px);
    CHECK_THROWS_AS(gen_training_set(scene, nz, 0), std::invalid_argument);
}

TEST_CASE("gen_training_rows: extracts the middle row of each pair")
{
    SceneSpec scene;
    scene.side = 16;
    scene.seed = 31;
    NoiseSpec nz;
    nz.kind = NoiseKind::monotone_map;
    nz.gain = 1.0;
    nz.bias = 0.05;
    nz.seed = 32;
    SampleSet rows = gen_training_rows(scene, nz, 3);
    REQUIRE(rows.size() == 3);
    auto pairs = gen_training_set(scene, nz, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(rows[i].clean.size() == 16);
        for (int c = 0; c < 16; ++c) {
            CHECK(rows[i].clean[static_cast<std::size_t>(c)] ==
                  pairs[i].clean.at(8, c));
            CHECK(rows[i].noisy[static_cast<std::size_t>(c)] ==
                  doctest::Approx(rows[i].clean[static_cast<std::size_t>(c)] + 0.05));
        }
    }
}
