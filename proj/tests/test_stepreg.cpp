#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcreg/rng.hpp"
#include "qcreg/stepreg.hpp"

using namespace qcreg;

TEST_CASE("is_quasiconvex: hand-checked arrays")
{
    CHECK(is_quasiconvex({3.0, 1.0, 2.0, 5.0}));
    CHECK(!is_quasiconvex({1.0, 3.0, 2.0}));
    CHECK(is_quasiconvex({5.0, 4.0, 2.0, 1.0}));  // monotone decreasing
    CHECK(is_quasiconvex({1.0, 2.0, 3.0}));       // monotone increasing
    CHECK(is_quasiconvex({2.0, 2.0, 2.0, 2.0}));  // constant
    CHECK(is_quasiconvex({}));
    CHECK(is_quasiconvex({7.0}));
    CHECK(is_quasiconvex({9.0, 1.0}));
    CHECK(!is_quasiconvex({0.0, 1.0, 0.0, 1.0}));
    CHECK(is_quasiconvex({1.0, 0.0, 0.0, 1.0}));  // flat valley floor
}

TEST_CASE("is_quasiconvex: matches the triple definition exhaustively")
{
    // all arrays of length <= 7 over {0, 1, 2}
    for (int len = 0; len <= 7; ++len) {
        int total = 1;
        for (int i = 0; i < len; ++i)
            total *= 3;
        for (int code = 0; code < total; ++code) {
            std::vector<double> a(static_cast<std::size_t>(len));
            int c = code;
            for (int i = 0; i < len; ++i) {
                a[static_cast<std::size_t>(i)] = c % 3;
                c /= 3;
            }
            CHECK(is_quasiconvex(a) == oracle::quasiconvex_by_triples(a));
        }
    }
}

TEST_CASE("is_quasiconvex: matches the triple definition on random arrays")
{
    CounterRng rng = CounterRng::from_seed(13);
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> a(1 + rng.next_below(10));
        for (double& v : a)
            v = static_cast<double>(rng.next_below(4));
        CHECK(is_quasiconvex(a) == oracle::quasiconvex_by_triples(a));
    }
}

TEST_CASE("StepRegularizer: constructor validates shape and quasiconvexity")
{
    GridSpec g(0, 1, 1);
    CHECK_NOTHROW(StepRegularizer(g, {{1.0, 2.0}}));
    CHECK_THROWS_AS(StepRegularizer(g, {{1.0, 2.0, 3.0}}), std::invalid_argument);
    GridSpec g3(0, 1, 2);
    CHECK_THROWS_AS(StepRegularizer(g3, {{0.0, 1.0, 0.0, 1.0}}), std::invalid_argument);

    StepRegularizer z = StepRegularizer::zero(g3, 2);
    CHECK(z.coord_count() == 2);
    CHECK(z.evaluate(0, 0.6) == doctest::Approx(0.0));
}

TEST_CASE("StepRegularizer: evaluate picks the bin value")
{
    GridSpec g(1, 3, 1);
    StepRegularizer reg(g, {{4.0, 2.0, 1.0, 3.0}});
    CHECK(reg.evaluate(0, 1.3) == doctest::Approx(4.0));
    CHECK(reg.evaluate(0, 1.5) == doctest::Approx(4.0));
    CHECK(reg.evaluate(0, 2.2) == doctest::Approx(1.0));
    CHECK(reg.evaluate(0, 3.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(reg.evaluate(0, 1.0), std::out_of_range);
}

TEST_CASE("candidate_points: geometry around the data bin")
{
    // grid (1, 3], n = 1, eps = 1/2: one candidate per bin
    GridSpec g(1, 3, 1, 0.5);
    auto cands = candidate_points(1.3, g);
    REQUIRE(cands.size() == 4);
    CHECK(cands[0].bin == 1);
    CHECK(cands[0].x == doctest::Approx(1.3));  // data bin keeps g itself
    CHECK(cands[0].q == doctest::Approx(0.0));
    CHECK(cands[1].x == doctest::Approx(2.0));  // right bins: lo + eps
    CHECK(cands[1].q == doctest::Approx(0.49));
    CHECK(cands[2].x == doctest::Approx(2.5));
    CHECK(cands[2].q == doctest::Approx(1.44));
    CHECK(cands[3].x == doctest::Approx(3.0));
    CHECK(cands[3].q == doctest::Approx(2.89));

    auto tail = candidate_points(2.9, g);
    CHECK(tail[0].x == doctest::Approx(1.5));  // left bins: right endpoint
    CHECK(tail[0].q == doctest::Approx(1.96));
    CHECK(tail[1].x == doctest::Approx(2.0));
    CHECK(tail[2].x == doctest::Approx(2.5));
    CHECK(tail[3].x == doctest::Approx(2.9));
    CHECK(tail[3].q == doctest::Approx(0.0));

    CHECK_THROWS_AS(candidate_points(0.5, g), std::out_of_range);
}

TEST_CASE("candidate_points_center: off-grid centers are allowed")
{
    GridSpec g(0, 1, 1);
    auto cands = candidate_points_center(2.0, g);  // right of the interval
    CHECK(cands[0].x == doctest::Approx(0.5));
    CHECK(cands[1].x == doctest::Approx(1.0));
    auto left = candidate_points_center(-1.0, g);  // left of the interval
    CHECK(left[0].x == doctest::Approx(0.0 + g.eps));
    CHECK(left[1].x == doctest::Approx(0.5 + g.eps));
}

TEST_CASE("argmin_penalized: hand-checked two-bin instance")
{
    GridSpec g(0, 1, 1);
    StepRegularizer reg(g, {{0.0, 0.1}});
    // bin 1 candidate x = 0.5 scores 0.0625; data bin scores 0.1
    PenalizedArgmin a = argmin_penalized(0.75, reg, 0);
    CHECK(a.bin == 1);
    CHECK(a.x == doctest::Approx(0.5));
    CHECK(a.value == doctest::Approx(0.0625));

    StepRegularizer flat(g, {{0.0, 0.0}});
    PenalizedArgmin b = argmin_penalized(0.75, flat, 0);
    CHECK(b.bin == 2);
    CHECK(b.x == doctest::Approx(0.75));
    CHECK(b.value == doctest::Approx(0.0));
}

TEST_CASE("argmin_penalized: exact ties prefer the data bin, then lower index")
{
    // two unit bins on (0, 2]; values tie at 0 when C_1 = -0.25
    GridSpec g(0, 2, 0);
    StepRegularizer reg(g, {{-0.25, 0.0}});
    PenalizedArgmin a = argmin_penalized(1.5, reg, 0);
    CHECK(a.bin == 2);
    CHECK(a.x == doctest::Approx(1.5));

    // tie between two non-data bins resolves to the smaller index:
    // at g = 2.5 (bin 3) the candidates of bins 1 and 2 score 2.25 and 0.25,
    // so C = (0, 2, 3, 3) ties them at 2.25 while bin 3 scores 3
    GridSpec g4(0, 4, 0);
    StepRegularizer tie(g4, {{0.0, 2.0, 3.0, 3.0}});
    PenalizedArgmin t = argmin_penalized(2.5, tie, 0);
    CHECK(t.bin == 1);
    CHECK(t.x == doctest::Approx(1.0));
}

TEST_CASE("argmin_penalized: never beaten by sampled points")
{
    CounterRng rng = CounterRng::from_seed(77);
    GridSpec g(-1, 2, 2);
    const int b = g.bin_count();
    for (int inst = 0; inst < 50; ++inst) {
        // random valley-shaped coefficients
        std::vector<double> c(static_cast<std::size_t>(b));
        std::size_t pivot = rng.next_below(static_cast<std::uint64_t>(b));
        double v = rng.next_range(0.0, 0.3);
        for (std::size_t i = pivot + 1; i-- > 0;) {
            c[i] = v;
            v += rng.next_range(0.0, 0.5);
        }
        v = c[pivot];
        for (std::size_t i = pivot + 1; i < c.size(); ++i) {
            v += rng.next_range(0.0, 0.5);
            c[i] = v;
        }
        StepRegularizer reg(g, {c});
        double gv = rng.next_range(-0.99, 2.0);
        PenalizedArgmin best = argmin_penalized(gv, reg, 0);
        // candidate points of bins right of the data bin sit eps inside, so
        // allow the corresponding slack against arbitrary probes
        double slack = 2.0 * g.eps * 3.0 + g.eps * g.eps + 1e-12;
        for (int probe = 0; probe < 100; ++probe) {
            double x = rng.next_range(-0.999, 2.0);
            double val = (x - gv) * (x - gv) + reg.evaluate(0, x);
            CHECK(best.value <= val + slack);
        }
        // consistency of the reported value
        CHECK(best.value ==
              doctest::Approx((best.x - gv) * (best.x - gv) + reg.evaluate(0, best.x)));
        CHECK(reg.grid.bin_index(best.x) == best.bin);
    }
}

TEST_CASE("denoise_with_step: zero regularizer is the identity on the grid")
{
    GridSpec g(0, 1, 3);
    StepRegularizer z = StepRegularizer::zero(g, 4);
    CoeffVec noisy = {0.1, 0.4, 0.75, 0.99};
    CoeffVec out = denoise_with_step(noisy, z);
    for (std::size_t i = 0; i < noisy.size(); ++i)
        CHECK(out[i] == doctest::Approx(noisy[i]));
    CHECK_THROWS_AS(denoise_with_step({0.1}, z), std::invalid_argument);
}

TEST_CASE("denoise: adding a constant per coordinate changes nothing")
{
    GridSpec g(0, 1, 2);
    StepRegularizer reg(g, {{0.5, 0.1, 0.2, 0.9}, {1.0, 0.3, 0.3, 0.3}});
    StepRegularizer shifted(g, {{0.5 + 3.0, 0.1 + 3.0, 0.2 + 3.0, 0.9 + 3.0},
                               {1.0 - 2.0, 0.3 - 2.0, 0.3 - 2.0, 0.3 - 2.0}});
    CounterRng rng = CounterRng::from_seed(99);
    for (int i = 0; i < 50; ++i) {
        CoeffVec noisy = {rng.next_range(0.01, 1.0), rng.next_range(0.01, 1.0)};
        CoeffVec a = denoise_with_step(noisy, reg);
        CoeffVec b = denoise_with_step(noisy, shifted);
        CHECK(a[0] == doctest::Approx(b[0]));
        CHECK(a[1] == doctest::Approx(b[1]));
    }
}

TEST_CASE("denoise_diagonal with a step regularizer")
{
    GridSpec g(0, 1, 1);
    StepRegularizer z = StepRegularizer::zero(g, 1);
    // center g/k = 2 lies right of the interval; best grid point is 1
    CHECK(denoise_diagonal(CoeffVec{1.0}, CoeffVec{0.5}, z)[0] == doctest::Approx(1.0));
    // unit diagonal matches the plain denoiser
    StepRegularizer reg(g, {{0.3, 0.0}});
    CHECK(denoise_diagonal(CoeffVec{0.4}, CoeffVec{1.0}, reg)[0] ==
          doctest::Approx(denoise_with_step(CoeffVec{0.4}, reg)[0]));
    CHECK_THROWS_AS(denoise_diagonal(CoeffVec{0.4}, CoeffVec{0.0}, reg),
                    std::domain_error);
}

TEST_CASE("objective_I: sums squared denoising errors")
{
    GridSpec g(0, 1, 1);
    StepRegularizer z = StepRegularizer::zero(g, 2);
    // zero regularizer keeps g, so the objective is sum ||g - f||^2
    TrainingSet ts = {{{0.25, 0.5}, {0.3, 0.6}}, {{0.75, 0.9}, {0.8, 1.0}}};
    double expect = 0.0;
    for (const TrainingPair& pr : ts)
        for (std::size_t i = 0; i < pr.clean.size(); ++i)
            expect += (pr.noisy[i] - pr.clean[i]) * (pr.noisy[i] - pr.clean[i]);
    CHECK(objective_I(z, ts) == doctest::Approx(expect));
}
