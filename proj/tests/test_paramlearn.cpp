#include <doctest.h>

#include <cmath>

#include "qcreg/paramlearn.hpp"
#include "qcreg/rng.hpp"

using namespace qcreg;

namespace {

PenaltyFamily scalar_family(double p, double w)
{
    PenaltyFamily fam;
    fam.p = {p};
    fam.weights = {{w}};
    return fam;
}

}  // namespace

TEST_CASE("f_lambda: examples")
{
    PenaltyFamily fam = scalar_family(2.0, 1.0);
    // x + (2 * 1 * 1 * |x|) / 2 * sign = 2x
    CHECK(f_lambda(1.0, {1.0}, fam, 0) == doctest::Approx(2.0));
    CHECK(f_lambda(-0.5, {1.0}, fam, 0) == doctest::Approx(-1.0));
    CHECK(f_lambda(0.7, {0.0}, fam, 0) == doctest::Approx(0.7));

    PenaltyFamily fam15 = scalar_family(1.5, 2.0);
    // x + (1.5 * lambda * 2 * sqrt(|x|)) / 2
    CHECK(f_lambda(4.0, {1.0}, fam15, 0) == doctest::Approx(4.0 + 1.5 * 2.0));

    PenaltyFamily fam1 = scalar_family(1.0, 1.0);
    CHECK_THROWS_AS(f_lambda(1.0, {1.0}, fam1, 0), std::domain_error);
}

TEST_CASE("invert_f_lambda: inverts the forward map")
{
    PenaltyFamily fam = scalar_family(2.0, 1.0);
    CHECK(invert_f_lambda(2.0, {1.0}, fam, 0) == doctest::Approx(1.0));
    CHECK(invert_f_lambda(-2.0, {1.0}, fam, 0) == doctest::Approx(-1.0));
    CHECK(invert_f_lambda(0.9, {0.0}, fam, 0) == doctest::Approx(0.9));

    // p = 1 terms become soft thresholding with threshold lambda w / 2
    PenaltyFamily fam1 = scalar_family(1.0, 1.0);
    CHECK(invert_f_lambda(3.0, {2.0}, fam1, 0) == doctest::Approx(2.0));
    CHECK(invert_f_lambda(0.5, {2.0}, fam1, 0) == doctest::Approx(0.0));

    CounterRng rng = CounterRng::from_seed(17);
    for (int i = 0; i < 200; ++i) {
        PenaltyFamily f2;
        f2.p = {rng.next_range(1.01, 2.0), rng.next_range(1.01, 2.0)};
        f2.weights = {{rng.next_range(0.2, 2.0)}, {rng.next_range(0.2, 2.0)}};
        std::vector<double> lambda = {rng.next_range(0.0, 2.0), rng.next_range(0.0, 2.0)};
        double x = rng.next_range(-3.0, 3.0);
        double y = f_lambda(x, lambda, f2, 0);
        CHECK(invert_f_lambda(y, lambda, f2, 0) == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("objective_I_lambda: zero penalties give the raw misfit")
{
    PenaltyFamily fam;
    fam.p = {1.5};
    fam.weights = {{1.0, 1.0}};
    TrainingSet ts = {{{1.0, -0.5}, {1.2, -0.4}}, {{0.3, 0.8}, {0.5, 0.6}}};
    double raw = 0.0;
    for (const TrainingPair& pr : ts)
        for (std::size_t i = 0; i < pr.clean.size(); ++i)
            raw += (pr.noisy[i] - pr.clean[i]) * (pr.noisy[i] - pr.clean[i]);
    CHECK(objective_I_lambda({0.0}, ts, fam) == doctest::Approx(raw));
}

TEST_CASE("gradient_I_lambda: matches central differences")
{
    CounterRng rng = CounterRng::from_seed(27);
    for (int inst = 0; inst < 30; ++inst) {
        PenaltyFamily fam;
        fam.p = {rng.next_range(1.2, 2.0), rng.next_range(1.2, 2.0)};
        const std::size_t dim = 3;
        fam.weights.assign(2, {});
        for (auto& w : fam.weights)
            for (std::size_t i = 0; i < dim; ++i)
                w.push_back(rng.next_range(0.2, 2.0));
        TrainingSet ts;
        for (int i = 0; i < 3; ++i) {
            TrainingPair pr;
            for (std::size_t g = 0; g < dim; ++g) {
                pr.clean.push_back(rng.next_range(-2.0, 2.0));
                pr.noisy.push_back(rng.next_range(-2.0, 2.0));
            }
            ts.push_back(std::move(pr));
        }
        std::vector<double> lambda = {rng.next_range(0.05, 1.5), rng.next_range(0.05, 1.5)};
        std::vector<double> grad = gradient_I_lambda(lambda, ts, fam);
        const double h = 1e-5;
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<double> lp = lambda, lm = lambda;
            lp[j] += h;
            lm[j] -= h;
            double fd = (objective_I_lambda(lp, ts, fam) - objective_I_lambda(lm, ts, fam)) /
                        (2.0 * h);
            CHECK(std::fabs(grad[j] - fd) <= 1e-5 * (1.0 + std::fabs(grad[j])));
        }
    }
}

TEST_CASE("learn_lambdas: recovers the scalar closed form")
{
    // g = F_{lambda=1}(f) for every pair, so the optimum is exactly 1
    PenaltyFamily fam = scalar_family(2.0, 1.0);
    TrainingSet ts = {{{1.0}, {2.0}}, {{-0.5}, {-1.0}}};
    LambdaLearnResult res = learn_lambdas(ts, fam);
    REQUIRE(res.lambda.size() == 1);
    CHECK(res.lambda[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.converged);
    for (std::size_t i = 1; i < res.trajectory.size(); ++i)
        CHECK(res.trajectory[i] <= res.trajectory[i - 1] + 1e-15);
    CHECK(objective_I_lambda(res.lambda, ts, fam) <= 1e-10);
}

TEST_CASE("learn_lambdas: stays at zero on perfect data")
{
    PenaltyFamily fam = scalar_family(1.5, 1.0);
    TrainingSet ts = {{{0.8}, {0.8}}, {{-0.3}, {-0.3}}};
    LambdaLearnResult res = learn_lambdas(ts, fam);
    CHECK(res.lambda[0] == doctest::Approx(0.0));
    CHECK(res.converged);
}

TEST_CASE("learned lambdas denoise identically through denoise_identity")
{
    CounterRng rng = CounterRng::from_seed(37);
    PenaltyFamily fam;
    fam.p = {1.5, 2.0};
    const std::size_t dim = 4;
    fam.weights.assign(2, {});
    for (auto& w : fam.weights)
        for (std::size_t i = 0; i < dim; ++i)
            w.push_back(rng.next_range(0.2, 2.0));
    std::vector<double> lambda = {0.7, 0.4};

    MultiPenalty pen;
    for (std::size_t j = 0; j < 2; ++j)
        pen.terms.push_back({lambda[j], fam.weights[j], fam.p[j]});

    CoeffVec g(dim);
    for (double& v : g)
        v = rng.next_range(-2.0, 2.0);
    CoeffVec through_pen = denoise_identity(g, pen);
    for (std::size_t i = 0; i < dim; ++i)
        CHECK(through_pen[i] ==
              doctest::Approx(invert_f_lambda(g[i], lambda, fam, i)).epsilon(1e-9));
}
