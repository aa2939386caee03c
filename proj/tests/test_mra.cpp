#include <doctest.h>

#include <cmath>

#include "qcreg/learn.hpp"
#include "qcreg/mra.hpp"
#include "qcreg/rng.hpp"

using namespace qcreg;

namespace {

const double kPi = 3.14159265358979323846;

std::vector<double> random_signal(std::size_t n, CounterRng& rng)
{
    std::vector<double> x(n);
    for (double& v : x)
        v = rng.next_range(-1.0, 1.0);
    return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("check_qmf: named filters pass to 1e-12")
{
    for (const ScalingFilter& f : {ScalingFilter::haar(), ScalingFilter::db4()}) {
        QmfReport rep = check_qmf(f, 1e-12);
        CHECK(rep.ok);
        CHECK(rep.sum_violation <= 1e-12);
        CHECK(rep.identity_violation <= 1e-12);
        CHECK(rep.lowpass_min > 0.1);
    }
}

TEST_CASE("check_qmf: detects each violated condition")
{
    // wrong normalization
    QmfReport sum = check_qmf({{1.0, 0.5}, 0});
    CHECK(!sum.ok);
    CHECK(sum.sum_violation == doctest::Approx(0.25));

    // perturbing one Daubechies tap breaks the unit-circle identity
    ScalingFilter bent = ScalingFilter::db4();
    bent.taps[1] += 1e-3;
    bent.taps[0] -= 1e-3;  // keep the sum intact
    QmfReport rep = check_qmf(bent);
    CHECK(!rep.ok);
    CHECK(rep.sum_violation <= 1e-12);
    CHECK(rep.identity_violation > 1e-4);

    // taps (1, 0, 1) zero out P at t = pi/2, right on the low-pass band edge
    QmfReport low = check_qmf(ScalingFilter{{1.0, 0.0, 1.0}, 0});
    CHECK(!low.ok);
    CHECK(low.lowpass_min <= 1e-10);

    CHECK(!check_qmf(ScalingFilter{}).ok);
}

TEST_CASE("lattice_filter: recovers Haar and Daubechies-4")
{
    ScalingFilter h = lattice_filter(kPi / 2.0);
    CHECK(h.taps[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.taps[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(h.taps[2]) <= 1e-12);
    CHECK(std::fabs(h.taps[3]) <= 1e-12);

    ScalingFilter d = lattice_filter(kPi / 3.0);
    ScalingFilter ref = ScalingFilter::db4();
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(d.taps[i] == doctest::Approx(ref.taps[i]).epsilon(1e-12));
}

TEST_CASE("lattice_filter: conditions (i) and (ii) hold for every angle")
{
    for (int i = 0; i < 64; ++i) {
        QmfReport rep = check_qmf(lattice_filter(2.0 * kPi * i / 64.0));
        CHECK(rep.sum_violation <= 1e-12);
        CHECK(rep.identity_violation <= 1e-12);
    }
}

TEST_CASE("decompose: hand-checked Haar transforms")
{
    const double r = 1.0 / std::sqrt(2.0);
    // constant signals carry no detail
    Pyramid flat = decompose(std::vector<double>(8, 0.7), ScalingFilter::haar(), 2);
    REQUIRE(flat.details.size() == 2);
    for (const auto& band : flat.details)
        for (double v : band)
            CHECK(std::fabs(v) <= 1e-14);
    REQUIRE(flat.approx.size() == 2);
    CHECK(flat.approx[0] == doctest::Approx(1.4));
    CHECK(flat.approx[1] == doctest::Approx(1.4));

    // unit spike splits evenly between approximation and detail
    Pyramid spike = decompose({1.0, 0.0, 0.0, 0.0}, ScalingFilter::haar(), 1);
    CHECK(spike.approx[0] == doctest::Approx(r));
    CHECK(spike.approx[1] == doctest::Approx(0.0));
    CHECK(spike.details[0][0] == doctest::Approx(r));
    CHECK(spike.details[0][1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(decompose({1.0, 2.0, 3.0}, ScalingFilter::haar(), 1),
                    std::out_of_range);
}

TEST_CASE("decompose/reconstruct: perfect reconstruction and Parseval")
{
    CounterRng rng = CounterRng::from_seed(12);
    std::vector<ScalingFilter> filters = {ScalingFilter::haar(), ScalingFilter::db4(),
                                          lattice_filter(1.1)};
    for (const ScalingFilter& f : filters)
        for (int levels = 1; levels <= 4; ++levels)
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<double> x = random_signal(64, rng);
                Pyramid tree = decompose(x, f, levels);
                std::vector<double> back = reconstruct(tree, f);
                CHECK(max_abs_diff(x, back) <= 1e-10);
                // orthonormality: coefficient energy equals signal energy
                CHECK(norm2_sq(tree.flatten()) ==
                      doctest::Approx(norm2_sq(x)).epsilon(1e-10));
            }
}

TEST_CASE("Pyramid: flatten/unflatten round trip")
{
    CounterRng rng = CounterRng::from_seed(22);
    std::vector<double> x = random_signal(32, rng);
    Pyramid tree = decompose(x, ScalingFilter::db4(), 3);
    CoeffVec flat = tree.flatten();
    REQUIRE(flat.size() == 32);
    Pyramid back = Pyramid::unflatten(flat, 32, 3);
    REQUIRE(back.details.size() == 3);
    CHECK(max_abs_diff(back.approx, tree.approx) == 0.0);
    for (std::size_t lv = 0; lv < 3; ++lv)
        CHECK(max_abs_diff(back.details[lv], tree.details[lv]) == 0.0);
    CHECK_THROWS_AS(Pyramid::unflatten(flat, 31, 3), std::invalid_argument);
}

TEST_CASE("cascade_phi: Haar box is a fixed point")
{
    CascadeResult res = cascade_phi(ScalingFilter::haar(), 3);
    CHECK(res.step == doctest::Approx(0.125));
    REQUIRE(res.sup_diffs.size() == 3);
    for (double d : res.sup_diffs)
        CHECK(d <= 1e-15);
    double integral = 0.0;
    for (double v : res.samples)
        integral += v * res.step;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cascade_phi: Daubechies-4 converges with unit mass")
{
    CascadeResult res = cascade_phi(ScalingFilter::db4(), 10);
    REQUIRE(res.sup_diffs.size() == 10);
    CHECK(res.sup_diffs.back() < 0.1);
    CHECK(res.sup_diffs.back() < res.sup_diffs.front());
    double integral = 0.0;
    for (double v : res.samples)
        integral += v * res.step;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(cascade_phi(ScalingFilter::db4(), 0), std::invalid_argument);
    CHECK_THROWS_AS(cascade_phi(ScalingFilter{{1.0}, 0}, 4), std::invalid_argument);
}

TEST_CASE("lattice_grid: keeps exactly the QMF-passing members")
{
    FilterSearchSpace space = FilterSearchSpace::lattice_grid(4);
    // the pi/3 zero of the theta = pi member falls between sample points, so
    // all four angles survive the sampled QMF screen
    CHECK(space.filters.size() == 4);
    REQUIRE(space.filters.size() == space.labels.size());
    for (std::size_t i = 0; i < space.filters.size(); ++i) {
        CHECK(check_qmf(space.filters[i]).ok);
        CHECK(space.labels[i].rfind("lattice:", 0) == 0);
    }

    // a dense grid contains (near-)Haar and Daubechies-4 members
    FilterSearchSpace dense = FilterSearchSpace::lattice_grid(24);
    ScalingFilter db = ScalingFilter::db4();
    bool has_db4 = false, has_haar = false;
    for (const ScalingFilter& f : dense.filters) {
        double ddb = 0.0, dh = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            ddb = std::max(ddb, std::fabs(f.taps[i] - db.taps[i]));
            double haar_tap = (i < 2) ? 1.0 : 0.0;
            dh = std::max(dh, std::fabs(f.taps[i] - haar_tap));
        }
        has_db4 = has_db4 || ddb <= 1e-10;
        has_haar = has_haar || dh <= 1e-10;
    }
    CHECK(has_db4);
    CHECK(has_haar);
}

TEST_CASE("transform_set: pairs transform coordinate-by-coordinate")
{
    CounterRng rng = CounterRng::from_seed(32);
    SampleSet rows;
    for (int i = 0; i < 3; ++i) {
        SignalPair sp;
        sp.clean = random_signal(16, rng);
        sp.noisy = random_signal(16, rng);
        rows.push_back(std::move(sp));
    }
    TrainingSet ts = transform_set(rows, ScalingFilter::haar(), 2);
    REQUIRE(ts.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ts[i].clean ==
              decompose(rows[i].clean, ScalingFilter::haar(), 2).flatten());
        CHECK(ts[i].noisy.size() == 16);
    }
}

TEST_CASE("learn_joint: single-member space reduces to learn_discrete")
{
    CounterRng rng = CounterRng::from_seed(42);
    SampleSet rows;
    for (int i = 0; i < 3; ++i) {
        SignalPair sp;
        sp.clean.resize(8);
        sp.noisy.resize(8);
        for (std::size_t j = 0; j < 8; ++j) {
            double f = rng.next_range(0.1, 0.7);
            sp.clean[j] = f;
            sp.noisy[j] = f + 0.1;
        }
        rows.push_back(std::move(sp));
    }
    FilterSearchSpace space;
    space.filters = {ScalingFilter::haar()};
    space.labels = {"haar"};
    GridSpec grid(-2, 3, 3);
    SolverConfig cfg;
    JointLearnResult res = learn_joint(rows, space, grid, 1, cfg);
    CHECK(res.best == 0);
    CHECK(res.label == "haar");
    REQUIRE(res.objectives.size() == 1);
    TrainingSet ts = transform_set(rows, ScalingFilter::haar(), 1);
    StepRegularizer ref = learn_discrete(ts, grid, cfg);
    CHECK(res.objectives[0] == doctest::Approx(objective_I(ref, ts)).epsilon(1e-12));
    CHECK(objective_I(res.reg, ts) == doctest::Approx(res.objectives[0]).epsilon(1e-12));
}

TEST_CASE("learn_joint: off-grid members are skipped, empty space throws")
{
    SampleSet rows = {{std::vector<double>(8, 0.5), std::vector<double>(8, 0.6)}};
    FilterSearchSpace space;
    space.filters = {ScalingFilter::haar()};
    space.labels = {"haar"};
    // approximations scale past this tiny grid, so the only member is skipped
    GridSpec tiny(0, 1, 1);
    SolverConfig cfg;
    CHECK_THROWS(learn_joint(rows, space, tiny, 1, cfg));
    FilterSearchSpace empty;
    CHECK_THROWS_AS(learn_joint(rows, empty, tiny, 1, cfg), std::invalid_argument);
}
