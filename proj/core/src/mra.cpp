#include "qcreg/mra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace qcreg {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// analysis/synthesis use the orthonormal pair h = taps/sqrt(2) and the
// conjugate quadrature wavelet g[j] = (-1)^j h[L-1-j]; odd-length tap arrays
// are zero-padded to even length (the alternating flip needs it)
struct Bank {
    std::vector<double> h, g;
    int k0;
};

Bank make_bank(const ScalingFilter& f)
{
    Bank b;
    b.k0 = f.k0;
    b.h = f.taps;
    if (b.h.size() % 2 != 0)
        b.h.push_back(0.0);
    for (double& v : b.h)
        v /= kSqrt2;
    const std::size_t L = b.h.size();
    b.g.resize(L);
    for (std::size_t j = 0; j < L; ++j)
        b.g[j] = ((j % 2 == 0) ? 1.0 : -1.0) * b.h[L - 1 - j];
    return b;
}

std::size_t wrap(long idx, std::size_t n)
{
    long m = static_cast<long>(n);
    long r = idx % m;
    if (r < 0)
        r += m;
    return static_cast<std::size_t>(r);
}

}  // namespace

ScalingFilter ScalingFilter::haar() { return {{1.0, 1.0}, 0}; }

ScalingFilter ScalingFilter::db4()
{
    const double s3 = std::sqrt(3.0);
    return {{(1.0 + s3) / 4.0, (3.0 + s3) / 4.0, (3.0 - s3) / 4.0, (1.0 - s3) / 4.0}, 0};
}

ScalingFilter lattice_filter(double theta)
{
    double c = std::cos(theta);
    double s = std::sin(theta);
    return {{(1.0 - c + s) / 2.0, (1.0 + c + s) / 2.0, (1.0 + c - s) / 2.0,
             (1.0 - c - s) / 2.0},
            0};
}

QmfReport check_qmf(const ScalingFilter& filter, double tol)
{
    QmfReport rep;
    if (filter.taps.empty()) {
        rep.violated.push_back("empty filter");
        return rep;
    }
    auto P = [&](double t) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < filter.taps.size(); ++j) {
            double k = static_cast<double>(filter.k0) + static_cast<double>(j);
            acc += filter.taps[j] * std::polar(1.0, k * t);
        }
        return 0.5 * acc;
    };

    double sum = 0.0;
    for (double v : filter.taps)
        sum += v;
    rep.sum_violation = std::fabs(0.5 * sum - 1.0);

    const int samples = 4096;
    const double pi = 3.14159265358979323846;
    rep.identity_violation = 0.0;
    for (int i = 0; i < samples; ++i) {
        double t = 2.0 * pi * i / samples;
        double v = std::norm(P(t)) + std::norm(P(t + pi));
        rep.identity_violation = std::max(rep.identity_violation, std::fabs(v - 1.0));
    }
    rep.lowpass_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        double t = -pi / 2.0 + pi * i / samples;
        rep.lowpass_min = std::min(rep.lowpass_min, std::abs(P(t)));
    }

    if (rep.sum_violation > tol)
        rep.violated.push_back("(i) tap sum");
    if (rep.identity_violation > tol)
        rep.violated.push_back("(ii) unit-circle identity");
    if (!(rep.lowpass_min > tol))
        rep.violated.push_back("(iii) low-pass positivity");
    rep.ok = rep.violated.empty();
    return rep;
}

std::vector<double> project_samples(const std::vector<double>& samples)
{
    return samples;  // samples at rate 2^j0 serve as level-j0 coefficients
}

Pyramid decompose(const std::vector<double>& approx, const ScalingFilter& filter,
                  int levels)
{
    if (levels < 0)
        throw std::invalid_argument("decompose: negative level count");
    std::size_t n = approx.size();
    if (n >> levels << levels != n || (n >> levels) == 0)
        throw std::out_of_range("decompose: length must be divisible by 2^levels");
    Bank bank = make_bank(filter);
    Pyramid out;
    std::vector<double> a = approx;
    for (int lv = 0; lv < levels; ++lv) {
        std::size_t half = a.size() / 2;
        std::vector<double> next(half, 0.0), det(half, 0.0);
        for (std::size_t i = 0; i < half; ++i) {
            double sa = 0.0, sd = 0.0;
            for (std::size_t j = 0; j < bank.h.size(); ++j) {
                double v = a[wrap(static_cast<long>(2 * i) + bank.k0 +
                                      static_cast<long>(j),
                                  a.size())];
                sa += bank.h[j] * v;
                sd += bank.g[j] * v;
            }
            next[i] = sa;
            det[i] = sd;
        }
        out.details.push_back(std::move(det));
        a = std::move(next);
    }
    out.approx = std::move(a);
    return out;
}

std::vector<double> reconstruct(const Pyramid& tree, const ScalingFilter& filter)
{
    Bank bank = make_bank(filter);
    std::vector<double> a = tree.approx;
    for (std::size_t lv = tree.details.size(); lv-- > 0;) {
        const std::vector<double>& det = tree.details[lv];
        if (det.size() != a.size())
            throw std::invalid_argument("reconstruct: inconsistent tree shapes");
        std::vector<double> up(2 * a.size(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < bank.h.size(); ++j) {
                std::size_t idx = wrap(static_cast<long>(2 * i) + bank.k0 +
                                           static_cast<long>(j),
                                       up.size());
                up[idx] += bank.h[j] * a[i] + bank.g[j] * det[i];
            }
        a = std::move(up);
    }
    return a;
}

CoeffVec Pyramid::flatten() const
{
    CoeffVec out = approx;
    for (std::size_t lv = details.size(); lv-- > 0;)
        out.insert(out.end(), details[lv].begin(), details[lv].end());
    return out;
}

Pyramid Pyramid::unflatten(const CoeffVec& flat, std::size_t length, int levels)
{
    if (length >> levels << levels != length)
        throw std::invalid_argument("unflatten: length not divisible by 2^levels");
    if (flat.size() != length)
        throw std::invalid_argument("unflatten: size mismatch");
    Pyramid out;
    std::size_t pos = length >> levels;
    out.approx.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(pos));
    out.details.resize(static_cast<std::size_t>(levels));
    for (int lv = levels - 1; lv >= 0; --lv) {
        std::size_t sz = length >> (lv + 1);
        out.details[static_cast<std::size_t>(lv)]
            .assign(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                    flat.begin() + static_cast<std::ptrdiff_t>(pos + sz));
        pos += sz;
    }
    return out;
}

CascadeResult cascade_phi(const ScalingFilter& filter, int iters)
{
    const std::size_t L = filter.taps.size();
    if (L < 2)
        throw std::invalid_argument("cascade_phi: need at least two taps");
    if (iters < 1 || iters > 24)
        throw std::invalid_argument("cascade_phi: iters out of range");
    // work in support-relative coordinates [0, L-1) at spacing 2^-iters
    const long M = 1L << iters;
    const std::size_t len = static_cast<std::size_t>((L - 1) * static_cast<std::size_t>(M));
    CascadeResult res;
    res.step = std::ldexp(1.0, -iters);
    // phi_0 = box on [0, 1)
    std::vector<double> cur(len, 0.0);
    for (long i = 0; i < M && i < static_cast<long>(len); ++i)
        cur[static_cast<std::size_t>(i)] = 1.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> next(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                long src = 2 * static_cast<long>(i) - static_cast<long>(j) * M;
                if (src >= 0 && src < static_cast<long>(len))
                    acc += filter.taps[j] * cur[static_cast<std::size_t>(src)];
            }
            next[i] = acc;
        }
        double sup = 0.0;
        for (std::size_t i = 0; i < len; ++i)
            sup = std::max(sup, std::fabs(next[i] - cur[i]));
        res.sup_diffs.push_back(sup);
        cur = std::move(next);
    }
    res.samples = std::move(cur);
    return res;
}

FilterSearchSpace FilterSearchSpace::lattice_grid(int count)
{
    if (count < 1)
        throw std::invalid_argument("lattice_grid: need count >= 1");
    FilterSearchSpace out;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < count; ++i) {
        double theta = 2.0 * pi * i / count;
        ScalingFilter f = lattice_filter(theta);
        if (check_qmf(f).ok) {
            out.filters.push_back(f);
            out.labels.push_back("lattice:" + std::to_string(theta));
        }
    }
    return out;
}

TrainingSet transform_set(const SampleSet& ts, const ScalingFilter& filter, int levels)
{
    TrainingSet out;
    out.reserve(ts.size());
    for (const SignalPair& pr : ts) {
        TrainingPair tp;
        tp.clean = decompose(project_samples(pr.clean), filter, levels).flatten();
        tp.noisy = decompose(project_samples(pr.noisy), filter, levels).flatten();
        out.push_back(std::move(tp));
    }
    return out;
}

JointLearnResult learn_joint(const SampleSet& ts, const FilterSearchSpace& space,
                             const GridSpec& grid, int levels, const SolverConfig& cfg)
{
    if (space.filters.empty())
        throw std::invalid_argument("learn_joint: empty filter space");
    JointLearnResult res;
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < space.filters.size(); ++i) {
        const ScalingFilter& f = space.filters[i];
        if (!check_qmf(f).ok) {
            res.objectives.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        TrainingSet tf = transform_set(ts, f, levels);
        if (!validate_problem(tf, grid).empty()) {
            // this member pushes coefficients off-grid; skip it
            res.objectives.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        StepRegularizer reg = learn_discrete(tf, grid, cfg);
        double obj = objective_I(reg, tf);
        res.objectives.push_back(obj);
        if (obj < best_obj) {
            best_obj = obj;
            res.filter = f;
            res.label = (i < space.labels.size()) ? space.labels[i] : "";
            res.reg = std::move(reg);
            res.best = i;
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error("learn_joint: every filter was skipped "
                                 "(coefficients off-grid)");
    return res;
}

}  // namespace qcreg
