#include "qcreg/shrink.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcreg {

namespace {

constexpr double kRootTol = 1e-12;
constexpr int kMaxRootIters = 200;

void check_term(double c, double p)
{
    if (!(c > 0.0))
        throw std::invalid_argument("penalty coefficient must be positive");
    if (!(p >= 1.0 && p <= 2.0))
        throw std::invalid_argument("penalty exponent must lie in [1, 2]");
}

// Solves F(x) = b on [0, hi] for a continuous strictly increasing F with
// F(0) <= b <= F(hi).  Newton refinement safeguarded by the bracket;
// any step leaving the bracket (or with a tiny derivative) falls back to
// bisection, so termination is guaranteed.
template <class F, class DF>
double bracketed_newton(F f, DF df, double b, double hi)
{
    double lo = 0.0;
    double x = std::min(hi, std::max(lo, b));  // decent initial guess
    for (int it = 0; it < kMaxRootIters; ++it) {
        double r = f(x) - b;
        if (std::fabs(r) <= kRootTol)
            return x;
        if (r > 0.0)
            hi = x;
        else
            lo = x;
        double d = df(x);
        double next = (d > 0.0) ? x - r / d : lo - 1.0;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == x)
            return x;
        x = next;
    }
    return x;
}

}  // namespace

double f_cp(double t, double c, double p)
{
    check_term(c, p);
    if (!(p > 1.0))
        throw std::domain_error("f_cp requires p > 1");
    if (t == 0.0)
        return 0.0;
    double s = (t > 0.0) ? 1.0 : -1.0;
    return t + 0.5 * c * p * s * std::pow(std::fabs(t), p - 1.0);
}

double shrink_single(double b, double c, double p)
{
    check_term(c, p);
    return shrink_multi(b, {{c, p}});
}

double shrink_multi(double b, const std::vector<ScalarTerm>& terms)
{
    if (terms.empty())
        throw std::domain_error("shrink_multi: no penalty terms");
    double c1 = 0.0;  // total p = 1 coefficient
    for (const ScalarTerm& t : terms) {
        check_term(t.c, t.p);
        if (t.p == 1.0)
            c1 += t.c;
    }
    // Subdifferential at 0 contains 2b iff |b| <= c1/2: minimizer is 0.
    if (std::fabs(b) <= 0.5 * c1)
        return 0.0;

    double s = (b > 0.0) ? 1.0 : -1.0;
    double y = std::fabs(b);
    // On the sign(b) branch the first-order condition is
    //   x + [c1 + sum_{p>1} c p x^{p-1}] / 2 = |b|,  x in (0, |b|].
    auto fval = [&](double x) {
        double acc = c1;
        for (const ScalarTerm& t : terms)
            if (t.p > 1.0)
                acc += t.c * t.p * std::pow(x, t.p - 1.0);
        return x + 0.5 * acc;
    };
    auto fder = [&](double x) {
        double acc = 0.0;
        for (const ScalarTerm& t : terms)
            if (t.p > 1.0)
                acc += t.c * t.p * (t.p - 1.0) * std::pow(x, t.p - 2.0);
        return 1.0 + 0.5 * acc;
    };
    return s * bracketed_newton(fval, fder, y, y);
}

std::vector<ScalarTerm> MultiPenalty::terms_at(std::size_t gamma) const
{
    std::vector<ScalarTerm> out;
    if (partition.empty()) {
        for (const PenaltyTerm& t : terms) {
            if (t.lambda == 0.0)
                continue;
            if (gamma >= t.weights.size())
                throw std::out_of_range("MultiPenalty: coordinate outside weight array");
            out.push_back({t.lambda * t.weights[gamma], t.p});
        }
    } else {
        if (gamma >= partition.size())
            throw std::out_of_range("MultiPenalty: coordinate outside partition");
        const PenaltyTerm& t = terms.at(partition[gamma]);
        if (t.lambda != 0.0)
            out.push_back({t.lambda * t.weights.at(gamma), t.p});
    }
    return out;
}

double MultiPenalty::value(const CoeffVec& f) const
{
    double acc = 0.0;
    for (std::size_t g = 0; g < f.size(); ++g)
        for (const ScalarTerm& t : terms_at(g))
            acc += t.c * std::pow(std::fabs(f[g]), t.p);
    return acc;
}

CoeffVec denoise_identity(const CoeffVec& g, const MultiPenalty& pen)
{
    CoeffVec f(g.size());
    for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
        std::vector<ScalarTerm> at = pen.terms_at(gamma);
        f[gamma] = at.empty() ? g[gamma] : shrink_multi(g[gamma], at);
    }
    return f;
}

CoeffVec denoise_diagonal(const CoeffVec& g, const CoeffVec& k, const MultiPenalty& pen)
{
    if (g.size() != k.size())
        throw std::invalid_argument("denoise_diagonal: dimension mismatch");
    CoeffVec f(g.size());
    for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
        std::vector<ScalarTerm> at = pen.terms_at(gamma);
        double kk = k[gamma];
        if (kk == 0.0) {
            // data term is constant in x; the penalty picks x = 0 if present
            if (at.empty())
                throw std::domain_error("denoise_diagonal: k=0 with empty penalty "
                                        "has no unique minimizer");
            f[gamma] = 0.0;
            continue;
        }
        if (at.empty()) {
            f[gamma] = g[gamma] / kk;
            continue;
        }
        // |k x - g|^2 + sum c|x|^p = k^2 [x^2 - 2(g/k)x + sum (c/k^2)|x|^p] + const
        for (ScalarTerm& t : at)
            t.c /= kk * kk;
        f[gamma] = shrink_multi(g[gamma] / kk, at);
    }
    return f;
}

}  // namespace qcreg
