#pragma once
// Shared domain types: dyadic grids on a bounded interval, coefficient
// vectors over a finite index set, and (clean, noisy) training pairs.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcreg {

// A coefficient vector is a flat array; coordinate gamma is the position in
// the array.  All vectors of one problem instance share the same length.
using CoeffVec = std::vector<double>;

inline double inner(const CoeffVec& u, const CoeffVec& v)
{
    if (u.size() != v.size())
        throw std::invalid_argument("inner: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u[i] * v[i];
    return s;
}

inline double norm2_sq(const CoeffVec& u)
{
    double s = 0.0;
    for (double x : u)
        s += x * x;
    return s;
}

inline double norm2(const CoeffVec& u) { return std::sqrt(norm2_sq(u)); }

struct TrainingPair {
    CoeffVec clean;  // f_i
    CoeffVec noisy;  // g_i
};

using TrainingSet = std::vector<TrainingPair>;

// Dyadic grid on the half-open interval (m1, m2]: B = (m2-m1)*2^n bins
// A_t = (m1 + (t-1)/2^n, m1 + t/2^n], t = 1..B.  eps is the offset used to
// place candidate points just inside a bin's open left endpoint.
struct GridSpec {
    int m1 = 0;
    int m2 = 1;
    int n = 0;
    double eps = 0.0;  // 0 requests the default 2^-(n+4)

    GridSpec() { eps = default_eps(0); }

    GridSpec(int m1_, int m2_, int n_, double eps_ = 0.0)
        : m1(m1_), m2(m2_), n(n_), eps(eps_)
    {
        if (m1 >= m2)
            throw std::invalid_argument("GridSpec: need m1 < m2");
        if (n < 0)
            throw std::invalid_argument("GridSpec: need n >= 0");
        if (eps == 0.0)
            eps = default_eps(n);
        // the offset point lo + eps must stay inside the (right-closed) bin
        if (eps <= 0.0 || eps > bin_width())
            throw std::invalid_argument("GridSpec: need 0 < eps <= 2^-n");
    }

    static double default_eps(int n_) { return std::ldexp(1.0, -(n_ + 4)); }

    double bin_width() const { return std::ldexp(1.0, -n); }

    int bin_count() const { return (m2 - m1) << n; }

    bool contains(double a) const
    {
        return a > static_cast<double>(m1) && a <= static_cast<double>(m2);
    }

    // Unique t with a in A_t.  ceiling respects the (lo, hi] bin membership
    // at exact dyadic points; the clamp guards roundoff at the ends.
    int bin_index(double a) const
    {
        if (!contains(a))
            throw std::out_of_range("bin_index: value " + std::to_string(a) +
                                    " outside (" + std::to_string(m1) + ", " +
                                    std::to_string(m2) + "]");
        double scaled = (a - static_cast<double>(m1)) * std::ldexp(1.0, n);
        int t = static_cast<int>(std::ceil(scaled));
        if (t < 1) t = 1;
        int b = bin_count();
        if (t > b) t = b;
        return t;
    }

    // (lo, hi] endpoints of bin t.
    std::pair<double, double> bin_interval(int t) const
    {
        if (t < 1 || t > bin_count())
            throw std::out_of_range("bin_interval: bin " + std::to_string(t) +
                                    " outside 1.." + std::to_string(bin_count()));
        double lo = static_cast<double>(m1) + (t - 1) * bin_width();
        double hi = static_cast<double>(m1) + t * bin_width();
        return {lo, hi};
    }
};

// One problem-validation finding; empty list means the instance is usable.
struct Violation {
    std::size_t pair;    // training pair index, or npos for structural issues
    std::size_t coord;   // coordinate, or npos
    std::string message;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Checks that all coefficients lie in (m1, m2] and that every vector of the
// training set has the same length.  Returns diagnostics instead of throwing
// so callers can report all problems at once.
std::vector<Violation> validate_problem(const TrainingSet& ts, const GridSpec& grid);

}  // namespace qcreg
