#pragma once
// Scalar shrinkage (proximal) operators for penalties c|x|^p with
// p in [1,2], and the coordinate-wise closed-form denoisers for identity
// and diagonal forward operators.

#include <optional>
#include <vector>

#include "qcreg/core.hpp"

namespace qcreg {

// One scalar penalty contribution c|x|^p at a fixed coordinate.
struct ScalarTerm {
    double c;  // > 0
    double p;  // in [1, 2]
};

// A weighted multi-penalty sum_i lambda_i * sum_gamma w_{i,gamma} |f_gamma|^{p_i}.
// Without a partition every term applies to every coordinate (summed mode);
// with one, term i applies only to the coordinates it owns (partitioned mode).
struct PenaltyTerm {
    double lambda;                // >= 0
    std::vector<double> weights;  // per coordinate, all > 0
    double p;                     // in [1, 2]
};

struct MultiPenalty {
    std::vector<PenaltyTerm> terms;
    // partition[gamma] = index of the owning term, or empty for summed mode
    std::vector<std::size_t> partition;

    // effective scalar terms at one coordinate (skips lambda = 0 terms)
    std::vector<ScalarTerm> terms_at(std::size_t gamma) const;

    double value(const CoeffVec& f) const;
};

// F_{c,p}(t) = t + (c p / 2) sign(t) |t|^{p-1}; strictly increasing and odd.
// Only defined for p > 1 (p = 1 is the soft-threshold branch).
double f_cp(double t, double c, double p);

// argmin_x of M(x) = x^2 - 2 b x + c|x|^p.
double shrink_single(double b, double c, double p);

// argmin_x of x^2 - 2 b x + sum_i c_i |x|^{p_i}; mixed exponents allowed.
double shrink_multi(double b, const std::vector<ScalarTerm>& terms);

// Exact minimizer of ||f - g||^2 + penalty(f), coordinate by coordinate.
CoeffVec denoise_identity(const CoeffVec& g, const MultiPenalty& pen);

// Per-coordinate argmin of |k_gamma x - g_gamma|^2 + penalty at gamma,
// solved by completing the square and reusing shrink_multi.
CoeffVec denoise_diagonal(const CoeffVec& g, const CoeffVec& k, const MultiPenalty& pen);

}  // namespace qcreg
