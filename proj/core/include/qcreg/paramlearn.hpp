#pragma once
// Learning the penalty scales lambda_1..lambda_n of a weighted multi-penalty
// by descending the training loss through the inverse of the shrinkage map.

#include <vector>

#include "qcreg/core.hpp"
#include "qcreg/shrink.hpp"

namespace qcreg {

// Description of the penalty family at a fixed coordinate set: term j has
// exponent p[j] and per-coordinate weights w[j][gamma] (all > 0).
struct PenaltyFamily {
    std::vector<std::vector<double>> weights;  // [term][coordinate]
    std::vector<double> p;                     // exponents in [1, 2]

    std::size_t term_count() const { return p.size(); }
};

// F_lambda(x) = x + sign(x) * sum_j p_j lambda_j w_{j,gamma} |x|^{p_j - 1} / 2.
// Requires every p_j > 1 (the differentiable regime); p_j = 1 instances are
// evaluated through shrink_multi instead.
double f_lambda(double x, const std::vector<double>& lambda, const PenaltyFamily& fam,
                std::size_t gamma);

// Monotone inversion of f_lambda: the x with f_lambda(x) = y, to 1e-12.
// Equals shrink_multi(y, terms at gamma), so p_j = 1 terms are handled too.
double invert_f_lambda(double y, const std::vector<double>& lambda,
                       const PenaltyFamily& fam, std::size_t gamma);

// sum_i sum_gamma | invert_f_lambda((g_i)_gamma) - (f_i)_gamma |^2
double objective_I_lambda(const std::vector<double>& lambda, const TrainingSet& ts,
                          const PenaltyFamily& fam);

// analytic gradient by implicit differentiation (p_j > 1 coordinates only;
// dead-zone coordinates contribute zero)
std::vector<double> gradient_I_lambda(const std::vector<double>& lambda,
                                      const TrainingSet& ts, const PenaltyFamily& fam);

struct LambdaLearnConfig {
    int max_iters = 500;
    double step0 = 1.0;
    double tol = 1e-12;
};

struct LambdaLearnResult {
    std::vector<double> lambda;
    std::vector<double> trajectory;  // objective per accepted iterate
    bool converged = true;
};

// Projected gradient descent with backtracking from lambda = 0, lambda >= 0.
LambdaLearnResult learn_lambdas(const TrainingSet& ts, const PenaltyFamily& fam,
                                const LambdaLearnConfig& cfg = {});

}  // namespace qcreg
