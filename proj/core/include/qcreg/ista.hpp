#pragma once
// Thresholded-Landweber iteration for || K f - g ||^2 + sum_gamma
// w_gamma |f_gamma|^{p_gamma} with a bounded linear forward operator
// (operator norm < 1), plus convergence monitors and the noise-level /
// penalty-scale regularization path.

#include <functional>
#include <vector>

#include "qcreg/core.hpp"
#include "qcreg/rng.hpp"

namespace qcreg {

struct LinearOperator {
    std::size_t dim_in = 0;   // coefficient-space dimension
    std::size_t dim_out = 0;  // observation-space dimension
    std::function<CoeffVec(const CoeffVec&)> apply;
    std::function<CoeffVec(const CoeffVec&)> adjoint;

    static LinearOperator diagonal(CoeffVec k);
};

// partitioned penalty: exactly one (w_gamma > 0, p_gamma in [1,2]) per
// coordinate
struct PointwisePenalty {
    std::vector<double> w;
    std::vector<double> p;

    double value(const CoeffVec& f) const;
    PointwisePenalty scaled(double alpha) const;
};

// power-iteration estimate of ||K||, 100 iterations, relative tol 1e-6
double norm_estimate(const LinearOperator& K, std::uint64_t seed = 7);

// max_i |<K u_i, v_i> - <u_i, K* v_i>| over random pairs
double adjoint_mismatch(const LinearOperator& K, int trials = 10,
                        std::uint64_t seed = 11);

// explicit rescaling helper: (K/s, g/s) with s = 1.05 * norm_estimate(K)
struct ScaledProblem {
    LinearOperator K;
    CoeffVec g;
    double scale;
};
ScaledProblem rescale_problem(const LinearOperator& K, const CoeffVec& g);

// one iteration: S_{W,P}(f + K*(g - K f))
CoeffVec apply_T(const CoeffVec& f, const CoeffVec& g, const LinearOperator& K,
                 const PointwisePenalty& pen);

// Phi_{W,P}(f) = ||K f - g||^2 + penalty(f)
double objective_phi(const CoeffVec& f, const CoeffVec& g, const LinearOperator& K,
                     const PointwisePenalty& pen);

// surrogate Phi(f) + ||f - a||^2 - ||K(f - a)||^2
double surrogate_value(const CoeffVec& f, const CoeffVec& a, const CoeffVec& g,
                       const LinearOperator& K, const PointwisePenalty& pen);

struct IterationRecord {
    int iter;
    double step_norm;  // ||f^{k+1} - f^k||
    double objective;  // Phi_{W,P}(f^{k+1})
    double surrogate;  // Phi^{S u R}(f^{k+1}; f^k)
};

struct IterateOptions {
    int max_iters = 100000;
    double step_tol = 1e-10;
};

struct IterateResult {
    CoeffVec f;
    std::vector<IterationRecord> history;
    bool converged = false;
};

// Repeats apply_T from f0 until the step norm falls below step_tol; refuses
// operators with estimated norm >= 1 and aborts on objective increase
// (norm-bound violation upstream).
IterateResult iterate(const CoeffVec& f0, const CoeffVec& g, const LinearOperator& K,
                      const PointwisePenalty& pen, const IterateOptions& opt = {});

struct PathPoint {
    double eps;
    double alpha;
    double error;  // ||f_hat - f_dagger||
};

// For each noise level: g = K f_true + noise of norm <= eps, penalties
// scaled by alpha(eps) = eps, solved by iterate; the reference f_dagger is
// the minimal-penalty solution of K f = K f_true, computed coordinate-wise
// for the diagonal operators this diagnostic supports.
std::vector<PathPoint> regularization_path(const CoeffVec& f_true, const CoeffVec& k_diag,
                                           const PointwisePenalty& pen,
                                           const std::vector<double>& eps_levels,
                                           std::uint64_t seed = 3);

}  // namespace qcreg
