#pragma once
// Learning the per-coordinate quasiconvex step regularizer from training
// pairs.  Two routes:
//   - direct: multi-start subgradient descent on the bilevel surrogate K_n
//     with exact projection onto the quasiconvex (valley-shaped) cone union;
//   - discrete: search over candidate argmin-bin assignments, each checked by
//     a linear feasibility system, optionally refined by minimizing K_n over
//     the feasible polytope of the chosen assignment.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcreg/core.hpp"
#include "qcreg/stepreg.hpp"

namespace qcreg {

// All (f, g) pairs restricted to one coordinate.
using CoordSlice = std::vector<std::pair<double, double>>;

// The quasiconvexity constraint set over all ordered triples r < s < t, each
// in the smooth form |x_r - x_t| + x_r + x_t - 2 x_s >= 0.
struct TripleConstraint {
    int r, s, t;  // 1-based bin indices
};

std::vector<TripleConstraint> quasiconvex_triples(int bins);

// >= 0 iff x satisfies the constraint (equals 2(max(x_r, x_t) - x_s)).
double triple_margin(const std::vector<double>& x, const TripleConstraint& c);

// The per-coordinate objective K_n over step values x in R^B:
//   K_n(x) = sum_i | min_t (q_{i,t} + x_t) - d_i - x_{fbin_i} |^2
// with q_{i,t} the candidate quadratic values of pair i's noisy coefficient,
// d_i = (f_i - g_i)^2 and fbin_i the bin of the clean coefficient.
struct KnPair {
    double f, g;
    double d;
    int f_bin;  // 1-based
    std::vector<Candidate> cands;
};

struct KnProblem {
    GridSpec grid;
    std::vector<KnPair> pairs;

    double eval(const std::vector<double>& x) const;
    std::vector<double> subgradient(const std::vector<double>& x) const;
    // winning candidate bin per pair at x (argmin tie-break as in stepreg)
    std::vector<int> winners(const std::vector<double>& x) const;
};

KnProblem build_kn(const CoordSlice& slice, const GridSpec& grid);

// Exact Euclidean projection onto the set of valley-shaped (quasiconvex)
// vectors: best split point with isotonic regression on both sides.
std::vector<double> project_quasiconvex(const std::vector<double>& x);

struct SolverConfig {
    int restarts = 4;         // extra random starts for the direct route
    int max_iters = 400;      // subgradient iterations per start
    double step0 = 0.25;      // initial subgradient step
    int prune_k = 8;          // candidate bins kept per pair; 0 = no pruning
    bool refine = true;       // minimize K_n over the chosen assignment's polytope
    double delta = -1.0;      // strictness margin; < 0 picks min(1e-9, eps^2/4)
    std::uint64_t seed = 1;
    std::size_t node_cap = 200000;  // best-first search budget per coordinate

    double margin(const GridSpec& grid) const;
};

// Optional diagnostics filled by the learners.
struct LearnReport {
    std::vector<double> kn;  // achieved K_n per coordinate
    std::vector<std::string> warnings;
    bool converged = true;
};

// One argmin-bin per training pair plus its data-fit score
//   L = sum_i (f_i - candidate point of bin r_i)^2.
struct SearchResult {
    std::vector<int> bins;  // 1-based, one per pair
    double l_value = 0.0;
    bool optimal = false;  // true when the search provably found the minimum
};

// Best-first enumeration of feasible assignments ordered by L.
SearchResult candidate_search(const CoordSlice& slice, const GridSpec& grid,
                              const SolverConfig& cfg);

// Feasible step values making bin r_i the penalized-argmin winner for every
// pair (within the strictness margin), intersected with quasiconvexity.
// Returns the minimum-norm feasible point, or nullopt if infeasible.
std::optional<std::vector<double>> feasibility_solve(const std::vector<int>& bins,
                                                     const CoordSlice& slice,
                                                     const GridSpec& grid,
                                                     const SolverConfig& cfg);

StepRegularizer learn_direct(const TrainingSet& ts, const GridSpec& grid,
                             const SolverConfig& cfg, LearnReport* report = nullptr);

StepRegularizer learn_discrete(const TrainingSet& ts, const GridSpec& grid,
                               const SolverConfig& cfg, LearnReport* report = nullptr);

inline StepRegularizer learn_discrete(const TrainingSet& ts, const GridSpec& grid,
                                      bool refine)
{
    SolverConfig cfg;
    cfg.refine = refine;
    return learn_discrete(ts, grid, cfg);
}

// Learns at dyadic levels n = 1..n_max on (m1, m2] and reports the objective
// trajectory (expected non-increasing as the bins shrink).
std::vector<std::pair<int, double>> resolution_sweep(const TrainingSet& ts, int m1,
                                                     int m2, int n_max,
                                                     const SolverConfig& cfg);

}  // namespace qcreg
