#pragma once
// Per-coordinate quasiconvex step regularizers on a dyadic grid: validation,
// evaluation, penalized argmin via candidate points, denoising, and the
// training objective they are scored by.

#include <vector>

#include "qcreg/core.hpp"

namespace qcreg {

// True iff a_s <= max(a_r, a_t) for every r < s < t.  O(B): a violation
// exists iff some entry is strictly above both an earlier and a later entry.
bool is_quasiconvex(const std::vector<double>& a);

struct StepRegularizer {
    GridSpec grid;
    // coeffs[gamma][t-1] = step value C_t on bin t, one array per coordinate
    std::vector<std::vector<double>> coeffs;

    StepRegularizer() = default;
    StepRegularizer(GridSpec grid_, std::vector<std::vector<double>> coeffs_);

    std::size_t coord_count() const { return coeffs.size(); }

    // psi_gamma(x) = coeffs[gamma][bin_index(x)]
    double evaluate(std::size_t gamma, double x) const;

    static StepRegularizer zero(GridSpec grid_, std::size_t coords);
};

// Per-bin approximate minimizer of (x - g_val)^2 over the half-open bin:
// bins left of the data bin use their right endpoint, the data bin uses
// g_val itself, bins to the right use left endpoint + eps.
struct Candidate {
    int bin;   // 1-based
    double x;  // candidate point inside the bin
    double q;  // (x - g_val)^2
};

std::vector<Candidate> candidate_points(double g_val, const GridSpec& grid);

// Same construction for a quadratic centered anywhere (used by the diagonal
// forward operator, where the center g/k may fall outside the grid).
std::vector<Candidate> candidate_points_center(double center, const GridSpec& grid);

struct PenalizedArgmin {
    double x;      // minimizing point
    double value;  // (x - g_val)^2 + psi_gamma(x)
    int bin;       // its bin
};

// argmin over (m1, m2] of (x - g_val)^2 + psi_gamma(x); ties broken toward
// the bin containing g_val, then toward the smaller bin index.
PenalizedArgmin argmin_penalized(double g_val, const StepRegularizer& reg,
                                 std::size_t gamma);

// Coordinate-wise argmin_penalized.
CoeffVec denoise_with_step(const CoeffVec& g, const StepRegularizer& reg);

// Per-coordinate argmin of (k_gamma x - g_gamma)^2 + psi_gamma(x).
CoeffVec denoise_diagonal(const CoeffVec& g, const CoeffVec& k,
                          const StepRegularizer& reg);

// The bilevel training objective: sum_i ||denoise(g_i) - f_i||^2.
double objective_I(const StepRegularizer& reg, const TrainingSet& ts);

}  // namespace qcreg
