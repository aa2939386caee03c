#include "qcreg/stepreg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcreg {

bool is_quasiconvex(const std::vector<double>& a)
{
    const std::size_t n = a.size();
    if (n < 3)
        return true;
    // prefix_min[s] = min(a[0..s-1]); suffix_min[s] = min(a[s+1..n-1])
    std::vector<double> suffix_min(n);
    suffix_min[n - 1] = std::numeric_limits<double>::infinity();
    for (std::size_t s = n - 1; s-- > 0;)
        suffix_min[s] = std::min(a[s + 1], suffix_min[s + 1]);
    double prefix_min = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
        if (a[s] > prefix_min && a[s] > suffix_min[s])
            return false;  // a[s] strictly above some earlier and later entry
        prefix_min = std::min(prefix_min, a[s]);
    }
    return true;
}

StepRegularizer::StepRegularizer(GridSpec grid_, std::vector<std::vector<double>> coeffs_)
    : grid(grid_), coeffs(std::move(coeffs_))
{
    const std::size_t b = static_cast<std::size_t>(grid.bin_count());
    for (std::size_t g = 0; g < coeffs.size(); ++g) {
        if (coeffs[g].size() != b)
            throw std::invalid_argument("StepRegularizer: coordinate " + std::to_string(g) +
                                        " has " + std::to_string(coeffs[g].size()) +
                                        " coefficients, expected " + std::to_string(b));
        if (!is_quasiconvex(coeffs[g]))
            throw std::invalid_argument("StepRegularizer: coordinate " + std::to_string(g) +
                                        " is not quasiconvex");
    }
}

StepRegularizer StepRegularizer::zero(GridSpec grid_, std::size_t coords)
{
    return StepRegularizer(grid_, std::vector<std::vector<double>>(
                                      coords, std::vector<double>(grid_.bin_count(), 0.0)));
}

double StepRegularizer::evaluate(std::size_t gamma, double x) const
{
    return coeffs.at(gamma)[static_cast<std::size_t>(grid.bin_index(x)) - 1];
}

std::vector<Candidate> candidate_points_center(double center, const GridSpec& grid)
{
    const int b = grid.bin_count();
    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(b));
    for (int t = 1; t <= b; ++t) {
        auto [lo, hi] = grid.bin_interval(t);
        double x;
        if (center > hi)
            x = hi;  // quadratic decreasing over the whole bin
        else if (center <= lo)
            x = lo + grid.eps;  // increasing; lo itself is excluded
        else
            x = center;  // unconstrained minimum lies inside this bin
        double d = x - center;
        out.push_back({t, x, d * d});
    }
    return out;
}

std::vector<Candidate> candidate_points(double g_val, const GridSpec& grid)
{
    if (!grid.contains(g_val))
        throw std::out_of_range("candidate_points: value outside grid");
    return candidate_points_center(g_val, grid);
}

namespace {

PenalizedArgmin pick_candidate(const std::vector<Candidate>& cands,
                               const std::vector<double>& coeffs, int data_bin)
{
    PenalizedArgmin best{0.0, std::numeric_limits<double>::infinity(), 0};
    for (const Candidate& c : cands) {
        double v = c.q + coeffs[static_cast<std::size_t>(c.bin) - 1];
        bool better = v < best.value;
        if (!better && v == best.value) {
            // deterministic ties: the data bin first, then the smaller index
            if (c.bin == data_bin && best.bin != data_bin)
                better = true;
            else if (best.bin != data_bin && c.bin < best.bin)
                better = true;
        }
        if (better)
            best = {c.x, v, c.bin};
    }
    return best;
}

}  // namespace

PenalizedArgmin argmin_penalized(double g_val, const StepRegularizer& reg,
                                 std::size_t gamma)
{
    std::vector<Candidate> cands = candidate_points(g_val, reg.grid);
    return pick_candidate(cands, reg.coeffs.at(gamma), reg.grid.bin_index(g_val));
}

CoeffVec denoise_with_step(const CoeffVec& g, const StepRegularizer& reg)
{
    if (g.size() != reg.coord_count())
        throw std::invalid_argument("denoise_with_step: coordinate count mismatch");
    CoeffVec f(g.size());
    for (std::size_t gamma = 0; gamma < g.size(); ++gamma)
        f[gamma] = argmin_penalized(g[gamma], reg, gamma).x;
    return f;
}

CoeffVec denoise_diagonal(const CoeffVec& g, const CoeffVec& k,
                          const StepRegularizer& reg)
{
    if (g.size() != k.size() || g.size() != reg.coord_count())
        throw std::invalid_argument("denoise_diagonal: dimension mismatch");
    CoeffVec f(g.size());
    for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
        double kk = k[gamma];
        if (kk == 0.0)
            throw std::domain_error("denoise_diagonal: zero diagonal entry");
        // |k x - g|^2 = k^2 (x - g/k)^2 + const: same candidate geometry
        // around the center g/k, quadratic term scaled by k^2.
        double center = g[gamma] / kk;
        std::vector<Candidate> cands = candidate_points_center(center, reg.grid);
        for (Candidate& c : cands)
            c.q *= kk * kk;
        int data_bin = reg.grid.contains(center) ? reg.grid.bin_index(center) : 0;
        f[gamma] = pick_candidate(cands, reg.coeffs.at(gamma), data_bin).x;
    }
    return f;
}

double objective_I(const StepRegularizer& reg, const TrainingSet& ts)
{
    double acc = 0.0;
    for (const TrainingPair& pr : ts) {
        CoeffVec d = denoise_with_step(pr.noisy, reg);
        for (std::size_t gamma = 0; gamma < d.size(); ++gamma) {
            double r = d[gamma] - pr.clean[gamma];
            acc += r * r;
        }
    }
    return acc;
}

}  // namespace qcreg
