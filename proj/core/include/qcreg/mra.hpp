#pragma once
// Multiresolution machinery: scaling filters and their quadrature-mirror
// validation, the orthonormal pyramid transform with periodic boundaries,
// cascade evaluation of the scaling function, and joint filter+regularizer
// learning by finite search over a filter space.

#include <string>
#include <vector>

#include "qcreg/core.hpp"
#include "qcreg/learn.hpp"
#include "qcreg/stepreg.hpp"

namespace qcreg {

// Scaling coefficients p_k, k = k0 .. k0 + taps.size() - 1, normalized so
// that (1/2) sum p_k = 1.
struct ScalingFilter {
    std::vector<double> taps;
    int k0 = 0;

    static ScalingFilter haar();
    static ScalingFilter db4();
};

// One-angle family of length-4 orthonormal filters:
//   p = ((1-c+s)/2, (1+c+s)/2, (1+c-s)/2, (1-c-s)/2), c = cos t, s = sin t.
// theta = pi/2 gives Haar (padded), theta = pi/3 gives Daubechies-4.
ScalingFilter lattice_filter(double theta);

struct QmfReport {
    bool ok = false;
    double sum_violation = 0.0;      // |(1/2) sum p_k - 1|
    double identity_violation = 0.0; // max | |P(z)|^2 + |P(-z)|^2 - 1 |
    double lowpass_min = 0.0;        // min |P(e^{it})| over |t| <= pi/2
    std::vector<std::string> violated;
};

// Conditions: (i) (1/2) sum p_k = 1; (ii) |P(z)|^2 + |P(-z)|^2 = 1 on the
// unit circle; (iii) |P(e^{it})| > 0 for |t| <= pi/2.  Sampled at 4096
// circle points.
QmfReport check_qmf(const ScalingFilter& filter, double tol = 1e-10);

// Samples at rate 2^{j0} are used directly as level-j0 approximation
// coefficients.
std::vector<double> project_samples(const std::vector<double>& samples);

// Pyramid of detail bands plus the coarsest approximation.
struct Pyramid {
    std::vector<std::vector<double>> details;  // finest band first
    std::vector<double> approx;

    // concatenation (approx, then details coarse-to-fine) as one vector
    CoeffVec flatten() const;
    static Pyramid unflatten(const CoeffVec& flat, std::size_t length, int levels);
};

Pyramid decompose(const std::vector<double>& approx, const ScalingFilter& filter,
                  int levels);
std::vector<double> reconstruct(const Pyramid& tree, const ScalingFilter& filter);

struct CascadeResult {
    double step = 0.0;             // grid spacing 2^-iters... of the samples
    std::vector<double> samples;   // phi on [k0, k0 + support) at that spacing
    std::vector<double> sup_diffs; // sup |phi_j - phi_{j-1}| per iteration
};

// Iterates phi_j(x) = sum_k p_k phi_{j-1}(2x - k) from the box function on a
// fixed dyadic grid; diagnostic only (denoising uses the taps directly).
CascadeResult cascade_phi(const ScalingFilter& filter, int iters);

struct FilterSearchSpace {
    std::vector<ScalingFilter> filters;
    std::vector<std::string> labels;

    // uniform theta grid over [0, 2pi) of the lattice family, keeping only
    // members passing all QMF conditions
    static FilterSearchSpace lattice_grid(int count);
};

// A training set in the sample domain (1-D signals).
struct SignalPair {
    std::vector<double> clean, noisy;
};
using SampleSet = std::vector<SignalPair>;

struct JointLearnResult {
    ScalingFilter filter;
    std::string label;
    StepRegularizer reg;
    std::vector<double> objectives;  // per space member; skipped = +inf
    std::size_t best = 0;
};

// Outer finite search over the filter space; each member transforms the
// corpus and is scored by learn_discrete's training objective.
JointLearnResult learn_joint(const SampleSet& ts, const FilterSearchSpace& space,
                             const GridSpec& grid, int levels, const SolverConfig& cfg);

// transform helper shared by learn_joint and the cli pipeline
TrainingSet transform_set(const SampleSet& ts, const ScalingFilter& filter, int levels);

}  // namespace qcreg
