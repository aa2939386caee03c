#pragma once
// Experiment configuration and the five CLI commands.  Commands return the
// process exit code: 0 success, 2 validation failure, 3 solver
// non-convergence (artifacts are still written).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qcreg/datagen.hpp"
#include "qcreg/learn.hpp"
#include "qcreg/mra.hpp"

namespace qcreg::cli {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kValidationError = 2;
constexpr int kSolverError = 3;

struct PenaltyTermConfig {
    double lambda = 0.0;
    double p = 2.0;
    double weight = 1.0;  // uniform per-coordinate weight
};

struct PathConfig {
    std::vector<double> eps = {1e-1, 1e-2, 1e-3};
    double k = 0.5;
    double p = 1.5;
    double w = 1.0;
    std::size_t dim = 16;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    fs::path out = "out";

    // grid
    int m1 = 0, m2 = 2, n = 4;
    double eps = 0.0;  // 0 = default 2^-(n+4)

    // corpus
    SceneSpec scene;
    NoiseSpec noise;
    int m = 8;
    int holdout = 0;

    // transform
    std::string filter = "haar";  // haar | db4 | lattice | none | file:PATH
    double theta = 0.0;
    int levels = 2;
    int space = 16;  // lattice grid size for the joint route

    std::string route = "discrete";  // direct | discrete | params | joint
    SolverConfig solver;

    std::vector<PenaltyTermConfig> penalty;  // for params route / denoising
    PathConfig path;

    GridSpec grid() const { return GridSpec(m1, m2, n, eps); }
    ScalingFilter resolve_filter() const;
};

// JSON config file; unknown keys are rejected to catch typos early
ExperimentConfig load_config(const fs::path& p);

int cmd_gen(const ExperimentConfig& cfg, bool force);
int cmd_train(const ExperimentConfig& cfg);
int cmd_denoise(const ExperimentConfig& cfg, const fs::path& regularizer,
                const fs::path& input, const std::optional<fs::path>& reference = {});
int cmd_eval(const ExperimentConfig& cfg, const std::vector<fs::path>& regularizers);
int cmd_path(const ExperimentConfig& cfg);

}  // namespace qcreg::cli
