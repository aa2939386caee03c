#include "qcreg/core.hpp"

namespace qcreg {

std::vector<Violation> validate_problem(const TrainingSet& ts, const GridSpec& grid)
{
    std::vector<Violation> out;
    if (ts.empty()) {
        out.push_back({Violation::npos, Violation::npos, "training set is empty"});
        return out;
    }
    const std::size_t dim = ts.front().clean.size();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const TrainingPair& pr = ts[i];
        if (pr.clean.size() != dim || pr.noisy.size() != dim) {
            out.push_back({i, Violation::npos,
                           "index set mismatch: pair has sizes (" +
                               std::to_string(pr.clean.size()) + ", " +
                               std::to_string(pr.noisy.size()) + "), expected " +
                               std::to_string(dim)});
            continue;
        }
        for (std::size_t g = 0; g < dim; ++g) {
            if (!grid.contains(pr.clean[g]))
                out.push_back({i, g, "clean coefficient " + std::to_string(pr.clean[g]) +
                                         " outside grid interval"});
            if (!grid.contains(pr.noisy[g]))
                out.push_back({i, g, "noisy coefficient " + std::to_string(pr.noisy[g]) +
                                         " outside grid interval"});
        }
    }
    return out;
}

}  // namespace qcreg
