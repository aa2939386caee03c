#pragma once
// On-disk formats: signals and images (exact numeric text + 8-bit PGM),
// regularizer / filter / lambda artifacts, and small CSV helpers.  Every
// writer has a reader returning an equal in-memory value.

#include <filesystem>
#include <string>
#include <vector>

#include "qcreg/datagen.hpp"
#include "qcreg/mra.hpp"
#include "qcreg/stepreg.hpp"

namespace qcreg::io {

namespace fs = std::filesystem;

// exact decimal rendering used by all artifact files (17 significant digits)
std::string render(double v);

void write_signal(const fs::path& p, const std::vector<double>& x);
std::vector<double> read_signal(const fs::path& p);

void write_image_text(const fs::path& p, const Image& img);
Image read_image_text(const fs::path& p);
void write_image_pgm(const fs::path& p, const Image& img);

// regularizer artifact: version line, grid block, filter block (may be
// empty), per-coordinate coefficient arrays in index order
struct RegularizerArtifact {
    StepRegularizer reg;
    ScalingFilter filter;  // empty taps = identity transform
    int levels = 0;
};
void write_regularizer(const fs::path& p, const RegularizerArtifact& art);
RegularizerArtifact read_regularizer(const fs::path& p);

// standalone filter file: a header line of offsets, then one tap per line
void write_filter(const fs::path& p, const ScalingFilter& f);
ScalingFilter read_filter(const fs::path& p);

void write_lambdas(const fs::path& p, const std::vector<double>& lambda);
std::vector<double> read_lambdas(const fs::path& p);

void write_csv(const fs::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace qcreg::io
