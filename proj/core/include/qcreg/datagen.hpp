#pragma once
// Deterministic synthetic corpora: square scenes, the four noise models, and
// (clean, noisy) training pairs in the sample domain.  All randomness comes
// from the counter-based generator in rng.hpp with explicit stream splits.

#include <cstdint>
#include <vector>

#include "qcreg/core.hpp"
#include "qcreg/mra.hpp"

namespace qcreg {

struct Image {
    int side = 0;
    std::vector<double> px;  // row-major, values in [0, 1]

    double& at(int r, int c) { return px[static_cast<std::size_t>(r * side + c)]; }
    double at(int r, int c) const { return px[static_cast<std::size_t>(r * side + c)]; }
};

struct SceneSpec {
    int side = 64;            // power of two
    int squares = 2;          // medium dark squares on a light background
    int min_size = 0;         // 0 = side/8 (the "medium" default)
    int max_size = 0;         // 0 = side/4
    double background = 0.9;
    double min_level = 0.1;   // square darkness range
    double max_level = 0.5;
    std::uint64_t seed = 1;
};

enum class NoiseKind { tiny_squares, gaussian, salt_pepper, monotone_map };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double strength = 0.1;  // gaussian sigma | tiny-square darkness | unused
    double rate = 0.05;     // salt-pepper corruption rate | tiny-square density
    double gain = 1.0;      // monotone map: x -> gain*x + bias, gain > 0
    double bias = 0.0;
    std::uint64_t seed = 1;
};

Image gen_scene(const SceneSpec& spec);
Image apply_noise(const Image& img, const NoiseSpec& spec);

// m pairs; pair i uses seeds split from the master seeds in the specs
struct ImagePair {
    Image clean, noisy;
};
std::vector<ImagePair> gen_training_set(const SceneSpec& scene, const NoiseSpec& noise,
                                        int m);

// 1-D corpus: one row per generated scene (row side/2), feeding the mra
// pipeline; lengths are the scene side, a power of two
SampleSet gen_training_rows(const SceneSpec& scene, const NoiseSpec& noise, int m);

}  // namespace qcreg
