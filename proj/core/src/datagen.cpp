#include "qcreg/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcreg/rng.hpp"

namespace qcreg {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

Image gen_scene(const SceneSpec& spec)
{
    if (!is_pow2(spec.side))
        throw std::invalid_argument("gen_scene: side must be a power of two");
    int min_size = spec.min_size > 0 ? spec.min_size : std::max(1, spec.side / 8);
    int max_size = spec.max_size > 0 ? spec.max_size : std::max(min_size, spec.side / 4);
    if (min_size > max_size || max_size > spec.side)
        throw std::invalid_argument("gen_scene: square size range infeasible");

    Image img;
    img.side = spec.side;
    img.px.assign(static_cast<std::size_t>(spec.side) * spec.side, spec.background);

    CounterRng rng = CounterRng::from_seed(spec.seed);
    for (int s = 0; s < spec.squares; ++s) {
        CounterRng sq = rng.split(static_cast<std::uint64_t>(s));
        int size = min_size +
                   static_cast<int>(sq.next_below(static_cast<std::uint64_t>(
                       max_size - min_size + 1)));
        if (size > spec.side)
            throw std::runtime_error("gen_scene: square does not fit");
        int r0 = static_cast<int>(sq.next_below(static_cast<std::uint64_t>(
            spec.side - size + 1)));
        int c0 = static_cast<int>(sq.next_below(static_cast<std::uint64_t>(
            spec.side - size + 1)));
        double level = sq.next_range(spec.min_level, spec.max_level);
        for (int r = r0; r < r0 + size; ++r)
            for (int c = c0; c < c0 + size; ++c)
                img.at(r, c) = level;
    }
    return img;
}

Image apply_noise(const Image& img, const NoiseSpec& spec)
{
    Image out = img;
    CounterRng rng = CounterRng::from_seed(spec.seed);
    const int side = img.side;
    switch (spec.kind) {
    case NoiseKind::tiny_squares: {
        if (spec.rate < 0.0 || spec.rate > 1.0)
            throw std::invalid_argument("apply_noise: rate outside [0, 1]");
        // expected rate*side^2 corrupted pixels via 1..2-pixel dark squares
        auto count = static_cast<std::uint64_t>(spec.rate * side * side / 2.25);
        for (std::uint64_t i = 0; i < count; ++i) {
            CounterRng sq = rng.split(i);
            int size = 1 + static_cast<int>(sq.next_below(2));
            int r0 = static_cast<int>(sq.next_below(static_cast<std::uint64_t>(side - size + 1)));
            int c0 = static_cast<int>(sq.next_below(static_cast<std::uint64_t>(side - size + 1)));
            double level = clamp01(sq.next_range(0.0, spec.strength));
            for (int r = r0; r < r0 + size; ++r)
                for (int c = c0; c < c0 + size; ++c)
                    out.at(r, c) = level;
        }
        break;
    }
    case NoiseKind::gaussian:
        for (double& v : out.px)
            v = clamp01(v + spec.strength * rng.next_gaussian());
        break;
    case NoiseKind::salt_pepper: {
        if (spec.rate < 0.0 || spec.rate > 1.0)
            throw std::invalid_argument("apply_noise: rate outside [0, 1]");
        for (double& v : out.px)
            if (rng.next_unit() < spec.rate)
                v = (rng.next_unit() < 0.5) ? 0.0 : 1.0;
        break;
    }
    case NoiseKind::monotone_map:
        if (!(spec.gain > 0.0))
            throw std::invalid_argument("apply_noise: monotone map needs gain > 0");
        for (double& v : out.px)
            v = spec.gain * v + spec.bias;
        break;
    }
    return out;
}

std::vector<ImagePair> gen_training_set(const SceneSpec& scene, const NoiseSpec& noise,
                                        int m)
{
    if (m < 1)
        throw std::invalid_argument("gen_training_set: need m >= 1");
    CounterRng scene_rng = CounterRng::from_seed(scene.seed);
    CounterRng noise_rng = CounterRng::from_seed(noise.seed);
    std::vector<ImagePair> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        SceneSpec s = scene;
        s.seed = scene_rng.split(static_cast<std::uint64_t>(i)).next_u64();
        NoiseSpec nz = noise;
        nz.seed = noise_rng.split(static_cast<std::uint64_t>(i)).next_u64();
        Image clean = gen_scene(s);
        out.push_back({clean, apply_noise(clean, nz)});
    }
    return out;
}

SampleSet gen_training_rows(const SceneSpec& scene, const NoiseSpec& noise, int m)
{
    std::vector<ImagePair> imgs = gen_training_set(scene, noise, m);
    SampleSet out;
    out.reserve(imgs.size());
    const int row = scene.side / 2;
    for (const ImagePair& pr : imgs) {
        SignalPair sp;
        sp.clean.assign(pr.clean.px.begin() + static_cast<std::ptrdiff_t>(row) * scene.side,
                        pr.clean.px.begin() + static_cast<std::ptrdiff_t>(row + 1) * scene.side);
        sp.noisy.assign(pr.noisy.px.begin() + static_cast<std::ptrdiff_t>(row) * scene.side,
                        pr.noisy.px.begin() + static_cast<std::ptrdiff_t>(row + 1) * scene.side);
        out.push_back(std::move(sp));
    }
    return out;
}

}  // namespace qcreg
