#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "io.hpp"
#include "qcreg/paramlearn.hpp"
#include "qcreg/ista.hpp"
#include "qcreg/rng.hpp"

namespace qcreg::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k)
                ok = true;
        if (!ok)
            throw std::runtime_error("config: unknown key '" + it.key() + "' in " + where);
    }
}

NoiseKind parse_kind(const std::string& s)
{
    if (s == "tiny_squares")
        return NoiseKind::tiny_squares;
    if (s == "gaussian")
        return NoiseKind::gaussian;
    if (s == "salt_pepper")
        return NoiseKind::salt_pepper;
    if (s == "monotone_map")
        return NoiseKind::monotone_map;
    throw std::runtime_error("config: unknown noise kind '" + s + "'");
}

struct Corpus {
    int pairs = 0, train = 0, holdout = 0, side = 0, row = 0;
    std::vector<std::pair<fs::path, fs::path>> row_files;  // (clean, noisy)
};

fs::path corpus_dir(const ExperimentConfig& cfg) { return cfg.out / "corpus"; }

Corpus read_manifest(const fs::path& dir)
{
    std::ifstream in(dir / "manifest.txt");
    if (!in)
        throw std::runtime_error("corpus manifest not found in " + dir.string());
    std::string magic, version;
    in >> magic >> version;
    if (magic != "qcreg-corpus" || version != "v1")
        throw std::runtime_error("not a qcreg-corpus v1 manifest");
    Corpus c;
    std::string key;
    while (in >> key) {
        if (key == "pairs")
            in >> c.pairs;
        else if (key == "train")
            in >> c.train;
        else if (key == "holdout")
            in >> c.holdout;
        else if (key == "side")
            in >> c.side;
        else if (key == "row")
            in >> c.row;
        else if (key == "pair") {
            int idx;
            std::string ci, ni, cr, nr;
            in >> idx >> ci >> ni >> cr >> nr;
            c.row_files.emplace_back(dir / cr, dir / nr);
        } else {
            throw std::runtime_error("manifest: unknown key '" + key + "'");
        }
    }
    if (static_cast<int>(c.row_files.size()) != c.pairs)
        throw std::runtime_error("manifest: pair count mismatch");
    return c;
}

SampleSet load_rows(const Corpus& c, int first, int count)
{
    SampleSet out;
    for (int i = first; i < first + count; ++i) {
        SignalPair sp;
        sp.clean = io::read_signal(c.row_files.at(static_cast<std::size_t>(i)).first);
        sp.noisy = io::read_signal(c.row_files.at(static_cast<std::size_t>(i)).second);
        out.push_back(std::move(sp));
    }
    return out;
}

TrainingSet to_coefficients(const SampleSet& rows, const ScalingFilter& filter, int levels)
{
    if (filter.taps.empty()) {
        TrainingSet out;
        for (const SignalPair& sp : rows)
            out.push_back({sp.clean, sp.noisy});
        return out;
    }
    return transform_set(rows, filter, levels);
}

std::vector<double> denoise_signal(const io::RegularizerArtifact& art,
                                   const std::vector<double>& signal)
{
    if (art.filter.taps.empty())
        return denoise_with_step(signal, art.reg);
    Pyramid pyr = decompose(project_samples(signal), art.filter, art.levels);
    CoeffVec flat = pyr.flatten();
    CoeffVec den = denoise_with_step(flat, art.reg);
    return reconstruct(Pyramid::unflatten(den, signal.size(), art.levels), art.filter);
}

double l2_error(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

int report_validation(const std::vector<Violation>& v)
{
    for (const Violation& viol : v) {
        std::cerr << "validation: ";
        if (viol.pair != Violation::npos)
            std::cerr << "pair " << viol.pair << " ";
        if (viol.coord != Violation::npos)
            std::cerr << "coordinate " << viol.coord << " ";
        std::cerr << viol.message << '\n';
    }
    return kValidationError;
}

}  // namespace

ScalingFilter ExperimentConfig::resolve_filter() const
{
    if (filter == "none")
        return {};
    if (filter == "haar")
        return ScalingFilter::haar();
    if (filter == "db4")
        return ScalingFilter::db4();
    if (filter == "lattice")
        return lattice_filter(theta);
    if (filter.rfind("file:", 0) == 0)
        return io::read_filter(filter.substr(5));
    throw std::runtime_error("config: unknown filter '" + filter + "'");
}

ExperimentConfig load_config(const fs::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw std::runtime_error("cannot open config " + p.string());
    json j = json::parse(in);
    check_keys(j, {"seed", "out", "grid", "corpus", "transform", "route", "solver",
                   "penalty", "path"},
               "top level");
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.out = j.value("out", std::string{"out"});
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, {"m1", "m2", "n", "eps"}, "grid");
        cfg.m1 = g.value("m1", 0);
        cfg.m2 = g.value("m2", 2);
        cfg.n = g.value("n", 4);
        cfg.eps = g.value("eps", 0.0);
    }
    if (j.contains("corpus")) {
        const json& c = j["corpus"];
        check_keys(c, {"side", "squares", "background", "min_level", "max_level",
                       "noise", "m", "holdout"},
                   "corpus");
        cfg.scene.side = c.value("side", 64);
        cfg.scene.squares = c.value("squares", 2);
        cfg.scene.background = c.value("background", 0.9);
        cfg.scene.min_level = c.value("min_level", 0.1);
        cfg.scene.max_level = c.value("max_level", 0.5);
        cfg.m = c.value("m", 8);
        cfg.holdout = c.value("holdout", 0);
        if (c.contains("noise")) {
            const json& nz = c["noise"];
            check_keys(nz, {"kind", "strength", "rate", "gain", "bias"}, "noise");
            cfg.noise.kind = parse_kind(nz.value("kind", std::string{"gaussian"}));
            cfg.noise.strength = nz.value("strength", 0.1);
            cfg.noise.rate = nz.value("rate", 0.05);
            cfg.noise.gain = nz.value("gain", 1.0);
            cfg.noise.bias = nz.value("bias", 0.0);
        }
    }
    if (j.contains("transform")) {
        const json& t = j["transform"];
        check_keys(t, {"filter", "theta", "levels", "space"}, "transform");
        cfg.filter = t.value("filter", std::string{"haar"});
        cfg.theta = t.value("theta", 0.0);
        cfg.levels = t.value("levels", 2);
        cfg.space = t.value("space", 16);
    }
    cfg.route = j.value("route", std::string{"discrete"});
    if (cfg.route != "direct" && cfg.route != "discrete" && cfg.route != "params" &&
        cfg.route != "joint")
        throw std::runtime_error("config: unknown route '" + cfg.route + "'");
    if (j.contains("solver")) {
        const json& s = j["solver"];
        check_keys(s, {"restarts", "max_iters", "step0", "prune_k", "refine", "delta",
                       "node_cap"},
                   "solver");
        cfg.solver.restarts = s.value("restarts", cfg.solver.restarts);
        cfg.solver.max_iters = s.value("max_iters", cfg.solver.max_iters);
        cfg.solver.step0 = s.value("step0", cfg.solver.step0);
        cfg.solver.prune_k = s.value("prune_k", cfg.solver.prune_k);
        cfg.solver.refine = s.value("refine", cfg.solver.refine);
        cfg.solver.delta = s.value("delta", cfg.solver.delta);
        cfg.solver.node_cap = s.value("node_cap", cfg.solver.node_cap);
    }
    cfg.solver.seed = cfg.seed;
    cfg.scene.seed = mix64(cfg.seed ^ 0x5ce5e5ull);
    cfg.noise.seed = mix64(cfg.seed ^ 0x901e5ull);
    if (j.contains("penalty")) {
        for (const json& t : j["penalty"]) {
            check_keys(t, {"lambda", "p", "weight"}, "penalty term");
            PenaltyTermConfig pt;
            pt.lambda = t.value("lambda", 0.0);
            pt.p = t.value("p", 2.0);
            pt.weight = t.value("weight", 1.0);
            cfg.penalty.push_back(pt);
        }
    }
    if (j.contains("path")) {
        const json& pp = j["path"];
        check_keys(pp, {"eps", "k", "p", "w", "dim"}, "path");
        if (pp.contains("eps"))
            cfg.path.eps = pp["eps"].get<std::vector<double>>();
        cfg.path.k = pp.value("k", 0.5);
        cfg.path.p = pp.value("p", 1.5);
        cfg.path.w = pp.value("w", 1.0);
        cfg.path.dim = pp.value("dim", std::size_t{16});
    }
    // cross-validation of named choices
    ScalingFilter f = cfg.resolve_filter();
    if (!f.taps.empty() && !check_qmf(f).ok)
        throw std::runtime_error("config: filter fails the QMF conditions");
    (void)cfg.grid();  // throws on inconsistent grid parameters
    return cfg;
}

int cmd_gen(const ExperimentConfig& cfg, bool force)
{
    fs::path dir = corpus_dir(cfg);
    if (fs::exists(dir / "manifest.txt") && !force) {
        std::cerr << "corpus already exists at " << dir
                  << "; pass --force to overwrite\n";
        return kValidationError;
    }
    int total = cfg.m + cfg.holdout;
    std::vector<ImagePair> pairs = gen_training_set(cfg.scene, cfg.noise, total);
    fs::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt");
    manifest << "qcreg-corpus v1\n";
    manifest << "pairs " << total << "\ntrain " << cfg.m << "\nholdout " << cfg.holdout
             << "\nside " << cfg.scene.side << "\nrow " << cfg.scene.side / 2 << '\n';
    const int row = cfg.scene.side / 2;
    for (int i = 0; i < total; ++i) {
        char tag[16];
        std::snprintf(tag, sizeof tag, "%03d", i);
        std::string base = "pair" + std::string(tag);
        io::write_image_pgm(dir / (base + "_clean.pgm"), pairs[static_cast<std::size_t>(i)].clean);
        io::write_image_pgm(dir / (base + "_noisy.pgm"), pairs[static_cast<std::size_t>(i)].noisy);
        io::write_image_text(dir / (base + "_clean.txt"), pairs[static_cast<std::size_t>(i)].clean);
        io::write_image_text(dir / (base + "_noisy.txt"), pairs[static_cast<std::size_t>(i)].noisy);
        const Image& ci = pairs[static_cast<std::size_t>(i)].clean;
        const Image& ni = pairs[static_cast<std::size_t>(i)].noisy;
        std::vector<double> crow(ci.px.begin() + static_cast<std::ptrdiff_t>(row) * ci.side,
                                 ci.px.begin() + static_cast<std::ptrdiff_t>(row + 1) * ci.side);
        std::vector<double> nrow(ni.px.begin() + static_cast<std::ptrdiff_t>(row) * ni.side,
                                 ni.px.begin() + static_cast<std::ptrdiff_t>(row + 1) * ni.side);
        io::write_signal(dir / (base + "_clean_row.txt"), crow);
        io::write_signal(dir / (base + "_noisy_row.txt"), nrow);
        manifest << "pair " << i << ' ' << base + "_clean.txt" << ' ' << base + "_noisy.txt"
                 << ' ' << base + "_clean_row.txt" << ' ' << base + "_noisy_row.txt" << '\n';
    }
    return kOk;
}

int cmd_train(const ExperimentConfig& cfg)
{
    Corpus corpus = read_manifest(corpus_dir(cfg));
    SampleSet rows = load_rows(corpus, 0, corpus.train);
    GridSpec grid = cfg.grid();

    if (cfg.route == "joint") {
        FilterSearchSpace space = FilterSearchSpace::lattice_grid(cfg.space);
        JointLearnResult res = learn_joint(rows, space, grid, cfg.levels, cfg.solver);
        io::write_filter(cfg.out / "filter.txt", res.filter);
        io::write_regularizer(cfg.out / "regularizer.txt",
                              {res.reg, res.filter, cfg.levels});
        std::vector<std::vector<double>> obj_rows;
        for (std::size_t i = 0; i < res.objectives.size(); ++i)
            obj_rows.push_back({static_cast<double>(i), res.objectives[i]});
        io::write_csv(cfg.out / "joint_objectives.csv", {"filter", "objective"}, obj_rows);
        return kOk;
    }

    ScalingFilter filter = cfg.resolve_filter();
    TrainingSet ts = to_coefficients(rows, filter, cfg.levels);
    std::vector<Violation> viol = validate_problem(ts, grid);
    if (!viol.empty())
        return report_validation(viol);

    if (cfg.route == "params") {
        PenaltyFamily fam;
        for (const PenaltyTermConfig& t : cfg.penalty) {
            fam.p.push_back(t.p);
            fam.weights.emplace_back(ts.front().clean.size(), t.weight);
        }
        if (fam.p.empty()) {
            std::cerr << "params route needs at least one penalty term\n";
            return kValidationError;
        }
        LambdaLearnResult res = learn_lambdas(ts, fam);
        io::write_lambdas(cfg.out / "lambdas.txt", res.lambda);
        std::vector<std::vector<double>> traj;
        for (std::size_t i = 0; i < res.trajectory.size(); ++i)
            traj.push_back({static_cast<double>(i), res.trajectory[i]});
        io::write_csv(cfg.out / "train_metrics.csv", {"iteration", "objective"}, traj);
        return res.converged ? kOk : kSolverError;
    }

    LearnReport report;
    StepRegularizer reg = (cfg.route == "direct")
                              ? learn_direct(ts, grid, cfg.solver, &report)
                              : learn_discrete(ts, grid, cfg.solver, &report);
    double obj = objective_I(reg, ts);
    io::write_regularizer(cfg.out / "regularizer.txt", {reg, filter, cfg.levels});
    std::vector<std::vector<double>> metric_rows;
    for (std::size_t g = 0; g < report.kn.size(); ++g)
        metric_rows.push_back({static_cast<double>(g), report.kn[g]});
    io::write_csv(cfg.out / "train_metrics.csv", {"coordinate", "kn"}, metric_rows);
    io::write_csv(cfg.out / "train_summary.csv", {"objective"}, {{obj}});
    for (const std::string& w : report.warnings)
        std::cerr << "train: " << w << '\n';
    return report.converged ? kOk : kSolverError;
}

int cmd_denoise(const ExperimentConfig& cfg, const fs::path& regularizer,
                const fs::path& input, const std::optional<fs::path>& reference)
{
    io::RegularizerArtifact art = io::read_regularizer(regularizer);
    std::vector<double> signal = io::read_signal(input);
    std::size_t coeff_dim = signal.size();
    if (!art.filter.taps.empty() &&
        (signal.size() >> art.levels << art.levels) != signal.size()) {
        std::cerr << "denoise: signal length " << signal.size()
                  << " incompatible with " << art.levels << " transform levels\n";
        return kValidationError;
    }
    if (art.reg.coord_count() != coeff_dim) {
        std::cerr << "denoise: regularizer has " << art.reg.coord_count()
                  << " coordinates, input has " << coeff_dim << "\n"
                  << "regularizer grid: (" << art.reg.grid.m1 << ", " << art.reg.grid.m2
                  << "], n=" << art.reg.grid.n << '\n';
        return kValidationError;
    }
    std::vector<double> out;
    try {
        out = denoise_signal(art, signal);
    } catch (const std::out_of_range& e) {
        std::cerr << "denoise: " << e.what() << '\n';
        return kValidationError;
    }
    io::write_signal(cfg.out / "denoised.txt", out);
    std::vector<std::string> header = {"residual_l2"};
    std::vector<double> row = {l2_error(out, signal)};
    if (reference) {
        std::vector<double> ref = io::read_signal(*reference);
        header.push_back("error_l2");
        header.push_back("noisy_error_l2");
        row.push_back(l2_error(out, ref));
        row.push_back(l2_error(signal, ref));
    }
    io::write_csv(cfg.out / "denoise_stats.csv", header, {row});
    return kOk;
}

int cmd_eval(const ExperimentConfig& cfg, const std::vector<fs::path>& regularizers)
{
    Corpus corpus = read_manifest(corpus_dir(cfg));
    int first = corpus.holdout > 0 ? corpus.train : 0;
    int count = corpus.holdout > 0 ? corpus.holdout : corpus.train;
    SampleSet rows = load_rows(corpus, first, count);

    std::vector<std::vector<double>> table;
    for (std::size_t mth = 0; mth < regularizers.size(); ++mth) {
        io::RegularizerArtifact art = io::read_regularizer(regularizers[mth]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::vector<double> out = denoise_signal(art, rows[i].noisy);
            table.push_back({static_cast<double>(mth), static_cast<double>(i),
                             l2_error(out, rows[i].clean),
                             l2_error(rows[i].noisy, rows[i].clean)});
        }
    }
    io::write_csv(cfg.out / "eval.csv",
                  {"method", "pair", "error_l2", "noisy_error_l2"}, table);
    return kOk;
}

int cmd_path(const ExperimentConfig& cfg)
{
    const std::size_t dim = cfg.path.dim;
    CounterRng rng = CounterRng::from_seed(cfg.seed);
    CoeffVec f_true(dim), k(dim, cfg.path.k);
    for (double& v : f_true)
        v = rng.next_range(0.5, 1.5);
    PointwisePenalty pen;
    pen.w.assign(dim, cfg.path.w);
    pen.p.assign(dim, cfg.path.p);
    std::vector<PathPoint> pts =
        regularization_path(f_true, k, pen, cfg.path.eps, cfg.seed);
    std::vector<std::vector<double>> rows;
    for (const PathPoint& pt : pts)
        rows.push_back({pt.eps, pt.alpha, pt.error});
    io::write_csv(cfg.out / "path.csv", {"eps", "alpha", "error"}, rows);
    // monitor history of the last level on a fresh solve for the record
    return kOk;
}

}  // namespace qcreg::cli
