// qcreg: learn signal-denoising regularizers from paired clean/noisy data
// and apply them.  Commands: gen | train | denoise | eval | path.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qcreg/rng.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"learned quasiconvex step regularizers for signal denoising"};
    app.require_subcommand(1);

    std::string config_path;
    std::string route;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool force = false;

    app.add_option("--config", config_path, "experiment config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--route", route, "learning route: direct|discrete|params|joint");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "master seed (overrides config)")
        ->each([&](const std::string&) { have_seed = true; });
    app.add_flag("--force", force, "overwrite existing outputs");

    CLI::App* cmd_gen = app.add_subcommand("gen", "generate a synthetic corpus");
    CLI::App* cmd_train = app.add_subcommand("train", "learn a regularizer");
    CLI::App* cmd_denoise = app.add_subcommand("denoise", "denoise one signal");
    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate regularizers on held-out pairs");
    CLI::App* cmd_path = app.add_subcommand("path", "regularization-path experiment");

    std::string reg_file, input_file, reference_file;
    cmd_denoise->add_option("--regularizer", reg_file, "regularizer artifact")->required();
    cmd_denoise->add_option("--input", input_file, "input signal (text)")->required();
    cmd_denoise->add_option("--reference", reference_file, "clean reference signal");
    std::vector<std::string> eval_regs;
    cmd_eval->add_option("--regularizer", eval_regs, "regularizer artifact(s)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        qcreg::cli::ExperimentConfig cfg = qcreg::cli::load_config(config_path);
        if (!route.empty())
            cfg.route = route;
        if (!out_dir.empty())
            cfg.out = out_dir;
        if (have_seed) {
            cfg.seed = seed;
            cfg.solver.seed = seed;
            cfg.scene.seed = qcreg::mix64(seed ^ 0x5ce5e5ull);
            cfg.noise.seed = qcreg::mix64(seed ^ 0x901e5ull);
        }

        if (cmd_gen->parsed())
            return qcreg::cli::cmd_gen(cfg, force);
        if (cmd_train->parsed())
            return qcreg::cli::cmd_train(cfg);
        if (cmd_denoise->parsed()) {
            std::optional<qcreg::cli::fs::path> ref;
            if (!reference_file.empty())
                ref = reference_file;
            return qcreg::cli::cmd_denoise(cfg, reg_file, input_file, ref);
        }
        if (cmd_eval->parsed()) {
            std::vector<qcreg::cli::fs::path> regs(eval_regs.begin(), eval_regs.end());
            return qcreg::cli::cmd_eval(cfg, regs);
        }
        if (cmd_path->parsed())
            return qcreg::cli::cmd_path(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qcreg::cli::kValidationError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qcreg::cli::kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qcreg::cli::kValidationError;
    }
    return 0;
}
