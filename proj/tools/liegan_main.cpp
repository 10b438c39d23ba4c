#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liegan/commands.hpp"
#include "liegan/errors.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::vector<std::string> sets;
    long seed = -1;
    long epochs = -1;
    long k = -1;
    long count = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key = value config file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "seed override");
    cmd->add_option("--epochs", f.epochs, "training epochs override");
    cmd->add_option("--k", f.k, "task parameter k override");
    cmd->add_option("--count", f.count, "sample count override");
    cmd->add_option("--set", f.sets, "extra key=value overrides")->take_all();
}

liegan::KeyValueConfig build_config(const CommonFlags& f, const std::vector<std::string>& seed_keys) {
    liegan::KeyValueConfig cfg;
    if (!f.config_path.empty()) cfg = liegan::KeyValueConfig::from_file(f.config_path);
    if (!f.out.empty()) cfg.set("out.dir", f.out);
    if (f.seed >= 0)
        for (const std::string& key : seed_keys) cfg.set(key, std::to_string(f.seed));
    if (f.epochs >= 0) cfg.set("train.epochs", std::to_string(f.epochs));
    if (f.k >= 0) cfg.set("task.k", std::to_string(f.k));
    if (f.count >= 0) cfg.set("task.count", std::to_string(f.count));
    for (const std::string& s : f.sets) cfg.apply_override(s);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetry discovery toolkit"};
    app.require_subcommand(1);

    CommonFlags gen_flags, disc_flags, ana_flags, aug_flags;
    std::string generator_name, basis_path, truth_path, channels;

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("generator", generator_name,
                    "two_body | discrete_rotation | partial_permutation | su2 | lorentz_invariant");
    add_common(gen, gen_flags);

    CLI::App* discover = app.add_subcommand("discover", "train the symmetry generator");
    add_common(discover, disc_flags);

    CLI::App* analyze = app.add_subcommand("analyze", "metric solve and basis comparison");
    analyze->add_option("--basis", basis_path, "learned basis json");
    analyze->add_option("--truth", truth_path, "ground-truth basis json");
    analyze->add_option("--channels", channels, "comma-separated channel subset");
    add_common(analyze, ana_flags);

    CLI::App* augeval = app.add_subcommand("augment-eval", "predictor with vs without augmentation");
    augeval->add_option("--basis", basis_path, "trained basis json");
    add_common(augeval, aug_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            liegan::KeyValueConfig cfg = build_config(gen_flags, {"task.seed"});
            if (!generator_name.empty()) cfg.set("task.generator", generator_name);
            liegan::cmd_gen(cfg);
        } else if (discover->parsed()) {
            liegan::KeyValueConfig cfg = build_config(disc_flags, {"task.seed", "train.seed"});
            liegan::cmd_discover(cfg);
        } else if (analyze->parsed()) {
            liegan::KeyValueConfig cfg = build_config(ana_flags, {"analysis.seed"});
            if (!basis_path.empty()) cfg.set("analysis.basis", basis_path);
            if (!truth_path.empty()) cfg.set("analysis.truth", truth_path);
            if (!channels.empty()) cfg.set("analysis.channels", channels);
            liegan::cmd_analyze(cfg);
        } else if (augeval->parsed()) {
            liegan::KeyValueConfig cfg = build_config(aug_flags, {"task.seed", "aug.seed"});
            if (!basis_path.empty()) cfg.set("aug.basis", basis_path);
            liegan::cmd_augment_eval(cfg);
        }
    } catch (const liegan::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const liegan::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const liegan::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const liegan::TrainingDivergence& e) {
        std::cerr << "training failure: " << e.what() << "\n";
        return 3;
    } catch (const liegan::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
