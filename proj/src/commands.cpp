#include "liegan/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "liegan/analysis.hpp"
#include "liegan/datasets.hpp"
#include "liegan/serialize.hpp"
#include "liegan/trainer.hpp"

namespace liegan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path out_dir(KeyValueConfig& cfg) {
    fs::path dir = cfg.resolve("out.dir", ".");
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const KeyValueConfig& cfg, const std::string& command,
                    const std::vector<fs::path>& artifacts) {
    KeyValueConfig manifest = cfg;
    manifest.set("command", command);
    for (const fs::path& p : artifacts)
        manifest.set("artifact." + p.filename().string(), checksum_file(p));
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << manifest.serialize();
}

Dataset build_dataset(KeyValueConfig& cfg) {
    if (cfg.has("task.csv")) {
        CsvSchema schema;
        schema.n = static_cast<int>(cfg.require_long("task.n"));
        schema.m = static_cast<int>(cfg.require_long("task.m"));
        schema.task = task_from_name(cfg.resolve("task.kind", "regression"));
        schema.field = cfg.resolve("task.field", "real") == "complex" ? Field::Complex : Field::Real;
        schema.num_classes = cfg.resolve_int("task.num_classes", 0);
        schema.t_in = cfg.resolve_int("task.t_in", 0);
        schema.t_out = cfg.resolve_int("task.t_out", 0);
        schema.step_dim = cfg.resolve_int("task.step_dim", 0);
        schema.has_header = cfg.resolve_bool("task.header", false);
        return load_csv(cfg.require("task.csv"), schema);
    }

    const std::string name = cfg.require("task.generator");
    const long count = cfg.resolve_long("task.count", 10000);
    const std::uint64_t seed = cfg.resolve_u64("task.seed", 0);
    if (name == "two_body") {
        TwoBodyConfig tb;
        tb.r_lo = cfg.resolve_double("task.r_lo", tb.r_lo);
        tb.r_hi = cfg.resolve_double("task.r_hi", tb.r_hi);
        tb.t_in = cfg.resolve_int("task.t_in", tb.t_in);
        tb.t_out = cfg.resolve_int("task.t_out", tb.t_out);
        tb.mass = cfg.resolve_double("task.mass", tb.mass);
        tb.dt = cfg.resolve_double("task.dt", tb.dt);
        return gen_two_body(count, seed, tb);
    }
    if (name == "discrete_rotation")
        return gen_discrete_rotation(cfg.resolve_int("task.k", 7), count, seed);
    if (name == "partial_permutation") return gen_partial_permutation(count, seed);
    if (name == "su2") return gen_su2(count, seed);
    if (name == "lorentz_invariant") return gen_lorentz_invariant(count, seed);
    throw UsageError("unknown generator '" + name +
                     "' (expected two_body, discrete_rotation, partial_permutation, su2, "
                     "lorentz_invariant)");
}

struct GeneratorModel {
    LieBasis basis;
    CoefficientDistribution dist;
    RepresentationSpec rep;
};

GeneratorModel build_generator_model(KeyValueConfig& cfg, const Dataset& data, RandomStream& init_rng) {
    GeneratorModel m;
    const int default_k = data.task == TaskKind::Trajectory ? data.step_dim : data.n;
    const int k = cfg.resolve_int("gen.k", default_k);
    const int channels = cfg.resolve_int("gen.channels", 1);
    const Field field =
        cfg.resolve("gen.field", field_name(data.field)) == std::string("complex") ? Field::Complex
                                                                                   : Field::Real;

    BasisStructure structure = BasisStructure::Dense;
    int block = 0;
    const std::string st = cfg.resolve("gen.structure", "dense");
    if (st.rfind("block:", 0) == 0) {
        structure = BasisStructure::BlockDiagRepeat;
        block = std::stoi(st.substr(6));
    } else if (st != "dense") {
        throw UsageError("gen.structure must be 'dense' or 'block:<size>'");
    }

    const double init_std = cfg.resolve_double("gen.init_std", 0.2);
    m.basis = LieBasis::random_init(channels, k, field, init_rng, structure, block, init_std);

    const std::string dist = cfg.resolve("gen.dist", "gaussian");
    if (dist == "gaussian") {
        m.dist = CoefficientDistribution::gaussian(channels, cfg.resolve_double("gen.sigma", 1.0),
                                                   cfg.resolve_bool("gen.sigma_learnable", false));
    } else if (dist == "grid") {
        m.dist = CoefficientDistribution::uniform_int_grid(cfg.resolve_long("gen.grid_lo", -10),
                                                           cfg.resolve_long("gen.grid_hi", 10));
    } else {
        throw UsageError("gen.dist must be 'gaussian' or 'grid'");
    }

    if (data.n % k != 0) throw UsageError("gen.k must divide the input dimension");
    const int t = cfg.resolve_int("gen.rep_t", data.n / k);
    const std::string out_action = cfg.resolve(
        "gen.rep_out", data.task == TaskKind::Trajectory ? "blocks" : "trivial");
    if (out_action == "trivial") {
        m.rep = RepresentationSpec::invariant(t);
    } else if (out_action == "blocks") {
        if (data.m % k != 0) throw UsageError("gen.k must divide the output dimension");
        m.rep = RepresentationSpec::equivariant(t, cfg.resolve_int("gen.rep_s", data.m / k));
    } else {
        throw UsageError("gen.rep_out must be 'trivial' or 'blocks'");
    }
    return m;
}

MlpParams build_discriminator(KeyValueConfig& cfg, const Dataset& data, RandomStream& init_rng) {
    MlpConfig mc;
    const int x_width = data.x_width();
    mc.hidden = cfg.resolve_int("disc.hidden", 512);
    mc.layers = cfg.resolve_int("disc.layers", 3);
    mc.leak = cfg.resolve_double("disc.leak", 0.2);
    if (data.task == TaskKind::Classification) {
        mc.num_classes = data.num_classes > 0 ? data.num_classes : cfg.resolve_int("task.num_classes", 0);
        if (mc.num_classes <= 0) throw UsageError("classification data needs task.num_classes");
        mc.embed_dim = cfg.resolve_int("disc.embed_dim", 8);
        mc.input_dim = x_width + mc.embed_dim;
    } else {
        mc.input_dim = x_width + data.y_width();
    }
    return MlpParams::init(mc, init_rng);
}

TrainingConfig build_training(KeyValueConfig& cfg, const Dataset& data, const std::string& generator,
                              int channels) {
    TrainingConfig tc;
    const double default_lambda =
        data.task == TaskKind::Trajectory ? 1.0 : (generator == "discrete_rotation" ? 0.01 : 1.0);
    tc.lambda = cfg.resolve_double("train.lambda", default_lambda);
    tc.eta = cfg.resolve_double("train.eta", channels > 1 ? 0.1 : 0.0);
    tc.lr_disc = cfg.resolve_double("train.lr_d", 2e-4);
    tc.lr_gen = cfg.resolve_double("train.lr_g", 1e-3);
    tc.epochs = cfg.resolve_int("train.epochs", 100);
    tc.batch_size = cfg.resolve_int("train.batch", 64);
    tc.seed = cfg.resolve_u64("train.seed", 0);
    tc.d_steps_per_g_step = cfg.resolve_int("train.d_steps", 1);
    const std::string gl = cfg.resolve("train.gen_loss", "non_saturating");
    if (gl == "non_saturating")
        tc.gen_loss = GenLossKind::NonSaturating;
    else if (gl == "minimax")
        tc.gen_loss = GenLossKind::Minimax;
    else
        throw UsageError("train.gen_loss must be 'non_saturating' or 'minimax'");
    tc.snapshot_interval = cfg.resolve_int("train.snapshot_interval", 0);
    return tc;
}

MetricSolveConfig build_metric_config(KeyValueConfig& cfg) {
    MetricSolveConfig mc;
    mc.anti_collapse = cfg.resolve_double("analysis.a", mc.anti_collapse);
    mc.lr = cfg.resolve_double("analysis.lr", mc.lr);
    mc.steps = cfg.resolve_long("analysis.steps", mc.steps);
    const std::string norm = cfg.resolve("analysis.norm", "max");
    if (norm == "max")
        mc.norm = MetricNorm::Max;
    else if (norm == "frobenius")
        mc.norm = MetricNorm::Frobenius;
    else
        throw UsageError("analysis.norm must be 'max' or 'frobenius'");
    mc.seed = cfg.resolve_u64("analysis.seed", 0);
    return mc;
}

LieBasis subset_channels(const LieBasis& basis, const std::string& spec) {
    if (spec.empty()) return basis;
    LieBasis out = basis;
    out.mats.clear();
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int idx = 0;
        try {
            idx = std::stoi(tok);
        } catch (const std::exception&) {
            throw UsageError("analysis.channels: bad index '" + tok + "'");
        }
        if (idx < 0 || idx >= basis.channels)
            throw UsageError("analysis.channels: index " + tok + " out of range");
        out.mats.push_back(basis.mats[static_cast<std::size_t>(idx)]);
    }
    out.channels = static_cast<int>(out.mats.size());
    if (out.channels == 0) throw UsageError("analysis.channels selected no channels");
    return out;
}

json report_to_json(const SimilarityReport& rep) {
    return json{{"per_channel_cosine", rep.per_channel_cosine},
                {"subspace_score", rep.subspace_score},
                {"scale_aligned_mae", rep.scale_aligned_mae}};
}

} // namespace

void cmd_gen(KeyValueConfig& cfg) {
    const fs::path dir = out_dir(cfg);
    const Dataset data = build_dataset(cfg);
    const fs::path csv = dir / "data.csv";
    save_csv(csv, data, cfg.resolve_bool("task.header", false));
    cfg.set("task.rows", std::to_string(data.count()));
    write_manifest(dir, cfg, "gen", {csv});
    std::cout << "wrote " << csv.string() << " (" << data.count() << " samples, "
              << data.x_width() + data.y_width() << " columns)\n";
}

void cmd_discover(KeyValueConfig& cfg) {
    const fs::path dir = out_dir(cfg);
    const Dataset data = build_dataset(cfg);
    const std::uint64_t seed = cfg.resolve_u64("train.seed", 0);
    RandomStream master(seed);
    RandomStream basis_rng = master.derive(1);
    RandomStream disc_rng = master.derive(2);

    GeneratorModel model = build_generator_model(cfg, data, basis_rng);
    MlpParams disc = build_discriminator(cfg, data, disc_rng);
    const TrainingConfig tc =
        build_training(cfg, data, cfg.get("task.generator", ""), model.basis.channels);

    const fs::path basis_path = dir / "basis.json";
    const fs::path history_path = dir / "history.csv";

    if (cfg.resolve_int("train.epochs", 100) == 0) {
        // no training requested: the artifact is the initialization
        save_basis(basis_path, model.basis, model.dist);
        TrainHistory empty;
        empty.save_csv(history_path);
        write_manifest(dir, cfg, "discover", {basis_path, history_path});
        std::cout << "epochs = 0, wrote initial basis to " << basis_path.string() << "\n";
        return;
    }

    TrainResult result = train(data, model.basis, model.dist, model.rep, std::move(disc), tc);
    save_basis(basis_path, result.basis, result.dist);
    result.history.save_csv(history_path);
    write_manifest(dir, cfg, "discover", {basis_path, history_path});

    // unit-normalized channels for continuous runs, raw scale for grid runs
    const bool continuous = result.dist.kind == CoefficientDistribution::Kind::Gaussian;
    std::cout << "trained " << tc.epochs << " epochs; final d_loss "
              << result.history.records.back().d_loss << ", g_loss "
              << result.history.records.back().g_loss << "\n";
    const LieBasis shown = continuous ? result.basis.normalized() : result.basis;
    for (int c = 0; c < shown.channels; ++c) {
        std::cout << "channel " << c << (continuous ? " (unit scale)" : " (raw scale)") << ":\n"
                  << to_string(shown.mats[static_cast<std::size_t>(c)]) << "\n";
    }
}

void cmd_analyze(KeyValueConfig& cfg) {
    const fs::path dir = out_dir(cfg);
    const std::string basis_file = cfg.has("analysis.basis")
                                       ? cfg.require("analysis.basis")
                                       : (dir / "basis.json").string();
    LieBasis basis;
    CoefficientDistribution dist;
    try {
        std::tie(basis, dist) = load_basis(basis_file);
    } catch (const std::exception& e) {
        throw UsageError(std::string("analyze: cannot load basis: ") + e.what());
    }
    basis = subset_channels(basis, cfg.resolve("analysis.channels", ""));

    std::vector<fs::path> artifacts;
    if (basis.field == Field::Real) {
        const MetricSolveConfig mc = build_metric_config(cfg);
        const Matrix j = solve_metric(basis, mc);
        const fs::path metric_path = dir / "metric.json";
        save_matrix(metric_path, j);
        artifacts.push_back(metric_path);

        const fs::path residual_path = dir / "residuals.csv";
        std::ofstream res(residual_path);
        res.precision(17);
        res << "channel,residual\n";
        double total = 0.0;
        for (int c = 0; c < basis.channels; ++c) {
            const double r = invariance_residual(basis.mats[static_cast<std::size_t>(c)], j);
            res << c << "," << r << "\n";
            total += r * r;
        }
        res.close();
        artifacts.push_back(residual_path);
        std::cout << "metric J (unit Frobenius norm):\n" << to_string(j) << "\n"
                  << "total squared invariance residual: " << total << "\n";
    } else {
        std::cout << "complex basis: metric solve skipped (defined for real bases)\n";
    }

    if (cfg.has("analysis.truth")) {
        LieBasis truth;
        try {
            truth = load_basis(cfg.require("analysis.truth")).first;
        } catch (const std::exception& e) {
            throw UsageError(std::string("analyze: cannot load truth basis: ") + e.what());
        }
        const SimilarityReport rep = compare_bases(basis, truth);
        const fs::path report_path = dir / "report.json";
        std::ofstream out(report_path);
        out << report_to_json(rep).dump(2) << "\n";
        out.close();
        artifacts.push_back(report_path);
        std::cout << "subspace score: " << rep.subspace_score
                  << ", scale-aligned MAE: " << rep.scale_aligned_mae << "\n";
    }
    write_manifest(dir, cfg, "analyze", artifacts);
}

namespace {

// Ridge-regression linear predictor x -> y used by augment-eval.
struct LinearModel {
    Eigen::MatrixXd w; // m x (n+1), last column is the bias
};

LinearModel fit_linear(const Dataset& ds, double ridge) {
    const long n = ds.count();
    Eigen::MatrixXd x(n, ds.n + 1);
    Eigen::MatrixXd y(n, ds.m);
    for (long i = 0; i < n; ++i) {
        for (int j = 0; j < ds.n; ++j) x(i, j) = ds.xs[static_cast<std::size_t>(i) * ds.n + j];
        x(i, ds.n) = 1.0;
        for (int j = 0; j < ds.m; ++j) y(i, j) = ds.ys[static_cast<std::size_t>(i) * ds.m + j];
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += ridge;
    return {gram.ldlt().solve(x.transpose() * y).transpose()};
}

double test_mse(const LinearModel& model, const Dataset& ds) {
    double total = 0.0;
    for (long i = 0; i < ds.count(); ++i) {
        Eigen::VectorXd x(ds.n + 1);
        for (int j = 0; j < ds.n; ++j) x(j) = ds.xs[static_cast<std::size_t>(i) * ds.n + j];
        x(ds.n) = 1.0;
        const Eigen::VectorXd pred = model.w * x;
        for (int j = 0; j < ds.m; ++j) {
            const double d = pred(j) - ds.ys[static_cast<std::size_t>(i) * ds.m + j];
            total += d * d;
        }
    }
    return total / (static_cast<double>(ds.count()) * ds.m);
}

} // namespace

void cmd_augment_eval(KeyValueConfig& cfg) {
    const fs::path dir = out_dir(cfg);
    const Dataset data = build_dataset(cfg);
    if (data.task != TaskKind::Trajectory || data.field != Field::Real)
        throw UsageError("augment-eval expects a real trajectory task");

    LieBasis basis;
    CoefficientDistribution dist;
    try {
        std::tie(basis, dist) = load_basis(cfg.require("aug.basis"));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("augment-eval: cannot load basis: ") + e.what());
    }

    const double frac = cfg.resolve_double("aug.split", 0.8);
    const int copies = cfg.resolve_int("aug.copies", 2);
    const double ridge = cfg.resolve_double("aug.ridge", 1e-8);
    const std::uint64_t seed = cfg.resolve_u64("aug.seed", 0);

    if (data.n % basis.dim != 0 || data.m % basis.dim != 0)
        throw UsageError("augment-eval: basis dim must divide trajectory dims");
    const RepresentationSpec rep =
        RepresentationSpec::equivariant(data.n / basis.dim, data.m / basis.dim);

    auto [train_set, test_set] = angular_split(data, frac);
    RandomStream rng(seed);
    const Dataset augmented = augment_dataset(train_set, basis, dist, rep, copies, rng);

    const double mse_plain = test_mse(fit_linear(train_set, ridge), test_set);
    const double mse_aug = test_mse(fit_linear(augmented, ridge), test_set);

    const fs::path out_path = dir / "augment_eval.txt";
    {
        std::ofstream out(out_path);
        out.precision(17);
        out << "mse_plain = " << mse_plain << "\n"
            << "mse_augmented = " << mse_aug << "\n";
    }
    write_manifest(dir, cfg, "augment-eval", {out_path});
    std::cout.precision(6);
    std::cout << "test MSE without augmentation: " << mse_plain << "\n"
              << "test MSE with augmentation:    " << mse_aug << "\n";
}

} // namespace liegan
