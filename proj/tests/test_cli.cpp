#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "liegan/commands.hpp"
#include "liegan/datasets.hpp"
#include "liegan/groups.hpp"
#include "liegan/serialize.hpp"

#include <nlohmann/json.hpp>

using namespace liegan;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config file parsing, overrides and serialization") {
    const fs::path dir = fresh_dir("liegan_cli_cfg");
    {
        std::ofstream out(dir / "run.cfg");
        out << "# comment line\n"
            << "task.generator = discrete_rotation\n"
            << "task.k = 7   # trailing comment\n"
            << "train.lambda = 0.25\n";
    }
    KeyValueConfig cfg = KeyValueConfig::from_file(dir / "run.cfg");
    CHECK(cfg.require("task.generator") == "discrete_rotation");
    CHECK(cfg.require_long("task.k") == 7);
    CHECK(cfg.require_double("train.lambda") == 0.25);

    cfg.apply_override("train.lambda=0.5");
    CHECK(cfg.require_double("train.lambda") == 0.5);
    CHECK_THROWS_AS(cfg.apply_override("oops"), UsageError);
    CHECK_THROWS_AS((void)cfg.require("missing.key"), UsageError);
    CHECK_THROWS_AS((void)cfg.require_double("task.generator"), UsageError);

    // resolution records defaults so manifests carry them
    CHECK(cfg.resolve_int("train.epochs", 100) == 100);
    const std::string text = cfg.serialize();
    CHECK(text.find("train.epochs = 100") != std::string::npos);

    {
        std::ofstream out(dir / "bad.cfg");
        out << "key_without_equals\n";
    }
    CHECK_THROWS_AS((void)KeyValueConfig::from_file(dir / "bad.cfg"), UsageError);
}

TEST_CASE("gen command writes csv and a reproducible manifest") {
    const fs::path dir = fresh_dir("liegan_cli_gen");
    KeyValueConfig cfg;
    cfg.set("task.generator", "discrete_rotation");
    cfg.set("task.k", "7");
    cfg.set("task.count", "500");
    cfg.set("task.seed", "1");
    cfg.set("out.dir", dir.string());
    cmd_gen(cfg);

    CsvSchema schema;
    schema.n = 3;
    schema.m = 1;
    const Dataset ds = load_csv(dir / "data.csv", schema);
    CHECK(ds.count() == 500);

    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("command = gen") != std::string::npos);
    CHECK(manifest.find("artifact.data.csv = fnv1a:") != std::string::npos);
    CHECK(manifest.find("task.seed = 1") != std::string::npos);

    // identical config, identical checksum
    const fs::path dir2 = fresh_dir("liegan_cli_gen2");
    KeyValueConfig cfg2 = cfg;
    cfg2.set("out.dir", dir2.string());
    cmd_gen(cfg2);
    auto checksum_line = [](const std::string& m) {
        const auto at = m.find("artifact.data.csv");
        return m.substr(at, m.find('\n', at) - at);
    };
    CHECK(checksum_line(manifest) == checksum_line(slurp(dir2 / "manifest.txt")));
}

TEST_CASE("gen command: two-body column count matches the trajectory layout") {
    const fs::path dir = fresh_dir("liegan_cli_gen_tb");
    KeyValueConfig cfg;
    cfg.set("task.generator", "two_body");
    cfg.set("task.count", "50");
    cfg.set("task.seed", "3");
    cfg.set("out.dir", dir.string());
    cmd_gen(cfg);
    std::ifstream in(dir / "data.csv");
    std::string line;
    std::getline(in, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 79); // 80 columns
}

TEST_CASE("gen command rejects unknown generators") {
    KeyValueConfig cfg;
    cfg.set("task.generator", "perpetual_motion");
    CHECK_THROWS_AS(cmd_gen(cfg), UsageError);
}

TEST_CASE("discover with zero epochs emits the initialization") {
    const fs::path dir = fresh_dir("liegan_cli_disc0");
    KeyValueConfig cfg;
    cfg.set("task.generator", "discrete_rotation");
    cfg.set("task.k", "5");
    cfg.set("task.count", "64");
    cfg.set("task.seed", "2");
    cfg.set("train.epochs", "0");
    cfg.set("train.seed", "2");
    cfg.set("gen.dist", "grid");
    cfg.set("out.dir", dir.string());
    cmd_discover(cfg);
    const auto [basis, dist] = load_basis(dir / "basis.json");
    CHECK(basis.channels == 1);
    CHECK(basis.dim == 3);
    CHECK(dist.kind == CoefficientDistribution::Kind::UniformIntGrid);

    // the same seed reproduces the same initialization
    const fs::path dir2 = fresh_dir("liegan_cli_disc0b");
    KeyValueConfig cfg2 = cfg;
    cfg2.set("out.dir", dir2.string());
    cmd_discover(cfg2);
    const auto [basis2, dist2] = load_basis(dir2 / "basis.json");
    CHECK(max_abs_diff(basis.mats[0], basis2.mats[0]) == 0.0);
}

TEST_CASE("discover: identical seeds give byte-identical history files") {
    auto run = [&](const char* name) {
        const fs::path dir = fresh_dir(name);
        KeyValueConfig cfg;
        cfg.set("task.generator", "discrete_rotation");
        cfg.set("task.k", "5");
        cfg.set("task.count", "128");
        cfg.set("task.seed", "4");
        cfg.set("train.seed", "4");
        cfg.set("train.epochs", "2");
        cfg.set("train.batch", "32");
        cfg.set("disc.hidden", "16");
        cfg.set("gen.dist", "grid");
        cfg.set("out.dir", dir.string());
        cmd_discover(cfg);
        return slurp(dir / "history.csv");
    };
    const std::string a = run("liegan_cli_rep_a");
    const std::string b = run("liegan_cli_rep_b");
    CHECK(a == b);
    CHECK(a.find("epoch,d_loss,g_loss,reg,chreg") == 0);
}

TEST_CASE("analyze: clean fixture matches the analytic metric and self-comparison is perfect") {
    const fs::path dir = fresh_dir("liegan_cli_analyze");
    save_basis(dir / "so13.json", groups::so13_basis(), CoefficientDistribution::gaussian(6, 1.0));

    KeyValueConfig cfg;
    cfg.set("analysis.basis", (dir / "so13.json").string());
    cfg.set("analysis.truth", (dir / "so13.json").string());
    cfg.set("out.dir", dir.string());
    cmd_analyze(cfg);

    const Matrix j = load_matrix(dir / "metric.json");
    CHECK(std::abs(cosine_sim(j, groups::minkowski_metric())) >= 0.999);

    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report.at("subspace_score").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.at("scale_aligned_mae").get<double>() == doctest::Approx(0.0));

    const std::string residuals = slurp(dir / "residuals.csv");
    CHECK(residuals.find("channel,residual") == 0);
    CHECK(std::count(residuals.begin(), residuals.end(), '\n') == 7); // header + 6 channels
}

TEST_CASE("analyze: channel subsets and empty selections") {
    const fs::path dir = fresh_dir("liegan_cli_subset");
    save_basis(dir / "so3.json", groups::so3_basis(), CoefficientDistribution::gaussian(3, 1.0));
    KeyValueConfig cfg;
    cfg.set("analysis.basis", (dir / "so3.json").string());
    cfg.set("analysis.channels", "0,2");
    cfg.set("out.dir", dir.string());
    cmd_analyze(cfg);
    const std::string residuals = slurp(dir / "residuals.csv");
    CHECK(std::count(residuals.begin(), residuals.end(), '\n') == 3);

    KeyValueConfig bad = cfg;
    bad.set("analysis.channels", "7");
    CHECK_THROWS_AS(cmd_analyze(bad), UsageError);

    KeyValueConfig missing;
    missing.set("analysis.basis", (dir / "nope.json").string());
    missing.set("out.dir", dir.string());
    CHECK_THROWS_AS(cmd_analyze(missing), UsageError);
}

TEST_CASE("augment-eval lowers the split-generalization error with a good basis") {
    const fs::path dir = fresh_dir("liegan_cli_aug");
    // exact rotation generator over the 2x2 blocks
    LieBasis rot;
    rot.channels = 1;
    rot.dim = 8;
    rot.structure = BasisStructure::BlockDiagRepeat;
    rot.block_size = 2;
    Matrix l(8, 8);
    for (int b = 0; b < 4; ++b) {
        l.re(2 * b, 2 * b + 1) = -1.0;
        l.re(2 * b + 1, 2 * b) = 1.0;
    }
    rot.mats = {l};
    save_basis(dir / "rot.json", rot, CoefficientDistribution::gaussian(1, 1.0));

    KeyValueConfig cfg;
    cfg.set("task.generator", "two_body");
    cfg.set("task.count", "400");
    cfg.set("task.seed", "5");
    cfg.set("aug.basis", (dir / "rot.json").string());
    cfg.set("aug.seed", "5");
    cfg.set("out.dir", dir.string());
    cmd_augment_eval(cfg);

    const std::string result = slurp(dir / "augment_eval.txt");
    double plain = 0.0, aug = 0.0;
    std::sscanf(result.c_str(), "mse_plain = %lf\nmse_augmented = %lf", &plain, &aug);
    CHECK(aug < plain);
}

#ifdef LIEGAN_CLI_PATH
TEST_CASE("binary: exit codes for success, usage errors and numeric failures") {
    const fs::path dir = fresh_dir("liegan_cli_bin");
    const std::string bin = LIEGAN_CLI_PATH;
    auto run = [&](const std::string& args) {
        const std::string cmd = bin + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run("gen discrete_rotation --k 6 --count 100 --seed 1 --out " + (dir / "ok").string()) == 0);
    CHECK(run("gen perpetual_motion --out " + (dir / "bad").string()) == 2);
    CHECK(run("gen") == 2); // missing generator name
    CHECK(run("analyze --basis " + (dir / "missing.json").string()) == 2);
    // sigma far beyond overflow makes training diverge: numeric failure -> 3
    CHECK(run("discover --set task.generator=discrete_rotation task.count=64 train.epochs=1 "
              "disc.hidden=16 gen.sigma=1e308 --out " +
              (dir / "diverge").string()) == 3);
}
#endif
