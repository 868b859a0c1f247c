#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "weakoam/io.hpp"

using namespace weakoam;

namespace {

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "weakoam_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "weakoam");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, ExampleSucceedsAndWritesReports) {
    const auto stem = (scratch_dir() / "example").string();
    const Outcome o = run({"example", "--out", stem});
    EXPECT_EQ(o.code, cli::kExitOk) << o.out << o.err;
    const auto doc = io::read_json(stem + ".json");
    EXPECT_TRUE(doc["pass"].get<bool>());
    EXPECT_NE(slurp(stem + ".csv").find("<XY> published"), std::string::npos);
}

TEST(Cli, ExampleIsDeterministic) {
    const auto a = (scratch_dir() / "det_a").string(), b = (scratch_dir() / "det_b").string();
    ASSERT_EQ(run({"example", "--out", a}).code, 0);
    ASSERT_EQ(run({"example", "--out", b}).code, 0);
    EXPECT_EQ(slurp(a + ".csv"), slurp(b + ".csv"));
}

TEST(Cli, HugeDeltaIsConfigError) {
    const Outcome o = run({"example", "--delta", "10", "--out", (scratch_dir() / "huge").string()});
    EXPECT_EQ(o.code, cli::kExitConfigError);
    EXPECT_NE(o.err.find("ExtentTooSmall"), std::string::npos);
}

TEST(Cli, VerifyPassesAndCoarseGridFails) {
    EXPECT_EQ(run({"verify", "--out", (scratch_dir() / "verify").string()}).code, cli::kExitOk);
    const Outcome coarse = run({"verify", "--grid-n", "32", "--out", (scratch_dir() / "verify32").string()});
    EXPECT_EQ(coarse.code, cli::kExitCheckFailed);
    EXPECT_NE(coarse.out.find("pointer.normalization"), std::string::npos);
}

TEST(Cli, SweepWritesFit) {
    const auto stem = (scratch_dir() / "sweep").string();
    const Outcome o = run({"sweep", "--axis", "delta", "--start", "0.005", "--stop", "0.04", "--count", "4",
                           "--spacing", "geometric", "--out", stem});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto fit = io::read_json(stem + ".fit.json");
    EXPECT_NEAR(fit["slope_abs_xy"].get<double>(), 2.0, 0.05);
    EXPECT_GE(fit["residual"]["slope"].get<double>(), 2.7);
    EXPECT_NE(slurp(stem + ".csv").find("# slope_residual_xy="), std::string::npos);
}

TEST(Cli, SweepOverWinding) {
    const auto stem = (scratch_dir() / "sweep_l").string();
    ASSERT_EQ(run({"sweep", "--axis", "l", "--start", "-2", "--stop", "2", "--count", "5", "--out", stem}).code, 0);
    EXPECT_NE(slurp(stem + ".csv").find("nan"), std::string::npos);  // |l| = 2 has no closed form
}

TEST(Cli, BadAxisAndUnknownCommand) {
    EXPECT_EQ(run({"sweep", "--axis", "sigma", "--out", (scratch_dir() / "bad").string()}).code,
              cli::kExitConfigError);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitConfigError);
    EXPECT_EQ(run({"example", "--sigma", "-1"}).code, cli::kExitConfigError);
}

TEST(Cli, ObservableFile) {
    const auto path = scratch_dir() / "obs.json";
    io::write_json(path, io::json::parse(R"({"observable": {"re": [[1, 0], [0, 2]]},
        "pre": {"re": [0.7071067811865476, 0.7071067811865476]},
        "post": {"re": [0.6, -0.8]}})"));
    const Outcome o = run({"example", "--observable", path.string(), "--out", (scratch_dir() / "obs").string()});
    EXPECT_EQ(o.code, 0) << o.out << o.err;
    io::write_json(path, io::json::parse(R"({"re": [[1, 0.5], [0.4, 2]]})"));
    EXPECT_EQ(run({"example", "--observable", path.string()}).code, cli::kExitConfigError);
}

TEST(Cli, ConvergeAndFieldDump) {
    EXPECT_EQ(run({"converge", "--grid-n", "128", "--out", (scratch_dir() / "conv").string()}).code, 0);
    const auto stem = (scratch_dir() / "field").string();
    EXPECT_EQ(run({"field-dump", "--grid-n", "64", "--out", stem}).code, 0);
    const auto moments = io::read_json(stem + ".moments.json");
    EXPECT_TRUE(moments.contains("xy"));
}

TEST(Cli, EnvironmentGridDefault) {
    setenv("WP_DEFAULT_GRID_N", "32", 1);
    const Outcome o = run({"example", "--out", (scratch_dir() / "env").string()});
    unsetenv("WP_DEFAULT_GRID_N");
    EXPECT_EQ(o.code, cli::kExitConfigError);
    EXPECT_NE(o.err.find("BadGrid"), std::string::npos);
}
