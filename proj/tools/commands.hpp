#pragma once

// Command implementations behind the `weakoam` executable. Exit codes:
// 0 all checks passed, 1 a numerical check failed, 2 configuration or guard
// error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weakoam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

struct SweepAxis {
    std::string name;  // delta | epsilon | l
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    std::string spacing = "linear";  // linear | geometric
};

struct RunConfig {
    std::string command = "example";  // example | verify | sweep | converge | field-dump
    std::optional<std::string> observable_path;
    int l = 1;
    double sigma = 1.0;
    double delta = 0.01;
    double epsilon = 0.1;
    int grid_n = 256;
    double grid_extent = 8.0;
    std::string output_path = "weakoam";
    std::uint64_t seed = 1;
    SweepAxis axis;
};

/// Values of a sweep axis (BadAxis on unknown names, count < 2, or
/// non-positive geometric bounds).
std::vector<double> axis_values(const SweepAxis &axis);

int cmd_example(const RunConfig &config, std::ostream &out);
int cmd_verify(const RunConfig &config, std::ostream &out);
int cmd_sweep(const RunConfig &config, std::ostream &out);
int cmd_converge(const RunConfig &config, std::ostream &out);
int cmd_field_dump(const RunConfig &config, std::ostream &out);

/// Parses argv (flags as documented in the README), dispatches, and maps
/// library errors to exit code 2.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace weakoam::cli
