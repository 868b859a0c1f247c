#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "test_support.hpp"
#include "weakoam/error.hpp"
#include "weakoam/io.hpp"
#include "weakoam/pointer.hpp"

using namespace weakoam;
using io::json;

namespace {

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "weakoam_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Io, MatrixRoundTrip) {
    Matrix m(2, 2);
    m << 1.8, cplx(0, 0.4), cplx(0, -0.4), 1.2;
    const Matrix back = io::matrix_from_json(io::to_json(m));
    EXPECT_EQ(back, m);
    const Matrix real_only = io::matrix_from_json(json::parse(R"({"re": [[1, 2], [2, 3]]})"));
    EXPECT_EQ(real_only(0, 1), cplx(2.0, 0.0));
}

TEST(Io, MalformedMatrix) {
    EXPECT_ERROR_CODE(io::matrix_from_json(json::parse(R"({"im": [[1]]})")), BadInput);
    EXPECT_ERROR_CODE(io::matrix_from_json(json::parse(R"({"re": [[1, 2], [3]]})")), BadShape);
    EXPECT_ERROR_CODE(io::matrix_from_json(json::parse(R"({"re": [[1, "a"], [2, 3]]})")), BadInput);
}

TEST(Io, FormatDoubleRoundTrips) {
    for (double v : {0.1, -1.0 / 3.0, 5.9752114170893164e-4, 1e300}) {
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
}

TEST(Io, FieldRoundTrip) {
    const GridField f = sample(PointerSpec::with_winding(1), GridSpec::make(64, 7.0));
    const auto path = scratch("field.csv");
    io::write_field(path, f);
    const GridField back = io::read_field(path);
    EXPECT_EQ(back.grid(), f.grid());
    for (std::size_t q = 0; q < f.values().size(); ++q) EXPECT_EQ(back.values()[q], f.values()[q]);
}

TEST(Io, ReadMissing) {
    EXPECT_ERROR_CODE(io::read_json(scratch("does_not_exist.json")), BadInput);
}

TEST(Io, ConvergenceReportDegenerateSlopeIsNull) {
    ConvergenceReport r;
    r.degenerate = true;
    r.slope = std::nan("");
    EXPECT_TRUE(io::to_json(r)["slope"].is_null());
}
