#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "weakoam/error.hpp"
#include "weakoam/extraction.hpp"
#include "weakoam/worked_example.hpp"

using namespace weakoam;

namespace {

const GridSpec kGrid = GridSpec::make(256, 8.0);

struct RealProblem {
    Observable a;
    SystemState i, f;
};

RealProblem real_problem(double eps) {
    Matrix m(2, 2);
    m << 1.3, 0.4, 0.4, -0.2;
    Vector f(2);
    f << std::sin(eps), std::cos(eps);
    return {Observable::make(m), SystemState::basis(2, 0), SystemState::normalized(f)};
}

}  // namespace

TEST(ExtractIm, WorkedExample) {
    for (double eps : {0.1, 0.2}) {
        for (int l : {-1, 1}) {
            const ExtractionResult r =
                extract_im_second_moment(worked_example::observable(), worked_example::pre_state(),
                                         worked_example::post_state(eps), PointerSpec::with_winding(l), 0.01, kGrid);
            EXPECT_NEAR(r.reference, -1.2 / std::tan(eps), 1e-12);
            EXPECT_LE(r.relative_error, 0.05) << eps << ' ' << l;
            EXPECT_EQ(r.inputs.l, l);
            EXPECT_NEAR(r.inputs.epsilon, eps, 1e-12);
        }
    }
}

TEST(ExtractIm, NullOnRealProblem) {
    const RealProblem p = real_problem(0.1);
    const ExtractionResult r = extract_im_second_moment(p.a, p.i, p.f, PointerSpec::with_winding(1), 0.01, kGrid);
    EXPECT_LE(std::abs(r.estimated), 1e-6);
}

TEST(ExtractIm, Guards) {
    EXPECT_ERROR_CODE(extract_im_second_moment(worked_example::observable(), worked_example::pre_state(),
                                               worked_example::post_state(0.1), PointerSpec::with_winding(2), 0.01,
                                               kGrid),
                      BadInput);
    EXPECT_ERROR_CODE(extract_im_second_moment(worked_example::observable(), worked_example::pre_state(),
                                               worked_example::post_state(0.1), PointerSpec::with_winding(1), 0.0,
                                               kGrid),
                      BadInput);
    EXPECT_ERROR_CODE(extract_im_second_moment(worked_example::observable(), worked_example::pre_state(),
                                               worked_example::post_state(0.1), PointerSpec::with_winding(1), 10.0,
                                               kGrid),
                      AmplificationOutOfRange);
}

TEST(Calibration, KappaAndMatching) {
    const Calibration c = Calibration::run(PointerSpec::with_winding(1), 0.01, kGrid);
    EXPECT_NEAR(c.kappa() / (0.01 * 0.01), 0.125, 0.01);
    EXPECT_NEAR(c.baseline(), -0.5, 1e-8);
    EXPECT_TRUE(c.matches(PointerSpec::with_winding(1), 0.01, kGrid));
    EXPECT_FALSE(c.matches(PointerSpec::with_winding(1), 0.02, kGrid));
    EXPECT_FALSE(c.matches(PointerSpec::with_winding(-1), 0.01, kGrid));
}

TEST(ExtractRe, WorkedExample) {
    const PointerSpec p = PointerSpec::with_winding(1);
    const Calibration c = Calibration::run(p, 0.01, kGrid);
    const ExtractionResult r = extract_re_second_moment(worked_example::observable(), worked_example::pre_state(),
                                                        worked_example::post_state(0.1), p, 0.01, kGrid, c);
    EXPECT_NEAR(r.reference, 3.4, 1e-12);
    EXPECT_LE(r.relative_error, 0.05);
}

TEST(ExtractRe, NeedsMatchingCalibration) {
    const PointerSpec p = PointerSpec::with_winding(1);
    EXPECT_ERROR_CODE(extract_re_second_moment(worked_example::observable(), worked_example::pre_state(),
                                               worked_example::post_state(0.1), p, 0.01, kGrid, std::nullopt),
                      CalibrationMissing);
    const Calibration other = Calibration::run(p, 0.02, kGrid);
    EXPECT_ERROR_CODE(extract_re_second_moment(worked_example::observable(), worked_example::pre_state(),
                                               worked_example::post_state(0.1), p, 0.01, kGrid, other),
                      CalibrationMissing);
}

TEST(AssembleWeakValue, WorkedExample) {
    for (double eps : {0.1, 0.3}) {
        const cplx got = assemble_weak_value(worked_example::observable(), worked_example::pre_state(),
                                             worked_example::post_state(eps), 0.005, kGrid);
        const cplx want = worked_example::weak_value(eps);
        EXPECT_LE(std::abs(got - want) / std::abs(want), 0.01) << eps;
    }
}
