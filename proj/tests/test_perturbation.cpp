#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "weakoam/error.hpp"
#include "weakoam/evolution.hpp"
#include "weakoam/perturbation.hpp"
#include "weakoam/worked_example.hpp"

using namespace weakoam;
using namespace testing_support;

namespace {

const GridSpec kGrid = GridSpec::make(256, 8.0);

Observable diag(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return Observable::make(m);
}

}  // namespace

TEST(ClosedForm, WorkedExampleValue) {
    const double eps = 0.1, delta = 0.01;
    for (int l : {-1, 0, 1}) {
        const double got = closed_form_xy(worked_example::observable(), std::nullopt, worked_example::pre_state(),
                                          worked_example::post_state(eps), l, delta, 0.0);
        EXPECT_NEAR(got, 0.6 * l * delta * delta / std::tan(eps), 1e-15) << l;
        const double pub = published_xy(worked_example::observable(), std::nullopt, worked_example::pre_state(),
                                        worked_example::post_state(eps), l, delta, 0.0);
        EXPECT_NEAR(pub, -0.6 * l * delta * delta / std::tan(eps), 1e-15) << l;
    }
}

TEST(ClosedForm, HandAssembledJoint) {
    // (dA dB / 2)[Re<AB>_w + Re(<A>_w* <B>_w)] - (l/2)[dA^2 Im<A^2>_w - dB^2 Im<B^2>_w]
    std::mt19937_64 rng(2);
    const oracle::Mat a{{1.0, 0.0}, {0.0, 2.0}}, b{{3.0, 0.0}, {0.0, -1.0}};
    for (int trial = 0; trial < 10; ++trial) {
        const auto i = oracle::random_unit(rng, 2), f = oracle::random_unit(rng, 2);
        const double da = 0.01, db = 0.007;
        const cplx aw = oracle::weak_moment(a, 1, i, f), bw = oracle::weak_moment(b, 1, i, f);
        const cplx a2 = oracle::weak_moment(a, 2, i, f), b2 = oracle::weak_moment(b, 2, i, f);
        const cplx ab = oracle::joint(a, b, i, f);
        for (int l : {-1, 0, 1}) {
            const double want = 0.5 * da * db * (ab.real() + (std::conj(aw) * bw).real()) -
                                0.5 * l * (da * da * a2.imag() - db * db * b2.imag());
            const double got = closed_form_xy(Observable::make(to_eigen(a)), Observable::make(to_eigen(b)),
                                              SystemState::normalized(to_eigen(i)), SystemState::normalized(to_eigen(f)),
                                              l, da, db);
            EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST(ClosedForm, OutOfScopeWinding) {
    EXPECT_ERROR_CODE(closed_form_xy(worked_example::observable(), std::nullopt, worked_example::pre_state(),
                                     worked_example::post_state(0.1), 2, 0.01, 0.0),
                      BadInput);
}

TEST(ClosedForm, GaussianShift) {
    EXPECT_NEAR(closed_form_x_gaussian(worked_example::observable(), worked_example::pre_state(),
                                       worked_example::post_state(0.1), 0.01),
                0.018, 1e-15);
}

TEST(Heisenberg, MatchesClosedFormWorkedExample) {
    for (int l : {-1, 0, 1}) {
        const Prediction p = heisenberg_expectation({worked_example::post_state(0.1), {PointerOp::X, PointerOp::Y}},
                                                    worked_example::pre_state(),
                                                    CouplingConfig::make(worked_example::observable(), 0.01),
                                                    PointerSpec::with_winding(l), kGrid);
        const double closed = closed_form_xy(worked_example::observable(), std::nullopt, worked_example::pre_state(),
                                             worked_example::post_state(0.1), l, 0.01, 0.0);
        if (l == 0) {
            EXPECT_LE(std::abs(p.conditioned().real()), 1e-12);
        } else {
            EXPECT_LE(std::abs(p.conditioned().real() - closed) / std::abs(closed), 1e-8);
        }
        EXPECT_EQ(p.order_used, 2);
        EXPECT_EQ((p.terms.zeroth + p.terms.first) + p.terms.second, p.value);
    }
}

TEST(Heisenberg, MatchesClosedFormJointProperty) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.1, 0.5);
    Vector iv(2);
    iv << M_SQRT1_2, M_SQRT1_2;
    for (int trial = 0; trial < 3; ++trial) {
        const double eps = u(rng), da = 0.01 * u(rng), db = 0.01 * u(rng);
        Vector fv(2);
        fv << std::cos(M_PI / 4 + eps), -std::sin(M_PI / 4 + eps);
        const SystemState i = SystemState::make(iv), f = SystemState::make(fv);
        for (int l : {-1, 0, 1}) {
            const Prediction p = heisenberg_expectation({f, {PointerOp::X, PointerOp::Y}}, i,
                                                        CouplingConfig::make(diag(1, 2), da, diag(3, -1), db),
                                                        PointerSpec::with_winding(l), kGrid);
            const double closed = closed_form_xy(diag(1, 2), diag(3, -1), i, f, l, da, db);
            EXPECT_LE(std::abs(p.conditioned().real() - closed) / std::abs(closed), 1e-8);
        }
    }
}

TEST(Heisenberg, OrderTruncation) {
    const auto run = [](int order) {
        return heisenberg_expectation({worked_example::post_state(0.2), {PointerOp::X}}, worked_example::pre_state(),
                                      CouplingConfig::make(worked_example::observable(), 0.01),
                                      PointerSpec::gaussian(), kGrid, order);
    };
    const Prediction p0 = run(0), p1 = run(1);
    EXPECT_EQ(p0.value, p0.terms.zeroth);
    EXPECT_LE(std::abs(p0.value), 1e-14);  // <X> of the undisplaced pointer
    EXPECT_EQ(p1.value, p1.terms.zeroth + p1.terms.first);
    // first order <X> = Delta Re<A>_w
    EXPECT_NEAR(p1.conditioned().real(), 0.01 * 1.8, 1e-10);
    EXPECT_ERROR_CODE(run(3), BadInput);
}

TEST(Heisenberg, NoPostselectionIsUnconditioned) {
    const Prediction p = heisenberg_expectation({std::nullopt, {PointerOp::X}}, worked_example::pre_state(),
                                                CouplingConfig::make(worked_example::observable(), 0.01),
                                                PointerSpec::gaussian(), kGrid);
    EXPECT_NEAR(p.p_post0, 1.0, 1e-15);
    EXPECT_NEAR(p.value.real(), 0.01 * 1.8, 1e-10);
}

TEST(Heisenberg, ExactEvolutionAgreesToSecondOrder) {
    const double eps = 0.1;
    for (double delta : {0.02, 0.01}) {
        const MomentReport r = simulate(worked_example::pre_state(), worked_example::post_state(eps),
                                        CouplingConfig::make(worked_example::observable(), delta),
                                        PointerSpec::with_winding(1), kGrid);
        const double closed = closed_form_xy(worked_example::observable(), std::nullopt, worked_example::pre_state(),
                                             worked_example::post_state(eps), 1, delta, 0.0);
        EXPECT_LE(std::abs(r.xy - closed) / std::abs(closed), 0.05);
    }
}

TEST(PowerLaw, RecoversExponent) {
    const std::vector<double> x{0.01, 0.02, 0.04, 0.08};
    std::vector<double> y;
    for (double v : x) y.push_back(-3.0 * std::pow(v, 2.5));
    const PowerLawFit fit = fit_power_law(x, y);
    EXPECT_NEAR(fit.slope, 2.5, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
    EXPECT_ERROR_CODE(fit_power_law(std::vector<double>{1.0}, std::vector<double>{1.0}), BadInput);
    EXPECT_ERROR_CODE(fit_power_law(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), BadInput);
}

TEST(Convergence, ReportAndDegenerate) {
    std::vector<SeriesPoint> s;
    for (double d : {0.04, 0.02, 0.01}) s.push_back({d, d * d + 2.0 * std::pow(d, 4), d * d});
    const ConvergenceReport r = convergence_report(s);
    EXPECT_FALSE(r.degenerate);
    EXPECT_NEAR(r.slope, 4.0, 1e-10);
    ASSERT_EQ(r.residuals.size(), 3u);
    for (auto &p : s) p.exact = p.closed;
    const ConvergenceReport d = convergence_report(s);
    EXPECT_TRUE(d.degenerate);
    EXPECT_TRUE(std::isnan(d.slope));
    EXPECT_ERROR_CODE(convergence_report(std::span<const SeriesPoint>(s.data(), 2)), BadInput);
}
