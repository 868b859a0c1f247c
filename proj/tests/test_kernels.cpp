#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "weakoam/kernels.hpp"
#include "weakoam/pointer.hpp"

using namespace weakoam;
namespace kp = kernels::parallel;
namespace kr = kernels::reference;

namespace {

std::vector<cplx> random_field(std::mt19937_64 &rng, std::size_t size) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(size);
    for (auto &x : v) x = cplx(g(rng), g(rng));
    return v;
}

double max_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST(Kernels, SampleAgrees) {
    const GridSpec g = GridSpec::make(128, 8.0);
    for (int l : {-2, 0, 1}) {
        std::vector<cplx> a(g.size()), b(g.size());
        kp::sample_mode(PointerSpec::with_winding(l), g, 0.1, -0.05, a);
        kr::sample_mode(PointerSpec::with_winding(l), g, 0.1, -0.05, b);
        EXPECT_EQ(max_diff(a, b), 0.0);
    }
}

TEST(Kernels, MomentAgrees) {
    std::mt19937_64 rng(3);
    const GridSpec g = GridSpec::make(64, 5.0);
    const auto u = random_field(rng, g.size()), v = random_field(rng, g.size());
    for (auto [px, py] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
        const cplx a = kp::moment(g, u, v, px, py), b = kr::moment(g, u, v, px, py);
        EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)));
    }
}

TEST(Kernels, MomentIsDeterministic) {
    std::mt19937_64 rng(4);
    const GridSpec g = GridSpec::make(128, 5.0);
    const auto u = random_field(rng, g.size());
    EXPECT_EQ(kp::moment(g, u, u, 1, 1), kp::moment(g, u, u, 1, 1));
}

TEST(Kernels, MomentumAgreesWithDenseReference) {
    std::mt19937_64 rng(9);
    const GridSpec g = GridSpec::make(64, 6.0);
    const auto u = random_field(rng, g.size());
    for (auto axis : {kernels::Axis::X, kernels::Axis::Y}) {
        std::vector<cplx> a(g.size()), b(g.size());
        kp::momentum(g, axis, u, a);
        kr::momentum(g, axis, u, b);
        EXPECT_LE(max_diff(a, b), 1e-9);
    }
}

TEST(Kernels, MomentumOfGaussianIsAnalytic) {
    // -i d/dx exp(-r^2/4) = (i x / 2) exp(-r^2/4)
    const GridSpec g = GridSpec::make(128, 10.0);
    std::vector<cplx> f(g.size()), want(g.size()), got(g.size());
    for (int j = 0; j < g.n(); ++j)
        for (int k = 0; k < g.n(); ++k) {
            const double x = g.coordinate(j), y = g.coordinate(k);
            const double e = std::exp(-(x * x + y * y) / 4.0);
            f[j * g.n() + k] = e;
            want[j * g.n() + k] = cplx(0, 0.5 * x) * e;
        }
    kp::momentum(g, kernels::Axis::X, f, got);
    EXPECT_LE(max_diff(got, want), 1e-10);
}

TEST(Kernels, AxpyScaleCoordinateAgree) {
    std::mt19937_64 rng(12);
    const GridSpec g = GridSpec::make(64, 3.0);
    const auto x = random_field(rng, g.size());
    auto y1 = random_field(rng, g.size());
    auto y2 = y1;
    kp::axpy(cplx(0.3, -1.0), x, y1);
    kr::axpy(cplx(0.3, -1.0), x, y2);
    EXPECT_EQ(max_diff(y1, y2), 0.0);
    kp::scale(cplx(2.0, 1.0), y1);
    kr::scale(cplx(2.0, 1.0), y2);
    EXPECT_EQ(max_diff(y1, y2), 0.0);
    std::vector<cplx> c1(g.size()), c2(g.size());
    kp::coordinate(g, kernels::Axis::Y, x, c1);
    kr::coordinate(g, kernels::Axis::Y, x, c2);
    EXPECT_EQ(max_diff(c1, c2), 0.0);
}

TEST(Kernels, Wavenumbers) {
    const auto k = kernels::wavenumbers(8, 0.5);
    ASSERT_EQ(k.size(), 8u);
    EXPECT_DOUBLE_EQ(k[0], 0.0);
    EXPECT_NEAR(k[1], 2.0 * M_PI / 4.0, 1e-14);
    EXPECT_NEAR(k[7], -2.0 * M_PI / 4.0, 1e-14);
}
