#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "f2f/golden.hpp"
#include "f2f/stats.hpp"

using namespace f2f;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Stats, MeanAndStddev) {
    std::vector<double> x{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(stats::mean(x), 2.5);
    EXPECT_NEAR(stats::stddev(x), std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_EQ(stats::stddev(std::vector<double>{1.0}), 0.0);
}

TEST(Stats, CircularMeanWrapsAround) {
    std::vector<double> a{kPi - 0.1, -kPi + 0.1};
    EXPECT_NEAR(std::abs(stats::circular_mean(a)), kPi, 1e-12);
    EXPECT_NEAR(stats::resultant_length(a), std::cos(0.1), 1e-12);
}

TEST(Stats, RayleighSeparatesUniformFromConcentrated) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::normal_distribution<double> g(0.5, 0.3);
    std::vector<double> uniform, peaked;
    for (int i = 0; i < 500; ++i) {
        uniform.push_back(u(gen));
        peaked.push_back(g(gen));
    }
    EXPECT_GT(stats::rayleigh_p(uniform), 0.01);
    EXPECT_LT(stats::rayleigh_p(peaked), 1e-10);
}

TEST(Stats, KuiperDetectsShift) {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> a(0.0, 0.5), b(0.0, 0.5), c(1.0, 0.5);
    std::vector<double> x, y, z;
    for (int i = 0; i < 300; ++i) {
        x.push_back(a(gen));
        y.push_back(b(gen));
        z.push_back(c(gen));
    }
    EXPECT_GT(stats::kuiper_two_sample_p(x, y), 0.01);
    EXPECT_LT(stats::kuiper_two_sample_p(x, z), 1e-6);
}

TEST(Stats, TwoClusterFitFindsAntipodalModes) {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<double> a;
    for (int i = 0; i < 400; ++i) a.push_back((i % 2 ? kPi / 2 : -kPi / 2) + 0.2 + noise(gen));
    const auto fit = stats::two_cluster_fit(a);
    EXPECT_EQ(fit.count1 + fit.count2, 400);
    EXPECT_NEAR(fit.separation, kPi, 0.05);
    EXPECT_NEAR(fit.spread1, 0.1, 0.03);
    const double c = std::min(stats::angular_distance(fit.center1, kPi / 2 + 0.2),
                              stats::angular_distance(fit.center1, -kPi / 2 + 0.2));
    EXPECT_LT(c, 0.05);
}

TEST(Stats, AngularDistance) {
    EXPECT_NEAR(stats::angular_distance(0.1, 2 * kPi - 0.1), 0.2, 1e-12);
    EXPECT_NEAR(stats::angular_distance(0.0, kPi), kPi, 1e-12);
}

TEST(Golden, FindsParabolaMinimum) {
    const auto m = golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 2.0);
    EXPECT_NEAR(m.x, 0.3, 1e-8);
    EXPECT_LT(m.value, 1e-16);
}
