#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "phasesync/analytic.hpp"
#include "phasesync/spectral.hpp"

using namespace phasesync;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> negate(std::vector<double> x) {
    for (auto& v : x) v = -v;
    return x;
}

}  // namespace

TEST(Hilbert, CosineToSine) {
    for (std::size_t n : {64u, 100u, 505u}) {
        for (int k : {1, 3, 7, 18}) {
            EXPECT_LE(oracle::max_abs_diff(hilbert(oracle::grid_cos(n, k)), oracle::grid_sin(n, k)), 1e-10)
                << n << " " << k;
        }
    }
}

TEST(Hilbert, SineToMinusCosine) {
    for (std::size_t n : {64u, 101u, 488u}) {
        for (int k : {1, 5, 14}) {
            EXPECT_LE(oracle::max_abs_diff(hilbert(oracle::grid_sin(n, k)), negate(oracle::grid_cos(n, k))), 1e-10)
                << n << " " << k;
        }
    }
}

TEST(Hilbert, ZerosToZeros) {
    EXPECT_EQ(oracle::max_abs(hilbert(std::vector<double>(50, 0.0))), 0.0);
}

TEST(Hilbert, MeanAndNyquistDropOut) {
    std::vector<double> x(16);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 3.0 + (i % 2 == 0 ? 1.0 : -1.0);
    EXPECT_LE(oracle::max_abs(hilbert(x)), 1e-12);
}

TEST(Hilbert, MatchesModeByModeConstruction) {
    for (std::size_t n : {2u, 3u, 10u, 33u, 128u, 505u}) {
        const auto x = oracle::random_series(n, 40 + n);
        EXPECT_LE(oracle::max_abs_diff(hilbert(x), oracle::hilbert_modes(x)), 1e-10) << n;
    }
}

TEST(Hilbert, Linearity) {
    const auto x = oracle::random_series(150, 1);
    const auto y = oracle::random_series(150, 2);
    std::vector<double> z(150);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = -1.5 * x[i] + 4.0 * y[i];
    const auto hx = hilbert(x);
    const auto hy = hilbert(y);
    const auto hz = hilbert(z);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(hz[i], -1.5 * hx[i] + 4.0 * hy[i], 1e-9);
}

TEST(Hilbert, InvolutionUpToSign) {
    for (std::size_t n : {64u, 505u, 488u}) {
        // band-limited and zero-mean, Nyquist excluded
        const auto x = bandpass(oracle::random_series(n, 7 * n), {1, static_cast<int>(n / 2) - 1});
        EXPECT_LE(oracle::max_abs_diff(hilbert(hilbert(x)), negate(x)), 1e-9) << n;
    }
}

TEST(Hilbert, EnergyPreservation) {
    const auto x = bandpass(oracle::random_series(505, 3), {4, 18});
    const auto h = hilbert(x);
    double ex = 0.0;
    double eh = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ex += x[i] * x[i];
        eh += h[i] * h[i];
    }
    EXPECT_NEAR(eh / ex, 1.0, 1e-9);
}

TEST(Hilbert, RejectsShortInput) { EXPECT_THROW((void)hilbert(std::vector<double>{1.0}), ContractError); }

TEST(PhaseAngle, Quadrants) {
    EXPECT_EQ(phase_angle(1.0, 0.0), 0.0);
    EXPECT_NEAR(phase_angle(0.0, 1.0), kPi / 2, 1e-15);
    EXPECT_NEAR(phase_angle(0.0, -1.0), -kPi / 2, 1e-15);
    EXPECT_NEAR(phase_angle(1.0, 1.0), kPi / 4, 1e-15);
    EXPECT_NEAR(phase_angle(-1.0, -1.0), -3 * kPi / 4, 1e-15);
    // the negative real axis belongs to -pi
    EXPECT_EQ(phase_angle(-1.0, 0.0), -kPi);
    EXPECT_EQ(phase_angle(-1.0, -0.0), -kPi);
}

TEST(PhaseAngle, RangeIsHalfOpen) {
    const auto x = oracle::random_series(2000, 19);
    const auto y = oracle::random_series(2000, 20);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = phase_angle(x[i], y[i]);
        EXPECT_GE(p, -kPi);
        EXPECT_LT(p, kPi);
    }
}

TEST(AnalyticSignal, GridCosinePhaseAdvances) {
    const std::size_t n = 100;
    const int k = 5;
    const auto a = analytic_signal(oracle::grid_cos(n, k));
    EXPECT_NEAR(a.phase[0], 0.0, 1e-12);
    const double step = oracle::kTwoPi * k / n;
    for (std::size_t t = 0; t < n; ++t) {
        EXPECT_LE(oracle::angle_distance(a.phase[t], step * static_cast<double>(t)), 1e-8) << t;
        if (t > 0) {
            EXPECT_NEAR(std::remainder(a.phase[t] - a.phase[t - 1], oracle::kTwoPi), step, 1e-8);
        }
    }
}

TEST(AnalyticSignal, ConstantAmplitude) {
    const auto a = analytic_signal(oracle::grid_cos(120, 7, 2.0));
    for (double amp : a.amplitude) EXPECT_NEAR(amp, 2.0, 1e-9);
}

TEST(AnalyticSignal, PolarIdentities) {
    const auto x = bandpass(oracle::random_series(505, 55), {4, 18});
    const auto a = analytic_signal(x);
    ASSERT_EQ(a.size(), x.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        EXPECT_GE(a.amplitude[t], 0.0);
        const double sq = a.s[t] * a.s[t] + a.s_h[t] * a.s_h[t];
        EXPECT_NEAR(a.amplitude[t] * a.amplitude[t], sq, 1e-12 * sq);
        EXPECT_NEAR(a.s[t], a.amplitude[t] * std::cos(a.phase[t]), 1e-9);
        EXPECT_NEAR(a.s_h[t], a.amplitude[t] * std::sin(a.phase[t]), 1e-9);
        EXPECT_GE(a.phase[t], -kPi);
        EXPECT_LT(a.phase[t], kPi);
    }
}

TEST(AnalyticSignal, PositiveRealAxisHasZeroPhase) {
    // cos at t = 0 sits on the positive real axis: s > 0, s^H = 0
    const auto a = analytic_signal(oracle::grid_cos(64, 2, 3.0));
    EXPECT_GT(a.s[0], 0.0);
    EXPECT_NEAR(a.s_h[0], 0.0, 1e-12);
    EXPECT_NEAR(a.phase[0], 0.0, 1e-12);
}

TEST(AnalyticSignal, AmplitudeScalingLeavesPhase) {
    const auto x = bandpass(oracle::random_series(300, 8), {3, 20});
    auto y = x;
    for (auto& v : y) v *= 37.5;
    const auto px = analytic_signal(x).phase;
    const auto py = analytic_signal(y).phase;
    for (std::size_t t = 0; t < px.size(); ++t) EXPECT_LE(oracle::angle_distance(px[t], py[t]), 1e-9);
}

TEST(AnalyticSignal, DegenerateAmplitude) {
    EXPECT_THROW((void)analytic_signal(std::vector<double>(32, 0.0)), DegeneratePhaseError);

    // Beat of two equal-amplitude tones: the envelope |2 cos(pi n (k2-k1)/N)|
    // vanishes at n = N/(2 (k2-k1)) = 16.
    const std::size_t n = 64;
    const auto c1 = oracle::grid_cos(n, 4);
    const auto c2 = oracle::grid_cos(n, 6);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = c1[i] + c2[i];
    try {
        (void)analytic_signal(x);
        FAIL() << "expected DegeneratePhaseError";
    } catch (const DegeneratePhaseError& e) {
        EXPECT_EQ(e.index(), 16u);
        EXPECT_NE(std::string(e.what()).find("t=16"), std::string::npos);
    }
}

TEST(AnalyticSignal, FloorIsConfigurable) {
    const std::size_t n = 128;
    const auto carrier = oracle::grid_cos(n, 10);
    const auto side = oracle::grid_cos(n, 12);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = carrier[i] + 0.25 * side[i];
    // envelope |1 + 0.25 e^{i 2 theta}| ranges over [0.75, 1.25]: min/max = 0.6
    EXPECT_NO_THROW((void)analytic_signal(x, 0.5));
    EXPECT_THROW((void)analytic_signal(x, 0.7), DegeneratePhaseError);
}
