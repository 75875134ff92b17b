#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "phasesync/analytic.hpp"
#include "phasesync/sync.hpp"
#include "phasesync/synthetic.hpp"

using namespace phasesync;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> uniform_phases(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-kPi, kPi);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(rng);
    return x;
}

}  // namespace

TEST(PhaseDifference, SelfDifferenceIsZero) {
    const auto phi = uniform_phases(50, 1);
    for (double v : phase_difference(phi, phi).psi) EXPECT_EQ(v, 0.0);
}

TEST(PhaseDifference, QuarterCycleLag) {
    // sin(2 pi t / P) against 2 sin(2 pi t / P - pi/2) on a whole number of cycles
    const std::size_t n = 120;
    const auto a = analytic_signal(gen_sine(n, 12, 1.0, 0.0).values());
    const auto b = analytic_signal(gen_sine(n, 12, 2.0, -kPi / 2).values());
    const auto psi = phase_difference(a.phase, b.phase);
    for (double v : psi.psi) EXPECT_LE(oracle::angle_distance(v, kPi / 2), 1e-9);
}

TEST(PhaseDifference, AntiphaseIsPiModTwoPi) {
    auto phi2 = uniform_phases(40, 2);
    std::vector<double> phi1(phi2.size());
    for (std::size_t i = 0; i < phi1.size(); ++i) phi1[i] = phi2[i] + kPi;
    const auto psi = phase_difference(phi1, phi2);
    for (double v : psi.psi) {
        // no wrapping is applied, so the value is pi; it is the same angle as -pi
        EXPECT_LE(oracle::angle_distance(v, -kPi), 1e-12);
        EXPECT_NEAR(std::cos(v), -1.0, 1e-12);
    }
    EXPECT_NEAR(sync_index_full(psi), 1.0, 1e-12);
}

TEST(PhaseDifference, LengthMismatch) {
    EXPECT_THROW((void)phase_difference(std::vector<double>(3), std::vector<double>(4)), ContractError);
}

TEST(PhaseDifference, SwapNegates) {
    const auto p1 = uniform_phases(100, 3);
    const auto p2 = uniform_phases(100, 4);
    const auto f = phase_difference(p1, p2);
    const auto r = phase_difference(p2, p1);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f.psi[i], -r.psi[i]);
    const auto gf = sync_index_windowed(f, 13);
    const auto gr = sync_index_windowed(r, 13);
    for (std::size_t j = 0; j < gf.size(); ++j) EXPECT_NEAR(gf.gamma2[j], gr.gamma2[j], 1e-12);
}

TEST(SyncIndexFull, ConstantDifference) {
    for (double c : {0.0, 1.0, -2.5, kPi, 100.0}) {
        EXPECT_NEAR(sync_index_full(std::vector<double>(25, c)), 1.0, 1e-12) << c;
    }
}

TEST(SyncIndexFull, SevenZerosSixPis) {
    std::vector<double> psi;
    for (int i = 0; i < 13; ++i) psi.push_back(i % 2 == 0 ? 0.0 : kPi);
    const double expected = (1.0 / 13.0) * (1.0 / 13.0);
    EXPECT_NEAR(sync_index_full(psi), expected, 1e-12);
    EXPECT_NEAR(sync_index_full(psi), 0.005917, 5e-7);
    EXPECT_NEAR(sync_index_full(psi), oracle::gamma2(psi, 0, psi.size()), 1e-14);
}

TEST(SyncIndexFull, RootsOfUnityCancel) {
    for (std::size_t w : {3u, 13u, 17u}) {
        std::vector<double> psi(w);
        for (std::size_t i = 0; i < w; ++i) psi[i] = oracle::kTwoPi * static_cast<double>(i) / static_cast<double>(w);
        EXPECT_NEAR(sync_index_full(psi), 0.0, 1e-12) << w;
    }
}

TEST(SyncIndexFull, EmptyInput) { EXPECT_THROW((void)sync_index_full(std::vector<double>{}), ContractError); }

TEST(SyncIndexWindowed, ConstantDifference) {
    for (int w : {3, 13, 17, 51}) {
        const auto s = sync_index_windowed(std::vector<double>(60, 0.4), w);
        for (double g : s.gamma2) EXPECT_NEAR(g, 1.0, 1e-12);
    }
}

TEST(SyncIndexWindowed, IndexingAndLength) {
    const auto s = sync_index_windowed(uniform_phases(100, 5), 13);
    EXPECT_EQ(s.size(), 88u);
    EXPECT_EQ(s.window, 13);
    EXPECT_EQ(s.offset, 6u);
    EXPECT_EQ(s.first_valid(), 7u);
    EXPECT_EQ(s.last_valid(), 94u);

    const auto whole = sync_index_windowed(uniform_phases(13, 5), 13);
    EXPECT_EQ(whole.size(), 1u);
}

TEST(SyncIndexWindowed, MatchesDirectPerWindowEvaluation) {
    for (std::size_t n : {13u, 100u, 5000u}) {
        // unwrapped and large-magnitude differences exercise the sliding sums
        auto psi = uniform_phases(n, n);
        for (std::size_t i = 0; i < n; ++i) psi[i] += 0.37 * static_cast<double>(i);
        for (int w : {3, 11, 13}) {
            if (static_cast<std::size_t>(w) > n) continue;
            const auto fast = sync_index_windowed(psi, w);
            const auto slow = oracle::gamma2_windowed(psi, static_cast<std::size_t>(w));
            ASSERT_EQ(fast.size(), slow.size());
            EXPECT_LE(oracle::max_abs_diff(fast.gamma2, slow), 1e-12) << n << " " << w;
        }
    }
}

TEST(SyncIndexWindowed, Bounds) {
    const auto s = sync_index_windowed(uniform_phases(3000, 6), 3);
    for (double g : s.gamma2) {
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 1.0);
    }
}

TEST(SyncIndexWindowed, OneOnlyWhenCongruent) {
    std::vector<double> psi(30, 1.0);
    psi[10] += 4 * kPi;
    psi[20] += 1e-3;
    const auto s = sync_index_windowed(psi, 5);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const bool touches = j <= 20 && 20 < j + 5;
        if (touches) {
            EXPECT_LT(s.gamma2[j], 1.0 - 1e-8) << j;
        } else {
            EXPECT_NEAR(s.gamma2[j], 1.0, 1e-12) << j;
        }
    }
}

TEST(SyncIndexWindowed, ShiftInvariance) {
    const auto psi = uniform_phases(400, 7);
    auto shifted = psi;
    for (auto& v : shifted) v += 1.234;
    const auto a = sync_index_windowed(psi, 13);
    const auto b = sync_index_windowed(shifted, 13);
    EXPECT_LE(oracle::max_abs_diff(a.gamma2, b.gamma2), 1e-12);
}

TEST(SyncIndexWindowed, TwoPiInvariance) {
    const auto psi = uniform_phases(400, 8);
    auto jumped = psi;
    std::mt19937_64 rng(9);
    for (auto& v : jumped) {
        if (rng() % 2 == 0) v += oracle::kTwoPi * static_cast<double>(1 + rng() % 3);
    }
    const auto a = sync_index_windowed(psi, 17);
    const auto b = sync_index_windowed(jumped, 17);
    EXPECT_LE(oracle::max_abs_diff(a.gamma2, b.gamma2), 1e-12);
}

TEST(SyncIndexWindowed, NegationInvariance) {
    auto psi = uniform_phases(300, 10);
    const auto a = sync_index_windowed(psi, 11);
    for (auto& v : psi) v = -v;
    const auto b = sync_index_windowed(psi, 11);
    EXPECT_LE(oracle::max_abs_diff(a.gamma2, b.gamma2), 1e-12);
}

TEST(SyncIndexWindowed, InvalidWindow) {
    const auto psi = uniform_phases(20, 11);
    EXPECT_THROW((void)sync_index_windowed(psi, 12), ContractError);
    EXPECT_THROW((void)sync_index_windowed(psi, 1), ContractError);
    EXPECT_THROW((void)sync_index_windowed(psi, 21), ContractError);
    EXPECT_NO_THROW((void)sync_index_windowed(psi, 19));
}

TEST(SyncIndexWindowed, NullMeanMatchesReferenceValues) {
    // 0.077 for W = 13 and 0.059 for W = 17, both +/- 0.01, over >= 1e4 windows
    const auto psi = uniform_phases(40000, 12);
    for (const auto& [w, expected] : {std::pair{13, 0.077}, std::pair{17, 0.059}}) {
        const auto s = sync_index_windowed(psi, w);
        ASSERT_GE(s.size(), 10000u);
        double sum = 0.0;
        for (double g : s.gamma2) sum += g;
        EXPECT_NEAR(sum / static_cast<double>(s.size()), expected, 0.01) << w;
    }
}

TEST(SyncIndexWindowed, NullExpectationIsOneOverW) {
    // Non-overlapping windows give independent samples for the standard error.
    for (int w : {11, 13, 15, 17, 19}) {
        const std::size_t windows = 20000;
        const auto psi = uniform_phases(windows * static_cast<std::size_t>(w), 100 + static_cast<std::uint64_t>(w));
        const auto s = sync_index_windowed(psi, w);
        double sum = 0.0;
        double sq = 0.0;
        for (std::size_t j = 0; j < s.size(); j += static_cast<std::size_t>(w)) {
            sum += s.gamma2[j];
            sq += s.gamma2[j] * s.gamma2[j];
        }
        const double m = sum / windows;
        const double sd = std::sqrt((sq / windows - m * m) * windows / (windows - 1));
        const double se = sd / std::sqrt(static_cast<double>(windows));
        EXPECT_LE(std::abs(m - 1.0 / w), 3.0 * se) << "W=" << w << " mean " << m;
    }
}
