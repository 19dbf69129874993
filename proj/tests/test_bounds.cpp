#include "test_support.hpp"
#include "tzero/bounds.hpp"
#include "tzero/overlap.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace tzero {
namespace {

using std::numbers::pi;
using testing::make;

using testing::q_direct;

TEST(real_roots, companion_matrix_examples) {
    // (x-1)(x-2)(x-3) = -6 + 11x - 6x^2 + x^3
    const std::vector<double> cubic{-6.0, 11.0, -6.0, 1.0};
    const auto r = real_roots(cubic);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], 1.0, 1e-13);
    EXPECT_NEAR(r[1], 2.0, 1e-13);
    EXPECT_NEAR(r[2], 3.0, 1e-13);

    EXPECT_TRUE(real_roots(std::vector<double>{1.0, 0.0, 1.0}).empty());
    EXPECT_TRUE(real_roots(std::vector<double>{3.0}).empty());
    const auto lin = real_roots(std::vector<double>{-4.0, 2.0, 0.0});
    ASSERT_EQ(lin.size(), 1u);
    EXPECT_DOUBLE_EQ(lin[0], 2.0);
}

TEST(feasible_set, intersection_and_merge) {
    const FeasibleSet a({{0.0, 1.0}, {2.0, 5.0}});
    const FeasibleSet b({{0.5, 2.5}, {4.0, std::numeric_limits<double>::infinity()}});
    const auto c = a.intersect(b);
    ASSERT_EQ(c.intervals().size(), 3u);
    EXPECT_EQ(c.intervals()[0], (Interval{0.5, 1.0}));
    EXPECT_EQ(c.intervals()[1], (Interval{2.0, 2.5}));
    EXPECT_EQ(c.intervals()[2], (Interval{4.0, 5.0}));
    EXPECT_EQ(*c.infimum(), 0.5);
    EXPECT_TRUE(c.contains(2.25));
    EXPECT_FALSE(c.contains(3.0));

    const FeasibleSet merged({{1.0, 2.0}, {0.0, 1.0}, {3.0, 3.0}});
    ASSERT_EQ(merged.intervals().size(), 2u);
    EXPECT_EQ(merged.intervals()[0], (Interval{0.0, 2.0}));
    EXPECT_TRUE(FeasibleSet({{0.0, 1.0}}).intersect(FeasibleSet({{2.0, 3.0}})).empty());
}

TEST(cos_inequality, holds_on_dense_grid) {
    double worst = 1.0;
    for (int k = 0; k <= 100000; ++k) {
        const double x = 1e-3 * k;
        worst = std::min(worst, std::cos(x) - 1.0 + 2.0 / pi * (x + std::sin(x)));
    }
    EXPECT_GE(worst, -1e-12);
}

TEST(ml_mt, examples) {
    EXPECT_NEAR(ml_bound(testing::two_level()), pi / 2, 1e-15);
    EXPECT_NEAR(ml_bound(testing::four_level()), pi / 3, 1e-15);
    EXPECT_NEAR(ml_bound(testing::four_level()), 1.047198, 1e-6);
    EXPECT_THROW(ml_bound(make({{1.0, 1.0}})), ComputeError);

    EXPECT_NEAR(mt_bound(testing::two_level()), pi / 2, 1e-15);
    EXPECT_NEAR(mt_bound(testing::four_level()), pi / 2 / std::sqrt(1.25), 1e-15);
    EXPECT_NEAR(mt_bound(testing::four_level()), 1.404963, 1e-6);
    EXPECT_NEAR(mt_bound(testing::biased()), pi / 2 / 0.3, 1e-13);
    EXPECT_NEAR(mt_bound(testing::biased()), 5.235988, 1e-6);
    EXPECT_THROW(mt_bound(make({{1.0, 1.0}})), ComputeError);
}

TEST(ml_mt, scale_with_hbar) {
    const auto s = testing::four_level();
    const auto s2 = s.with_hbar(2.0);
    EXPECT_EQ(ml_bound(s2), 2.0 * ml_bound(s));
    EXPECT_EQ(mt_bound(s2), 2.0 * mt_bound(s));
}

TEST(gamma_series, log_cos_coefficients) {
    const auto g = gamma_series(testing::two_level_centered(), 6);
    EXPECT_NEAR(std::abs(g(2) - complex(-0.5, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(g(4) - complex(-1.0 / 12.0, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(g(6) - complex(-1.0 / 45.0, 0.0)), 0.0, 1e-12);
    for (int n : {1, 3, 5}) EXPECT_NEAR(std::abs(g(n)), 0.0, 1e-15) << n;
}

TEST(gamma_series, uncentred_two_level) {
    const auto g = gamma_series(testing::two_level(), 4);
    EXPECT_NEAR(std::abs(g(1) - complex(0.0, -1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g(2) - complex(-0.5, 0.0)), 0.0, 1e-15);
}

TEST(gamma_series, point_spectrum_at_zero_is_flat) {
    const auto g = gamma_series(make({{0.0, 1.0}}), 8);
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(std::abs(g(n)), 0.0);
}

TEST(gamma_series, recurrence_matches_composition_sum) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = testing::random_spectrum(rng);
        const auto g = gamma_series(s, 6);
        EXPECT_NEAR(std::abs(g(1) - complex(0.0, -s.mean_energy())), 0.0, 1e-14 * (1.0 + s.mean_energy()));
        // gamma_n for n >= 2 ignores energy shifts; centring first keeps the
        // raw-moment oracle out of catastrophic cancellation.
        const auto c = center(s);
        for (int n = 2; n <= 6; ++n) {
            const auto oracle = testing::gamma_multinomial(c, n);
            const double scale = std::max(std::abs(oracle), std::pow(std::sqrt(variance(s)), n) / std::tgamma(n + 1.0));
            EXPECT_LE(std::abs(g(n) - oracle), 1e-10 * scale) << "n=" << n;
        }
    }
}

TEST(gamma_series, centred_invariant) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = center(testing::random_spectrum(rng));
        const auto g = gamma_series(s, 4);
        EXPECT_NEAR(std::abs(g(1)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(g(2) - complex(-variance(s) / 2.0, 0.0)), 0.0, 1e-10);
    }
}

TEST(radius_estimate, two_level_converges_from_above) {
    double prev = std::numeric_limits<double>::infinity();
    for (int order : {8, 12, 16, 24}) {
        const auto r = radius_estimate(testing::two_level_centered(), order);
        ASSERT_TRUE(r.estimate.has_value());
        EXPECT_FALSE(r.certified);
        EXPECT_LT(*r.estimate, prev);
        EXPECT_GE(*r.estimate, pi / 2 * (1.0 - 1e-12));
        prev = *r.estimate;
    }
    const auto r12 = radius_estimate(testing::two_level_centered(), 12);
    EXPECT_LE(std::abs(*r12.estimate - pi / 2), 0.05 * pi / 2);
    EXPECT_GT(r12.naive, r12.extrapolated);
}

// Phi = (1 + u + u^2 + u^3) / 4 with u = exp(-iz): zeros at u = -1, +-i, so
// the nearest one to the origin sits at |z| = pi/2.
TEST(radius_estimate, four_level_tracks_nearest_zero) {
    const auto s = testing::four_level();
    ASSERT_NEAR(std::abs(overlap_at(s, complex(pi / 2, 0.0))), 0.0, 1e-15);
    ASSERT_NEAR(std::abs(overlap_at(s, complex(-pi / 2, 0.0))), 0.0, 1e-15);
    const auto r = radius_estimate(s, 12);
    ASSERT_TRUE(r.estimate.has_value());
    EXPECT_FALSE(r.certified);
    EXPECT_GE(*r.estimate, pi / 2);
    EXPECT_LE(*r.estimate, 1.10 * pi / 2);
}

TEST(radius_estimate, point_spectrum_has_no_constraint) {
    const auto r = radius_estimate(make({{3.0, 1.0}}), 12);
    EXPECT_FALSE(r.estimate.has_value());
    EXPECT_THROW(radius_estimate(testing::two_level(), 3), ValidationError);
}

TEST(family_feasible_set, first_order_is_sqrt2_over_sigma) {
    const auto f1 = family_feasible_set(testing::two_level(), 1);
    ASSERT_EQ(f1.intervals().size(), 1u);
    EXPECT_NEAR(f1.intervals()[0].lo, std::sqrt(2.0), 1e-14);
    EXPECT_TRUE(std::isinf(f1.intervals()[0].hi));
}

TEST(family_feasible_set, second_order_two_level) {
    const auto f2 = family_feasible_set(testing::two_level_centered(), 2);
    ASSERT_EQ(f2.intervals().size(), 2u);
    EXPECT_EQ(f2.intervals()[0].lo, 0.0);
    EXPECT_NEAR(f2.intervals()[0].hi, std::sqrt(6.0 - 2.0 * std::sqrt(3.0)), 1e-13);
    EXPECT_NEAR(f2.intervals()[0].hi, 1.59245, 1e-5);
    EXPECT_NEAR(f2.intervals()[1].lo, std::sqrt(6.0 + 2.0 * std::sqrt(3.0)), 1e-13);
    EXPECT_NEAR(f2.intervals()[1].lo, 3.07638, 1e-5);
    EXPECT_TRUE(std::isinf(f2.intervals()[1].hi));
}

TEST(family_feasible_set, point_spectrum) {
    EXPECT_THROW(family_feasible_set(make({{1.0, 1.0}}), 1), ComputeError);
    const auto even = family_feasible_set(make({{1.0, 1.0}}), 2);
    ASSERT_EQ(even.intervals().size(), 1u);
    EXPECT_EQ(even.intervals()[0].lo, 0.0);
}

TEST(family_feasible_set, sign_pattern_agrees_with_direct_evaluation) {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = testing::random_spectrum(rng);
        const double scale = 10.0 / std::sqrt(variance(s));
        for (int n = 1; n <= 6; ++n) {
            const auto set = family_feasible_set(s, n);
            for (int k = 0; k < 50; ++k) {
                const double T = scale * tdist(rng);
                const double q = q_direct(s, n, T);
                // Skip points numerically on a root.
                const auto m = moments(s, 2 * n);
                double mag = 0.0;
                for (int j = 0; j <= n; ++j) {
                    double term = m.central[static_cast<std::size_t>(2 * j)];
                    for (int i = 1; i <= 2 * j; ++i) term *= T / i;
                    mag += std::abs(term);
                }
                if (std::abs(q) < 1e-9 * mag) continue;
                EXPECT_EQ(set.contains(T), q > 0.0) << "n=" << n << " T=" << T << " q=" << q;
            }
        }
    }
}

TEST(family_bound, examples) {
    const auto two = family_bound(testing::two_level_centered(), 2);
    EXPECT_NEAR(two.bound, std::sqrt(2.0), 1e-14);
    ASSERT_EQ(two.intersection.intervals().size(), 2u);
    EXPECT_NEAR(two.intersection.intervals()[0].lo, std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(two.intersection.intervals()[0].hi, 1.59245, 1e-5);
    EXPECT_NEAR(two.intersection.intervals()[1].lo, 3.07638, 1e-5);

    EXPECT_NEAR(family_bound(testing::four_level(), 1).bound, std::sqrt(2.0 / 1.25), 1e-14);
    EXPECT_NEAR(family_bound(testing::four_level(), 1).bound, 1.264911, 1e-6);
    EXPECT_THROW(family_bound(make({{0.0, 1.0}}), 2), ComputeError);
}

TEST(family_bound, per_n_is_monotone) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = testing::random_spectrum(rng);
        const auto fb = family_bound(s, 6);
        ASSERT_EQ(fb.per_n.size(), 6u);
        EXPECT_NEAR(fb.per_n[0], std::sqrt(2.0 / variance(s)), 1e-12 * fb.per_n[0]);
        for (std::size_t i = 1; i < fb.per_n.size(); ++i) EXPECT_GE(fb.per_n[i], fb.per_n[i - 1]);
    }
}

TEST(bound_report, two_level) {
    const auto r = bound_report(testing::two_level(), 2, 12);
    EXPECT_NEAR(*r.ml, pi / 2, 1e-15);
    EXPECT_NEAR(*r.mt, pi / 2, 1e-15);
    EXPECT_NEAR(*r.family, std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(*r.best, pi / 2, 1e-15);
    EXPECT_FALSE(r.radius.certified);
    const auto t0 = find_first_zero(testing::two_level());
    EXPECT_TRUE(consistent_with(r, *t0.t0));
}

TEST(bound_report, four_level) {
    const auto r = bound_report(testing::four_level(), 1, 12);
    EXPECT_NEAR(*r.ml, 1.0472, 1e-4);
    EXPECT_NEAR(*r.mt, 1.4050, 1e-4);
    EXPECT_NEAR(*r.family, 1.2649, 1e-4);
    EXPECT_NEAR(*r.best, 1.4050, 1e-4);
    EXPECT_LE(*r.best, pi / 2);
}

TEST(bound_report, point_spectrum_has_no_bounds) {
    const auto r = bound_report(make({{1.0, 1.0}}), 4, 12);
    EXPECT_FALSE(r.ml || r.mt || r.family || r.best || r.radius.estimate);
}

TEST(bound_report, hbar_scales_every_value) {
    const auto s = testing::four_level();
    const auto a = bound_report(s, 4, 12);
    const auto b = bound_report(s.with_hbar(2.0), 4, 12);
    EXPECT_EQ(*b.ml, 2.0 * *a.ml);
    EXPECT_EQ(*b.mt, 2.0 * *a.mt);
    EXPECT_EQ(*b.family, 2.0 * *a.family);
    EXPECT_EQ(*b.radius.estimate, 2.0 * *a.radius.estimate);
    EXPECT_EQ(*b.best, 2.0 * *a.best);
}

TEST(bounds_properties, shift_invariance) {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> offset(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = testing::random_spectrum(rng);
        const auto t = shift(s, offset(rng));
        EXPECT_NEAR(mt_bound(s), mt_bound(t), 1e-10 * mt_bound(s));
        EXPECT_NEAR(family_bound(s, 4).bound, family_bound(t, 4).bound, 1e-10 * family_bound(s, 4).bound);
        EXPECT_NEAR(ground_gap_mean(s), ground_gap_mean(t), 1e-10);
        EXPECT_NEAR(ml_bound(s), ml_bound(t), 1e-10 * ml_bound(s));
        const auto ra = radius_estimate(s, 12);
        const auto rb = radius_estimate(t, 12);
        EXPECT_NEAR(*ra.estimate, *rb.estimate, 1e-10 * *ra.estimate);
    }
}

TEST(bounds_properties, soundness_on_random_spectra) {
    std::mt19937_64 rng(61);
    int found = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = (trial % 2 == 0) ? testing::random_symmetric_spectrum(rng) : testing::random_spectrum(rng);
        ZeroSearchConfig cfg;
        cfg.horizon = 200.0;
        const auto z = find_first_zero(s, cfg);
        if (z.status != ZeroStatus::found) continue;
        ++found;
        const double t0 = *z.t0;
        const auto r = bound_report(s, 4, 12);
        EXPECT_TRUE(consistent_with(r, t0)) << "t0=" << t0 << " best=" << *r.best;
        for (int n = 1; n <= 6; ++n) EXPECT_GE(q_direct(s, n, t0), -1e-9) << n;
    }
    EXPECT_GT(found, 40);
}

} // namespace
} // namespace tzero
