#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "chartgrid/rng.hpp"
#include "chartgrid/stats.hpp"
#include "oracles.hpp"

using namespace chartgrid;
using namespace chartgrid::stats;

TEST(Descriptive, MeanAndSampleStdDev)
{
    std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
    auto d = descriptive(xs);
    EXPECT_DOUBLE_EQ(d.mean, 5.0);
    EXPECT_NEAR(d.std_dev, std::sqrt(32.0 / 7.0), 1e-12);
    std::vector<double> one{1};
    EXPECT_THROW(descriptive(one), InsufficientDataError);
}

TEST(Wilcoxon, AllPositiveFivePairs)
{
    std::vector<double> a{1, 2, 3, 4, 5};
    std::vector<double> b(5, 0.0);
    auto r = wilcoxon_signed_rank(a, b);
    EXPECT_EQ(r.w_statistic, 0.0);
    EXPECT_EQ(r.w_plus, 15.0);
    EXPECT_EQ(r.n_effective, 5);
    EXPECT_EQ(r.p_value, 0.0625);
    EXPECT_EQ(r.mode, WilcoxonMode::exact);
    EXPECT_FALSE(r.significant);
}

TEST(Wilcoxon, AllZeroDifferencesIsInsufficient)
{
    std::vector<double> a(10, 3.0);
    EXPECT_THROW(wilcoxon_signed_rank(a, a), InsufficientDataError);
    std::vector<double> b(9, 3.0);
    EXPECT_THROW(wilcoxon_signed_rank(a, b), EvaluationError);
}

TEST(Wilcoxon, ZerosDroppedBeforeCounting)
{
    std::vector<double> a{1, 2, 3, 4, 5, 6, 7};
    std::vector<double> b{1, 2, 0, 0, 0, 0, 0};
    auto r = wilcoxon_signed_rank(a, b);
    EXPECT_EQ(r.n_effective, 5);
    EXPECT_EQ(r.p_value, 0.0625);
}

TEST(Wilcoxon, ExactForTwentyThreePairs)
{
    Rng rng(1);
    std::vector<double> a(23), b(23);
    for (int i = 0; i < 23; ++i) {
        a[i] = rng.uniform(0, 50);
        b[i] = a[i] + rng.normal(2, 5);
    }
    auto r = wilcoxon_signed_rank(a, b);
    EXPECT_EQ(r.mode, WilcoxonMode::exact);
    EXPECT_EQ(r.n_effective, 23);
}

TEST(Wilcoxon, MatchesBruteForceIncludingTies)
{
    Rng rng(42);
    for (int n = 5; n <= 14; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> a(n), b(n);
            for (int i = 0; i < n; ++i) {
                a[i] = rng.uniform_int(0, 8);
                b[i] = rng.uniform_int(0, 8) + (rep % 2 ? 0.0 : rng.uniform(0, 1));
            }
            auto ref = oracle::brute_force_wilcoxon(a, b);
            if (ref.n < 5)
                continue;
            auto r = wilcoxon_signed_rank(a, b);
            EXPECT_NEAR(r.p_value, ref.p, 1e-12) << "n=" << n << " rep=" << rep;
            EXPECT_DOUBLE_EQ(r.w_plus, ref.w_plus);
            EXPECT_DOUBLE_EQ(r.w_minus, ref.w_minus);
        }
    }
}

TEST(Wilcoxon, SwapKeepsStatisticAndP)
{
    Rng rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        int n = rng.uniform_int(5, 40);
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = rng.uniform(0, 10);
            b[i] = rng.uniform(0, 10);
        }
        auto r1 = wilcoxon_signed_rank(a, b);
        auto r2 = wilcoxon_signed_rank(b, a);
        EXPECT_EQ(r1.w_statistic, r2.w_statistic);
        EXPECT_EQ(r1.w_plus, r2.w_minus);
        EXPECT_NEAR(r1.p_value, r2.p_value, 1e-15);
        EXPECT_GE(r1.p_value, 0.0);
        EXPECT_LE(r1.w_statistic, n * (n + 1) / 2.0);
        EXPECT_EQ(r1.significant, r1.p_value < 0.05);
        EXPECT_LE(r1.p_value, 1.0);
    }
}

TEST(Wilcoxon, UniformShiftGivesSmallestP)
{
    for (int n : {6, 10, 20}) {
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = i * 1.7 + 1.0;
            b[i] = a[i] + 0.5 + 0.01 * i;
        }
        auto r = wilcoxon_signed_rank(a, b);
        EXPECT_EQ(r.w_statistic, 0.0);
        EXPECT_NEAR(r.p_value, 2.0 / std::pow(2.0, n), 1e-15);
    }
}

TEST(Wilcoxon, NormalApproximationAgreesNearCutover)
{
    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> a(25), b(25);
        for (int i = 0; i < 25; ++i) {
            a[i] = rng.uniform(0, 10);
            b[i] = a[i] + rng.normal(0.8, 2);
        }
        WilcoxonOptions ex;
        ex.force = WilcoxonOptions::Force::exact;
        WilcoxonOptions no;
        no.force = WilcoxonOptions::Force::normal;
        auto pe = wilcoxon_signed_rank(a, b, ex).p_value;
        auto pn = wilcoxon_signed_rank(a, b, no).p_value;
        EXPECT_NEAR(pe, pn, 0.02);
    }
    std::vector<double> a(30), b(30, 0.0);
    for (int i = 0; i < 30; ++i)
        a[i] = i + 1;
    EXPECT_EQ(wilcoxon_signed_rank(a, b).mode, WilcoxonMode::normal_approx);
}

TEST(Ranks, AverageTies)
{
    std::vector<double> v{3, 1, 3, 2};
    EXPECT_EQ(average_ranks(v), (std::vector<double>{3.5, 1, 3.5, 2}));
    EXPECT_EQ(average_ranks(v), oracle::count_ranks(v));
}

TEST(Boxplot, TukeyQuartiles)
{
    std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
    auto b = boxplot_stats(xs);
    EXPECT_DOUBLE_EQ(b.median, 5.5);
    EXPECT_DOUBLE_EQ(b.q1, 3.25);
    EXPECT_DOUBLE_EQ(b.q3, 7.75);
    EXPECT_DOUBLE_EQ(b.whisker_low, 1);
    EXPECT_DOUBLE_EQ(b.whisker_high, 9);
    EXPECT_EQ(b.outliers, std::vector<double>{100});
}

TEST(Boxplot, OrderingProperty)
{
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        int n = rng.uniform_int(1, 60);
        std::vector<double> xs(n);
        for (auto& x : xs)
            x = std::exp(rng.normal(2, 1));
        auto b = boxplot_stats(xs);
        auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        EXPECT_LE(*lo, b.whisker_low);
        EXPECT_LE(b.whisker_low, b.q1);
        EXPECT_LE(b.q1, b.median);
        EXPECT_LE(b.median, b.q3);
        EXPECT_LE(b.q3, b.whisker_high);
        EXPECT_LE(b.whisker_high, *hi);
        double iqr = b.q3 - b.q1;
        for (double o : b.outliers)
            EXPECT_TRUE(o < b.q1 - 1.5 * iqr || o > b.q3 + 1.5 * iqr);
    }
    std::vector<double> empty;
    EXPECT_THROW(boxplot_stats(empty), InsufficientDataError);
}
