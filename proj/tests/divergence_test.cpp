#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cvarlb/divergence.hpp"
#include "oracles.hpp"

using namespace cvarlb::divergence;
using cvarlb::testing::gaussian_kl_quadrature;
using cvarlb::testing::hellinger2_two_outcome;
using cvarlb::testing::kl_two_outcome;

TEST(KlGaussian, Examples) {
    EXPECT_DOUBLE_EQ(kl_gaussian_unit_var(0.5, -0.5), 0.5);
    EXPECT_EQ(kl_gaussian_unit_var(1.3, 1.3), 0.0);
    EXPECT_DOUBLE_EQ(kl_gaussian_unit_var(3.0, 1.0), 2.0);
    EXPECT_NEAR(gaussian_kl_quadrature(3.0, 1.0), 2.0, 1e-9);
}

TEST(KlGaussian, MatchesQuadrature) {
    for (double mu1 : {-1.5, 0.0, 0.25, 2.0}) {
        for (double mu2 : {-0.5, 0.1, 1.0}) {
            EXPECT_NEAR(kl_gaussian_unit_var(mu1, mu2), gaussian_kl_quadrature(mu1, mu2), 1e-8);
        }
    }
}

TEST(KlBernoulli, Examples) {
    EXPECT_EQ(kl_bernoulli(0.5, 0.5), 0.0);
    EXPECT_NEAR(kl_bernoulli(1.0, 0.5), std::log(2.0), 1e-15);
    EXPECT_NEAR(kl_bernoulli(0.25, 0.75), 0.54930614433405485, 1e-14);
    EXPECT_NEAR(kl_bernoulli(0.25, 0.75), kl_two_outcome(0.25, 0.75), 1e-14);
}

TEST(KlBernoulli, Errors) {
    EXPECT_THROW(kl_bernoulli(0.3, 0.0), std::domain_error);
    EXPECT_THROW(kl_bernoulli(0.3, 1.0), std::domain_error);
    EXPECT_THROW(kl_bernoulli(-0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(kl_bernoulli(0.5, 1.1), std::invalid_argument);
    EXPECT_EQ(kl_bernoulli(0.0, 0.0), 0.0);
    EXPECT_EQ(kl_bernoulli(1.0, 1.0), 0.0);
}

TEST(Hellinger, Examples) {
    EXPECT_EQ(hellinger2_bernoulli(0.37, 0.37), 0.0);
    EXPECT_NEAR(hellinger2_bernoulli(0.0, 0.75), 0.5, 1e-15);
    EXPECT_NEAR(hellinger2_bernoulli(0.25, 0.75), 0.13397459621556135, 1e-15);
    EXPECT_NEAR(hellinger2_bernoulli(0.25, 0.75), hellinger2_two_outcome(0.25, 0.75), 1e-15);
    EXPECT_THROW(hellinger2_bernoulli(1.5, 0.5), std::invalid_argument);
}

TEST(Budgets, Examples) {
    EXPECT_NEAR(estimation_budget(100, 1.0 / 60).value(), 1.0 / 18, 1e-15);
    EXPECT_DOUBLE_EQ(estimation_budget(4, 0.5).value(), 2.0);
    for (std::int64_t t : {1, 7, 100, 12345}) {
        EXPECT_NEAR(bandit_budget(1.0 / std::sqrt(2.0 * static_cast<double>(t)), t).value(), 0.25,
                    1e-15);
    }
    EXPECT_NEAR(bandit_budget(1.0 / 90, 900).value(), 1.0 / 18, 1e-15);
    EXPECT_THROW(estimation_budget(0, 0.1), std::invalid_argument);
    EXPECT_THROW(estimation_budget(10, 0.0), std::invalid_argument);
    EXPECT_THROW(bandit_budget(0.0, 10), std::invalid_argument);
    EXPECT_THROW(bandit_budget(0.1, 0), std::invalid_argument);
    EXPECT_THROW(HellingerBudget(-1e-3), std::invalid_argument);
}

TEST(Budgets, BanditBudgetIsSumOfPerRoundKl) {
    const double g = 0.37;
    const std::int64_t horizon = 50;
    double total = 0.0;
    for (std::int64_t t = 0; t < horizon; ++t) total += kl_gaussian_unit_var(g / 2, -g / 2);
    EXPECT_NEAR(bandit_budget(g, horizon).value(), total, 1e-12);
}

TEST(HellingerLeKl, Examples) {
    EXPECT_TRUE(hellinger_le_kl_check(0.3, 0.7));
    EXPECT_TRUE(hellinger_le_kl_check(0.42, 0.42));
    EXPECT_TRUE(hellinger_le_kl_check(0.01, 0.99));
    EXPECT_NEAR(hellinger2_bernoulli(0.3, 0.7), 0.08348486100883200, 1e-15);
    EXPECT_NEAR(kl_bernoulli(0.3, 0.7), 0.33891914415488145, 1e-14);
    EXPECT_NEAR(hellinger2_bernoulli(0.01, 0.99), 0.80100251257867601, 1e-14);
    EXPECT_NEAR(kl_bernoulli(0.01, 0.99), 4.5032174531318981, 1e-13);
}

TEST(DivergenceProperties, RandomPairs) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double a = u(gen);
        const double b = std::clamp(u(gen), 1e-9, 1.0 - 1e-9);
        const double h = hellinger2_bernoulli(a, b);
        const double k = kl_bernoulli(a, b);
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, 1.0);
        EXPECT_GE(k, 0.0);
        EXPECT_LE(h, k + 1e-12);
        EXPECT_NEAR(h, hellinger2_two_outcome(a, b), 1e-12);
        EXPECT_NEAR(k, kl_two_outcome(a, b), 1e-10 * std::max(1.0, k));
        EXPECT_NEAR(h, hellinger2_bernoulli(b, a), 1e-12);
    }
}

TEST(DivergenceProperties, NonincreasingOnLeftOfB) {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int trial = 0; trial < 50; ++trial) {
        const double b = u(gen);
        double prev_h = INFINITY, prev_k = INFINITY;
        for (int i = 0; i <= 1000; ++i) {
            const double a = b * i / 1000.0;
            const double h = hellinger2_bernoulli(a, b);
            const double k = kl_bernoulli(a, b);
            EXPECT_LE(h, prev_h + 1e-15);
            EXPECT_LE(k, prev_k + 1e-15);
            prev_h = h;
            prev_k = k;
        }
    }
}
