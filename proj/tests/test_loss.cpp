#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mpdesign/loss.hpp"

using namespace mpdesign;

namespace {

const GammaParams kLowPrior(3.0, 0.01);
constexpr double kArea = 0.0625;

// Trace of a Dirichlet covariance assembled entry by entry.
double covariance_trace(const std::vector<double>& g) {
    double g0 = 0.0;
    for (double x : g) g0 += x;
    double trace = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double entry = ((i == j ? g[i] / g0 : 0.0) - g[i] * g[j] / (g0 * g0)) / (1.0 + g0);
            if (i == j) trace += entry;
        }
    }
    return trace;
}

}  // namespace

TEST_CASE("l1_realized") {
    CHECK(l1_realized(5, 25, kLowPrior, kArea) == doctest::Approx(0.0001 / 3.0 * 28.0 / (0.3225 * 0.3225)));
    CHECK(l1_realized(5, 25, kLowPrior, kArea) == doctest::Approx(0.008975).epsilon(1e-3));

    // alpha + n = (beta + mA)^2 alpha / beta^2 gives exactly 1: with beta = 1,
    // A = 1, m = 1, alpha = 1 the fixed point is n = 3.
    CHECK(l1_realized(1, 3, GammaParams(1.0, 1.0), 1.0) == 1.0);
    CHECK(l1_realized(1, 0, kLowPrior, 1e-12) == doctest::Approx(1.0));
    // Extreme data may exceed 1; realised losses are not clamped.
    CHECK(l1_realized(1, 500, kLowPrior, kArea) > 1.0);
}

TEST_CASE("l1_expected") {
    CHECK(l1_expected(5, kLowPrior, kArea) == doctest::Approx(0.0310).epsilon(0.005));
    CHECK(l1_expected(7, kLowPrior, kArea) == doctest::Approx(0.0224).epsilon(0.005));
    CHECK(l1_expected(0, kLowPrior, kArea) == 1.0);

    for (unsigned m = 0; m < 30; ++m) {
        const double nu0 = kLowPrior.variance();
        const double lambda0 = kLowPrior.mean();
        CHECK(l1_expected(m, kLowPrior, kArea) == doctest::Approx(1.0 / (1.0 + nu0 / lambda0 * m * kArea)).epsilon(1e-15));
        CHECK(l1_expected(m + 1, kLowPrior, kArea) < l1_expected(m, kLowPrior, kArea));
        CHECK(l1_expected(m + 1, kLowPrior, kArea * 1.5) < l1_expected(m + 1, kLowPrior, kArea));
        CHECK(l1_expected(m, kLowPrior, kArea) > 0.0);
    }
}

TEST_CASE("l2_realized") {
    const auto prior = DirichletParams::symmetric(3, 1.0);
    const std::vector<std::uint64_t> none = {0, 0, 0};
    CHECK(l2_realized(none, 0, prior) == doctest::Approx(1.0).epsilon(1e-15));

    const std::vector<std::uint64_t> s = {2, 1, 0};
    // Matrix oracle: posterior Dir(3, 2, 1) against prior Dir(1, 1, 1).
    const double expected = covariance_trace({3.0, 2.0, 1.0}) / covariance_trace({1.0, 1.0, 1.0});
    CHECK(expected == doctest::Approx(0.5238095238));
    CHECK(std::fabs(l2_realized(s, 3, prior) - expected) < 1e-12);

    CHECK_THROWS_AS(l2_realized(s, 4, prior), std::invalid_argument);
    const std::vector<std::uint64_t> wrong_size = {1, 2};
    CHECK_THROWS_AS(l2_realized(wrong_size, 3, prior), std::invalid_argument);

    SUBCASE("agrees with explicit covariance matrices") {
        RandomStream stream(8);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t k = 2 + stream.next_u64() % 9;
            std::vector<double> g(k);
            for (auto& x : g) x = 0.1 + 5.0 * stream.uniform();
            const std::uint64_t n_bar = stream.next_u64() % 51;
            const auto p = dirichlet_sample(DirichletParams(g), stream);
            const auto counts = multinomial_sample(n_bar, p, stream);
            std::vector<double> post = g;
            for (std::size_t i = 0; i < k; ++i) post[i] += static_cast<double>(counts[i]);
            const double oracle = covariance_trace(post) / covariance_trace(g);
            CHECK(std::fabs(l2_realized(counts, n_bar, DirichletParams(g)) - oracle) < 1e-12);
        }
    }

    SUBCASE("permutation invariance under a symmetric prior") {
        const auto sym = DirichletParams::symmetric(5, 0.7);
        const std::vector<std::uint64_t> a = {4, 0, 9, 2, 1};
        const std::vector<std::uint64_t> b = {9, 1, 0, 4, 2};
        CHECK(l2_realized(a, 16, sym) == doctest::Approx(l2_realized(b, 16, sym)).epsilon(1e-15));
    }
}

TEST_CASE("l2_expected") {
    const auto prior = DirichletParams::symmetric(10, 1.0);
    CHECK(l2_expected(280, prior) == doctest::Approx(0.03448).epsilon(1e-3));
    CHECK(l2_expected(99, prior) == doctest::Approx(0.09174).epsilon(1e-3));
    CHECK(l2_expected(0, prior) == doctest::Approx(1.0).epsilon(1e-15));

    const auto uninformative = DirichletParams::symmetric(10, 0.1);
    CHECK(l2_expected(9, uninformative) == doctest::Approx(0.1).epsilon(1e-12));
    for (std::uint64_t n = 0; n < 2000; ++n) {
        CHECK(std::fabs(l2_expected(n, uninformative) - 1.0 / (1.0 + static_cast<double>(n))) < 1e-12);
        CHECK(l2_expected(n + 1, prior) < l2_expected(n, prior));
        CHECK(l2_expected(n, prior) > 0.0);
        CHECK(l2_expected(n, prior) <= 1.0 + 1e-15);
    }
}

TEST_CASE("Monte Carlo oracles") {
    RandomStream stream(9);
    SUBCASE("l1 at the baseline") {
        const auto est = mc_oracle_l1(5, kLowPrior, kArea, 100000, stream);
        CHECK(std::fabs(est.value - l1_expected(5, kLowPrior, kArea)) < 3.0 * est.standard_error);
        CHECK(est.value == doctest::Approx(0.0310).epsilon(0.01));
        const auto none = mc_oracle_l1(0, kLowPrior, kArea, 1000, stream);
        CHECK(none.value == 1.0);
        CHECK(none.standard_error == 0.0);
        CHECK_THROWS(mc_oracle_l1(5, kLowPrior, kArea, 999, stream));
    }
    SUBCASE("l1 over random configurations") {
        for (int trial = 0; trial < 20; ++trial) {
            const unsigned m = 1 + static_cast<unsigned>(stream.next_u64() % 20);
            const GammaParams prior(0.5 + 5.0 * stream.uniform(), 0.001 + 0.05 * stream.uniform());
            const auto est = mc_oracle_l1(m, prior, kArea, 20000, stream);
            CAPTURE(m);
            CHECK(std::fabs(est.value - l1_expected(m, prior, kArea)) < 3.0 * est.standard_error);
        }
    }
    SUBCASE("l2") {
        const auto prior = DirichletParams::symmetric(10, 1.0);
        const auto est = mc_oracle_l2(280, prior, 100000, stream);
        CHECK(std::fabs(est.value - l2_expected(280, prior)) < 3.0 * est.standard_error);
        CHECK(mc_oracle_l2(0, prior, 1000, stream).value == 1.0);
    }
    SUBCASE("l2 over random priors") {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t k = 2 + stream.next_u64() % 9;
            std::vector<double> g(k);
            for (auto& x : g) x = 0.2 + 4.0 * stream.uniform();
            const std::uint64_t n_bar = stream.next_u64() % 501;
            const DirichletParams prior(g);
            const auto est = mc_oracle_l2(n_bar, prior, 10000, stream);
            CAPTURE(n_bar);
            CHECK(std::fabs(est.value - l2_expected(n_bar, prior)) < 3.0 * est.standard_error + 1e-15);
        }
    }
}
