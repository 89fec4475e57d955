#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mpdesign/posterior.hpp"
#include "mpdesign/random_stream.hpp"

using namespace mpdesign;

namespace {

const GammaParams kLowPrior(3.0, 0.01);
const CostModel kBaselineCost(0.0625, BudgetSpec{12.0}, 5e-5, 3e-3);
const std::vector<double> kTomasaSplit = {0.52, 0.34, 0.0, 0.13, 0.01, 0.0, 0.0, 0.0, 0.0, 0.0};

double log_gamma_density(const GammaParams& g, double x) {
    return g.shape() * std::log(g.rate()) + (g.shape() - 1.0) * std::log(x) - g.rate() * x - std::lgamma(g.shape());
}

// Mass by adaptive quadrature of the density written out by hand.
double integrated_mass(const GammaParams& g, double lower, double upper) {
    auto f = [&](double x) { return x <= 0.0 ? 0.0 : std::exp(log_gamma_density(g, x)); };
    if (lower == 0.0) {
        // tanh-sinh copes with the x^(shape-1) singularity at the origin.
        return boost::math::quadrature::tanh_sinh<double>().integrate(f, 0.0, upper);
    }
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lower, upper, 20, 1e-13);
}

}  // namespace

TEST_CASE("update_abundance") {
    const FieldObservations obs(0.0625, {4, 6, 5, 3, 7});
    const auto post = update_abundance(kLowPrior, obs);
    CHECK(post.shape() == 28.0);
    CHECK(post.rate() == doctest::Approx(0.3225).epsilon(1e-15));

    const auto empty = update_abundance(kLowPrior, FieldObservations(0.0625, {0}));
    CHECK(empty.shape() == 3.0);
    CHECK(empty.rate() == 0.01 + 0.0625);

    SUBCASE("sequential equals joint") {
        const auto first = update_abundance(kLowPrior, FieldObservations(0.0625, {4, 6}));
        const auto second = update_abundance(first, FieldObservations(0.0625, {5, 3, 7}));
        CHECK(second == post);
        // Residue bookkeeping keeps this exact for awkward priors and areas too.
        RandomStream stream(77);
        for (int trial = 0; trial < 2000; ++trial) {
            const GammaParams prior(0.1 + 10.0 * stream.uniform(), 1e-4 + stream.uniform());
            const double area = 0.01 + 0.5 * stream.uniform();
            std::vector<std::uint64_t> a(1 + stream.next_u64() % 10), b(1 + stream.next_u64() % 10);
            for (auto& c : a) c = stream.next_u64() % 500;
            for (auto& c : b) c = stream.next_u64() % 500;
            std::vector<std::uint64_t> both(a);
            both.insert(both.end(), b.begin(), b.end());
            const auto seq = update_abundance(update_abundance(prior, FieldObservations(area, a)),
                                              FieldObservations(area, b));
            const auto joint = update_abundance(prior, FieldObservations(area, both));
            CHECK(seq.shape() == joint.shape());
            CHECK(seq.rate() == joint.rate());
        }
    }
    SUBCASE("depends only on the totals") {
        const auto permuted = update_abundance(kLowPrior, FieldObservations(0.0625, {7, 3, 5, 6, 4}));
        CHECK(permuted == post);
        const auto lumped = update_abundance(kLowPrior, FieldObservations(0.0625, {25, 0, 0, 0, 0}));
        CHECK(lumped == post);
    }
    CHECK_THROWS_AS(FieldObservations(0.0625, {}), std::invalid_argument);
    CHECK_THROWS_AS(FieldObservations(-1.0, {1}), std::invalid_argument);
}

TEST_CASE("posterior mean shrinks between prior mean and the naive estimate") {
    RandomStream stream(51);
    for (int trial = 0; trial < 1000; ++trial) {
        const GammaParams prior(0.5 + 10.0 * stream.uniform(), 0.001 + 0.1 * stream.uniform());
        std::vector<std::uint64_t> counts(1 + stream.next_u64() % 15);
        for (auto& c : counts) c = stream.next_u64() % 200;
        const FieldObservations obs(0.0625, counts);
        const double post_mean = update_abundance(prior, obs).mean();
        const double lo = std::min(prior.mean(), naive_abundance_estimate(obs));
        const double hi = std::max(prior.mean(), naive_abundance_estimate(obs));
        CHECK(post_mean >= lo * (1.0 - 1e-12));
        CHECK(post_mean <= hi * (1.0 + 1e-12));
    }
}

TEST_CASE("update_composition") {
    const auto prior = DirichletParams::symmetric(10, 1.0);
    const CategorizationCounts cats({53, 34, 0, 13, 1, 0, 0, 0, 0, 0});
    const auto post = update_composition(prior, cats);
    const std::vector<double> expected = {54, 35, 1, 14, 2, 1, 1, 1, 1, 1};
    CHECK(std::equal(post.concentration().begin(), post.concentration().end(), expected.begin()));
    CHECK(post.total() == 101.0 + 10.0);
    CHECK(update_composition(prior, CategorizationCounts(std::vector<std::uint64_t>(10, 0))) == prior);

    const auto first = update_composition(prior, CategorizationCounts({50, 0, 0, 13, 0, 0, 0, 0, 0, 0}));
    const auto second = update_composition(first, CategorizationCounts({3, 34, 0, 0, 1, 0, 0, 0, 0, 0}));
    CHECK(second == post);

    // Non-integer concentrations: batch and joint updates still agree exactly.
    const DirichletParams odd({0.1, 0.7, 1.0 / 3.0});
    RandomStream stream(78);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::uint64_t> a(3), b(3), both(3);
        for (std::size_t i = 0; i < 3; ++i) {
            a[i] = stream.next_u64() % 1000;
            b[i] = stream.next_u64() % 1000;
            both[i] = a[i] + b[i];
        }
        const auto seq = update_composition(update_composition(odd, CategorizationCounts(a)), CategorizationCounts(b));
        CHECK(seq == update_composition(odd, CategorizationCounts(both)));
    }

    CHECK_THROWS_AS(update_composition(prior, CategorizationCounts({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(update_posterior(kLowPrior, prior, FieldObservations(0.0625, {3}),
                                     CategorizationCounts({4, 0, 0, 0, 0, 0, 0, 0, 0, 0})),
                    std::invalid_argument);
}

TEST_CASE("naive_abundance_estimate") {
    std::vector<std::uint64_t> counts(15, 0);
    counts[0] = 358;
    CHECK(naive_abundance_estimate(FieldObservations(0.0625, counts)) == doctest::Approx(381.8667).epsilon(1e-6));
    CHECK(naive_abundance_estimate(FieldObservations(0.0625, {0, 0})) == 0.0);
    CHECK(naive_abundance_estimate(FieldObservations(0.0625, {5, 5, 5, 5, 5})) == 80.0);
}

TEST_CASE("hpd_interval") {
    SUBCASE("exponential is left-anchored") {
        const auto iv = hpd_interval(GammaParams(1.0, 2.0), 0.95);
        CHECK(iv.lower == 0.0);
        CHECK(iv.upper == doctest::Approx(-std::log(0.05) / 2.0).epsilon(1e-12));
        CHECK(hpd_interval(GammaParams(0.4, 1.0), 0.9).lower == 0.0);
    }
    SUBCASE("equal density at the endpoints") {
        const GammaParams post(28.0, 0.3225);
        const auto iv = hpd_interval(post, 0.95);
        const double fl = log_gamma_density(post, iv.lower);
        const double fu = log_gamma_density(post, iv.upper);
        CHECK(std::fabs(std::exp(fl - fu) - 1.0) < 1e-8);
        CHECK(iv.lower > 0.0);
        CHECK(iv.lower < *post.mode());
        CHECK(iv.upper > *post.mode());
        CHECK(std::fabs(integrated_mass(post, iv.lower, iv.upper) - 0.95) < 1e-6);
        // Shorter than the equal-tailed interval of the same mass.
        const double tail_lo = boost::math::gamma_p_inv(28.0, 0.025) / 0.3225;
        const double tail_hi = boost::math::gamma_p_inv(28.0, 0.975) / 0.3225;
        CHECK(iv.upper - iv.lower < tail_hi - tail_lo);
    }
    SUBCASE("nested in the mass") {
        const GammaParams post(28.0, 0.3225);
        double previous_lower = 1e300;
        double previous_upper = 0.0;
        for (double mass : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 0.99999}) {
            const auto iv = hpd_interval(post, mass);
            CHECK(iv.lower < previous_lower);
            CHECK(iv.upper > previous_upper);
            previous_lower = iv.lower;
            previous_upper = iv.upper;
        }
    }
    SUBCASE("nonnegative with correct mass over many posteriors") {
        RandomStream stream(52);
        for (int trial = 0; trial < 200; ++trial) {
            const GammaParams g(0.2 + 300.0 * stream.uniform() * stream.uniform(), 0.001 + 2.0 * stream.uniform());
            const double mass = 0.5 + 0.49 * stream.uniform();
            CAPTURE(g.shape());
            CAPTURE(g.rate());
            const auto iv = hpd_interval(g, mass);
            CHECK(iv.lower >= 0.0);
            CHECK(std::fabs(integrated_mass(g, iv.lower, iv.upper) - mass) < 1e-6);
        }
    }
    CHECK_THROWS_AS(hpd_interval(kLowPrior, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hpd_interval(kLowPrior, 0.0), std::invalid_argument);
}

TEST_CASE("density_grid") {
    const std::vector<double> zero = {0.0};
    CHECK(density_grid(GammaParams(1.0, 1.0), zero)[0] == doctest::Approx(1.0));
    const std::vector<double> negative = {1.0, -2.5};
    CHECK_THROWS_WITH_AS(density_grid(GammaParams(1.0, 1.0), negative), doctest::Contains("-2.5"), std::domain_error);
    CHECK_THROWS_AS(density_grid(GammaParams(0.5, 1.0), zero), std::domain_error);

    SUBCASE("grid argmax of the low prior is the mode") {
        std::vector<double> grid;
        const double step = 0.5;
        for (double x = step; x < 1500.0; x += step) grid.push_back(x);
        const auto dens = density_grid(kLowPrior, grid);
        const auto at = std::max_element(dens.begin(), dens.end()) - dens.begin();
        CHECK(std::fabs(grid[at] - 200.0) <= step);
    }
    SUBCASE("Beta marginals integrate to one") {
        const DirichletParams post({54, 35, 1, 14, 2, 1, 1, 1, 1, 1});
        std::vector<double> grid(20001);
        for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 20000.0;
        for (std::size_t comp : {0u, 1u, 3u, 4u}) {
            const auto dens = density_grid(post, comp, grid);
            double integral = 0.0;
            for (std::size_t i = 1; i < grid.size(); ++i) integral += 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
            CHECK(std::fabs(integral - 1.0) < 1e-4);
        }
        const std::vector<double> outside = {1.5};
        CHECK_THROWS_WITH_AS(density_grid(post, 0, outside), doctest::Contains("1.5"), std::domain_error);
        CHECK_THROWS_AS(density_grid(post, 10, grid), std::out_of_range);
    }
}

TEST_CASE("apportion") {
    const auto counts = apportion(101, kTomasaSplit);
    const std::vector<std::uint64_t> expected = {53, 34, 0, 13, 1, 0, 0, 0, 0, 0};
    CHECK(counts == expected);
    RandomStream stream(53);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> p(2 + stream.next_u64() % 10);
        for (auto& x : p) x = stream.uniform();
        const double s = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& x : p) x /= s;
        const std::uint64_t total = stream.next_u64() % 1000;
        const auto c = apportion(total, p);
        CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == total);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(std::fabs(static_cast<double>(c[i]) - static_cast<double>(total) * p[i]) < 1.0);
        }
    }
}

TEST_CASE("synthesize_expected_data") {
    SUBCASE("floor of the expected count") {
        CHECK(synthesize_expected_data(382.0, kTomasaSplit, 7, 0.0625, kBaselineCost).observations.total_count() == 167);
        CHECK(synthesize_expected_data(382.0, kTomasaSplit, 5, 0.0625, kBaselineCost).observations.total_count() == 119);
        CHECK(synthesize_expected_data(80.0, kTomasaSplit, 5, 0.0625, kBaselineCost).observations.total_count() == 25);
        CHECK(synthesize_expected_data(80.0, kTomasaSplit, 7, 0.0625, kBaselineCost).observations.total_count() == 35);
        CHECK(synthesize_expected_data(5.0, kTomasaSplit, 5, 0.0625, kBaselineCost).observations.total_count() == 1);
        CHECK(synthesize_expected_data(5.0, kTomasaSplit, 7, 0.0625, kBaselineCost).observations.total_count() == 2);
    }
    SUBCASE("the m=7, Lambda=382 campaign") {
        const auto data = synthesize_expected_data(382.0, kTomasaSplit, 7, 0.0625, kBaselineCost);
        CHECK(data.observations.quadrants() == 7);
        CHECK(data.categorization_fraction == doctest::Approx(0.6071).epsilon(1e-3));
        CHECK(data.categorized.categorized_total() == 101);
        const std::vector<std::uint64_t> split = {53, 34, 0, 13, 1, 0, 0, 0, 0, 0};
        CHECK(std::equal(split.begin(), split.end(), data.categorized.class_counts().begin()));
        const auto post = update_composition(DirichletParams::symmetric(10, 1.0), data.categorized);
        CHECK(post[0] / post.total() == doctest::Approx(54.0 / 111.0));
    }
    SUBCASE("stated totals for the heavier beach") {
        const auto five = synthesize_from_total(200, kTomasaSplit, 5, 0.0625, kBaselineCost);
        const auto seven = synthesize_from_total(280, kTomasaSplit, 7, 0.0625, kBaselineCost);
        // (0.75 - 0.3125 - 0.01) / 0.6 = 0.7125, so 142 of 200 are categorised.
        CHECK(five.categorization_fraction == doctest::Approx(0.7125));
        CHECK(five.categorized.categorized_total() == 142);
        CHECK(seven.categorized.categorized_total() == 99);
        CHECK(seven.categorization_fraction == doctest::Approx(0.3554).epsilon(1e-3));
    }
    SUBCASE("class counts always sum to n_bar") {
        RandomStream stream(54);
        for (int trial = 0; trial < 300; ++trial) {
            const double lambda = 2000.0 * stream.uniform();
            const unsigned m = 1 + static_cast<unsigned>(stream.next_u64() % 12);
            const auto d = synthesize_expected_data(lambda, kTomasaSplit, m, 0.0625, kBaselineCost);
            const auto c = d.categorized.class_counts();
            CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) ==
                  categorized_count(d.observations.total_count(), d.categorization_fraction));
            CHECK(d.categorized.categorized_total() <= d.observations.total_count());
        }
    }
    const std::vector<double> bad = {0.5, 0.4};
    CHECK_THROWS_AS(synthesize_expected_data(10.0, bad, 5, 0.0625, kBaselineCost), std::invalid_argument);
}
