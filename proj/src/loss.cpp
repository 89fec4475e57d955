#include "mpdesign/loss.hpp"

#include "mpdesign/running_mean.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mpdesign {

namespace {

constexpr std::uint64_t kMinOracleDraws = 1000;

void require_draws(std::uint64_t draws) {
    if (draws < kMinOracleDraws) {
        throw std::invalid_argument("Monte Carlo oracle needs at least 1000 draws");
    }
}

}  // namespace

double l1_realized(unsigned quadrants, std::uint64_t total_count, const GammaParams& prior,
                   double quadrant_area) {
    const double alpha = prior.shape();
    const double beta = prior.rate();
    const double posterior_rate = beta + static_cast<double>(quadrants) * quadrant_area;
    return (beta * beta / alpha) * (alpha + static_cast<double>(total_count)) /
           (posterior_rate * posterior_rate);
}

double l1_expected(unsigned quadrants, const GammaParams& prior, double quadrant_area) {
    // nu_0 / lambda_0 = 1 / beta under the rate parametrisation.
    return 1.0 / (1.0 + static_cast<double>(quadrants) * quadrant_area / prior.rate());
}

double l2_realized(std::span<const std::uint64_t> class_counts, std::uint64_t categorized_total,
                   const DirichletParams& prior) {
    if (class_counts.size() != prior.size()) {
        throw std::invalid_argument("l2_realized: class count vector length differs from prior dimension");
    }
    const auto total = std::accumulate(class_counts.begin(), class_counts.end(), std::uint64_t{0});
    if (total != categorized_total) {
        throw std::invalid_argument("l2_realized: class counts do not sum to the categorised total");
    }
    const double g0 = prior.total();
    const double n_bar = static_cast<double>(categorized_total);
    double prior_sq = 0.0;
    double posterior_sq = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        const double theta = prior[i] / g0;
        const double theta_post = (prior[i] + static_cast<double>(class_counts[i])) / (g0 + n_bar);
        prior_sq += theta * theta;
        posterior_sq += theta_post * theta_post;
    }
    const double d = 1.0 - prior_sq;
    if (!(d > 0.0)) {
        throw std::invalid_argument("l2_realized: prior covariance trace is zero");
    }
    return (1.0 + g0) / (d * (1.0 + g0 + n_bar)) * (1.0 - posterior_sq);
}

double l2_expected(std::uint64_t categorized_total, const DirichletParams& prior) {
    const double g0 = prior.total();
    const double n_bar = static_cast<double>(categorized_total);
    return (g0 + 1.0 - n_bar / (g0 + n_bar)) / (g0 + 1.0 + n_bar);
}

LossEstimate mc_oracle_l1(unsigned quadrants, const GammaParams& prior, double quadrant_area,
                          std::uint64_t draws, RandomStream& stream) {
    require_draws(draws);
    if (quadrants == 0) return {1.0, 0.0};
    const double area = static_cast<double>(quadrants) * quadrant_area;
    RunningMean acc;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const auto n = predictive_total_count(prior, area, stream);
        acc.add(l1_realized(quadrants, n, prior, quadrant_area));
    }
    return {acc.mean(), acc.standard_error()};
}

LossEstimate mc_oracle_l2(std::uint64_t categorized_total, const DirichletParams& prior,
                          std::uint64_t draws, RandomStream& stream) {
    require_draws(draws);
    if (categorized_total == 0) return {1.0, 0.0};
    RunningMean acc;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const auto p = dirichlet_sample(prior, stream);
        const auto counts = multinomial_sample(categorized_total, p, stream);
        acc.add(l2_realized(counts, categorized_total, prior));
    }
    return {acc.mean(), acc.standard_error()};
}

}  // namespace mpdesign
