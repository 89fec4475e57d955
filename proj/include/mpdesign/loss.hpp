#pragma once

#include <cstdint>
#include <span>

#include "mpdesign/distributions.hpp"
#include "mpdesign/random_stream.hpp"

namespace mpdesign {

// Losses are ratios of posterior to prior variance (trace of the covariance for
// the composition). Expected losses lie in (0, 1]; realised losses are not
// clamped and can exceed 1 for extreme data.

struct LossEstimate {
    double value;
    double standard_error;
};

// Var(Lambda | n, m) / Var(Lambda) = (beta^2/alpha) (alpha + n) / (beta + mA)^2.
double l1_realized(unsigned quadrants, std::uint64_t total_count, const GammaParams& prior,
                   double quadrant_area);

// Prior expectation of l1_realized: 1 / (1 + mA/beta).
double l1_expected(unsigned quadrants, const GammaParams& prior, double quadrant_area);

// Tr(Sigma_1)/Tr(Sigma_0) after categorising `class_counts` (summing to
// `categorized_total`).
double l2_realized(std::span<const std::uint64_t> class_counts, std::uint64_t categorized_total,
                   const DirichletParams& prior);

// Prior expectation of l2_realized over the Dirichlet-Multinomial predictive:
//   (gamma_0 + 1 - n_bar/(gamma_0 + n_bar)) / (gamma_0 + 1 + n_bar).
double l2_expected(std::uint64_t categorized_total, const DirichletParams& prior);

// Monte Carlo averages of the realised losses over their predictives; used to
// check the closed forms above.
LossEstimate mc_oracle_l1(unsigned quadrants, const GammaParams& prior, double quadrant_area,
                          std::uint64_t draws, RandomStream& stream);

LossEstimate mc_oracle_l2(std::uint64_t categorized_total, const DirichletParams& prior,
                          std::uint64_t draws, RandomStream& stream);

}  // namespace mpdesign
