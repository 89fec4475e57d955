#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpdesign/cost.hpp"
#include "mpdesign/distributions.hpp"

namespace mpdesign {

// Suspected-particle counts from m quadrants of equal area.
class FieldObservations {
public:
    FieldObservations(double quadrant_area, std::vector<std::uint64_t> counts);

    double quadrant_area() const noexcept { return quadrant_area_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    unsigned quadrants() const noexcept { return static_cast<unsigned>(counts_.size()); }
    std::uint64_t total_count() const noexcept { return total_count_; }
    double total_area() const noexcept { return static_cast<double>(counts_.size()) * quadrant_area_; }

private:
    double quadrant_area_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_count_;
};

// Per-class counts of the categorised sub-sample.
class CategorizationCounts {
public:
    explicit CategorizationCounts(std::vector<std::uint64_t> class_counts);

    std::span<const std::uint64_t> class_counts() const noexcept { return class_counts_; }
    std::size_t size() const noexcept { return class_counts_.size(); }
    std::uint64_t categorized_total() const noexcept { return categorized_total_; }

private:
    std::vector<std::uint64_t> class_counts_;
    std::uint64_t categorized_total_;
};

struct PosteriorPair {
    GammaParams abundance;
    DirichletParams composition;
};

struct Interval {
    double lower;
    double upper;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Gamma(alpha + n, beta + mA).
GammaParams update_abundance(const GammaParams& prior, const FieldObservations& obs);

// Dir(gamma + s_bar).
DirichletParams update_composition(const DirichletParams& prior, const CategorizationCounts& cats);

// Both updates; rejects a categorised total above the counted total.
PosteriorPair update_posterior(const GammaParams& abundance_prior, const DirichletParams& composition_prior,
                               const FieldObservations& obs, const CategorizationCounts& cats);

// n / (mA), the current-practice point estimate.
double naive_abundance_estimate(const FieldObservations& obs);

// Shortest interval holding `mass` of a Gamma density. For shape <= 1 the
// density is monotone and the interval starts at 0. Throws ConvergenceError if
// the level search does not reach the requested mass within 1e-8.
Interval hpd_interval(const GammaParams& params, double mass);

// Pointwise Gamma density. Points outside the support throw, naming the point.
std::vector<double> density_grid(const GammaParams& params, std::span<const double> grid);

// Marginal density of component `index`, i.e. Beta(gamma_i, gamma_0 - gamma_i).
std::vector<double> density_grid(const DirichletParams& params, std::size_t index,
                                 std::span<const double> grid);

// Integer apportionment of `total` by largest remainder; ties go to the lower
// index. The result always sums to `total`.
std::vector<std::uint64_t> apportion(std::uint64_t total, std::span<const double> proportions);

struct SyntheticCampaign {
    FieldObservations observations;
    CategorizationCounts categorized;
    double categorization_fraction;
};

// "Expected observation" data for a fixed truth: n = floor(m A Lambda) spread
// evenly over the quadrants, q from the budget, n_bar = floor(n q), and class
// counts apportioned from the true proportions.
SyntheticCampaign synthesize_expected_data(double true_abundance, std::span<const double> true_proportions,
                                           unsigned quadrants, double quadrant_area, const CostModel& cost);

// Same, starting from a stated total count n instead of a true abundance.
SyntheticCampaign synthesize_from_total(std::uint64_t total_count, std::span<const double> true_proportions,
                                        unsigned quadrants, double quadrant_area, const CostModel& cost);

}  // namespace mpdesign
