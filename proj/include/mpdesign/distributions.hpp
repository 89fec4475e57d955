#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mpdesign/random_stream.hpp"

namespace mpdesign {

// Gamma distribution in the shape/RATE parametrisation:
//   density(x) = rate^shape x^(shape-1) exp(-rate x) / Gamma(shape).
// For the abundance Lambda (MP per m^2) the rate carries units of m^2, which is
// why the posterior rate is prior rate + sampled area.
class GammaParams {
public:
    GammaParams(double shape, double rate);

    double shape() const noexcept { return shape_; }
    double rate() const noexcept { return rate_; }
    double mean() const noexcept { return shape_ / rate_; }
    double variance() const noexcept { return shape_ / (rate_ * rate_); }
    // Defined only for shape >= 1.
    std::optional<double> mode() const noexcept;

    // Conjugate Poisson update: shape + count, rate + quadrants * quadrant_area.
    // Both running sums keep their rounding residue (double-double), so
    // updating batch by batch gives the same parameters as one joint update.
    GammaParams updated(std::uint64_t count, std::uint64_t quadrants, double quadrant_area) const;

    // Compares the parameters, not the stored residues.
    bool operator==(const GammaParams& other) const noexcept {
        return shape_ == other.shape_ && rate_ == other.rate_;
    }

private:
    double shape_;
    double rate_;
    double shape_residue_ = 0.0;
    double rate_residue_ = 0.0;
};

// Dirichlet concentration vector gamma = (gamma_1, ..., gamma_k), k >= 2.
class DirichletParams {
public:
    explicit DirichletParams(std::vector<double> concentration);

    std::size_t size() const noexcept { return concentration_.size(); }
    std::span<const double> concentration() const noexcept { return concentration_; }
    double operator[](std::size_t i) const { return concentration_.at(i); }
    double total() const noexcept { return total_; }
    std::vector<double> mean() const;

    static DirichletParams symmetric(std::size_t k, double value);

    // Conjugate Multinomial update gamma_i + counts_i, with the same residue
    // bookkeeping as GammaParams::updated.
    DirichletParams updated(std::span<const std::uint64_t> counts) const;

    bool operator==(const DirichletParams& other) const noexcept {
        return concentration_ == other.concentration_;
    }

private:
    std::vector<double> concentration_;
    std::vector<double> residues_;
    double total_;
};

double gamma_sample(const GammaParams& params, RandomStream& stream);

std::uint64_t poisson_sample(double mean, RandomStream& stream);

std::uint64_t binomial_sample(std::uint64_t trials, double probability, RandomStream& stream);

// One draw of N = sum_j N_j from the Poisson-Gamma prior predictive over a
// total sampled area: lambda ~ Gamma(prior), then N ~ Poisson(area * lambda).
// An area of zero yields 0 without consuming the stream.
std::uint64_t predictive_total_count(const GammaParams& prior, double total_area,
                                     RandomStream& stream);

// Smallest n with P(N <= n) >= probability under the Poisson-Gamma predictive
// (a negative binomial with size = shape, success prob = rate/(rate + area)).
std::uint64_t predictive_total_count_quantile(const GammaParams& prior, double total_area,
                                              double probability);

std::vector<double> dirichlet_sample(const DirichletParams& params, RandomStream& stream);

std::vector<std::uint64_t> multinomial_sample(std::uint64_t trials,
                                              std::span<const double> probabilities,
                                              RandomStream& stream);

// Tr(Sigma_0) = (1 - sum theta_i^2) / (1 + gamma_0), theta = gamma / gamma_0.
double dirichlet_cov_trace(const DirichletParams& params);

struct CategoryMoments {
    double mean;
    double variance;
};

// Per-category moments of the Dirichlet-Multinomial predictive for n trials.
std::vector<CategoryMoments> dirichlet_multinomial_moments(const DirichletParams& params,
                                                           std::uint64_t trials);

}  // namespace mpdesign
