#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpdesign/cost.hpp"
#include "mpdesign/distributions.hpp"
#include "mpdesign/random_stream.hpp"

namespace mpdesign {

struct DesignConfig {
    GammaParams abundance_prior;
    DirichletParams composition_prior;
    CostModel cost;
    std::uint64_t mc_draws = 10000;
    std::uint64_t seed = 0;
    // Weight of the abundance loss in L*; the composition loss gets the rest.
    // Experimental: the design criterion is defined with 1/2 and 1/2.
    double abundance_weight = 0.5;

    // Throws for draws < 1000 or a weight outside [0, 1]; returns soft warnings.
    std::vector<std::string> validate() const;

    bool operator==(const DesignConfig&) const = default;
};

// One row of the design curve.
struct DesignPoint {
    unsigned quadrants;
    double sampled_area;
    double l1_expected;
    double e_l2_expected;
    double e_l2_se;
    double l_star;
    double l_star_se;

    bool operator==(const DesignPoint&) const = default;
};

struct DesignCurve {
    std::vector<DesignPoint> rows;

    bool operator==(const DesignCurve&) const = default;
};

// What a design implies at the predictive-median total count.
struct TypicalOutcome {
    std::uint64_t total_count;
    double fraction;
    std::uint64_t categorized;
    double sampling_share;
    double counting_share;
    double categorization_share;
    double slack;

    bool operator==(const TypicalOutcome&) const = default;
};

struct DesignResult {
    unsigned m_star;
    DesignCurve curve;
    TypicalOutcome typical;
    std::string q_policy_note;

    bool operator==(const DesignResult&) const = default;
};

struct PerformanceRow {
    double abundance;
    std::uint64_t total_count;
    double fraction;
    std::uint64_t categorized;
    double l2_expected;
};

enum class SensitivityAxis { CategorizeRatioMultiplier, Budget, PriorMode };

struct SweepRow {
    double value;
    unsigned m_star;
    std::uint64_t typical_total;
    std::uint64_t typical_categorized;
    double budget_slack;
    DesignResult result;
};

// L*(m) = w L1*(m) + (1 - w) E_N[L2*(q(mA, N))], the expectation taken by
// Monte Carlo over the Poisson-Gamma predictive of N. The first overload draws
// from the substream labelled m.
DesignPoint expected_total_loss(unsigned quadrants, const DesignConfig& config);
DesignPoint expected_total_loss(unsigned quadrants, const DesignConfig& config, RandomStream& stream);

// Evaluates every feasible m on substream (label_prefix..., m) and returns the
// minimiser (smallest m on ties). `threads` = 0 uses the hardware concurrency;
// results do not depend on it.
DesignResult optimize_design(const DesignConfig& config, std::span<const std::uint64_t> label_prefix = {},
                             unsigned threads = 0);

TypicalOutcome typical_outcome(unsigned quadrants, const DesignConfig& config);

std::string categorization_policy(unsigned quadrants, const CostModel& cost);

// Deterministic second-stage behaviour of design m when the truth is Lambda:
// n = floor(m A Lambda), q(mA, n), n_bar = floor(n q), L2*(n_bar).
std::vector<PerformanceRow> performance_curve(unsigned quadrants, std::span<const double> abundance_grid,
                                              const DesignConfig& config);

// `points` evenly spaced values over (0, 4 * prior mode] (4 * prior mean when
// the mode is undefined).
std::vector<double> default_abundance_grid(const GammaParams& prior, std::size_t points = 200);

DesignConfig apply_axis(const DesignConfig& base, SensitivityAxis axis, double value);

// One optimize_design per value, value i drawing from substreams (i, m).
std::vector<SweepRow> sensitivity_sweep(const DesignConfig& base, SensitivityAxis axis,
                                        std::span<const double> values, unsigned threads = 0);

}  // namespace mpdesign
