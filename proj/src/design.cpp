#include "mpdesign/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mpdesign/loss.hpp"
#include "mpdesign/running_mean.hpp"

namespace mpdesign {

namespace {

constexpr std::uint64_t kMinDraws = 1000;
constexpr std::uint64_t kRecommendedDraws = 10000;

unsigned resolve_threads(unsigned requested, std::size_t jobs) {
    unsigned threads = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on up to `threads` workers.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
    const unsigned workers = resolve_threads(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < count; i = next++) job(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::vector<std::string> DesignConfig::validate() const {
    if (mc_draws < kMinDraws) {
        throw std::invalid_argument("mc_draws must be at least 1000 (got " + std::to_string(mc_draws) + ")");
    }
    if (!(abundance_weight >= 0.0 && abundance_weight <= 1.0)) {
        throw std::invalid_argument("abundance_weight must lie in [0, 1]");
    }
    std::vector<std::string> warnings = cost.warnings();
    if (mc_draws < kRecommendedDraws) {
        warnings.emplace_back("mc_draws below 10000; Monte Carlo error may hide near-ties");
    }
    return warnings;
}

DesignPoint expected_total_loss(unsigned quadrants, const DesignConfig& config) {
    RandomStream stream(config.seed, {static_cast<std::uint64_t>(quadrants)});
    return expected_total_loss(quadrants, config, stream);
}

DesignPoint expected_total_loss(unsigned quadrants, const DesignConfig& config, RandomStream& stream) {
    if (quadrants > max_quadrants(config.cost)) {
        throw std::out_of_range("design m=" + std::to_string(quadrants) + " exceeds the feasible maximum " +
                                std::to_string(max_quadrants(config.cost)));
    }
    config.validate();
    const double area = static_cast<double>(quadrants) * config.cost.quadrant_area();
    const double l1 = l1_expected(quadrants, config.abundance_prior, config.cost.quadrant_area());

    double e_l2 = 1.0;
    double e_l2_se = 0.0;
    if (quadrants > 0) {
        RunningMean acc;
        for (std::uint64_t i = 0; i < config.mc_draws; ++i) {
            const auto n = predictive_total_count(config.abundance_prior, area, stream);
            const double q = categorization_fraction(config.cost, area, n);
            acc.add(l2_expected(categorized_count(n, q), config.composition_prior));
        }
        e_l2 = acc.mean();
        e_l2_se = acc.standard_error();
    }
    const double w = config.abundance_weight;
    return DesignPoint{quadrants, area, l1, e_l2, e_l2_se, w * l1 + (1.0 - w) * e_l2, (1.0 - w) * e_l2_se};
}

TypicalOutcome typical_outcome(unsigned quadrants, const DesignConfig& config) {
    const CostModel& cost = config.cost;
    const double area = static_cast<double>(quadrants) * cost.quadrant_area();
    const auto n = predictive_total_count_quantile(config.abundance_prior, area, 0.5);
    const double q = categorization_fraction(cost, area, n);
    const auto n_bar = categorized_count(n, q);
    const double budget = cost.budget_area();
    TypicalOutcome out{n, q, n_bar, area / budget, cost.count_ratio() * static_cast<double>(n) / budget,
                       cost.categorize_ratio() * static_cast<double>(n_bar) / budget, 0.0};
    out.slack = budget_slack(cost, area, n, q);
    return out;
}

std::string categorization_policy(unsigned quadrants, const CostModel& cost) {
    const double area = static_cast<double>(quadrants) * cost.quadrant_area();
    std::ostringstream os;
    os.precision(10);
    os << "after counting n suspected particles over " << area << " m^2, categorise floor(n*q) with q = "
       << "clamp((" << cost.budget_area() << " - (" << area << " + " << cost.count_ratio() << "*n)) / ("
       << cost.categorize_ratio() << "*n), 0, 1); q = 1 when n = 0";
    return os.str();
}

DesignResult optimize_design(const DesignConfig& config, std::span<const std::uint64_t> label_prefix,
                             unsigned threads) {
    config.validate();
    const auto designs = feasible_designs(config.cost);
    if (designs.size() < 2) {
        throw std::invalid_argument("infeasible budget: no quadrant can be sampled (budget " +
                                    std::to_string(config.cost.budget_quadrants()) + " quadrant equivalents)");
    }
    const RandomStream root(config.seed, label_prefix);
    DesignCurve curve;
    curve.rows.resize(designs.size());
    parallel_for(designs.size(), threads, [&](std::size_t i) {
        RandomStream stream = root.substream(designs[i]);
        curve.rows[i] = expected_total_loss(designs[i], config, stream);
    });

    const auto best = std::min_element(curve.rows.begin(), curve.rows.end(),
                                       [](const DesignPoint& l, const DesignPoint& r) { return l.l_star < r.l_star; });
    const unsigned m_star = best->quadrants;
    return DesignResult{m_star, std::move(curve), typical_outcome(m_star, config),
                        categorization_policy(m_star, config.cost)};
}

std::vector<PerformanceRow> performance_curve(unsigned quadrants, std::span<const double> abundance_grid,
                                              const DesignConfig& config) {
    if (quadrants > max_quadrants(config.cost)) {
        throw std::out_of_range("design m=" + std::to_string(quadrants) + " exceeds the feasible maximum " +
                                std::to_string(max_quadrants(config.cost)));
    }
    const double area = static_cast<double>(quadrants) * config.cost.quadrant_area();
    std::vector<PerformanceRow> rows;
    rows.reserve(abundance_grid.size());
    for (double lambda : abundance_grid) {
        if (!(std::isfinite(lambda) && lambda >= 0.0)) {
            throw std::invalid_argument("performance_curve: abundance values must be finite and >= 0");
        }
        const auto n = floor_count(area * lambda);
        const double q = categorization_fraction(config.cost, area, n);
        const auto n_bar = categorized_count(n, q);
        rows.push_back({lambda, n, q, n_bar, l2_expected(n_bar, config.composition_prior)});
    }
    return rows;
}

std::vector<double> default_abundance_grid(const GammaParams& prior, std::size_t points) {
    if (points == 0) return {};
    const double top = 4.0 * prior.mode().value_or(prior.mean());
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = top * static_cast<double>(i + 1) / static_cast<double>(points);
    }
    return grid;
}

DesignConfig apply_axis(const DesignConfig& base, SensitivityAxis axis, double value) {
    DesignConfig config = base;
    switch (axis) {
        case SensitivityAxis::CategorizeRatioMultiplier:
            config.cost = base.cost.with_categorize_ratio(base.cost.categorize_ratio() * value);
            break;
        case SensitivityAxis::Budget:
            config.cost = base.cost.with_budget(BudgetSpec{value});
            break;
        case SensitivityAxis::PriorMode: {
            const double shape = base.abundance_prior.shape();
            if (!(shape > 1.0)) {
                throw std::invalid_argument("prior-mode sweep needs a prior shape > 1");
            }
            if (!(std::isfinite(value) && value > 0.0)) {
                throw std::invalid_argument("prior-mode sweep values must be positive");
            }
            config.abundance_prior = GammaParams(shape, (shape - 1.0) / value);
            break;
        }
    }
    return config;
}

std::vector<SweepRow> sensitivity_sweep(const DesignConfig& base, SensitivityAxis axis,
                                        std::span<const double> values, unsigned threads) {
    if (values.empty()) {
        throw std::invalid_argument("sensitivity_sweep: no values given");
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const DesignConfig config = apply_axis(base, axis, values[i]);
        const std::uint64_t prefix[] = {static_cast<std::uint64_t>(i)};
        DesignResult result = optimize_design(config, prefix, threads);
        const TypicalOutcome typical = result.typical;
        rows.push_back({values[i], result.m_star, typical.total_count, typical.categorized, typical.slack,
                        std::move(result)});
    }
    return rows;
}

}  // namespace mpdesign
