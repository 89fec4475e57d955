#include "mpdesign/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace mpdesign {

namespace {

constexpr double kMassTolerance = 1e-8;
constexpr int kMaxLevelIterations = 400;

std::string describe_point(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Bisection on a monotone predicate over doubles: returns the boundary between
// `inside` (predicate true) and `outside` to the last representable bit.
template <typename Pred>
double bisect_boundary(double inside, double outside, Pred is_inside) {
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        (is_inside(mid) ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
}

}  // namespace

FieldObservations::FieldObservations(double quadrant_area, std::vector<std::uint64_t> counts)
    : quadrant_area_(quadrant_area), counts_(std::move(counts)), total_count_(0) {
    if (!(std::isfinite(quadrant_area) && quadrant_area > 0.0)) {
        throw std::invalid_argument("FieldObservations: quadrant_area must be positive");
    }
    if (counts_.empty()) {
        throw std::invalid_argument("FieldObservations: need at least one quadrant");
    }
    total_count_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

CategorizationCounts::CategorizationCounts(std::vector<std::uint64_t> class_counts)
    : class_counts_(std::move(class_counts)),
      categorized_total_(std::accumulate(class_counts_.begin(), class_counts_.end(), std::uint64_t{0})) {}

GammaParams update_abundance(const GammaParams& prior, const FieldObservations& obs) {
    return prior.updated(obs.total_count(), obs.quadrants(), obs.quadrant_area());
}

DirichletParams update_composition(const DirichletParams& prior, const CategorizationCounts& cats) {
    if (cats.size() != prior.size()) {
        throw std::invalid_argument("update_composition: " + std::to_string(cats.size()) +
                                    " class counts for a prior over " + std::to_string(prior.size()) + " classes");
    }
    return prior.updated(cats.class_counts());
}

PosteriorPair update_posterior(const GammaParams& abundance_prior, const DirichletParams& composition_prior,
                               const FieldObservations& obs, const CategorizationCounts& cats) {
    if (cats.categorized_total() > obs.total_count()) {
        throw std::invalid_argument("categorised total " + std::to_string(cats.categorized_total()) +
                                    " exceeds suspected total " + std::to_string(obs.total_count()));
    }
    return {update_abundance(abundance_prior, obs), update_composition(composition_prior, cats)};
}

double naive_abundance_estimate(const FieldObservations& obs) {
    return static_cast<double>(obs.total_count()) / obs.total_area();
}

Interval hpd_interval(const GammaParams& params, double mass) {
    if (!(mass > 0.0 && mass < 1.0)) {
        throw std::invalid_argument("hpd_interval: mass must lie in (0, 1)");
    }
    const double a = params.shape();
    const double b = params.rate();
    if (a <= 1.0) {
        return {0.0, boost::math::gamma_p_inv(a, mass) / b};
    }

    // Work with the unnormalised log density g(x) = (a-1) ln x - b x, which
    // rises on (0, mode) and falls on (mode, inf). A level g(mode) - drop cuts
    // the density at one point on each side.
    const double mode = (a - 1.0) / b;
    auto log_density = [a, b](double x) { return (a - 1.0) * std::log(x) - b * x; };
    const double peak = log_density(mode);

    auto endpoints = [&](double drop) {
        const double level = peak - drop;
        const double lower =
            bisect_boundary(mode, 0.0, [&](double x) { return x > 0.0 && log_density(x) >= level; });
        double far = mode * 2.0 + 1.0 / b;
        while (log_density(far) >= level) far *= 2.0;
        const double upper = bisect_boundary(mode, far, [&](double x) { return log_density(x) >= level; });
        return Interval{lower, upper};
    };
    auto mass_of = [&](const Interval& iv) {
        return boost::math::gamma_p(a, b * iv.upper) - boost::math::gamma_p(a, b * iv.lower);
    };

    double low_drop = 0.0;
    double high_drop = 1.0;
    int expansions = 0;
    while (mass_of(endpoints(high_drop)) < mass) {
        high_drop *= 2.0;
        if (++expansions > 64) {
            throw ConvergenceError("hpd_interval: could not bracket mass " + describe_point(mass) +
                                   " for Gamma(shape=" + describe_point(a) + ", rate=" + describe_point(b) + ")");
        }
    }

    Interval best = endpoints(high_drop);
    double best_mass = mass_of(best);
    for (int i = 0; i < kMaxLevelIterations; ++i) {
        const double drop = 0.5 * (low_drop + high_drop);
        const Interval iv = endpoints(drop);
        const double m = mass_of(iv);
        if (std::fabs(m - mass) < std::fabs(best_mass - mass)) {
            best = iv;
            best_mass = m;
        }
        if (std::fabs(m - mass) <= 1e-14 || drop == low_drop || drop == high_drop) break;
        (m < mass ? low_drop : high_drop) = drop;
    }
    if (std::fabs(best_mass - mass) > kMassTolerance) {
        throw ConvergenceError("hpd_interval: level search stalled at mass " + describe_point(best_mass) +
                               " (target " + describe_point(mass) + ") for Gamma(shape=" + describe_point(a) +
                               ", rate=" + describe_point(b) + "), interval [" + describe_point(best.lower) +
                               ", " + describe_point(best.upper) + "]");
    }
    return best;
}

std::vector<double> density_grid(const GammaParams& params, std::span<const double> grid) {
    const boost::math::gamma_distribution<double> dist(params.shape(), 1.0 / params.rate());
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid) {
        const bool at_zero_unbounded = x == 0.0 && params.shape() < 1.0;
        if (!std::isfinite(x) || x < 0.0 || at_zero_unbounded) {
            throw std::domain_error("density_grid: point " + describe_point(x) +
                                    " is outside the Gamma support");
        }
        if (x == 0.0) {
            out.push_back(params.shape() == 1.0 ? params.rate() : 0.0);
        } else {
            out.push_back(boost::math::pdf(dist, x));
        }
    }
    return out;
}

std::vector<double> density_grid(const DirichletParams& params, std::size_t index, std::span<const double> grid) {
    if (index >= params.size()) {
        throw std::out_of_range("density_grid: component " + std::to_string(index) + " out of range");
    }
    const double a = params[index];
    const double b = params.total() - a;
    const boost::math::beta_distribution<double> dist(a, b);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid) {
        const bool unbounded = (x == 0.0 && a < 1.0) || (x == 1.0 && b < 1.0);
        if (!std::isfinite(x) || x < 0.0 || x > 1.0 || unbounded) {
            throw std::domain_error("density_grid: point " + describe_point(x) +
                                    " is outside the Beta marginal support");
        }
        out.push_back(boost::math::pdf(dist, x));
    }
    return out;
}

std::vector<std::uint64_t> apportion(std::uint64_t total, std::span<const double> proportions) {
    std::vector<std::uint64_t> counts(proportions.size(), 0);
    if (proportions.empty()) return counts;
    std::vector<double> remainders(proportions.size());
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < proportions.size(); ++i) {
        const double share = static_cast<double>(total) * proportions[i];
        counts[i] = static_cast<std::uint64_t>(std::floor(share));
        remainders[i] = share - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(proportions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return remainders[l] > remainders[r]; });
    // Floors can only undershoot, and by fewer than k units.
    for (std::size_t j = 0; assigned < total; j = (j + 1) % order.size()) {
        ++counts[order[j]];
        ++assigned;
    }
    return counts;
}

SyntheticCampaign synthesize_from_total(std::uint64_t total_count, std::span<const double> true_proportions,
                                        unsigned quadrants, double quadrant_area, const CostModel& cost) {
    if (quadrants == 0) {
        throw std::invalid_argument("synthesize_expected_data: need at least one quadrant");
    }
    double sum = 0.0;
    for (double p : true_proportions) {
        if (!(p >= 0.0)) throw std::invalid_argument("synthesize_expected_data: proportions must be >= 0");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("synthesize_expected_data: proportions must sum to 1");
    }
    std::vector<std::uint64_t> counts(quadrants, total_count / quadrants);
    for (unsigned j = 0; j < total_count % quadrants; ++j) ++counts[j];
    FieldObservations obs(quadrant_area, std::move(counts));

    const double q = categorization_fraction(cost, obs.total_area(), total_count);
    const std::uint64_t n_bar = categorized_count(total_count, q);
    return {std::move(obs), CategorizationCounts(apportion(n_bar, true_proportions)), q};
}

SyntheticCampaign synthesize_expected_data(double true_abundance, std::span<const double> true_proportions,
                                           unsigned quadrants, double quadrant_area, const CostModel& cost) {
    if (!(std::isfinite(true_abundance) && true_abundance >= 0.0)) {
        throw std::invalid_argument("synthesize_expected_data: abundance must be finite and >= 0");
    }
    const double expected = static_cast<double>(quadrants) * quadrant_area * true_abundance;
    return synthesize_from_total(floor_count(expected), true_proportions, quadrants, quadrant_area, cost);
}

}  // namespace mpdesign
