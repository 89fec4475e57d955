#include "mpdesign/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/negative_binomial.hpp>

namespace mpdesign {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Below this many trials the binomial is drawn as a sum of Bernoullis.
constexpr std::uint64_t kDirectBinomialTrials = 32;

std::uint64_t bernoulli_count(std::uint64_t trials, double probability, RandomStream& stream) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        if (stream.uniform() < probability) ++hits;
    }
    return hits;
}

// Transformed rejection with squeeze (Hoermann's PTRS), valid for mean >= 10.
std::uint64_t poisson_ptrs(double mean, RandomStream& stream) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = stream.uniform() - 0.5;
        const double v = stream.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::uint64_t>(k);
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace

GammaParams::GammaParams(double shape, double rate) : shape_(shape), rate_(rate) {
    if (!positive_finite(shape) || !positive_finite(rate)) {
        throw std::invalid_argument("GammaParams: shape and rate must be positive and finite (got shape=" +
                                    std::to_string(shape) + ", rate=" + std::to_string(rate) + ")");
    }
}

namespace {

// Double-double accumulation (Dekker/Knuth). Exact whenever the running sum
// fits in 106 bits, which covers any realistic prior plus data.
struct Compensated {
    double hi;
    double lo;
};

Compensated two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

Compensated fast_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

Compensated add(Compensated x, Compensated y) {
    auto s = two_sum(x.hi, y.hi);
    auto t = two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = fast_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return fast_two_sum(s.hi, s.lo);
}

Compensated exact_product(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace

GammaParams GammaParams::updated(std::uint64_t count, std::uint64_t quadrants, double quadrant_area) const {
    const auto shape = add({shape_, shape_residue_}, {static_cast<double>(count), 0.0});
    const auto rate = add({rate_, rate_residue_}, exact_product(static_cast<double>(quadrants), quadrant_area));
    GammaParams out(shape.hi, rate.hi);
    out.shape_residue_ = shape.lo;
    out.rate_residue_ = rate.lo;
    return out;
}

std::optional<double> GammaParams::mode() const noexcept {
    if (shape_ < 1.0) return std::nullopt;
    return (shape_ - 1.0) / rate_;
}

DirichletParams::DirichletParams(std::vector<double> concentration)
    : concentration_(std::move(concentration)), total_(0.0) {
    if (concentration_.size() < 2) {
        throw std::invalid_argument("DirichletParams: need at least 2 categories (got " +
                                    std::to_string(concentration_.size()) + ")");
    }
    for (std::size_t i = 0; i < concentration_.size(); ++i) {
        if (!positive_finite(concentration_[i])) {
            throw std::invalid_argument("DirichletParams: concentration[" + std::to_string(i) +
                                        "] must be positive and finite");
        }
    }
    total_ = std::accumulate(concentration_.begin(), concentration_.end(), 0.0);
}

std::vector<double> DirichletParams::mean() const {
    std::vector<double> theta(concentration_.size());
    std::transform(concentration_.begin(), concentration_.end(), theta.begin(),
                   [this](double g) { return g / total_; });
    return theta;
}

DirichletParams DirichletParams::updated(std::span<const std::uint64_t> counts) const {
    if (counts.size() != concentration_.size()) {
        throw std::invalid_argument("DirichletParams::updated: " + std::to_string(counts.size()) +
                                    " counts for " + std::to_string(concentration_.size()) + " categories");
    }
    std::vector<double> hi(counts.size()), lo(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double residue = residues_.empty() ? 0.0 : residues_[i];
        const auto sum = add({concentration_[i], residue}, {static_cast<double>(counts[i]), 0.0});
        hi[i] = sum.hi;
        lo[i] = sum.lo;
    }
    DirichletParams out(std::move(hi));
    out.residues_ = std::move(lo);
    return out;
}

DirichletParams DirichletParams::symmetric(std::size_t k, double value) {
    return DirichletParams(std::vector<double>(k, value));
}

double gamma_sample(const GammaParams& params, RandomStream& stream) {
    // Marsaglia-Tsang squeeze for shape >= 1; boost shape < 1 via
    // Gamma(a) = Gamma(a + 1) * U^(1/a).
    const double shape = params.shape();
    const bool boosted = shape < 1.0;
    const double d = (boosted ? shape + 1.0 : shape) - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double draw = 0.0;
    for (;;) {
        const double x = stream.standard_normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2 ||
            std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            draw = d * v;
            break;
        }
    }
    if (boosted) {
        draw *= std::pow(stream.uniform(), 1.0 / shape);
    }
    return draw / params.rate();
}

std::uint64_t poisson_sample(double mean, RandomStream& stream) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson_sample: mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;
    if (mean >= 10.0) return poisson_ptrs(mean, stream);
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double product = stream.uniform();
    while (product > limit) {
        ++k;
        product *= stream.uniform();
    }
    return k;
}

std::uint64_t binomial_sample(std::uint64_t trials, double probability, RandomStream& stream) {
    if (!(probability >= 0.0 && probability <= 1.0)) {
        throw std::invalid_argument("binomial_sample: probability must lie in [0, 1]");
    }
    // Knuth's order-statistic recursion: the a-th smallest of n uniforms is
    // Beta(a, n + 1 - a); conditioning on which side of it p falls leaves a
    // smaller binomial problem.
    std::uint64_t accumulated = 0;
    double p = probability;
    std::uint64_t n = trials;
    while (n > kDirectBinomialTrials && p > 0.0 && p < 1.0) {
        const std::uint64_t a = 1 + n / 2;
        const std::uint64_t b = n + 1 - a;
        const double ga = gamma_sample(GammaParams(static_cast<double>(a), 1.0), stream);
        const double gb = gamma_sample(GammaParams(static_cast<double>(b), 1.0), stream);
        const double x = ga / (ga + gb);
        if (x >= p) {
            n = a - 1;
            p = p / x;
        } else {
            accumulated += a;
            n = b - 1;
            p = (p - x) / (1.0 - x);
        }
    }
    if (p <= 0.0) return accumulated;
    if (p >= 1.0) return accumulated + n;
    return accumulated + bernoulli_count(n, p, stream);
}

std::uint64_t predictive_total_count(const GammaParams& prior, double total_area,
                                     RandomStream& stream) {
    if (!(total_area >= 0.0) || !std::isfinite(total_area)) {
        throw std::invalid_argument("predictive_total_count: total_area must be finite and >= 0");
    }
    if (total_area == 0.0) return 0;
    const double lambda = gamma_sample(prior, stream);
    return poisson_sample(total_area * lambda, stream);
}

std::uint64_t predictive_total_count_quantile(const GammaParams& prior, double total_area,
                                              double probability) {
    if (!(probability > 0.0 && probability < 1.0)) {
        throw std::invalid_argument("predictive_total_count_quantile: probability must lie in (0, 1)");
    }
    if (!(total_area >= 0.0) || !std::isfinite(total_area)) {
        throw std::invalid_argument("predictive_total_count_quantile: total_area must be finite and >= 0");
    }
    if (total_area == 0.0) return 0;
    using namespace boost::math::policies;
    using Policy = policy<discrete_quantile<integer_round_up>>;
    const boost::math::negative_binomial_distribution<double, Policy> predictive(
        prior.shape(), prior.rate() / (prior.rate() + total_area));
    return static_cast<std::uint64_t>(boost::math::quantile(predictive, probability));
}

std::vector<double> dirichlet_sample(const DirichletParams& params, RandomStream& stream) {
    std::vector<double> draw(params.size());
    for (std::size_t i = 0; i < draw.size(); ++i) {
        draw[i] = gamma_sample(GammaParams(params[i], 1.0), stream);
    }
    const double total = std::accumulate(draw.begin(), draw.end(), 0.0);
    for (auto& x : draw) x /= total;
    return draw;
}

std::vector<std::uint64_t> multinomial_sample(std::uint64_t trials,
                                              std::span<const double> probabilities,
                                              RandomStream& stream) {
    std::vector<std::uint64_t> counts(probabilities.size(), 0);
    double remaining_mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    std::uint64_t remaining = trials;
    for (std::size_t i = 0; i + 1 < probabilities.size() && remaining > 0; ++i) {
        const double p = remaining_mass > 0.0 ? std::clamp(probabilities[i] / remaining_mass, 0.0, 1.0) : 0.0;
        counts[i] = binomial_sample(remaining, p, stream);
        remaining -= counts[i];
        remaining_mass -= probabilities[i];
    }
    if (!counts.empty()) counts.back() += remaining;
    return counts;
}

double dirichlet_cov_trace(const DirichletParams& params) {
    double sum_sq = 0.0;
    for (double g : params.concentration()) {
        const double theta = g / params.total();
        sum_sq += theta * theta;
    }
    return (1.0 - sum_sq) / (1.0 + params.total());
}

std::vector<CategoryMoments> dirichlet_multinomial_moments(const DirichletParams& params,
                                                           std::uint64_t trials) {
    const double n = static_cast<double>(trials);
    const double g0 = params.total();
    const double inflation = (n + g0) / (1.0 + g0);
    std::vector<CategoryMoments> moments;
    moments.reserve(params.size());
    for (double g : params.concentration()) {
        const double theta = g / g0;
        moments.push_back({n * theta, n * theta * (1.0 - theta) * inflation});
    }
    return moments;
}

}  // namespace mpdesign
