#include "mpdesign/cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace mpdesign {

namespace {

// Products such as 5 * 0.0625 * 80 land a few ulps away from the integer they
// represent; this much is treated as representation error before flooring.
constexpr double kFloorSlack = 1e-9;

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double canonical_ratio(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return std::strtod(buffer, nullptr);
}

CostModel::CostModel(double quadrant_area, BudgetSpec budget, double count_ratio, double categorize_ratio)
    : quadrant_area_(quadrant_area),
      budget_quadrants_(budget.quadrant_equivalents),
      count_ratio_(count_ratio),
      categorize_ratio_(categorize_ratio) {
    require(std::isfinite(quadrant_area) && quadrant_area > 0.0, "CostModel: quadrant_area must be positive");
    require(std::isfinite(budget_quadrants_) && budget_quadrants_ > 0.0,
            "CostModel: budget_quadrant_equivalents must be positive");
    require(std::isfinite(count_ratio) && count_ratio >= 0.0, "CostModel: count_ratio must be >= 0");
    require(std::isfinite(categorize_ratio) && categorize_ratio > 0.0,
            "CostModel: categorize_ratio must be positive");
}

CostModel CostModel::from_raw(double quadrant_area, const RawCosts& raw) {
    require(std::isfinite(raw.area_cost) && raw.area_cost > 0.0, "RawCosts: area_cost must be positive");
    require(std::isfinite(raw.budget) && raw.budget > 0.0, "RawCosts: budget must be positive");
    require(std::isfinite(quadrant_area) && quadrant_area > 0.0, "CostModel: quadrant_area must be positive");
    const double budget_quadrants = canonical_ratio(raw.budget / (raw.area_cost * quadrant_area));
    return CostModel(quadrant_area, BudgetSpec{budget_quadrants}, canonical_ratio(raw.count_cost / raw.area_cost),
                     canonical_ratio(raw.categorize_cost / raw.area_cost));
}

std::vector<std::string> CostModel::warnings() const {
    std::vector<std::string> out;
    if (budget_area() < quadrant_area_) {
        out.emplace_back("budget admits no quadrant: 1/c < A");
    }
    return out;
}

CostModel CostModel::with_budget(BudgetSpec budget) const {
    return CostModel(quadrant_area_, budget, count_ratio_, categorize_ratio_);
}

CostModel CostModel::with_categorize_ratio(double categorize_ratio) const {
    return CostModel(quadrant_area_, BudgetSpec{budget_quadrants_}, count_ratio_, categorize_ratio);
}

std::uint64_t floor_count(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("floor_count: value must be finite and >= 0");
    }
    return static_cast<std::uint64_t>(std::floor(value + kFloorSlack));
}

std::uint64_t categorized_count(std::uint64_t total_count, double fraction) {
    return floor_count(static_cast<double>(total_count) * fraction);
}

double normalized_cost(const CostModel& cost, double total_area, std::uint64_t total_count, double fraction) {
    const double n = static_cast<double>(total_count);
    const double n_bar = static_cast<double>(categorized_count(total_count, fraction));
    return (total_area + cost.count_ratio() * n + cost.categorize_ratio() * n_bar) / cost.budget_area();
}

double categorization_fraction(const CostModel& cost, double total_area, std::uint64_t total_count) {
    if (total_count == 0) return 1.0;
    const double n = static_cast<double>(total_count);
    const double q = (cost.budget_area() - (total_area + n * cost.count_ratio())) / (cost.categorize_ratio() * n);
    return std::max(0.0, std::min(1.0, q));
}

unsigned max_quadrants(const CostModel& cost) {
    return static_cast<unsigned>(std::floor(cost.budget_quadrants() + kFloorSlack));
}

std::vector<unsigned> feasible_designs(const CostModel& cost) {
    std::vector<unsigned> designs(max_quadrants(cost) + 1);
    for (unsigned m = 0; m < designs.size(); ++m) designs[m] = m;
    return designs;
}

double budget_slack(const CostModel& cost, double total_area, std::uint64_t total_count, double fraction) {
    return 1.0 - normalized_cost(cost, total_area, total_count, fraction);
}

}  // namespace mpdesign
