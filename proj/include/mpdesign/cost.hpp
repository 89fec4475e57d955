#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpdesign {

// Remaining budget (after fixed costs) expressed as the number of quadrants
// that could be sampled if every unit went to field sampling.
struct BudgetSpec {
    double quadrant_equivalents;
};

// Raw effort costs in any common unit: per m^2 sampled (c2), per particle
// counted (c3), per particle categorised (c4), and the remaining budget b_t.
// Fixed cost c0 and per-sample cost c1 are kept for the record only and never
// enter the normalised cost.
struct RawCosts {
    double area_cost;
    double count_cost;
    double categorize_cost;
    double budget;
    double fixed_cost = 0.0;
    double per_sample_cost = 0.0;
};

// Normalised budget model C(mA, n, q) = c [mA + r1 n + r2 floor(n q)] with
// c = 1 / (B A).
class CostModel {
public:
    CostModel(double quadrant_area, BudgetSpec budget, double count_ratio, double categorize_ratio);

    // Ratios r1 = c3/c2, r2 = c4/c2 and B = b_t/(c2 A), rounded to 12
    // significant digits so a common rescaling of all raw costs maps to the
    // same model bit for bit.
    static CostModel from_raw(double quadrant_area, const RawCosts& raw);

    double quadrant_area() const noexcept { return quadrant_area_; }
    double budget_quadrants() const noexcept { return budget_quadrants_; }
    // 1/c: the budget in square metres of sampling.
    double budget_area() const noexcept { return budget_quadrants_ * quadrant_area_; }
    double budget_coefficient() const noexcept { return 1.0 / budget_area(); }
    double count_ratio() const noexcept { return count_ratio_; }
    double categorize_ratio() const noexcept { return categorize_ratio_; }

    // Non-fatal configuration problems (e.g. budget below one quadrant).
    std::vector<std::string> warnings() const;

    CostModel with_budget(BudgetSpec budget) const;
    CostModel with_categorize_ratio(double categorize_ratio) const;

    bool operator==(const CostModel&) const = default;

private:
    double quadrant_area_;
    double budget_quadrants_;
    double count_ratio_;
    double categorize_ratio_;
};

double normalized_cost(const CostModel& cost, double total_area, std::uint64_t total_count,
                       double fraction);

// Budget-implied categorisation fraction
//   q = max(0, min(1, (1/c - (mA + n r1)) / (r2 n))),  q = 1 when n = 0.
double categorization_fraction(const CostModel& cost, double total_area, std::uint64_t total_count);

// floor(value), treating values within 1e-9 below an integer as that integer.
std::uint64_t floor_count(double value);

// n_bar = floor(n q).
std::uint64_t categorized_count(std::uint64_t total_count, double fraction);

// floor(1/(A c)); the feasible set is 0..max_quadrants.
unsigned max_quadrants(const CostModel& cost);

std::vector<unsigned> feasible_designs(const CostModel& cost);

// Unspent fraction of the budget: 1 - C(mA, n, q).
double budget_slack(const CostModel& cost, double total_area, std::uint64_t total_count,
                    double fraction);

// Rounds to 12 significant digits.
double canonical_ratio(double value);

}  // namespace mpdesign
