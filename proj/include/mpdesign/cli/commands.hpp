#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpdesign/cli/campaign_data.hpp"
#include "mpdesign/cli/config.hpp"
#include "mpdesign/design.hpp"

namespace mpdesign::cli {

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

// Design curve, columns m,area,L1_star,E_L2_star,E_L2_se,L_star,L_star_se,
// preceded by '#' summary lines for the optimum.
std::string design_report(const ToolConfig& config, Format format);
std::string design_report(const ToolConfig& config, const DesignResult& result, Format format);

// Columns lambda,n,q,n_bar,L2_star.
std::string curves_report(const ToolConfig& config, unsigned quadrants, std::span<const double> abundance_grid,
                          Format format);

// `points` evenly spaced values over (0, upper].
std::vector<double> abundance_grid(double upper, std::size_t points);

struct PosteriorOptions {
    double hpd_mass = 0.95;
    std::size_t density_points = 0;
    bool composition_density = true;
};

// Columns parameter,statistic,value. Parameter is Lambda or P_<class>.
std::string posterior_report(const ToolConfig& config, const FieldObservations& observations,
                             const CategorizationCounts& categorized, const PosteriorOptions& options, Format format);

// Columns parameter,x,density: the Gamma posterior over (0, its 0.9995
// quantile] and each Beta marginal over (0, 1), `density_points` each.
std::string density_report(const ToolConfig& config, const FieldObservations& observations,
                           const CategorizationCounts& categorized, const PosteriorOptions& options, Format format);

SensitivityAxis parse_axis(std::string_view name);

// Columns value,m_star,typical_n_bar,budget_slack.
std::string sensitivity_report(const ToolConfig& config, SensitivityAxis axis, std::span<const double> values,
                               Format format);

struct OutputFile {
    std::string name;
    std::string content;
};

const std::vector<std::string>& figure_ids();

// Plot data for one figure id (or "all"), computed from the embedded
// scenarios with the seed and draw count of `base`, plus manifest.json.
std::vector<OutputFile> replicate(std::string_view figure_id, const ToolConfig& base);

// Writes every file of `replicate` into `directory`.
std::vector<OutputFile> write_replication(std::string_view figure_id, const ToolConfig& base,
                                          const std::filesystem::path& directory);

}  // namespace mpdesign::cli
