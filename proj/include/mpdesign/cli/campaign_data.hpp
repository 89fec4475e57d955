#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpdesign/posterior.hpp"

namespace mpdesign::cli {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Field records of one campaign:
//
//   # schema_version=1
//   quadrant_id,suspected_count
//   Q1,12
//   ...
//   class_name,categorized_count      (optional section)
//   PE,5
//   ...
//
// Blank lines and other '#' comment lines are ignored. Classes not listed in
// the second section count as zero.
struct CampaignData {
    std::vector<std::string> quadrant_ids;
    std::vector<std::uint64_t> suspected_counts;
    // One entry per configured class, in configured order.
    std::vector<std::uint64_t> categorized_counts;

    FieldObservations observations(double quadrant_area) const;
    CategorizationCounts categorization() const;
};

inline constexpr int campaign_schema_version = 1;

CampaignData parse_campaign_data(std::string_view csv_text, std::span<const std::string> class_names);
CampaignData load_campaign_data(const std::filesystem::path& path, std::span<const std::string> class_names);

}  // namespace mpdesign::cli
