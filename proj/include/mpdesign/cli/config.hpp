#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpdesign/design.hpp"

namespace mpdesign::cli {

// Malformed or out-of-range configuration; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ToolConfig {
    DesignConfig design;
    std::vector<std::string> class_names;

    bool operator==(const ToolConfig&) const = default;
};

// The ten default polymer classes: PE, PP, PET, PS, PA, PVC, PU, AC, PES, NPP.
const std::vector<std::string>& default_class_names();

// alpha = 3, beta = 0.01, A = 0.0625, B = 12, r1 = 5e-5, r2 = 3e-3,
// gamma = (1, ..., 1) over the ten default classes, 1e5 draws, seed 0.
ToolConfig baseline_config();

// Same with the high-abundance prior (mode 800, beta = 0.0025).
ToolConfig high_prior_config();

// Parses a JSON config. Missing blocks fall back to the baseline.
ToolConfig parse_config(std::string_view json_text);
ToolConfig load_config(const std::filesystem::path& path);

// Normalised JSON form (rate form, explicit gamma, ratio cost form). Parsing
// it back gives an identical ToolConfig.
std::string print_config(const ToolConfig& config);

}  // namespace mpdesign::cli
