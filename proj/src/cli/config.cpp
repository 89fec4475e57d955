#include "mpdesign/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mpdesign::cli {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError("config field '" + field + "': " + message);
}

void reject_unknown(const Json& object, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!object.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

double number(const Json& object, const std::string& path, const std::string& key) {
    const std::string field = path + "." + key;
    if (!object.contains(key)) fail(field, "missing");
    const auto& v = object.at(key);
    if (!v.is_number()) fail(field, "expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "must be finite");
    return x;
}

std::uint64_t count(const Json& object, const std::string& path, const std::string& key) {
    const std::string field = path + "." + key;
    const auto& v = object.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) fail(field, "must be nonnegative");
    fail(field, "expected a nonnegative integer");
}

GammaParams parse_abundance(const Json& j) {
    const std::string path = "abundance_prior";
    reject_unknown(j, path, {"shape", "rate", "mode"});
    double shape = number(j, path, "shape");
    bool has_rate = j.contains("rate"), has_mode = j.contains("mode");
    if (has_rate == has_mode) fail(path, "give exactly one of 'rate' or 'mode'");
    try {
        if (has_rate) return GammaParams(shape, number(j, path, "rate"));
        double mode = number(j, path, "mode");
        if (!(shape > 1.0)) fail(path + ".shape", "the mode form needs shape > 1");
        if (!(mode > 0.0)) fail(path + ".mode", "must be positive");
        return GammaParams(shape, (shape - 1.0) / mode);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

std::vector<std::string> generic_names(std::size_t k) {
    if (k == default_class_names().size()) return default_class_names();
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= k; ++i) names.push_back("C" + std::to_string(i));
    return names;
}

void parse_composition(const Json& j, ToolConfig& out) {
    const std::string path = "composition_prior";
    reject_unknown(j, path, {"gamma", "classes", "symmetric_gamma", "class_names"});
    std::vector<double> gamma;
    if (j.contains("gamma")) {
        if (j.contains("classes") || j.contains("symmetric_gamma"))
            fail(path, "give either 'gamma' or 'classes' with 'symmetric_gamma', not both");
        const auto& g = j.at("gamma");
        if (!g.is_array()) fail(path + ".gamma", "expected an array of numbers");
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string field = path + ".gamma[" + std::to_string(i) + "]";
            if (!g[i].is_number()) fail(field, "expected a number");
            double x = g[i].get<double>();
            if (!std::isfinite(x) || !(x > 0.0)) fail(field, "must be finite and positive");
            gamma.push_back(x);
        }
    } else {
        if (!j.contains("classes")) fail(path + ".classes", "missing");
        auto k = count(j, path, "classes");
        double v = number(j, path, "symmetric_gamma");
        if (!(v > 0.0)) fail(path + ".symmetric_gamma", "must be positive");
        if (k < 2 || k > 100000) fail(path + ".classes", "must lie in [2, 100000]");
        gamma.assign(k, v);
    }
    try {
        out.design.composition_prior = DirichletParams(gamma);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }

    if (!j.contains("class_names")) {
        out.class_names = generic_names(gamma.size());
        return;
    }
    const auto& names = j.at("class_names");
    const std::string field = path + ".class_names";
    if (!names.is_array()) fail(field, "expected an array of strings");
    if (names.size() != gamma.size())
        fail(field, "has " + std::to_string(names.size()) + " entries for " + std::to_string(gamma.size()) +
                        " classes");
    std::set<std::string> seen;
    out.class_names.clear();
    for (const auto& n : names) {
        if (!n.is_string()) fail(field, "expected strings");
        auto name = n.get<std::string>();
        if (name.empty() || name.find_first_of(",\"\r\n") != std::string::npos || name.front() == '#')
            fail(field, "invalid class name '" + name + "'");
        if (!seen.insert(name).second) fail(field, "duplicate class name '" + name + "'");
        out.class_names.push_back(std::move(name));
    }
}

CostModel parse_cost(const Json& j) {
    const std::string path = "cost";
    bool raw = j.contains("area_cost") || j.contains("count_cost") || j.contains("categorize_cost") ||
               j.contains("budget") || j.contains("fixed_cost") || j.contains("per_sample_cost");
    try {
        if (raw) {
            reject_unknown(j, path,
                           {"quadrant_area", "area_cost", "count_cost", "categorize_cost", "budget", "fixed_cost",
                            "per_sample_cost"});
            RawCosts costs{number(j, path, "area_cost"), number(j, path, "count_cost"),
                           number(j, path, "categorize_cost"), number(j, path, "budget")};
            if (j.contains("fixed_cost")) costs.fixed_cost = number(j, path, "fixed_cost");
            if (j.contains("per_sample_cost")) costs.per_sample_cost = number(j, path, "per_sample_cost");
            return CostModel::from_raw(number(j, path, "quadrant_area"), costs);
        }
        reject_unknown(j, path, {"quadrant_area", "budget_quadrant_equivalents", "count_ratio", "categorize_ratio"});
        return CostModel(number(j, path, "quadrant_area"), BudgetSpec{number(j, path, "budget_quadrant_equivalents")},
                         number(j, path, "count_ratio"), number(j, path, "categorize_ratio"));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

}  // namespace

const std::vector<std::string>& default_class_names() {
    static const std::vector<std::string> names{"PE", "PP", "PET", "PS", "PA", "PVC", "PU", "AC", "PES", "NPP"};
    return names;
}

ToolConfig baseline_config() {
    return ToolConfig{
        DesignConfig{GammaParams(3.0, 0.01), DirichletParams::symmetric(10, 1.0),
                     CostModel(0.0625, BudgetSpec{12.0}, 5e-5, 3e-3), 100000, 0, 0.5},
        default_class_names()};
}

ToolConfig high_prior_config() {
    auto config = baseline_config();
    config.design.abundance_prior = GammaParams(3.0, 0.0025);
    return config;
}

ToolConfig parse_config(std::string_view json_text) {
    Json root;
    try {
        root = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, "", {"abundance_prior", "composition_prior", "cost", "mc", "design"});

    ToolConfig out = baseline_config();
    if (root.contains("abundance_prior")) out.design.abundance_prior = parse_abundance(root.at("abundance_prior"));
    if (root.contains("composition_prior")) parse_composition(root.at("composition_prior"), out);
    if (root.contains("cost")) out.design.cost = parse_cost(root.at("cost"));
    if (root.contains("mc")) {
        const auto& mc = root.at("mc");
        reject_unknown(mc, "mc", {"draws", "seed"});
        if (mc.contains("draws")) {
            out.design.mc_draws = count(mc, "mc", "draws");
            if (out.design.mc_draws < 1000) fail("mc.draws", "must be at least 1000");
        }
        if (mc.contains("seed")) out.design.seed = count(mc, "mc", "seed");
    }
    if (root.contains("design")) {
        const auto& d = root.at("design");
        reject_unknown(d, "design", {"abundance_weight"});
        if (d.contains("abundance_weight")) {
            double w = number(d, "design", "abundance_weight");
            if (w < 0.0 || w > 1.0) fail("design.abundance_weight", "must lie in [0, 1]");
            out.design.abundance_weight = w;
        }
    }
    return out;
}

ToolConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string print_config(const ToolConfig& config) {
    const auto& d = config.design;
    Json gamma = Json::array();
    for (double g : d.composition_prior.concentration()) gamma.push_back(g);
    Json root;
    root["abundance_prior"] = {{"shape", d.abundance_prior.shape()}, {"rate", d.abundance_prior.rate()}};
    root["composition_prior"] = {{"gamma", gamma}, {"class_names", config.class_names}};
    root["cost"] = {{"quadrant_area", d.cost.quadrant_area()},
                    {"budget_quadrant_equivalents", d.cost.budget_quadrants()},
                    {"count_ratio", d.cost.count_ratio()},
                    {"categorize_ratio", d.cost.categorize_ratio()}};
    root["mc"] = {{"draws", d.mc_draws}, {"seed", d.seed}};
    root["design"] = {{"abundance_weight", d.abundance_weight}};
    return root.dump(2) + "\n";
}

}  // namespace mpdesign::cli
