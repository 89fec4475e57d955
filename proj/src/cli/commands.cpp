#include "mpdesign/cli/commands.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <variant>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"
#include "mpdesign/cli/output.hpp"
#include "mpdesign/loss.hpp"
#include "mpdesign/posterior.hpp"

namespace mpdesign::cli {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, std::uint64_t, std::string>;

struct Table {
    std::vector<std::pair<std::string, Cell>> summary;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_number(*d);
    if (auto u = std::get_if<std::uint64_t>(&c)) return format_number(*u);
    return std::get<std::string>(c);
}

Json cell_json(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return *d;
    if (auto u = std::get_if<std::uint64_t>(&c)) return *u;
    return std::get<std::string>(c);
}

std::string render(const Table& t, Format format) {
    if (format == Format::Json) {
        Json root = Json::object();
        if (!t.summary.empty()) {
            Json s = Json::object();
            for (const auto& [k, v] : t.summary) s[k] = cell_json(v);
            root["summary"] = s;
        }
        Json rows = Json::array();
        for (const auto& r : t.rows) {
            Json o = Json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
            rows.push_back(o);
        }
        root["rows"] = rows;
        return root.dump(2) + "\n";
    }
    std::string out;
    for (const auto& [k, v] : t.summary) out += "# " + k + "=" + cell_text(v) + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell_text(r[i]);
        out += "\n";
    }
    return out;
}

Table design_table(const DesignResult& result, const ToolConfig& config) {
    Table t;
    const auto& typ = result.typical;
    const double area = static_cast<double>(result.m_star) * config.design.cost.quadrant_area();
    t.summary = {{"m_star", std::uint64_t{result.m_star}},
                 {"area", area},
                 {"typical_n", typ.total_count},
                 {"typical_q", typ.fraction},
                 {"typical_n_bar", typ.categorized},
                 {"budget_sampling", typ.sampling_share},
                 {"budget_counting", typ.counting_share},
                 {"budget_categorization", typ.categorization_share},
                 {"budget_slack", typ.slack},
                 {"mc_draws", config.design.mc_draws},
                 {"seed", config.design.seed},
                 {"policy", result.q_policy_note}};
    t.columns = {"m", "area", "L1_star", "E_L2_star", "E_L2_se", "L_star", "L_star_se"};
    for (const auto& p : result.curve.rows)
        t.rows.push_back({std::uint64_t{p.quadrants}, p.sampled_area, p.l1_expected, p.e_l2_expected, p.e_l2_se,
                          p.l_star, p.l_star_se});
    return t;
}

Table curves_table(const ToolConfig& config, unsigned quadrants, std::span<const double> grid) {
    Table t;
    t.summary = {{"m", std::uint64_t{quadrants}},
                 {"area", static_cast<double>(quadrants) * config.design.cost.quadrant_area()}};
    t.columns = {"lambda", "n", "q", "n_bar", "L2_star"};
    for (const auto& r : performance_curve(quadrants, grid, config.design))
        t.rows.push_back({r.abundance, r.total_count, r.fraction, r.categorized, r.l2_expected});
    return t;
}

Table density_table(const GammaParams& params, std::string_view name, std::span<const double> grid) {
    Table t;
    t.columns = {"parameter", "x", "density"};
    auto dens = density_grid(params, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({std::string(name), grid[i], dens[i]});
    return t;
}

const std::vector<double>& tomasa_proportions() {
    // PE 52%, PP 34%, PS 13%, PA 1%, the rest zero (default class order).
    static const std::vector<double> p{0.52, 0.34, 0.0, 0.13, 0.01, 0.0, 0.0, 0.0, 0.0, 0.0};
    return p;
}

struct Scenario {
    std::string name;
    ToolConfig config;
};

void add_design_files(const std::string& prefix, const Scenario& s, std::vector<OutputFile>& files,
                      std::map<std::string, ToolConfig>& scenarios) {
    auto result = optimize_design(s.config.design);
    files.push_back({prefix + "_design_" + s.name + ".csv", design_report(s.config, result, Format::Csv)});
    auto grid = default_abundance_grid(s.config.design.abundance_prior);
    files.push_back({prefix + "_performance_" + s.name + ".csv",
                     curves_report(s.config, result.m_star, grid, Format::Csv)});
    files.push_back({prefix + "_prior_" + s.name + ".csv",
                     render(density_table(s.config.design.abundance_prior, "Lambda", grid), Format::Csv)});
    scenarios.emplace(prefix + "_" + s.name, s.config);
}

void add_posterior_files(const std::string& stem, const ToolConfig& config, const SyntheticCampaign& data,
                         bool composition, std::vector<OutputFile>& files) {
    PosteriorOptions options{0.95, 200, composition};
    files.push_back({stem + "_posterior.csv",
                     posterior_report(config, data.observations, data.categorized, options, Format::Csv)});
    files.push_back(
        {stem + "_density.csv", density_report(config, data.observations, data.categorized, options, Format::Csv)});
}

void build_figure(std::string_view id, const ToolConfig& base, std::vector<OutputFile>& files,
                  std::map<std::string, ToolConfig>& scenarios) {
    const std::string prefix(id);
    ToolConfig low = base;
    ToolConfig high = base;
    high.design.abundance_prior = high_prior_config().design.abundance_prior;
    auto with = [](ToolConfig c, SensitivityAxis axis, double v) {
        c.design = apply_axis(c.design, axis, v);
        return c;
    };
    if (id == "fig1") {
        add_design_files(prefix, {"low", low}, files, scenarios);
        add_design_files(prefix, {"high", high}, files, scenarios);
    } else if (id == "fig2") {
        add_design_files(prefix, {"r2x2", with(low, SensitivityAxis::CategorizeRatioMultiplier, 2.0)}, files,
                         scenarios);
        add_design_files(prefix, {"r2x1000", with(low, SensitivityAxis::CategorizeRatioMultiplier, 1000.0)},
                         files, scenarios);
    } else if (id == "fig3" || id == "fig4") {
        const double budget = id == "fig3" ? 8.0 : 14.0;
        add_design_files(prefix, {"low", with(low, SensitivityAxis::Budget, budget)}, files, scenarios);
        add_design_files(prefix, {"high", with(high, SensitivityAxis::Budget, budget)}, files, scenarios);
    } else if (id == "fig5") {
        const auto& cost = low.design.cost;
        for (double lambda : {5.0, 80.0})
            for (unsigned m : {5u, 7u}) {
                auto data =
                    synthesize_expected_data(lambda, tomasa_proportions(), m, cost.quadrant_area(), cost);
                add_posterior_files(prefix + "_lambda" + format_number(lambda) + "_m" + std::to_string(m), low,
                                    data, false, files);
            }
        scenarios.emplace(prefix, low);
    } else if (id == "fig6") {
        const auto& cost = low.design.cost;
        Table cases;
        cases.columns = {"case", "m", "n", "q", "n_bar"};
        auto record = [&](const std::string& name, unsigned m, const SyntheticCampaign& data) {
            cases.rows.push_back({name, std::uint64_t{m}, data.observations.total_count(),
                                  data.categorization_fraction, data.categorized.categorized_total()});
            add_posterior_files(prefix + "_" + name, low, data, true, files);
        };
        for (unsigned m : {5u, 7u})
            record("lambda382_m" + std::to_string(m), m,
                   synthesize_expected_data(382.0, tomasa_proportions(), m, cost.quadrant_area(), cost));
        record("n200_m5", 5, synthesize_from_total(200, tomasa_proportions(), 5, cost.quadrant_area(), cost));
        record("n280_m7", 7, synthesize_from_total(280, tomasa_proportions(), 7, cost.quadrant_area(), cost));
        files.push_back({prefix + "_cases.csv", render(cases, Format::Csv)});
        scenarios.emplace(prefix, low);
    } else {
        throw std::invalid_argument("unknown figure id '" + prefix + "' (expected fig1..fig6 or all)");
    }
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string design_report(const ToolConfig& config, Format format) {
    return design_report(config, optimize_design(config.design), format);
}

std::string design_report(const ToolConfig& config, const DesignResult& result, Format format) {
    return render(design_table(result, config), format);
}

std::string curves_report(const ToolConfig& config, unsigned quadrants, std::span<const double> abundance_grid,
                          Format format) {
    return render(curves_table(config, quadrants, abundance_grid), format);
}

std::vector<double> abundance_grid(double upper, std::size_t points) {
    if (!(upper > 0.0) || points == 0) throw std::invalid_argument("lambda grid needs upper > 0 and points >= 1");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = upper * static_cast<double>(i + 1) / static_cast<double>(points);
    return grid;
}

std::string posterior_report(const ToolConfig& config, const FieldObservations& observations,
                             const CategorizationCounts& categorized, const PosteriorOptions& options, Format format) {
    const auto& prior = config.design;
    auto post = update_posterior(prior.abundance_prior, prior.composition_prior, observations, categorized);
    auto hpd = hpd_interval(post.abundance, options.hpd_mass);

    Table t;
    t.summary = {{"quadrants", std::uint64_t{observations.quadrants()}},
                 {"total_area", observations.total_area()},
                 {"total_count", observations.total_count()},
                 {"categorized_total", categorized.categorized_total()}};
    t.columns = {"parameter", "statistic", "value"};
    auto row = [&](const std::string& p, const std::string& s, Cell v) { t.rows.push_back({p, s, std::move(v)}); };
    const auto& a = post.abundance;
    row("Lambda", "prior_shape", prior.abundance_prior.shape());
    row("Lambda", "prior_rate", prior.abundance_prior.rate());
    row("Lambda", "shape", a.shape());
    row("Lambda", "rate", a.rate());
    row("Lambda", "mean", a.mean());
    row("Lambda", "variance", a.variance());
    row("Lambda", "hpd_mass", options.hpd_mass);
    row("Lambda", "hpd_lower", hpd.lower);
    row("Lambda", "hpd_upper", hpd.upper);
    row("Lambda", "naive_estimate", naive_abundance_estimate(observations));

    const double total = post.composition.total();
    for (std::size_t i = 0; i < post.composition.size(); ++i) {
        const std::string p = "P_" + config.class_names[i];
        const double g = post.composition[i];
        row(p, "categorized", categorized.class_counts()[i]);
        row(p, "alpha", g);
        row(p, "beta", total - g);
        row(p, "mean", g / total);
        row(p, "variance", g * (total - g) / (total * total * (total + 1.0)));
    }
    return render(t, format);
}

std::string density_report(const ToolConfig& config, const FieldObservations& observations,
                           const CategorizationCounts& categorized, const PosteriorOptions& options, Format format) {
    const auto& prior = config.design;
    auto post = update_posterior(prior.abundance_prior, prior.composition_prior, observations, categorized);
    const std::size_t points = options.density_points;
    if (points == 0) throw std::invalid_argument("density grid needs at least one point");

    const double upper =
        boost::math::gamma_p_inv(post.abundance.shape(), 0.9995) / post.abundance.rate();
    auto grid = abundance_grid(upper, points);
    Table t = density_table(post.abundance, "Lambda", grid);
    if (options.composition_density) {
        std::vector<double> unit(points);
        for (std::size_t i = 0; i < points; ++i)
            unit[i] = static_cast<double>(i + 1) / static_cast<double>(points + 1);
        for (std::size_t k = 0; k < post.composition.size(); ++k) {
            auto dens = density_grid(post.composition, k, unit);
            for (std::size_t i = 0; i < points; ++i)
                t.rows.push_back({"P_" + config.class_names[k], unit[i], dens[i]});
        }
    }
    return render(t, format);
}

SensitivityAxis parse_axis(std::string_view name) {
    if (name == "r2") return SensitivityAxis::CategorizeRatioMultiplier;
    if (name == "budget") return SensitivityAxis::Budget;
    if (name == "prior-mode") return SensitivityAxis::PriorMode;
    throw std::invalid_argument("unknown axis '" + std::string(name) + "' (expected r2, budget or prior-mode)");
}

std::string sensitivity_report(const ToolConfig& config, SensitivityAxis axis, std::span<const double> values,
                               Format format) {
    Table t;
    t.columns = {"value", "m_star", "typical_n_bar", "budget_slack"};
    for (const auto& r : sensitivity_sweep(config.design, axis, values))
        t.rows.push_back({r.value, std::uint64_t{r.m_star}, r.typical_categorized, r.budget_slack});
    return render(t, format);
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};
    return ids;
}

std::vector<OutputFile> replicate(std::string_view figure_id, const ToolConfig& base) {
    std::vector<OutputFile> files;
    std::map<std::string, ToolConfig> scenarios;
    if (figure_id == "all") {
        for (const auto& id : figure_ids()) build_figure(id, base, files, scenarios);
    } else {
        build_figure(figure_id, base, files, scenarios);
    }

    Json manifest = Json::object();
    manifest["figure"] = std::string(figure_id);
    manifest["seed"] = base.design.seed;
    manifest["mc_draws"] = base.design.mc_draws;
    Json configs = Json::object();
    for (const auto& [name, config] : scenarios) configs[name] = Json::parse(print_config(config));
    manifest["scenarios"] = configs;
    Json listed = Json::array();
    for (const auto& f : files)
        listed.push_back({{"name", f.name}, {"bytes", f.content.size()}, {"sha256", sha256_hex(f.content)}});
    manifest["files"] = listed;
    files.push_back({"manifest.json", manifest.dump(2) + "\n"});
    return files;
}

std::vector<OutputFile> write_replication(std::string_view figure_id, const ToolConfig& base,
                                          const std::filesystem::path& directory) {
    auto files = replicate(figure_id, base);
    for (const auto& f : files) write_file_atomic(directory / f.name, f.content);
    return files;
}

}  // namespace mpdesign::cli
