#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpdesign/cli/commands.hpp"
#include "mpdesign/cli/output.hpp"

namespace fs = std::filesystem;
using namespace mpdesign;
using namespace mpdesign::cli;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> draws;
    std::string format = "csv";
    std::string out;
    bool print_config = false;
};

ToolConfig resolve_config(const Globals& g, ToolConfig config) {
    if (g.seed) config.design.seed = *g.seed;
    if (g.draws) config.design.mc_draws = *g.draws;
    for (const auto& w : config.design.validate()) std::cerr << "warning: " << w << "\n";
    return config;
}

ToolConfig load(const Globals& g) {
    return resolve_config(g, g.config_path.empty() ? baseline_config() : load_config(g.config_path));
}

// --out, else $MPDESIGN_OUTPUT_DIR/<name>, else stdout.
void emit(const Globals& g, const std::string& name, const std::string& content) {
    fs::path target = g.out;
    if (target.empty()) {
        if (const char* dir = std::getenv("MPDESIGN_OUTPUT_DIR"); dir && *dir) {
            target = fs::path(dir) / (name + (g.format == "json" ? ".json" : ".csv"));
        }
    }
    if (target.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("failed to write to stdout");
        return;
    }
    write_file_atomic(target, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian two-stage design of microplastic sampling campaigns"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON config (default: built-in baseline)");
    app.add_option("--seed", g.seed, "Override mc.seed");
    app.add_option("--draws", g.draws, "Override mc.draws (>= 1000)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Output file (replicate: output directory)");
    app.add_flag("--print-config", g.print_config, "Print the normalised config and exit");

    auto* design = app.add_subcommand("design", "Optimal number of quadrants.\n"
                                                "  columns: m,area,L1_star,E_L2_star,E_L2_se,L_star,L_star_se\n"
                                                "  '#' lines: m_star, area, typical n/q/n_bar, budget split");

    auto* curves = app.add_subcommand("curves", "Second-stage performance of design m over true abundances.\n"
                                                "  columns: lambda,n,q,n_bar,L2_star");
    unsigned curve_m = 0;
    std::vector<double> lambdas;
    double lambda_max = 0.0;
    std::size_t lambda_points = 200;
    curves->add_option("--m", curve_m, "Number of quadrants")->required();
    curves->add_option("--lambda", lambdas, "Explicit abundance values (comma separated)")->delimiter(',');
    curves->add_option("--lambda-max", lambda_max, "Grid upper end (default: 4 x prior mode)");
    curves->add_option("--lambda-points", lambda_points, "Grid size")->check(CLI::PositiveNumber);

    auto* posterior = app.add_subcommand("posterior", "Posterior summaries for campaign data.\n"
                                                      "  columns: parameter,statistic,value\n"
                                                      "  density file columns: parameter,x,density");
    std::string data_path, density_out;
    PosteriorOptions post_opts;
    posterior->add_option("--data", data_path, "Campaign CSV (schema_version=1)")->required();
    posterior->add_option("--hpd-mass", post_opts.hpd_mass, "HPD probability mass")->check(CLI::Range(0.0, 1.0));
    posterior->add_option("--density-out", density_out, "Also write density grids to this file");
    posterior->add_option("--density-points", post_opts.density_points, "Points per density grid");

    auto* sensitivity = app.add_subcommand("sensitivity", "Re-optimise along one axis.\n"
                                                          "  columns: value,m_star,typical_n_bar,budget_slack");
    std::string axis;
    std::vector<double> values;
    sensitivity->add_option("--axis", axis, "r2 (multiplier), budget (quadrant equivalents) or prior-mode")
        ->required();
    sensitivity->add_option("--values", values, "Axis values (comma separated)")->required()->delimiter(',');

    auto* replicate_cmd = app.add_subcommand("replicate", "Plot data for the built-in scenarios, with manifest.json");
    std::string figure;
    replicate_cmd->add_option("figure", figure, "fig1..fig6 or all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const Format format = parse_format(g.format);
        if (g.print_config) {
            std::cout << print_config(load(g));
            return 0;
        }
        if (design->parsed()) {
            emit(g, "design", design_report(load(g), format));
        } else if (curves->parsed()) {
            auto config = load(g);
            if (lambdas.empty()) {
                lambdas = lambda_max > 0.0 ? abundance_grid(lambda_max, lambda_points)
                                           : default_abundance_grid(config.design.abundance_prior, lambda_points);
            }
            emit(g, "curves", curves_report(config, curve_m, lambdas, format));
        } else if (posterior->parsed()) {
            auto config = load(g);
            auto data = load_campaign_data(data_path, config.class_names);
            auto obs = data.observations(config.design.cost.quadrant_area());
            auto cats = data.categorization();
            emit(g, "posterior", posterior_report(config, obs, cats, post_opts, format));
            if (!density_out.empty()) {
                if (post_opts.density_points == 0) post_opts.density_points = 200;
                write_file_atomic(density_out, density_report(config, obs, cats, post_opts, format));
            }
        } else if (sensitivity->parsed()) {
            const auto parsed_axis = parse_axis(axis);
            emit(g, "sensitivity", sensitivity_report(load(g), parsed_axis, values, format));
        } else if (replicate_cmd->parsed()) {
            if (!g.config_path.empty()) std::cerr << "note: replicate uses the built-in scenarios; --config ignored\n";
            auto base = resolve_config(g, baseline_config());
            fs::path dir = g.out;
            if (dir.empty()) {
                const char* env = std::getenv("MPDESIGN_OUTPUT_DIR");
                dir = env && *env ? fs::path(env) : fs::path("replication");
            }
            auto files = write_replication(figure, base, dir);
            std::cerr << "wrote " << files.size() << " files to " << dir.string() << "\n";
        } else {
            std::cerr << app.help();
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
