#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chartgrid/chartgrid.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_fatal = 2;

std::vector<int> parse_densities(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw chartgrid::UsageError("--densities: '" + item + "' is not an integer");
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chartgrid: grid-overlay chart extraction benchmark"};
    app.require_subcommand(1);
    // Global flags may follow the verb.
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool quiet = false;
    app.add_option("--config", config_path, "Experiment configuration (JSON)");
    app.add_option("--seed", seed, "Override the dataset seed");
    app.add_option("--out", out_dir, "Override the output directory");
    app.add_flag("-q,--quiet", quiet, "Suppress progress output");

    auto* generate = app.add_subcommand("generate", "Generate gold standard and chart images");
    auto* overlay = app.add_subcommand("overlay", "Overlay grids (per grid arm, or one image with --in/--out)");
    std::string in_png;
    std::string out_png;
    chartgrid::GridConfig grid;
    std::string color_hex = "000000";
    overlay->add_option("--in", in_png, "Input PNG (single-image mode)");
    overlay->add_option("--out", out_png, "Output PNG (single-image mode)");
    overlay->add_option("--cells", grid.cells_per_axis, "Cells per axis")->capture_default_str();
    overlay->add_option("--opacity", grid.opacity, "Line opacity in (0, 1]")->capture_default_str();
    overlay->add_option("--color", color_hex, "Line color as RRGGBB hex")->capture_default_str();
    overlay->add_option("--thickness", grid.thickness_px, "Line thickness in pixels")->capture_default_str();
    auto* extract = app.add_subcommand("extract", "Run extraction for every arm and chart (cached)");
    auto* evaluate = app.add_subcommand("evaluate", "Score extractions against the gold standard");
    auto* report = app.add_subcommand("report", "Write report files");
    auto* run = app.add_subcommand("run", "generate, overlay, extract, evaluate and report");
    auto* sweep = app.add_subcommand("sweep", "Full run per grid density");
    std::string densities_text;
    sweep->add_option("--densities", densities_text, "Comma-separated grid densities, e.g. 25,50,100");


    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (overlay->parsed() && !in_png.empty()) {
            if (out_png.empty())
                throw chartgrid::UsageError("overlay --in requires --out");
            grid.color = chartgrid::parse_hex_color(color_hex);
            auto img = chartgrid::png::read_file(in_png);
            chartgrid::png::write_file(out_png, chartgrid::apply_grid(img, grid));
            return exit_ok;
        }

        if (config_path.empty())
            throw chartgrid::UsageError("--config is required");
        auto cfg = chartgrid::load_config(config_path);
        if (seed)
            cfg.seed = *seed;
        if (!out_dir.empty())
            cfg.output_dir = out_dir;
        if (overlay->parsed() && !out_png.empty())
            cfg.output_dir = out_png;

        chartgrid::RunContext ctx;
        ctx.log = quiet ? nullptr : &std::cerr;

        if (generate->parsed()) {
            chartgrid::cmd_generate(cfg, ctx);
        } else if (overlay->parsed()) {
            chartgrid::cmd_overlay(cfg, ctx);
        } else if (extract->parsed()) {
            auto s = chartgrid::cmd_extract(cfg, ctx);
            if (ctx.log)
                *ctx.log << "[extract] " << s.outcomes.size() << " records, " << s.cache_hits << " from cache, "
                         << s.failures << " failed\n";
        } else if (evaluate->parsed()) {
            chartgrid::cmd_evaluate(cfg, ctx);
        } else if (report->parsed()) {
            auto r = chartgrid::cmd_report(cfg, ctx);
            std::cout << chartgrid::export_table(r, chartgrid::TableFormat::markdown);
        } else if (run->parsed()) {
            auto r = chartgrid::cmd_run(cfg, ctx);
            std::cout << chartgrid::export_table(r, chartgrid::TableFormat::markdown);
        } else if (sweep->parsed()) {
            auto densities = densities_text.empty() ? cfg.sweep_densities : parse_densities(densities_text);
            auto reports = chartgrid::cmd_sweep(cfg, densities, ctx);
            for (std::size_t i = 0; i < reports.size(); ++i)
                std::cout << "## " << densities[i] << "x" << densities[i] << " grid\n\n"
                          << chartgrid::export_table(reports[i], chartgrid::TableFormat::markdown) << "\n";
        }
        return exit_ok;
    } catch (const chartgrid::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const chartgrid::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const chartgrid::AuthError& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return exit_fatal;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return exit_fatal;
    }
}
