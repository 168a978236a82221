#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "chartgrid/experiment.hpp"
#include "oracles.hpp"

using namespace chartgrid;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("chartgrid_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

nlohmann::json mock_config_json(const fs::path& root)
{
    return {{"dataset", {{"count", 6}, {"n_points", 100}, {"seed", 3}}},
            {"arms",
             {{{"name", "baseline"}, {"use_grid", false}, {"noise", {{"y_sigma_frac", 0.1}, {"seed", 1}}}},
              {{"name", "grid"}, {"use_grid", true}, {"noise", {{"y_sigma_frac", 0.03}, {"seed", 2}}}}}},
            {"output_dir", (root / "out").string()},
            {"cache_dir", (root / "cache").string()}};
}

std::string field_of(const nlohmann::json& j)
{
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

int run_cli(const std::string& args)
{
    std::string cmd = std::string(CHARTGRID_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_json(const fs::path& path, const nlohmann::json& j)
{
    std::ofstream(path) << j.dump(2);
    return path;
}

} // namespace

TEST(Config, ErrorsNameTheField)
{
    auto root = temp_dir("cfg");
    auto j = mock_config_json(root);
    EXPECT_EQ(field_of(j), "<accepted>");

    auto bad = j;
    bad["grid"]["opacity"] = 1.5;
    EXPECT_EQ(field_of(bad), "grid.opacity");
    bad = j;
    bad["arms"][1]["noise"]["y_sigma_frac"] = -1;
    EXPECT_EQ(field_of(bad), "arms[1].noise.y_sigma_frac");
    bad = j;
    bad["arms"][1]["name"] = "baseline";
    EXPECT_EQ(field_of(bad), "arms[1].name");
    bad = j;
    bad["arms"].erase(1);
    EXPECT_EQ(field_of(bad), "arms");
    bad = j;
    bad["colour"] = "red";
    EXPECT_EQ(field_of(bad), "colour");
    bad = j;
    bad["dataset"]["count"] = "many";
    EXPECT_EQ(field_of(bad), "dataset.count");
    bad = j;
    bad["backend"] = {{"kind", "remote"}, {"model", "m"}};
    EXPECT_EQ(field_of(bad), "backend.endpoint");
    bad = j;
    bad["pairs"] = nlohmann::json::array({nlohmann::json::array({"baseline", "nope"})});
    EXPECT_EQ(field_of(bad), "pairs[0]");
    bad = j;
    bad["arms"][0]["prompt"] = "shout";
    EXPECT_EQ(field_of(bad), "arms[0].prompt");
}

TEST(Config, MalformedFileIsConfigError)
{
    auto root = temp_dir("cfg_bad");
    std::ofstream(root / "c.json") << "{\"seed\": 1,,}";
    EXPECT_THROW(load_config(root / "c.json"), ConfigError);
    EXPECT_THROW(load_config(root / "missing.json"), ConfigError);
}

TEST(Arms, GridAndBaselineSendIdenticalPrompt)
{
    auto cfg = parse_config(mock_config_json(temp_dir("arms")));
    EXPECT_EQ(prompt_hash(arm_prompt(cfg, cfg.arms[0])), prompt_hash(arm_prompt(cfg, cfg.arms[1])));
    cfg.arms[1].prompt = PromptKind::chain_of_thought;
    EXPECT_NE(arm_prompt(cfg, cfg.arms[0]), arm_prompt(cfg, cfg.arms[1]));
}

TEST(Run, ProducesEveryArtifact)
{
    auto root = temp_dir("run_artifacts");
    auto cfg = parse_config(mock_config_json(root));
    auto report = cmd_run(cfg);
    RunPaths p{cfg.output_dir};
    for (const auto& f : {p.gold(), p.extractions(), p.failures(), p.scores_jsonl(), p.scores_csv(), p.report_md(),
                          p.report_json(), p.table_csv(), p.boxplot_csv()})
        EXPECT_TRUE(fs::exists(f)) << f;
    auto gold = load_gold(p.gold());
    ASSERT_EQ(gold.charts.size(), 6u);
    for (const auto& gt : gold.charts) {
        EXPECT_TRUE(fs::exists(p.image(gt.id)));
        EXPECT_TRUE(fs::exists(p.overlay("grid", gt.id)));
        EXPECT_FALSE(fs::exists(p.overlay("baseline", gt.id)));
        EXPECT_TRUE(fs::exists(p.qualitative(gt.id + ".csv")));
        // The grid arm's image is the plain image with the overlay applied.
        EXPECT_EQ(png::read_file(p.overlay("grid", gt.id)), apply_grid(png::read_file(p.image(gt.id)), cfg.grid));
    }
    EXPECT_EQ(fs::file_size(p.failures()), 0u);
    EXPECT_EQ(report.methods.size(), 2u);
    EXPECT_EQ(report.per_chart.size(), 6u);
    EXPECT_EQ(report.config_fingerprint, fingerprint(cfg));
}

TEST(Run, RepeatIsByteIdenticalAndLeavesGoldAlone)
{
    auto root = temp_dir("run_repeat");
    auto cfg = parse_config(mock_config_json(root));
    cmd_run(cfg);
    auto first = oracle::snapshot_dir(cfg.output_dir);
    cmd_run(cfg); // second pass is served from the cache
    EXPECT_EQ(oracle::snapshot_dir(cfg.output_dir), first);

    auto gold_before = first.at("gold.json");
    cmd_evaluate(cfg);
    cmd_report(cfg);
    EXPECT_EQ(oracle::snapshot_dir(cfg.output_dir).at("gold.json"), gold_before);

    // A fresh cache gives the same outputs too.
    cfg.cache_dir = root / "cache2";
    cmd_run(cfg);
    EXPECT_EQ(oracle::snapshot_dir(cfg.output_dir), first);
}

TEST(Run, DroppedSeriesAreScoredAndListed)
{
    auto root = temp_dir("run_drop");
    auto j = mock_config_json(root);
    j["arms"][0]["noise"]["series_drop_prob"] = 1.0;
    auto cfg = parse_config(j);
    auto report = cmd_run(cfg);
    for (const auto& row : report.per_chart)
        EXPECT_EQ(row.scores[0], smape_ceiling);
    std::ifstream is(RunPaths{cfg.output_dir}.failures());
    int lines = 0;
    for (std::string line; std::getline(is, line);) {
        ++lines;
        EXPECT_NE(line.find("baseline"), std::string::npos);
        EXPECT_NE(line.find("empty series list"), std::string::npos);
    }
    EXPECT_EQ(lines, 6);
}

TEST(Run, StepsNeedTheirInputs)
{
    auto root = temp_dir("run_order");
    auto cfg = parse_config(mock_config_json(root));
    EXPECT_THROW(cmd_extract(cfg), UsageError);
    cmd_generate(cfg);
    EXPECT_THROW(cmd_evaluate(cfg), UsageError);
    EXPECT_THROW(cmd_report(cfg), UsageError);
}

TEST(Sweep, OneRunPerDensity)
{
    auto root = temp_dir("sweep");
    auto cfg = parse_config(mock_config_json(root));
    auto reports = cmd_sweep(cfg, {25, 50, 100});
    ASSERT_EQ(reports.size(), 3u);
    for (int d : {25, 50, 100})
        EXPECT_TRUE(fs::exists(cfg.output_dir / ("grid_" + std::to_string(d)) / "report.md"));
    EXPECT_NE(reports[0].config_fingerprint, reports[2].config_fingerprint);
}

TEST(Sweep, InvalidDensityWritesNothing)
{
    auto root = temp_dir("sweep_bad");
    auto cfg = parse_config(mock_config_json(root));
    EXPECT_THROW(cmd_sweep(cfg, {25, 1000}), ConfigError);
    EXPECT_FALSE(fs::exists(cfg.output_dir));
    EXPECT_THROW(cmd_sweep(cfg, {}), UsageError);
}

TEST(Cli, ExitCodes)
{
    auto root = temp_dir("cli");
    auto good = write_json(root / "good.json", mock_config_json(root));
    EXPECT_EQ(run_cli("run --config " + good.string() + " -q"), 0);
    EXPECT_TRUE(fs::exists(root / "out" / "report.md"));
    EXPECT_EQ(run_cli("report -q --config " + good.string()), 0);

    auto bad_json = mock_config_json(root);
    bad_json["grid"] = {{"opacity", 0}};
    auto bad = write_json(root / "bad.json", bad_json);
    EXPECT_EQ(run_cli("run --config " + bad.string()), 1);

    auto remote_json = mock_config_json(root);
    remote_json["backend"] = {{"kind", "remote"},
                              {"endpoint", "http://127.0.0.1:1/v1"},
                              {"model", "m"},
                              {"api_key_env", "CHARTGRID_TEST_NEVER_SET"}};
    remote_json["output_dir"] = (root / "remote_out").string();
    auto remote = write_json(root / "remote.json", remote_json);
    ::unsetenv("CHARTGRID_TEST_NEVER_SET");
    EXPECT_EQ(run_cli("run --config " + remote.string() + " -q"), 2);

    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli("run"), 1);
    EXPECT_EQ(run_cli("sweep --config " + good.string() + " --densities 25,x"), 1);
    EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Cli, SingleImageOverlay)
{
    auto root = temp_dir("cli_overlay");
    RasterImage white(200, 100);
    png::write_file(root / "in.png", white);
    EXPECT_EQ(run_cli("overlay --in " + (root / "in.png").string() + " --out " + (root / "o.png").string() +
                      " --cells 10 --opacity 0.5 --color ff0000"),
              0);
    GridConfig g;
    g.cells_per_axis = 10;
    g.opacity = 0.5;
    g.color = {255, 0, 0};
    EXPECT_EQ(png::read_file(root / "o.png"), apply_grid(white, g));
    EXPECT_EQ(run_cli("overlay --in " + (root / "in.png").string() + " --out " + (root / "o2.png").string() +
                      " --cells 80"),
              1);
}
