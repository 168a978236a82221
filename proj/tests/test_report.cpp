#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "chartgrid/dataset.hpp"
#include "chartgrid/evaluation.hpp"
#include "chartgrid/extraction/mock.hpp"
#include "chartgrid/report.hpp"
#include "table_fixture.hpp"

using namespace chartgrid;
using testing_support::table_scores;

namespace {

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);)
        out.push_back(line);
    return out;
}

std::vector<SmapeScore> mock_scores(std::uint64_t seed)
{
    std::vector<SmapeScore> out;
    for (const auto& gt : build_dataset({}, seed)) {
        NoiseModel lo{20, 0.02, 0, 0, 1};
        NoiseModel hi{20, 0.10, 0, 0, 2};
        out.push_back(score_chart(gt, mock_extract(gt, hi), "baseline"));
        out.push_back(score_chart(gt, mock_extract(gt, lo), "grid"));
    }
    return out;
}

} // namespace

TEST(TableFixture, NonNegativeWithExactMoments)
{
    auto scores = table_scores();
    for (const auto& s : scores)
        EXPECT_GE(s.value, 0.0);
    auto r = build_report(scores, {{testing_support::baseline_name, testing_support::grid_name}});
    ASSERT_EQ(r.methods.size(), 2u);
    EXPECT_NEAR(r.methods[0].mean_smape, 25.48, 1e-9);
    EXPECT_NEAR(r.methods[0].std_dev, 26.01, 1e-9);
    EXPECT_NEAR(r.methods[1].mean_smape, 19.48, 1e-9);
    EXPECT_NEAR(r.methods[1].std_dev, 14.61, 1e-9);
}

TEST(ExportTable, MarkdownRowsAtTwoDecimals)
{
    auto r = build_report(table_scores(), {{testing_support::baseline_name, testing_support::grid_name}});
    auto md = export_table(r, TableFormat::markdown);
    auto lines = lines_of(md);
    ASSERT_GE(lines.size(), 6u);
    EXPECT_EQ(lines[0], "| Method | Mean SMAPE, % | Std. Dev., % |");
    EXPECT_EQ(lines[2], "| Baseline | 25.48 | 26.01 |");
    EXPECT_EQ(lines[3], "| Experimental (Grid) | 19.48 | 14.61 |");
    EXPECT_EQ(lines[4], "");
    EXPECT_NE(lines[5].find("Wilcoxon"), std::string::npos);
    EXPECT_NE(lines[5].find("p = "), std::string::npos);
}

TEST(ExportTable, CsvShape)
{
    auto r = build_report(table_scores(), {});
    auto lines = lines_of(export_table(r, "csv"));
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "Method,\"Mean SMAPE, %\",\"Std. Dev., %\"");
    EXPECT_EQ(lines[1], "Baseline,25.48,26.01");
    EXPECT_EQ(lines[2], "Experimental (Grid),19.48,14.61");
}

TEST(ExportTable, JsonRoundTrip)
{
    auto r = build_report(mock_scores(1), {{"baseline", "grid"}}, "abc");
    auto back = report_from_json(nlohmann::json::parse(export_table(r, "json")));
    EXPECT_EQ(back, r);
    EXPECT_THROW(export_table(r, "xlsx"), UsageError);
}

TEST(BuildReport, MockRunFavoursLowNoise)
{
    auto r = build_report(mock_scores(1), {{"baseline", "grid"}});
    ASSERT_EQ(r.methods.size(), 2u);
    EXPECT_EQ(r.methods[0].n, 23);
    EXPECT_GT(r.methods[0].mean_smape, r.methods[1].mean_smape);
    ASSERT_EQ(r.wilcoxon.size(), 1u);
    ASSERT_TRUE(r.wilcoxon[0].result);
    EXPECT_TRUE(r.wilcoxon[0].result->significant);
    EXPECT_EQ(r.wilcoxon[0].result->mode, stats::WilcoxonMode::exact);
    EXPECT_EQ(r.per_chart.size(), 23u);
    EXPECT_EQ(build_report(mock_scores(1), {{"baseline", "grid"}}), r);
}

TEST(BuildReport, SingleMethodHasNoSignificanceSection)
{
    auto scores = mock_scores(1);
    std::erase_if(scores, [](const SmapeScore& s) { return s.method == "grid"; });
    auto r = build_report(scores, {});
    EXPECT_TRUE(r.wilcoxon.empty());
    auto md = export_table(r, TableFormat::markdown);
    EXPECT_EQ(md.find("Wilcoxon"), std::string::npos);
    EXPECT_THROW(build_report(scores, {{"baseline", "grid"}}), ReportError);
}

TEST(BuildReport, GapsAreListed)
{
    auto scores = mock_scores(1);
    scores.erase(scores.begin() + 3);
    try {
        build_report(scores, {});
        FAIL();
    } catch (const ReportError& e) {
        EXPECT_NE(std::string(e.what()).find("chart_02/grid"), std::string::npos) << e.what();
    }
    auto dup = mock_scores(1);
    dup.push_back(dup.front());
    EXPECT_THROW(build_report(dup, {}), ReportError);
}

TEST(BuildReport, IdenticalColumnsGiveNoteInsteadOfTest)
{
    auto scores = mock_scores(1);
    for (auto& s : scores)
        s.value = 10.0;
    auto r = build_report(scores, {{"baseline", "grid"}});
    ASSERT_EQ(r.wilcoxon.size(), 1u);
    EXPECT_FALSE(r.wilcoxon[0].result);
    EXPECT_FALSE(r.wilcoxon[0].note.empty());
    EXPECT_NE(export_table(r, TableFormat::markdown).find("not computed"), std::string::npos);
}

TEST(Boxplot, CsvHasOneRowPerMethod)
{
    auto r = build_report(mock_scores(2), {});
    auto lines = lines_of(export_boxplot_csv(r));
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "method,median,q1,q3,whisker_low,whisker_high,outliers");
    EXPECT_TRUE(lines[1].starts_with("baseline,"));
}

TEST(Qualitative, IdentityReproducesGold)
{
    auto gt = build_dataset({}, 1)[0];
    NoiseModel full;
    full.sample_count = 100;
    auto csv = export_qualitative(gt, {{"baseline", mock_extract(gt, full)}, {"grid", std::nullopt}});
    auto lines = lines_of(csv);
    ASSERT_EQ(lines.size(), 101u);
    EXPECT_EQ(lines[0], "x,gold_y,baseline_y,grid_y");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto parts = std::vector<std::string>{};
        std::string cell;
        std::istringstream is(lines[i]);
        while (std::getline(is, cell, ','))
            parts.push_back(cell);
        if (lines[i].back() == ',')
            parts.push_back("");
        ASSERT_EQ(parts.size(), 4u) << lines[i];
        EXPECT_EQ(parts[1], parts[2]);
        EXPECT_EQ(parts[3], "");
    }
    EXPECT_THROW(export_qualitative(gt, {}, 9), ReportError);
}
