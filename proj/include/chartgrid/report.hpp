#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"
#include "chartgrid/evaluation.hpp"
#include "chartgrid/extraction/result.hpp"
#include "chartgrid/stats.hpp"

namespace chartgrid {

struct MethodSummary {
    std::string name;
    int n = 0;
    double mean_smape = 0.0;
    double std_dev = 0.0;
    stats::BoxplotStats boxplot;

    friend bool operator==(const MethodSummary&, const MethodSummary&) = default;
};

struct ChartRow {
    std::string chart_id;
    std::vector<double> scores; ///< aligned with ComparisonReport::methods

    friend bool operator==(const ChartRow&, const ChartRow&) = default;
};

struct PairwiseTest {
    std::string method_a;
    std::string method_b;
    std::optional<stats::WilcoxonResult> result;
    std::string note; ///< why `result` is absent

    friend bool operator==(const PairwiseTest&, const PairwiseTest&) = default;
};

struct ComparisonReport {
    std::vector<MethodSummary> methods;
    std::vector<ChartRow> per_chart;
    std::vector<PairwiseTest> wilcoxon;
    std::string config_fingerprint;

    friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

using MethodPair = std::pair<std::string, std::string>;

/// Every unordered pair of `methods` in listed order: (0,1), (0,2), ..., (1,2), ...
inline std::vector<MethodPair> all_pairs(const std::vector<std::string>& methods)
{
    std::vector<MethodPair> out;
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            out.emplace_back(methods[i], methods[j]);
    return out;
}

/// Aggregates a complete chart x method score matrix. Method and chart order follow
/// first appearance in `scores`.
inline ComparisonReport build_report(const std::vector<SmapeScore>& scores, const std::vector<MethodPair>& pairs,
                                     std::string fingerprint = {})
{
    std::vector<std::string> methods;
    std::vector<std::string> charts;
    std::map<std::pair<std::string, std::string>, double> cell;
    for (const auto& s : scores) {
        if (std::find(methods.begin(), methods.end(), s.method) == methods.end())
            methods.push_back(s.method);
        if (std::find(charts.begin(), charts.end(), s.chart_id) == charts.end())
            charts.push_back(s.chart_id);
        if (!cell.emplace(std::pair{s.chart_id, s.method}, s.value).second)
            throw ReportError("duplicate score for chart '" + s.chart_id + "', method '" + s.method + "'");
    }
    if (methods.empty())
        throw ReportError("no scores to report");

    std::vector<std::string> gaps;
    for (const auto& c : charts)
        for (const auto& m : methods)
            if (!cell.contains({c, m}))
                gaps.push_back(c + "/" + m);
    if (!gaps.empty()) {
        std::string msg = "score matrix has " + std::to_string(gaps.size()) + " missing (chart/method) cell(s):";
        for (const auto& g : gaps)
            msg += " " + g;
        throw ReportError(msg);
    }
    if (charts.size() < 2)
        throw ReportError("need at least 2 charts to compute a standard deviation");

    ComparisonReport r;
    r.config_fingerprint = std::move(fingerprint);
    std::map<std::string, std::vector<double>> column;
    for (const auto& m : methods) {
        auto& col = column[m];
        for (const auto& c : charts)
            col.push_back(cell.at({c, m}));
        auto d = stats::descriptive(col);
        r.methods.push_back({m, static_cast<int>(col.size()), d.mean, d.std_dev, stats::boxplot_stats(col)});
    }
    for (const auto& c : charts) {
        ChartRow row{c, {}};
        for (const auto& m : methods)
            row.scores.push_back(cell.at({c, m}));
        r.per_chart.push_back(std::move(row));
    }
    for (const auto& [a, b] : pairs) {
        if (!column.contains(a) || !column.contains(b))
            throw ReportError("pair (" + a + ", " + b + ") names an unknown method");
        PairwiseTest t{a, b, std::nullopt, {}};
        try {
            t.result = stats::wilcoxon_signed_rank(column.at(a), column.at(b));
        } catch (const InsufficientDataError& e) {
            t.note = e.what();
        }
        r.wilcoxon.push_back(std::move(t));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Export

enum class TableFormat { markdown, csv, json };

inline TableFormat table_format_from_string(std::string_view s)
{
    if (s == "markdown" || s == "md")
        return TableFormat::markdown;
    if (s == "csv")
        return TableFormat::csv;
    if (s == "json")
        return TableFormat::json;
    throw UsageError("unknown table format '" + std::string(s) + "' (expected markdown, csv or json)");
}

namespace detail {

inline std::string fixed2(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string num(double v, const char* fmt = "%.17g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline std::string significance_line(const PairwiseTest& t)
{
    if (!t.result)
        return "Wilcoxon signed-rank (" + t.method_a + " vs " + t.method_b + "): not computed (" + t.note + ")";
    const auto& w = *t.result;
    return "Wilcoxon signed-rank (" + t.method_a + " vs " + t.method_b + "): W = " + detail::num(w.w_statistic, "%.1f") +
           ", n = " + std::to_string(w.n_effective) + ", " + std::string(stats::to_string(w.mode)) +
           ", p = " + detail::num(w.p_value, "%.4g") + (w.significant ? " (significant at alpha = 0.05)"
                                                                    : " (not significant at alpha = 0.05)");
}

inline nlohmann::ordered_json to_json(const stats::BoxplotStats& b)
{
    return {{"median", b.median}, {"q1", b.q1}, {"q3", b.q3}, {"whisker_low", b.whisker_low},
            {"whisker_high", b.whisker_high}, {"outliers", b.outliers}};
}

inline nlohmann::ordered_json to_json(const stats::WilcoxonResult& w)
{
    return {{"w_statistic", w.w_statistic}, {"w_plus", w.w_plus},   {"w_minus", w.w_minus},
            {"n_effective", w.n_effective}, {"p_value", w.p_value}, {"mode", stats::to_string(w.mode)},
            {"significant", w.significant}};
}

inline nlohmann::ordered_json to_json(const ComparisonReport& r)
{
    using oj = nlohmann::ordered_json;
    oj methods = oj::array();
    for (const auto& m : r.methods)
        methods.push_back(oj{{"name", m.name}, {"n", m.n}, {"mean_smape", m.mean_smape}, {"std_dev", m.std_dev},
                             {"boxplot", to_json(m.boxplot)}});
    oj rows = oj::array();
    for (const auto& row : r.per_chart)
        rows.push_back(oj{{"chart_id", row.chart_id}, {"scores", row.scores}});
    oj tests = oj::array();
    for (const auto& t : r.wilcoxon)
        tests.push_back(oj{{"method_a", t.method_a}, {"method_b", t.method_b},
                           {"result", t.result ? to_json(*t.result) : oj(nullptr)}, {"note", t.note}});
    return oj{{"config_fingerprint", r.config_fingerprint}, {"methods", std::move(methods)},
              {"per_chart", std::move(rows)}, {"wilcoxon", std::move(tests)}};
}

inline ComparisonReport report_from_json(const nlohmann::json& j)
{
    try {
        ComparisonReport r;
        r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
        for (const auto& m : j.at("methods")) {
            MethodSummary s;
            s.name = m.at("name").get<std::string>();
            s.n = m.at("n").get<int>();
            s.mean_smape = m.at("mean_smape").get<double>();
            s.std_dev = m.at("std_dev").get<double>();
            const auto& b = m.at("boxplot");
            s.boxplot = {b.at("median").get<double>(),      b.at("q1").get<double>(),
                         b.at("q3").get<double>(),          b.at("whisker_low").get<double>(),
                         b.at("whisker_high").get<double>(), b.at("outliers").get<std::vector<double>>()};
            r.methods.push_back(std::move(s));
        }
        for (const auto& row : j.at("per_chart"))
            r.per_chart.push_back({row.at("chart_id").get<std::string>(), row.at("scores").get<std::vector<double>>()});
        for (const auto& t : j.at("wilcoxon")) {
            PairwiseTest p{t.at("method_a").get<std::string>(), t.at("method_b").get<std::string>(), std::nullopt,
                           t.at("note").get<std::string>()};
            if (!t.at("result").is_null()) {
                const auto& w = t.at("result");
                stats::WilcoxonResult wr;
                wr.w_statistic = w.at("w_statistic").get<double>();
                wr.w_plus = w.at("w_plus").get<double>();
                wr.w_minus = w.at("w_minus").get<double>();
                wr.n_effective = w.at("n_effective").get<int>();
                wr.p_value = w.at("p_value").get<double>();
                wr.mode = w.at("mode").get<std::string>() == "exact" ? stats::WilcoxonMode::exact
                                                                      : stats::WilcoxonMode::normal_approx;
                wr.significant = w.at("significant").get<bool>();
                p.result = wr;
            }
            r.wilcoxon.push_back(std::move(p));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

/// Method | Mean SMAPE, % | Std. Dev., % at two decimals. Markdown adds one
/// significance line per tested pair; CSV is header plus one row per method.
inline std::string export_table(const ComparisonReport& r, TableFormat fmt)
{
    switch (fmt) {
    case TableFormat::markdown: {
        std::string out = "| Method | Mean SMAPE, % | Std. Dev., % |\n|---|---:|---:|\n";
        for (const auto& m : r.methods)
            out += "| " + m.name + " | " + detail::fixed2(m.mean_smape) + " | " + detail::fixed2(m.std_dev) + " |\n";
        if (!r.wilcoxon.empty())
            out += "\n";
        for (const auto& t : r.wilcoxon)
            out += significance_line(t) + "\n";
        return out;
    }
    case TableFormat::csv: {
        std::string out = "Method,\"Mean SMAPE, %\",\"Std. Dev., %\"\n";
        for (const auto& m : r.methods)
            out += detail::csv_field(m.name) + "," + detail::fixed2(m.mean_smape) + "," + detail::fixed2(m.std_dev) + "\n";
        return out;
    }
    case TableFormat::json:
        return to_json(r).dump(2) + "\n";
    }
    throw UsageError("unknown table format");
}

inline std::string export_table(const ComparisonReport& r, std::string_view fmt)
{
    return export_table(r, table_format_from_string(fmt));
}

/// Full human-readable report: the table plus box-plot statistics and per-chart scores.
inline std::string export_markdown_report(const ComparisonReport& r)
{
    std::string out = "# Chart extraction accuracy\n\n";
    out += "Fingerprint: `" + r.config_fingerprint + "`\n\n";
    out += export_table(r, TableFormat::markdown);
    out += "\n## Distribution\n\n| Method | Median | Q1 | Q3 | Whisker low | Whisker high | Outliers |\n|---|---:|---:|---:|---:|---:|---|\n";
    for (const auto& m : r.methods) {
        std::string outl;
        for (double o : m.boxplot.outliers)
            outl += (outl.empty() ? "" : " ") + detail::fixed2(o);
        out += "| " + m.name + " | " + detail::fixed2(m.boxplot.median) + " | " + detail::fixed2(m.boxplot.q1) + " | " +
               detail::fixed2(m.boxplot.q3) + " | " + detail::fixed2(m.boxplot.whisker_low) + " | " +
               detail::fixed2(m.boxplot.whisker_high) + " | " + outl + " |\n";
    }
    out += "\n## Per-chart SMAPE, %\n\n| Chart |";
    std::string rule = "|---|";
    for (const auto& m : r.methods) {
        out += " " + m.name + " |";
        rule += "---:|";
    }
    out += "\n" + rule + "\n";
    for (const auto& row : r.per_chart) {
        out += "| " + row.chart_id + " |";
        for (double v : row.scores)
            out += " " + detail::fixed2(v) + " |";
        out += "\n";
    }
    return out;
}

inline std::string export_boxplot_csv(const ComparisonReport& r)
{
    std::string out = "method,median,q1,q3,whisker_low,whisker_high,outliers\n";
    for (const auto& m : r.methods) {
        std::string outl;
        for (double o : m.boxplot.outliers)
            outl += (outl.empty() ? "" : ";") + detail::num(o);
        const auto& b = m.boxplot;
        out += detail::csv_field(m.name) + "," + detail::num(b.median) + "," + detail::num(b.q1) + "," +
               detail::num(b.q3) + "," + detail::num(b.whisker_low) + "," + detail::num(b.whisker_high) + "," + outl + "\n";
    }
    return out;
}

inline std::string export_scores_csv(const std::vector<SmapeScore>& scores)
{
    std::string out = "chart_id,method,smape,n_points\n";
    for (const auto& s : scores)
        out += detail::csv_field(s.chart_id) + "," + detail::csv_field(s.method) + "," + detail::num(s.value) + "," +
               std::to_string(s.n_points) + "\n";
    return out;
}

/// Curve-overlay data for one gold series: x, gold_y, then one interpolated column per
/// method. Methods without a usable extraction leave their cells empty.
inline std::string export_qualitative(const ChartGroundTruth& gt,
                                      const std::vector<std::pair<std::string, std::optional<ExtractionResult>>>& extractions,
                                      std::size_t series_index = 0)
{
    if (series_index >= gt.series.size())
        throw ReportError("chart '" + gt.id + "' has no series " + std::to_string(series_index));
    const auto& gold = gt.series[series_index];
    std::vector<double> xs;
    for (const auto& p : gold.points)
        xs.push_back(p.x);

    std::vector<std::optional<std::vector<double>>> columns;
    const auto names = gt.series_names();
    for (const auto& [method, ext] : extractions) {
        std::optional<std::vector<double>> col;
        if (ext) {
            auto m = match_series(names, *ext);
            if (auto idx = m.assignments[series_index].extracted_index)
                col = interpolate_to_grid(ext->series[*idx].points, xs);
        }
        columns.push_back(std::move(col));
    }

    std::string out = "x,gold_y";
    for (const auto& [method, ext] : extractions)
        out += "," + detail::csv_field(method + "_y");
    out += "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += detail::num(xs[i]) + "," + detail::num(gold.points[i].y);
        for (const auto& col : columns) {
            out += ",";
            if (col)
                out += detail::num((*col)[i]);
        }
        out += "\n";
    }
    return out;
}

} // namespace chartgrid
