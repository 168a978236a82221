#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"
#include "chartgrid/extraction/result.hpp"

namespace chartgrid {

inline constexpr double smape_ceiling = 200.0;

// ---------------------------------------------------------------------------
// Series matching

enum class MatchMethod { by_name, by_order, none };

inline std::string_view to_string(MatchMethod m) noexcept
{
    switch (m) {
    case MatchMethod::by_name: return "by_name";
    case MatchMethod::by_order: return "by_order";
    case MatchMethod::none: return "none";
    }
    return "?";
}

struct SeriesAssignment {
    std::size_t gold_index = 0;
    std::optional<std::size_t> extracted_index;
    MatchMethod method = MatchMethod::none;

    friend bool operator==(const SeriesAssignment&, const SeriesAssignment&) = default;
};

/// One assignment per gold series, in gold order.
struct SeriesMatch {
    std::vector<SeriesAssignment> assignments;
};

inline std::string normalize_name(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(b, e - b + 1));
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

/// Pass 1 pairs case-insensitive trimmed names; pass 2 pairs the leftovers in listed order.
/// Surplus extracted series stay unassigned.
inline SeriesMatch match_series(const std::vector<std::string>& gold_names, const ExtractionResult& extracted)
{
    if (gold_names.empty())
        throw EvaluationError("match_series: no gold series");
    SeriesMatch m;
    m.assignments.resize(gold_names.size());
    std::vector<bool> used(extracted.series.size(), false);
    for (std::size_t g = 0; g < gold_names.size(); ++g) {
        m.assignments[g].gold_index = g;
        auto want = normalize_name(gold_names[g]);
        for (std::size_t e = 0; e < extracted.series.size(); ++e) {
            if (!used[e] && normalize_name(extracted.series[e].name) == want) {
                used[e] = true;
                m.assignments[g].extracted_index = e;
                m.assignments[g].method = MatchMethod::by_name;
                break;
            }
        }
    }
    std::size_t next = 0;
    for (auto& a : m.assignments) {
        if (a.extracted_index)
            continue;
        while (next < used.size() && used[next])
            ++next;
        if (next == used.size())
            break;
        used[next] = true;
        a.extracted_index = next;
        a.method = MatchMethod::by_order;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Interpolation

/// Piecewise-linear resampling onto `target_xs`, holding endpoint values outside the
/// source x-range. Queries that hit a source x return its y exactly.
inline std::vector<double> interpolate_to_grid(std::span<const Point> points, std::span<const double> target_xs)
{
    if (points.empty())
        throw EvaluationError("interpolate_to_grid: no points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i - 1].x < points[i].x))
            throw EvaluationError("interpolate_to_grid: x values must be strictly increasing");

    std::vector<double> out;
    out.reserve(target_xs.size());
    for (double x : target_xs) {
        if (x <= points.front().x) {
            out.push_back(points.front().y);
            continue;
        }
        if (x >= points.back().x) {
            out.push_back(points.back().y);
            continue;
        }
        auto it = std::lower_bound(points.begin(), points.end(), x, [](const Point& p, double v) { return p.x < v; });
        if (it->x == x) {
            out.push_back(it->y);
            continue;
        }
        const Point& hi = *it;
        const Point& lo = *(it - 1);
        double t = (x - lo.x) / (hi.x - lo.x);
        out.push_back(lo.y + t * (hi.y - lo.y));
    }
    return out;
}

// ---------------------------------------------------------------------------
// SMAPE

/// Per-point SMAPE term in percent; 0/0 is defined as 0.
inline double smape_term(double actual, double forecast) noexcept
{
    double denom = std::abs(actual) + std::abs(forecast);
    if (denom == 0.0)
        return 0.0;
    return 200.0 * std::abs(forecast - actual) / denom;
}

/// (100/n) * sum |F - A| / ((|A| + |F|) / 2), in percent, bounded to [0, 200].
inline double smape(std::span<const double> actual, std::span<const double> forecast)
{
    if (actual.size() != forecast.size())
        throw EvaluationError("smape: length mismatch (" + std::to_string(actual.size()) + " vs " +
                              std::to_string(forecast.size()) + ")");
    if (actual.empty())
        throw EvaluationError("smape: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        sum += smape_term(actual[i], forecast[i]);
    return sum / static_cast<double>(actual.size());
}

// ---------------------------------------------------------------------------
// Chart scoring

struct SeriesScore {
    std::string name;
    double value = 0.0;
    int n_points = 0;
    MatchMethod match = MatchMethod::none;

    friend bool operator==(const SeriesScore&, const SeriesScore&) = default;
};

struct SmapeScore {
    std::string chart_id;
    std::string method;
    double value = 0.0;
    int n_points = 0;
    std::vector<SeriesScore> per_series;

    friend bool operator==(const SmapeScore&, const SmapeScore&) = default;
};

/// Scores an extraction against gold. A missing extraction (failed parse or backend error)
/// and every unmatched gold series cost the 200% ceiling; the chart value is the
/// point-weighted mean over gold series.
inline SmapeScore score_chart(const ChartGroundTruth& gt, const std::optional<ExtractionResult>& extraction,
                              const std::string& method)
{
    SmapeScore score;
    score.chart_id = gt.id;
    score.method = method;

    std::optional<SeriesMatch> match;
    if (extraction && !gt.series.empty())
        match = match_series(gt.series_names(), *extraction);

    double weighted = 0.0;
    for (std::size_t g = 0; g < gt.series.size(); ++g) {
        const auto& gold = gt.series[g];
        SeriesScore ss{gold.name, smape_ceiling, static_cast<int>(gold.points.size()), MatchMethod::none};
        if (match && match->assignments[g].extracted_index) {
            const auto& ext = extraction->series[*match->assignments[g].extracted_index];
            std::vector<double> xs;
            std::vector<double> actual;
            xs.reserve(gold.points.size());
            actual.reserve(gold.points.size());
            for (const auto& p : gold.points) {
                xs.push_back(p.x);
                actual.push_back(p.y);
            }
            auto forecast = interpolate_to_grid(ext.points, xs);
            ss.value = smape(actual, forecast);
            ss.match = match->assignments[g].method;
        }
        weighted += ss.value * ss.n_points;
        score.n_points += ss.n_points;
        score.per_series.push_back(std::move(ss));
    }
    score.value = score.n_points > 0 ? weighted / score.n_points : smape_ceiling;
    return score;
}

inline nlohmann::ordered_json to_json(const SmapeScore& s)
{
    using oj = nlohmann::ordered_json;
    oj per = oj::array();
    for (const auto& p : s.per_series)
        per.push_back(oj{{"name", p.name}, {"smape", p.value}, {"n_points", p.n_points}, {"match", to_string(p.match)}});
    return oj{{"chart_id", s.chart_id}, {"method", s.method}, {"smape", s.value}, {"n_points", s.n_points},
              {"per_series", std::move(per)}};
}

inline SmapeScore smape_score_from_json(const nlohmann::json& j)
{
    try {
        SmapeScore s;
        s.chart_id = j.at("chart_id").get<std::string>();
        s.method = j.at("method").get<std::string>();
        s.value = j.at("smape").get<double>();
        s.n_points = j.at("n_points").get<int>();
        for (const auto& p : j.at("per_series")) {
            SeriesScore ss;
            ss.name = p.at("name").get<std::string>();
            ss.value = p.at("smape").get<double>();
            ss.n_points = p.at("n_points").get<int>();
            auto m = p.at("match").get<std::string>();
            ss.match = m == "by_name" ? MatchMethod::by_name : m == "by_order" ? MatchMethod::by_order : MatchMethod::none;
            s.per_series.push_back(std::move(ss));
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("score record: ") + e.what());
    }
}

} // namespace chartgrid
