#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"

namespace chartgrid {

using ojson = nlohmann::ordered_json;

inline constexpr int gold_dataset_version = 1;

struct GoldStandard {
    int dataset_version = gold_dataset_version;
    std::uint64_t seed = 0;
    std::vector<ChartGroundTruth> charts;

    friend bool operator==(const GoldStandard&, const GoldStandard&) = default;
};

inline ojson to_json(const AxisInfo& a)
{
    ojson j;
    j["label"] = a.label;
    j["unit"] = a.unit ? ojson(*a.unit) : ojson(nullptr);
    j["min"] = a.min;
    j["max"] = a.max;
    return j;
}

inline ojson to_json(const ChartStyle& s)
{
    return ojson{{"color_mode", s.color_mode == ColorMode::monochrome ? "monochrome" : "color"},
                 {"legend", s.legend == LegendPlacement::inside_plot ? "inside_plot" : "outside_plot"},
                 {"gridlines", s.gridlines},
                 {"width_px", s.width_px},
                 {"height_px", s.height_px}};
}

inline ojson to_json(const SeriesData& s)
{
    ojson pts = ojson::array();
    for (const auto& p : s.points)
        pts.push_back(ojson::array({p.x, p.y}));
    return ojson{{"name", s.name}, {"points", std::move(pts)}};
}

inline ojson to_json(const ChartGroundTruth& gt)
{
    ojson series = ojson::array();
    for (const auto& s : gt.series)
        series.push_back(to_json(s));
    return ojson{{"id", gt.id},       {"title", gt.title},       {"seed", gt.seed},
                 {"x_axis", to_json(gt.x_axis)}, {"y_axis", to_json(gt.y_axis)}, {"style", to_json(gt.style)},
                 {"series", std::move(series)}};
}

inline ojson to_json(const GoldStandard& g)
{
    ojson charts = ojson::array();
    for (const auto& c : g.charts)
        charts.push_back(to_json(c));
    return ojson{{"dataset_version", g.dataset_version}, {"seed", g.seed}, {"charts", std::move(charts)}};
}

namespace detail {

// Field access that reports a JSON-pointer-ish path on failure.
template <typename T>
T field(const nlohmann::json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(path + "/" + key + ": missing field");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + "/" + key + ": " + e.what());
    }
}

inline AxisInfo axis_from_json(const nlohmann::json& j, const std::string& path)
{
    AxisInfo a;
    a.label = field<std::string>(j, "label", path);
    if (j.contains("unit") && !j.at("unit").is_null())
        a.unit = field<std::string>(j, "unit", path);
    a.min = field<double>(j, "min", path);
    a.max = field<double>(j, "max", path);
    return a;
}

inline ChartStyle style_from_json(const nlohmann::json& j, const std::string& path)
{
    ChartStyle s;
    auto cm = field<std::string>(j, "color_mode", path);
    if (cm == "monochrome")
        s.color_mode = ColorMode::monochrome;
    else if (cm == "color")
        s.color_mode = ColorMode::color;
    else
        throw ParseError(path + "/color_mode: unknown value '" + cm + "'");
    auto lg = field<std::string>(j, "legend", path);
    if (lg == "inside_plot")
        s.legend = LegendPlacement::inside_plot;
    else if (lg == "outside_plot")
        s.legend = LegendPlacement::outside_plot;
    else
        throw ParseError(path + "/legend: unknown value '" + lg + "'");
    s.gridlines = field<bool>(j, "gridlines", path);
    s.width_px = field<int>(j, "width_px", path);
    s.height_px = field<int>(j, "height_px", path);
    return s;
}

inline SeriesData series_from_json(const nlohmann::json& j, const std::string& path)
{
    SeriesData s;
    s.name = field<std::string>(j, "name", path);
    auto pts = field<nlohmann::json>(j, "points", path);
    if (!pts.is_array())
        throw ParseError(path + "/points: expected array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError(path + "/points/" + std::to_string(i) + ": expected [x, y]");
        s.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return s;
}

inline ChartGroundTruth chart_from_json(const nlohmann::json& j, const std::string& path)
{
    ChartGroundTruth gt;
    gt.id = field<std::string>(j, "id", path);
    gt.title = field<std::string>(j, "title", path);
    gt.seed = field<std::uint64_t>(j, "seed", path);
    gt.x_axis = axis_from_json(field<nlohmann::json>(j, "x_axis", path), path + "/x_axis");
    gt.y_axis = axis_from_json(field<nlohmann::json>(j, "y_axis", path), path + "/y_axis");
    gt.style = style_from_json(field<nlohmann::json>(j, "style", path), path + "/style");
    auto series = field<nlohmann::json>(j, "series", path);
    if (!series.is_array())
        throw ParseError(path + "/series: expected array");
    for (std::size_t i = 0; i < series.size(); ++i)
        gt.series.push_back(series_from_json(series[i], path + "/series/" + std::to_string(i)));
    return gt;
}

/// Converts a byte offset into "line L, column C" (both 1-based).
inline std::string describe_offset(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + " (byte " + std::to_string(offset) + ")";
}

} // namespace detail

inline std::string serialize_gold(const GoldStandard& g)
{
    return to_json(g).dump(1) + "\n";
}

inline GoldStandard parse_gold(std::string_view text, const std::string& source = "<gold>")
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ": " + detail::describe_offset(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
    GoldStandard g;
    g.dataset_version = detail::field<int>(j, "dataset_version", "");
    if (g.dataset_version != gold_dataset_version)
        throw ParseError(source + ": unsupported dataset_version " + std::to_string(g.dataset_version));
    g.seed = detail::field<std::uint64_t>(j, "seed", "");
    auto charts = detail::field<nlohmann::json>(j, "charts", "");
    if (!charts.is_array())
        throw ParseError(source + ": /charts: expected array");
    for (std::size_t i = 0; i < charts.size(); ++i)
        g.charts.push_back(detail::chart_from_json(charts[i], "/charts/" + std::to_string(i)));
    validate_dataset(g.charts);
    return g;
}

inline void save_gold(const std::filesystem::path& path, const GoldStandard& g)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os << serialize_gold(g);
    if (!os)
        throw IoError("write failed: " + path.string());
}

inline GoldStandard load_gold(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_gold(ss.str(), path.string());
}

} // namespace chartgrid
