#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chartgrid/errors.hpp"
#include "chartgrid/extraction/result.hpp"

namespace chartgrid {

namespace detail {

inline constexpr int max_json_depth = 64;

/// End index (inclusive) of the balanced object starting at text[open], or npos when
/// unbalanced or nested deeper than max_json_depth. String literals are skipped.
inline std::size_t match_object(std::string_view text, std::size_t open)
{
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        switch (c) {
        case '"':
            in_string = true;
            break;
        case '{':
        case '[':
            if (++depth > max_json_depth)
                return std::string_view::npos;
            break;
        case '}':
        case ']':
            if (--depth == 0)
                return c == '}' ? i : std::string_view::npos;
            if (depth < 0)
                return std::string_view::npos;
            break;
        default:
            break;
        }
    }
    return std::string_view::npos;
}

/// Earliest parseable JSON object in free text, preferring one that carries "series".
inline std::optional<nlohmann::json> locate_json_object(std::string_view text)
{
    std::optional<nlohmann::json> first_object;
    for (std::size_t pos = text.find('{'); pos != std::string_view::npos; pos = text.find('{', pos + 1)) {
        auto end = match_object(text, pos);
        if (end == std::string_view::npos)
            continue;
        auto j = nlohmann::json::parse(text.substr(pos, end - pos + 1), nullptr, false);
        if (j.is_discarded() || !j.is_object())
            continue;
        if (j.contains("series"))
            return j;
        if (!first_object)
            first_object = std::move(j);
    }
    return first_object;
}

inline std::optional<double> coerce_number(const nlohmann::json& v)
{
    double d = 0.0;
    if (v.is_number()) {
        d = v.get<double>();
    } else if (v.is_string()) {
        auto s = v.get_ref<const std::string&>();
        auto b = s.find_first_not_of(" \t\r\n");
        auto e = s.find_last_not_of(" \t\r\n");
        if (b == std::string::npos)
            return std::nullopt;
        std::string_view t(s.data() + b, e - b + 1);
        if (!t.empty() && t.front() == '+')
            t.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), d);
        if (ec != std::errc{} || ptr != t.data() + t.size())
            return std::nullopt;
    } else {
        return std::nullopt;
    }
    if (!std::isfinite(d))
        return std::nullopt;
    return d;
}

inline std::optional<std::string> optional_text(const nlohmann::json& obj, const char* key)
{
    if (!obj.contains(key))
        return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_null())
        return std::nullopt;
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

/// Sorts by x (stable) and replaces runs of equal x with their mean y.
inline std::vector<Point> sort_and_collapse(std::vector<Point> pts)
{
    std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    std::vector<Point> out;
    for (std::size_t i = 0; i < pts.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < pts.size() && pts[j].x == pts[i].x)
            sum += pts[j++].y;
        out.push_back({pts[i].x, sum / static_cast<double>(j - i)});
        i = j;
    }
    return out;
}

} // namespace detail

/// Tolerant parser for model output. Accepts prose or code fences around the JSON,
/// numeric strings, and points as [x, y] or {"x": .., "y": ..}. Series with no usable
/// points are dropped. Throws ParseError naming the failure; never anything else.
inline ExtractionResult parse_extraction(std::string_view raw)
{
    std::optional<nlohmann::json> found;
    try {
        found = detail::locate_json_object(raw);
    } catch (const std::exception& e) {
        throw ParseError(std::string("no JSON object found: ") + e.what());
    }
    if (!found)
        throw ParseError("no JSON object found in response");
    const auto& j = *found;
    if (!j.contains("series"))
        throw ParseError("schema mismatch: missing 'series'");
    const auto& series = j.at("series");
    if (!series.is_array())
        throw ParseError("schema mismatch: 'series' is not an array");

    ExtractionResult r;
    try {
        r.label = detail::optional_text(j, "label");
        r.x_axis_info = detail::optional_text(j, "x_axis");
        r.y_axis_info = detail::optional_text(j, "y_axis");
        for (std::size_t i = 0; i < series.size(); ++i) {
            const auto& s = series[i];
            const std::string where = "series[" + std::to_string(i) + "]";
            if (!s.is_object())
                throw ParseError("schema mismatch: " + where + " is not an object");
            SeriesData sd;
            if (!s.contains("name") || s.at("name").is_null())
                throw ParseError("schema mismatch: " + where + ".name missing");
            sd.name = s.at("name").is_string() ? s.at("name").get<std::string>() : s.at("name").dump();
            if (!s.contains("points") || !s.at("points").is_array())
                throw ParseError("schema mismatch: " + where + ".points missing or not an array");
            std::vector<Point> pts;
            const auto& arr = s.at("points");
            for (std::size_t k = 0; k < arr.size(); ++k) {
                const auto& p = arr[k];
                std::optional<double> x;
                std::optional<double> y;
                if (p.is_array() && p.size() == 2) {
                    x = detail::coerce_number(p[0]);
                    y = detail::coerce_number(p[1]);
                } else if (p.is_object() && p.contains("x") && p.contains("y")) {
                    x = detail::coerce_number(p.at("x"));
                    y = detail::coerce_number(p.at("y"));
                }
                if (!x || !y)
                    throw ParseError("schema mismatch: " + where + ".points[" + std::to_string(k) +
                                     "] is not a numeric (x, y) pair");
                pts.push_back({*x, *y});
            }
            if (pts.empty())
                continue;
            sd.points = detail::sort_and_collapse(std::move(pts));
            r.series.push_back(std::move(sd));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schema mismatch: ") + e.what());
    }
    if (r.series.empty())
        throw ParseError("empty series list");
    return r;
}

} // namespace chartgrid
