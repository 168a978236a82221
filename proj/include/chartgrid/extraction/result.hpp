#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"

namespace chartgrid {

/// What a model (or the mock) reported for one chart. Series points are sorted
/// by x with duplicate x collapsed; each series has at least one point.
struct ExtractionResult {
    std::optional<std::string> label;
    std::optional<std::string> x_axis_info;
    std::optional<std::string> y_axis_info;
    std::vector<SeriesData> series;

    friend bool operator==(const ExtractionResult&, const ExtractionResult&) = default;
};

/// One extraction attempt. Exactly one of `parsed` / `parse_error` is set; transport
/// failures are reported through `parse_error` with an empty `raw_response`.
struct ExtractionRecord {
    std::string chart_id;
    std::string method;
    std::string backend_id;
    std::string raw_response;
    std::optional<ExtractionResult> parsed;
    std::optional<std::string> parse_error;
    double latency_ms = 0.0;

    bool ok() const noexcept { return parsed.has_value(); }

    friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

inline nlohmann::ordered_json to_json(const ExtractionResult& r)
{
    using oj = nlohmann::ordered_json;
    auto opt = [](const std::optional<std::string>& s) { return s ? oj(*s) : oj(nullptr); };
    oj series = oj::array();
    for (const auto& s : r.series) {
        oj pts = oj::array();
        for (const auto& p : s.points)
            pts.push_back(oj::array({p.x, p.y}));
        series.push_back(oj{{"name", s.name}, {"points", std::move(pts)}});
    }
    return oj{{"label", opt(r.label)}, {"x_axis", opt(r.x_axis_info)}, {"y_axis", opt(r.y_axis_info)},
              {"series", std::move(series)}};
}

inline nlohmann::ordered_json to_json(const ExtractionRecord& r)
{
    using oj = nlohmann::ordered_json;
    return oj{{"chart_id", r.chart_id},
              {"method", r.method},
              {"backend_id", r.backend_id},
              {"raw_response", r.raw_response},
              {"parsed", r.parsed ? to_json(*r.parsed) : oj(nullptr)},
              {"parse_error", r.parse_error ? oj(*r.parse_error) : oj(nullptr)},
              {"latency_ms", r.latency_ms}};
}

/// Strict reader for results this program serialized itself.
inline ExtractionResult extraction_result_from_json(const nlohmann::json& j)
{
    try {
        ExtractionResult r;
        auto opt = [&](const char* key) -> std::optional<std::string> {
            if (!j.contains(key) || j.at(key).is_null())
                return std::nullopt;
            return j.at(key).get<std::string>();
        };
        r.label = opt("label");
        r.x_axis_info = opt("x_axis");
        r.y_axis_info = opt("y_axis");
        for (const auto& s : j.at("series")) {
            SeriesData sd;
            sd.name = s.at("name").get<std::string>();
            for (const auto& p : s.at("points"))
                sd.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            r.series.push_back(std::move(sd));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("extraction result: ") + e.what());
    }
}

inline ExtractionRecord extraction_record_from_json(const nlohmann::json& j)
{
    try {
        ExtractionRecord r;
        r.chart_id = j.at("chart_id").get<std::string>();
        r.method = j.at("method").get<std::string>();
        r.backend_id = j.at("backend_id").get<std::string>();
        r.raw_response = j.at("raw_response").get<std::string>();
        if (!j.at("parsed").is_null())
            r.parsed = extraction_result_from_json(j.at("parsed"));
        if (!j.at("parse_error").is_null())
            r.parse_error = j.at("parse_error").get<std::string>();
        r.latency_ms = j.at("latency_ms").get<double>();
        if (r.parsed.has_value() == r.parse_error.has_value())
            throw ParseError("extraction record: exactly one of parsed/parse_error must be set");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("extraction record: ") + e.what());
    }
}

} // namespace chartgrid
