#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"
#include "chartgrid/extraction/cache.hpp"
#include "chartgrid/extraction/mock.hpp"
#include "chartgrid/extraction/parse.hpp"
#include "chartgrid/raster.hpp"

namespace chartgrid {

struct ExtractionRequest {
    std::string chart_id;
    std::string method;
    std::string prompt;
    const RasterImage* image = nullptr;
};

/// Turns (prompt, image) into raw model text. Implementations throw BackendError for
/// transport failures that outlived their retries and AuthError for credential problems.
/// complete() may be called concurrently.
class ExtractorBackend {
public:
    virtual ~ExtractorBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string complete(const ExtractionRequest& req) = 0;
};

/// Answers from ground truth through mock_extract; never touches the network.
class MockBackend final : public ExtractorBackend {
public:
    MockBackend(const std::vector<ChartGroundTruth>& gold, NoiseModel noise) : noise_(noise)
    {
        validate(noise_);
        for (const auto& gt : gold)
            gold_.emplace(gt.id, &gt);
    }

    std::string id() const override { return "mock:" + describe(noise_); }

    std::string complete(const ExtractionRequest& req) override
    {
        auto it = gold_.find(req.chart_id);
        if (it == gold_.end())
            throw ConfigError("mock backend has no ground truth for chart '" + req.chart_id + "'");
        return format_as_model_response(mock_extract(*it->second, noise_));
    }

private:
    NoiseModel noise_;
    std::map<std::string, const ChartGroundTruth*, std::less<>> gold_;
};

struct ExtractOutcome {
    ExtractionRecord record;
    std::string key;
    bool cache_hit = false;
};

/// Cache lookup, then backend call and tolerant parse. Records that carry a model
/// response are persisted before returning; transport failures are returned uncached
/// so a later run can retry them. AuthError propagates.
inline ExtractOutcome extract(ExtractorBackend& backend, const ExtractionRequest& req, RecordCache* cache)
{
    if (!req.image)
        throw ConfigError("extraction request without an image");
    const auto backend_id = backend.id();
    ExtractOutcome out;
    out.key = cache_key(req.chart_id, req.method, req.prompt, *req.image, backend_id);
    if (cache) {
        if (auto hit = cache->load(out.key)) {
            out.record = std::move(*hit);
            out.cache_hit = true;
            return out;
        }
    }

    auto& rec = out.record;
    rec.chart_id = req.chart_id;
    rec.method = req.method;
    rec.backend_id = backend_id;
    auto t0 = std::chrono::steady_clock::now();
    try {
        rec.raw_response = backend.complete(req);
    } catch (const BackendError& e) {
        rec.parse_error = std::string("backend error: ") + e.what();
        rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }
    rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    try {
        rec.parsed = parse_extraction(rec.raw_response);
    } catch (const ParseError& e) {
        rec.parse_error = e.what();
    }
    if (cache)
        cache->store(out.key, rec);
    return out;
}

} // namespace chartgrid
