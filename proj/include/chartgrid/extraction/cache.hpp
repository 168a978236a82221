#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "chartgrid/errors.hpp"
#include "chartgrid/extraction/result.hpp"
#include "chartgrid/hash.hpp"
#include "chartgrid/raster.hpp"

namespace chartgrid {

/// SHA-256 over every input that can change a model's answer. 64 lowercase hex chars.
inline std::string cache_key(std::string_view chart_id, std::string_view method, std::string_view prompt,
                             const RasterImage& image, std::string_view backend_id)
{
    Sha256 h;
    h.field("chartgrid-extraction-v1")
        .field(chart_id)
        .field(method)
        .field(prompt)
        .field(std::to_string(image.width()) + "x" + std::to_string(image.height()));
    h.update(image.bytes());
    h.field(backend_id);
    return h.hex();
}

/// Directory of `<key>.json` extraction records. Writes are serialized and atomic.
class RecordCache {
public:
    explicit RecordCache(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
    }

    const std::filesystem::path& dir() const noexcept { return dir_; }

    std::filesystem::path path_for(const std::string& key) const { return dir_ / (key + ".json"); }

    std::optional<ExtractionRecord> load(const std::string& key) const
    {
        std::ifstream is(path_for(key), std::ios::binary);
        if (!is)
            return std::nullopt;
        std::ostringstream ss;
        ss << is.rdbuf();
        auto j = nlohmann::json::parse(ss.str(), nullptr, false);
        if (j.is_discarded())
            throw ParseError("corrupt cache entry " + path_for(key).string());
        return extraction_record_from_json(j);
    }

    void store(const std::string& key, const ExtractionRecord& rec)
    {
        std::lock_guard lock(write_mutex_);
        auto final_path = path_for(key);
        auto tmp = final_path;
        tmp += ".tmp";
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os)
                throw IoError("cannot write cache entry " + tmp.string());
            os << to_json(rec).dump(2) << '\n';
            if (!os)
                throw IoError("write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, final_path);
    }

private:
    std::filesystem::path dir_;
    std::mutex write_mutex_;
};

} // namespace chartgrid
