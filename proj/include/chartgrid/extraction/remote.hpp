#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <semaphore>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chartgrid/errors.hpp"
#include "chartgrid/extraction/backend.hpp"
#include "chartgrid/hash.hpp"
#include "chartgrid/png.hpp"

namespace chartgrid {

/// Generic multimodal completion endpoint.
///
/// Request body (POST, JSON):
///   {"model": str, "prompt": str, "temperature": num,
///    "image": {"mime_type": "image/png", "data": <base64 PNG>}}
/// Response body: JSON whose `response_pointer` (default "/text") holds the model text.
/// The key is read from the environment variable `api_key_env` and sent as
/// `<auth_header>: <auth_scheme> <key>`.
struct RemoteConfig {
    std::string endpoint;
    std::string model;
    std::string api_key_env = "CHARTGRID_API_KEY";
    std::string auth_header = "Authorization";
    std::string auth_scheme = "Bearer";
    std::string response_pointer = "/text";
    double temperature = 0.0;
    int timeout_s = 120;
    int max_attempts = 3;
    int initial_backoff_ms = 1000;
    int max_in_flight = 2;
};

struct ParsedUrl {
    std::string origin; ///< scheme://host[:port]
    std::string path;
};

inline ParsedUrl split_url(const std::string& url)
{
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint must be an absolute http(s) URL", "backend.endpoint");
    auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw ConfigError("unsupported URL scheme '" + scheme + "'", "backend.endpoint");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

class RemoteBackend final : public ExtractorBackend {
public:
    explicit RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)), url_(split_url(cfg_.endpoint)), slots_(std::max(1, cfg_.max_in_flight))
    {
        if (cfg_.model.empty())
            throw ConfigError("model must be set", "backend.model");
        if (cfg_.max_attempts < 1)
            throw ConfigError("max_attempts must be at least 1", "backend.max_attempts");
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (!key || !*key)
            throw AuthError("environment variable " + cfg_.api_key_env + " is not set");
        api_key_ = key;
    }

    std::string id() const override { return "remote:" + cfg_.model + "@" + cfg_.endpoint; }

    /// Number of HTTP requests issued so far, retries included.
    long network_calls() const noexcept { return calls_.load(); }

    std::string complete(const ExtractionRequest& req) override
    {
        nlohmann::json body{{"model", cfg_.model},
                            {"prompt", req.prompt},
                            {"temperature", cfg_.temperature},
                            {"image", {{"mime_type", "image/png"}, {"data", base64_encode(png::encode(*req.image))}}}};
        const std::string payload = body.dump();
        httplib::Headers headers{{cfg_.auth_header, cfg_.auth_scheme.empty() ? api_key_ : cfg_.auth_scheme + " " + api_key_}};

        std::string last_error;
        for (int attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long long>(cfg_.initial_backoff_ms) << (attempt - 1)));
            httplib::Result res;
            {
                slots_.acquire();
                struct Release {
                    std::counting_semaphore<>& s;
                    ~Release() { s.release(); }
                } release{slots_};
                httplib::Client client(url_.origin);
                client.set_connection_timeout(cfg_.timeout_s, 0);
                client.set_read_timeout(cfg_.timeout_s, 0);
                client.set_write_timeout(cfg_.timeout_s, 0);
                ++calls_;
                res = client.Post(url_.path, headers, payload, "application/json");
            }
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 401 || res->status == 403)
                throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status < 200 || res->status >= 300)
                throw BackendError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
            return response_text(res->body);
        }
        throw BackendError("giving up after " + std::to_string(cfg_.max_attempts) + " attempts: " + last_error);
    }

private:
    std::string response_text(const std::string& body) const
    {
        auto j = nlohmann::json::parse(body, nullptr, false);
        if (j.is_discarded())
            return body;
        try {
            const auto& v = j.at(nlohmann::json::json_pointer(cfg_.response_pointer));
            return v.is_string() ? v.get<std::string>() : v.dump();
        } catch (const nlohmann::json::exception&) {
            throw BackendError("response has no " + cfg_.response_pointer + " field");
        }
    }

    RemoteConfig cfg_;
    ParsedUrl url_;
    std::string api_key_;
    std::counting_semaphore<> slots_;
    std::atomic<long> calls_{0};
};

} // namespace chartgrid
