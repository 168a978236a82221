#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "chartgrid/dataset.hpp"
#include "chartgrid/errors.hpp"
#include "chartgrid/evaluation.hpp"
#include "chartgrid/extraction/backend.hpp"
#include "chartgrid/extraction/cache.hpp"
#include "chartgrid/extraction/prompt.hpp"
#include "chartgrid/extraction/remote.hpp"
#include "chartgrid/gold_io.hpp"
#include "chartgrid/overlay.hpp"
#include "chartgrid/png.hpp"
#include "chartgrid/render.hpp"
#include "chartgrid/report.hpp"

namespace chartgrid {

namespace fs = std::filesystem;

/// One experimental condition: which image the model sees and how it is asked.
struct ArmConfig {
    std::string name;
    bool use_grid = false;
    PromptKind prompt = PromptKind::baseline;
    NoiseModel noise; ///< used only by the mock backend
};

enum class BackendKind { mock, remote };

struct ExperimentConfig {
    DatasetConfig dataset;
    std::uint64_t seed = 1;
    GridConfig grid;
    PromptStrategy prompt;
    BackendKind backend = BackendKind::mock;
    RemoteConfig remote;
    std::vector<ArmConfig> arms;
    std::vector<MethodPair> pairs; ///< empty means every pair of arms
    fs::path output_dir = "out";
    fs::path cache_dir = "cache";
    int max_in_flight = 2;
    std::vector<int> sweep_densities{25, 50, 100};
};

// ---------------------------------------------------------------------------
// Config file

namespace detail {

class ConfigReader {
public:
    ConfigReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError("expected an object", path_.empty() ? "<root>" : path_);
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    template <typename T>
    void get(const std::string& key, T& out) const
    {
        if (!has(key))
            return;
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("has the wrong type", at(key));
        }
    }

    ConfigReader child(const std::string& key) const { return {j_.at(key), at(key)}; }

    const nlohmann::json& raw(const std::string& key) const { return j_.at(key); }

    void reject_unknown(std::initializer_list<std::string_view> known) const
    {
        for (const auto& [k, v] : j_.items())
            if (std::find(known.begin(), known.end(), k) == known.end())
                throw ConfigError("unknown field", at(k));
    }

private:
    const nlohmann::json& j_;
    std::string path_;
};

inline bool safe_name(const std::string& s)
{
    return !s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") ==
                             std::string::npos && s != "." && s != "..";
}

inline NoiseModel read_noise(const ConfigReader& r)
{
    r.reject_unknown({"sample_count", "y_sigma_frac", "name_corruption_prob", "series_drop_prob", "seed"});
    NoiseModel n;
    r.get("sample_count", n.sample_count);
    r.get("y_sigma_frac", n.y_sigma_frac);
    r.get("name_corruption_prob", n.name_corruption_prob);
    r.get("series_drop_prob", n.series_drop_prob);
    r.get("seed", n.seed);
    try {
        validate(n);
    } catch (const ConfigError& e) {
        // validate() reports "noise.<field>"; re-root it under this reader's path.
        auto f = e.field();
        auto dot = f.find('.');
        auto msg = std::string(e.what()).substr(f.empty() ? 0 : f.size() + 2);
        throw ConfigError(msg, r.at(dot == std::string::npos ? f : f.substr(dot + 1)));
    }
    return n;
}

} // namespace detail

inline void validate(const ExperimentConfig& c)
{
    if (c.arms.size() < 2)
        throw ConfigError("a comparison needs at least 2 arms", "arms");
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.arms.size(); ++i) {
        const auto& a = c.arms[i];
        const auto where = "arms[" + std::to_string(i) + "].name";
        if (!detail::safe_name(a.name))
            throw ConfigError("arm names must be non-empty and use only [A-Za-z0-9_.-]", where);
        if (!names.insert(a.name).second)
            throw ConfigError("duplicate arm name '" + a.name + "'", where);
        validate(a.noise);
    }
    for (std::size_t i = 0; i < c.pairs.size(); ++i)
        for (const auto* m : {&c.pairs[i].first, &c.pairs[i].second})
            if (!names.contains(*m))
                throw ConfigError("unknown arm '" + *m + "'", "pairs[" + std::to_string(i) + "]");
    if (c.max_in_flight < 1)
        throw ConfigError("must be at least 1", "max_in_flight");
    if (c.dataset.count < static_cast<int>(all_style_variants.size()))
        throw ConfigError("must be at least 4", "dataset.count");
    if (c.dataset.n_points < 2)
        throw ConfigError("must be at least 2", "dataset.n_points");
    if (c.grid.cells_per_axis < 2)
        throw ConfigError("must be at least 2", "grid.cells_per_axis");
    if (!(c.grid.opacity > 0.0 && c.grid.opacity <= 1.0))
        throw ConfigError("must lie in (0, 1]", "grid.opacity");
    if (c.grid.thickness_px < 1)
        throw ConfigError("must be at least 1", "grid.thickness_px");
    if (c.backend == BackendKind::remote) {
        if (c.remote.endpoint.empty())
            throw ConfigError("required for the remote backend", "backend.endpoint");
        if (c.remote.model.empty())
            throw ConfigError("required for the remote backend", "backend.model");
        split_url(c.remote.endpoint);
    }
    if (c.prompt.template_text.empty())
        throw ConfigError("must not be empty", "prompt.template");
}

inline ExperimentConfig parse_config(const nlohmann::json& j)
{
    using detail::ConfigReader;
    ExperimentConfig c;
    ConfigReader root(j, "");
    root.reject_unknown({"dataset", "seed", "grid", "prompt", "backend", "arms", "pairs", "output_dir", "cache_dir",
                         "max_in_flight", "sweep_densities"});
    root.get("seed", c.seed);
    root.get("max_in_flight", c.max_in_flight);
    root.get("sweep_densities", c.sweep_densities);
    std::string out_dir = c.output_dir.string();
    std::string cache_dir = c.cache_dir.string();
    root.get("output_dir", out_dir);
    root.get("cache_dir", cache_dir);
    c.output_dir = out_dir;
    c.cache_dir = cache_dir;

    if (root.has("dataset")) {
        auto d = root.child("dataset");
        d.reject_unknown({"count", "n_points", "min_series", "max_series", "seed"});
        d.get("count", c.dataset.count);
        d.get("n_points", c.dataset.n_points);
        d.get("min_series", c.dataset.min_series);
        d.get("max_series", c.dataset.max_series);
        d.get("seed", c.seed);
    }
    if (root.has("grid")) {
        auto g = root.child("grid");
        g.reject_unknown({"cells_per_axis", "opacity", "color", "thickness_px"});
        g.get("cells_per_axis", c.grid.cells_per_axis);
        g.get("opacity", c.grid.opacity);
        g.get("thickness_px", c.grid.thickness_px);
        if (g.has("color")) {
            std::string hex;
            g.get("color", hex);
            c.grid.color = parse_hex_color(hex);
        }
    }
    if (root.has("prompt")) {
        auto p = root.child("prompt");
        p.reject_unknown({"template", "axis_hint"});
        p.get("template", c.prompt.template_text);
        p.get("axis_hint", c.prompt.axis_hint);
    }
    if (root.has("backend")) {
        auto b = root.child("backend");
        std::string kind = "mock";
        b.get("kind", kind);
        if (kind == "mock") {
            b.reject_unknown({"kind"});
            c.backend = BackendKind::mock;
        } else if (kind == "remote") {
            b.reject_unknown({"kind", "endpoint", "model", "api_key_env", "auth_header", "auth_scheme",
                              "response_pointer", "temperature", "timeout_s", "max_attempts", "initial_backoff_ms"});
            c.backend = BackendKind::remote;
            b.get("endpoint", c.remote.endpoint);
            b.get("model", c.remote.model);
            b.get("api_key_env", c.remote.api_key_env);
            b.get("auth_header", c.remote.auth_header);
            b.get("auth_scheme", c.remote.auth_scheme);
            b.get("response_pointer", c.remote.response_pointer);
            b.get("temperature", c.remote.temperature);
            b.get("timeout_s", c.remote.timeout_s);
            b.get("max_attempts", c.remote.max_attempts);
            b.get("initial_backoff_ms", c.remote.initial_backoff_ms);
        } else {
            throw ConfigError("must be 'mock' or 'remote'", "backend.kind");
        }
    }
    if (root.has("arms")) {
        const auto& arms = root.raw("arms");
        if (!arms.is_array())
            throw ConfigError("expected an array", "arms");
        for (std::size_t i = 0; i < arms.size(); ++i) {
            ConfigReader a(arms[i], "arms[" + std::to_string(i) + "]");
            a.reject_unknown({"name", "use_grid", "prompt", "noise"});
            ArmConfig arm;
            a.get("name", arm.name);
            a.get("use_grid", arm.use_grid);
            if (a.has("prompt")) {
                std::string kind;
                a.get("prompt", kind);
                try {
                    arm.prompt = prompt_kind_from_string(kind);
                } catch (const ConfigError& e) {
                    throw ConfigError("unknown prompt kind '" + kind + "'", a.at("prompt"));
                }
            }
            if (a.has("noise"))
                arm.noise = detail::read_noise(a.child("noise"));
            c.arms.push_back(std::move(arm));
        }
    }
    if (root.has("pairs")) {
        const auto& pairs = root.raw("pairs");
        if (!pairs.is_array())
            throw ConfigError("expected an array", "pairs");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& p = pairs[i];
            if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
                throw ConfigError("expected [arm, arm]", "pairs[" + std::to_string(i) + "]");
            c.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
    }
    c.remote.max_in_flight = c.max_in_flight;
    validate(c);
    return c;
}

inline ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    auto text = ss.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(detail::describe_offset(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what(), path.string());
    }
    return parse_config(j);
}

inline std::vector<MethodPair> effective_pairs(const ExperimentConfig& c)
{
    if (!c.pairs.empty())
        return c.pairs;
    std::vector<std::string> names;
    for (const auto& a : c.arms)
        names.push_back(a.name);
    return all_pairs(names);
}

inline std::string arm_prompt(const ExperimentConfig& c, const ArmConfig& arm)
{
    PromptStrategy s = c.prompt;
    s.kind = arm.prompt;
    return build_prompt(s);
}

/// Backend identity for an arm without constructing the backend (no credentials needed).
inline std::string arm_backend_id(const ExperimentConfig& c, const ArmConfig& arm)
{
    if (c.backend == BackendKind::mock)
        return "mock:" + describe(arm.noise);
    return "remote:" + c.remote.model + "@" + c.remote.endpoint;
}

/// Traceable summary of every input that shapes the results.
inline std::string fingerprint(const ExperimentConfig& c)
{
    char grid[128];
    std::snprintf(grid, sizeof grid, "%dx%d@%.17g#%s/%dpx", c.grid.cells_per_axis, c.grid.cells_per_axis,
                  c.grid.opacity, to_hex(c.grid.color).c_str(), c.grid.thickness_px);
    std::string out = "seed=" + std::to_string(c.seed) + ";charts=" + std::to_string(c.dataset.count) + "x" +
                      std::to_string(c.dataset.n_points) + ";grid=" + grid + ";arms=";
    for (std::size_t i = 0; i < c.arms.size(); ++i) {
        const auto& a = c.arms[i];
        out += (i ? "," : "") + a.name + "{" + (a.use_grid ? "grid" : "plain") + "," +
               std::string(to_string(a.prompt)) + ",prompt=" + prompt_hash(arm_prompt(c, a)).substr(0, 16) +
               ",backend=" + arm_backend_id(c, a) + "}";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output layout

struct RunPaths {
    fs::path root;

    fs::path gold() const { return root / "gold.json"; }
    fs::path image(const std::string& id) const { return root / "images" / (id + ".png"); }
    fs::path overlay(const std::string& arm, const std::string& id) const { return root / "overlay" / arm / (id + ".png"); }
    fs::path extractions() const { return root / "extractions.jsonl"; }
    fs::path failures() const { return root / "failures.txt"; }
    fs::path scores_jsonl() const { return root / "scores.jsonl"; }
    fs::path scores_csv() const { return root / "scores.csv"; }
    fs::path report_md() const { return root / "report.md"; }
    fs::path report_json() const { return root / "report.json"; }
    fs::path table_csv() const { return root / "table.csv"; }
    fs::path boxplot_csv() const { return root / "boxplot.csv"; }
    fs::path qualitative(const std::string& file) const { return root / "qualitative" / file; }
};

namespace detail {

inline void write_text(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os << text;
    if (!os)
        throw IoError("write failed: " + path.string());
}

inline std::vector<nlohmann::json> read_jsonl(const fs::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (line.empty())
            continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ParseError(path.string() + ": line " + std::to_string(n) + ": invalid JSON");
        out.push_back(std::move(j));
    }
    return out;
}

inline GoldStandard require_gold(const RunPaths& p)
{
    if (!fs::exists(p.gold()))
        throw UsageError(p.gold().string() + " not found; run 'generate' first");
    return load_gold(p.gold());
}

} // namespace detail

/// Progress sink; defaults to silence.
struct RunContext {
    std::ostream* log = nullptr;
    /// Overrides backend construction, e.g. to inject a test transport.
    std::function<std::unique_ptr<ExtractorBackend>(const ExperimentConfig&, const ArmConfig&,
                                                    const std::vector<ChartGroundTruth>&)>
        backend_factory;
};

// ---------------------------------------------------------------------------
// Commands

inline GoldStandard cmd_generate(const ExperimentConfig& c, const RunContext& ctx = {})
{
    RunPaths p{c.output_dir};
    GoldStandard gold{gold_dataset_version, c.seed, build_dataset(c.dataset, c.seed)};
    fs::create_directories(p.root / "images");
    save_gold(p.gold(), gold);
    for (const auto& gt : gold.charts) {
        auto rendered = render_chart(gt);
        png::write_file(p.image(gt.id), rendered.image);
        if (ctx.log)
            *ctx.log << "[generate] " << gt.id << " " << to_string(classify(gt.style)) << " " << gt.series.size()
                     << " series\n";
    }
    return gold;
}

inline void cmd_overlay(const ExperimentConfig& c, const RunContext& ctx = {})
{
    RunPaths p{c.output_dir};
    auto gold = detail::require_gold(p);
    for (const auto& arm : c.arms) {
        if (!arm.use_grid)
            continue;
        fs::create_directories(p.root / "overlay" / arm.name);
        for (const auto& gt : gold.charts) {
            auto img = png::read_file(p.image(gt.id));
            png::write_file(p.overlay(arm.name, gt.id), apply_grid(img, c.grid));
        }
        if (ctx.log)
            *ctx.log << "[overlay] " << arm.name << ": " << gold.charts.size() << " images\n";
    }
}

struct ExtractSummary {
    std::vector<ExtractOutcome> outcomes; ///< arm-major, chart-minor
    int cache_hits = 0;
    int failures = 0;
};

inline std::unique_ptr<ExtractorBackend> make_backend(const ExperimentConfig& c, const ArmConfig& arm,
                                                      const std::vector<ChartGroundTruth>& gold)
{
    if (c.backend == BackendKind::mock)
        return std::make_unique<MockBackend>(gold, arm.noise);
    return std::make_unique<RemoteBackend>(c.remote);
}

inline nlohmann::ordered_json extraction_line(const ExtractOutcome& o)
{
    using oj = nlohmann::ordered_json;
    const auto& r = o.record;
    return oj{{"chart_id", r.chart_id},
              {"method", r.method},
              {"backend_id", r.backend_id},
              {"cache_key", o.key},
              {"raw_response", r.raw_response},
              {"parsed", r.parsed ? to_json(*r.parsed) : oj(nullptr)},
              {"parse_error", r.parse_error ? oj(*r.parse_error) : oj(nullptr)}};
}

inline ExtractSummary cmd_extract(const ExperimentConfig& c, const RunContext& ctx = {})
{
    RunPaths p{c.output_dir};
    auto gold = detail::require_gold(p);
    const auto& charts = gold.charts;

    // Backends are built up front so missing credentials fail before any request.
    std::vector<std::unique_ptr<ExtractorBackend>> backends;
    for (const auto& arm : c.arms) {
        if (ctx.backend_factory)
            backends.push_back(ctx.backend_factory(c, arm, charts));
        else
            backends.push_back(make_backend(c, arm, charts));
    }

    struct Job {
        std::size_t arm;
        std::size_t chart;
    };
    std::vector<Job> jobs;
    for (std::size_t a = 0; a < c.arms.size(); ++a)
        for (std::size_t k = 0; k < charts.size(); ++k)
            jobs.push_back({a, k});

    std::vector<std::string> prompts;
    for (const auto& arm : c.arms)
        prompts.push_back(arm_prompt(c, arm));

    RecordCache cache(c.cache_dir);
    ExtractSummary summary;
    summary.outcomes.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr fatal;
    std::mutex mu;

    auto worker = [&] {
        for (;;) {
            if (stop.load())
                return;
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            const auto& job = jobs[i];
            const auto& arm = c.arms[job.arm];
            const auto& gt = charts[job.chart];
            try {
                auto img = png::read_file(arm.use_grid ? p.overlay(arm.name, gt.id) : p.image(gt.id));
                ExtractionRequest req{gt.id, arm.name, prompts[job.arm], &img};
                auto out = extract(*backends[job.arm], req, &cache);
                std::lock_guard lock(mu);
                if (ctx.log)
                    *ctx.log << "[extract] " << arm.name << " " << gt.id << " "
                             << (out.record.ok() ? "ok" : "failed") << (out.cache_hit ? " (cached)" : "") << "\n";
                summary.outcomes[i] = std::move(out);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!fatal)
                    fatal = std::current_exception();
                stop = true;
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const auto n = std::min<std::size_t>(static_cast<std::size_t>(c.max_in_flight), jobs.size());
        for (std::size_t t = 0; t < n; ++t)
            pool.emplace_back(worker);
    }
    if (fatal)
        std::rethrow_exception(fatal);

    std::string lines;
    for (const auto& o : summary.outcomes) {
        summary.cache_hits += o.cache_hit ? 1 : 0;
        summary.failures += o.record.ok() ? 0 : 1;
        lines += extraction_line(o).dump() + "\n";
    }
    detail::write_text(p.extractions(), lines);
    return summary;
}

struct LoadedExtraction {
    std::string chart_id;
    std::string method;
    std::optional<ExtractionResult> parsed;
    std::optional<std::string> error;
};

inline std::vector<LoadedExtraction> load_extractions(const fs::path& path)
{
    std::vector<LoadedExtraction> out;
    for (const auto& j : detail::read_jsonl(path)) {
        try {
            LoadedExtraction e;
            e.chart_id = j.at("chart_id").get<std::string>();
            e.method = j.at("method").get<std::string>();
            if (!j.at("parsed").is_null())
                e.parsed = extraction_result_from_json(j.at("parsed"));
            if (!j.at("parse_error").is_null())
                e.error = j.at("parse_error").get<std::string>();
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(path.string() + ": " + ex.what());
        }
    }
    return out;
}

inline std::vector<SmapeScore> cmd_evaluate(const ExperimentConfig& c, const RunContext& ctx = {})
{
    RunPaths p{c.output_dir};
    auto gold = detail::require_gold(p);
    if (!fs::exists(p.extractions()))
        throw UsageError(p.extractions().string() + " not found; run 'extract' first");
    auto extractions = load_extractions(p.extractions());

    std::map<std::pair<std::string, std::string>, const LoadedExtraction*> by_cell;
    for (const auto& e : extractions)
        by_cell[{e.chart_id, e.method}] = &e;

    std::vector<SmapeScore> scores;
    std::string jsonl;
    std::string failures;
    for (const auto& arm : c.arms) {
        for (const auto& gt : gold.charts) {
            auto it = by_cell.find({gt.id, arm.name});
            std::optional<ExtractionResult> parsed;
            if (it == by_cell.end())
                failures += gt.id + "\t" + arm.name + "\tno extraction record\n";
            else if (it->second->error)
                failures += gt.id + "\t" + arm.name + "\t" + *it->second->error + "\n";
            else
                parsed = it->second->parsed;
            auto s = score_chart(gt, parsed, arm.name);
            jsonl += to_json(s).dump() + "\n";
            scores.push_back(std::move(s));
        }
    }
    detail::write_text(p.scores_jsonl(), jsonl);
    detail::write_text(p.scores_csv(), export_scores_csv(scores));
    detail::write_text(p.failures(), failures);
    if (ctx.log)
        *ctx.log << "[evaluate] " << scores.size() << " scores\n";
    return scores;
}

inline ComparisonReport cmd_report(const ExperimentConfig& c, const RunContext& ctx = {})
{
    RunPaths p{c.output_dir};
    auto gold = detail::require_gold(p);
    if (!fs::exists(p.scores_jsonl()))
        throw UsageError(p.scores_jsonl().string() + " not found; run 'evaluate' first");
    std::vector<SmapeScore> scores;
    for (const auto& j : detail::read_jsonl(p.scores_jsonl()))
        scores.push_back(smape_score_from_json(j));

    auto report = build_report(scores, effective_pairs(c), fingerprint(c));
    detail::write_text(p.report_md(), export_markdown_report(report));
    detail::write_text(p.report_json(), export_table(report, TableFormat::json));
    detail::write_text(p.table_csv(), export_table(report, TableFormat::csv));
    detail::write_text(p.boxplot_csv(), export_boxplot_csv(report));

    std::map<std::pair<std::string, std::string>, std::optional<ExtractionResult>> parsed;
    if (fs::exists(p.extractions()))
        for (auto& e : load_extractions(p.extractions()))
            parsed[{e.chart_id, e.method}] = std::move(e.parsed);
    for (const auto& gt : gold.charts) {
        std::vector<std::pair<std::string, std::optional<ExtractionResult>>> per_method;
        for (const auto& arm : c.arms) {
            auto it = parsed.find({gt.id, arm.name});
            per_method.emplace_back(arm.name, it == parsed.end() ? std::nullopt : it->second);
        }
        for (std::size_t s = 0; s < gt.series.size(); ++s) {
            auto file = s == 0 ? gt.id + ".csv" : gt.id + ".series" + std::to_string(s + 1) + ".csv";
            detail::write_text(p.qualitative(file), export_qualitative(gt, per_method, s));
        }
    }
    if (ctx.log)
        *ctx.log << "[report] " << p.report_md().string() << "\n";
    return report;
}

inline ComparisonReport cmd_run(const ExperimentConfig& c, const RunContext& ctx = {})
{
    cmd_generate(c, ctx);
    cmd_overlay(c, ctx);
    cmd_extract(c, ctx);
    cmd_evaluate(c, ctx);
    return cmd_report(c, ctx);
}

/// Full run per grid density into `<output_dir>/grid_<d>`. Every density is checked
/// against every chart size before anything is written.
inline std::vector<ComparisonReport> cmd_sweep(const ExperimentConfig& c, const std::vector<int>& densities,
                                               const RunContext& ctx = {})
{
    if (densities.empty())
        throw UsageError("sweep needs at least one density");
    auto charts = build_dataset(c.dataset, c.seed);
    for (int d : densities) {
        GridConfig g = c.grid;
        g.cells_per_axis = d;
        for (const auto& gt : charts) {
            try {
                validate(g, gt.style.width_px, gt.style.height_px);
            } catch (const ConfigError& e) {
                throw ConfigError("invalid grid density " + std::to_string(d) + " for " + gt.id + ": " + e.what(),
                                  "densities");
            }
        }
    }
    std::vector<ComparisonReport> reports;
    for (int d : densities) {
        ExperimentConfig sub = c;
        sub.grid.cells_per_axis = d;
        sub.output_dir = c.output_dir / ("grid_" + std::to_string(d));
        if (ctx.log)
            *ctx.log << "[sweep] density " << d << " -> " << sub.output_dir.string() << "\n";
        reports.push_back(cmd_run(sub, ctx));
    }
    return reports;
}

} // namespace chartgrid
