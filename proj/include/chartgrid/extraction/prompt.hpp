#pragma once

#include <string>
#include <string_view>

#include "chartgrid/errors.hpp"
#include "chartgrid/hash.hpp"

namespace chartgrid {

enum class PromptKind { baseline, chain_of_thought };

inline std::string_view to_string(PromptKind k) noexcept
{
    return k == PromptKind::baseline ? "baseline" : "chain_of_thought";
}

inline PromptKind prompt_kind_from_string(std::string_view s)
{
    if (s == "baseline")
        return PromptKind::baseline;
    if (s == "chain_of_thought" || s == "cot")
        return PromptKind::chain_of_thought;
    throw ConfigError("unknown prompt kind '" + std::string(s) + "'", "prompt.kind");
}

namespace prompts {

// Default wording is this project's own; override it through the experiment config.
inline constexpr std::string_view default_template =
    "You are given an image of a line chart. Extract the data of every series drawn in the chart. "
    "For each series, read off enough (x, y) coordinate pairs to reproduce the curve faithfully, "
    "including its endpoints, peaks and troughs. {axis_hint}";

inline constexpr std::string_view default_axis_hint =
    "Report x and y in the data units shown by the axis tick labels, not in pixels.";

inline constexpr std::string_view schema_block =
    "Return the final answer as a single JSON object with exactly this structure:\n"
    "{\"label\": \"<chart title>\", \"x_axis\": \"<x-axis label and unit>\", "
    "\"y_axis\": \"<y-axis label and unit>\", "
    "\"series\": [{\"name\": \"<legend entry>\", \"points\": [[x1, y1], [x2, y2]]}]}\n"
    "Use plain numbers for all coordinates.";

inline constexpr std::string_view chain_of_thought_block =
    "Before giving the answer, reason step by step in writing: "
    "(1) read the minimum, maximum and tick values of both axes; "
    "(2) identify each series from the legend; "
    "(3) trace each series from left to right and estimate its coordinates from the ticks.";

} // namespace prompts

struct PromptStrategy {
    PromptKind kind = PromptKind::baseline;
    std::string template_text{prompts::default_template};
    std::string axis_hint{prompts::default_axis_hint};

    friend bool operator==(const PromptStrategy&, const PromptStrategy&) = default;
};

/// Renders the prompt text. The chain-of-thought variant inserts reasoning
/// instructions ahead of the unchanged schema block.
inline std::string build_prompt(const PromptStrategy& s)
{
    if (s.template_text.empty())
        throw ConfigError("prompt template is empty", "prompt.template");
    std::string body = s.template_text;
    constexpr std::string_view placeholder = "{axis_hint}";
    for (auto pos = body.find(placeholder); pos != std::string::npos; pos = body.find(placeholder, pos + s.axis_hint.size()))
        body.replace(pos, placeholder.size(), s.axis_hint);

    std::string out = std::move(body);
    out += "\n\n";
    if (s.kind == PromptKind::chain_of_thought) {
        out += prompts::chain_of_thought_block;
        out += "\n\n";
    }
    out += prompts::schema_block;
    return out;
}

inline std::string prompt_hash(const std::string& prompt)
{
    return sha256_hex(prompt);
}

} // namespace chartgrid
