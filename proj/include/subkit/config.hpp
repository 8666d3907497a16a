// Copyright 2026 The subkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBKIT_CONFIG_HPP
#define SUBKIT_CONFIG_HPP

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "subkit/core.hpp"
#include "subkit/formats.hpp"
#include "subkit/segmenter.hpp"
#include "subkit/ter.hpp"

namespace subkit {

/// Everything that influences a run besides the input files.
struct RunConfig {
    Constraints constraints;
    bool ensure_final_eob = false;
    bool strip_final_eob = false;
    bool merge_break_types = false;
    ParseMode parse_mode = ParseMode::Strict;
    SegmentationCost cost;
    double min_block_gap = 0.024;

    void validate() const {
        constraints.validate();
        cost.validate();
        if (ensure_final_eob && strip_final_eob) {
            throw StructureError("ensure_final_eob and strip_final_eob are mutually exclusive");
        }
        if (!(min_block_gap >= 0.0)) {
            throw StructureError("min_block_gap must be non-negative");
        }
    }

    AnnotatedSentence normalize(const AnnotatedSentence& s) const {
        if (ensure_final_eob) {
            return subkit::ensure_final_eob(s);
        }
        if (strip_final_eob) {
            return subkit::strip_final_eob(s);
        }
        return s;
    }

    std::vector<AnnotatedSentence> normalize(const std::vector<AnnotatedSentence>& sentences) const {
        std::vector<AnnotatedSentence> out;
        out.reserve(sentences.size());
        for (const auto& s : sentences) {
            out.push_back(normalize(s));
        }
        return out;
    }
};

namespace config_detail {

inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline bool parse_bool(std::string_view v, bool& out) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        out = false;
        return true;
    }
    return false;
}

} // namespace config_detail

/// Keys accepted by set_config_value and emitted by config_values.
inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "max_chars_per_line", "max_chars_per_second", "max_lines_per_block", "eob_pause_threshold",
        "ensure_final_eob",   "strip_final_eob",      "merge_break_types",   "strict",
        "w_balance",          "w_pause_miss",         "w_break_density",     "w_short_line",
        "min_line_chars",     "w_function_word",      "w_dangling_punct",    "w_eol_pause_bonus",
        "eol_bonus_min_pause", "force_eob_on_pause",  "min_block_gap",       "function_words",
    };
    return keys;
}

/// Sets one field from its textual value; throws FormatError on an unknown
/// key or a malformed value.
inline void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line = 0) {
    value = detail::trim(value);
    auto bad = [&] { return FormatError("invalid value '" + std::string(value) + "' for " + std::string(key), line); };
    auto num = [&](double& out) {
        if (!detail::parse_double(value, out)) {
            throw bad();
        }
    };
    auto count = [&](std::size_t& out) {
        if (!detail::parse_index(value, out)) {
            throw bad();
        }
    };
    auto flag = [&](bool& out) {
        if (!config_detail::parse_bool(value, out)) {
            throw bad();
        }
    };
    if (key == "max_chars_per_line") {
        count(cfg.constraints.max_chars_per_line);
    } else if (key == "max_chars_per_second") {
        num(cfg.constraints.max_chars_per_second);
    } else if (key == "max_lines_per_block") {
        count(cfg.constraints.max_lines_per_block);
    } else if (key == "eob_pause_threshold") {
        num(cfg.constraints.eob_pause_threshold);
    } else if (key == "ensure_final_eob") {
        flag(cfg.ensure_final_eob);
    } else if (key == "strip_final_eob") {
        flag(cfg.strip_final_eob);
    } else if (key == "merge_break_types") {
        flag(cfg.merge_break_types);
    } else if (key == "strict") {
        bool strict;
        flag(strict);
        cfg.parse_mode = strict ? ParseMode::Strict : ParseMode::Lenient;
    } else if (key == "w_balance") {
        num(cfg.cost.w_balance);
    } else if (key == "w_pause_miss") {
        num(cfg.cost.w_pause_miss);
    } else if (key == "w_break_density") {
        num(cfg.cost.w_break_density);
    } else if (key == "w_short_line") {
        num(cfg.cost.w_short_line);
    } else if (key == "min_line_chars") {
        count(cfg.cost.min_line_chars);
    } else if (key == "w_function_word") {
        num(cfg.cost.w_function_word);
    } else if (key == "w_dangling_punct") {
        num(cfg.cost.w_dangling_punct);
    } else if (key == "w_eol_pause_bonus") {
        num(cfg.cost.w_eol_pause_bonus);
    } else if (key == "eol_bonus_min_pause") {
        num(cfg.cost.eol_bonus_min_pause);
    } else if (key == "force_eob_on_pause") {
        flag(cfg.cost.force_eob_on_pause);
    } else if (key == "min_block_gap") {
        num(cfg.min_block_gap);
    } else if (key == "function_words") {
        cfg.cost.function_words.clear();
        std::size_t pos = 0;
        while (pos <= value.size()) {
            auto comma = value.find(',', pos);
            auto word = detail::trim(value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos));
            if (!word.empty()) {
                cfg.cost.function_words.emplace(word);
            }
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
    } else {
        throw FormatError("unknown config key '" + std::string(key) + "'", line);
    }
}

/// `key = value` lines; `#` starts a comment line. Later keys win.
inline RunConfig parse_config(std::string_view text, RunConfig cfg = {}) {
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = detail::trim(lines[ln]);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("expected key = value", ln + 1);
        }
        set_config_value(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1), ln + 1);
    }
    return cfg;
}

/// Every field as text, keyed by its config name.
inline std::map<std::string, std::string> config_values(const RunConfig& cfg) {
    using config_detail::format_number;
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    std::string words;
    for (const auto& w : cfg.cost.function_words) {
        words += words.empty() ? w : "," + w;
    }
    return {
        {"max_chars_per_line", std::to_string(cfg.constraints.max_chars_per_line)},
        {"max_chars_per_second", format_number(cfg.constraints.max_chars_per_second)},
        {"max_lines_per_block", std::to_string(cfg.constraints.max_lines_per_block)},
        {"eob_pause_threshold", format_number(cfg.constraints.eob_pause_threshold)},
        {"ensure_final_eob", b(cfg.ensure_final_eob)},
        {"strip_final_eob", b(cfg.strip_final_eob)},
        {"merge_break_types", b(cfg.merge_break_types)},
        {"strict", b(cfg.parse_mode == ParseMode::Strict)},
        {"w_balance", format_number(cfg.cost.w_balance)},
        {"w_pause_miss", format_number(cfg.cost.w_pause_miss)},
        {"w_break_density", format_number(cfg.cost.w_break_density)},
        {"w_short_line", format_number(cfg.cost.w_short_line)},
        {"min_line_chars", std::to_string(cfg.cost.min_line_chars)},
        {"w_function_word", format_number(cfg.cost.w_function_word)},
        {"w_dangling_punct", format_number(cfg.cost.w_dangling_punct)},
        {"w_eol_pause_bonus", format_number(cfg.cost.w_eol_pause_bonus)},
        {"eol_bonus_min_pause", format_number(cfg.cost.eol_bonus_min_pause)},
        {"force_eob_on_pause", b(cfg.cost.force_eob_on_pause)},
        {"min_block_gap", format_number(cfg.min_block_gap)},
        {"function_words", words},
    };
}

inline std::string emit_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : config_values(cfg)) {
        out += k + " = " + v + "\n";
    }
    return out;
}

} // namespace subkit

#endif
