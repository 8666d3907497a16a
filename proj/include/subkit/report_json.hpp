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

// JSON documents written by the command-line tools. Objects are key-ordered
// (nlohmann::json sorts keys), absent optional figures are null.

#ifndef SUBKIT_REPORT_JSON_HPP
#define SUBKIT_REPORT_JSON_HPP

#include <optional>

#include <nlohmann/json.hpp>

#include "subkit/config.hpp"
#include "subkit/metrics.hpp"
#include "subkit/prosody.hpp"

namespace subkit {

inline constexpr int kSchemaVersion = 1;

namespace json_detail {

template <typename T>
nlohmann::json optional_value(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace json_detail

/// Exactly: bleu, bleu_nob, cpl, cps, ter_br, break_acc, counts, warnings.
inline nlohmann::json to_json(const MetricsReport& r) {
    return {
        {"bleu", r.bleu},
        {"bleu_nob", r.bleu_nob},
        {"cpl", r.cpl},
        {"cps", json_detail::optional_value(r.cps)},
        {"ter_br", r.ter_br},
        {"break_acc", json_detail::optional_value(r.break_acc)},
        {"counts",
         {{"sentences", r.counts.sentences}, {"blocks", r.counts.blocks}, {"filtered_pairs", r.counts.filtered_pairs}}},
        {"warnings", r.warnings},
    };
}

inline nlohmann::json to_json(const CategoryStats& s) {
    return {{"count", s.count}, {"mean", json_detail::optional_value(s.mean)},
            {"stdev", json_detail::optional_value(s.stdev)}};
}

inline nlohmann::json to_json(const PauseStats& s) {
    nlohmann::json out = nlohmann::json::object();
    for (auto c : {PauseCategory::None, PauseCategory::LineBreak, PauseCategory::BlockBreak}) {
        out[std::string(category_name(c))] = to_json(s[c]);
    }
    return out;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : config_values(cfg)) {
        out[k] = v;
    }
    return out;
}

} // namespace subkit

#endif
