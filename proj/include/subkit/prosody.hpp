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

#ifndef SUBKIT_PROSODY_HPP
#define SUBKIT_PROSODY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subkit/core.hpp"

namespace subkit {

enum class PauseCategory { None, LineBreak, BlockBreak };

constexpr std::string_view category_name(PauseCategory c) noexcept {
    switch (c) {
    case PauseCategory::LineBreak:
        return "eol";
    case PauseCategory::BlockBreak:
        return "eob";
    default:
        return "none";
    }
}

struct PauseRecord {
    std::size_t after_word_index = 0;
    double gap = 0.0;
    PauseCategory category = PauseCategory::None;

    friend bool operator==(const PauseRecord&, const PauseRecord&) = default;
};

namespace prosody_detail {

/// Decodes the code point starting at `s[i]`; returns its byte length.
inline std::size_t decode(std::string_view s, std::size_t i, char32_t& cp) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    if (i + len > s.size()) {
        len = 1;
    }
    cp = len == 1 ? c : c & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len; ++k) {
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    return len;
}

inline bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
               (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
    case 0x00A1: // ¡
    case 0x00AB: // «
    case 0x00BB: // »
    case 0x00BF: // ¿
    case 0x2013: // –
    case 0x2014: // —
    case 0x2018:
    case 0x2019:
    case 0x201A:
    case 0x201C:
    case 0x201D:
    case 0x201E:
    case 0x2026: // …
    case 0x2039:
    case 0x203A:
        return true;
    default:
        return false;
    }
}

} // namespace prosody_detail

/// Lowercases ASCII and Latin-1 capitals and strips leading and trailing
/// punctuation. Pure-punctuation input normalizes to "".
inline std::string normalize_surface(std::string_view s) {
    struct Cp {
        std::size_t pos, len;
        char32_t cp;
    };
    std::vector<Cp> cps;
    for (std::size_t i = 0; i < s.size();) {
        char32_t cp;
        auto len = prosody_detail::decode(s, i, cp);
        cps.push_back({i, len, cp});
        i += len;
    }
    std::size_t b = 0, e = cps.size();
    while (b < e && prosody_detail::is_punct(cps[b].cp)) {
        ++b;
    }
    while (e > b && prosody_detail::is_punct(cps[e - 1].cp)) {
        --e;
    }
    std::string out;
    for (std::size_t k = b; k < e; ++k) {
        const auto cp = cps[k].cp;
        if (cp >= 'A' && cp <= 'Z') {
            out += static_cast<char>(cp + 32);
        } else if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
            const char32_t lower = cp + 32;
            out += static_cast<char>(0xC0 | (lower >> 6));
            out += static_cast<char>(0x80 | (lower & 0x3F));
        } else {
            out.append(s.substr(cps[k].pos, cps[k].len));
        }
    }
    return out;
}

struct TokenAlignment {
    /// Timed-word index of every (break-stripped) token.
    std::vector<std::size_t> word_of_token;
    std::vector<std::string> warnings;
};

/// Pairs tokens with timed words in order. Counts must match, either token
/// for token or after attaching pure-punctuation tokens (such as "--") to
/// the preceding word; nothing else is guessed.
inline TokenAlignment align_tokens(const AnnotatedSentence& sentence, std::span<const TimedWord> words) {
    const auto tokens = strip_breaks(sentence);
    TokenAlignment out;
    std::vector<std::size_t> unit_first; // first token of each alignment unit
    if (tokens.size() == words.size()) {
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            out.word_of_token.push_back(t);
            unit_first.push_back(t);
        }
    } else {
        std::vector<std::size_t> unit(tokens.size());
        std::size_t units = 0;
        std::size_t pending = 0; // leading punctuation tokens waiting for a word
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            if (normalize_surface(tokens[t]).empty()) {
                if (units == 0) {
                    ++pending;
                } else {
                    unit[t] = units - 1;
                }
                continue;
            }
            unit[t] = units++;
            unit_first.push_back(t);
        }
        if (units != words.size() || units == 0) {
            throw AlignmentError("token/word count mismatch " + std::to_string(tokens.size()) + "≠" +
                                 std::to_string(words.size()));
        }
        for (std::size_t t = 0; t < pending; ++t) {
            unit[t] = 0;
        }
        out.word_of_token = std::move(unit);
    }
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        const auto w = out.word_of_token[t];
        if (unit_first[w] != t && normalize_surface(tokens[t]).empty()) {
            continue;
        }
        if (normalize_surface(tokens[t]) != normalize_surface(words[w].surface)) {
            out.warnings.push_back("token " + std::to_string(t) + " '" + tokens[t] + "' aligned to word '" +
                                   words[w].surface + "'");
        }
    }
    return out;
}

/// Gap between two instants on a microsecond grid, so that shifting every
/// time by the same offset cannot change the result.
inline double pause_between(double end_time, double next_start) {
    const auto us = std::llround(next_start * 1e6) - std::llround(end_time * 1e6);
    return static_cast<double>(us) / 1e6;
}

struct PauseAnalysis {
    std::vector<PauseRecord> records;
    std::vector<std::string> warnings;
};

/// One record per adjacent word pair: the silence between end of word k and
/// start of word k+1, categorized by the break that follows word k's last
/// token. Negative gaps are clamped to zero.
inline PauseAnalysis compute_pauses(const AnnotatedSentence& sentence, std::span<const TimedWord> words) {
    auto alignment = align_tokens(sentence, words);
    PauseAnalysis out;
    out.warnings = std::move(alignment.warnings);
    if (words.size() < 2) {
        return out;
    }

    // Category of the position after each token.
    std::vector<PauseCategory> after_token;
    for (const auto& item : sentence.items()) {
        if (!is_break(item)) {
            after_token.push_back(PauseCategory::None);
        } else {
            after_token.back() = std::get<BreakSymbol>(item) == BreakSymbol::LineBreak ? PauseCategory::LineBreak
                                                                                        : PauseCategory::BlockBreak;
        }
    }
    std::vector<PauseCategory> after_word(words.size(), PauseCategory::None);
    for (std::size_t t = 0; t < after_token.size(); ++t) {
        after_word[alignment.word_of_token[t]] = after_token[t];
    }

    for (std::size_t k = 0; k + 1 < words.size(); ++k) {
        double gap = pause_between(words[k].end_time, words[k + 1].start_time);
        if (gap < 0.0) {
            out.warnings.push_back("overlapping words " + std::to_string(k) + "/" + std::to_string(k + 1) +
                                   " clamped to zero");
            gap = 0.0;
        }
        out.records.push_back({k, gap, after_word[k]});
    }
    return out;
}

struct CategoryStats {
    std::size_t count = 0;
    std::optional<double> mean;
    std::optional<double> stdev; // population

    friend bool operator==(const CategoryStats&, const CategoryStats&) = default;
};

struct PauseStats {
    std::array<CategoryStats, 3> categories{};

    CategoryStats& operator[](PauseCategory c) { return categories[static_cast<std::size_t>(c)]; }
    const CategoryStats& operator[](PauseCategory c) const { return categories[static_cast<std::size_t>(c)]; }
};

/// Count, mean and population standard deviation per category.
inline PauseStats pause_stats(std::span<const PauseRecord> records) {
    PauseStats stats;
    std::array<double, 3> sum{};
    for (const auto& r : records) {
        const auto c = static_cast<std::size_t>(r.category);
        ++stats.categories[c].count;
        sum[c] += r.gap;
    }
    std::array<double, 3> sq{};
    for (std::size_t c = 0; c < 3; ++c) {
        if (stats.categories[c].count > 0) {
            stats.categories[c].mean = sum[c] / static_cast<double>(stats.categories[c].count);
        }
    }
    for (const auto& r : records) {
        const auto c = static_cast<std::size_t>(r.category);
        const double d = r.gap - *stats.categories[c].mean;
        sq[c] += d * d;
    }
    for (std::size_t c = 0; c < 3; ++c) {
        const auto n = stats.categories[c].count;
        if (n == 1) {
            stats.categories[c].stdev = 0.0;
        } else if (n > 1) {
            stats.categories[c].stdev = std::sqrt(sq[c] / static_cast<double>(n));
        }
    }
    return stats;
}

inline constexpr double kDefaultEobPauseThreshold = 0.37;

/// Lower edge of the `<eob>` pause distribution: mean minus one standard
/// deviation. Needs at least two `<eob>` pauses.
inline double derive_eob_threshold(const PauseStats& stats) {
    const auto& eob = stats[PauseCategory::BlockBreak];
    if (eob.count < 2 || !eob.mean || !eob.stdev) {
        throw MismatchError("insufficient <eob> pauses to derive a threshold (need at least 2, have " +
                            std::to_string(eob.count) + "); use the default 0.37 s");
    }
    return *eob.mean - *eob.stdev;
}

} // namespace subkit

#endif
