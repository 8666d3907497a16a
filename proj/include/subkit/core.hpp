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

#ifndef SUBKIT_CORE_HPP
#define SUBKIT_CORE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "subkit/error.hpp"

namespace subkit {

enum class BreakSymbol { LineBreak, BlockBreak };

inline constexpr std::string_view kLineBreakSurface = "<eol>";
inline constexpr std::string_view kBlockBreakSurface = "<eob>";

constexpr std::string_view surface(BreakSymbol b) noexcept {
    return b == BreakSymbol::LineBreak ? kLineBreakSurface : kBlockBreakSurface;
}

inline std::optional<BreakSymbol> parse_break(std::string_view text) noexcept {
    if (text == kLineBreakSurface) {
        return BreakSymbol::LineBreak;
    }
    if (text == kBlockBreakSurface) {
        return BreakSymbol::BlockBreak;
    }
    return std::nullopt;
}

struct Token {
    std::string text;

    friend bool operator==(const Token&, const Token&) = default;
};

using Item = std::variant<Token, BreakSymbol>;

inline bool is_break(const Item& item) noexcept { return std::holds_alternative<BreakSymbol>(item); }

/// A whitespace-tokenized sentence interleaved with break symbols.
///
/// Invariants (checked on construction): at least one token, no leading
/// break, no two adjacent breaks, and every token is non-empty, free of
/// whitespace, and distinct from both break surfaces.
class AnnotatedSentence {
  public:
    static AnnotatedSentence from_items(std::vector<Item> items) {
        bool seen_token = false;
        bool prev_break = true;
        for (const auto& item : items) {
            if (const auto* tok = std::get_if<Token>(&item)) {
                check_token(tok->text);
                seen_token = true;
                prev_break = false;
            } else {
                if (!seen_token) {
                    throw StructureError("sentence begins with break");
                }
                if (prev_break) {
                    throw StructureError("consecutive break symbols");
                }
                prev_break = true;
            }
        }
        if (!seen_token) {
            throw StructureError("sentence has no tokens");
        }
        AnnotatedSentence s;
        s.items_ = std::move(items);
        return s;
    }

    /// Parses a single whitespace-separated line under the strict invariants.
    static AnnotatedSentence from_string(std::string_view text);

    const std::vector<Item>& items() const noexcept { return items_; }

    std::size_t token_count() const noexcept {
        std::size_t n = 0;
        for (const auto& item : items_) {
            n += is_break(item) ? 0 : 1;
        }
        return n;
    }

    std::vector<BreakSymbol> breaks() const {
        std::vector<BreakSymbol> out;
        for (const auto& item : items_) {
            if (const auto* b = std::get_if<BreakSymbol>(&item)) {
                out.push_back(*b);
            }
        }
        return out;
    }

    bool ends_with_block_break() const noexcept {
        return !items_.empty() && is_break(items_.back()) &&
               std::get<BreakSymbol>(items_.back()) == BreakSymbol::BlockBreak;
    }

    friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;

  private:
    AnnotatedSentence() = default;

    static void check_token(const std::string& text) {
        if (text.empty()) {
            throw StructureError("empty token");
        }
        for (char c : text) {
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
                throw StructureError("token contains whitespace: '" + text + "'");
            }
        }
        if (parse_break(text)) {
            throw StructureError("token equals a break symbol");
        }
    }

    std::vector<Item> items_;
};

using Line = std::vector<std::string>;
using UntimedBlock = std::vector<Line>;

/// Number of Unicode scalar values in a UTF-8 string (continuation bytes are
/// not counted; malformed input is counted bytewise on lead bytes).
constexpr std::size_t char_count(std::string_view utf8) noexcept {
    std::size_t n = 0;
    for (unsigned char c : utf8) {
        n += (c & 0xC0u) != 0x80u ? 1 : 0;
    }
    return n;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) {
            out += ' ';
        }
        out += tokens[i];
    }
    return out;
}

/// Display width of a line: tokens plus one space between each pair.
inline std::size_t line_chars(const Line& line) {
    std::size_t n = line.empty() ? 0 : line.size() - 1;
    for (const auto& tok : line) {
        n += char_count(tok);
    }
    return n;
}

inline std::vector<std::string> strip_breaks(const AnnotatedSentence& s) {
    std::vector<std::string> out;
    out.reserve(s.items().size());
    for (const auto& item : s.items()) {
        if (const auto* tok = std::get_if<Token>(&item)) {
            out.push_back(tok->text);
        }
    }
    return out;
}

/// Token and break surfaces in order, as consumed by BLEU with breaks retained.
inline std::vector<std::string> surface_tokens(const AnnotatedSentence& s) {
    std::vector<std::string> out;
    out.reserve(s.items().size());
    for (const auto& item : s.items()) {
        if (const auto* tok = std::get_if<Token>(&item)) {
            out.push_back(tok->text);
        } else {
            out.emplace_back(surface(std::get<BreakSymbol>(item)));
        }
    }
    return out;
}

inline std::string to_string(const AnnotatedSentence& s) { return join_tokens(surface_tokens(s)); }

inline AnnotatedSentence AnnotatedSentence::from_string(std::string_view text) {
    std::vector<Item> items;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') {
            ++j;
        }
        if (j > i) {
            auto word = text.substr(i, j - i);
            if (auto b = parse_break(word)) {
                items.emplace_back(*b);
            } else {
                items.emplace_back(Token{std::string(word)});
            }
        }
        i = j;
    }
    return from_items(std::move(items));
}

/// Splits at block breaks, then at line breaks. A trailing break of either
/// kind never yields an empty block or line.
inline std::vector<UntimedBlock> blocks_from_annotated(const AnnotatedSentence& s) {
    std::vector<UntimedBlock> blocks;
    UntimedBlock block;
    Line line;
    for (const auto& item : s.items()) {
        if (const auto* tok = std::get_if<Token>(&item)) {
            line.push_back(tok->text);
            continue;
        }
        block.push_back(std::move(line));
        line = {};
        if (std::get<BreakSymbol>(item) == BreakSymbol::BlockBreak) {
            blocks.push_back(std::move(block));
            block = {};
        }
    }
    if (!line.empty()) {
        block.push_back(std::move(line));
    }
    if (!block.empty()) {
        blocks.push_back(std::move(block));
    }
    return blocks;
}

/// Inverse of blocks_from_annotated: `<eol>` between lines, `<eob>` after
/// every block including the last.
inline AnnotatedSentence annotated_from_blocks(const std::vector<UntimedBlock>& blocks) {
    if (blocks.empty()) {
        throw StructureError("no blocks");
    }
    std::vector<Item> items;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) {
            throw StructureError("block " + std::to_string(b + 1) + " has no lines");
        }
        for (std::size_t l = 0; l < blocks[b].size(); ++l) {
            const auto& line = blocks[b][l];
            if (line.empty()) {
                throw StructureError("block " + std::to_string(b + 1) + " line " + std::to_string(l + 1) +
                                     " is empty");
            }
            for (const auto& tok : line) {
                items.emplace_back(Token{tok});
            }
            items.emplace_back(l + 1 < blocks[b].size() ? BreakSymbol::LineBreak : BreakSymbol::BlockBreak);
        }
    }
    return AnnotatedSentence::from_items(std::move(items));
}

/// Makes the sentence end in `<eob>`; a trailing `<eol>` is promoted.
inline AnnotatedSentence ensure_final_eob(const AnnotatedSentence& s) {
    auto items = s.items();
    if (is_break(items.back())) {
        items.back() = BreakSymbol::BlockBreak;
    } else {
        items.emplace_back(BreakSymbol::BlockBreak);
    }
    return AnnotatedSentence::from_items(std::move(items));
}

inline AnnotatedSentence strip_final_eob(const AnnotatedSentence& s) {
    if (!s.ends_with_block_break()) {
        return s;
    }
    auto items = s.items();
    items.pop_back();
    return AnnotatedSentence::from_items(std::move(items));
}

inline std::string line_text(const Line& line) { return join_tokens(line); }

struct TimedWord {
    std::string surface;
    double start_time = 0.0;
    double end_time = 0.0;

    friend bool operator==(const TimedWord&, const TimedWord&) = default;
};

/// Strictly positive length of a spoken sentence, in seconds.
class SentenceDuration {
  public:
    explicit SentenceDuration(double seconds) : seconds_(seconds) {
        if (!(seconds > 0.0)) {
            throw StructureError("non-positive duration");
        }
    }

    double seconds() const noexcept { return seconds_; }

    friend bool operator==(const SentenceDuration&, const SentenceDuration&) = default;

  private:
    double seconds_;
};

/// One on-screen subtitle. Times are seconds; SRT output rounds to ms.
struct SubtitleBlock {
    std::size_t index = 1;
    double start = 0.0;
    double end = 0.0;
    std::vector<std::string> lines;

    friend bool operator==(const SubtitleBlock&, const SubtitleBlock&) = default;
};

struct Constraints {
    std::size_t max_chars_per_line = 42;
    double max_chars_per_second = 21.0;
    std::size_t max_lines_per_block = 2;
    double eob_pause_threshold = 0.37;

    void validate() const {
        if (max_chars_per_line == 0 || !(max_chars_per_second > 0.0) || max_lines_per_block == 0 ||
            !(eob_pause_threshold > 0.0)) {
            throw StructureError("constraints must be strictly positive");
        }
    }

    friend bool operator==(const Constraints&, const Constraints&) = default;
};

} // namespace subkit

#endif
