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

#ifndef SUBKIT_FORMATS_HPP
#define SUBKIT_FORMATS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "subkit/core.hpp"

namespace subkit {

// Text helpers shared by the parsers.
namespace detail {

inline std::string_view strip_bom(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }
    return text;
}

/// Splits on '\n', drops a trailing '\r' from every line, and ignores the
/// empty segment after a final newline.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    text = strip_bom(text);
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto end = nl == std::string_view::npos ? text.size() : nl;
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    return lines;
}

inline std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n\v\f";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline std::vector<std::string_view> split_tabs(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto tab = s.find('\t', pos);
        if (tab == std::string_view::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, tab - pos));
        pos = tab + 1;
    }
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_index(std::string_view s, std::size_t& out) {
    s = trim(s);
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool is_markup_token(std::string_view tok) {
    return tok.size() >= 3 && tok.front() == '<' && tok.back() == '>';
}

} // namespace detail

// ---------------------------------------------------------------------------
// Annotated corpora

struct CorpusFile {
    std::vector<AnnotatedSentence> sentences;
    /// 1-based source line of each sentence.
    std::vector<std::size_t> source_lines;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return sentences.size(); }
};

enum class ParseMode { Strict, Lenient };

/// One sentence per line. In lenient mode leading breaks are dropped,
/// adjacent breaks collapse to the stronger one (`<eob>` wins) and blank
/// lines are skipped, each with a warning.
inline CorpusFile parse_annotated_corpus(std::string_view text, ParseMode mode = ParseMode::Strict) {
    CorpusFile corpus;
    const bool strict = mode == ParseMode::Strict;
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t lineno = ln + 1;
        auto words = detail::split_whitespace(lines[ln]);
        std::vector<Item> items;
        std::size_t tokens = 0;
        for (auto w : words) {
            if (auto b = parse_break(w)) {
                if (items.empty()) {
                    if (strict) {
                        throw FormatError("sentence begins with break", lineno);
                    }
                    corpus.warnings.push_back("line " + std::to_string(lineno) + ": dropped leading break");
                    continue;
                }
                if (is_break(items.back())) {
                    if (strict) {
                        throw FormatError("consecutive break symbols", lineno);
                    }
                    auto& prev = std::get<BreakSymbol>(items.back());
                    if (*b == BreakSymbol::BlockBreak) {
                        prev = BreakSymbol::BlockBreak;
                    }
                    corpus.warnings.push_back("line " + std::to_string(lineno) + ": collapsed consecutive breaks");
                    continue;
                }
                items.emplace_back(*b);
            } else {
                if (detail::is_markup_token(w)) {
                    throw FormatError("unknown markup token '" + std::string(w) + "'", lineno);
                }
                items.emplace_back(Token{std::string(w)});
                ++tokens;
            }
        }
        if (tokens == 0) {
            if (strict) {
                throw FormatError(words.empty() ? "empty line" : "sentence has no tokens", lineno);
            }
            corpus.warnings.push_back("line " + std::to_string(lineno) + ": skipped line without tokens");
            continue;
        }
        corpus.sentences.push_back(AnnotatedSentence::from_items(std::move(items)));
        corpus.source_lines.push_back(lineno);
    }
    return corpus;
}

inline std::string emit_annotated_corpus(const std::vector<AnnotatedSentence>& sentences) {
    std::string out;
    for (const auto& s : sentences) {
        out += to_string(s);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// SRT

inline std::int64_t to_millis(double seconds) { return std::llround(seconds * 1000.0); }

inline std::string format_srt_timestamp(std::int64_t ms) {
    if (ms < 0) {
        throw StructureError("negative time");
    }
    const auto h = ms / 3'600'000;
    const auto m = (ms / 60'000) % 60;
    const auto s = (ms / 1000) % 60;
    const auto frac = ms % 1000;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(h),
                  static_cast<long long>(m), static_cast<long long>(s), static_cast<long long>(frac));
    return buf;
}

/// Parses `HH:MM:SS,mmm` (two or more hour digits) into milliseconds.
inline bool parse_srt_timestamp(std::string_view s, std::int64_t& ms) {
    auto digits = [](std::string_view d, std::int64_t& v) {
        if (d.empty()) {
            return false;
        }
        v = 0;
        for (char c : d) {
            if (c < '0' || c > '9') {
                return false;
            }
            v = v * 10 + (c - '0');
        }
        return true;
    };
    auto c1 = s.find(':');
    if (c1 == std::string_view::npos || c1 < 2) {
        return false;
    }
    if (s.size() != c1 + 10 || s[c1 + 3] != ':' || s[c1 + 6] != ',') {
        return false;
    }
    std::int64_t h, m, sec, frac;
    if (!digits(s.substr(0, c1), h) || !digits(s.substr(c1 + 1, 2), m) || !digits(s.substr(c1 + 4, 2), sec) ||
        !digits(s.substr(c1 + 7, 3), frac) || m > 59 || sec > 59) {
        return false;
    }
    ms = ((h * 60 + m) * 60 + sec) * 1000 + frac;
    return true;
}

/// Canonical SRT: index line, timing line, text lines, one blank line
/// between consecutive blocks. Indices must increase by one.
inline std::string emit_srt(const std::vector<SubtitleBlock>& blocks) {
    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        const std::string where = "block " + std::to_string(b.index);
        if (b.index == 0) {
            throw StructureError(where + ": index must be positive");
        }
        if (i > 0 && b.index != blocks[i - 1].index + 1) {
            throw StructureError(where + ": non-consecutive index");
        }
        if (b.start < 0.0 || b.end < 0.0) {
            throw StructureError(where + ": negative time");
        }
        const auto start = to_millis(b.start);
        const auto end = to_millis(b.end);
        if (end <= start) {
            throw StructureError(where + ": end must be after start");
        }
        if (i > 0 && start < to_millis(blocks[i - 1].start)) {
            throw StructureError(where + ": start precedes previous block");
        }
        if (b.lines.empty()) {
            throw StructureError(where + ": no text lines");
        }
        if (i > 0) {
            out += '\n';
        }
        out += std::to_string(b.index);
        out += '\n';
        out += format_srt_timestamp(start);
        out += " --> ";
        out += format_srt_timestamp(end);
        out += '\n';
        for (const auto& line : b.lines) {
            if (detail::trim(line).empty() || line.find('\n') != std::string::npos) {
                throw StructureError(where + ": blank or multi-line text line");
            }
            out += line;
            out += '\n';
        }
    }
    return out;
}

namespace detail {

inline bool parse_timing_line(std::string_view line, std::int64_t& start, std::int64_t& end) {
    line = trim(line);
    auto arrow = line.find(" --> ");
    if (arrow == std::string_view::npos) {
        return false;
    }
    return parse_srt_timestamp(line.substr(0, arrow), start) && parse_srt_timestamp(line.substr(arrow + 5), end);
}

inline bool is_index_line(std::string_view line) {
    std::size_t v;
    return parse_index(line, v) && v > 0;
}

} // namespace detail

/// Inverse of emit_srt. Accepts CRLF line endings and a UTF-8 BOM. A new
/// block also starts when an index line directly precedes a timing line, so
/// inputs without blank separators still parse. Strict mode rejects
/// non-consecutive indices and overlapping blocks.
inline std::vector<SubtitleBlock> parse_srt(std::string_view text, ParseMode mode = ParseMode::Strict) {
    std::vector<SubtitleBlock> blocks;
    auto lines = detail::split_lines(text);
    std::size_t i = 0;
    auto skip_blank = [&] {
        while (i < lines.size() && detail::trim(lines[i]).empty()) {
            ++i;
        }
    };
    skip_blank();
    while (i < lines.size()) {
        const std::size_t index_line = i + 1;
        SubtitleBlock b;
        if (!detail::parse_index(lines[i], b.index) || b.index == 0) {
            throw FormatError("expected subtitle index", index_line);
        }
        ++i;
        std::int64_t start = 0, end = 0;
        if (i >= lines.size() || !detail::parse_timing_line(lines[i], start, end)) {
            throw FormatError("block " + std::to_string(b.index) + ": malformed timestamp", i + 1);
        }
        if (end <= start) {
            throw FormatError("block " + std::to_string(b.index) + ": end must be after start", i + 1);
        }
        ++i;
        while (i < lines.size() && !detail::trim(lines[i]).empty()) {
            if (detail::is_index_line(lines[i]) && i + 1 < lines.size()) {
                std::int64_t s2, e2;
                if (detail::parse_timing_line(lines[i + 1], s2, e2)) {
                    break;
                }
            }
            b.lines.emplace_back(lines[i]);
            ++i;
        }
        if (b.lines.empty()) {
            throw FormatError("block " + std::to_string(b.index) + ": no text lines", index_line);
        }
        b.start = static_cast<double>(start) / 1000.0;
        b.end = static_cast<double>(end) / 1000.0;
        if (mode == ParseMode::Strict && !blocks.empty()) {
            const auto& prev = blocks.back();
            if (b.index != prev.index + 1) {
                throw FormatError("block " + std::to_string(b.index) + ": non-consecutive index", index_line);
            }
            if (start < to_millis(prev.end)) {
                throw FormatError("block " + std::to_string(b.index) + ": overlaps previous block", index_line);
            }
        }
        blocks.push_back(std::move(b));
        skip_blank();
    }
    return blocks;
}

// ---------------------------------------------------------------------------
// Word timings

struct TimingRecord {
    std::size_t sentence_id = 0;
    TimedWord word;
};

struct WordTimingFile {
    std::vector<TimingRecord> records;

    std::map<std::size_t, std::vector<TimedWord>> by_sentence() const {
        std::map<std::size_t, std::vector<TimedWord>> out;
        for (const auto& r : records) {
            out[r.sentence_id].push_back(r.word);
        }
        return out;
    }
};

namespace detail {

inline void check_timing_record(std::map<std::size_t, double>& last_start, const TimingRecord& r,
                                std::size_t lineno) {
    if (r.word.start_time < 0.0) {
        throw FormatError("negative start time", lineno);
    }
    if (r.word.end_time < r.word.start_time) {
        throw FormatError("end time before start time", lineno);
    }
    auto [it, fresh] = last_start.try_emplace(r.sentence_id, r.word.start_time);
    if (!fresh) {
        if (r.word.start_time < it->second) {
            throw FormatError("start times not monotonic in sentence " + std::to_string(r.sentence_id), lineno);
        }
        it->second = r.word.start_time;
    }
}

} // namespace detail

/// `sentence_id<TAB>word<TAB>start<TAB>end` per line; `#` lines and blank
/// lines are ignored.
inline WordTimingFile parse_word_timings(std::string_view text) {
    WordTimingFile file;
    std::map<std::size_t, double> last_start;
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t lineno = ln + 1;
        auto line = lines[ln];
        if (detail::trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto fields = detail::split_tabs(line);
        if (fields.size() != 4) {
            throw FormatError("expected 4 tab-separated fields, got " + std::to_string(fields.size()), lineno);
        }
        TimingRecord r;
        if (!detail::parse_index(fields[0], r.sentence_id)) {
            throw FormatError("non-numeric sentence id", lineno);
        }
        r.word.surface = std::string(detail::trim(fields[1]));
        if (r.word.surface.empty()) {
            throw FormatError("empty word", lineno);
        }
        if (!detail::parse_double(fields[2], r.word.start_time) || !detail::parse_double(fields[3], r.word.end_time)) {
            throw FormatError("non-numeric time", lineno);
        }
        detail::check_timing_record(last_start, r, lineno);
        file.records.push_back(std::move(r));
    }
    return file;
}

/// CTM adapter: `utt channel start duration word [confidence]`. Numeric
/// utterance ids are used as sentence ids; otherwise ids are assigned in
/// order of first appearance.
inline WordTimingFile parse_ctm(std::string_view text) {
    struct Row {
        std::string utt;
        TimedWord word;
        std::size_t line;
    };
    std::vector<Row> rows;
    bool numeric_ids = true;
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t lineno = ln + 1;
        auto line = detail::trim(lines[ln]);
        if (line.empty() || line.substr(0, 2) == ";;" || line.front() == '#') {
            continue;
        }
        auto f = detail::split_whitespace(line);
        if (f.size() < 5 || f.size() > 6) {
            throw FormatError("expected 5 or 6 CTM fields", lineno);
        }
        double start, dur;
        if (!detail::parse_double(f[2], start) || !detail::parse_double(f[3], dur)) {
            throw FormatError("non-numeric time", lineno);
        }
        if (dur < 0.0) {
            throw FormatError("negative duration", lineno);
        }
        std::size_t id;
        numeric_ids = numeric_ids && detail::parse_index(f[0], id);
        rows.push_back({std::string(f[0]), TimedWord{std::string(f[4]), start, start + dur}, lineno});
    }
    WordTimingFile file;
    std::map<std::string, std::size_t> ids;
    std::map<std::size_t, double> last_start;
    for (auto& row : rows) {
        TimingRecord r;
        if (numeric_ids) {
            detail::parse_index(row.utt, r.sentence_id);
        } else {
            r.sentence_id = ids.try_emplace(row.utt, ids.size()).first->second;
        }
        r.word = std::move(row.word);
        detail::check_timing_record(last_start, r, row.line);
        file.records.push_back(std::move(r));
    }
    return file;
}

inline std::string format_seconds(double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    return buf;
}

inline std::string emit_word_timings(const WordTimingFile& file) {
    std::string out;
    for (const auto& r : file.records) {
        out += std::to_string(r.sentence_id) + '\t' + r.word.surface + '\t' + format_seconds(r.word.start_time) +
               '\t' + format_seconds(r.word.end_time) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sentence durations

using DurationMap = std::map<std::size_t, SentenceDuration>;

/// `sentence_id<TAB>duration_seconds` per line; `#` and blank lines ignored.
inline DurationMap parse_durations(std::string_view text) {
    DurationMap out;
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t lineno = ln + 1;
        auto line = lines[ln];
        if (detail::trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto fields = detail::split_tabs(line);
        if (fields.size() != 2) {
            throw FormatError("expected 2 tab-separated fields", lineno);
        }
        std::size_t id;
        double seconds;
        if (!detail::parse_index(fields[0], id)) {
            throw FormatError("non-numeric sentence id", lineno);
        }
        if (!detail::parse_double(fields[1], seconds)) {
            throw FormatError("non-numeric duration", lineno);
        }
        if (!(seconds > 0.0)) {
            throw FormatError("non-positive duration", lineno);
        }
        if (!out.try_emplace(id, seconds).second) {
            throw FormatError("duplicate sentence id " + std::to_string(id), lineno);
        }
    }
    return out;
}

/// Duration of each sentence as last word end minus first word start;
/// sentences whose span is zero are left out.
inline DurationMap durations_from_timings(const WordTimingFile& timings) {
    DurationMap out;
    for (const auto& [id, words] : timings.by_sentence()) {
        double first = words.front().start_time;
        double last = 0.0;
        for (const auto& w : words) {
            last = std::max(last, w.end_time);
        }
        if (last > first) {
            out.emplace(id, SentenceDuration(last - first));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Block timing sidecar: `index<TAB>start<TAB>end`, one line per SRT block.

struct BlockTiming {
    std::size_t index = 1;
    double start = 0.0;
    double end = 0.0;
};

inline std::string emit_block_timings(const std::vector<BlockTiming>& timings) {
    std::string out;
    for (const auto& t : timings) {
        out += std::to_string(t.index) + '\t' + format_seconds(t.start) + '\t' + format_seconds(t.end) + '\n';
    }
    return out;
}

inline std::vector<BlockTiming> parse_block_timings(std::string_view text) {
    std::vector<BlockTiming> out;
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = lines[ln];
        if (detail::trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto fields = detail::split_tabs(line);
        BlockTiming t;
        if (fields.size() != 3 || !detail::parse_index(fields[0], t.index) ||
            !detail::parse_double(fields[1], t.start) || !detail::parse_double(fields[2], t.end)) {
            throw FormatError("expected index<TAB>start<TAB>end", ln + 1);
        }
        out.push_back(t);
    }
    return out;
}

} // namespace subkit

#endif
