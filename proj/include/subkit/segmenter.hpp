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

#ifndef SUBKIT_SEGMENTER_HPP
#define SUBKIT_SEGMENTER_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "subkit/core.hpp"
#include "subkit/formats.hpp"
#include "subkit/prosody.hpp"

namespace subkit {

/// Articles, prepositions, conjunctions and similar words a line or block
/// should not end on (English, French, German).
inline std::set<std::string> default_function_words() {
    return {
        // en
        "a", "an", "the", "and", "or", "but", "nor", "of", "to", "in", "on", "at", "by", "for", "with", "from",
        "into", "about", "as", "than", "that", "if", "because", "so", "my", "your", "his", "her", "its", "our",
        "their",
        // fr
        "le", "la", "les", "l", "un", "une", "des", "du", "de", "d", "et", "ou", "mais", "donc", "car", "ni",
        "que", "qu", "qui", "comment", "à", "au", "aux", "en", "dans", "par", "pour", "sur", "avec", "sans",
        "sous", "chez", "ce", "cette", "ces", "mon", "ma", "mes", "son", "sa", "ses",
        // de
        "der", "die", "das", "den", "dem", "ein", "eine", "einen", "einem", "einer", "und", "oder", "aber",
        "dass", "weil", "wenn", "von", "zu", "im", "auf", "für", "mit", "bei", "nach", "vor", "aus", "über",
    };
}

/// Soft penalties of the segmentation objective. Line length and lines per
/// block are hard limits taken from Constraints, never weighed.
struct SegmentationCost {
    double w_balance = 1.0;        // per character of difference between adjacent lines of a block
    double w_pause_miss = 50.0;    // per long pause without <eob> (only when not forced)
    double w_break_density = 5.0;  // per extra line; an <eob> adds a line and a block
    double w_short_line = 5.0;     // per line shorter than min_line_chars
    std::size_t min_line_chars = 10;
    double w_function_word = 10.0; // per break placed right after a function word
    double w_dangling_punct = 10.0; // per break placed right before a punctuation-only token
    double w_eol_pause_bonus = 0.0;
    double eol_bonus_min_pause = 0.05;
    bool force_eob_on_pause = true;
    std::set<std::string> function_words = default_function_words();

    void validate() const {
        for (double w : {w_balance, w_pause_miss, w_break_density, w_short_line, w_function_word, w_dangling_punct,
                         w_eol_pause_bonus, eol_bonus_min_pause}) {
            if (!(w >= 0.0)) {
                throw StructureError("segmentation weights must be non-negative");
            }
        }
    }
};

enum class GapLabel { None, LineBreak, BlockBreak };

struct SegmentResult {
    AnnotatedSentence sentence;
    /// Label of each gap between adjacent tokens (token count - 1 entries).
    std::vector<GapLabel> gaps;
    double cost = 0.0;
    /// 0-based blocks holding a token wider than the line limit.
    std::vector<std::size_t> flagged_blocks;
    std::size_t forced_eobs = 0;
};

namespace segment_detail {

struct Plan {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t breaks = 0;
    std::vector<std::size_t> eobs; // gap indices
    std::vector<std::size_t> eols;

    bool feasible() const noexcept { return std::isfinite(cost); }
};

constexpr double kCostEpsilon = 1e-9;

/// Strict total order: cost, then fewer breaks, then fewer block breaks,
/// then earlier block breaks, then earlier line breaks.
inline bool better(const Plan& a, const Plan& b) {
    if (!b.feasible()) {
        return a.feasible();
    }
    if (!a.feasible()) {
        return false;
    }
    if (a.cost < b.cost - kCostEpsilon) {
        return true;
    }
    if (b.cost < a.cost - kCostEpsilon) {
        return false;
    }
    if (a.breaks != b.breaks) {
        return a.breaks < b.breaks;
    }
    if (a.eobs.size() != b.eobs.size()) {
        return a.eobs.size() < b.eobs.size();
    }
    if (a.eobs != b.eobs) {
        return a.eobs < b.eobs;
    }
    return a.eols < b.eols;
}

class Segmenter {
  public:
    Segmenter(std::span<const std::string> tokens, const Constraints& c, std::optional<std::span<const double>> pauses,
              const SegmentationCost& w)
        : tokens_(tokens), c_(c), w_(w), n_(tokens.size()) {
        widths_.reserve(n_);
        for (const auto& t : tokens) {
            widths_.push_back(char_count(t));
            const auto norm = normalize_surface(t);
            function_.push_back(w.function_words.contains(norm));
            punct_.push_back(norm.empty());
        }
        prefix_.assign(n_ + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            prefix_[i + 1] = prefix_[i] + widths_[i];
        }
        long_pause_.assign(n_ ? n_ - 1 : 0, false);
        eol_bonus_.assign(long_pause_.size(), false);
        if (pauses) {
            for (std::size_t g = 0; g < long_pause_.size(); ++g) {
                const double p = (*pauses)[g];
                long_pause_[g] = p > c.eob_pause_threshold;
                eol_bonus_[g] = p >= w.eol_bonus_min_pause && p <= c.eob_pause_threshold;
            }
        }
    }

    std::size_t line_width(std::size_t a, std::size_t b) const { return prefix_[b] - prefix_[a] + (b - a - 1); }

    bool line_ok(std::size_t a, std::size_t b) const {
        return b - a == 1 || line_width(a, b) <= c_.max_chars_per_line;
    }

    bool forced(std::size_t gap) const { return w_.force_eob_on_pause && long_pause_[gap]; }

    double line_cost(std::size_t a, std::size_t b) const {
        return line_width(a, b) < w_.min_line_chars ? w_.w_short_line : 0.0;
    }

    /// Cost of a break at `gap` beyond the per-break density charge.
    double break_cost(std::size_t gap, bool block) const {
        double cost = function_[gap] ? w_.w_function_word : 0.0;
        if (punct_[gap + 1]) {
            cost += w_.w_dangling_punct;
        }
        if (!block && eol_bonus_[gap]) {
            cost -= w_.w_eol_pause_bonus;
        }
        return cost;
    }

    /// Best lines for block [a, b): enumerates line starts recursively.
    void best_lines(std::size_t a, std::size_t b, Plan& best) const {
        std::vector<std::size_t> starts{a};
        extend(a, b, starts, best);
    }

    Plan solve() {
        std::vector<Plan> best(n_ + 1);
        best[n_].cost = 0.0;
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t b = i + 1; b <= n_; ++b) {
                if (b - 1 > i && forced(b - 2)) {
                    break; // a forced gap would fall inside the block
                }
                Plan block;
                best_lines(i, b, block);
                if (!block.feasible()) {
                    break; // longer blocks cannot become feasible
                }
                if (!best[b].feasible()) {
                    continue;
                }
                Plan cand;
                cand.cost = block.cost + best[b].cost;
                cand.breaks = block.eols.size() + best[b].breaks;
                cand.eols = block.eols;
                if (b < n_) {
                    const std::size_t gap = b - 1;
                    cand.cost += 2.0 * w_.w_break_density + break_cost(gap, true);
                    cand.breaks += 1;
                    cand.eobs.push_back(gap);
                }
                if (!w_.force_eob_on_pause) {
                    for (std::size_t g = i; g + 1 < b; ++g) {
                        cand.cost += long_pause_[g] ? w_.w_pause_miss : 0.0;
                    }
                }
                cand.eobs.insert(cand.eobs.end(), best[b].eobs.begin(), best[b].eobs.end());
                cand.eols.insert(cand.eols.end(), best[b].eols.begin(), best[b].eols.end());
                if (better(cand, best[i])) {
                    best[i] = std::move(cand);
                }
            }
        }
        return best[0];
    }

    bool overlong(std::size_t t) const { return widths_[t] > c_.max_chars_per_line; }

  private:
    void extend(std::size_t a, std::size_t b, std::vector<std::size_t>& starts, Plan& best) const {
        const std::size_t line_start = starts.back();
        // Close the block with the current line running to b.
        if (line_ok(line_start, b)) {
            Plan p;
            p.cost = 0.0;
            for (std::size_t k = 0; k < starts.size(); ++k) {
                const std::size_t s = starts[k];
                const std::size_t e = k + 1 < starts.size() ? starts[k + 1] : b;
                p.cost += line_cost(s, e);
                if (k + 1 < starts.size()) {
                    const std::size_t next_e = k + 2 < starts.size() ? starts[k + 2] : b;
                    const double lw = static_cast<double>(line_width(s, e));
                    const double nw = static_cast<double>(line_width(e, next_e));
                    p.cost += w_.w_balance * std::abs(lw - nw);
                    p.cost += w_.w_break_density + break_cost(e - 1, false);
                    p.eols.push_back(e - 1);
                }
            }
            p.breaks = p.eols.size();
            if (better(p, best)) {
                best = std::move(p);
            }
        }
        if (starts.size() >= c_.max_lines_per_block) {
            return;
        }
        for (std::size_t e = line_start + 1; e < b; ++e) {
            if (!line_ok(line_start, e)) {
                break;
            }
            starts.push_back(e);
            extend(a, b, starts, best);
            starts.pop_back();
        }
    }

    std::span<const std::string> tokens_;
    Constraints c_;
    const SegmentationCost& w_;
    std::size_t n_;
    std::vector<std::size_t> widths_;
    std::vector<bool> function_;
    std::vector<bool> punct_;
    std::vector<std::size_t> prefix_;
    std::vector<bool> long_pause_;
    std::vector<bool> eol_bonus_;
};

} // namespace segment_detail

/// Places `<eol>`/`<eob>` between tokens by dynamic programming over block
/// and line boundaries. Every line fits max_chars_per_line (a single wider
/// token gets a line of its own and its block is flagged), every block has
/// at most max_lines_per_block lines, and gaps whose pause exceeds the
/// threshold receive `<eob>` unless forcing is turned off. The output always
/// ends with `<eob>`.
inline SegmentResult segment(std::span<const std::string> tokens, const Constraints& constraints,
                             std::optional<std::span<const double>> pauses = std::nullopt,
                             const SegmentationCost& cost = {}) {
    if (tokens.empty()) {
        throw StructureError("cannot segment an empty token sequence");
    }
    if (pauses && pauses->size() + 1 != tokens.size()) {
        throw StructureError("pause count " + std::to_string(pauses->size()) + " does not match " +
                             std::to_string(tokens.size() - 1) + " token gaps");
    }
    constraints.validate();
    cost.validate();

    segment_detail::Segmenter dp(tokens, constraints, pauses, cost);
    const auto plan = dp.solve();

    std::vector<GapLabel> gaps(tokens.size() - 1, GapLabel::None);
    for (auto g : plan.eols) {
        gaps[g] = GapLabel::LineBreak;
    }
    for (auto g : plan.eobs) {
        gaps[g] = GapLabel::BlockBreak;
    }
    std::size_t forced = 0;
    for (std::size_t g = 0; g < gaps.size(); ++g) {
        forced += dp.forced(g) ? 1 : 0;
    }

    std::vector<Item> items;
    std::vector<std::size_t> flagged_blocks;
    std::size_t block = 0;
    bool flagged = false;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        items.emplace_back(Token{tokens[t]});
        flagged = flagged || dp.overlong(t);
        if (t + 1 == tokens.size() || gaps[t] == GapLabel::BlockBreak) {
            items.emplace_back(BreakSymbol::BlockBreak);
            if (flagged) {
                flagged_blocks.push_back(block);
            }
            ++block;
            flagged = false;
        } else if (gaps[t] == GapLabel::LineBreak) {
            items.emplace_back(BreakSymbol::LineBreak);
        }
    }
    return SegmentResult{AnnotatedSentence::from_items(std::move(items)), std::move(gaps), plan.cost,
                         std::move(flagged_blocks), forced};
}

inline SegmentResult segment(const std::vector<std::string>& tokens, const Constraints& constraints,
                             const std::vector<double>* pauses = nullptr, const SegmentationCost& cost = {}) {
    std::optional<std::span<const double>> p;
    if (pauses) {
        p = std::span<const double>(*pauses);
    }
    return segment(std::span<const std::string>(tokens), constraints, p, cost);
}

// ---------------------------------------------------------------------------
// Timing

struct TimingOptions {
    double min_gap = 0.024;
    std::size_t first_index = 1;
    /// Start of the first block in proportional mode.
    double offset = 0.0;
};

namespace segment_detail {

inline std::vector<SubtitleBlock> finish_blocks(const std::vector<UntimedBlock>& blocks,
                                                const std::vector<std::int64_t>& starts,
                                                const std::vector<std::int64_t>& ends, std::size_t first_index) {
    std::vector<SubtitleBlock> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (ends[i] <= starts[i]) {
            throw StructureError("block " + std::to_string(first_index + i) + " has non-positive duration");
        }
        SubtitleBlock b;
        b.index = first_index + i;
        b.start = static_cast<double>(starts[i]) / 1000.0;
        b.end = static_cast<double>(ends[i]) / 1000.0;
        for (const auto& line : blocks[i]) {
            b.lines.push_back(line_text(line));
        }
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace segment_detail

/// Alignment mode with one timing per token: a block runs from its first
/// token's start to its last token's end; an earlier block's end is
/// trimmed to keep the minimum gap before the next block.
inline std::vector<SubtitleBlock> assign_times(const std::vector<UntimedBlock>& blocks,
                                               std::span<const TimedWord> token_times,
                                               const TimingOptions& opts = {}) {
    std::size_t tokens = 0;
    for (const auto& b : blocks) {
        for (const auto& l : b) {
            tokens += l.size();
        }
    }
    if (tokens != token_times.size()) {
        throw MismatchError("block tokens " + std::to_string(tokens) + " ≠ timed words " +
                            std::to_string(token_times.size()));
    }
    std::vector<std::int64_t> starts, ends;
    std::size_t t = 0;
    for (const auto& b : blocks) {
        std::size_t n = 0;
        for (const auto& l : b) {
            n += l.size();
        }
        starts.push_back(to_millis(token_times[t].start_time));
        ends.push_back(to_millis(token_times[t + n - 1].end_time));
        t += n;
    }
    const auto gap = to_millis(opts.min_gap);
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
        if (starts[i + 1] < starts[i]) {
            throw StructureError("block " + std::to_string(opts.first_index + i + 1) + " starts before its predecessor");
        }
        ends[i] = std::min(ends[i], starts[i + 1] - gap);
    }
    return segment_detail::finish_blocks(blocks, starts, ends, opts.first_index);
}

/// Alignment mode for a whole sentence: tokens are paired with words via
/// align_tokens, so punctuation-only tokens take their word's timing.
inline std::vector<SubtitleBlock> assign_times(const AnnotatedSentence& sentence, std::span<const TimedWord> words,
                                               const TimingOptions& opts = {}) {
    const auto alignment = align_tokens(sentence, words);
    std::vector<TimedWord> per_token;
    const auto tokens = strip_breaks(sentence);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        const auto& w = words[alignment.word_of_token[t]];
        per_token.push_back({tokens[t], w.start_time, w.end_time});
    }
    return assign_times(blocks_from_annotated(sentence), per_token, opts);
}

/// Proportional mode: the duration is shared out by character count
/// starting at `opts.offset`; a later block's start is delayed to keep the
/// minimum gap.
inline std::vector<SubtitleBlock> assign_times(const std::vector<UntimedBlock>& blocks, SentenceDuration total,
                                               const TimingOptions& opts = {}) {
    if (blocks.empty()) {
        throw StructureError("no blocks to time");
    }
    std::vector<std::size_t> chars;
    std::size_t sum = 0;
    for (const auto& b : blocks) {
        std::size_t c = 0;
        for (const auto& l : b) {
            c += line_chars(l);
        }
        chars.push_back(c);
        sum += c;
    }
    if (sum == 0) {
        throw StructureError("blocks carry no characters");
    }
    const auto origin = to_millis(opts.offset);
    const auto span = to_millis(total.seconds());
    const auto gap = to_millis(opts.min_gap);
    auto share = [&](std::size_t part) -> std::int64_t {
        return std::llround(static_cast<double>(span) * static_cast<double>(part) / static_cast<double>(sum));
    };
    std::vector<std::int64_t> starts, ends;
    std::size_t acc = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::int64_t s = origin + share(acc);
        acc += chars[i];
        const std::int64_t e = origin + share(acc);
        starts.push_back(i > 0 ? std::max(s, ends.back() + gap) : s);
        ends.push_back(e);
    }
    return segment_detail::finish_blocks(blocks, starts, ends, opts.first_index);
}

} // namespace subkit

#endif
