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

#ifndef SUBKIT_METRICS_HPP
#define SUBKIT_METRICS_HPP

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subkit/core.hpp"
#include "subkit/formats.hpp"
#include "subkit/ter.hpp"

namespace subkit {

namespace metrics_detail {

inline void check_parallel(std::size_t hyp, std::size_t ref) {
    if (hyp != ref) {
        throw MismatchError("sentence count mismatch: hypothesis " + std::to_string(hyp) + " vs reference " +
                            std::to_string(ref));
    }
}

inline double percent(std::size_t num, std::size_t den) {
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

} // namespace metrics_detail

// ---------------------------------------------------------------------------
// BLEU

inline constexpr std::size_t kBleuOrder = 4;

/// Pooled corpus statistics for BLEU-4.
struct BleuStats {
    std::array<std::size_t, kBleuOrder> matches{};
    std::array<std::size_t, kBleuOrder> totals{};
    std::size_t hyp_length = 0;
    std::size_t ref_length = 0;

    void add(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
        hyp_length += hyp.size();
        ref_length += ref.size();
        for (std::size_t n = 1; n <= kBleuOrder; ++n) {
            std::map<std::vector<std::string>, std::size_t> ref_counts;
            for (std::size_t i = 0; i + n <= ref.size(); ++i) {
                ++ref_counts[std::vector<std::string>(ref.begin() + i, ref.begin() + i + n)];
            }
            std::map<std::vector<std::string>, std::size_t> hyp_counts;
            for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
                ++hyp_counts[std::vector<std::string>(hyp.begin() + i, hyp.begin() + i + n)];
            }
            for (const auto& [gram, count] : hyp_counts) {
                auto it = ref_counts.find(gram);
                matches[n - 1] += it == ref_counts.end() ? 0 : std::min(count, it->second);
                totals[n - 1] += count;
            }
        }
    }

    double brevity_penalty() const {
        if (hyp_length == 0) {
            return 0.0;
        }
        if (hyp_length >= ref_length) {
            return 1.0;
        }
        return std::exp(1.0 - static_cast<double>(ref_length) / static_cast<double>(hyp_length));
    }

    /// Geometric mean of the clipped precisions times the brevity penalty,
    /// as a percentage. Orders with no hypothesis n-grams at all are left out
    /// of the mean; any order with zero matches gives 0.
    double score() const {
        if (hyp_length == 0) {
            return 0.0;
        }
        double log_sum = 0.0;
        std::size_t orders = 0;
        for (std::size_t n = 0; n < kBleuOrder; ++n) {
            if (totals[n] == 0) {
                continue;
            }
            if (matches[n] == 0) {
                return 0.0;
            }
            log_sum += std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
            ++orders;
        }
        return 100.0 * brevity_penalty() * std::exp(log_sum / static_cast<double>(orders));
    }
};

inline BleuStats bleu_stats(std::span<const AnnotatedSentence> hyp, std::span<const AnnotatedSentence> ref,
                            bool with_breaks) {
    metrics_detail::check_parallel(hyp.size(), ref.size());
    BleuStats stats;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        if (with_breaks) {
            stats.add(surface_tokens(hyp[i]), surface_tokens(ref[i]));
        } else {
            stats.add(strip_breaks(hyp[i]), strip_breaks(ref[i]));
        }
    }
    return stats;
}

/// Corpus BLEU-4 without smoothing. With `with_breaks` the break symbols
/// are ordinary tokens; without, they are stripped from both sides first.
inline double bleu(std::span<const AnnotatedSentence> hyp, std::span<const AnnotatedSentence> ref, bool with_breaks) {
    return bleu_stats(hyp, ref, with_breaks).score();
}

// ---------------------------------------------------------------------------
// Conformity

struct Conformity {
    std::size_t conforming = 0;
    std::size_t total = 0;

    double percentage() const { return metrics_detail::percent(conforming, total); }
};

inline bool block_conforms(const UntimedBlock& block, const Constraints& c) {
    if (block.size() > c.max_lines_per_block) {
        return false;
    }
    for (const auto& line : block) {
        if (line_chars(line) > c.max_chars_per_line) {
            return false;
        }
    }
    return true;
}

/// Share of subtitle blocks whose every line fits the line limit and whose
/// line count fits the block limit.
inline Conformity cpl_conformity(std::span<const AnnotatedSentence> sentences, const Constraints& c = {}) {
    Conformity out;
    for (const auto& s : sentences) {
        for (const auto& block : blocks_from_annotated(s)) {
            ++out.total;
            out.conforming += block_conforms(block, c) ? 1 : 0;
        }
    }
    if (out.total == 0) {
        throw MismatchError("no subtitle blocks");
    }
    return out;
}

/// Characters of the break-stripped sentence, spaces included.
inline std::size_t sentence_chars(const AnnotatedSentence& s) { return line_chars(strip_breaks(s)); }

/// Share of sentences read at no more than max_chars_per_second. Sentence
/// ids are 0-based positions in the corpus.
inline Conformity cps_conformity(std::span<const AnnotatedSentence> sentences, const DurationMap& durations,
                                 const Constraints& c = {}) {
    if (sentences.empty()) {
        throw MismatchError("no sentences");
    }
    Conformity out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto it = durations.find(i);
        if (it == durations.end()) {
            throw MismatchError("no duration for sentence " + std::to_string(i));
        }
        const double cps = static_cast<double>(sentence_chars(sentences[i])) / it->second.seconds();
        ++out.total;
        out.conforming += cps <= c.max_chars_per_second ? 1 : 0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Break-type accuracy

struct BreakAccuracy {
    std::optional<double> accuracy;
    std::size_t filtered_count = 0;
    std::size_t matching = 0;
    std::size_t total = 0;
};

/// Restricted to pairs where both sides carry at least two breaks and the
/// same number of them; compares break types position by position.
inline BreakAccuracy break_type_accuracy(std::span<const AnnotatedSentence> hyp,
                                         std::span<const AnnotatedSentence> ref) {
    metrics_detail::check_parallel(hyp.size(), ref.size());
    BreakAccuracy out;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        const auto h = hyp[i].breaks();
        const auto r = ref[i].breaks();
        if (h.size() < 2 || h.size() != r.size()) {
            continue;
        }
        ++out.filtered_count;
        for (std::size_t k = 0; k < h.size(); ++k) {
            out.matching += h[k] == r[k] ? 1 : 0;
        }
        out.total += h.size();
    }
    if (out.total > 0) {
        out.accuracy = metrics_detail::percent(out.matching, out.total);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report

struct MetricsReport {
    double bleu = 0.0;
    double bleu_nob = 0.0;
    double cpl = 0.0;
    std::optional<double> cps;
    double ter_br = 0.0;
    std::optional<double> break_acc;

    struct Counts {
        std::size_t sentences = 0;
        std::size_t blocks = 0;
        std::size_t filtered_pairs = 0;
    } counts;

    std::vector<std::string> warnings;
};

struct EvaluateOptions {
    Constraints constraints;
    TerBrOptions ter_br;
};

/// All corpus metrics of a hypothesis against its reference. Conformity
/// figures describe the hypothesis. Without durations the CPS figure is
/// omitted and a warning says so.
inline MetricsReport evaluate(std::span<const AnnotatedSentence> hyp, std::span<const AnnotatedSentence> ref,
                              const DurationMap* durations = nullptr, const EvaluateOptions& opts = {}) {
    metrics_detail::check_parallel(hyp.size(), ref.size());
    if (hyp.empty()) {
        throw MismatchError("no sentences");
    }
    MetricsReport r;
    r.bleu = bleu(hyp, ref, true);
    r.bleu_nob = bleu(hyp, ref, false);
    const auto cpl = cpl_conformity(hyp, opts.constraints);
    r.cpl = cpl.percentage();
    if (durations) {
        r.cps = cps_conformity(hyp, *durations, opts.constraints).percentage();
    } else {
        r.warnings.emplace_back("no sentence durations: cps omitted");
    }
    r.ter_br = corpus_ter_br(hyp, ref, opts.ter_br).percentage();
    const auto acc = break_type_accuracy(hyp, ref);
    r.break_acc = acc.accuracy;
    if (!acc.accuracy) {
        r.warnings.emplace_back("no sentence pair qualifies for break accuracy");
    }
    r.counts = {hyp.size(), cpl.total, acc.filtered_count};
    return r;
}

} // namespace subkit

#endif
