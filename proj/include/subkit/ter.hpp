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

// Translation edit rate with greedy block shifts, and its break-only
// variant computed on word-masked sentences.

#ifndef SUBKIT_TER_HPP
#define SUBKIT_TER_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "subkit/core.hpp"

namespace subkit {

struct EditScript {
    std::size_t insertions = 0;
    std::size_t deletions = 0;
    std::size_t substitutions = 0;
    std::size_t shifts = 0;
    std::size_t reference_length = 0;

    std::size_t edits() const noexcept { return insertions + deletions + substitutions + shifts; }

    /// Edits per reference token (a fraction, not a percentage).
    double score() const noexcept {
        return reference_length == 0 ? 0.0 : static_cast<double>(edits()) / static_cast<double>(reference_length);
    }

    friend bool operator==(const EditScript&, const EditScript&) = default;
};

struct TerOptions {
    /// Longest span a single shift may move.
    std::size_t max_shift_length = 10;
};

namespace ter_detail {

using Seq = std::vector<int>;

/// Token-level edit distance, two rows.
inline std::size_t levenshtein(std::span<const int> hyp, std::span<const int> ref) {
    std::vector<std::size_t> prev(ref.size() + 1), cur(ref.size() + 1);
    for (std::size_t j = 0; j <= ref.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= hyp.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= ref.size(); ++j) {
            const std::size_t diag = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
            cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[ref.size()];
}

/// Edit distance with a backtrace that prefers the diagonal, then deleting a
/// hypothesis token, then inserting a reference token.
inline EditScript levenshtein_script(std::span<const int> hyp, std::span<const int> ref) {
    const std::size_t n = hyp.size(), m = ref.size();
    std::vector<std::size_t> d((n + 1) * (m + 1));
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
    for (std::size_t i = 0; i <= n; ++i) {
        at(i, 0) = i;
    }
    for (std::size_t j = 0; j <= m; ++j) {
        at(0, j) = j;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            at(i, j) = std::min({at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1), at(i - 1, j) + 1,
                                 at(i, j - 1) + 1});
        }
    }
    EditScript script;
    script.reference_length = m;
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0) {
            const bool same = hyp[i - 1] == ref[j - 1];
            if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
                script.substitutions += same ? 0 : 1;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            ++script.deletions;
            --i;
        } else {
            ++script.insertions;
            --j;
        }
    }
    return script;
}

inline std::string key_of(std::span<const int> s) {
    return std::string(reinterpret_cast<const char*>(s.data()), s.size() * sizeof(int));
}

/// Moves `cur[from, from+len)` so that it starts at `to` in the result.
inline Seq apply_shift(const Seq& cur, std::size_t from, std::size_t len, std::size_t to) {
    Seq rest;
    rest.reserve(cur.size());
    rest.insert(rest.end(), cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(from));
    rest.insert(rest.end(), cur.begin() + static_cast<std::ptrdiff_t>(from + len), cur.end());
    Seq out;
    out.reserve(cur.size());
    out.insert(out.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(to));
    out.insert(out.end(), cur.begin() + static_cast<std::ptrdiff_t>(from),
               cur.begin() + static_cast<std::ptrdiff_t>(from + len));
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(to), rest.end());
    return out;
}

/// All contiguous reference spans up to `max_len` tokens, as byte keys.
inline std::unordered_set<std::string> reference_spans(const Seq& ref, std::size_t max_len) {
    std::unordered_set<std::string> spans;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        for (std::size_t len = 1; len <= max_len && i + len <= ref.size(); ++len) {
            spans.insert(key_of(std::span<const int>(ref).subspan(i, len)));
        }
    }
    return spans;
}

/// Enumerates every admissible single shift of `cur` in tie-break order
/// (span length, then source position, then destination) and calls
/// `visit(candidate, from, len, to)` once per distinct resulting sequence.
template <typename Visit>
void for_each_shift(const Seq& cur, const std::unordered_set<std::string>& ref_spans, std::size_t max_len,
                    Visit&& visit) {
    std::unordered_set<std::string> seen;
    seen.insert(key_of(cur));
    const std::size_t n = cur.size();
    for (std::size_t len = 1; len <= max_len && len < n; ++len) {
        for (std::size_t from = 0; from + len <= n; ++from) {
            if (!ref_spans.contains(key_of(std::span<const int>(cur).subspan(from, len)))) {
                continue;
            }
            for (std::size_t to = 0; to + len <= n; ++to) {
                if (to == from) {
                    continue;
                }
                Seq cand = apply_shift(cur, from, len, to);
                if (!seen.insert(key_of(cand)).second) {
                    continue;
                }
                visit(cand, from, len, to);
            }
        }
    }
}

inline EditScript ter_ids(Seq hyp, const Seq& ref, const TerOptions& opts) {
    if (ref.empty()) {
        throw StructureError("TER undefined for an empty reference");
    }
    const auto spans = reference_spans(ref, opts.max_shift_length);
    std::size_t shifts = 0;
    std::size_t current = levenshtein(hyp, ref);
    while (current > 1) {
        std::size_t best = std::numeric_limits<std::size_t>::max();
        Seq best_seq;
        for_each_shift(hyp, spans, opts.max_shift_length, [&](const Seq& cand, auto, auto, auto) {
            if (best == 0) {
                return;
            }
            const std::size_t d = levenshtein(cand, ref);
            if (d < best) {
                best = d;
                best_seq = cand;
            }
        });
        // A shift costs one edit, so it must save at least two.
        if (best_seq.empty() || best + 1 >= current) {
            break;
        }
        hyp = std::move(best_seq);
        current = best;
        ++shifts;
    }
    EditScript script = levenshtein_script(hyp, ref);
    script.shifts = shifts;
    return script;
}

/// Maps tokens to dense ids shared by both sides.
template <typename T>
class Interner {
  public:
    int id(const T& tok) { return ids_.try_emplace(tok, static_cast<int>(ids_.size())).first->second; }

    std::vector<int> ids(std::span<const T> toks) {
        std::vector<int> out;
        out.reserve(toks.size());
        for (const auto& t : toks) {
            out.push_back(id(t));
        }
        return out;
    }

  private:
    std::map<T, int> ids_;
};

} // namespace ter_detail

/// TER of `hyp` against `ref`: greedy block shifts (each must strictly lower
/// the total edit count; best gain first, ties to the shortest span, then the
/// leftmost source and destination), followed by Levenshtein
/// insertions, deletions and substitutions. A shift may move a span of up to
/// `max_shift_length` tokens that occurs verbatim in the reference.
template <typename T>
EditScript ter(std::span<const T> hyp, std::span<const T> ref, const TerOptions& opts = {}) {
    ter_detail::Interner<T> interner;
    auto h = interner.ids(hyp);
    auto r = interner.ids(ref);
    return ter_detail::ter_ids(std::move(h), r, opts);
}

inline EditScript ter(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                      const TerOptions& opts = {}) {
    return ter<std::string>(std::span<const std::string>(hyp), std::span<const std::string>(ref), opts);
}

// ---------------------------------------------------------------------------
// TER-br

/// Symbols of a masked sentence. The word mask is reserved and can never
/// collide with corpus vocabulary or break surfaces.
enum class MaskedSymbol : int { Word = 0, LineBreak = 1, BlockBreak = 2 };

struct TerBrOptions {
    /// Treat `<eol>` and `<eob>` as the same symbol.
    bool merge_break_types = false;
    TerOptions ter;
};

inline std::vector<int> mask_words(const AnnotatedSentence& s, bool merge_break_types = false) {
    std::vector<int> out;
    out.reserve(s.items().size());
    for (const auto& item : s.items()) {
        if (!is_break(item)) {
            out.push_back(static_cast<int>(MaskedSymbol::Word));
        } else if (merge_break_types || std::get<BreakSymbol>(item) == BreakSymbol::LineBreak) {
            out.push_back(static_cast<int>(MaskedSymbol::LineBreak));
        } else {
            out.push_back(static_cast<int>(MaskedSymbol::BlockBreak));
        }
    }
    return out;
}

inline EditScript ter_br(const AnnotatedSentence& hyp, const AnnotatedSentence& ref, const TerBrOptions& opts = {}) {
    return ter_detail::ter_ids(mask_words(hyp, opts.merge_break_types), mask_words(ref, opts.merge_break_types),
                               opts.ter);
}

struct CorpusTer {
    std::size_t edits = 0;
    std::size_t reference_length = 0;

    /// Pooled edits over pooled reference length, times 100.
    double percentage() const noexcept {
        return reference_length == 0 ? 0.0
                                     : 100.0 * static_cast<double>(edits) / static_cast<double>(reference_length);
    }
};

inline CorpusTer corpus_ter_br(std::span<const AnnotatedSentence> hyp, std::span<const AnnotatedSentence> ref,
                               const TerBrOptions& opts = {}) {
    if (hyp.size() != ref.size()) {
        throw MismatchError("sentence count mismatch: " + std::to_string(hyp.size()) +
                            "≠" + std::to_string(ref.size()));
    }
    CorpusTer total;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        auto script = ter_br(hyp[i], ref[i], opts);
        total.edits += script.edits();
        total.reference_length += script.reference_length;
    }
    return total;
}

} // namespace subkit

#endif
