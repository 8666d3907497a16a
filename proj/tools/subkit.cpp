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

// subkit: evaluate, analyze, segment and convert break-annotated subtitle
// corpora.
//
// Exit codes: 0 ok, 2 format error, 3 semantic mismatch, 64 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "CLI11.hpp"
#include "subkit/report_json.hpp"
#include "subkit/subkit.hpp"

namespace {

using namespace subkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFormat = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file; reported like a format error.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path + ": cannot open");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError(path + ": cannot write");
        }
        out << content;
        if (!out.flush()) {
            throw IoError(path + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError(path + ": " + ec.message());
    }
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
    } else {
        write_file_atomic(path, content);
    }
}

/// Runs a parser and prefixes any format error with the file name.
template <typename F>
auto with_file(const std::string& path, F&& parse) {
    try {
        return parse(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    } catch (const StructureError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Configuration options shared by every subcommand

struct ConfigOptions {
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> value_opts;
    std::map<std::string, CLI::Option*> flag_opts;
    bool lenient = false;
    CLI::Option* lenient_opt = nullptr;

    static bool is_bool_key(const std::string& key) {
        return key == "ensure_final_eob" || key == "strip_final_eob" || key == "merge_break_types" ||
               key == "strict" || key == "force_eob_on_pause";
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value config file (default: $SUBKIT_CONFIG)");
        for (const auto& key : config_keys()) {
            std::string dashed = key;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            if (is_bool_key(key)) {
                flag_opts[key] = cmd->add_flag("--" + dashed + ",!--no-" + dashed, flags[key], "Config: " + key);
            } else {
                value_opts[key] = cmd->add_option("--" + dashed, values[key], "Config: " + key);
            }
        }
        lenient_opt = cmd->add_flag("--lenient", lenient, "Same as --no-strict");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        std::string path = config_path;
        if (path.empty()) {
            if (const char* env = std::getenv("SUBKIT_CONFIG"); env && *env) {
                path = env;
            }
        }
        if (!path.empty()) {
            cfg = with_file(path, [](const std::string& text) { return parse_config(text); });
        }
        for (const auto& [key, opt] : value_opts) {
            if (opt->count() > 0) {
                set_config_value(cfg, key, values.at(key));
            }
        }
        for (const auto& [key, opt] : flag_opts) {
            if (opt->count() > 0) {
                set_config_value(cfg, key, flags.at(key) ? "true" : "false");
            }
        }
        if (lenient_opt->count() > 0 && lenient) {
            cfg.parse_mode = ParseMode::Lenient;
        }
        try {
            cfg.validate();
        } catch (const StructureError& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

CorpusFile load_corpus(const std::string& path, const RunConfig& cfg) {
    auto corpus = with_file(path, [&](const std::string& text) { return parse_annotated_corpus(text, cfg.parse_mode); });
    for (auto& w : corpus.warnings) {
        w = path + ": " + w;
    }
    corpus.sentences = cfg.normalize(corpus.sentences);
    return corpus;
}

WordTimingFile load_timings(const std::string& path, bool ctm) {
    return with_file(path, [&](const std::string& text) { return ctm ? parse_ctm(text) : parse_word_timings(text); });
}

/// Re-keys a per-line map onto corpus positions (they differ when lenient
/// parsing skipped lines).
DurationMap durations_by_position(const CorpusFile& corpus, const DurationMap& by_line) {
    DurationMap out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto it = by_line.find(corpus.source_lines[i] - 1);
        if (it != by_line.end()) {
            out.emplace(i, it->second);
        }
    }
    return out;
}

const std::vector<TimedWord>* words_for(const std::map<std::size_t, std::vector<TimedWord>>& by_sentence,
                                        std::size_t id) {
    auto it = by_sentence.find(id);
    return it == by_sentence.end() ? nullptr : &it->second;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

/// Pushes earlier block ends back so consecutive blocks keep `gap` seconds
/// apart.
void enforce_min_gap(std::vector<SubtitleBlock>& blocks, double gap) {
    const auto gap_ms = to_millis(gap);
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
        const auto next = to_millis(blocks[i + 1].start);
        if (next - to_millis(blocks[i].end) < gap_ms) {
            const auto end = next - gap_ms;
            if (end <= to_millis(blocks[i].start)) {
                throw StructureError("block " + std::to_string(blocks[i].index) +
                                     " has no room before the next block");
            }
            blocks[i].end = static_cast<double>(end) / 1000.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Timing a corpus of annotated sentences

enum class TimingSource { Alignment, Durations, ReadingSpeed };

struct CorpusTiming {
    std::vector<SubtitleBlock> blocks;
    std::map<TimingSource, std::size_t> used;
    std::vector<std::string> warnings;
};

/// Times every sentence: word alignment when available, otherwise the
/// sentence duration, otherwise chars / max_chars_per_second; the latter two
/// are laid out back to back.
CorpusTiming time_corpus(const CorpusFile& corpus, const std::map<std::size_t, std::vector<TimedWord>>* words,
                         const DurationMap* durations, const RunConfig& cfg, std::size_t first_index = 1) {
    CorpusTiming out;
    TimingOptions opts;
    opts.min_gap = cfg.min_block_gap;
    double cursor = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& s = corpus.sentences[i];
        const std::size_t id = corpus.source_lines[i] - 1;
        opts.first_index = first_index + out.blocks.size();
        std::vector<SubtitleBlock> timed;
        const std::vector<TimedWord>* w = words ? words_for(*words, id) : nullptr;
        if (w) {
            try {
                timed = assign_times(s, *w, opts);
                ++out.used[TimingSource::Alignment];
            } catch (const MismatchError& e) {
                out.warnings.push_back("sentence " + std::to_string(id) + ": " + e.what() +
                                       "; falling back to proportional timing");
            }
        }
        if (timed.empty()) {
            opts.offset = out.blocks.empty() ? 0.0 : cursor + cfg.min_block_gap;
            std::optional<SentenceDuration> d;
            if (durations) {
                if (auto it = durations->find(id); it != durations->end()) {
                    d = it->second;
                    ++out.used[TimingSource::Durations];
                }
            }
            if (!d) {
                const double chars = static_cast<double>(sentence_chars(s));
                d = SentenceDuration(std::max(chars / cfg.constraints.max_chars_per_second, 0.001));
                ++out.used[TimingSource::ReadingSpeed];
            }
            timed = assign_times(blocks_from_annotated(s), *d, opts);
        }
        cursor = timed.back().end;
        out.blocks.insert(out.blocks.end(), timed.begin(), timed.end());
    }
    enforce_min_gap(out.blocks, cfg.min_block_gap);
    return out;
}

std::string timing_summary(const std::map<TimingSource, std::size_t>& used) {
    auto get = [&](TimingSource s) {
        auto it = used.find(s);
        return it == used.end() ? std::size_t{0} : it->second;
    };
    const auto a = get(TimingSource::Alignment);
    const auto d = get(TimingSource::Durations);
    const auto r = get(TimingSource::ReadingSpeed);
    std::string mode = a > 0 && d + r == 0 ? "alignment" : a == 0 ? "proportional" : "mixed";
    return "timing=" + mode + " (alignment " + std::to_string(a) + ", durations " + std::to_string(d) +
           ", reading-speed " + std::to_string(r) + ")";
}

json blocks_json(const std::vector<std::vector<UntimedBlock>>& sentences, const std::vector<SubtitleBlock>* timed) {
    json doc = {{"schema", kSchemaVersion}, {"sentences", json::array()}};
    std::size_t k = 0;
    for (const auto& blocks : sentences) {
        json s = {{"blocks", json::array()}};
        for (const auto& block : blocks) {
            json b = json::object();
            json lines = json::array();
            for (const auto& line : block) {
                lines.push_back(line_text(line));
            }
            b["lines"] = lines;
            if (timed) {
                const auto& t = (*timed)[k];
                b["index"] = t.index;
                b["start"] = t.start;
                b["end"] = t.end;
            }
            ++k;
            s["blocks"].push_back(b);
        }
        doc["sentences"].push_back(s);
    }
    return doc;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string hyp, ref, durations, timings, out;
    bool ctm = false;
};

int cmd_evaluate(const EvaluateArgs& args, const RunConfig& cfg) {
    const auto hyp = load_corpus(args.hyp, cfg);
    const auto ref = load_corpus(args.ref, cfg);
    if (hyp.size() != ref.size()) {
        throw MismatchError("sentence count mismatch: " + args.hyp + " has " + std::to_string(hyp.size()) +
                            ", " + args.ref + " has " + std::to_string(ref.size()));
    }
    std::optional<DurationMap> durations;
    std::vector<std::string> notes;
    if (!args.durations.empty()) {
        durations = durations_by_position(
            hyp, with_file(args.durations, [](const std::string& t) { return parse_durations(t); }));
        notes.push_back("cps durations from " + args.durations);
    } else if (!args.timings.empty()) {
        durations = durations_by_position(hyp, durations_from_timings(load_timings(args.timings, args.ctm)));
        notes.push_back("cps durations derived from word timings in " + args.timings);
    }

    EvaluateOptions opts;
    opts.constraints = cfg.constraints;
    opts.ter_br.merge_break_types = cfg.merge_break_types;
    auto report = evaluate(hyp.sentences, ref.sentences, durations ? &*durations : nullptr, opts);
    report.warnings.insert(report.warnings.begin(), notes.begin(), notes.end());
    report.warnings.insert(report.warnings.end(), hyp.warnings.begin(), hyp.warnings.end());
    report.warnings.insert(report.warnings.end(), ref.warnings.begin(), ref.warnings.end());
    print_warnings(report.warnings);

    json doc = to_json(report);
    doc["schema"] = kSchemaVersion;
    doc["config"] = to_json(cfg);
    emit(args.out, doc.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
    std::string corpus, timings, out, pauses_tsv;
    bool ctm = false;
};

int cmd_analyze(const AnalyzeArgs& args, const RunConfig& cfg) {
    const auto corpus = load_corpus(args.corpus, cfg);
    const auto by_sentence = load_timings(args.timings, args.ctm).by_sentence();
    std::vector<PauseRecord> records;
    std::vector<std::string> warnings = corpus.warnings;
    std::string tsv = "sentence_id\tafter_word\tword\tnext_word\tgap\tcategory\n";
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const std::size_t id = corpus.source_lines[i] - 1;
        const auto* words = words_for(by_sentence, id);
        if (!words) {
            warnings.push_back("sentence " + std::to_string(id) + ": no word timings, skipped");
            ++skipped;
            continue;
        }
        try {
            auto analysis = compute_pauses(corpus.sentences[i], *words);
            for (const auto& w : analysis.warnings) {
                warnings.push_back("sentence " + std::to_string(id) + ": " + w);
            }
            for (const auto& r : analysis.records) {
                tsv += std::to_string(id) + '\t' + std::to_string(r.after_word_index) + '\t' +
                       (*words)[r.after_word_index].surface + '\t' + (*words)[r.after_word_index + 1].surface +
                       '\t' + format_seconds(r.gap) + '\t' + std::string(category_name(r.category)) + '\n';
            }
            records.insert(records.end(), analysis.records.begin(), analysis.records.end());
        } catch (const AlignmentError& e) {
            warnings.push_back("sentence " + std::to_string(id) + ": " + e.what() + ", skipped");
            ++skipped;
        }
    }
    print_warnings(warnings);
    if (corpus.size() > 0 && skipped == corpus.size()) {
        throw MismatchError("every sentence failed alignment");
    }

    const auto stats = pause_stats(records);
    json doc = {
        {"schema", kSchemaVersion},
        {"config", to_json(cfg)},
        {"categories", to_json(stats)},
        {"sentences", corpus.size()},
        {"skipped", skipped},
        {"records", records.size()},
    };
    try {
        doc["threshold"] = derive_eob_threshold(stats);
        doc["threshold_source"] = "derived";
    } catch (const MismatchError& e) {
        doc["threshold"] = nullptr;
        doc["threshold_source"] = "default";
        warnings.emplace_back(e.what());
    }
    doc["warnings"] = warnings;
    if (!args.pauses_tsv.empty()) {
        write_file_atomic(args.pauses_tsv, tsv);
    }
    emit(args.out, doc.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// segment

struct SegmentArgs {
    std::string input, timings, durations, out_annotated, out_srt;
    std::size_t first_index = 1;
    bool ctm = false;
    bool resegment = false;
};

/// Pause after every token: zero inside one timed word (punctuation tokens),
/// the word gap otherwise.
std::vector<double> token_pauses(const AnnotatedSentence& s, const std::vector<TimedWord>& words) {
    const auto alignment = align_tokens(s, words);
    std::vector<double> pauses;
    const auto& map = alignment.word_of_token;
    for (std::size_t t = 0; t + 1 < map.size(); ++t) {
        if (map[t] == map[t + 1]) {
            pauses.push_back(0.0);
        } else {
            pauses.push_back(std::max(0.0, pause_between(words[map[t]].end_time, words[map[t + 1]].start_time)));
        }
    }
    return pauses;
}

int cmd_segment(const SegmentArgs& args, const RunConfig& cfg) {
    const auto input = load_corpus(args.input, cfg);
    if (input.size() == 0) {
        throw FormatError(args.input + ": no sentences");
    }
    std::optional<std::map<std::size_t, std::vector<TimedWord>>> words;
    if (!args.timings.empty()) {
        words = load_timings(args.timings, args.ctm).by_sentence();
    }
    std::optional<DurationMap> durations;
    if (!args.durations.empty()) {
        durations = with_file(args.durations, [](const std::string& t) { return parse_durations(t); });
    }

    CorpusFile segmented;
    std::vector<std::string> warnings = input.warnings;
    std::size_t forced = 0, flagged = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const auto& s = input.sentences[i];
        const std::size_t id = input.source_lines[i] - 1;
        if (s.breaks().size() > 0 && !args.resegment) {
            throw FormatError(args.input + ": line " + std::to_string(input.source_lines[i]) +
                              ": input already contains breaks (use --resegment)");
        }
        const auto tokens = strip_breaks(s);
        std::optional<std::vector<double>> pauses;
        if (words) {
            if (const auto* w = words_for(*words, id)) {
                try {
                    pauses = token_pauses(s, *w);
                } catch (const AlignmentError& e) {
                    warnings.push_back("sentence " + std::to_string(id) + ": " + e.what() +
                                       "; segmenting without pauses");
                }
            }
        }
        auto result = segment(tokens, cfg.constraints, pauses ? &*pauses : nullptr, cfg.cost);
        forced += result.forced_eobs;
        flagged += result.flagged_blocks.size();
        for (auto b : result.flagged_blocks) {
            warnings.push_back("sentence " + std::to_string(id) + ": block " + std::to_string(b + 1) +
                               " holds a token wider than the line limit");
        }
        segmented.sentences.push_back(cfg.normalize(result.sentence));
        segmented.source_lines.push_back(input.source_lines[i]);
    }

    const auto cpl = cpl_conformity(segmented.sentences, cfg.constraints);
    std::string summary = "sentences=" + std::to_string(segmented.size()) + " blocks=" + std::to_string(cpl.total) +
                          " cpl=" + config_detail::format_number(cpl.percentage()) +
                          "% forced_eob=" + std::to_string(forced) + " flagged=" + std::to_string(flagged);
    if (!args.out_srt.empty()) {
        auto timing = time_corpus(segmented, words ? &*words : nullptr, durations ? &*durations : nullptr, cfg,
                                  args.first_index);
        warnings.insert(warnings.end(), timing.warnings.begin(), timing.warnings.end());
        write_file_atomic(args.out_srt, emit_srt(timing.blocks));
        summary += " " + timing_summary(timing.used);
    }
    const auto annotated = emit_annotated_corpus(segmented.sentences);
    if (!args.out_annotated.empty()) {
        emit(args.out_annotated, annotated);
    } else if (args.out_srt.empty()) {
        emit("-", annotated);
    }
    print_warnings(warnings);
    std::cerr << summary << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// convert

struct ConvertArgs {
    std::string input, from, to, out;
    std::string block_timings, timings_out, timings, durations;
    std::string group = "sentence";
    std::size_t first_index = 1;
    bool ctm = false;
};

bool ends_sentence(const std::string& line) {
    std::string_view s = detail::trim(line);
    // Skip closing quotes and brackets.
    while (!s.empty()) {
        const char c = s.back();
        if (c == '"' || c == '\'' || c == ')' || c == ']') {
            s.remove_suffix(1);
        } else if (s.size() >= 3 && (s.substr(s.size() - 3) == "\xE2\x80\x9D" || s.substr(s.size() - 3) == "\xE2\x80\x99")) {
            s.remove_suffix(3);
        } else if (s.size() >= 2 && s.substr(s.size() - 2) == "\xC2\xBB") {
            s.remove_suffix(2);
        } else {
            break;
        }
    }
    if (s.empty()) {
        return false;
    }
    const char c = s.back();
    return c == '.' || c == '?' || c == '!' || (s.size() >= 3 && s.substr(s.size() - 3) == "\xE2\x80\xA6");
}

std::vector<AnnotatedSentence> sentences_from_srt(const std::vector<SubtitleBlock>& blocks, const std::string& group) {
    std::vector<AnnotatedSentence> out;
    std::vector<UntimedBlock> pending;
    auto flush = [&] {
        if (!pending.empty()) {
            out.push_back(annotated_from_blocks(pending));
            pending.clear();
        }
    };
    for (const auto& b : blocks) {
        UntimedBlock block;
        for (const auto& line : b.lines) {
            Line tokens;
            for (auto w : detail::split_whitespace(line)) {
                tokens.emplace_back(w);
            }
            if (!tokens.empty()) {
                block.push_back(std::move(tokens));
            }
        }
        if (block.empty()) {
            continue;
        }
        pending.push_back(std::move(block));
        if (group == "block" || (group == "sentence" && ends_sentence(b.lines.back()))) {
            flush();
        }
    }
    flush();
    return out;
}

int cmd_convert(const ConvertArgs& args, const RunConfig& cfg) {
    if (args.from == "srt") {
        const auto blocks =
            with_file(args.input, [&](const std::string& t) { return parse_srt(t, cfg.parse_mode); });
        if (!args.timings_out.empty()) {
            std::vector<BlockTiming> sidecar;
            for (const auto& b : blocks) {
                sidecar.push_back({b.index, b.start, b.end});
            }
            write_file_atomic(args.timings_out, emit_block_timings(sidecar));
        }
        if (args.to == "srt") {
            emit(args.out, emit_srt(blocks));
            return kExitOk;
        }
        auto sentences = cfg.normalize(sentences_from_srt(blocks, args.group));
        if (args.to == "annotated") {
            std::cerr << "note: srt to annotated drops timings" << (args.timings_out.empty() ? "" : " (kept in sidecar)")
                      << '\n';
            emit(args.out, emit_annotated_corpus(sentences));
        } else {
            std::vector<std::vector<UntimedBlock>> grouped;
            for (const auto& s : sentences) {
                grouped.push_back(blocks_from_annotated(s));
            }
            emit(args.out, blocks_json(grouped, &blocks).dump(2) + "\n");
        }
        return kExitOk;
    }

    const auto corpus = load_corpus(args.input, cfg);
    print_warnings(corpus.warnings);
    if (args.to == "annotated") {
        emit(args.out, emit_annotated_corpus(corpus.sentences));
        return kExitOk;
    }
    std::vector<std::vector<UntimedBlock>> grouped;
    std::size_t total_blocks = 0;
    for (const auto& s : corpus.sentences) {
        grouped.push_back(blocks_from_annotated(s));
        total_blocks += grouped.back().size();
    }
    if (args.to == "blocks-json" && args.block_timings.empty() && args.timings.empty() && args.durations.empty()) {
        emit(args.out, blocks_json(grouped, nullptr).dump(2) + "\n");
        return kExitOk;
    }

    std::vector<SubtitleBlock> timed;
    if (!args.block_timings.empty()) {
        const auto sidecar =
            with_file(args.block_timings, [](const std::string& t) { return parse_block_timings(t); });
        if (sidecar.size() != total_blocks) {
            throw MismatchError(args.block_timings + ": " + std::to_string(sidecar.size()) + " timings for " +
                                std::to_string(total_blocks) + " blocks");
        }
        std::size_t k = 0;
        for (const auto& blocks : grouped) {
            for (const auto& block : blocks) {
                SubtitleBlock b{sidecar[k].index, sidecar[k].start, sidecar[k].end, {}};
                for (const auto& line : block) {
                    b.lines.push_back(line_text(line));
                }
                timed.push_back(std::move(b));
                ++k;
            }
        }
    } else {
        std::optional<std::map<std::size_t, std::vector<TimedWord>>> words;
        if (!args.timings.empty()) {
            words = load_timings(args.timings, args.ctm).by_sentence();
        }
        std::optional<DurationMap> durations;
        if (!args.durations.empty()) {
            durations = with_file(args.durations, [](const std::string& t) { return parse_durations(t); });
        }
        auto timing = time_corpus(corpus, words ? &*words : nullptr, durations ? &*durations : nullptr, cfg,
                                  args.first_index);
        print_warnings(timing.warnings);
        std::cerr << timing_summary(timing.used) << '\n';
        timed = std::move(timing.blocks);
    }
    if (args.to == "srt") {
        emit(args.out, emit_srt(timed));
    } else {
        emit(args.out, blocks_json(grouped, &timed).dump(2) + "\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"subkit: subtitle segmentation and evaluation toolkit"};
    app.require_subcommand(1);

    EvaluateArgs ev;
    ConfigOptions ev_cfg;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a hypothesis corpus against a reference");
    evaluate_cmd->add_option("hyp", ev.hyp, "Hypothesis corpus (annotated)")->required();
    evaluate_cmd->add_option("ref", ev.ref, "Reference corpus (annotated)")->required();
    evaluate_cmd->add_option("--durations", ev.durations, "Sentence durations TSV");
    evaluate_cmd->add_option("--timings", ev.timings, "Word timings, used for durations when --durations is absent");
    evaluate_cmd->add_flag("--ctm", ev.ctm, "Word timings are CTM");
    evaluate_cmd->add_option("-o,--out", ev.out, "Report path (default stdout)");
    ev_cfg.attach(evaluate_cmd);

    AnalyzeArgs an;
    ConfigOptions an_cfg;
    auto* analyze_cmd = app.add_subcommand("analyze", "Pause statistics per break category");
    analyze_cmd->add_option("corpus", an.corpus, "Annotated transcript corpus")->required();
    analyze_cmd->add_option("timings", an.timings, "Word timings TSV (or CTM with --ctm)")->required();
    analyze_cmd->add_flag("--ctm", an.ctm, "Word timings are CTM");
    analyze_cmd->add_option("-o,--out", an.out, "Statistics path (default stdout)");
    analyze_cmd->add_option("--pauses-tsv", an.pauses_tsv, "Dump every pause record as TSV");
    an_cfg.attach(analyze_cmd);

    SegmentArgs sg;
    ConfigOptions sg_cfg;
    auto* segment_cmd = app.add_subcommand("segment", "Insert <eol>/<eob> into plain sentences");
    segment_cmd->add_option("input", sg.input, "Plain text corpus, one sentence per line")->required();
    segment_cmd->add_option("--timings", sg.timings, "Word timings TSV (or CTM with --ctm)");
    segment_cmd->add_flag("--ctm", sg.ctm, "Word timings are CTM");
    segment_cmd->add_option("--durations", sg.durations, "Sentence durations for proportional timing");
    segment_cmd->add_flag("--resegment", sg.resegment, "Strip existing breaks and segment again");
    segment_cmd->add_option("--out-annotated", sg.out_annotated, "Annotated corpus output (default stdout)");
    segment_cmd->add_option("--out-srt", sg.out_srt, "SRT output");
    segment_cmd->add_option("--first-index", sg.first_index, "Index of the first SRT block")->check(CLI::PositiveNumber);
    sg_cfg.attach(segment_cmd);

    ConvertArgs cv;
    ConfigOptions cv_cfg;
    auto* convert_cmd = app.add_subcommand("convert", "Convert between annotated text, SRT and blocks JSON");
    convert_cmd->add_option("input", cv.input, "Input file")->required();
    convert_cmd->add_option("--from", cv.from, "Input format")->required()->check(CLI::IsMember({"annotated", "srt"}));
    convert_cmd->add_option("--to", cv.to, "Output format")
        ->required()
        ->check(CLI::IsMember({"annotated", "srt", "blocks-json"}));
    convert_cmd->add_option("-o,--out", cv.out, "Output path (default stdout)");
    convert_cmd->add_option("--block-timings", cv.block_timings, "Block timing sidecar to apply (annotated input)");
    convert_cmd->add_option("--timings-out", cv.timings_out, "Write a block timing sidecar (srt input)");
    convert_cmd->add_option("--timings", cv.timings, "Word timings for alignment-mode timing");
    convert_cmd->add_flag("--ctm", cv.ctm, "Word timings are CTM");
    convert_cmd->add_option("--durations", cv.durations, "Sentence durations for proportional timing");
    convert_cmd->add_option("--first-index", cv.first_index, "Index of the first SRT block")->check(CLI::PositiveNumber);
    convert_cmd->add_option("--group", cv.group, "How SRT blocks form sentences")
        ->check(CLI::IsMember({"sentence", "block", "file"}));
    cv_cfg.attach(convert_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (evaluate_cmd->parsed()) {
            return cmd_evaluate(ev, ev_cfg.resolve());
        }
        if (analyze_cmd->parsed()) {
            return cmd_analyze(an, an_cfg.resolve());
        }
        if (segment_cmd->parsed()) {
            return cmd_segment(sg, sg_cfg.resolve());
        }
        if (convert_cmd->parsed()) {
            return cmd_convert(cv, cv_cfg.resolve());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMismatch;
    }
    return kExitUsage;
}
