#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thebench/errors.hpp"
#include "thebench/grammar.hpp"
#include "thebench/tokenize.hpp"

namespace thebench {

// ---------------------------------------------------------------------------
// Grammar text
//
//   likes | v :: (s\^np[agr=3s])/^np : \x\y.like x y
//   #np-raise np[agr=?x] : lf --> s/(s\np[agr=?x]) : \lf\p.p lf
//   #tense runs, s[t=pres,agr=3s]\np : \x.pres run x <--> ran, s[t=past]\np : \x.past run x
//
// One element per line, optionally suffixed `<key, weight>`. `%` opens a
// comment except inside phonological material and quoted singletons.

struct ParsedGrammar {
    Grammar grammar;
    std::vector<LineDiagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// Parses every line, collecting a diagnostic for each bad one.
ParsedGrammar parse_grammar_text(std::string_view text);

/// One line; nullopt for blank/comment lines. Throws LineError.
std::optional<Element> parse_element_line(std::string_view line, int lineno = 1);

/// The line with its comment removed.
std::string strip_comment(std::string_view line);

/// Splits symmetric rules into entries tagged with the rule name and gives
/// every element a key and weight. User keys are kept; fresh keys count up
/// from the largest user key in textual order. Throws DuplicateUserKey.
Grammar source_grammar(const Grammar& g);

/// Re-text: one line per element ending with `<key, weight>`, no comments.
std::string regenerate_text(const Grammar& sourced);

/// Shortest round-trip decimal, always with a fractional part (`1.0`).
std::string format_weight(double w);

// ---------------------------------------------------------------------------
// Sourced grammar files (`.src`): versioned, tab-separated records.

inline constexpr std::string_view kSrcHeader = "thebench-src 1";

std::string src_text(const Grammar& sourced);
Grammar parse_src(std::string_view text);  // throws VersionMismatch, SyntaxError
void write_src(const Grammar& sourced, const std::filesystem::path& path);
Grammar read_src(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Supervision: `surface : gold-lf`, one pair per line.

struct SupervisionPair {
    std::vector<Token> surface;
    Term gold;
};

std::vector<SupervisionPair> parse_supervision(std::string_view text);  // throws ParseErrors

inline constexpr std::string_view kSupHeader = "thebench-sup 1";
void write_sup(const std::vector<SupervisionPair>& pairs, const std::filesystem::path& path);
std::vector<SupervisionPair> read_sup(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Experiment files: `mem heap iters|xp lr lrr prefix [pre-function]`.

struct ExperimentSpec {
    long mem_mb = 0;
    long heap_mb = 0;
    bool extrapolate = false;  // `xp`
    int iterations = 0;        // unused under xp
    double learning_rate = 0;
    double learning_rate_rate = 0;
    std::string log_prefix;
    std::optional<std::string> pre_function;
    std::string source_line;
};

/// Throws LineError (shape) or, when `check_function`, UnknownPreFunction.
ExperimentSpec parse_experiment_line(std::string_view line, int lineno, bool check_function = true);
/// The whole file must parse. With `check_function` off an unknown
/// function name is kept and only fails the job that runs it.
std::vector<ExperimentSpec> parse_experiment_file(std::string_view text, bool check_function = true);

// ---------------------------------------------------------------------------
// Files and the workspace directory.

/// `THEBENCH_HOME` or /var/tmp/thebench; created on demand.
std::filesystem::path workspace_dir();

std::string read_file(const std::filesystem::path& path);  // throws IoError
/// Writes to a temporary sibling and renames over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace thebench
