#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "thebench/config.hpp"
#include "thebench/engine.hpp"
#include "thebench/grammar.hpp"
#include "thebench/model.hpp"

namespace thebench {

/// Distinct categories grouped under their skeletons, each with its bearers.
/// Throws NoGrammarLoaded on an empty grammar.
std::string report_skeleton(const Grammar& g);

/// Basic categories with their features and attested values.
std::string report_inventory(const Grammar& g);

/// Intermediate representation (JSON) of one element or a whole grammar.
std::string element_ir(const Element& e, int indent = 2);
std::string grammar_ir(const Grammar& g, int indent = 2);

std::string help_text();
std::string welcome_banner();

/// Command interpreter state: grammar, switches, stored analyses, logging.
class Session {
public:
    explicit Session(std::filesystem::path workspace, std::ostream& console);

    /// Runs one command line. Returns false once `x` has been given.
    bool dispatch(std::string_view line);
    /// Runs a command file, logging to `<file stem>.log` in the working
    /// directory. Throws IoError or BenchError on nesting too deep.
    void batch(const std::filesystem::path& file);

    const Config& config() const { return cfg_; }
    Config& config() { return cfg_; }
    bool has_grammar() const { return lexicon_ != nullptr; }
    const Grammar& grammar() const;
    const std::string& grammar_name() const { return grammar_name_; }
    const std::vector<Derivation>& solutions() const { return solutions_; }
    const std::vector<RankedLf>& ranked() const { return ranked_; }
    const std::vector<std::string>& history() const { return history_; }
    const std::vector<JobHandle>& jobs() const { return jobs_; }
    const std::filesystem::path& workspace() const { return workspace_; }
    bool logging() const { return user_log_ != nullptr; }
    bool finished() const { return finished_; }

    /// Asked before destructive commands; the default declines.
    void set_confirm(std::function<bool(const std::string&)> confirm) { confirm_ = std::move(confirm); }

    /// Replaces the grammar (already sourced) under `name`.
    void load_grammar(Grammar sourced, std::string name);

    static constexpr int kMaxBatchDepth = 16;
    static constexpr std::string_view kPrompt = "tb> ";

private:
    void emit(std::string_view text);
    void run_command(std::string_view cmd, std::string_view rest);

    void cmd_analyze(std::string_view rest);
    void cmd_casegen(std::string_view rest);
    void cmd_grammar(std::string_view rest);
    void cmd_ir();
    void cmd_skeleton();
    void cmd_function(std::string_view rest);
    void cmd_shell(std::string_view rest);
    void cmd_rank(std::string_view rest);
    void cmd_train(std::string_view rest);
    void cmd_retext(std::string_view rest);
    void cmd_show(std::string_view rest);
    void cmd_ranked(std::string_view rest);
    void cmd_filter(std::string_view rest);
    void cmd_inventory(std::string_view rest);
    void cmd_by_pos(std::string_view rest);
    void cmd_element(std::string_view rest);
    void cmd_log_start(std::string_view rest);
    void cmd_log_stop();
    void cmd_clear_workspace();

    const Lexicon& lexicon() const;

    std::filesystem::path workspace_;
    std::ostream& console_;
    Config cfg_;
    std::unique_ptr<Lexicon> lexicon_;
    std::string grammar_name_;
    std::string last_input_;
    std::vector<Derivation> solutions_;
    std::vector<RankedLf> ranked_;
    std::string ranked_input_;
    std::vector<std::string> history_;
    std::vector<JobHandle> jobs_;
    std::unique_ptr<std::ofstream> user_log_;
    std::vector<std::unique_ptr<std::ofstream>> batch_logs_;
    std::function<bool(const std::string&)> confirm_;
    bool finished_ = false;
};

}  // namespace thebench
