#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thebench/grammar.hpp"

namespace thebench {

struct CaseGeneration {
    std::vector<AsymRule> rules;
    std::vector<std::string> notes;  // skipped slots, empty matches
};

/// Second-order case functions read off the subcategorizations of entries
/// whose part of speech is in `pos_list`. For each argument slot on a
/// verb's result spine, F = R\A yields `A : lf --> R/F : \lf\p.p lf` and
/// F = R/A yields `A : lf --> R\F : \lf\p.p lf`. Singleton, meta and
/// double-slash slots are skipped. Rules equal up to variable renaming are
/// kept once; names are `case-<pos>-<n>`. Throws EmptyPosList.
CaseGeneration generate_case_functions(const Grammar& g, const std::vector<std::string>& pos_list);

/// `#name lhs --> rhs` lines, parseable as grammar text.
std::string arules_text(const std::vector<AsymRule>& rules);

/// Writes `<grammar_name>.sc.arules` into `dir`; returns the path.
std::filesystem::path write_arules(const std::vector<AsymRule>& rules, const std::string& grammar_name,
                                   const std::filesystem::path& dir = std::filesystem::current_path());

}  // namespace thebench
