#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "thebench/config.hpp"
#include "thebench/grammar.hpp"
#include "thebench/tokenize.hpp"

namespace thebench {

/// Combinators of the monad: forward/backward application (A, T) and
/// first-order composition, harmonic (FB, BB) and crossing (FBx, BBx).
enum class RuleId : std::uint8_t { none, A, T, FB, BB, FBx, BBx };

std::string_view rule_name(RuleId r);
bool is_forward(RuleId r);
bool is_composition(RuleId r);

enum class Origin : std::uint8_t { lexical, singleton, oov, arule, combined };

struct ChartItem {
    Cat category;
    Term lf;  // beta-normal
    int start = 0;
    int end = 0;
    Origin origin = Origin::lexical;
    RuleId rule = RuleId::none;
    std::optional<Key> key;  // entry key for lexical leaves, rule key for arules
    int left = -1;           // child (or arule parent)
    int right = -1;
    std::string label;       // leaves: phon | pos; arules: rule name
    std::vector<std::uint16_t> arule_chain;  // arules applied since the last non-arule step
};

/// Grammar prepared for lookup. Holds its own copy of the elements.
class Lexicon {
public:
    explicit Lexicon(Grammar g);

    const Grammar& grammar() const { return *grammar_; }
    const std::vector<const Entry*>& lookup(const std::string& text) const;
    bool has_singleton(const std::string& text) const;
    const std::vector<const AsymRule*>& arules() const { return arules_; }

private:
    std::shared_ptr<const Grammar> grammar_;
    std::unordered_map<std::string, std::vector<const Entry*>> by_phon_;
    std::vector<std::string> singletons_;
    std::vector<const AsymRule*> arules_;
};

/// Leaves for every token: matching entries (multi-item entries match an MWE
/// token with the same items), a singleton leaf where the token's text is a
/// singleton category of the grammar, and with `oov` the two dummies
/// `@X\@X : \p.p` and `@X/@X : \p.p` for tokens nothing else covers.
std::vector<ChartItem> lexical_injections(const std::vector<Token>& tokens, const Lexicon& lex,
                                          bool oov);

/// Items derived from `item` by the asymmetric rules, in rule order; a rule
/// never applies twice along one chain. Children point at `item_index`.
std::vector<ChartItem> apply_arules(const ChartItem& item, int item_index,
                                    const std::vector<const AsymRule*>& rules,
                                    const ReduceOptions& reduce = {});

/// A single combination result before it enters the chart.
struct Combination {
    RuleId rule;
    Cat category;
    Term lf;
};

/// Every result licensed for adjacent `left` `right` under the slash
/// modalities and the monad setting.
std::vector<Combination> combine(const ChartItem& left, const ChartItem& right, const Config& cfg);

/// Whether a composition may be driven by these two slashes.
bool composition_licensed(RuleId rule, const Slash& primary, const Slash& secondary);

/// Eisner's constraint: the output of forward (backward) composition is
/// never the primary functor of a forward (backward) rule.
bool nf_admissible(RuleId rule, const ChartItem& left, const ChartItem& right, const Config& cfg);

class Chart {
public:
    const std::vector<Token>& tokens() const { return tokens_; }
    const std::vector<ChartItem>& items() const { return items_; }
    const ChartItem& item(int i) const { return items_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& cell(int start, int end) const;
    int size() const { return static_cast<int>(tokens_.size()); }

private:
    friend class ChartBuilder;
    std::vector<Token> tokens_;
    std::vector<ChartItem> items_;
    std::vector<std::vector<int>> cells_;  // (start, end) -> item indices
};

/// A root item spanning the whole input and the tree below it.
class Derivation {
public:
    Derivation(std::shared_ptr<const Chart> chart, int root) : chart_(std::move(chart)), root_(root) {}

    const Chart& chart() const { return *chart_; }
    const std::shared_ptr<const Chart>& chart_ptr() const { return chart_; }
    int root() const { return root_; }
    const ChartItem& item() const { return chart_->item(root_); }
    const Cat& category() const { return item().category; }
    const Term& lf() const { return item().lf; }

    /// Keys used by leaves and arule firings, one per use.
    std::vector<Key> keys_used() const;
    /// Tree signature, e.g. `(A (lex 1) (lex 3))`.
    std::string signature() const;

private:
    std::shared_ptr<const Chart> chart_;
    int root_;
};

/// CKY analysis; solutions in deterministic order (category print, then
/// derivation signature). Throws ChartOverflow past the item ceiling.
std::vector<Derivation> analyze(std::string_view input, const Lexicon& lex, const Config& cfg);
std::vector<Derivation> analyze(const std::vector<Token>& tokens, const Lexicon& lex, const Config& cfg);

/// Derivations whose root is a basic category named in `basic_cats`.
std::vector<Derivation> filter_solutions(const std::vector<Derivation>& derivs,
                                         const std::vector<std::string>& basic_cats);

/// Indented tree of a derivation; LFs of inner steps only when `lambda`.
std::string render_derivation(const Derivation& d, bool lambda);

}  // namespace thebench
