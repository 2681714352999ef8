#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thebench/category.hpp"
#include "thebench/lambda.hpp"

namespace thebench {

using Key = long;

/// An elementary item: `phon | pos :: category : lf`.
struct Entry {
    std::vector<std::string> phon;  // items; case preserved
    std::string pos;                // empty when the text omits `| pos`
    Cat category;
    Term lf;
    std::optional<Key> key;
    double weight = 1.0;
    bool user_param = false;  // key/weight came from the text

    /// Items joined by single spaces; the lookup form for surface tokens.
    std::string phon_text() const;
};

/// `#name lhs_cat : lhs_lf --> rhs_cat : rhs_lf`.
struct AsymRule {
    std::string name;
    Cat lhs_cat;
    Term lhs_lf;
    Cat rhs_cat;
    Term rhs_lf;
    std::optional<Key> key;
    double weight = 1.0;
    bool user_param = false;
};

struct SymSide {
    std::vector<std::string> phon;
    Cat category;
    Term lf;
};

/// `#name phon, cat : lf <--> phon, cat : lf`; compiles into two entries.
struct SymRule {
    std::string name;
    SymSide left;
    SymSide right;
};

using Element = std::variant<Entry, AsymRule, SymRule>;

/// Elements in textual order. Asymmetric rules apply in this order; entry
/// order carries no meaning beyond printing.
class Grammar {
public:
    Grammar() = default;
    explicit Grammar(std::vector<Element> elements) : elements_(std::move(elements)) {}

    const std::vector<Element>& elements() const { return elements_; }
    std::vector<Element>& elements() { return elements_; }
    void add(Element e) { elements_.push_back(std::move(e)); }
    bool empty() const { return elements_.empty(); }
    std::size_t size() const { return elements_.size(); }

    std::vector<const Entry*> entries() const;
    std::vector<const AsymRule*> arules() const;

    /// True when no symmetric rules remain and every element has a key.
    bool is_sourced() const;

private:
    std::vector<Element> elements_;
};

/// Elements print as grammar text lines (without key suffix).
std::string element_text(const Element& e);

std::optional<Key> element_key(const Element& e);
double element_weight(const Element& e);

bool entry_equal(const Entry& a, const Entry& b);
bool arule_equal(const AsymRule& a, const AsymRule& b);
/// Element-wise equality including keys and weights.
bool grammar_equal(const Grammar& a, const Grammar& b);

/// Lambda abstractions cover syntactic argument-taking: a complex category
/// needs an abstraction for its l-command.
bool corresponds(const Cat& category, const Term& lf);

}  // namespace thebench
