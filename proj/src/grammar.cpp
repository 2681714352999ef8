#include "thebench/grammar.hpp"

namespace thebench {

namespace {

std::string join_items(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& it : items) {
        if (!out.empty()) out += ' ';
        out += it;
    }
    return out;
}

bool lf_equal(const Term& a, const Term& b) {
    return canonical_string(a) == canonical_string(b);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string Entry::phon_text() const { return join_items(phon); }

std::vector<const Entry*> Grammar::entries() const {
    std::vector<const Entry*> out;
    for (const auto& e : elements_)
        if (auto* p = std::get_if<Entry>(&e)) out.push_back(p);
    return out;
}

std::vector<const AsymRule*> Grammar::arules() const {
    std::vector<const AsymRule*> out;
    for (const auto& e : elements_)
        if (auto* p = std::get_if<AsymRule>(&e)) out.push_back(p);
    return out;
}

bool Grammar::is_sourced() const {
    for (const auto& e : elements_) {
        if (std::holds_alternative<SymRule>(e)) return false;
        if (!element_key(e)) return false;
    }
    return true;
}

std::string element_text(const Element& e) {
    return std::visit(
        overloaded{
            [](const Entry& en) {
                std::string out = join_items(en.phon);
                if (!en.pos.empty()) out += " | " + en.pos;
                out += " :: " + to_string(en.category) + " : " + to_string(en.lf);
                return out;
            },
            [](const AsymRule& r) {
                return "#" + r.name + " " + to_string(r.lhs_cat) + " : " + to_string(r.lhs_lf) +
                       " --> " + to_string(r.rhs_cat) + " : " + to_string(r.rhs_lf);
            },
            [](const SymRule& r) {
                auto side = [](const SymSide& s) {
                    return join_items(s.phon) + ", " + to_string(s.category) + " : " +
                           to_string(s.lf);
                };
                return "#" + r.name + " " + side(r.left) + " <--> " + side(r.right);
            },
        },
        e);
}

std::optional<Key> element_key(const Element& e) {
    if (auto* en = std::get_if<Entry>(&e)) return en->key;
    if (auto* r = std::get_if<AsymRule>(&e)) return r->key;
    return std::nullopt;
}

double element_weight(const Element& e) {
    if (auto* en = std::get_if<Entry>(&e)) return en->weight;
    if (auto* r = std::get_if<AsymRule>(&e)) return r->weight;
    return 1.0;
}

bool entry_equal(const Entry& a, const Entry& b) {
    return a.phon == b.phon && a.pos == b.pos && cat_equal(a.category, b.category) &&
           lf_equal(a.lf, b.lf) && a.key == b.key && a.weight == b.weight;
}

bool arule_equal(const AsymRule& a, const AsymRule& b) {
    return a.name == b.name && cat_equal(a.lhs_cat, b.lhs_cat) && lf_equal(a.lhs_lf, b.lhs_lf) &&
           cat_equal(a.rhs_cat, b.rhs_cat) && lf_equal(a.rhs_lf, b.rhs_lf) && a.key == b.key &&
           a.weight == b.weight;
}

bool grammar_equal(const Grammar& a, const Grammar& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Element& x = a.elements()[i];
        const Element& y = b.elements()[i];
        if (x.index() != y.index()) return false;
        if (auto* ex = std::get_if<Entry>(&x)) {
            if (!entry_equal(*ex, std::get<Entry>(y))) return false;
        } else if (auto* rx = std::get_if<AsymRule>(&x)) {
            if (!arule_equal(*rx, std::get<AsymRule>(y))) return false;
        } else {
            if (element_text(x) != element_text(y)) return false;
        }
    }
    return true;
}

bool corresponds(const Cat& category, const Term& lf) {
    return arity(category) == 0 || leading_lambdas(lf) >= 1;
}

}  // namespace thebench
