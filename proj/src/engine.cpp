#include "thebench/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "thebench/errors.hpp"
#include "thebench/reduce.hpp"
#include "thebench/unify.hpp"

namespace thebench {

std::string_view rule_name(RuleId r) {
    switch (r) {
        case RuleId::none: return "";
        case RuleId::A: return "A";
        case RuleId::T: return "T";
        case RuleId::FB: return "FB";
        case RuleId::BB: return "BB";
        case RuleId::FBx: return "FBx";
        case RuleId::BBx: return "BBx";
    }
    return "";
}

bool is_forward(RuleId r) { return r == RuleId::A || r == RuleId::FB || r == RuleId::FBx; }

bool is_composition(RuleId r) {
    return r == RuleId::FB || r == RuleId::BB || r == RuleId::FBx || r == RuleId::BBx;
}

// ---------------------------------------------------------------------------

namespace {

void collect_singletons(const Cat& c, std::vector<std::string>& out) {
    if (c->is_singleton()) {
        out.push_back(c->name());
    } else if (c->is_complex()) {
        collect_singletons(c->result(), out);
        collect_singletons(c->arg(), out);
    }
}

const std::vector<const Entry*> kNoEntries;

}  // namespace

Lexicon::Lexicon(Grammar g) : grammar_(std::make_shared<const Grammar>(std::move(g))) {
    for (const auto& el : grammar_->elements()) {
        if (auto* e = std::get_if<Entry>(&el)) {
            by_phon_[e->phon_text()].push_back(e);
            collect_singletons(e->category, singletons_);
        } else if (auto* r = std::get_if<AsymRule>(&el)) {
            arules_.push_back(r);
            collect_singletons(r->rhs_cat, singletons_);
        }
        // symmetric rules take part only after sourcing
    }
    std::sort(singletons_.begin(), singletons_.end());
    singletons_.erase(std::unique(singletons_.begin(), singletons_.end()), singletons_.end());
}

const std::vector<const Entry*>& Lexicon::lookup(const std::string& text) const {
    auto it = by_phon_.find(text);
    return it == by_phon_.end() ? kNoEntries : it->second;
}

bool Lexicon::has_singleton(const std::string& text) const {
    return std::binary_search(singletons_.begin(), singletons_.end(), text);
}

// ---------------------------------------------------------------------------

std::vector<ChartItem> lexical_injections(const std::vector<Token>& tokens, const Lexicon& lex, bool oov) {
    std::vector<ChartItem> out;
    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        const Token& tok = tokens[static_cast<std::size_t>(i)];
        bool covered = false;
        for (const Entry* e : lex.lookup(tok.text)) {
            // multi-item entries match only bracketed MWEs
            if (e->phon.size() > 1 && !tok.mwe) continue;
            ChartItem it;
            it.category = e->category;
            it.lf = beta_reduce(e->lf);
            it.start = i;
            it.end = i + 1;
            it.origin = Origin::lexical;
            it.key = e->key;
            it.label = e->phon_text() + (e->pos.empty() ? "" : " | " + e->pos);
            out.push_back(std::move(it));
            covered = true;
        }
        if (lex.has_singleton(tok.text)) {
            ChartItem it;
            it.category = Category::singleton(tok.text);
            std::string name = tok.text;
            std::replace(name.begin(), name.end(), ' ', '_');
            it.lf = LambdaTerm::constant(name, true);
            it.start = i;
            it.end = i + 1;
            it.origin = Origin::singleton;
            it.label = tok.text;
            out.push_back(std::move(it));
            covered = true;
        }
        if (!covered && oov) {
            for (Dir d : {Dir::left, Dir::right}) {
                ChartItem it;
                it.category = Category::complex(Category::meta("X"), Slash::make(d), Category::meta("X"));
                it.lf = LambdaTerm::abs("p", LambdaTerm::var("p"));
                it.start = i;
                it.end = i + 1;
                it.origin = Origin::oov;
                it.label = tok.text + " | oov";
                out.push_back(std::move(it));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<ChartItem> apply_arules(const ChartItem& item, int item_index,
                                    const std::vector<const AsymRule*>& rules, const ReduceOptions& reduce) {
    std::vector<ChartItem> out;
    if (item.origin == Origin::singleton) return out;
    std::set<std::string> item_vars;
    collect_vars(item.category, item_vars);
    for (std::size_t r = 0; r < rules.size(); ++r) {
        auto idx = static_cast<std::uint16_t>(r);
        if (std::find(item.arule_chain.begin(), item.arule_chain.end(), idx) != item.arule_chain.end()) continue;
        const AsymRule& rule = *rules[r];
        // rename lhs and rhs together so shared variables stay linked
        Cat pair = rename_apart(Category::complex(rule.lhs_cat, Slash{}, rule.rhs_cat), item_vars);
        auto s = unify_cat(pair->result(), item.category);
        if (!s) continue;
        ChartItem it;
        it.category = s->apply(pair->arg());
        it.lf = beta_reduce(LambdaTerm::app(rule.rhs_lf, item.lf), reduce);
        it.start = item.start;
        it.end = item.end;
        it.origin = Origin::arule;
        it.key = rule.key;
        it.left = item_index;
        it.label = "#" + rule.name;
        it.arule_chain = item.arule_chain;
        it.arule_chain.push_back(idx);
        out.push_back(std::move(it));
    }
    return out;
}

// ---------------------------------------------------------------------------

bool composition_licensed(RuleId rule, const Slash& primary, const Slash& secondary) {
    if (primary.dbl || secondary.dbl) return false;
    auto permits = [rule](Modality m) {
        switch (m) {
            case Modality::dot: return true;
            case Modality::diamond: return rule == RuleId::FB || rule == RuleId::BB;
            case Modality::cross: return rule == RuleId::FBx || rule == RuleId::BBx;
            case Modality::star: return false;
        }
        return false;
    };
    return permits(primary.mod) && permits(secondary.mod);
}

namespace {

std::string fresh_binder(const Term& f, const Term& g) {
    auto fv = free_vars(f);
    auto gv = free_vars(g);
    std::string z = "z";
    for (int n = 1; fv.count(z) || gv.count(z); ++n) z = "z" + std::to_string(n);
    return z;
}

/// \z. f (g z)
Term compose_lf(const Term& f, const Term& g, const ReduceOptions& reduce) {
    std::string z = fresh_binder(f, g);
    Term body = LambdaTerm::app(f, LambdaTerm::app(g, LambdaTerm::var(z)));
    return beta_reduce(LambdaTerm::abs(z, body), reduce);
}

}  // namespace

std::vector<Combination> combine(const ChartItem& left, const ChartItem& right, const Config& cfg) {
    std::vector<Combination> out;
    std::set<std::string> left_vars;
    collect_vars(left.category, left_vars);
    const Cat& L = left.category;
    const Cat R = rename_apart(right.category, left_vars);
    const bool compose = !cfg.montague && !contains_meta(L) && !contains_meta(R);

    // A: X/Y Y => X
    if (L->is_complex() && L->slash().dir == Dir::right) {
        if (auto s = unify_cat(L->arg(), R))
            out.push_back({RuleId::A, s->apply(L->result()),
                           beta_reduce(LambdaTerm::app(left.lf, right.lf), cfg.reduce)});
    }
    // T: Y X\Y => X
    if (R->is_complex() && R->slash().dir == Dir::left) {
        if (auto s = unify_cat(R->arg(), L))
            out.push_back({RuleId::T, s->apply(R->result()),
                           beta_reduce(LambdaTerm::app(right.lf, left.lf), cfg.reduce)});
    }
    if (!compose || !L->is_complex() || !R->is_complex()) return out;

    // FB: X/Y Y/Z => X/Z    FBx: X/Y Y\Z => X\Z
    if (L->slash().dir == Dir::right) {
        RuleId rule = R->slash().dir == Dir::right ? RuleId::FB : RuleId::FBx;
        if (composition_licensed(rule, L->slash(), R->slash())) {
            if (auto s = unify_cat(L->arg(), R->result()))
                out.push_back({rule, Category::complex(s->apply(L->result()), R->slash(), s->apply(R->arg())),
                               compose_lf(left.lf, right.lf, cfg.reduce)});
        }
    }
    // BB: Y\Z X\Y => X\Z    BBx: Y/Z X\Y => X/Z
    if (R->slash().dir == Dir::left) {
        RuleId rule = L->slash().dir == Dir::left ? RuleId::BB : RuleId::BBx;
        if (composition_licensed(rule, R->slash(), L->slash())) {
            if (auto s = unify_cat(R->arg(), L->result()))
                out.push_back({rule, Category::complex(s->apply(R->result()), L->slash(), s->apply(L->arg())),
                               compose_lf(right.lf, left.lf, cfg.reduce)});
        }
    }
    return out;
}

bool nf_admissible(RuleId rule, const ChartItem& left, const ChartItem& right, const Config& cfg) {
    if (!cfg.nfparse) return true;
    if (is_forward(rule)) return !(left.rule == RuleId::FB || left.rule == RuleId::FBx);
    return !(right.rule == RuleId::BB || right.rule == RuleId::BBx);
}

// ---------------------------------------------------------------------------

const std::vector<int>& Chart::cell(int start, int end) const {
    return cells_[static_cast<std::size_t>(start * (size() + 1) + end)];
}

class ChartBuilder {
public:
    ChartBuilder(const std::vector<Token>& tokens, const Lexicon& lex, const Config& cfg)
        : chart_(std::make_shared<Chart>()), lex_(lex), cfg_(cfg), ceiling_(cfg.item_ceiling()) {
        chart_->tokens_ = tokens;
        auto n = tokens.size() + 1;
        chart_->cells_.assign(n * n, {});
    }

    std::shared_ptr<const Chart> build() {
        const int n = chart_->size();
        for (auto& leaf : lexical_injections(chart_->tokens_, lex_, cfg_.oov)) add(std::move(leaf));
        for (int len = 2; len <= n; ++len) {
            for (int i = 0; i + len <= n; ++i) {
                int j = i + len;
                for (int k = i + 1; k < j; ++k) {
                    // copy: add() grows the cell vectors of (i, j) only
                    const std::vector<int> lefts = chart_->cell(i, k);
                    const std::vector<int> rights = chart_->cell(k, j);
                    for (int l : lefts) {
                        for (int r : rights) {
                            const ChartItem& li = chart_->item(l);
                            const ChartItem& ri = chart_->item(r);
                            for (auto& c : combine(li, ri, cfg_)) {
                                if (!nf_admissible(c.rule, chart_->item(l), chart_->item(r), cfg_)) continue;
                                ChartItem it;
                                it.category = std::move(c.category);
                                it.lf = std::move(c.lf);
                                it.start = i;
                                it.end = j;
                                it.origin = Origin::combined;
                                it.rule = c.rule;
                                it.left = l;
                                it.right = r;
                                add(std::move(it));
                            }
                        }
                    }
                }
            }
        }
        return chart_;
    }

private:
    void add(ChartItem item) {
        std::vector<ChartItem> pending;
        pending.push_back(std::move(item));
        while (!pending.empty()) {
            ChartItem it = std::move(pending.back());
            pending.pop_back();
            if (chart_->items_.size() >= ceiling_)
                throw ChartOverflow("chart exceeded " + std::to_string(ceiling_) + " items");
            int idx = static_cast<int>(chart_->items_.size());
            int s = it.start, e = it.end;
            chart_->items_.push_back(std::move(it));
            cell(s, e).push_back(idx);
            auto derived = apply_arules(chart_->items_.back(), idx, lex_.arules(), cfg_.reduce);
            // keep rule order when popping from the back
            for (auto d = derived.rbegin(); d != derived.rend(); ++d) pending.push_back(std::move(*d));
        }
    }

    std::vector<int>& cell(int start, int end) {
        return chart_->cells_[static_cast<std::size_t>(start * (chart_->size() + 1) + end)];
    }

    std::shared_ptr<Chart> chart_;
    const Lexicon& lex_;
    const Config& cfg_;
    std::size_t ceiling_;
};

// ---------------------------------------------------------------------------

std::vector<Key> Derivation::keys_used() const {
    std::vector<Key> out;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const ChartItem& it = chart_->item(stack.back());
        stack.pop_back();
        if ((it.origin == Origin::lexical || it.origin == Origin::arule) && it.key) out.push_back(*it.key);
        if (it.left >= 0) stack.push_back(it.left);
        if (it.right >= 0) stack.push_back(it.right);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void signature_of(const Chart& c, int idx, std::string& out) {
    const ChartItem& it = c.item(idx);
    out += '(';
    switch (it.origin) {
        case Origin::lexical: out += "lex " + (it.key ? std::to_string(*it.key) : it.label) + " " + to_string(it.category); break;
        case Origin::singleton: out += "sing " + it.label; break;
        case Origin::oov: out += "oov " + to_string(it.category); break;
        case Origin::arule: out += it.label + " "; signature_of(c, it.left, out); break;
        case Origin::combined:
            out += rule_name(it.rule);
            out += ' ';
            signature_of(c, it.left, out);
            out += ' ';
            signature_of(c, it.right, out);
            break;
    }
    out += ')';
}

}  // namespace

std::string Derivation::signature() const {
    std::string out;
    signature_of(*chart_, root_, out);
    return out;
}

std::vector<Derivation> analyze(const std::vector<Token>& tokens, const Lexicon& lex, const Config& cfg) {
    std::vector<Derivation> out;
    if (tokens.empty()) return out;
    auto chart = ChartBuilder(tokens, lex, cfg).build();
    for (int idx : chart->cell(0, chart->size())) out.emplace_back(chart, idx);
    std::vector<std::pair<std::string, std::string>> keys;
    keys.reserve(out.size());
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        keys.emplace_back(to_string(out[i].category()), out[i].signature());
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<Derivation> sorted;
    sorted.reserve(out.size());
    for (auto i : order) sorted.push_back(out[i]);
    return sorted;
}

std::vector<Derivation> analyze(std::string_view input, const Lexicon& lex, const Config& cfg) {
    return analyze(tokenize(input), lex, cfg);
}

std::vector<Derivation> filter_solutions(const std::vector<Derivation>& derivs, const std::vector<std::string>& basic_cats) {
    std::vector<Derivation> out;
    for (const auto& d : derivs) {
        const Cat& c = d.category();
        if (c->is_basic() && std::find(basic_cats.begin(), basic_cats.end(), c->name()) != basic_cats.end())
            out.push_back(d);
    }
    return out;
}

namespace {

std::string span_text(const ChartItem& it) {
    return std::to_string(it.start) + "-" + std::to_string(it.end);
}

void render(const Chart& c, int idx, int depth, bool lambda, bool is_root, std::ostringstream& out) {
    const ChartItem& it = c.item(idx);
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    out << pad;
    switch (it.origin) {
        case Origin::lexical:
        case Origin::singleton:
        case Origin::oov:
            out << it.label << " :: " << to_string(it.category) << " : " << to_string(it.lf);
            if (it.key) out << "  <" << *it.key << ">";
            out << "  [" << span_text(it) << "]\n";
            return;
        case Origin::arule:
            out << to_string(it.category);
            if (lambda || is_root) out << " : " << to_string(it.lf);
            out << "  (" << it.label << ")  [" << span_text(it) << "]\n";
            render(c, it.left, depth + 1, lambda, false, out);
            return;
        case Origin::combined:
            out << to_string(it.category);
            if (lambda || is_root) out << " : " << to_string(it.lf);
            out << "  (" << rule_name(it.rule) << ")  [" << span_text(it) << "]\n";
            render(c, it.left, depth + 1, lambda, false, out);
            render(c, it.right, depth + 1, lambda, false, out);
            return;
    }
}

}  // namespace

std::string render_derivation(const Derivation& d, bool lambda) {
    std::ostringstream out;
    render(d.chart(), d.root(), 0, lambda, true, out);
    return out.str();
}

}  // namespace thebench
