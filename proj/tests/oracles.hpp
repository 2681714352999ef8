#pragma once

// Independent re-statements of the combination rules, used as oracles.
// Categories here are feature-free and meta-free, so unification reduces to
// structural equality.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "thebench/category.hpp"
#include "thebench/engine.hpp"
#include "thebench/lambda.hpp"
#include "thebench/reduce.hpp"

namespace tbtest {

using thebench::Cat;
using thebench::Category;
using thebench::Dir;
using thebench::Modality;
using thebench::RuleId;
using thebench::Term;

/// The modality table: which rules a single slash lets through.
inline bool table_permits(Modality m, RuleId r) {
    switch (m) {
        case Modality::dot:
            return true;
        case Modality::diamond:
            return r == RuleId::A || r == RuleId::T || r == RuleId::FB || r == RuleId::BB;
        case Modality::cross:
            return r == RuleId::A || r == RuleId::T || r == RuleId::FBx || r == RuleId::BBx;
        case Modality::star:
            return r == RuleId::A || r == RuleId::T;
    }
    return false;
}

struct OracleResult {
    RuleId rule;
    Cat category;
};

inline bool right_fn(const Cat& c) { return c->is_complex() && c->slash().dir == Dir::right; }
inline bool left_fn(const Cat& c) { return c->is_complex() && c->slash().dir == Dir::left; }
inline bool single(const Cat& c) { return c->is_complex() && !c->slash().dbl; }

/// Every rule the six-rule table licenses for `l r`.
inline std::vector<OracleResult> oracle_rules(const Cat& l, const Cat& r) {
    using thebench::cat_equal;
    std::vector<OracleResult> out;
    if (right_fn(l) && cat_equal(l->arg(), r)) out.push_back({RuleId::A, l->result()});
    if (left_fn(r) && cat_equal(r->arg(), l)) out.push_back({RuleId::T, r->result()});
    auto both = [&](RuleId rule) {
        return single(l) && single(r) && table_permits(l->slash().mod, rule) && table_permits(r->slash().mod, rule);
    };
    if (right_fn(l) && right_fn(r) && both(RuleId::FB) && cat_equal(l->arg(), r->result()))
        out.push_back({RuleId::FB, Category::complex(l->result(), r->slash(), r->arg())});
    if (left_fn(l) && left_fn(r) && both(RuleId::BB) && cat_equal(r->arg(), l->result()))
        out.push_back({RuleId::BB, Category::complex(r->result(), l->slash(), l->arg())});
    if (right_fn(l) && left_fn(r) && both(RuleId::FBx) && cat_equal(l->arg(), r->result()))
        out.push_back({RuleId::FBx, Category::complex(l->result(), r->slash(), r->arg())});
    if (right_fn(l) && left_fn(r) && both(RuleId::BBx) && cat_equal(r->arg(), l->result()))
        out.push_back({RuleId::BBx, Category::complex(r->result(), l->slash(), l->arg())});
    return out;
}

inline Term compose_lf(const Term& f, const Term& g) {
    using thebench::LambdaTerm;
    return thebench::beta_reduce(
        LambdaTerm::abs("z", LambdaTerm::app(f, LambdaTerm::app(g, LambdaTerm::var("z")))));
}

/// Result LF of `rule` over the two children, by the rule's definition.
inline Term oracle_lf(RuleId rule, const Term& left, const Term& right) {
    using thebench::LambdaTerm;
    switch (rule) {
        case RuleId::A:
            return thebench::beta_reduce(LambdaTerm::app(left, right));
        case RuleId::T:
            return thebench::beta_reduce(LambdaTerm::app(right, left));
        case RuleId::FB:
        case RuleId::FBx:
            return compose_lf(left, right);
        case RuleId::BB:
        case RuleId::BBx:
            return compose_lf(right, left);
        case RuleId::none:
            break;
    }
    return nullptr;
}

struct BruteItem {
    Cat category;
    Term lf;
};

/// All derivations over the whole input, one per tree, with no normal-form
/// pruning. `leaves[i]` are the readings of token i.
inline std::vector<BruteItem> brute_force(const std::vector<std::vector<BruteItem>>& leaves) {
    const int n = static_cast<int>(leaves.size());
    std::map<std::pair<int, int>, std::vector<BruteItem>> span;
    for (int i = 0; i < n; ++i) span[{i, i + 1}] = leaves[static_cast<std::size_t>(i)];
    for (int len = 2; len <= n; ++len)
        for (int i = 0; i + len <= n; ++i) {
            auto& cell = span[{i, i + len}];
            for (int k = i + 1; k < i + len; ++k)
                for (const auto& l : span[{i, k}])
                    for (const auto& r : span[{k, i + len}])
                        for (const auto& res : oracle_rules(l.category, r.category))
                            cell.push_back({res.category, oracle_lf(res.rule, l.lf, r.lf)});
        }
    return n ? span[{0, n}] : std::vector<BruteItem>{};
}

inline std::multiset<std::string> lf_multiset(const std::vector<BruteItem>& items) {
    std::multiset<std::string> out;
    for (const auto& it : items) out.insert(thebench::canonical_string(it.lf));
    return out;
}

inline std::set<std::string> lf_set(const std::vector<thebench::Derivation>& ds) {
    std::set<std::string> out;
    for (const auto& d : ds) out.insert(thebench::canonical_string(d.lf()));
    return out;
}

/// Replays a derivation bottom-up by the rule definitions; the LF it
/// reaches for the root. Arule steps apply the named rule's rhs LF.
inline Term replay(const thebench::Chart& c, int idx, const thebench::Grammar& g) {
    using thebench::LambdaTerm;
    using thebench::Origin;
    const auto& it = c.item(idx);
    if (it.origin == Origin::combined) return oracle_lf(it.rule, replay(c, it.left, g), replay(c, it.right, g));
    if (it.origin == Origin::arule) {
        for (const auto* r : g.arules())
            if ("#" + r->name == it.label)
                return thebench::beta_reduce(LambdaTerm::app(r->rhs_lf, replay(c, it.left, g)));
        return nullptr;
    }
    return it.lf;
}

}  // namespace tbtest
