#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "thebench/category.hpp"

namespace thebench {

/// Bindings for feature variables (`?x`, stored with the `?`) and meta
/// variables (`@X`, stored without the `@`).
class Substitution {
public:
    /// Follows variable-to-variable chains; returns the final value or the
    /// last unbound variable.
    std::string resolve_value(const std::string& value) const;
    /// Bound category for a meta variable, or nullptr.
    Cat meta_binding(const std::string& var) const;

    void bind_feature(const std::string& var, const std::string& value) { features_[var] = value; }
    void bind_meta(const std::string& var, Cat value) { metas_[var] = std::move(value); }

    const std::map<std::string, std::string>& feature_bindings() const { return features_; }
    const std::map<std::string, Cat>& meta_bindings() const { return metas_; }
    bool empty() const { return features_.empty() && metas_.empty(); }

    Cat apply(const Cat& c) const;

private:
    std::map<std::string, std::string> features_;
    std::map<std::string, Cat> metas_;
};

struct BasicUnifier {
    Substitution subst;
    FeatureBundle merged;  // union of both bundles with bindings applied
};

/// Term unification of two basic categories. A feature present on only one
/// side imposes no constraint. Returns nullopt on a clash.
std::optional<BasicUnifier> unify_basic(const Cat& a, const Cat& b,
                                        const Substitution& start = {});

/// Whole-category unification: metas bind whole categories (occurs-checked),
/// complex categories unify componentwise with identical slashes, singletons
/// only with identical singletons.
std::optional<Substitution> unify_cat(const Cat& a, const Cat& b,
                                      const Substitution& start = {});

/// Feature variables (with `?`) and meta variables (with `@`) occurring in `c`.
void collect_vars(const Cat& c, std::set<std::string>& out);

/// Renames the variables of `c` that also occur in `avoid` to fresh numbered
/// names, so two categories can be unified without accidental sharing.
Cat rename_apart(const Cat& c, const std::set<std::string>& avoid);

}  // namespace thebench
