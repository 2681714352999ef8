#include "thebench/unify.hpp"

#include <cctype>

namespace thebench {

namespace {

bool is_var(const std::string& v) { return !v.empty() && v.front() == '?'; }

bool occurs_meta(const std::string& var, const Cat& c, const Substitution& s) {
    switch (c->kind()) {
        case Category::Kind::meta: {
            if (c->name() == var) return true;
            Cat bound = s.meta_binding(c->name());
            return bound && occurs_meta(var, bound, s);
        }
        case Category::Kind::complex:
            return occurs_meta(var, c->result(), s) || occurs_meta(var, c->arg(), s);
        default:
            return false;
    }
}

bool unify_values(const std::string& x, const std::string& y, Substitution& s) {
    std::string a = s.resolve_value(x);
    std::string b = s.resolve_value(y);
    if (a == b) return true;
    if (is_var(a)) {
        s.bind_feature(a, b);
        return true;
    }
    if (is_var(b)) {
        s.bind_feature(b, a);
        return true;
    }
    return false;
}

bool unify_features(const Cat& a, const Cat& b, Substitution& s) {
    if (a->name() != b->name()) return false;
    for (const auto& f : a->features().pairs()) {
        const std::string* other = b->features().find(f.name);
        if (other && !unify_values(f.value, *other, s)) return false;
    }
    return true;
}

bool unify_into(const Cat& x, const Cat& y, Substitution& s) {
    Cat a = x;
    Cat b = y;
    while (a->is_meta() && s.meta_binding(a->name())) a = s.meta_binding(a->name());
    while (b->is_meta() && s.meta_binding(b->name())) b = s.meta_binding(b->name());
    if (a->is_meta()) {
        if (b->is_meta() && b->name() == a->name()) return true;
        if (occurs_meta(a->name(), b, s)) return false;
        s.bind_meta(a->name(), b);
        return true;
    }
    if (b->is_meta()) {
        if (occurs_meta(b->name(), a, s)) return false;
        s.bind_meta(b->name(), a);
        return true;
    }
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case Category::Kind::basic:
            return unify_features(a, b, s);
        case Category::Kind::complex:
            return a->slash() == b->slash() && unify_into(a->result(), b->result(), s) &&
                   unify_into(a->arg(), b->arg(), s);
        case Category::Kind::singleton:
            return a->name() == b->name();
        case Category::Kind::meta:
            break;
    }
    return false;
}

Cat rename(const Cat& c, const std::map<std::string, std::string>& names) {
    switch (c->kind()) {
        case Category::Kind::basic: {
            bool touched = false;
            std::vector<Feature> pairs = c->features().pairs();
            for (auto& f : pairs) {
                auto it = names.find(f.value);
                if (it != names.end()) {
                    f.value = it->second;
                    touched = true;
                }
            }
            return touched ? Category::basic(c->name(), FeatureBundle(std::move(pairs))) : c;
        }
        case Category::Kind::complex: {
            Cat r = rename(c->result(), names);
            Cat a = rename(c->arg(), names);
            if (r == c->result() && a == c->arg()) return c;
            return Category::complex(r, c->slash(), a);
        }
        case Category::Kind::meta: {
            auto it = names.find("@" + c->name());
            return it == names.end() ? c : Category::meta(it->second.substr(1));
        }
        case Category::Kind::singleton:
            return c;
    }
    return c;
}

std::string strip_digits(const std::string& v) {
    std::size_t end = v.size();
    while (end > 2 && std::isdigit(static_cast<unsigned char>(v[end - 1]))) --end;
    return v.substr(0, end);
}

}  // namespace

std::string Substitution::resolve_value(const std::string& value) const {
    std::string cur = value;
    for (std::size_t guard = 0; guard <= features_.size(); ++guard) {
        auto it = features_.find(cur);
        if (it == features_.end()) return cur;
        cur = it->second;
    }
    return cur;
}

Cat Substitution::meta_binding(const std::string& var) const {
    auto it = metas_.find(var);
    return it == metas_.end() ? nullptr : it->second;
}

Cat Substitution::apply(const Cat& c) const {
    switch (c->kind()) {
        case Category::Kind::basic: {
            if (features_.empty()) return c;
            bool touched = false;
            std::vector<Feature> pairs = c->features().pairs();
            for (auto& f : pairs) {
                std::string v = resolve_value(f.value);
                if (v != f.value) {
                    f.value = std::move(v);
                    touched = true;
                }
            }
            return touched ? Category::basic(c->name(), FeatureBundle(std::move(pairs))) : c;
        }
        case Category::Kind::complex: {
            Cat r = apply(c->result());
            Cat a = apply(c->arg());
            if (r == c->result() && a == c->arg()) return c;
            return Category::complex(r, c->slash(), a);
        }
        case Category::Kind::meta: {
            Cat bound = meta_binding(c->name());
            return bound ? apply(bound) : c;
        }
        case Category::Kind::singleton:
            return c;
    }
    return c;
}

std::optional<BasicUnifier> unify_basic(const Cat& a, const Cat& b, const Substitution& start) {
    if (!a->is_basic() || !b->is_basic()) return std::nullopt;
    BasicUnifier out{start, {}};
    if (!unify_features(a, b, out.subst)) return std::nullopt;
    for (const auto& f : a->features().pairs()) out.merged.set(f.name, out.subst.resolve_value(f.value));
    for (const auto& f : b->features().pairs())
        if (!out.merged.find(f.name)) out.merged.set(f.name, out.subst.resolve_value(f.value));
    return out;
}

std::optional<Substitution> unify_cat(const Cat& a, const Cat& b, const Substitution& start) {
    Substitution s = start;
    if (!unify_into(a, b, s)) return std::nullopt;
    return s;
}

void collect_vars(const Cat& c, std::set<std::string>& out) {
    switch (c->kind()) {
        case Category::Kind::basic:
            for (const auto& f : c->features().pairs())
                if (f.is_var()) out.insert(f.value);
            break;
        case Category::Kind::complex:
            collect_vars(c->result(), out);
            collect_vars(c->arg(), out);
            break;
        case Category::Kind::meta:
            out.insert("@" + c->name());
            break;
        case Category::Kind::singleton:
            break;
    }
}

Cat rename_apart(const Cat& c, const std::set<std::string>& avoid) {
    std::set<std::string> mine;
    collect_vars(c, mine);
    std::map<std::string, std::string> names;
    std::set<std::string> taken = avoid;
    taken.insert(mine.begin(), mine.end());
    for (const auto& v : mine) {
        if (!avoid.count(v)) continue;
        std::string base = strip_digits(v);
        for (int n = 1;; ++n) {
            std::string fresh = base + std::to_string(n);
            if (!taken.count(fresh)) {
                names[v] = fresh;
                taken.insert(fresh);
                break;
            }
        }
    }
    return names.empty() ? c : rename(c, names);
}

}  // namespace thebench
