#include "thebench/reduce.hpp"

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "thebench/errors.hpp"

namespace thebench {

namespace {

void all_names(const Term& t, std::set<std::string>& out) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var:
            out.insert(t->name());
            break;
        case LambdaTerm::Kind::constant:
            if (!t->string_flag()) out.insert(t->name());
            break;
        case LambdaTerm::Kind::abs:
            out.insert(t->name());
            all_names(t->body(), out);
            break;
        case LambdaTerm::Kind::app:
            all_names(t->fun(), out);
            all_names(t->arg(), out);
            break;
    }
}

void all_constants(const Term& t, std::set<std::string>& out) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var: break;
        case LambdaTerm::Kind::constant:
            if (!t->string_flag()) out.insert(t->name());
            break;
        case LambdaTerm::Kind::abs: all_constants(t->body(), out); break;
        case LambdaTerm::Kind::app:
            all_constants(t->fun(), out);
            all_constants(t->arg(), out);
            break;
    }
}

bool occurs_free(const Term& t, const std::string& v) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var: return t->name() == v;
        case LambdaTerm::Kind::constant: return false;
        case LambdaTerm::Kind::abs: return t->name() != v && occurs_free(t->body(), v);
        case LambdaTerm::Kind::app: return occurs_free(t->fun(), v) || occurs_free(t->arg(), v);
    }
    return false;
}

std::string strip_suffix(const std::string& name) {
    std::size_t end = name.size();
    while (end > 1 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
    return name.substr(0, end);
}

class Substituter {
public:
    Substituter(const std::string& var, const Term& value, long* counter)
        : var_(var), value_(value), fv_(free_vars(value)), counter_(counter) {
        all_constants(value, fv_);
    }

    Term run(const Term& t) {
        switch (t->kind()) {
            case LambdaTerm::Kind::var:
                return t->name() == var_ ? value_ : t;
            case LambdaTerm::Kind::constant:
                return t;
            case LambdaTerm::Kind::app: {
                Term f = run(t->fun());
                Term a = run(t->arg());
                if (f == t->fun() && a == t->arg()) return t;
                return LambdaTerm::app(f, a);
            }
            case LambdaTerm::Kind::abs: {
                if (t->name() == var_ || !occurs_free(t->body(), var_)) return t;
                if (fv_.count(t->name()) == 0) {
                    Term b = run(t->body());
                    return b == t->body() ? t : LambdaTerm::abs(t->name(), b);
                }
                std::set<std::string> taken = fv_;
                all_names(t->body(), taken);
                taken.insert(var_);
                std::string base = strip_suffix(t->name());
                std::string fresh;
                do {
                    fresh = base + std::to_string(++*counter_);
                } while (taken.count(fresh));
                Term renamed = Substituter(t->name(), LambdaTerm::var(fresh), counter_).run(t->body());
                return LambdaTerm::abs(fresh, run(renamed));
            }
        }
        return t;
    }

private:
    const std::string& var_;
    const Term& value_;
    std::set<std::string> fv_;
    long* counter_;
};

class Reducer {
public:
    explicit Reducer(const ReduceOptions& opts) : opts_(opts) {}

    Term normalize(const Term& t) {
        switch (t->kind()) {
            case LambdaTerm::Kind::var:
            case LambdaTerm::Kind::constant:
                return t;
            case LambdaTerm::Kind::abs: {
                Term b = normalize(t->body());
                return b == t->body() ? t : LambdaTerm::abs(t->name(), b);
            }
            case LambdaTerm::Kind::app: {
                Term f = whnf(t->fun());
                if (f->is_abs()) return normalize(contract(f, t->arg()));
                Term nf = normalize(f);
                Term na = normalize(t->arg());
                if (nf == t->fun() && na == t->arg()) return t;
                return LambdaTerm::app(nf, na);
            }
        }
        return t;
    }

private:
    Term whnf(const Term& t) {
        if (!t->is_app()) return t;
        Term f = whnf(t->fun());
        if (f->is_abs()) return whnf(contract(f, t->arg()));
        return f == t->fun() ? t : LambdaTerm::app(f, t->arg());
    }

    Term contract(const Term& abs, const Term& arg) {
        if (++steps_ > opts_.step_budget)
            throw ReductionDepthExceeded("beta reduction exceeded " +
                                         std::to_string(opts_.step_budget) + " steps");
        return Substituter(abs->name(), arg, &counter_).run(abs->body());
    }

    const ReduceOptions& opts_;
    long steps_ = 0;
    long counter_ = 0;
};

bool alpha(const Term& a, const Term& b, std::vector<std::pair<std::string, std::string>>& env) {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case LambdaTerm::Kind::var: {
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                bool la = it->first == a->name();
                bool lb = it->second == b->name();
                if (la || lb) return la && lb;
            }
            return a->name() == b->name();
        }
        case LambdaTerm::Kind::constant:
            return a->name() == b->name() && a->string_flag() == b->string_flag();
        case LambdaTerm::Kind::abs: {
            env.emplace_back(a->name(), b->name());
            bool ok = alpha(a->body(), b->body(), env);
            env.pop_back();
            return ok;
        }
        case LambdaTerm::Kind::app:
            return alpha(a->fun(), b->fun(), env) && alpha(a->arg(), b->arg(), env);
    }
    return false;
}

}  // namespace

Term beta_reduce(const Term& t, const ReduceOptions& opts) {
    Reducer r(opts);
    return r.normalize(t);
}

bool alpha_equiv(const Term& a, const Term& b) {
    std::vector<std::pair<std::string, std::string>> env;
    return alpha(a, b, env);
}

Term substitute(const Term& body, const std::string& var, const Term& value) {
    long counter = 0;
    return Substituter(var, value, &counter).run(body);
}

}  // namespace thebench
