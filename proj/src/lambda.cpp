#include "thebench/lambda.hpp"

#include <map>
#include <vector>

namespace thebench {

Term LambdaTerm::var(std::string name) {
    auto t = std::shared_ptr<LambdaTerm>(new LambdaTerm());
    t->kind_ = Kind::var;
    t->name_ = std::move(name);
    return t;
}

Term LambdaTerm::constant(std::string name, bool string_flag) {
    auto t = std::shared_ptr<LambdaTerm>(new LambdaTerm());
    t->kind_ = Kind::constant;
    t->name_ = std::move(name);
    t->string_flag_ = string_flag;
    return t;
}

Term LambdaTerm::abs(std::string binder, Term body) {
    auto t = std::shared_ptr<LambdaTerm>(new LambdaTerm());
    t->kind_ = Kind::abs;
    t->name_ = std::move(binder);
    t->left_ = std::move(body);
    return t;
}

Term LambdaTerm::app(Term fun, Term arg) {
    auto t = std::shared_ptr<LambdaTerm>(new LambdaTerm());
    t->kind_ = Kind::app;
    t->left_ = std::move(fun);
    t->right_ = std::move(arg);
    return t;
}

namespace {

void print(const Term& t, std::string& out) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var:
            out += t->name();
            break;
        case LambdaTerm::Kind::constant:
            if (t->string_flag()) out += '!';
            out += t->name();
            break;
        case LambdaTerm::Kind::abs: {
            const Term* cur = &t;
            while ((*cur)->is_abs()) {
                out += '\\';
                out += (*cur)->name();
                cur = &(*cur)->body();
            }
            out += '.';
            print(*cur, out);
            break;
        }
        case LambdaTerm::Kind::app: {
            const Term& f = t->fun();
            if (f->is_abs()) {
                out += '(';
                print(f, out);
                out += ')';
            } else {
                print(f, out);
            }
            out += ' ';
            const Term& a = t->arg();
            if (a->is_app() || a->is_abs()) {
                out += '(';
                print(a, out);
                out += ')';
            } else {
                print(a, out);
            }
            break;
        }
    }
}

void collect_free(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var:
            for (const auto& b : bound)
                if (b == t->name()) return;
            out.insert(t->name());
            break;
        case LambdaTerm::Kind::constant:
            break;
        case LambdaTerm::Kind::abs:
            bound.push_back(t->name());
            collect_free(t->body(), bound, out);
            bound.pop_back();
            break;
        case LambdaTerm::Kind::app:
            collect_free(t->fun(), bound, out);
            collect_free(t->arg(), bound, out);
            break;
    }
}

Term canonicalize(const Term& t, std::vector<std::pair<std::string, std::string>>& scope, int& next) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var:
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == t->name()) return LambdaTerm::var(it->second);
            return t;
        case LambdaTerm::Kind::constant:
            return t;
        case LambdaTerm::Kind::abs: {
            std::string fresh = "$" + std::to_string(++next);
            scope.emplace_back(t->name(), fresh);
            Term body = canonicalize(t->body(), scope, next);
            scope.pop_back();
            return LambdaTerm::abs(fresh, body);
        }
        case LambdaTerm::Kind::app:
            return LambdaTerm::app(canonicalize(t->fun(), scope, next),
                                   canonicalize(t->arg(), scope, next));
    }
    return t;
}

}  // namespace

std::string to_string(const Term& t) {
    std::string out;
    print(t, out);
    return out;
}

bool term_equal(const Term& a, const Term& b) {
    if (a == b) return true;
    if (!a || !b || a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case LambdaTerm::Kind::var:
            return a->name() == b->name();
        case LambdaTerm::Kind::constant:
            return a->name() == b->name() && a->string_flag() == b->string_flag();
        case LambdaTerm::Kind::abs:
            return a->name() == b->name() && term_equal(a->body(), b->body());
        case LambdaTerm::Kind::app:
            return term_equal(a->fun(), b->fun()) && term_equal(a->arg(), b->arg());
    }
    return false;
}

int leading_lambdas(const Term& t) {
    int n = 0;
    for (const LambdaTerm* p = t.get(); p->is_abs(); p = p->body().get()) ++n;
    return n;
}

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    collect_free(t, bound, out);
    return out;
}

std::string canonical_string(const Term& t) {
    std::vector<std::pair<std::string, std::string>> scope;
    int next = 0;
    return to_string(canonicalize(t, scope, next));
}

}  // namespace thebench
