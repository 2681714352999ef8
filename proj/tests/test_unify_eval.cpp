#include <random>

#include "doctest.h"
#include "support.hpp"
#include "thebench/errors.hpp"
#include "thebench/reduce.hpp"
#include "thebench/unify.hpp"

using namespace thebench;

namespace {

Cat pc(std::string_view s) { return parse_category(s); }

/// One leftmost-innermost step; nullptr when normal. An independent
/// strategy to compare with the normal-order reducer.
Term inner_step(const Term& t) {
    switch (t->kind()) {
        case LambdaTerm::Kind::var:
        case LambdaTerm::Kind::constant:
            return nullptr;
        case LambdaTerm::Kind::abs: {
            Term b = inner_step(t->body());
            return b ? LambdaTerm::abs(t->name(), b) : nullptr;
        }
        case LambdaTerm::Kind::app: {
            if (Term f = inner_step(t->fun())) return LambdaTerm::app(f, t->arg());
            if (Term a = inner_step(t->arg())) return LambdaTerm::app(t->fun(), a);
            if (t->fun()->is_abs()) return substitute(t->fun()->body(), t->fun()->name(), t->arg());
            return nullptr;
        }
    }
    return nullptr;
}

Term innermost_normal(Term t) {
    for (int i = 0; i < 10000; ++i) {
        Term n = inner_step(t);
        if (!n) return t;
        t = n;
    }
    FAIL("no normal form by innermost reduction");
    return t;
}

/// Small terms with redexes on which both strategies terminate.
Term random_redex_term(std::mt19937& rng, int depth, std::vector<std::string>& scope) {
    int k = static_cast<int>(rng() % 5);
    if (depth <= 0 || k == 0) {
        if (!scope.empty() && rng() % 2) return LambdaTerm::var(scope[rng() % scope.size()]);
        static const char* cs[] = {"a", "b", "f", "g"};
        return LambdaTerm::constant(cs[rng() % 4]);
    }
    if (k == 1) {
        std::string v(1, static_cast<char>('x' + rng() % 3));
        scope.push_back(v);
        Term body = random_redex_term(rng, depth - 1, scope);
        scope.pop_back();
        return LambdaTerm::abs(v, body);
    }
    if (k == 2) {
        std::string v(1, static_cast<char>('x' + rng() % 3));
        scope.push_back(v);
        Term body = random_redex_term(rng, depth - 1, scope);
        scope.pop_back();
        return LambdaTerm::app(LambdaTerm::abs(v, body), random_redex_term(rng, depth - 1, scope));
    }
    // constants in function position keep every term strongly normalizing
    static const char* fs[] = {"f", "g"};
    return LambdaTerm::app(LambdaTerm::constant(fs[rng() % 2]), random_redex_term(rng, depth - 1, scope));
}

Cat random_basic(std::mt19937& rng) {
    static const char* vals[] = {"3s", "1s", "?x", "?y", "?z"};
    std::vector<Feature> fs;
    if (rng() % 3) fs.push_back({"agr", vals[rng() % 5]});
    if (rng() % 3) fs.push_back({"case", vals[rng() % 5]});
    if (rng() % 4 == 0) fs.push_back({"t", vals[rng() % 5]});
    return Category::basic(rng() % 5 ? "np" : "s", FeatureBundle(fs));
}

}  // namespace

TEST_SUITE("unify-eval") {

TEST_CASE("basic unification examples") {
    auto u = unify_basic(pc("s[f1=?x1]"), pc("s[f1=v1,f2=?x2]"));
    REQUIRE(u);
    CHECK(u->subst.resolve_value("?x1") == "v1");
    CHECK(u->subst.resolve_value("?x2") == "?x2");
    CHECK_FALSE(unify_basic(pc("np[agr=3s]"), pc("np[agr=1s]")));
    auto m = unify_basic(pc("np"), pc("np[case=nom]"));
    REQUIRE(m);
    CHECK(m->subst.empty());
    CHECK(m->merged == FeatureBundle(std::vector<Feature>{{"case", "nom"}}));
    CHECK_FALSE(unify_basic(pc("np"), pc("s")));
}

TEST_CASE("category unification examples") {
    auto u = unify_cat(pc("@X"), pc("s\\np"));
    REQUIRE(u);
    REQUIRE(u->meta_binding("X"));
    CHECK(to_string(u->meta_binding("X")) == "s\\np");

    Substitution bound;
    bound.bind_meta("X", pc("s"));
    CHECK_FALSE(unify_cat(pc("@X\\@X"), pc("s\\np"), bound));
    CHECK_FALSE(unify_cat(pc("s/np"), pc("s\\np")));
    CHECK_FALSE(unify_cat(pc("s/^np"), pc("s/np")));
    CHECK(unify_cat(pc("(s\\np)/\"the bucket\""), pc("(s\\np)/\"the bucket\"")));
    CHECK_FALSE(unify_cat(pc("\"the bucket\""), pc("\"a bucket\"")));
    CHECK(unify_cat(pc("@X"), pc("\"up\"")));
    CHECK_FALSE(unify_cat(pc("@X"), pc("s/@X")));
}

TEST_CASE("property: unification symmetric, and unifies") {
    std::mt19937 rng(3);
    int successes = 0;
    for (int i = 0; i < 2000; ++i) {
        Cat a = random_basic(rng);
        Cat b = random_basic(rng);
        std::set<std::string> av;
        collect_vars(a, av);
        b = rename_apart(b, av);
        auto ab = unify_cat(a, b);
        auto ba = unify_cat(b, a);
        INFO(to_string(a), " ~ ", to_string(b));
        REQUIRE(ab.has_value() == ba.has_value());
        if (!ab) continue;
        ++successes;
        // applying the substitution leaves the shared features equal
        Cat a1 = ab->apply(a), b1 = ab->apply(b);
        for (const auto& f : a1->features().pairs()) {
            const std::string* other = b1->features().find(f.name);
            if (other) CHECK(*other == f.value);
        }
        CHECK(cat_equal(ab->apply(a1), a1));
        Cat a2 = ba->apply(a), b2 = ba->apply(b);
        for (const auto& f : a2->features().pairs()) {
            const std::string* other = b2->features().find(f.name);
            if (other) CHECK(*other == f.value);
        }
    }
    CHECK(successes > 100);
}

TEST_CASE("beta reduction examples") {
    CHECK(to_string(beta_reduce(parse_term("(\\x\\y.like x y) john mary"))) == "like john mary");
    CHECK(to_string(beta_reduce(parse_term("(\\p.p) (\\y.bring salmon y)"))) == "\\y.bring salmon y");
    // root step as composition of the lifted functor and lifted argument
    Term root = parse_term("\\z.(\\phi.(\\y.admire john y) phi) ((\\psi.psi sincerity) z)");
    Term closed = LambdaTerm::app(root, parse_term("\\k.k"));
    CHECK(to_string(beta_reduce(closed)) == "admire john sincerity");
}

TEST_CASE("capture is avoided") {
    Term t = beta_reduce(parse_term("(\\x\\y.f x y) y"));
    // the free y must stay free
    REQUIRE(t->is_abs());
    CHECK(t->name() != "y");
    CHECK(alpha_equiv(t, parse_term("\\w.f y w")));
}

TEST_CASE("step budget") {
    ReduceOptions tight;
    tight.step_budget = 50;
    Term omega = parse_term("(\\x.x x) (\\x.x x)");
    CHECK_THROWS_AS(beta_reduce(omega, tight), ReductionDepthExceeded);
}

TEST_CASE("alpha equivalence examples") {
    CHECK(alpha_equiv(parse_term("\\x.f x"), parse_term("\\y.f y")));
    CHECK_FALSE(alpha_equiv(parse_term("persuade (study harry) harry mary"),
                            parse_term("promise (study mary) harry mary")));
    CHECK_FALSE(alpha_equiv(parse_term("\\x.x"), parse_term("\\x.f x")));
    CHECK_FALSE(alpha_equiv(parse_term("\\x\\y.x"), parse_term("\\x\\y.y")));
}

TEST_CASE("property: beta idempotent and confluent") {
    std::mt19937 rng(5);
    for (int i = 0; i < 400; ++i) {
        std::vector<std::string> scope;
        Term t = random_redex_term(rng, 5, scope);
        Term n = beta_reduce(t);
        INFO(to_string(t));
        CHECK(term_equal(beta_reduce(n), n));
        CHECK(alpha_equiv(n, innermost_normal(t)));
    }
}

}
