#include "doctest.h"
#include "support.hpp"
#include "thebench/errors.hpp"
#include "thebench/grammar_io.hpp"
#include "thebench/reduce.hpp"

using namespace thebench;

namespace {

const char* kThree =
    "likes  | v :: (s\\^np[agr=3s])/^np : \\x\\y.like x y\n"
    "#np-raise np[agr=?x] : lf  --> s/(s\\np[agr=?x]) : \\lf\\p. p lf\n"
    "#tense runs, s[t=pres,agr=3s]\\np:\\x.pres run x <--> ran, s[t=past]\\np:\\x.past run x\n";

}  // namespace

TEST_SUITE("grammar-io") {

TEST_CASE("the three kinds of element") {
    auto pg = parse_grammar_text(kThree);
    REQUIRE(pg.ok());
    REQUIRE(pg.grammar.size() == 3);
    const auto& e = std::get<Entry>(pg.grammar.elements()[0]);
    CHECK(e.phon == std::vector<std::string>{"likes"});
    CHECK(e.pos == "v");
    CHECK(arity(e.category) == 2);
    CHECK(alpha_equiv(e.lf, parse_term("\\a\\b.(like a) b")));
    const auto& r = std::get<AsymRule>(pg.grammar.elements()[1]);
    CHECK(r.name == "np-raise");
    CHECK(to_string(r.rhs_cat) == "s/(s\\np[agr=?x])");
    const auto& s = std::get<SymRule>(pg.grammar.elements()[2]);
    CHECK(s.name == "tense");
    CHECK(s.left.phon == std::vector<std::string>{"runs"});
    CHECK(s.right.phon == std::vector<std::string>{"ran"});
}

TEST_CASE("correspondence: complex s-command needs a lambda") {
    auto pg = parse_grammar_text("slept :: s\\np : sleep someone\n");
    REQUIRE(pg.diagnostics.size() == 1);
    CHECK(pg.diagnostics[0].line == 1);
    CHECK(pg.grammar.empty());
    CHECK(parse_grammar_text("slept :: s : sleep topic\n").ok());
    CHECK(parse_grammar_text("man :: n : \\x.man x\n").ok());
}

TEST_CASE("comments, blanks and diagnostics with line numbers") {
    auto pg = parse_grammar_text("% header\n\nJohn :: np : john % trailing\nbad :: (s\\np : \\x.x\n50% | n :: np : half\n");
    REQUIRE(pg.diagnostics.size() == 1);
    CHECK(pg.diagnostics[0].line == 4);
    REQUIRE(pg.grammar.size() == 2);
    CHECK(std::get<Entry>(pg.grammar.elements()[1]).phon_text() == "50%");
}

TEST_CASE("singletons cannot be results") {
    CHECK_FALSE(parse_grammar_text("x :: \"up\"/np : \\x.x\n").ok());
}

TEST_CASE("sourcing splits symmetric rules and assigns keys") {
    Grammar g = tbtest::sourced(kThree);
    REQUIRE(g.size() == 4);
    CHECK(g.is_sourced());
    std::vector<Key> keys;
    for (const auto& e : g.elements()) keys.push_back(*element_key(e));
    CHECK(keys == std::vector<Key>{1, 2, 3, 4});
    CHECK(std::get<Entry>(g.elements()[2]).pos == "tense");
    CHECK(std::get<Entry>(g.elements()[3]).phon_text() == "ran");
}

TEST_CASE("user keys are kept and fresh keys start above them") {
    Grammar g = tbtest::sourced("a :: np : a <314, 1.0>\nb :: np : b\nc :: np : c <7, 0.25>\n");
    CHECK(*element_key(g.elements()[0]) == 314);
    CHECK(*element_key(g.elements()[1]) == 315);
    CHECK(*element_key(g.elements()[2]) == 7);
    CHECK(element_weight(g.elements()[2]) == 0.25);
    CHECK_THROWS_AS(tbtest::sourced("a :: np : a <3, 1.0>\nb :: np : b <3, 2.0>\n"), DuplicateUserKey);
    CHECK(tbtest::sourced("").empty());
}

TEST_CASE("re-text prints key and weight suffixes") {
    Grammar g = tbtest::sourced("c :: np : c <7, 0.25>\n");
    CHECK(regenerate_text(g) == "c :: np : c <7, 0.25>\n");
    Grammar three = tbtest::sourced(kThree);
    std::string text = regenerate_text(three);
    CHECK(text.find("likes | v :: (s\\^np[agr=3s])/^np : \\x\\y.like x y <1, 1.0>") != std::string::npos);
    CHECK(text.find("runs | tense :: ") != std::string::npos);
}

TEST_CASE("re-text is a fixed point") {
    for (const char* name : {"three_elements.txt", "toy_english.txt", "nuuchahnulth.txt", "idioms.txt", "control.txt"}) {
        Grammar g = tbtest::sourced_file(name);
        std::string once = regenerate_text(g);
        Grammar again = tbtest::sourced(once);
        INFO(name);
        CHECK(grammar_equal(g, again));
        CHECK(regenerate_text(again) == once);
    }
}

TEST_CASE(".src round trip and version check") {
    tbtest::TempDir dir("src");
    Grammar g = tbtest::sourced(kThree);
    auto path = dir.path() / "three.src";
    write_src(g, path);
    std::string text = read_file(path);
    CHECK(text.rfind(std::string(kSrcHeader), 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(grammar_equal(read_src(path), g));
    CHECK_THROWS_AS(parse_src("thebench-src 99\n"), VersionMismatch);
    CHECK_THROWS_AS(read_src(dir.path() / "missing.src"), IoError);
}

TEST_CASE("supervision pairs") {
    auto pairs = parse_supervision(
        "Mary expected Harry to study : expect (study harry) mary\n"
        "% comment\n\n"
        "Mary expected Harry to study : expect (study harry) mary\n"
        "x |the   bucket| : f y\n");
    REQUIRE(pairs.size() == 3);
    CHECK(to_string(pairs[0].gold) == "expect (study harry) mary");
    CHECK(pairs[0].gold->is_app());
    CHECK(pairs[0].surface.size() == 5);
    REQUIRE(pairs[2].surface.size() == 2);
    CHECK(pairs[2].surface[1].mwe);
    CHECK(pairs[2].surface[1].text == "the bucket");
    CHECK_THROWS_AS(parse_supervision("no colon here\n"), ParseErrors);

    tbtest::TempDir dir("sup");
    write_sup(pairs, dir.path() / "p.sup");
    auto back = read_sup(dir.path() / "p.sup");
    REQUIRE(back.size() == pairs.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].surface == pairs[i].surface);
        CHECK(alpha_equiv(back[i].gold, pairs[i].gold));
    }
}

TEST_CASE("experiment files") {
    auto specs = parse_experiment_file(
        "7000 4000 xp 1.2 1.0 nfp nfparse-off\n4000 2000 10 0.5 1.0 bon beam-on\n4000 2000 10 0.5 1.0 boff\n");
    REQUIRE(specs.size() == 3);
    CHECK(specs[0].mem_mb == 7000);
    CHECK(specs[0].heap_mb == 4000);
    CHECK(specs[0].extrapolate);
    CHECK(specs[0].learning_rate == 1.2);
    CHECK(specs[0].learning_rate_rate == 1.0);
    CHECK(specs[0].log_prefix == "nfp");
    CHECK(*specs[0].pre_function == "nfparse-off");
    CHECK(specs[2].iterations == 10);
    CHECK_FALSE(specs[2].pre_function);
    CHECK_THROWS_AS(parse_experiment_line("4000 2000 10 0.5 1.0 b bogus-fn", 1), UnknownPreFunction);
    CHECK_NOTHROW(parse_experiment_line("4000 2000 10 0.5 1.0 b bogus-fn", 1, false));
    CHECK_THROWS_AS(parse_experiment_line("4000 5000 10 0.5 1.0 b", 1), LineError);
    CHECK_THROWS_AS(parse_experiment_line("4000 2000 ten 0.5 1.0 b", 1), LineError);
    CHECK_THROWS_AS(parse_experiment_line("4000 2000 10 0.5 1.0", 1), LineError);
    CHECK_THROWS_AS(parse_experiment_line("4000 2000 10 0 1.0 b", 1), LineError);
}

}
