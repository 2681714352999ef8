#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "thebench/errors.hpp"
#include "thebench/session.hpp"

using namespace thebench;
namespace fs = std::filesystem;

namespace {

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

/// A session rooted in a temp directory, also the working directory.
struct Bench {
    tbtest::TempDir dir{"cli"};
    std::ostringstream out;
    Session s{dir.path() / "ws", out};

    std::string run(const std::string& line) {
        out.str("");
        std::string text;
        tbtest::in_dir(dir.path(), [&] {
            s.dispatch(line);
            text = out.str();
        });
        return text;
    }
    std::string load(const std::string& grammar) { return run("g " + tbtest::grammar_path(grammar).string()); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pass echoes without touching state") {
    Bench b;
    CHECK(b.run("pass the next command generates case functions") == "the next command generates case functions\n");
    CHECK_FALSE(b.s.has_grammar());
    CHECK(b.s.solutions().empty());
}

TEST_CASE("load, analyze, display") {
    Bench b;
    CHECK(has(b.load("toy_english.txt"), "loaded"));
    CHECK(fs::exists(b.dir.path() / "ws" / "toy_english.src"));
    std::string a = b.run("a Sincerity admires John");
    CHECK(has(a, "analyses"));
    CHECK(has(a, "admire john sincerity"));
    std::string shown = b.run(",");
    CHECK(has(shown, "solution 1 of Sincerity admires John"));
    CHECK(has(b.run(", 99"), "error: no solution 99"));
    CHECK(has(b.run("= np"), "0 analyses kept"));
}

TEST_CASE("rank and bare display") {
    Bench b;
    b.load("control.txt");
    std::string r = b.run("r Mary persuaded Harry to study");
    CHECK(has(r, "1. 0.500000"));
    CHECK(b.s.ranked().size() == 2);
    std::string bare = b.run("# bare");
    CHECK(bare.rfind("[Mary persuaded Harry to study ", 0) == 0);
    CHECK(std::count(bare.begin(), bare.end(), '\n') == 1);
    CHECK(bare.back() == '\n');
    CHECK(bare[bare.size() - 2] == ']');
}

TEST_CASE("skeleton report") {
    Grammar g = tbtest::sourced("runs | v :: s\\np[agr=3s] : \\x.run x\nrun | v :: s\\np[agr=1s] : \\x.run x\n");
    std::string r = report_skeleton(g);
    CHECK(has(r, "2 distinct categories under 1 skeleton"));
    CHECK(has(r, "  s\\np[agr=1s] (1): run | v"));
    CHECK(has(r, "  s\\np[agr=3s] (1): runs | v"));

    CHECK(has(report_skeleton(tbtest::sourced("John :: np : john\n")), "1 distinct category under 1 skeleton"));
    std::string two = report_skeleton(tbtest::sourced("John | n :: np : john\nMary | n :: np : mary\n"));
    CHECK(has(two, "  np (2): John | n, Mary | n"));
    CHECK_THROWS_AS(report_skeleton(Grammar{}), NoGrammarLoaded);
}

TEST_CASE("inventory and element display") {
    Bench b;
    b.load("toy_english.txt");
    std::string inv = b.run("!");
    CHECK(has(inv, "np\n  agr: 3s"));
    CHECK(has(b.run("$ v"), "3 elements with pos v"));
    std::string ir = b.run("- foo | n :: np : foo");
    CHECK(has(ir, "\"category\""));
    CHECK(b.s.grammar().size() == 9);
    b.run("i");
    CHECK(fs::exists(b.dir.path() / "ws" / "toy_english.ir.json"));
    b.run("z toy_english");
    CHECK(read_file(b.dir.path() / "toy_english.retext.txt") == regenerate_text(b.s.grammar()));
}

TEST_CASE("processor functions") {
    Bench b;
    CHECK(b.s.config().nfparse);
    b.run("l nfparse-off");
    CHECK_FALSE(b.s.config().nfparse);
    b.run("l beam-value 0.25");
    CHECK(b.s.config().beam_exponent == 0.25);
    CHECK(has(b.run("l no-such-function"), "error:"));
}

TEST_CASE("errors are reported and the session continues") {
    Bench b;
    CHECK(has(b.run("q"), "error: unknown command: q"));
    CHECK(has(b.run("a John"), "error:"));
    CHECK(has(b.run("g"), "usage: g <grammar file>"));
    CHECK(has(b.run("pass still here"), "still here"));
    CHECK(b.s.dispatch("x") == false);
    CHECK(b.s.finished());
}

TEST_CASE("batch runs log with the doubled prompt") {
    Bench b;
    write(b.dir.path() / "inner.tbc", "pass inner ran\n");
    write(b.dir.path() / "outer.tbc", "% comment\ng " + tbtest::grammar_path("toy_english.txt").string() +
                                          "\nk\nbogus\n@ inner.tbc\npass after\n");
    b.run("@ outer.tbc");
    std::string log = read_file(b.dir.path() / "outer.log");
    CHECK(has(log, "tb> tb> k\n"));
    CHECK(has(log, "distinct categories"));
    CHECK(has(log, "error: unknown command: bogus"));
    CHECK(has(log, "inner ran"));
    CHECK(has(log, "tb> tb> pass after\nafter\n"));
    CHECK_FALSE(has(log, "comment"));
    std::string inner = read_file(b.dir.path() / "inner.log");
    CHECK(has(inner, "tb> tb> pass inner ran\ninner ran\n"));
}

TEST_CASE("batch nesting is bounded") {
    Bench b;
    write(b.dir.path() / "self.tbc", "@ self.tbc\n");
    std::string out = b.run("@ self.tbc");
    CHECK(has(out, "nested deeper than"));
}

TEST_CASE("user logging") {
    Bench b;
    b.run("> mine");
    CHECK(b.s.logging());
    b.run("pass logged text");
    b.run("<");
    CHECK_FALSE(b.s.logging());
    b.run("pass not logged");
    std::string log = read_file(b.dir.path() / "mine.log");
    CHECK(has(log, "logged text"));
    CHECK_FALSE(has(log, "not logged"));
    CHECK(has(b.run("> mine"), "exists"));
    CHECK_FALSE(b.s.logging());
    b.run("> mine force");
    CHECK(b.s.logging());
}

TEST_CASE("clearing the workspace") {
    Bench b;
    fs::path ws = b.dir.path() / "ws";
    write(ws / "a.src", "x");
    write(b.dir.path() / "outside.txt", "keep");
    CHECK(has(b.run("/"), "workspace kept"));
    CHECK(fs::exists(ws / "a.src"));

    write(b.dir.path() / "clear.tbc", "/\n");
    b.run("@ clear.tbc");
    CHECK(has(read_file(b.dir.path() / "clear.log"), "not allowed in command files"));
    CHECK(fs::exists(ws / "a.src"));

    b.s.set_confirm([](const std::string&) { return true; });
    CHECK(has(b.run("/"), "removed 1 entries"));
    CHECK_FALSE(fs::exists(ws / "a.src"));
    CHECK(fs::exists(ws));
    CHECK(fs::exists(b.dir.path() / "outside.txt"));
}

TEST_CASE("help lists every command") {
    Bench b;
    std::string h = b.run("?");
    for (const char* c : {"  a ", "  c ", "  g ", "  i ", "  k ", "  l ", "  o ", "  r ", "  t ", "  z ", "  e ", "  x ",
                          "  @ ", "  , ", "  # ", "  = ", "  ! ", "  $ ", "  - ", "  + ", "  > ", "  < ", "  / ", "  ? ",
                          "  pass "})
        CHECK_MESSAGE(has(h, c), c);
    CHECK(has(h, "nfparse-off"));
    CHECK(has(b.run("e 1+1"), "not supported"));
    CHECK(has(b.run("+ code"), "not supported"));
}

TEST_CASE("shell command") {
    Bench b;
    CHECK(has(b.run("o echo hello"), "hello"));
    CHECK(has(b.run("o exit 3"), "exit status 3"));
}

}
