#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "thebench/errors.hpp"
#include "thebench/model.hpp"

using namespace thebench;

namespace {

std::vector<Derivation> run(const Lexicon& lex, std::string_view input) { return analyze(input, lex, Config{}); }

double total(const std::vector<RankedLf>& r) {
    double s = 0;
    for (const auto& x : r) s += x.probability;
    return s;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("features count key uses") {
    Lexicon lex(tbtest::sourced_file("toy_english.txt"));
    auto d = run(lex, "John likes Mary");
    REQUIRE_FALSE(d.empty());
    for (const auto& x : d) {
        auto f = features(x);
        double uses = 0;
        for (const auto& [k, c] : f) uses += c;
        CHECK(uses == static_cast<double>(x.keys_used().size()));
        CHECK(uses >= 3);
    }
    CHECK_THROWS_AS(logscore({{99, 1.0}}, Weights{}), UnknownKey);
    CHECK(logscore({{1, 2.0}, {2, 1.0}}, {{1, 0.5}, {2, -3.0}}) == doctest::Approx(-2.0));
}

TEST_CASE("softmax examples") {
    Lexicon even(tbtest::sourced("x :: s : a <1, 0.0>\nx :: s : b <2, 0.0>\n"));
    auto r = rank(run(even, "x"), Model::from_grammar(even.grammar()).theta);
    REQUIRE(r.size() == 2);
    CHECK(r[0].probability == doctest::Approx(0.5));
    CHECK(r[1].probability == doctest::Approx(0.5));
    CHECK(to_string(r[0].lf) == "a");  // tie broken by canonical print

    Lexicon skew(tbtest::sourced("x :: s : a <1, 1.0>\nx :: s : b <2, 0.0>\n"));
    auto s = rank(run(skew, "x"), Model::from_grammar(skew.grammar()).theta);
    REQUIRE(s.size() == 2);
    CHECK(to_string(s[0].lf) == "a");
    CHECK(s[0].probability == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-12));
    CHECK(bare_line("x", s[0]) == "[x a]");
    CHECK_THROWS_AS(rank(std::vector<Derivation>{}, Weights{}), NoDerivations);
}

TEST_CASE("probability mass is summed per LF") {
    // two derivations of one LF versus one of another, equal weights
    Lexicon lex(tbtest::sourced("x :: s : a <1, 0.0>\nx :: s : a <2, 0.0>\nx :: s : b <3, 0.0>\n"));
    auto r = rank(run(lex, "x"), Model::from_grammar(lex.grammar()).theta);
    REQUIRE(r.size() == 2);
    CHECK(r[0].probability == doctest::Approx(2.0 / 3.0));
    CHECK(total(r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: ranked probabilities sum to one") {
    Grammar g = tbtest::sourced_file("control.txt");
    Lexicon lex(g);
    std::mt19937 rng(31);
    std::normal_distribution<double> nd(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        Weights theta = Model::from_grammar(g).theta;
        for (auto& [k, w] : theta) w = nd(rng);
        for (const char* in : {"Mary persuaded Harry to study", "Mary promised Harry to study"}) {
            auto r = rank(in, lex, theta, Config{});
            CHECK(std::abs(total(r) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("gradient is zero when every derivation is correct") {
    Lexicon lex(tbtest::sourced("x :: s : a <1, 0.3>\nx :: s : a <2, -0.2>\n"));
    auto g = gradient(run(lex, "x"), parse_term("a"), Model::from_grammar(lex.grammar()).theta);
    CHECK_FALSE(g.skipped);
    for (const auto& [k, v] : g.gradient) CHECK(v == doctest::Approx(0.0));
    CHECK(g.log_likelihood == doctest::Approx(0.0));
}

TEST_CASE("unreachable gold is skipped") {
    Lexicon lex(tbtest::sourced("x :: s : a <1, 0.0>\n"));
    auto g = gradient(run(lex, "x"), parse_term("b"), Model::from_grammar(lex.grammar()).theta);
    CHECK(g.skipped);
    CHECK(std::isinf(g.log_likelihood));
}

TEST_CASE("gradient matches finite differences") {
    Grammar gram = tbtest::sourced_file("control.txt");
    Lexicon lex(gram);
    auto pairs = parse_supervision(read_file(tbtest::grammar_path("control.sup.txt")));
    std::mt19937 rng(37);
    std::normal_distribution<double> nd(0.0, 1.0);
    Weights theta = Model::from_grammar(gram).theta;
    for (auto& [k, w] : theta) w = nd(rng);
    const double h = 1e-5;
    for (const auto& p : pairs) {
        auto g = gradient(p, lex, theta, Config{});
        REQUIRE_FALSE(g.skipped);
        for (const auto& [k, w] : theta) {
            Weights up = theta, down = theta;
            up[k] += h;
            down[k] -= h;
            double fd = (gradient(p, lex, up, Config{}).log_likelihood -
                         gradient(p, lex, down, Config{}).log_likelihood) / (2 * h);
            auto it = g.gradient.find(k);
            double an = it == g.gradient.end() ? 0.0 : it->second;
            INFO("key ", k);
            CHECK(std::abs(an - fd) < 1e-5);
        }
    }
}

TEST_CASE("beam threshold") {
    auto keep = beam_filter({{1, 1.0}, {2, 0.1}}, 1.0);
    CHECK(keep == std::vector<Key>{1});
    CHECK(beam_filter({{1, 4.0}, {2, 3.0}, {3, 1.0}, {4, 0.0}}, 0.5) == std::vector<Key>{1, 2});
    CHECK(beam_filter({{1, 0.25}, {2, 0.2}}, 0.5) == std::vector<Key>{1});
    CHECK(beam_filter({{1, 0.0}}, 0.5).empty());
    CHECK(beam_filter({{1, -2.0}, {2, 1.0}}, 1.0) == std::vector<Key>{1});
}

TEST_CASE("polynomial extrapolation") {
    auto c = mpe_extrapolate({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}});
    CHECK(c == std::vector<double>{1.0, 2.0});
    auto s = mpe_extrapolate({{2.0}, {1.5}, {1.25}});
    REQUIRE(s.size() == 1);
    CHECK(s[0] == doctest::Approx(1.0));
    // two decay rates need three differences
    std::vector<std::vector<double>> seq;
    for (int j = 0; j < 4; ++j) seq.push_back({3.0 + std::pow(0.5, j), -1.0 + 2.0 * std::pow(0.25, j)});
    auto v = mpe_extrapolate(seq);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(3.0));
    CHECK(v[1] == doctest::Approx(-1.0));
    CHECK(mpe_extrapolate({{5.0}}) == std::vector<double>{5.0});
}

TEST_CASE("training with zero learning rate keeps the input") {
    tbtest::TempDir dir("train-zero");
    Grammar g = tbtest::sourced_file("control.txt");
    auto pairs = parse_supervision(read_file(tbtest::grammar_path("control.sup.txt")));
    auto spec = parse_experiment_line("0 0 3 0.5 1.0 zero", 1);
    spec.learning_rate = 0.0;
    TrainOptions opts;
    opts.out_dir = dir.path();
    auto r = train(g, pairs, spec, opts);
    REQUIRE(r.candidates.size() == 1);
    CHECK(read_file(r.candidates[0]) == regenerate_text(g));
    CHECK(r.final_theta == Model::from_grammar(g).theta);
}

TEST_CASE("training is deterministic and learns the control corpus") {
    Grammar g = tbtest::sourced_file("control.txt");
    auto pairs = parse_supervision(read_file(tbtest::grammar_path("control.sup.txt")));
    auto spec = parse_experiment_line("0 0 10 0.5 1.0 test", 1);
    tbtest::TempDir a("train-a"), b("train-b");
    TrainOptions oa, ob;
    oa.out_dir = a.path();
    ob.out_dir = b.path();
    oa.candidates = ob.candidates = 2;
    auto ra = train(g, pairs, spec, oa);
    auto rb = train(g, pairs, spec, ob);
    REQUIRE(ra.candidates.size() == 2);
    CHECK(ra.log.filename() == "test-0.5-1.0-10.log");
    CHECK(read_file(ra.candidates[0]) == read_file(rb.candidates[0]));
    CHECK(ra.final_theta == rb.final_theta);
    CHECK(ra.epochs.size() == 11);
    CHECK(ra.epochs.back().correct == 3);
    CHECK(ra.epochs.front().correct < 3);
    std::string log = read_file(ra.log);
    CHECK(log.find("epoch 10 accuracy 3/3") != std::string::npos);
    CHECK(log.substr(log.size() - 5) == "done\n");

    Lexicon trained(load_sourced_grammar(ra.candidates[0]));
    Weights theta = Model::from_grammar(trained.grammar()).theta;
    for (const auto& p : pairs) {
        auto r = rank(surface_text(p.surface), trained, theta, Config{});
        CHECK(alpha_equiv(r.front().lf, p.gold));
    }
}

TEST_CASE("extrapolated run adds one record") {
    tbtest::TempDir dir("train-xp");
    Grammar g = tbtest::sourced_file("control.txt");
    auto pairs = parse_supervision(read_file(tbtest::grammar_path("control.sup.txt")));
    auto spec = parse_experiment_line("0 0 xp 0.5 1.0 x", 1);
    TrainOptions opts;
    opts.out_dir = dir.path();
    opts.xp_epochs = 6;
    auto r = train(g, pairs, spec, opts);
    REQUIRE(r.epochs.size() == 8);
    CHECK(r.epochs.back().extrapolated);
    CHECK(r.epochs.back().epoch == 7);
    for (const auto& [k, w] : r.final_theta) CHECK(std::isfinite(w));
}

TEST_CASE("training errors") {
    tbtest::TempDir dir("train-err");
    Grammar g = tbtest::sourced_file("control.txt");
    TrainOptions opts;
    opts.out_dir = dir.path();
    CHECK_THROWS_AS(train(g, {}, parse_experiment_line("0 0 3 0.5 1.0 e", 1), opts), EmptySupervision);
    auto pairs = parse_supervision(read_file(tbtest::grammar_path("control.sup.txt")));
    CHECK_THROWS_AS(train(g, pairs, parse_experiment_line("0 0 3 0.5 1.0 e bogus", 1, false), opts),
                    UnknownPreFunction);
}

TEST_CASE("run stems") {
    CHECK(run_stem(parse_experiment_line("7000 4000 xp 1.2 1.0 nfp nfparse-off", 1)) == "nfp-1.2-1.0-xp");
    CHECK(run_stem(parse_experiment_line("4000 2000 10 0.5 1.0 bon beam-on", 1)) == "bon-0.5-1.0-10");
}

}
