import os
from pathlib import Path

import pytest

import thebench

GRAMMARS = Path(os.environ.get("THEBENCH_GRAMMARS_DIR", Path(__file__).resolve().parents[2] / "grammars"))


def test_category_and_terms():
    assert thebench.category("S\\NP[AGR=3S]") == "s\\np[agr=3s]"
    assert thebench.normalize("(\\x\\y.like x y) john mary") == "like john mary"
    assert thebench.alpha_equiv("\\x.f x", "\\y.f y")


def test_analyze_toy_english():
    g = thebench.Grammar.from_file(GRAMMARS / "toy_english.txt")
    assert len(g) == 9
    results = g.analyze("Sincerity admires John")
    assert results
    assert {lf for _, lf in results} == {"admire john sincerity"}


def test_rank_sums_to_one():
    g = thebench.Grammar.from_file(GRAMMARS / "control.txt")
    ranked = g.rank("Mary persuaded Harry to study")
    assert len(ranked) == 2
    assert abs(sum(p for _, p in ranked) - 1.0) < 1e-9


def test_case_functions_merge():
    g = thebench.Grammar.from_file(GRAMMARS / "likes.txt")
    rules, notes = g.case_functions(["v"])
    assert rules.count("\n") == 2
    assert "np[agr=3s] : lf --> s/(s\\np[agr=3s])" in rules
    merged = g.merged(rules)
    assert len(merged) == len(g) + 2
    assert len(merged.analyze("Sincerity likes John")) > len(g.analyze("Sincerity likes John"))
    _, notes = g.case_functions(["adv"])
    assert notes


def test_errors_raise():
    with pytest.raises(thebench.BenchError):
        thebench.category("(s\\np")
    with pytest.raises(thebench.BenchError):
        thebench.Grammar.from_text("bad :: (s\\np : \\x.x\n")


def test_train(tmp_path):
    out = thebench.train(GRAMMARS / "control.txt", GRAMMARS / "control.sup.txt", "0 0 10 0.5 1.0 py", tmp_path)
    assert Path(out["log"]).exists()
    assert out["accuracy"][-1] == 1.0
    trained = thebench.Grammar.from_file(out["candidates"][0])
    assert trained.rank("Mary promised Harry to study")[0][0] == "promise (study mary) harry mary"
