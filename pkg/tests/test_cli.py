import io
import json

import pytest

from conftest import GOLD_DERIVATION, GOLD_TAGS
from supertagkit import cli
from supertagkit.corpus import (flatten, load_corpus, parse_corpus, train_dependency,
                                train_unigram, toy_corpus_path)
from supertagkit.evaluation import dependency_counts
from supertagkit.models import dependency_tag
from test_eval import UNAMBIGUOUS

GOLD_LINE = "John_N saw_V a_D man_N with_P the_D telescope_N\n"


def run(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    import os
    for key in list(os.environ):
        if key.startswith("STK_"):
            monkeypatch.delenv(key)


def test_tag_golden_sentence(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["tag", "--model", "dependency"], GOLD_LINE)
    assert code == 0
    fields = out.rstrip("\n").split("\t")
    assert fields[0] == " ".join(GOLD_TAGS)
    assert fields[1] == "1>0 1>3 1>4 3>2 4>6 6>5"
    assert "PARTIAL" not in out


def test_tag_empty_input(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["tag"], "") == (0, "", "")


def test_tag_unknown_pos_continues(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["tag", "--model", "trigram"],
                       "x_ZZ\n" + GOLD_LINE + "oops\n")
    lines = out.splitlines()
    assert code == 1
    assert lines[0] == "ERROR\tline 1: unknown POS 'ZZ'"
    assert lines[1] == " ".join(GOLD_TAGS)
    assert lines[2].startswith("ERROR\tline 3")


def test_tag_partial_marker(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["tag"], "John_N Mary_N\n")
    assert code == 0 and out.rstrip("\n").endswith("PARTIAL")


def test_tag_topn_text(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["tag", "--model", "unigram", "--n", "2"], "John_N\n")
    assert code == 0 and out == "alpha_8|alpha_1\n"


def test_train_writes_tables_deterministically(capsys, monkeypatch, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, out, _ = run(capsys, monkeypatch, ["train", str(toy_corpus_path()), "--model-dir", str(d)])
        assert code == 0
        assert [l.split("\t")[0] for l in out.splitlines()] == ["unigram", "trigram", "dependency"]
    for name in ("unigram.tsv", "trigram.tsv", "dependency.tsv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_train_missing_corpus(capsys, monkeypatch, tmp_path):
    missing = tmp_path / "nope.corpus"
    code, _, err = run(capsys, monkeypatch, ["train", str(missing)])
    assert code == 1 and str(missing) in err


def test_train_bad_corpus(capsys, monkeypatch, tmp_path):
    path = tmp_path / "bad.corpus"
    path.write_text("(alpha_2 saw V (sub 1 (beta_2 John N)))\n")
    code, _, err = run(capsys, monkeypatch, ["train", str(path)])
    assert code == 1 and "line 1" in err


def test_tag_with_trained_model_dir(capsys, monkeypatch, tmp_path):
    run(capsys, monkeypatch, ["train", str(toy_corpus_path()), "--model-dir", str(tmp_path)])
    code, out, _ = run(capsys, monkeypatch, ["tag", "--model-dir", str(tmp_path)], GOLD_LINE)
    assert code == 0 and out.split("\t")[0] == " ".join(GOLD_TAGS)


def test_missing_model_dir(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, monkeypatch, ["tag", "--model-dir", str(tmp_path / "x")], GOLD_LINE)
    assert code == 1 and "table" in err


def test_stitch_pipeline(capsys, monkeypatch, grammar):
    _, tagged, _ = run(capsys, monkeypatch, ["tag", "--format", "structured"], GOLD_LINE)
    code, out, _ = run(capsys, monkeypatch, ["stitch"], tagged)
    assert code == 0
    assert parse_corpus(out, grammar) == parse_corpus(GOLD_DERIVATION, grammar)


def test_stitch_empty(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["stitch"], "") == (0, "", "")


def test_stitch_round_trips_generated_output(capsys, monkeypatch, grammar, tmp_path):
    _, corpus_text, _ = run(capsys, monkeypatch, ["gen", "--seed", "4", "--size", "40"])
    sentences = [flatten(d, grammar) for d in parse_corpus(corpus_text, grammar)]
    lines = "".join(" ".join("%s_%s" % t for t in s.tokens) + "\n" for s in sentences)
    _, tagged, _ = run(capsys, monkeypatch, ["tag", "--format", "structured"], lines)
    code, out, _ = run(capsys, monkeypatch, ["stitch", "--format", "structured"], tagged)
    assert code == 0
    records = [json.loads(l) for l in out.splitlines()]
    assert len(records) == 40 and not any("error" in r for r in records)
    for r in records:
        parse_corpus("\n".join(r["roots"]), grammar, complete=False)


def test_stitch_bad_record(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["stitch"], "not json\n")
    assert code == 1 and "ERROR" in out


def test_gen_deterministic_and_valid(capsys, monkeypatch, grammar):
    a = run(capsys, monkeypatch, ["gen", "--seed", "9", "--size", "50"])[1]
    b = run(capsys, monkeypatch, ["gen", "--seed", "9", "--size", "50"])[1]
    assert a == b and len(parse_corpus(a, grammar)) == 50


def test_gen_size_zero(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["gen", "--size", "0"]) == (0, "", "")


def test_gen_hopeless_grammar(capsys, monkeypatch, tmp_path):
    g = tmp_path / "g.grammar"
    g.write_text("tree a initial anchor-pos=N\n    (NP (N @))\nlex x N a\n")
    code, _, err = run(capsys, monkeypatch, ["gen", "--grammar", str(g)])
    assert code == 1 and "S" in err


def test_eval_zero_ambiguity(capsys, monkeypatch, tmp_path):
    g = tmp_path / "u.grammar"
    g.write_text(UNAMBIGUOUS, encoding="utf-8")
    corpus = tmp_path / "u.corpus"
    code, _, _ = run(capsys, monkeypatch, ["gen", "--grammar", str(g), "--seed", "2",
                                           "--size", "40", str(corpus)])
    assert code == 0
    run(capsys, monkeypatch, ["train", str(corpus), "--grammar", str(g),
                              "--model-dir", str(tmp_path / "m")])
    code, out, _ = run(capsys, monkeypatch, ["eval", str(corpus), "--grammar", str(g),
                                             "--model-dir", str(tmp_path / "m")])
    assert code == 0
    report = dict(line.split("\t") for line in out.splitlines())
    for key in ("unigram_top1_success", "unigram_accuracy", "trigram_accuracy",
                "dependency_link_recall", "dependency_accuracy"):
        assert float(report[key]) == 100.0


def test_eval_matches_library(capsys, monkeypatch, grammar, tmp_path):
    corpus = tmp_path / "c.corpus"
    run(capsys, monkeypatch, ["gen", "--seed", "6", "--size", "60", str(corpus)])
    model = tmp_path / "m"
    run(capsys, monkeypatch, ["train", str(corpus), "--model-dir", str(model)])
    code, out, _ = run(capsys, monkeypatch, ["eval", str(corpus), "--model-dir", str(model),
                                             "--model", "dependency", "--format", "structured"])
    assert code == 0
    report = json.loads(out[out.index("{"):])
    flat = [flatten(d, grammar) for d in load_corpus(corpus, grammar)]
    dep, uni = train_dependency(flat, grammar.lexicon), train_unigram(flat)
    counts = dependency_counts(flat, [dependency_tag(s.tokens, dep, uni, grammar.lexicon) for s in flat])
    assert report["dependency_link_recall"] == pytest.approx(counts.link_recall, abs=1e-12)
    assert report["matched_links"] == counts.matched_links
    assert report["gold_links"] == report["words"] - report["sentence_roots"]


def test_jobs_preserve_order(capsys, monkeypatch):
    text = GOLD_LINE + "Mary_N watched_V the_D dog_N\n" + "John_N saw_V Mary_N\n" * 3
    one = run(capsys, monkeypatch, ["tag", "--jobs", "1"], text)
    two = run(capsys, monkeypatch, ["tag", "--jobs", "2"], text)
    assert one == two


def test_env_override_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("STK_MODEL", "unigram")
    monkeypatch.setenv("STK_N", "2")
    assert run(capsys, monkeypatch, ["tag"], "John_N\n")[1] == "alpha_8|alpha_1\n"
    assert run(capsys, monkeypatch, ["tag", "--n", "1"], "John_N\n")[1] == "alpha_8\n"


def test_bad_flag_values(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["tag", "--model", "bogus"])[0] == 1
    assert run(capsys, monkeypatch, ["tag", "--format", "xml"])[0] == 1
    assert run(capsys, monkeypatch, ["tag", "--n", "0"])[0] == 1
    assert run(capsys, monkeypatch, ["frobnicate"])[0] == 1


def test_internal_check_exit_code(capsys, monkeypatch, tmp_path):
    broken = lambda corpus, preds: type("C", (), {"gold_links": 1, "words": 5, "sentence_roots": 1})()
    monkeypatch.setattr(cli, "dependency_counts", broken)
    code, _, err = run(capsys, monkeypatch, ["eval", str(toy_corpus_path()), "--model", "dependency"])
    assert code == 2 and "internal" in err
