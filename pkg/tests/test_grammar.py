import pytest
from hypothesis import given, strategies as st

from supertagkit.grammar import (ANCHOR, AUXILIARY, FOOT, INITIAL, SUBST, GrammarError,
                                 UnknownPOSError, candidates, format_address, load_grammar,
                                 parse_address, parse_grammar, parse_tree_expr,
                                 serialize_grammar)

SMALL = """\
tree a1 initial anchor-pos=N
    (NP (N @))
tree b1 auxiliary anchor-pos=A
    (NP (A @) (NP *))
lex cat N a1
pos A b1
"""


def test_toy_grammar_has_28_named_templates(grammar):
    expected = {"alpha_%d" % i for i in range(1, 21)} | {"beta_%d" % i for i in range(1, 9)}
    assert set(grammar.templates) == expected
    assert sum(t.kind == AUXILIARY for t in grammar.templates.values()) == 8


def test_candidates_for_saw(grammar):
    cands = candidates("saw", "V", grammar.lexicon)
    assert {"alpha_2", "alpha_9", "alpha_7"} <= cands
    assert len(cands) == 4


def test_candidates_for_john(grammar):
    cands = grammar.lexicon.candidates("John", "N")
    assert len(cands) == 4
    assert {"alpha_1", "alpha_8", "beta_2"} <= cands


def test_sentence_ambiguity_is_28(grammar):
    words = "John saw a man with the telescope".split()
    pos = "N V D N P D N".split()
    assert sum(len(grammar.lexicon.candidates(w, p)) for w, p in zip(words, pos)) == 28


def test_pos_backoff_and_unknown_pos(grammar):
    assert grammar.lexicon.candidates("Fido", "N") == grammar.lexicon.pos_entries["N"]
    with pytest.raises(UnknownPOSError) as err:
        grammar.lexicon.candidates("x", "ZZ")
    assert "ZZ" in str(err.value)


def test_alpha_2_shape(grammar):
    t = grammar["alpha_2"]
    assert t.kind == INITIAL and t.root.label == "S"
    assert [format_address(s.address) for s in t.substitution_sites] == ["1", "2.2"]
    assert t.anchor.address == (2, 1) and t.anchor.mark == ANCHOR
    assert t.node_at((2,)).label == "VP"


def test_beta_8_shape(grammar):
    t = grammar["beta_8"]
    assert t.kind == AUXILIARY and t.foot.mark == FOOT
    assert t.foot.label == t.root.label == "VP"
    assert t.node_at((2, 2)).mark == SUBST


def test_adjunction_sites_lowest_then_leftmost():
    t = parse_grammar("tree x initial anchor-pos=V\n    (S (S (V @)) (S ↓))\n"
                      "pos V x\n").templates["x"]
    assert [s.address for s in t.adjunction_sites("S")] == [(1,), ()]


def test_serialize_round_trip(grammar):
    again = parse_grammar(serialize_grammar(grammar))
    assert again == grammar


def test_load_from_text_and_path(tmp_path):
    path = tmp_path / "g.grammar"
    path.write_text(SMALL, encoding="utf-8")
    assert load_grammar(path) == load_grammar(SMALL)


@pytest.mark.parametrize("text, fragment", [
    ("tree a initial anchor-pos=N\n    (NP (N @) (N @))\npos N a\n", "exactly one anchor"),
    ("tree a initial anchor-pos=N\n    (NP (N @) (NP *))\npos N a\n", "foot"),
    ("tree b auxiliary anchor-pos=N\n    (NP (N @))\npos N b\n", "foot"),
    ("tree b auxiliary anchor-pos=N\n    (NP (N @) (VP *))\npos N b\n", "does not match"),
    ("tree a initial anchor-pos=N\n    (NP (N @) (Det))\npos N a\n", "frontier"),
    ("tree a initial anchor-pos=N\n    (NP (N @)\npos N a\n", "line"),
    ("tree a initial anchor-pos=N\n    (NP (N @))\npos N zz\n", "unknown template"),
    ("tree a initial anchor-pos=N\n    (NP (N @))\npos V a\n", "anchored by"),
    ("", "empty grammar"),
    ("bogus record\n", "unknown record type"),
])
def test_malformed_grammars(text, fragment):
    with pytest.raises(GrammarError) as err:
        parse_grammar(text)
    assert fragment in str(err.value)


def test_error_names_line_and_template():
    text = "tree a initial anchor-pos=N\n    (NP (N @))\ntree a initial anchor-pos=N\n    (NP (N @))\n"
    with pytest.raises(GrammarError) as err:
        parse_grammar(text)
    assert "line 3" in str(err.value) and "a" in str(err.value)


def test_tree_expr_round_trip():
    text = "(S (NP ↓) (VP (V @) (NP ↓)))"
    assert parse_tree_expr(text).to_expr() == text


def test_root_address_text():
    assert format_address(()) == "0"
    assert parse_address("0") == ()
    with pytest.raises(ValueError):
        parse_address("1..2")


@given(st.lists(st.integers(min_value=1, max_value=9), max_size=6))
def test_address_round_trip(address):
    assert parse_address(format_address(tuple(address))) == tuple(address)
