import pytest

from supertagkit.corpus import flatten, load_corpus, toy_corpus_path
from supertagkit.evaluation import generate_corpus
from supertagkit.grammar import load_toy_grammar

GOLD_TOKENS = [("John", "N"), ("saw", "V"), ("a", "D"), ("man", "N"),
              ("with", "P"), ("the", "D"), ("telescope", "N")]
GOLD_TAGS = ["alpha_8", "alpha_2", "alpha_3", "alpha_4", "beta_8", "alpha_5", "alpha_6"]
GOLD_LINKS = [(1, 0), (1, 3), (1, 4), (3, 2), (4, 6), (6, 5)]
GOLD_DERIVATION = ("(alpha_2 saw V (sub 1 (alpha_8 John N))"
                  " (adj 2 (beta_8 with P (sub 2.2 (alpha_6 telescope N (sub 1 (alpha_5 the D))))))"
                  " (sub 2.2 (alpha_4 man N (sub 1 (alpha_3 a D)))))")


@pytest.fixture(scope="session")
def grammar():
    return load_toy_grammar()


@pytest.fixture(scope="session")
def toy_flat(grammar):
    return [flatten(d, grammar) for d in load_corpus(toy_corpus_path(), grammar)]


@pytest.fixture(scope="session")
def generated(grammar):
    return [flatten(d, grammar) for d in generate_corpus(grammar, 11, 50)]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
