import json
import random

import pytest

import oracles
from supertagkit.corpus import (flatten, train_dependency, train_trigram, train_unigram,
                                validate_derivation)
from supertagkit.evaluation import (CorpusGenerator, EmptyCorpusError, GeneratorError,
                                    dependency_counts, dependency_scores, format_report,
                                    generate_corpus, supertag_accuracy, topn_success)
from supertagkit.grammar import parse_grammar
from supertagkit.models import dependency_tag, trigram_tag, unigram_tag

UNAMBIGUOUS = """\
tree s initial anchor-pos=V
    (S (NP ↓) (VP (V @) (NP ↓)))
tree n initial anchor-pos=N
    (NP (N @))
tree d auxiliary anchor-pos=A
    (NP (A @) (NP *))
tree p auxiliary anchor-pos=P
    (VP (VP *) (PP (P @) (NP ↓)))
lex saw V s
lex John N n
lex Mary N n
lex big A d
lex with P p
"""


def unigram_tagger(table, lexicon):
    return lambda tokens, n: unigram_tag(tokens, table, lexicon, n)


def test_perfect_taggers(generated):
    gold = {tuple(s.tokens): s for s in generated}
    assert topn_success(generated, lambda t, n: [[g] for g in gold[tuple(t)].gold], 1) == 100.0
    assert supertag_accuracy(generated, lambda t: gold[tuple(t)].gold) == 100.0

    class Gold:
        def __init__(self, s):
            self.tags, self.links = s.gold, s.links
    assert dependency_scores(generated, lambda t: Gold(gold[tuple(t)])) == (100.0, 100.0)


def test_metrics_match_recount(grammar, generated):
    table = train_unigram(generated)
    tagger = unigram_tagger(table, grammar.lexicon)
    previous = -1
    for n in (1, 2, 3, 4):
        lists = [tagger(s.tokens, n) for s in generated]
        want = 100.0 * sum(all(w.supertag in l for w, l in zip(s.words, ls))
                           for s, ls in zip(generated, lists)) / len(generated)
        got = topn_success(generated, tagger, n)
        assert got == pytest.approx(want)
        assert got >= previous and 0 <= got <= 100
        previous = got
    assert previous == 100.0          # every gold tag is a candidate

    top1 = [[l[0] for l in tagger(s.tokens, 1)] for s in generated]
    assert supertag_accuracy(generated, lambda t: [l[0] for l in tagger(t, 1)]) == \
        pytest.approx(oracles.recount_accuracy(generated, top1))


def test_dependency_metrics_recount(grammar, generated):
    dep, uni = train_dependency(generated, grammar.lexicon), train_unigram(generated)
    outs = [dependency_tag(s.tokens, dep, uni, grammar.lexicon) for s in generated]
    counts = dependency_counts(generated, outs)
    matched, gold = oracles.recount_links(generated, [[(l.head, l.dependent) for l in o.links]
                                                      for o in outs])
    assert (counts.matched_links, counts.gold_links) == (matched, gold)
    assert counts.gold_links == counts.words - counts.sentence_roots
    assert counts.link_recall == pytest.approx(100.0 * matched / gold)
    assert counts.supertag_accuracy == pytest.approx(
        oracles.recount_accuracy(generated, [o.tags for o in outs]))


def test_metrics_on_many_small_corpora(grammar):
    rng = random.Random(9)
    for i in range(50):
        corpus = [flatten(d, grammar) for d in generate_corpus(grammar, 100 + i, 8)]
        uni = train_unigram(corpus)
        predicted = [[rng.choice(sorted(grammar.lexicon.candidates(w, p))) for w, p in s.tokens]
                     for s in corpus]
        it = iter(predicted)
        assert supertag_accuracy(corpus, lambda t: next(it)) == \
            pytest.approx(oracles.recount_accuracy(corpus, predicted))
        assert 0 <= topn_success(corpus, unigram_tagger(uni, grammar.lexicon), 2) <= 100


def test_empty_corpus_errors():
    with pytest.raises(EmptyCorpusError):
        topn_success([], None, 1)
    with pytest.raises(EmptyCorpusError):
        supertag_accuracy([], None)
    with pytest.raises(EmptyCorpusError):
        dependency_scores([], None)


def test_zero_ambiguity_everything_perfect():
    g = parse_grammar(UNAMBIGUOUS)
    corpus = [flatten(d, g) for d in generate_corpus(g, 3, 60, adjoin_prob=0.3)]
    train, test = corpus[:40], corpus[40:]
    uni = train_unigram(train)
    tri = train_trigram(train, g.templates, g.lexicon.pos_tags)
    dep = train_dependency(train, g.lexicon)
    assert topn_success(test, unigram_tagger(uni, g.lexicon), 1) == 100.0
    assert supertag_accuracy(test, lambda t: trigram_tag(t, tri, g.lexicon)) == 100.0
    assert dependency_scores(test, lambda t: dependency_tag(t, dep, uni, g.lexicon)) == (100.0, 100.0)


def test_generator_deterministic(grammar):
    assert generate_corpus(grammar, 5, 100) == generate_corpus(grammar, 5, 100)
    assert generate_corpus(grammar, 5, 100) != generate_corpus(grammar, 6, 100)


def test_generator_size_zero(grammar):
    assert generate_corpus(grammar, 1, 0) == []
    with pytest.raises(ValueError, match="empty corpus"):
        train_unigram([])


def test_generator_caps(grammar):
    gen = CorpusGenerator(grammar, max_depth=4, max_length=8)
    rng = random.Random(0)
    for _ in range(300):
        d = gen.derivation(rng)
        assert len(d) <= 8
        assert depth(d) <= 4


def depth(d):
    return 1 + max((depth(a.child) for a in d.children), default=0)


def test_generator_validator_sweep(grammar):
    for d in generate_corpus(grammar, 77, 10_000):
        validate_derivation(d, grammar)
        assert len(d) <= 15 and depth(d) <= 6


def test_generator_rejects_hopeless_grammar():
    g = parse_grammar("tree a initial anchor-pos=N\n    (NP (N @))\nlex x N a\n")
    with pytest.raises(GeneratorError):
        generate_corpus(g, 0, 1)


def test_format_report():
    text = format_report({"sentences": 3, "link_recall": 75.0}, structured=True)
    lines = text.splitlines()
    assert lines[:2] == ["sentences\t3", "link_recall\t75.0000"]
    assert json.loads("\n".join(lines[2:])) == {"sentences": 3, "link_recall": 75.0}
    assert format_report({"a": 1}) == "a\t1\n"
