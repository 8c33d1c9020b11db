"""Command-line entry point: ``stk {train,tag,eval,stitch,gen}``.

Every flag can also be set through an environment variable named ``STK_``
plus the flag name in upper case with dashes as underscores (``STK_MODEL_DIR``,
``STK_JOBS``, ...).  A flag given on the command line wins over the
environment.  A path of ``-`` means stdin or stdout.

Exit status is 0 on success and 1 for unreadable or invalid input; 2 means
an internal consistency check failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .corpus import (DEFAULT_K, ORDINAL_MODES, DependencyLink, FlatSentence, FlatWord,
                     TableFormatError, flatten, load_table, parse_corpus, save_table,
                     serialize_corpus, serialize_derivation, toy_corpus_path, train_dependency,
                     train_trigram, train_unigram)
from .evaluation import (GeneratorError, accuracy_counts, dependency_counts, format_report,
                         generate_corpus, topn_counts)
from .grammar import GrammarError, UnknownPOSError, load_grammar, toy_grammar_path
from .models import dependency_tag, trigram_tag, unigram_best, unigram_tag
from .sexpr import SExprError
from .stitcher import StitchError, stitch

MODELS = ("unigram", "trigram", "dependency")
FORMATS = ("text", "structured")
ENV_PREFIX = "STK_"


class InputError(Exception):
    """Bad user input; reported on stderr with exit status 1."""


class Inconsistency(Exception):
    """An internal check failed; exit status 2."""


def _env(flag, fallback=None):
    return os.environ.get(ENV_PREFIX + flag.lstrip("-").replace("-", "_").upper(), fallback)


def _read(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise InputError("cannot read %s: %s" % (path, err.strerror or err)) from None


def _write(path, text):
    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as err:
        raise InputError("cannot write %s: %s" % (path, err.strerror or err)) from None


def _grammar(args):
    try:
        return load_grammar(Path(args.grammar))
    except OSError as err:
        raise InputError("cannot read grammar %s: %s" % (args.grammar, err.strerror or err)) from None
    except (GrammarError, SExprError) as err:
        raise InputError("grammar %s: %s" % (args.grammar, err)) from None


def _corpus(path, grammar):
    text = _read(path)
    try:
        return [flatten(d, grammar) for d in parse_corpus(text, grammar)]
    except (SExprError, ValueError) as err:
        raise InputError("corpus %s: %s" % (path, err)) from None


def _train(corpus, grammar, names, args):
    if not corpus:
        raise InputError("empty corpus")
    tables = {}
    if "unigram" in names or "dependency" in names:
        tables["unigram"] = train_unigram(corpus)
    if "trigram" in names:
        tables["trigram"] = train_trigram(corpus, tags=grammar.templates,
                                          symbols=grammar.lexicon.pos_tags, k=args.smoothing_k)
    if "dependency" in names:
        tables["dependency"] = train_dependency(corpus, grammar.lexicon, args.ordinal_mode)
    return tables


def _tables(args, grammar, names):
    """Load the tables a model needs, or train them on the bundled toy corpus."""
    if "dependency" in names:
        names = set(names) | {"unigram"}
    if args.model_dir is None:
        return _train(_corpus(toy_corpus_path(), grammar), grammar, names, args)
    tables = {}
    for name in sorted(names):
        try:
            tables[name] = load_table(args.model_dir, name)
        except OSError as err:
            raise InputError("cannot read %s table in %s: %s"
                             % (name, args.model_dir, err.strerror or err)) from None
        except (TableFormatError, ValueError) as err:
            raise InputError("%s table in %s: %s" % (name, args.model_dir, err)) from None
    return tables


def _size(table):
    if hasattr(table, "transitions"):
        return sum(map(len, table.transitions.values())) + sum(map(len, table.emissions.values()))
    if hasattr(table, "rows"):
        return len(table.entries())
    return sum(map(len, table.counts.values()))


# -- per-sentence work, shared by the serial and the process-pool paths ------

_STATE = {}


def _init_worker(state):
    _STATE.clear()
    _STATE.update(state)


def _run(func, items, jobs, state):
    """``func`` over ``items`` with results in input order."""
    if jobs <= 1 or len(items) < 2:
        _init_worker(state)
        return [func(item) for item in items]
    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(state,)) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))


def _decode(tokens, model):
    """Tag one sentence; returns (TaggedSentence, top-n lists or None)."""
    tables, lexicon, n = _STATE["tables"], _STATE["lexicon"], _STATE["n"]
    if model == "unigram":
        best = unigram_best(tokens, tables["unigram"], lexicon)
        return best, unigram_tag(best, tables["unigram"], lexicon, n)
    if model == "trigram":
        return trigram_tag(tokens, tables["trigram"], lexicon), None
    return dependency_tag(tokens, tables["dependency"], tables["unigram"], lexicon), None


def _tag_record(item):
    lineno, tokens = item
    record = {"line": lineno, "words": [w for w, _ in tokens], "pos": [p for _, p in tokens]}
    try:
        tagged, topn = _decode(tokens, _STATE["model"])
    except UnknownPOSError as err:
        record["error"] = str(err)
        return record
    record["tags"] = tagged.tags
    if topn is not None:
        record["topn"] = topn
    if tagged.links is not None:
        record["links"] = [[l.head, l.dependent] for l in tagged.links]
        record["complete"] = tagged.complete
    record["score"] = tagged.score
    return record


def _eval_record(item):
    tokens = item
    out = {}
    tables, lexicon, n = _STATE["tables"], _STATE["lexicon"], _STATE["n"]
    if "unigram" in _STATE["models"]:
        out["unigram"] = unigram_tag(tokens, tables["unigram"], lexicon, n)
    if "trigram" in _STATE["models"]:
        out["trigram"] = trigram_tag(tokens, tables["trigram"], lexicon)
    if "dependency" in _STATE["models"]:
        out["dependency"] = dependency_tag(tokens, tables["dependency"], tables["unigram"], lexicon)
    return out


def _parse_tokens(line):
    tokens = []
    for item in line.split():
        word, sep, pos = item.rpartition("_")
        if not sep or not word or not pos:
            raise ValueError("token %r is not word_POS" % item)
        tokens.append((word, pos))
    return tokens


def _format_tag(record):
    if "error" in record:
        return "ERROR\tline %d: %s" % (record["line"], record["error"])
    if "topn" in record and any(len(c) > 1 for c in record["topn"]):
        fields = [" ".join("|".join(c) for c in record["topn"])]
    else:
        fields = [" ".join(record["tags"])]
    if "links" in record:
        fields.append(" ".join("%d>%d" % (h, d) for h, d in record["links"]))
        fields.append("%.6f" % record["score"])
        if not record["complete"]:
            fields.append("PARTIAL")
    return "\t".join(fields)


# -- commands ---------------------------------------------------------------

def cmd_train(args):
    grammar = _grammar(args)
    names = MODELS if args.model in (None, "all") else (args.model,)
    corpus = _corpus(args.corpus, grammar)
    tables = _train(corpus, grammar, names, args)
    out_dir = args.model_dir or "."
    for name in names:
        path = save_table(tables[name], out_dir, name)
        print("%s\t%s\t%d" % (name, path, _size(tables[name])))
    return 0


def cmd_tag(args):
    grammar = _grammar(args)
    model = args.model or "dependency"
    if model not in MODELS:
        raise InputError("tag needs a single model, one of %s" % ", ".join(MODELS))
    items, bad = [], []
    for lineno, line in enumerate(_read(args.input).splitlines(), 1):
        if not line.strip():
            continue
        try:
            items.append((lineno, _parse_tokens(line)))
        except ValueError as err:
            bad.append({"line": lineno, "error": str(err)})
    tables = _tables(args, grammar, {model})
    state = {"tables": tables, "lexicon": grammar.lexicon, "n": args.n or 1, "model": model}
    records = sorted(_run(_tag_record, items, args.jobs, state) + bad, key=lambda r: r["line"])
    if args.format == "structured":
        text = "".join(json.dumps(r) + "\n" for r in records)
    else:
        text = "".join(_format_tag(r) + "\n" for r in records)
    _write(args.output, text)
    return 1 if any("error" in r for r in records) else 0


def cmd_eval(args):
    grammar = _grammar(args)
    models = MODELS if args.model in (None, "all") else (args.model,)
    corpus = _corpus(args.corpus, grammar)
    if not corpus:
        raise InputError("empty corpus")
    n = args.n or 3
    tables = _tables(args, grammar, set(models))
    state = {"tables": tables, "lexicon": grammar.lexicon, "n": n, "models": models}
    try:
        outputs = _run(_eval_record, [s.tokens for s in corpus], args.jobs, state)
    except UnknownPOSError as err:
        raise InputError("corpus %s: %s" % (args.corpus, err)) from None
    metrics = {"sentences": len(corpus), "words": sum(map(len, corpus))}
    if "unigram" in models:
        for k in range(1, n + 1):
            ok, total = topn_counts(corpus, [[c[:k] for c in o["unigram"]] for o in outputs])
            metrics["unigram_top%d_success" % k] = 100.0 * ok / total
        correct, words = accuracy_counts(corpus, [[c[0] for c in o["unigram"]] for o in outputs])
        metrics["unigram_accuracy"] = 100.0 * correct / words if words else 100.0
    if "trigram" in models:
        correct, words = accuracy_counts(corpus, [o["trigram"] for o in outputs])
        metrics["trigram_accuracy"] = 100.0 * correct / words if words else 100.0
    if "dependency" in models:
        counts = dependency_counts(corpus, [o["dependency"] for o in outputs])
        if counts.gold_links != counts.words - counts.sentence_roots:
            raise Inconsistency("gold link total %d differs from words - roots = %d"
                                % (counts.gold_links, counts.words - counts.sentence_roots))
        metrics["dependency_link_recall"] = counts.link_recall
        metrics["dependency_accuracy"] = counts.supertag_accuracy
        metrics["matched_links"] = counts.matched_links
        metrics["gold_links"] = counts.gold_links
        metrics["sentence_roots"] = counts.sentence_roots
        metrics["complete_sentences"] = counts.complete
    _write(args.output, format_report(metrics, structured=args.format == "structured"))
    return 0


def _stitch_record(record, grammar):
    if not len(record["words"]) == len(record["pos"]) == len(record["tags"]):
        raise ValueError("words, pos and tags differ in length")
    words = [FlatWord(w, p, t) for w, p, t in zip(record["words"], record["pos"], record["tags"])]
    links = [DependencyLink(h, d) for h, d in record.get("links", [])]
    return stitch(FlatSentence(words, links), grammar)


def cmd_stitch(args):
    grammar = _grammar(args)
    out, failed = [], False
    for lineno, line in enumerate(_read(args.input).splitlines(), 1):
        if not line.strip():
            continue
        where = "line %d" % lineno
        try:
            record = json.loads(line)
            where = "line %d" % record.get("line", lineno)
            if "error" in record:
                raise ValueError(record["error"])
            result = _stitch_record(record, grammar)
        except StitchError as err:
            if "invalid" in str(err):
                raise Inconsistency("%s: %s" % (where, err)) from None
            failed = True
            out.append(_stitch_failure(args, where, err))
            continue
        except (ValueError, KeyError, TypeError, AttributeError) as err:
            failed = True
            out.append(_stitch_failure(args, where, err))
            continue
        roots = [serialize_derivation(r) for r in result.roots]
        if args.format == "structured":
            out.append(json.dumps({"line": int(where.split()[1]), "complete": result.complete,
                                   "roots": roots, "diagnostics": result.diagnostics,
                                   "ambiguous": [list(p) for p in result.ambiguous]}) + "\n")
            continue
        head = []
        if not result.complete:
            head.append("# %s: PARTIAL %d fragments\n" % (where, len(roots)))
        head.extend("# %s\n" % msg for msg in result.diagnostics)
        out.append("".join(head) + "".join(r + "\n" for r in roots))
    sep = "" if args.format == "structured" else "\n"
    _write(args.output, sep.join(out))
    return 1 if failed else 0


def _stitch_failure(args, where, err):
    if args.format == "structured":
        return json.dumps({"line": int(where.split()[1]), "error": str(err)}) + "\n"
    return "# %s: ERROR %s\n" % (where, err)


def cmd_gen(args):
    grammar = _grammar(args)
    if args.size < 0:
        raise InputError("--size must be non-negative")
    try:
        corpus = generate_corpus(grammar, args.seed, args.size)
    except GeneratorError as err:
        raise InputError(str(err)) from None
    _write(args.output, serialize_corpus(corpus))
    return 0


# -- argument handling ------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grammar", default=_env("grammar", str(toy_grammar_path())),
                        help="grammar file (default: the bundled toy grammar)")
    common.add_argument("--model-dir", default=_env("model-dir"),
                        help="directory holding the table files")
    common.add_argument("--model", default=_env("model"),
                        help="unigram, trigram, dependency or all")
    common.add_argument("--n", type=int, default=_env("n"), help="top-n list size")
    common.add_argument("--smoothing-k", type=float, default=_env("smoothing-k", DEFAULT_K),
                        help="add-k constant for the trigram tables (default %(default)s)")
    common.add_argument("--ordinal-mode", default=_env("ordinal-mode", ORDINAL_MODES[0]),
                        help="count dependency ordinals over candidate sets or surface words")
    common.add_argument("--seed", type=int, default=_env("seed", 0))
    common.add_argument("--size", type=int, default=_env("size", 100))
    common.add_argument("--format", default=_env("format", "text"), help="text or structured")
    common.add_argument("--jobs", type=int, default=_env("jobs", 1),
                        help="worker processes for tag and eval")

    parser = argparse.ArgumentParser(prog="stk", description="LTAG supertagging toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", parents=[common], help="train tables from a derivation corpus")
    p.add_argument("corpus", help="derivation corpus ('-' for stdin)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tag", parents=[common], help="supertag word_POS sentences")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("output", nargs="?", default="-")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("eval", parents=[common], help="score the models on a gold corpus")
    p.add_argument("corpus")
    p.add_argument("output", nargs="?", default="-")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stitch", parents=[common],
                       help="combine structured tag output into derivations")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("output", nargs="?", default="-")
    p.set_defaults(func=cmd_stitch)

    p = sub.add_parser("gen", parents=[common], help="generate a random derivation corpus")
    p.add_argument("output", nargs="?", default="-")
    p.set_defaults(func=cmd_gen)
    return parser


def _check(args):
    choices = {"model": MODELS + ("all",), "format": FORMATS, "ordinal_mode": ORDINAL_MODES}
    for name, allowed in choices.items():
        value = getattr(args, name)
        if value is not None and value not in allowed:
            raise InputError("--%s must be one of %s, not %r"
                             % (name.replace("_", "-"), ", ".join(allowed), value))
    if args.n is not None and args.n < 1:
        raise InputError("--n must be positive")
    if args.jobs < 1:
        raise InputError("--jobs must be positive")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; those are input errors here
        return 0 if exc.code == 0 else 1
    try:
        _check(args)
        return args.func(args)
    except InputError as err:
        print("stk %s: %s" % (args.command, err), file=sys.stderr)
        return 1
    except Inconsistency as err:
        print("stk %s: internal check failed: %s" % (args.command, err), file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
