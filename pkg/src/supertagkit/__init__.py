"""Supertagging for lexicalized tree-adjoining grammars.

Several models pick one elementary tree per word from its candidates.  The
surrounding tools read grammars and derivation corpora, train the models,
stitch tagged words back into derivations and score the results.
"""
from .grammar import Grammar, load_grammar, load_toy_grammar

__version__ = "0.1.0"

__all__ = ["Grammar", "load_grammar", "load_toy_grammar", "__version__"]
