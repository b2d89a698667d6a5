"""Shared fixtures: the sample lexicon, hierarchies, and a trained semantic
lexicon built from the three-sentence sample corpus."""

import importlib.resources

import pytest

from lexacq.lexicon import parse_lexicon
from lexacq.linker import parse
from lexacq.semantics import (
    ConceptHierarchies,
    ConceptHierarchy,
    SemanticLexicon,
    generalize,
    tag_sentence,
)
from lexacq.cli import tokenize


def data_text(name: str) -> str:
    return (importlib.resources.files("lexacq") / "data" / name).read_text(
        encoding="utf-8"
    )


@pytest.fixture(scope="session")
def lexicon():
    return parse_lexicon(data_text("sample_lexicon.lg"))


@pytest.fixture(scope="session")
def hierarchies():
    nouns = ConceptHierarchy.parse(data_text("noun_hierarchy.txt"), "noun")
    verbs = ConceptHierarchy.parse(data_text("verb_hierarchy.txt"), "verb")
    return ConceptHierarchies(nouns, verbs)


@pytest.fixture(scope="session")
def corpus_sentences():
    lines = data_text("sample_corpus.txt").splitlines()
    return [tokenize(l) for l in lines if l.strip() and not l.startswith("#")]


@pytest.fixture(scope="session")
def trained_semlex(lexicon, hierarchies, corpus_sentences):
    semlex = SemanticLexicon()
    for words in corpus_sentences:
        linkage = parse(words, lexicon)[0]
        semlex = tag_sentence(linkage, hierarchies, semlex, lexicon)
    return generalize(semlex, hierarchies)
