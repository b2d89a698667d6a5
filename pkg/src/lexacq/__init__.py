"""Linkage parser with unknown-word syntactic and semantic acquisition.

Sentences are parsed under a connector-disjunct grammar: every word
contributes one disjunct (its required left and right links) and the
resulting link set must be planar, connected, correctly ordered, and free
of duplicate word pairs.  Words missing from the lexicon are acquired by
constraint solving: the parser treats them as wildcards, collects the
disjuncts that make the sentence valid, and optionally classifies the
word against noun/verb concept hierarchies using tagged usages of the
known words it links to.
"""

from .lexicon import (
    EMPTY_DISJUNCT,
    Connector,
    Disjunct,
    Lexicon,
    LexiconError,
    parse_lexicon,
    serialize_lexicon,
)
from .linker import (
    Link,
    Linkage,
    OracleCapError,
    UnknownWordError,
    Violation,
    enumerate_bruteforce,
    linkage_records,
    match,
    parse,
    render_diagram,
    validate,
)
from .semantics import (
    ConceptHierarchies,
    ConceptHierarchy,
    Evidence,
    HierarchyError,
    NoSemanticEvidenceError,
    SemanticLexicon,
    SemanticTag,
    TaggedDisjunct,
    UnknownConceptError,
    classify_unknown,
    generalize,
    parse_semlex,
    refine,
    serialize_semlex,
    tag_sentence,
)
from .syntax import (
    AcquisitionProblem,
    AcquisitionResult,
    NoSolutionError,
    TooManyUnknownsError,
    TraceEvent,
    acquire_syntax,
    filter_by_inventory,
    infer_unknowns,
    prune_known,
    render_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionProblem",
    "AcquisitionResult",
    "ConceptHierarchies",
    "ConceptHierarchy",
    "Connector",
    "Disjunct",
    "EMPTY_DISJUNCT",
    "Evidence",
    "HierarchyError",
    "Lexicon",
    "LexiconError",
    "Link",
    "Linkage",
    "NoSemanticEvidenceError",
    "NoSolutionError",
    "OracleCapError",
    "SemanticLexicon",
    "SemanticTag",
    "TaggedDisjunct",
    "TooManyUnknownsError",
    "TraceEvent",
    "UnknownConceptError",
    "UnknownWordError",
    "Violation",
    "acquire_syntax",
    "classify_unknown",
    "enumerate_bruteforce",
    "filter_by_inventory",
    "generalize",
    "infer_unknowns",
    "linkage_records",
    "match",
    "parse",
    "parse_lexicon",
    "parse_semlex",
    "prune_known",
    "refine",
    "render_diagram",
    "render_trace",
    "serialize_lexicon",
    "serialize_semlex",
    "tag_sentence",
    "validate",
]
