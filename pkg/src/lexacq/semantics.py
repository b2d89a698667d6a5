"""Semantic tagging, generalization, and unknown-word classification.

Concepts live in two separate tree hierarchies (nouns and verbs) whose
leaves are words.  Parsing fully-known sentences tags each noun/verb
connector with the word it linked to; repeated observations generalize by
replacing tags with least common subsumers; an unknown word is classified
by asking which generalized usages of its linked known words fit the rest
of the sentence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .lexicon import (Connector, Disjunct, Lexicon, LexiconError, _Tokens,
                      parse_disjunct_body)
from .linker import Linkage, UnknownWordError, connector_assignment, match
from .syntax import acquire_syntax

_NAME_RE = re.compile(r"[a-z]+(?:'[a-z]+)*\Z")


class HierarchyError(ValueError):
    """Malformed hierarchy text or inconsistent hierarchy use."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class UnknownConceptError(LookupError):
    """A name is not a node of the hierarchy."""


class NoSemanticEvidenceError(LookupError):
    """No linked known word carries tagged usages to classify against."""


# --- concept hierarchies ----------------------------------------------------


@dataclass(frozen=True)
class ConceptHierarchy:
    """A tree of concepts; children are more specific than parents."""

    kind: str  # noun | verb
    root: str
    parent: Mapping[str, str]  # child -> parent; root has no entry
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parent", dict(self.parent))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.kind not in ("noun", "verb"):
            raise HierarchyError("bad hierarchy kind %r" % (self.kind,))

    @classmethod
    def parse(cls, text: str, kind: str) -> "ConceptHierarchy":
        """One `parent > child` edge per line; the first line's parent is
        the root.  `#` starts a comment."""
        parent: dict[str, str] = {}
        edges: list[tuple[str, str]] = []
        root = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ">" not in line:
                raise HierarchyError("expected 'parent > child'", lineno)
            p, _, c = (part.strip() for part in line.partition(">"))
            for name in (p, c):
                if not _NAME_RE.match(name):
                    raise HierarchyError("bad concept name %r" % name, lineno)
            if root is None:
                root = p
            known = set(parent) | {root}
            if p not in known:
                raise HierarchyError(
                    "parent %r not introduced yet" % p, lineno)
            if c in known:
                raise HierarchyError(
                    "%r already has a place in the tree" % c, lineno)
            parent[c] = p
            edges.append((p, c))
        if root is None:
            raise HierarchyError("empty hierarchy")
        return cls(kind, root, parent, tuple(edges))

    def serialize(self) -> str:
        return "".join("%s > %s\n" % e for e in self.edges)

    def nodes(self) -> frozenset:
        return frozenset(self.parent) | {self.root}

    def __contains__(self, name: str) -> bool:
        return name == self.root or name in self.parent

    def require(self, name: str) -> None:
        if name not in self:
            raise UnknownConceptError(
                "%r is not a %s concept" % (name, self.kind))

    def is_leaf(self, name: str) -> bool:
        self.require(name)
        return name not in {p for p, _ in self.edges}

    def ancestors(self, name: str) -> list:
        """name and its ancestors up to the root, nearest first."""
        self.require(name)
        chain = [name]
        while chain[-1] != self.root:
            chain.append(self.parent[chain[-1]])
        return chain

    def subsumes(self, a: str, b: str) -> bool:
        """True iff a is b or an ancestor of b."""
        self.require(a)
        return a in self.ancestors(b)

    def lcs(self, a: str, b: str) -> str:
        """Deepest node subsuming both a and b."""
        above_a = set(self.ancestors(a))
        for node in self.ancestors(b):
            if node in above_a:
                return node
        return self.root


@dataclass(frozen=True)
class ConceptHierarchies:
    nouns: ConceptHierarchy
    verbs: ConceptHierarchy

    def get(self, kind: str) -> ConceptHierarchy:
        if kind == "noun":
            return self.nouns
        if kind == "verb":
            return self.verbs
        raise HierarchyError("bad hierarchy kind %r" % (kind,))

    def kind_of(self, name: str) -> Optional[str]:
        """Which hierarchy a name belongs to; None if neither."""
        in_nouns = name in self.nouns
        in_verbs = name in self.verbs
        if in_nouns and in_verbs:
            raise HierarchyError(
                "%r appears in both hierarchies" % (name,))
        if in_nouns:
            return "noun"
        if in_verbs:
            return "verb"
        return None

    def leaf_kind_of(self, word: str) -> Optional[str]:
        """Which hierarchy the word is a leaf of; None if not a leaf."""
        kind = self.kind_of(word)
        if kind is not None and self.get(kind).is_leaf(word):
            return kind
        return None


# --- tagged lexical entries --------------------------------------------------

Slot = tuple  # ("left" | "right", index)


@dataclass(frozen=True)
class SemanticTag:
    value: str
    kind: str  # noun | verb


def _slot_key(slot: Slot):
    side, index = slot
    return (0 if side == "left" else 1, index)


@dataclass(frozen=True)
class TaggedDisjunct:
    """A disjunct whose connectors may carry tags naming what they linked
    to, plus the number of merged observations supporting it."""

    shape: Disjunct
    tags: tuple  # ((slot, SemanticTag), ...) canonically ordered
    support: int = 1

    def __post_init__(self):
        items = sorted(dict(self.tags).items(), key=lambda kv: _slot_key(kv[0]))
        object.__setattr__(self, "tags", tuple(items))
        for (side, index), _tag in self.tags:
            conns = self.shape.left if side == "left" else self.shape.right
            if side not in ("left", "right") or not 0 <= index < len(conns):
                raise ValueError("tag slot (%r, %r) outside shape %s"
                                 % (side, index, self.shape))
        if self.support < 1:
            raise ValueError("support must be positive")

    def tag_at(self, side: str, index: int) -> Optional[SemanticTag]:
        for slot, tag in self.tags:
            if slot == (side, index):
                return tag
        return None

    def tagged_slots(self) -> frozenset:
        return frozenset(slot for slot, _ in self.tags)

    def same_observation(self, other: "TaggedDisjunct") -> bool:
        return self.shape == other.shape and self.tags == other.tags

    def _side_str(self, side: str) -> str:
        conns = self.shape.left if side == "left" else self.shape.right
        if not conns:
            return "( )"
        parts = []
        for i, c in enumerate(conns):
            tag = self.tag_at(side, i)
            parts.append(str(c) + ("_" + tag.value if tag else ""))
        return "(" + ",".join(parts) + ")"

    def __str__(self) -> str:
        return "(%s %s)" % (self._side_str("left"), self._side_str("right"))


class SemanticLexicon:
    """Immutable map from word to its ordered tagged observations."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Mapping[str, Iterable[TaggedDisjunct]]]
                 = None):
        table: dict[str, tuple[TaggedDisjunct, ...]] = {}
        for word, obs in (entries or {}).items():
            table[word] = tuple(obs)
        self._entries = table

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemanticLexicon):
            return NotImplemented
        return self._entries == other._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __repr__(self) -> str:
        return "SemanticLexicon(%d words)" % len(self._entries)

    def words(self) -> list:
        return sorted(self._entries)

    def lookup(self, word: str) -> tuple:
        return self._entries.get(word, ())

    def observe(self, word: str, obs: TaggedDisjunct) -> "SemanticLexicon":
        """Add one observation; identical observations pool their support."""
        existing = list(self._entries.get(word, ()))
        for i, prev in enumerate(existing):
            if prev.same_observation(obs):
                existing[i] = TaggedDisjunct(
                    prev.shape, prev.tags, prev.support + obs.support)
                break
        else:
            existing.append(obs)
        table = dict(self._entries)
        table[word] = tuple(existing)
        out = SemanticLexicon.__new__(SemanticLexicon)
        out._entries = table
        return out


# --- tagging and generalization ----------------------------------------------


def tag_sentence(
    linkage: Linkage,
    hiers: ConceptHierarchies,
    semlex: SemanticLexicon,
    lexicon: Optional[Lexicon] = None,
) -> SemanticLexicon:
    """Record, for every noun/verb word of a valid linkage, its disjunct
    with each connector tagged by the noun/verb it linked to.  Words absent
    from both hierarchies (determiners, adjectives) are neither tagged nor
    used as tags."""
    if lexicon is not None:
        for i, w in enumerate(linkage.words):
            if w not in lexicon:
                raise UnknownWordError(w, i)
    assignment = connector_assignment(linkage)
    by_position: dict[int, dict] = {}
    for (pos, side, index), link in assignment.items():
        by_position.setdefault(pos, {})[(side, index)] = link

    out = semlex
    for pos, word in enumerate(linkage.words):
        if hiers.leaf_kind_of(word) is None:
            continue
        tags = {}
        for slot, link in by_position.get(pos, {}).items():
            other = link.right if link.left == pos else link.left
            other_word = linkage.words[other]
            kind = hiers.leaf_kind_of(other_word)
            if kind is not None:
                tags[slot] = SemanticTag(other_word, kind)
        if tags:
            out = out.observe(
                word, TaggedDisjunct(linkage.choices[pos], tuple(tags.items())))
    return out


def _try_merge(a: TaggedDisjunct, b: TaggedDisjunct,
               hiers: ConceptHierarchies) -> Optional[TaggedDisjunct]:
    """Merge two observations when every tagged slot generalizes strictly
    below the root; None when they must stay separate."""
    if a.shape != b.shape or a.tagged_slots() != b.tagged_slots():
        return None
    merged = {}
    for slot, tag_a in a.tags:
        tag_b = b.tag_at(*slot)
        if tag_a.kind != tag_b.kind:
            return None
        h = hiers.get(tag_a.kind)
        general = h.lcs(tag_a.value, tag_b.value)
        if general == h.root:
            return None
        merged[slot] = SemanticTag(general, tag_a.kind)
    return TaggedDisjunct(a.shape, tuple(merged.items()),
                          a.support + b.support)


def generalize(semlex: SemanticLexicon,
               hiers: ConceptHierarchies) -> SemanticLexicon:
    """Greedy pairwise merging per word, insertion order, to a fixpoint."""
    table = {}
    for word in semlex.words():
        items = list(semlex.lookup(word))
        merged_any = True
        while merged_any:
            merged_any = False
            for i in range(len(items)):
                for j in range(i + 1, len(items)):
                    merged = _try_merge(items[i], items[j], hiers)
                    if merged is not None:
                        items[i] = merged
                        del items[j]
                        merged_any = True
                        break
                if merged_any:
                    break
        table[word] = tuple(items)
    return SemanticLexicon(table)


# --- classification -----------------------------------------------------------


@dataclass(frozen=True)
class Evidence:
    """Why a concept applies: the linked word's generalized usage and the
    subsumption facts (filler word, subsuming tag) that let it fit."""

    word: str
    usage: TaggedDisjunct
    facts: tuple  # ((filler, tag value), ...)


def _shape_compatible(usage: Disjunct, chosen: Disjunct) -> bool:
    if (len(usage.left) != len(chosen.left)
            or len(usage.right) != len(chosen.right)):
        return False
    return all(match(a, b) for a, b in
               zip(usage.left + usage.right, chosen.left + chosen.right))


def classify_unknown(
    words: Sequence[str],
    unknown_pos: Optional[int],
    lexicon: Lexicon,
    semlex: SemanticLexicon,
    hiers: ConceptHierarchies,
    *,
    max_unknowns: int = 2,
    filter_on: bool = True,
) -> list:
    """Concepts the unknown word could denote, with evidence.

    Runs syntactic acquisition, takes the first witness linkage, and for
    each known word linked to the unknown position checks its generalized
    usages of matching shape: a usage applies when every other tagged
    slot's actual filler is subsumed by that slot's tag; the tag at the
    slot linking to the unknown is then emitted.  Returns (concept,
    Evidence) pairs deduplicated by concept, deterministic order.
    Raises NoSemanticEvidenceError when no linked word has tagged usages.
    """
    result = acquire_syntax(list(words), lexicon,
                            max_unknowns=max_unknowns, filter_on=filter_on)
    if unknown_pos is None:
        if len(result.unknown_positions) != 1:
            raise ValueError("unknown_pos required unless exactly one "
                             "unknown word is present")
        unknown_pos = result.unknown_positions[0]
    if unknown_pos not in result.unknown_positions:
        raise ValueError("position %d is not unknown" % unknown_pos)
    witness = result.linkages[0]
    assignment = connector_assignment(witness)
    slot_of_link: dict[tuple, Slot] = {}
    for (pos, side, index), link in assignment.items():
        slot_of_link[(pos, link)] = (side, index)

    found: list = []
    seen_concepts = set()
    any_tagged = False
    neighbors = []
    for link in witness.links:
        if link.left == unknown_pos:
            neighbors.append((link.right, link))
        elif link.right == unknown_pos:
            neighbors.append((link.left, link))
    neighbors.sort()

    for q, link in neighbors:
        usages = semlex.lookup(witness.words[q])
        if any(u.tags for u in usages):
            any_tagged = True
        side, index = slot_of_link[(q, link)]
        for usage in usages:
            if not _shape_compatible(usage.shape, witness.choices[q]):
                continue
            emitted = usage.tag_at(side, index)
            if emitted is None:
                continue
            facts = []
            fits = True
            for slot, tag in usage.tags:
                if slot == (side, index):
                    continue
                other_link = assignment[(q,) + slot]
                other = (other_link.right if other_link.left == q
                         else other_link.left)
                filler = witness.words[other]
                h = hiers.get(tag.kind)
                if filler not in h or not h.subsumes(tag.value, filler):
                    fits = False
                    break
                facts.append((filler, tag.value))
            if fits and emitted.value not in seen_concepts:
                seen_concepts.add(emitted.value)
                found.append((emitted.value,
                              Evidence(witness.words[q], usage, tuple(facts))))
    if not any_tagged:
        raise NoSemanticEvidenceError(
            "no linked word has tagged usages for %r"
            % witness.words[unknown_pos])
    return found


def refine(existing: Iterable[str], new_obs: Iterable[str],
           h: ConceptHierarchy) -> set:
    """Reconcile concept sets from separate encounters of the same word.

    Keeps each concept standing in a subsumption relation (either
    direction) with some member of every non-empty observation set,
    minimized to the most specific; when nothing is compatible, falls back
    to the minimized least-common-subsumer set over one pick per set."""
    groups = [set(g) for g in (existing, new_obs) if set(g)]
    for group in groups:
        for c in group:
            h.require(c)
    if not groups:
        return set()
    candidates = set().union(*groups)
    kept = {
        c for c in candidates
        if all(any(h.subsumes(m, c) or h.subsumes(c, m) for m in g)
               for g in groups)
    }
    if not kept:
        picks = groups[0]
        for group in groups[1:]:
            picks = {h.lcs(a, b) for a in picks for b in group}
        kept = picks
    return {c for c in kept
            if not any(d != c and h.subsumes(c, d) for d in kept)}


# --- tagged-lexicon text format ------------------------------------------------


def _parse_tagged_connector(token: str):
    if "_" in token:
        conn_text, _, tag_name = token.partition("_")
        if not _NAME_RE.match(tag_name):
            raise LexiconError("bad tag name %r" % (tag_name,))
        return Connector.parse(conn_text), tag_name
    return Connector.parse(token), None


def parse_semlex(text: str, hiers: ConceptHierarchies) -> SemanticLexicon:
    """Parse a tagged lexicon.  Tags are `_name` connector suffixes whose
    hierarchy kind is resolved against `hiers`; `;support=N` follows a
    disjunct.  Raises LexiconError with a line number."""
    toks = _Tokens(text)
    out = SemanticLexicon()
    seen_words = set()
    while toks.peek() is not None:
        line = toks.line
        word = toks.take()
        if not _NAME_RE.match(word):
            raise LexiconError("bad word %r" % (word,), line)
        if word in seen_words:
            raise LexiconError("duplicate entry for %r" % (word,), line)
        seen_words.add(word)
        toks.expect(":")
        while True:
            line = toks.line
            left, right = parse_disjunct_body(toks, _parse_tagged_connector)
            shape = Disjunct(tuple(c for c, _ in left),
                             tuple(c for c, _ in right))
            tags = {}
            for side, conns in (("left", left), ("right", right)):
                for i, (_c, tag_name) in enumerate(conns):
                    if tag_name is None:
                        continue
                    try:
                        kind = hiers.kind_of(tag_name)
                    except HierarchyError as exc:
                        raise LexiconError(str(exc), line) from None
                    if kind is None:
                        raise LexiconError(
                            "tag %r is in neither hierarchy" % tag_name, line)
                    tags[(side, i)] = SemanticTag(tag_name, kind)
            support = 1
            if toks.peek() == ";":
                toks.take()
                toks.expect("support")
                toks.expect("=")
                count_line = toks.line
                count_text = toks.take()
                if not count_text.isdigit() or int(count_text) < 1:
                    raise LexiconError(
                        "bad support count %r" % count_text, count_line)
                support = int(count_text)
            out = out.observe(
                word, TaggedDisjunct(shape, tuple(tags.items()), support))
            if toks.peek() != "|":
                break
            toks.take()
    return out


def serialize_semlex(semlex: SemanticLexicon) -> str:
    """One word per line, observations in entry order with their support."""
    lines = []
    for word in semlex.words():
        parts = ["%s ;support=%d" % (obs, obs.support)
                 for obs in semlex.lookup(word)]
        lines.append("%s: %s" % (word, " | ".join(parts)))
    return "\n".join(lines) + "\n" if lines else ""
