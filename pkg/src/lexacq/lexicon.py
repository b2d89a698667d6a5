"""Connector lexicon: core value types and the lexicon text format.

A word's syntactic behavior is a set of disjuncts.  A disjunct is a pair of
ordered connector lists, written ``((A,Ds) (Ss))``: the left list names links
the word must form with words to its left, the right list with words to its
right.  Within the written left list the first connector links nearest;
within the written right list the first connector links farthest.

File format, one entry per head (entries may span lines, ``#`` to end of
line is a comment)::

    car, corn, condor: ((A,Ds,Os) ( )) | ((Ds) (Ss))
    the: (( ) (D))

Lexicon values are immutable; every operation returns a new value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

_CONNECTOR_RE = re.compile(r"([A-Z]+)([a-z]*)\Z")
_WORD_RE = re.compile(r"[a-z]+(?:'[a-z]+)*\Z")


class LexiconError(ValueError):
    """Malformed lexicon text or an invalid lexicon operation."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


@dataclass(frozen=True, order=True)
class Connector:
    """An uppercase base name plus an optional lowercase subscript."""

    base: str
    subscript: str = ""

    def __post_init__(self):
        if not self.base or not self.base.isupper() or not self.base.isalpha():
            raise LexiconError("bad connector base %r" % (self.base,))
        if self.subscript and not (
            self.subscript.islower() and self.subscript.isalpha()
        ):
            raise LexiconError("bad connector subscript %r" % (self.subscript,))

    @classmethod
    def parse(cls, text: str) -> "Connector":
        m = _CONNECTOR_RE.match(text)
        if not m:
            raise LexiconError("bad connector %r" % (text,))
        return cls(m.group(1), m.group(2))

    def __str__(self) -> str:
        return self.base + self.subscript


def _side_str(conns: tuple) -> str:
    if not conns:
        return "( )"
    return "(" + ",".join(str(c) for c in conns) + ")"


@dataclass(frozen=True)
class Disjunct:
    """A pair of ordered connector lists, stored in written order."""

    left: tuple[Connector, ...]
    right: tuple[Connector, ...]

    def __post_init__(self):
        # normalize lists passed in as other iterables
        if not isinstance(self.left, tuple):
            object.__setattr__(self, "left", tuple(self.left))
        if not isinstance(self.right, tuple):
            object.__setattr__(self, "right", tuple(self.right))

    def __str__(self) -> str:
        return "(%s %s)" % (_side_str(self.left), _side_str(self.right))

    @property
    def connector_count(self) -> int:
        return len(self.left) + len(self.right)


EMPTY_DISJUNCT = Disjunct((), ())


class Lexicon:
    """Immutable mapping from word to its ordered disjunct sequence."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[str, Iterable[Disjunct]]):
        table: dict[str, tuple[Disjunct, ...]] = {}
        for word, disjuncts in entries.items():
            if not _WORD_RE.match(word):
                raise LexiconError("bad word %r" % (word,))
            ds = tuple(disjuncts)
            if not ds:
                # a defined word must carry at least one disjunct; absence of
                # a word is expressed by leaving it out entirely
                raise LexiconError("word %r has no disjuncts" % (word,))
            if len(set(ds)) != len(ds):
                raise LexiconError("duplicate disjunct for %r" % (word,))
            table[word] = ds
        self._entries = table

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return "Lexicon(%d words)" % len(self._entries)

    def words(self) -> list[str]:
        return sorted(self._entries)

    def lookup(self, word: str) -> Optional[tuple[Disjunct, ...]]:
        """The word's disjuncts in entry order, or None if absent."""
        return self._entries.get(word)

    def inventory(self) -> tuple[Disjunct, ...]:
        """Every distinct disjunct in the lexicon, ordered by display form."""
        return tuple(sorted({d for ds in self._entries.values() for d in ds},
                            key=str))

    def carriers(self, disjunct: Disjunct) -> tuple[str, ...]:
        """Words whose entry contains the given disjunct."""
        return tuple(sorted(w for w, ds in self._entries.items()
                            if disjunct in ds))

    def add(self, word: str, disjuncts: Iterable[Disjunct]) -> "Lexicon":
        """A new lexicon whose entry for word is the union, existing first."""
        new = list(disjuncts)
        if not new and word not in self._entries:
            raise LexiconError("word %r has no disjuncts" % (word,))
        merged = list(self._entries.get(word, ()))
        for d in new:
            if d not in merged:
                merged.append(d)
        table = dict(self._entries)
        table[word] = tuple(merged)
        out = Lexicon.__new__(Lexicon)
        out._entries = table
        return out


# --- text format ---------------------------------------------------------

_TOKEN_RE = re.compile(r"[A-Za-z0-9'_]+|[():,|;=]")


def _scan(text: str):
    """Yield (token, line) pairs, skipping whitespace and # comments."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        hash_at = line.find("#")
        if hash_at != -1:
            line = line[:hash_at]
        pos = 0
        while pos < len(line):
            ch = line[pos]
            if ch.isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise LexiconError("unexpected character %r" % ch, lineno)
            yield m.group(0), lineno
            pos = m.end()


class _Tokens:
    """A tiny LL(1) cursor over scanned tokens."""

    def __init__(self, text: str):
        self._items = list(_scan(text))
        self._index = 0
        self.last_line = self._items[-1][1] if self._items else 1

    def peek(self) -> Optional[str]:
        if self._index < len(self._items):
            return self._items[self._index][0]
        return None

    @property
    def line(self) -> int:
        if self._index < len(self._items):
            return self._items[self._index][1]
        return self.last_line

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise LexiconError("unexpected end of input", self.last_line)
        self._index += 1
        return tok

    def expect(self, token: str) -> None:
        line = self.line
        got = self.take()
        if got != token:
            raise LexiconError("expected %r, got %r" % (token, got), line)


def _parse_connector_list(toks: _Tokens, connector_parser) -> tuple:
    toks.expect("(")
    conns = []
    if toks.peek() == ")":
        toks.take()
        return ()
    while True:
        line = toks.line
        tok = toks.take()
        if tok in "():,|":
            raise LexiconError("expected connector, got %r" % tok, line)
        try:
            conns.append(connector_parser(tok))
        except LexiconError as exc:
            raise LexiconError(str(exc), line) from None
        nxt = toks.take()
        if nxt == ")":
            break
        if nxt != ",":
            raise LexiconError("expected ',' or ')', got %r" % nxt, line)
    return tuple(conns)


def parse_disjunct_body(toks: _Tokens, connector_parser=Connector.parse):
    """Parse ``((...)(...))`` from a token cursor.  Shared with the tagged
    lexicon format, which passes its own connector parser."""
    toks.expect("(")
    left = _parse_connector_list(toks, connector_parser)
    right = _parse_connector_list(toks, connector_parser)
    toks.expect(")")
    return left, right


def parse_lexicon(text: str) -> Lexicon:
    """Parse lexicon text.  Raises LexiconError with a line number."""
    toks = _Tokens(text)
    entries: dict[str, list[Disjunct]] = {}
    while toks.peek() is not None:
        # head: word (, word)* ':'
        head = []
        while True:
            line = toks.line
            word = toks.take()
            if not _WORD_RE.match(word):
                raise LexiconError("expected word, got %r" % word, line)
            if word in entries:
                raise LexiconError("duplicate definition of %r" % word, line)
            if word in head:
                raise LexiconError("word %r repeated in head" % word, line)
            head.append(word)
            sep = toks.take()
            if sep == ":":
                break
            if sep != ",":
                raise LexiconError("expected ',' or ':', got %r" % sep, line)
        # disjuncts: disjunct ('|' disjunct)*
        disjuncts: list[Disjunct] = []
        while True:
            line = toks.line
            left, right = parse_disjunct_body(toks)
            d = Disjunct(left, right)
            if d in disjuncts:
                raise LexiconError(
                    "duplicate disjunct %s for %s" % (d, ", ".join(head)), line)
            disjuncts.append(d)
            if toks.peek() == "|":
                toks.take()
                continue
            break
        for word in head:
            entries[word] = list(disjuncts)
    return Lexicon(entries)


def serialize_lexicon(lexicon: Lexicon) -> str:
    """Render one word per line, words in lexicographic order."""
    lines = []
    for word in lexicon.words():
        ds = lexicon.lookup(word)
        lines.append("%s: %s" % (word, " | ".join(str(d) for d in ds)))
    return "\n".join(lines) + ("\n" if lines else "")
