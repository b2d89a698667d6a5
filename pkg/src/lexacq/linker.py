"""Planar linkage solving over connector lexicons.

A linkage for a sentence picks one disjunct per word and a set of links so
that links do not cross (planarity), the linkage graph is connected, no
word pair carries more than one link (exclusion), every connector is used by
exactly one link, and each word's links occur in the positional order its
connector lists dictate.  Cycles are allowed.

The solver (`parse`) walks the sentence left to right keeping a stack of
open rightward connectors; planarity is exactly the stack discipline, and
the ordering rule makes the link set deterministic per disjunct choice.
`enumerate_bruteforce` is an independent oracle: it tries every disjunct
combination and every pairing of connector occurrences, keeping candidates
that pass `validate`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .lexicon import Connector, Disjunct, Lexicon, LexiconError

ORACLE_CAP_DEFAULT = 7


class UnknownWordError(LookupError):
    """A sentence word is absent from the lexicon."""

    def __init__(self, word: str, position: int):
        super().__init__("unknown word %r at position %d" % (word, position))
        self.word = word
        self.position = position


class OracleCapError(ValueError):
    """Sentence is longer than the brute-force enumerator allows."""


def match(c1: Connector, c2: Connector) -> bool:
    """Connectors link iff bases agree and subscripts agree or one is empty."""
    return c1.base == c2.base and (
        not c1.subscript or not c2.subscript or c1.subscript == c2.subscript
    )


def link_label(c1: Connector, c2: Connector) -> str:
    """Display form of the more specific of two matched connectors."""
    return str(c1) if len(c1.subscript) >= len(c2.subscript) else str(c2)


@dataclass(frozen=True, order=True)
class Link:
    left: int
    right: int
    label: str

    def __post_init__(self):
        if not 0 <= self.left < self.right:
            raise ValueError("bad link positions (%r, %r)" % (self.left, self.right))


@dataclass(frozen=True)
class Linkage:
    words: tuple[str, ...]
    choices: tuple[Disjunct, ...]
    links: tuple[Link, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "choices", tuple(self.choices))
        object.__setattr__(self, "links", tuple(sorted(self.links)))
        if len(self.words) != len(self.choices):
            raise ValueError("one disjunct choice per word required")

    def link_set(self) -> set[tuple[int, int, str]]:
        return {(l.left, l.right, l.label) for l in self.links}


@dataclass(frozen=True)
class Violation:
    rule: str  # planarity | connectivity | exclusion | ordering | saturation
    positions: tuple[int, ...]
    detail: str = ""


# --- solver ---------------------------------------------------------------


@dataclass
class Solution:
    """One satisfying assignment found by `solve`."""

    choice_indices: tuple
    choices: tuple[Disjunct, ...]
    links: tuple[tuple[int, int, str], ...]
    synthesized: dict[int, Disjunct] = field(default_factory=dict)


@dataclass
class SolveOutcome:
    solutions: list[Solution]
    nodes: int = 0
    causes: Optional[dict] = None  # (pos, disjunct) -> set of failure kinds


def _connected(n: int, links) -> bool:
    if n <= 1:
        return True
    adj: dict[int, list[int]] = {}
    for q, p, _ in links:
        adj.setdefault(q, []).append(p)
        adj.setdefault(p, []).append(q)
    seen = {0}
    frontier = [0]
    while frontier:
        for nxt in adj.get(frontier.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == n


def solve(
    words: Sequence[str],
    candidates: Sequence[Optional[Sequence[Disjunct]]],
    unknown: frozenset[int] = frozenset(),
    collect_causes: bool = False,
) -> SolveOutcome:
    """Enumerate every valid linkage by depth-first search.

    `candidates[p]` is the disjunct sequence tried at position p; positions
    in `unknown` are wildcards that may absorb any open rightward connector
    and may open connectors for later known words to absorb.  A wildcard
    never links to another wildcard: no known requirement would justify the
    link.  When `collect_causes` is set, each known (position, disjunct)
    pair taking part in a failed branch is tagged with the failure kinds it
    witnessed (ordering, exclusion, connectivity).
    """
    n = len(words)
    out = SolveOutcome([], causes={} if collect_causes else None)
    stack: list = []  # (source position, Connector or None, serial)
    links: list = []
    applied: list = []  # (pos, disjunct) pairs on the current path
    synth_left: dict[int, tuple] = {}
    synth_pushes: dict[int, list] = {}
    resolution: dict[int, Connector] = {}
    counter = itertools.count()

    # a wildcard may open at most as many connectors as the words after it
    # could ever absorb
    push_cap = [0] * (n + 1)
    for p in range(n - 1, -1, -1):
        cap = push_cap[p + 1]
        if p not in unknown and candidates[p]:
            cap += max(len(d.left) for d in candidates[p])
        push_cap[p] = cap

    def blame(kind: str, extra=None) -> None:
        if out.causes is None:
            return
        for key in applied:
            out.causes.setdefault(key, set()).add(kind)
        if extra is not None:
            out.causes.setdefault(extra, set()).add(kind)

    def record_solution() -> None:
        by_pos = dict(applied)
        choices = []
        indices = []
        synthesized = {}
        for p in range(n):
            if p in unknown:
                d = Disjunct(
                    synth_left[p],
                    tuple(resolution[s] for s in synth_pushes.get(p, ())),
                )
                synthesized[p] = d
                choices.append(d)
                indices.append(None)
            else:
                d = by_pos[p]
                choices.append(d)
                indices.append(candidates[p].index(d))
        out.solutions.append(
            Solution(tuple(indices), tuple(choices), tuple(sorted(links)),
                     synthesized)
        )

    def apply_known(p: int, d: Disjunct):
        """Pop for d.left and push d.right; None on failure, else the list
        of wildcard serials this application resolved."""
        m = len(d.left)
        if m > len(stack):
            blame("ordering", (p, d))
            return None
        seen = set()
        new_links = []
        resolved = []
        for i, a in enumerate(d.left):
            src, conn, ser = stack[-1 - i]
            if src in seen:
                blame("exclusion", (p, d))
                return None
            seen.add(src)
            if conn is None:
                resolved.append(ser)
                resolution[ser] = a
                new_links.append((src, p, str(a)))
            elif match(conn, a):
                new_links.append((src, p, link_label(conn, a)))
            else:
                blame("ordering", (p, d))
                return None
        del stack[len(stack) - m :]
        links.extend(new_links)
        for b in d.right:
            stack.append((p, b, next(counter)))
        return resolved

    def at(p: int) -> None:
        if p == n:
            if stack:
                blame("ordering")
            elif not _connected(n, links):
                blame("connectivity")
            else:
                record_solution()
            return
        saved_stack = stack[:]
        saved_links = len(links)
        if p in unknown:
            max_k = 0
            seen = set()
            while max_k < len(stack):
                src, conn, _ = stack[-1 - max_k]
                if conn is None or src in seen:
                    break
                seen.add(src)
                max_k += 1
            for k in range(max_k + 1):
                popped = [saved_stack[-1 - i] for i in range(k)]
                synth_left[p] = tuple(c for _, c, _ in popped)
                for j in range(push_cap[p + 1] + 1):
                    out.nodes += 1
                    del stack[:]
                    stack.extend(saved_stack[: len(saved_stack) - k])
                    del links[saved_links:]
                    links.extend((src, p, str(c)) for src, c, _ in popped)
                    serials = [next(counter) for _ in range(j)]
                    synth_pushes[p] = serials
                    stack.extend((p, None, s) for s in serials)
                    at(p + 1)
            del stack[:]
            stack.extend(saved_stack)
            del links[saved_links:]
            synth_left.pop(p, None)
            synth_pushes.pop(p, None)
            return
        for d in candidates[p]:
            out.nodes += 1
            resolved = apply_known(p, d)
            if resolved is None:
                continue
            applied.append((p, d))
            at(p + 1)
            applied.pop()
            for ser in resolved:
                del resolution[ser]
            del stack[:]
            stack.extend(saved_stack)
            del links[saved_links:]

    at(0)
    return out


def parse(words: Sequence[str], lexicon: Lexicon) -> list[Linkage]:
    """All valid linkages, in canonical order (choice indices, then links)."""
    words = tuple(words)
    candidates = []
    for i, w in enumerate(words):
        ds = lexicon.lookup(w)
        if ds is None:
            raise UnknownWordError(w, i)
        candidates.append(ds)
    outcome = solve(words, candidates)
    ordered = sorted(outcome.solutions,
                     key=lambda s: (s.choice_indices, s.links))
    return [
        Linkage(words, sol.choices, tuple(Link(*t) for t in sol.links))
        for sol in ordered
    ]


# --- validation -----------------------------------------------------------


def _forced_pairing(linkage: Linkage):
    """Slot assignment the ordering rule dictates: a word's leftward links
    pair with its left list nearest first, its rightward links with its
    right list farthest first."""
    n = len(linkage.words)
    in_links: list[list[Link]] = [[] for _ in range(n)]
    out_links: list[list[Link]] = [[] for _ in range(n)]
    for link in linkage.links:
        out_links[link.left].append(link)
        in_links[link.right].append(link)
    for p in range(n):
        in_links[p].sort(key=lambda l: -l.left)
        out_links[p].sort(key=lambda l: -l.right)
    consistent = [
        len(in_links[p]) == len(linkage.choices[p].left)
        and len(out_links[p]) == len(linkage.choices[p].right)
        for p in range(n)
    ]
    return in_links, out_links, consistent


def connector_assignment(linkage: Linkage) -> dict[tuple, Link]:
    """Map (position, side, index) -> Link for a valid linkage."""
    in_links, out_links, consistent = _forced_pairing(linkage)
    if not all(consistent):
        raise ValueError("linkage does not saturate its disjuncts")
    assignment = {}
    for p in range(len(linkage.words)):
        for i, link in enumerate(in_links[p]):
            assignment[(p, "left", i)] = link
        for j, link in enumerate(out_links[p]):
            assignment[(p, "right", j)] = link
    return assignment


def _label_connector(label: str):
    """The link label parsed back into a connector; None for labels no
    connector could display."""
    try:
        return Connector.parse(label)
    except LexiconError:
        return None


def _slot_serves(slot: Connector, label_conn) -> bool:
    """Can a connector written at a word justify a link with this label?"""
    return label_conn is not None and match(slot, label_conn)


def _bijection_exists(slots, label_conns) -> bool:
    """Is there any slot assignment serving every incident link's label?"""
    if len(slots) != len(label_conns):
        return False
    if not slots:
        return True
    for perm in itertools.permutations(range(len(slots))):
        if all(_slot_serves(slots[slot_i], lc)
               for lc, slot_i in zip(label_conns, perm)):
            return True
    return False


def validate(linkage: Linkage) -> list[Violation]:
    """Violated linkage rules, empty for a valid linkage."""
    violations: list[Violation] = []
    n = len(linkage.words)
    links = linkage.links
    for link in links:
        if link.right >= n:
            raise ValueError("link %r outside sentence" % (link,))

    # exclusion: at most one link per word pair
    pair_counts: dict[tuple[int, int], int] = {}
    for link in links:
        key = (link.left, link.right)
        pair_counts[key] = pair_counts.get(key, 0) + 1
    for pair, count in sorted(pair_counts.items()):
        if count > 1:
            violations.append(
                Violation("exclusion", pair, "%d links between pair" % count))

    # planarity: no two links may cross
    for l1, l2 in itertools.combinations(sorted(links), 2):
        a, b = l1.left, l1.right
        c, d = l2.left, l2.right
        if a < c < b < d or c < a < d < b:
            violations.append(
                Violation("planarity", (a, b, c, d),
                          "links (%d,%d) and (%d,%d) cross" % (a, b, c, d)))

    # connectivity
    if not _connected(n, [(l.left, l.right, l.label) for l in links]):
        comp = {0}
        adj: dict[int, set[int]] = {}
        for l in links:
            adj.setdefault(l.left, set()).add(l.right)
            adj.setdefault(l.right, set()).add(l.left)
        frontier = [0]
        while frontier:
            for nxt in adj.get(frontier.pop(), ()):
                if nxt not in comp:
                    comp.add(nxt)
                    frontier.append(nxt)
        violations.append(
            Violation("connectivity", tuple(sorted(set(range(n)) - comp)),
                      "not reachable from word 0"))

    # saturation and ordering, word by word against incident link labels;
    # the forced pairing is the one the ordering rule dictates
    in_links, out_links, consistent = _forced_pairing(linkage)
    slot_of: dict[tuple[int, Link], Connector] = {}
    clean = [False] * n
    for p in range(n):
        d = linkage.choices[p]
        if not consistent[p]:
            violations.append(
                Violation("saturation", (p,),
                          "word %d has %d links for %d leftward and %d for %d"
                          " rightward connectors"
                          % (p, len(in_links[p]), len(d.left),
                             len(out_links[p]), len(d.right))))
            continue
        failed = False
        for links_here, slots in ((in_links[p], d.left),
                                  (out_links[p], d.right)):
            for link, slot in zip(links_here, slots):
                slot_of[(p, link)] = slot
                if not _slot_serves(slot, _label_connector(link.label)):
                    failed = True
        if not failed:
            clean[p] = True
            continue
        # a reordering that serves every label is an ordering fault; a link
        # no assignment can serve leaves some connector unsatisfied
        left_labels = [_label_connector(l.label) for l in in_links[p]]
        right_labels = [_label_connector(l.label) for l in out_links[p]]
        if (_bijection_exists(list(d.left), left_labels)
                and _bijection_exists(list(d.right), right_labels)):
            violations.append(
                Violation("ordering", (p,),
                          "connectors of word %d are linked out of order" % p))
        else:
            violations.append(
                Violation("saturation", (p,),
                          "a link at word %d matches no connector" % p))

    # a link's label must be exactly what its two connectors display
    for link in links:
        if not (clean[link.left] and clean[link.right]):
            continue
        cl = slot_of[(link.left, link)]
        cr = slot_of[(link.right, link)]
        if not match(cl, cr) or link.label != link_label(cl, cr):
            violations.append(
                Violation("saturation", (link.left, link.right),
                          "label %s of link (%d,%d) is not justified by %s"
                          " and %s" % (link.label, link.left, link.right,
                                       cl, cr)))
    return violations


# --- brute-force oracle ---------------------------------------------------


def enumerate_bruteforce(
    words: Sequence[str], lexicon: Lexicon, cap: int = ORACLE_CAP_DEFAULT
) -> list[Linkage]:
    """Exhaustive reference enumeration: every disjunct combination, every
    pairing of rightward with leftward connector occurrences, filtered by
    `validate`.  Independent of the solver's search; capped for tractability.
    """
    words = tuple(words)
    if len(words) > cap:
        raise OracleCapError(
            "%d words exceeds oracle cap %d" % (len(words), cap))
    entry_lists = []
    for i, w in enumerate(words):
        ds = lexicon.lookup(w)
        if ds is None:
            raise UnknownWordError(w, i)
        entry_lists.append(ds)

    found: dict[tuple, Linkage] = {}
    for indices in itertools.product(*(range(len(ds)) for ds in entry_lists)):
        combo = tuple(entry_lists[p][i] for p, i in enumerate(indices))
        right_occ = [(p, c) for p, d in enumerate(combo) for c in d.right]
        left_occ = [(p, c) for p, d in enumerate(combo) for c in d.left]
        if len(right_occ) != len(left_occ):
            continue  # each link consumes one rightward and one leftward

        def pairings(next_left: int, used: int, acc: list):
            if next_left == len(left_occ):
                yield list(acc)
                return
            lp, lc = left_occ[next_left]
            for r, (rp, rc) in enumerate(right_occ):
                if used & (1 << r) or rp >= lp:
                    continue  # rightward connectors link strictly rightward
                acc.append((rp, rc, lp, lc))
                yield from pairings(next_left + 1, used | (1 << r), acc)
                acc.pop()

        for pairing in pairings(0, 0, []):
            link_objs = tuple(
                Link(rp, lp, link_label(rc, lc)) for rp, rc, lp, lc in pairing
            )
            candidate = Linkage(words, combo, link_objs)
            if validate(candidate):
                continue
            key = (indices, candidate.links)
            if key not in found:
                found[key] = candidate
    return [found[k] for k in sorted(found)]


# --- text renderings ------------------------------------------------------


def render_diagram(linkage: Linkage) -> str:
    """ASCII arc diagram: words on the bottom line separated by single
    spaces, a tick above every linked word, shorter links nested below
    longer ones, each arc labeled with its link label."""
    if validate(linkage):
        raise ValueError("cannot render an invalid linkage")
    words = linkage.words
    cols = []
    at = 0
    for w in words:
        cols.append(at)
        at += len(w) + 1
    words_line = " ".join(words)
    if not linkage.links:
        return words_line

    heights: dict[Link, int] = {}
    for link in sorted(linkage.links, key=lambda l: (l.right - l.left, l.left)):
        inner = [
            h for other, h in heights.items()
            if link.left <= other.left and other.right <= link.right
        ]
        heights[link] = 1 + max(inner, default=0)
    top = max(heights.values())

    width = len(words_line)
    grid = [[" "] * width for _ in range(top)]
    for link, h in heights.items():
        row = top - h
        cl, cr = cols[link.left], cols[link.right]
        for i in range(cl + 1, cr):
            grid[row][i] = "-"
        grid[row][cl] = grid[row][cr] = "+"
        pad = max((cr - cl - 1 - len(link.label)) // 2, 0)
        start = cl + 1 + pad
        for i, ch in enumerate(link.label):
            if start + i < cr:
                grid[row][start + i] = ch
    # carry tall arcs' endpoints down through the rows beneath them
    for link, h in heights.items():
        for h2 in range(1, h):
            row = top - h2
            for c in (cols[link.left], cols[link.right]):
                if grid[row][c] == " ":
                    grid[row][c] = "|"
    tick_row = [" "] * width
    for link in linkage.links:
        tick_row[cols[link.left]] = "|"
        tick_row[cols[link.right]] = "|"
    lines = ["".join(r).rstrip() for r in grid]
    lines.append("".join(tick_row).rstrip())
    lines.append(words_line)
    return "\n".join(lines)


def linkage_records(linkage: Linkage) -> str:
    """Line-oriented machine form: one word line per position, then links."""
    lines = [
        "%d:%s:%s" % (i, w, d)
        for i, (w, d) in enumerate(zip(linkage.words, linkage.choices))
    ]
    lines.extend(
        "link:%d:%d:%s" % (l.left, l.right, l.label) for l in linkage.links
    )
    return "\n".join(lines)
