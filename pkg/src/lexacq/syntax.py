"""Unknown-word syntactic acquisition.

Given a sentence containing words missing from the lexicon, infer the
disjuncts those words must carry for the sentence to have a valid linkage.
The search prunes known words' disjuncts first (counting pass, then a
support pass treating unknowns as wildcards), synthesizes unknown-word
disjuncts from the connectors the surviving known words actually need, and
finally filters hypotheses against the lexicon's disjunct inventory.  Every
elimination and hypothesis is recorded in a replayable trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .lexicon import Disjunct, Lexicon
from .linker import Link, Linkage, SolveOutcome, match, solve


class NoSolutionError(ValueError):
    """No disjunct assignment gives the sentence a valid linkage."""


class TooManyUnknownsError(ValueError):
    """More unknown words than the configured cap."""


@dataclass(frozen=True)
class AcquisitionProblem:
    words: tuple[str, ...]
    known: Mapping[int, tuple[Disjunct, ...]]
    unknown_positions: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "unknown_positions",
                           frozenset(self.unknown_positions))
        object.__setattr__(self, "known", dict(self.known))
        positions = set(range(len(self.words)))
        if set(self.known) | self.unknown_positions != positions or (
            set(self.known) & self.unknown_positions
        ):
            raise ValueError("known and unknown must partition the positions")

    @classmethod
    def from_lexicon(cls, words: Sequence[str], lexicon: Lexicon
                     ) -> "AcquisitionProblem":
        known = {}
        unknown = set()
        for i, w in enumerate(words):
            entry = lexicon.lookup(w)
            if entry is None:
                unknown.add(i)
            else:
                known[i] = entry
        return cls(tuple(words), known, frozenset(unknown))


@dataclass(frozen=True)
class TraceEvent:
    action: str  # eliminate | hypothesize
    position: int
    word: str
    disjunct: Disjunct
    reason: str

    def __str__(self):
        return "%s:%d:%s:%s:%s" % (
            self.action, self.position, self.word, self.disjunct, self.reason)


def render_trace(events: Sequence[TraceEvent]) -> str:
    return "\n".join(str(e) for e in events)


@dataclass
class AcquisitionResult:
    words: tuple[str, ...]
    unknown_positions: tuple[int, ...]
    hypotheses: dict[int, tuple[Disjunct, ...]]  # post-filter projections
    prefilter: dict[int, tuple[Disjunct, ...]]
    pruned_known: dict[int, tuple[Disjunct, ...]]
    joints: tuple[dict, ...]  # position -> Disjunct, one per surviving joint
    linkages: list[Linkage]  # one witness per joint
    novel: bool
    trace: tuple[TraceEvent, ...]
    stats: dict = field(default_factory=dict)

    def acquired_entries(self) -> dict[str, tuple[Disjunct, ...]]:
        """Union of hypotheses per unknown word, in hypothesis order."""
        entries: dict[str, list[Disjunct]] = {}
        for p in self.unknown_positions:
            bucket = entries.setdefault(self.words[p], [])
            for d in self.hypotheses[p]:
                if d not in bucket:
                    bucket.append(d)
        return {w: tuple(ds) for w, ds in entries.items()}


# --- pruning ----------------------------------------------------------------

_CAUSE_PRIORITY = ("ordering", "exclusion", "connectivity")


def _count_reason(side: str, available: int) -> str:
    if available == 0:
        return "%s connector unsatisfiable: no words to the %s" % (side, side)
    word = "word" if available == 1 else "words"
    return "%s connector unsatisfiable: only %d %s to the %s" % (
        side, available, word, side)


def _cause_reason(kinds) -> str:
    for kind in _CAUSE_PRIORITY:
        if kind in kinds:
            return "%s conflict" % kind
    return "ordering conflict"


def _prune(problem: AcquisitionProblem):
    """Two-pass pruning; returns (survivors, trace, solve outcome).

    Pass 1 removes disjuncts needing more words to one side than exist;
    pass 2 keeps exactly the disjuncts used by some valid linkage when
    unknown positions act as wildcards.  Scanning is by position then entry
    order, so the trace replays eliminations deterministically.
    """
    words = problem.words
    n = len(words)
    trace: list[TraceEvent] = []
    survivors: dict[int, list[Disjunct]] = {}
    for p in sorted(problem.known):
        survivors[p] = []
        for d in problem.known[p]:
            if len(d.left) > p:
                trace.append(TraceEvent("eliminate", p, words[p], d,
                                        _count_reason("left", p)))
            elif len(d.right) > n - 1 - p:
                trace.append(TraceEvent("eliminate", p, words[p], d,
                                        _count_reason("right", n - 1 - p)))
            else:
                survivors[p].append(d)

    candidates: list = [None] * n
    for p, ds in survivors.items():
        candidates[p] = tuple(ds)
    outcome = solve(words, candidates, unknown=problem.unknown_positions,
                    collect_causes=True)

    supported = set()
    for sol in outcome.solutions:
        for p in problem.known:
            supported.add((p, sol.choices[p]))
    pruned: dict[int, tuple[Disjunct, ...]] = {}
    for p in sorted(survivors):
        kept = []
        for d in survivors[p]:
            if (p, d) in supported:
                kept.append(d)
            else:
                kinds = outcome.causes.get((p, d), ())
                trace.append(TraceEvent("eliminate", p, words[p], d,
                                        _cause_reason(kinds)))
        pruned[p] = tuple(kept)
    return pruned, trace, outcome


def prune_known(problem: AcquisitionProblem):
    """Surviving disjuncts per known position, plus the elimination trace."""
    pruned, trace, _ = _prune(problem)
    return pruned, trace


# --- hypothesis generation --------------------------------------------------


def _frequency(hyp: Disjunct, lexicon: Lexicon) -> int:
    """Number of lexicon words carrying a disjunct compatible with hyp."""
    count = 0
    for w in lexicon.words():
        if any(_compatible(hyp, d) for d in lexicon.lookup(w)):
            count += 1
    return count


def _compatible(hyp: Disjunct, d: Disjunct) -> bool:
    """Same shape and every connector pair can match."""
    if len(hyp.left) != len(d.left) or len(hyp.right) != len(d.right):
        return False
    return all(
        match(a, b)
        for a, b in zip(hyp.left + hyp.right, d.left + d.right)
    )


def _joints_from(outcome: SolveOutcome, unknown: Sequence[int]):
    """Distinct joint assignments with their witness link sets, in discovery
    order; each joint keeps its canonically smallest witness."""
    joints: dict[tuple, tuple] = {}
    for sol in outcome.solutions:
        key = tuple(sol.synthesized[p] for p in unknown)
        if key not in joints or sol.links < joints[key]:
            joints[key] = sol.links
    return joints


def infer_unknowns(problem: AcquisitionProblem) -> list[dict]:
    """Every joint assignment of synthesized disjuncts to the unknown
    positions admitting a valid linkage.  Raises NoSolutionError when the
    sentence cannot be linked."""
    _, _, outcome = _prune(problem)
    if not outcome.solutions:
        raise NoSolutionError(
            "no valid linkage for %r" % (" ".join(problem.words),))
    unknown = sorted(problem.unknown_positions)
    return [
        dict(zip(unknown, key)) for key in _joints_from(outcome, unknown)
    ]


def filter_by_inventory(hyps: Sequence[Disjunct], lexicon: Lexicon
                        ) -> tuple[Disjunct, ...]:
    """Hypotheses already used by some known word, input order preserved.

    Membership is connector-match compatibility, not structural equality: a
    synthesized ((D) (Ss)) is accepted by an inventory ((Ds) (Ss)).
    """
    inventory = lexicon.inventory()
    return tuple(
        h for h in hyps if any(_compatible(h, d) for d in inventory)
    )


def _witness_linkage(words, pruned, joint, lexicon, substitute: bool
                     ) -> Optional[Linkage]:
    """Re-parse with the joint's disjuncts fixed at the unknown positions.
    When `substitute` is set, each hypothesis is replaced by its compatible
    inventory forms so links carry the lexicon's subscripts."""
    n = len(words)
    candidates: list = [None] * n
    for p in range(n):
        if p in joint:
            h = joint[p]
            if substitute:
                forms = [d for d in lexicon.inventory() if _compatible(h, d)]
                candidates[p] = tuple(forms) or (h,)
            else:
                candidates[p] = (h,)
        else:
            candidates[p] = pruned[p]
    outcome = solve(words, candidates)
    if not outcome.solutions:
        return None
    best = min(outcome.solutions, key=lambda s: s.links)
    return Linkage(words, best.choices, tuple(Link(*t) for t in best.links))


def acquire_syntax(
    words: Sequence[str],
    lexicon: Lexicon,
    *,
    max_unknowns: int = 2,
    filter_on: bool = True,
) -> AcquisitionResult:
    """Full acquisition pipeline: prune, infer, filter, witness.

    Unknown words are the ones absent from the lexicon.  With no unknowns
    the sentence is simply parsed.  Raises TooManyUnknownsError over the
    cap and NoSolutionError for unlinkable sentences.
    """
    problem = AcquisitionProblem.from_lexicon(words, lexicon)
    words = problem.words
    unknown = sorted(problem.unknown_positions)
    if len(unknown) > max_unknowns:
        raise TooManyUnknownsError(
            "%d unknown words exceed the cap of %d (%s)"
            % (len(unknown), max_unknowns,
               ", ".join(words[p] for p in unknown)))

    blind = max(len(lexicon.inventory()), 1) ** len(unknown)
    for p in sorted(problem.known):
        blind *= max(len(problem.known[p]), 1)

    pruned, trace, outcome = _prune(problem)
    if not outcome.solutions:
        raise NoSolutionError(
            "no valid linkage for %r" % (" ".join(words),))
    stats = {"explored_nodes": outcome.nodes, "blind_candidates": blind}

    if not unknown:
        from .linker import parse

        return AcquisitionResult(
            words, (), {}, {}, pruned, ({},), parse(words, lexicon),
            novel=False, trace=tuple(trace), stats=stats)

    joint_map = _joints_from(outcome, unknown)

    def hyp_key(h: Disjunct):
        return (-_frequency(h, lexicon), str(h))

    ordered_joints = sorted(
        joint_map, key=lambda key: tuple(hyp_key(h) for h in key))
    prefilter: dict[int, tuple[Disjunct, ...]] = {}
    for i, p in enumerate(unknown):
        seen: list[Disjunct] = []
        for key in ordered_joints:
            if key[i] not in seen:
                seen.append(key[i])
        seen.sort(key=hyp_key)
        prefilter[p] = tuple(seen)
        for h in prefilter[p]:
            trace.append(TraceEvent("hypothesize", p, words[p], h,
                                    "synthesis"))

    novel = False
    if filter_on:
        surviving = [
            key for key in ordered_joints
            if all(filter_by_inventory((h,), lexicon) for h in key)
        ]
        if surviving:
            for i, p in enumerate(unknown):
                for h in prefilter[p]:
                    if not filter_by_inventory((h,), lexicon):
                        trace.append(TraceEvent(
                            "eliminate", p, words[p], h,
                            "not in lexicon inventory"))
        else:
            novel = True
            surviving = ordered_joints
    else:
        surviving = ordered_joints

    hypotheses: dict[int, tuple[Disjunct, ...]] = {}
    for i, p in enumerate(unknown):
        kept: list[Disjunct] = []
        for key in surviving:
            if key[i] not in kept:
                kept.append(key[i])
        kept.sort(key=hyp_key)
        hypotheses[p] = tuple(kept)

    joints = []
    linkages = []
    for key in surviving:
        joint = dict(zip(unknown, key))
        witness = _witness_linkage(
            words, pruned, joint, lexicon,
            substitute=filter_on and not novel)
        if witness is None:  # cannot happen for a sound joint
            continue
        joints.append(joint)
        linkages.append(witness)

    return AcquisitionResult(
        words, tuple(unknown), hypotheses, prefilter, pruned,
        tuple(joints), linkages, novel, tuple(trace), stats)
