"""Command-line front-end: tokenization, workspace files, command dispatch.

A workspace is a directory with a flat key=value configuration file
(``workspace.cfg``) naming the lexicon, the two concept-hierarchy files,
and the semantic lexicon, plus option defaults.  Paths are resolved
relative to the configuration file; environment variables are never
consulted.  All file writes are atomic (write to a temp file, then rename).

Exit codes: 0 success, 1 invalid sentence or corpus line, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import importlib.resources
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .lexicon import Lexicon, LexiconError, parse_lexicon, serialize_lexicon
from .linker import (
    UnknownWordError,
    linkage_records,
    parse,
    render_diagram,
)
from .semantics import (
    ConceptHierarchies,
    ConceptHierarchy,
    HierarchyError,
    NoSemanticEvidenceError,
    SemanticLexicon,
    classify_unknown,
    generalize,
    parse_semlex,
    serialize_semlex,
    tag_sentence,
)
from .syntax import NoSolutionError, TooManyUnknownsError, acquire_syntax, render_trace

CONFIG_NAME = "workspace.cfg"

_PATH_KEYS = ("lexicon", "noun_hierarchy", "verb_hierarchy", "semlex")
_DATA_FILES = {
    "lexicon.lg": "sample_lexicon.lg",
    "noun_hierarchy.txt": "noun_hierarchy.txt",
    "verb_hierarchy.txt": "verb_hierarchy.txt",
    "sample_corpus.txt": "sample_corpus.txt",
}


class WorkspaceError(ValueError):
    """Raised when the workspace configuration or its files are unusable."""


@dataclass
class Workspace:
    """Resolved workspace file locations and option defaults."""

    lexicon_path: Path
    noun_hierarchy_path: Path
    verb_hierarchy_path: Path
    semlex_path: Path
    max_unknowns: int = 2
    oracle_cap: int = 7
    filter_on: bool = True

    def load_lexicon(self) -> Lexicon:
        return parse_lexicon(_read(self.lexicon_path))

    def load_hierarchies(self) -> ConceptHierarchies:
        nouns = ConceptHierarchy.parse(_read(self.noun_hierarchy_path), "noun")
        verbs = ConceptHierarchy.parse(_read(self.verb_hierarchy_path), "verb")
        return ConceptHierarchies(nouns, verbs)

    def load_semlex(self, hiers: ConceptHierarchies) -> SemanticLexicon:
        # The semantic lexicon starts empty; train creates the file.
        if not self.semlex_path.exists():
            return SemanticLexicon()
        return parse_semlex(_read(self.semlex_path), hiers)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise WorkspaceError("cannot read %s: %s" % (path, exc)) from exc


def atomic_write(path: Path, text: str) -> None:
    """Write text to path via a sibling temp file and rename."""
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_bool(value: str, key: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise WorkspaceError("option %s must be true or false, got %r" % (key, value))


def load_workspace(location: str | os.PathLike) -> Workspace:
    """Read a workspace configuration file (or directory containing one)."""
    path = Path(location)
    if path.is_dir():
        path = path / CONFIG_NAME
    if not path.is_file():
        raise WorkspaceError(
            "no workspace configuration at %s (run 'lexacq init' first)" % path
        )
    base = path.parent
    values: dict[str, str] = {}
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise WorkspaceError("%s line %d: expected key=value" % (path, lineno))
        key, value = key.strip(), value.strip()
        if key in values:
            raise WorkspaceError("%s line %d: duplicate key %r" % (path, lineno, key))
        values[key] = value

    known = set(_PATH_KEYS) | {"max_unknowns", "oracle_cap", "filter_on"}
    for key in values:
        if key not in known:
            raise WorkspaceError("%s: unknown option %r" % (path, key))
    for key in _PATH_KEYS:
        if key not in values:
            raise WorkspaceError("%s: missing required option %r" % (path, key))

    def intval(key: str, default: int, minimum: int) -> int:
        if key not in values:
            return default
        try:
            parsed = int(values[key])
        except ValueError:
            raise WorkspaceError("option %s must be an integer" % key) from None
        if parsed < minimum:
            raise WorkspaceError("option %s must be >= %d" % (key, minimum))
        return parsed

    ws = Workspace(
        lexicon_path=base / values["lexicon"],
        noun_hierarchy_path=base / values["noun_hierarchy"],
        verb_hierarchy_path=base / values["verb_hierarchy"],
        semlex_path=base / values["semlex"],
        max_unknowns=intval("max_unknowns", 2, 0),
        oracle_cap=intval("oracle_cap", 7, 1),
        filter_on=_parse_bool(values["filter_on"], "filter_on")
        if "filter_on" in values
        else True,
    )
    for attr in ("lexicon_path", "noun_hierarchy_path", "verb_hierarchy_path"):
        target = getattr(ws, attr)
        if not target.is_file():
            raise WorkspaceError("workspace file missing: %s" % target)
    return ws


def tokenize(line: str) -> list[str]:
    """Lowercase, split on whitespace, strip terminal .,!? and drop empties."""
    tokens = []
    for raw in line.lower().split():
        token = raw.rstrip(".,!?")
        if token:
            tokens.append(token)
    return tokens


# --- commands ----------------------------------------------------------------


def cmd_init(args: argparse.Namespace) -> int:
    """Scaffold a workspace directory with the sample data files."""
    target = Path(args.directory)
    target.mkdir(parents=True, exist_ok=True)
    config = target / CONFIG_NAME
    if config.exists():
        print("error: %s already exists" % config, file=sys.stderr)
        return 2
    data = importlib.resources.files("lexacq") / "data"
    for name, source in _DATA_FILES.items():
        atomic_write(target / name, (data / source).read_text(encoding="utf-8"))
    atomic_write(
        config,
        "# Workspace configuration: key=value, paths relative to this file.\n"
        "lexicon = lexicon.lg\n"
        "noun_hierarchy = noun_hierarchy.txt\n"
        "verb_hierarchy = verb_hierarchy.txt\n"
        "semlex = semantic_lexicon.lg\n"
        "max_unknowns = 2\n"
        "oracle_cap = 7\n"
        "filter_on = true\n",
    )
    print("initialized workspace in %s" % target)
    return 0


def _render(linkage, records: bool) -> str:
    return linkage_records(linkage) if records else render_diagram(linkage)


def cmd_parse(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    lexicon = ws.load_lexicon()
    words = tokenize(args.sentence)
    if not words:
        print("error: empty sentence", file=sys.stderr)
        return 1
    linkages = parse(words, lexicon)
    if not linkages:
        print("error: no valid linkage", file=sys.stderr)
        return 1
    shown = linkages if args.all_linkages else linkages[:1]
    for i, linkage in enumerate(shown, start=1):
        if len(linkages) > 1:
            print("linkage %d of %d:" % (i, len(linkages)))
        print(_render(linkage, args.records))
        if i < len(shown):
            print()
    return 0


def cmd_acquire(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    lexicon = ws.load_lexicon()
    words = tokenize(args.sentence)
    if not words:
        print("error: empty sentence", file=sys.stderr)
        return 1
    result = acquire_syntax(
        words,
        lexicon,
        max_unknowns=args.max_unknowns
        if args.max_unknowns is not None
        else ws.max_unknowns,
        filter_on=ws.filter_on and not args.no_filter,
    )
    entries = result.acquired_entries()
    if not entries:
        print("no unknown words; sentence parses")
    for word, disjuncts in entries.items():
        print("%s: %s" % (word, " | ".join(str(d) for d in disjuncts)))
    if result.novel and entries:
        print("note: hypotheses are novel (no inventory disjunct matches)")
    if args.trace:
        rendered = render_trace(result.trace)
        if rendered:
            print(rendered)
    if args.write and entries:
        updated = lexicon
        for word, disjuncts in entries.items():
            updated = updated.add(word, disjuncts)
        atomic_write(ws.lexicon_path, serialize_lexicon(updated))
        print("lexicon updated: %s" % ws.lexicon_path)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    lexicon = ws.load_lexicon()
    hiers = ws.load_hierarchies()
    semlex = ws.load_semlex(hiers)
    try:
        corpus = Path(args.corpus).read_text(encoding="utf-8")
    except OSError as exc:
        print("error: cannot read corpus: %s" % exc, file=sys.stderr)
        return 2
    trained = 0
    for lineno, raw in enumerate(corpus.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = tokenize(line)
        if not words:
            continue
        unknown = [w for w in words if w not in lexicon]
        if unknown:
            print(
                "error: line %d: unknown word %r (train requires fully known"
                " sentences)" % (lineno, unknown[0]),
                file=sys.stderr,
            )
            return 1
        linkages = parse(words, lexicon)
        if not linkages:
            print("error: line %d: no valid linkage" % lineno, file=sys.stderr)
            return 1
        semlex = tag_sentence(linkages[0], hiers, semlex, lexicon)
        trained += 1
    semlex = generalize(semlex, hiers)
    atomic_write(ws.semlex_path, serialize_semlex(semlex))
    print(
        "trained on %d sentence(s); semantic lexicon has %d word(s): %s"
        % (trained, len(semlex), ws.semlex_path)
    )
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    lexicon = ws.load_lexicon()
    hiers = ws.load_hierarchies()
    semlex = ws.load_semlex(hiers)
    words = tokenize(args.sentence)
    if not words:
        print("error: empty sentence", file=sys.stderr)
        return 1
    unknown = [i for i, w in enumerate(words) if w not in lexicon]
    if len(unknown) != 1:
        print(
            "error: classify needs exactly one unknown word, found %d"
            % len(unknown),
            file=sys.stderr,
        )
        return 1
    results = classify_unknown(
        words,
        unknown[0],
        lexicon,
        semlex,
        hiers,
        max_unknowns=args.max_unknowns
        if args.max_unknowns is not None
        else ws.max_unknowns,
        filter_on=ws.filter_on and not args.no_filter,
    )
    target = words[unknown[0]]
    for concept, evidence in results:
        print("%s -> %s" % (target, concept))
        line = "  evidence: %s %s" % (evidence.word, evidence.usage)
        if evidence.facts:
            line += " where " + ", ".join(
                "%s is %s" % (filler, tag) for filler, tag in evidence.facts
            )
        print(line)
    return 0


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexacq",
        description="Linkage parser with unknown-word lexical acquisition.",
    )
    parser.add_argument(
        "-w",
        "--workspace",
        default=CONFIG_NAME,
        help="workspace config file or directory (default: ./%s)" % CONFIG_NAME,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="scaffold a workspace with sample data")
    p_init.add_argument("directory")
    p_init.set_defaults(func=cmd_init)

    p_parse = sub.add_parser("parse", help="parse a fully known sentence")
    p_parse.add_argument("sentence")
    p_parse.add_argument("--all-linkages", action="store_true")
    fmt = p_parse.add_mutually_exclusive_group()
    fmt.add_argument("--diagram", dest="records", action="store_false")
    fmt.add_argument("--records", dest="records", action="store_true")
    p_parse.set_defaults(func=cmd_parse, records=False)

    p_acq = sub.add_parser("acquire", help="infer disjuncts for unknown words")
    p_acq.add_argument("sentence")
    p_acq.add_argument("--no-filter", action="store_true")
    p_acq.add_argument("--max-unknowns", type=int, default=None)
    p_acq.add_argument("--trace", action="store_true")
    p_acq.add_argument("--write", action="store_true")
    p_acq.set_defaults(func=cmd_acquire)

    p_train = sub.add_parser("train", help="tag a corpus of known sentences")
    p_train.add_argument("corpus")
    p_train.set_defaults(func=cmd_train)

    p_cls = sub.add_parser("classify", help="classify one unknown word")
    p_cls.add_argument("sentence")
    p_cls.add_argument("--no-filter", action="store_true")
    p_cls.add_argument("--max-unknowns", type=int, default=None)
    p_cls.set_defaults(func=cmd_classify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnknownWordError, NoSolutionError, TooManyUnknownsError,
            NoSemanticEvidenceError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (WorkspaceError, LexiconError, HierarchyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
