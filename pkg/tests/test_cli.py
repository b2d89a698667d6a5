"""Command-line behavior: tokenization, workspace handling, exit codes."""

import pytest

from lexacq.cli import (
    WorkspaceError,
    atomic_write,
    load_workspace,
    main,
    tokenize,
)


@pytest.fixture
def ws(tmp_path):
    assert main(["init", str(tmp_path)]) == 0
    return tmp_path


def run(ws_dir, *argv):
    return main(["-w", str(ws_dir), *argv])


def test_tokenize_lowercases_and_strips_terminal_punctuation():
    assert tokenize("The condor eats the meat.") == [
        "the", "condor", "eats", "the", "meat"]
    assert tokenize("The big cow eats yellow corn.") == [
        "the", "big", "cow", "eats", "yellow", "corn"]
    assert tokenize("") == []
    assert tokenize("  What?!  ") == ["what"]
    assert tokenize(". , !") == []
    assert tokenize("don't STOP") == ["don't", "stop"]


def test_init_scaffolds_workspace(ws):
    for name in ("workspace.cfg", "lexicon.lg", "noun_hierarchy.txt",
                 "verb_hierarchy.txt", "sample_corpus.txt"):
        assert (ws / name).is_file()
    loaded = load_workspace(ws)
    assert loaded.max_unknowns == 2
    assert loaded.oracle_cap == 7
    assert loaded.filter_on is True


def test_init_refuses_existing_workspace(ws, capsys):
    assert main(["init", str(ws)]) == 2
    assert "already exists" in capsys.readouterr().err


def test_load_workspace_accepts_config_path(ws):
    direct = load_workspace(ws / "workspace.cfg")
    assert direct == load_workspace(ws)


def test_load_workspace_missing_config(tmp_path):
    with pytest.raises(WorkspaceError):
        load_workspace(tmp_path)


@pytest.mark.parametrize("broken", [
    "lexicon = lexicon.lg",  # missing other required keys
    "nonsense line",
    "lexicon = lexicon.lg\nlexicon = again.lg",
    "unknown_key = 1",
])
def test_load_workspace_rejects_bad_config(tmp_path, broken):
    (tmp_path / "workspace.cfg").write_text(broken, encoding="utf-8")
    with pytest.raises(WorkspaceError):
        load_workspace(tmp_path)


def test_load_workspace_validates_option_ranges(ws):
    config = ws / "workspace.cfg"
    text = config.read_text(encoding="utf-8")
    config.write_text(text.replace("oracle_cap = 7", "oracle_cap = 0"),
                      encoding="utf-8")
    with pytest.raises(WorkspaceError):
        load_workspace(ws)
    config.write_text(text.replace("filter_on = true", "filter_on = maybe"),
                      encoding="utf-8")
    with pytest.raises(WorkspaceError):
        load_workspace(ws)


def test_load_workspace_requires_lexicon_file(ws):
    (ws / "lexicon.lg").unlink()
    with pytest.raises(WorkspaceError):
        load_workspace(ws)


def test_missing_workspace_is_usage_error(tmp_path, capsys):
    assert run(tmp_path / "nowhere", "parse", "the condor eats") == 2
    assert "no workspace configuration" in capsys.readouterr().err


def test_atomic_write_replaces_content(tmp_path):
    target = tmp_path / "file.txt"
    atomic_write(target, "one\n")
    atomic_write(target, "two\n")
    assert target.read_text(encoding="utf-8") == "two\n"
    assert list(tmp_path.iterdir()) == [target]


def test_parse_prints_diagram(ws, capsys):
    assert run(ws, "parse", "The condor eats the meat.") == 0
    out = capsys.readouterr().out
    assert out == (
        "           +---Os---+\n"
        "+Ds-+--Ss--+    +Ds-+\n"
        "|   |      |    |   |\n"
        "the condor eats the meat\n"
    )


def test_parse_prints_records(ws, capsys):
    assert run(ws, "parse", "--records", "the condor eats meat") == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "0:the:(( ) (D))"
    assert "link:2:3:Os" in out.splitlines()


def test_parse_all_linkages(ws, capsys):
    (ws / "lexicon.lg").write_text(
        "aa: (( ) (X)) | (( ) (Xs))\nbb: ((X) ( ))\n", encoding="utf-8")
    assert run(ws, "parse", "aa bb") == 0
    first = capsys.readouterr().out
    assert first.startswith("linkage 1 of 2:\n")
    assert run(ws, "parse", "--all-linkages", "aa bb") == 0
    out = capsys.readouterr().out
    assert "linkage 1 of 2:" in out and "linkage 2 of 2:" in out
    assert "+X-+" in out and "+Xs+" in out


def test_parse_error_exits(ws, capsys):
    assert run(ws, "parse", "the wug eats") == 1
    assert "wug" in capsys.readouterr().err
    assert run(ws, "parse", "meat eats") == 1
    assert "no valid linkage" in capsys.readouterr().err
    assert run(ws, "parse", "...") == 1
    assert "empty sentence" in capsys.readouterr().err


def test_acquire_prints_entry(ws, capsys):
    assert run(ws, "acquire", "the snipe eats meat") == 0
    assert capsys.readouterr().out == "snipe: ((D) (Ss))\n"


def test_acquire_no_filter_keeps_alternatives(ws, capsys):
    assert run(ws, "acquire", "--no-filter", "the snipe eats meat") == 0
    assert capsys.readouterr().out == "snipe: ((D) (Ss)) | ((D) (Os,Ss))\n"


def test_acquire_trace_output(ws, capsys):
    assert run(ws, "acquire", "--trace", "the snipe eats meat") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "snipe: ((D) (Ss))"
    assert out[1].startswith("eliminate:3:meat:")
    assert "eliminate:1:snipe:((D) (Os,Ss)):not in lexicon inventory" in out


def test_acquire_write_is_idempotent(ws, capsys):
    assert run(ws, "acquire", "--write", "the snipe eats meat") == 0
    written = (ws / "lexicon.lg").read_bytes()
    assert b"snipe: ((D) (Ss))" in written
    assert run(ws, "acquire", "--write", "the snipe eats meat") == 0
    assert "no unknown words" in capsys.readouterr().out
    assert (ws / "lexicon.lg").read_bytes() == written
    assert run(ws, "parse", "the snipe eats meat") == 0


def test_acquire_error_exits(ws, capsys):
    assert run(ws, "acquire", "wug wug") == 1
    assert "no valid linkage" in capsys.readouterr().err
    assert run(ws, "acquire", "wug zorp blick") == 1
    assert "exceed the cap" in capsys.readouterr().err


def test_train_writes_semantic_lexicon(ws, capsys):
    assert run(ws, "train", str(ws / "sample_corpus.txt")) == 0
    assert "trained on 3 sentence(s)" in capsys.readouterr().out
    text = (ws / "semantic_lexicon.lg").read_text(encoding="utf-8")
    assert ("eats: ((Ss_animal) (O_food)) ;support=2 |"
            " ((Ss_car) (O_gasoline)) ;support=1") in text


def test_train_aborts_on_unknown_word(ws, capsys):
    corpus = ws / "corpus.txt"
    corpus.write_text("# comment\nthe condor eats meat\nthe snipe eats meat\n",
                      encoding="utf-8")
    assert run(ws, "train", str(corpus)) == 1
    err = capsys.readouterr().err
    assert "line 3" in err and "snipe" in err
    assert not (ws / "semantic_lexicon.lg").exists()


def test_train_aborts_on_unparseable_line(ws, capsys):
    corpus = ws / "corpus.txt"
    corpus.write_text("meat eats\n", encoding="utf-8")
    assert run(ws, "train", str(corpus)) == 1
    assert "line 1" in capsys.readouterr().err
    assert not (ws / "semantic_lexicon.lg").exists()


def test_train_missing_corpus(ws, capsys):
    assert run(ws, "train", str(ws / "absent.txt")) == 2


def test_classify_after_training(ws, capsys):
    assert run(ws, "train", str(ws / "sample_corpus.txt")) == 0
    capsys.readouterr()
    assert run(ws, "classify", "The snipe eats meat.") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "snipe -> animal"
    assert out[1] == "  evidence: eats ((Ss_animal) (O_food)) where meat is food"
    assert run(ws, "classify", "the snipe eats gasoline") == 0
    assert capsys.readouterr().out.splitlines()[0] == "snipe -> car"


def test_classify_requires_one_unknown(ws, capsys):
    assert run(ws, "classify", "the condor eats meat") == 1
    assert "exactly one unknown" in capsys.readouterr().err
    assert run(ws, "classify", "the wug eats the zorp") == 1


def test_classify_without_training_data(ws, capsys):
    assert run(ws, "classify", "the snipe eats meat") == 1
    assert "tagged usages" in capsys.readouterr().err


def test_usage_error_exit_code(ws):
    with pytest.raises(SystemExit) as info:
        main(["bogus-command"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["-w", str(ws), "parse", "--records", "--diagram", "x"])
    assert info.value.code == 2
