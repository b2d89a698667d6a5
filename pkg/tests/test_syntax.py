"""Syntactic acquisition: pruning, hypothesis synthesis, inventory filter."""

from pathlib import Path

import pytest

from lexacq.lexicon import parse_lexicon
from lexacq.syntax import (
    AcquisitionProblem,
    NoSolutionError,
    TooManyUnknownsError,
    TraceEvent,
    acquire_syntax,
    filter_by_inventory,
    infer_unknowns,
    prune_known,
    render_trace,
)

GOLDEN_TRACE = Path(__file__).parent / "data" / "snipe_trace.txt"


def D(text):
    return parse_lexicon("x: %s" % text).lookup("x")[0]


def test_problem_partition_is_validated():
    with pytest.raises(ValueError):
        AcquisitionProblem(("a", "b"), {0: (D("(( ) ( ))"),)}, frozenset())


def test_from_lexicon_splits_known_and_unknown(lexicon):
    problem = AcquisitionProblem.from_lexicon(
        ["the", "snipe", "eats", "meat"], lexicon)
    assert problem.unknown_positions == {1}
    assert set(problem.known) == {0, 2, 3}
    assert problem.known[3] == lexicon.lookup("meat")


def test_prune_keeps_only_supported_disjuncts(lexicon):
    problem = AcquisitionProblem.from_lexicon(
        ["the", "snipe", "eats", "meat"], lexicon)
    pruned, trace = prune_known(problem)
    assert pruned[3] == (D("((Os) ( ))"),)
    # the wildcard at position 1 can host meat's Os itself, so both of
    # eats' disjuncts stay live before hypothesis filtering
    assert pruned[2] == lexicon.lookup("eats")
    assert pruned[0] == lexicon.lookup("the")
    assert len([e for e in trace if e.action == "eliminate"]) == 5


def test_prune_count_reasons(lexicon):
    problem = AcquisitionProblem.from_lexicon(["eats", "meat"], lexicon)
    pruned, trace = prune_known(problem)
    reasons = {str(e.disjunct): e.reason for e in trace if e.position == 0}
    assert reasons["((Ss) (O))"] == (
        "left connector unsatisfiable: no words to the left")
    problem2 = AcquisitionProblem.from_lexicon(
        ["the", "meat", "eats", "meat"], lexicon)
    _, trace2 = prune_known(problem2)
    counted = [e for e in trace2 if e.position == 1 and "only" in e.reason]
    assert any(
        e.reason == "left connector unsatisfiable: only 1 word to the left"
        for e in counted)


def test_trace_event_rendering():
    event = TraceEvent("eliminate", 3, "meat", D("((A,Os) ( ))"), "ordering conflict")
    assert str(event) == "eliminate:3:meat:((A,Os) ( )):ordering conflict"


def test_infer_unknowns_synthesizes_bare_connectors(lexicon):
    problem = AcquisitionProblem.from_lexicon(
        ["the", "snipe", "eats", "meat"], lexicon)
    joints = infer_unknowns(problem)
    assert [j[1] for j in joints] == [D("((D) (Ss))"), D("((D) (Os,Ss))")]


def test_filter_by_inventory_uses_match_compatibility(lexicon):
    kept = filter_by_inventory(
        [D("((D) (Ss))"), D("((D) (Os,Ss))")], lexicon)
    assert kept == (D("((D) (Ss))"),)


def test_acquire_snipe_walkthrough(lexicon):
    result = acquire_syntax("the snipe eats meat".split(), lexicon)
    assert result.unknown_positions == (1,)
    assert result.pruned_known[3] == (D("((Os) ( ))"),)
    assert result.prefilter[1] == (D("((D) (Ss))"), D("((D) (Os,Ss))"))
    assert result.hypotheses[1] == (D("((D) (Ss))"),)
    assert not result.novel
    assert result.acquired_entries() == {"snipe": (D("((D) (Ss))"),)}
    assert len(result.linkages) == 1
    assert result.linkages[0].link_set() == {
        (0, 1, "Ds"), (1, 2, "Ss"), (2, 3, "Os")}


def test_acquire_trace_matches_golden_file(lexicon):
    result = acquire_syntax("the snipe eats meat".split(), lexicon)
    golden = GOLDEN_TRACE.read_text(encoding="utf-8").rstrip("\n")
    assert render_trace(result.trace) == golden


def test_acquire_without_filter_keeps_both_hypotheses(lexicon):
    result = acquire_syntax("the snipe eats meat".split(), lexicon,
                            filter_on=False)
    assert result.hypotheses[1] == result.prefilter[1]
    assert len(result.joints) == 2


def test_acquire_explores_fewer_nodes_than_blind_enumeration(lexicon):
    result = acquire_syntax("the snipe eats meat".split(), lexicon)
    assert 0 < result.stats["explored_nodes"] < result.stats["blind_candidates"]


def test_acquire_two_unknowns_share_a_word(lexicon):
    result = acquire_syntax("the snipe eats the snipe".split(), lexicon)
    assert result.unknown_positions == (1, 4)
    assert set(result.acquired_entries()["snipe"]) == {
        D("((D) (Ss))"), D("((D,O) ( ))")}


def test_acquire_lone_unknown_word_is_novel(lexicon):
    result = acquire_syntax(["wug"], lexicon)
    assert result.hypotheses[0] == (D("(( ) ( ))"),)
    assert result.novel


def test_acquire_rejects_unlinkable_unknown_pair(lexicon):
    with pytest.raises(NoSolutionError):
        acquire_syntax(["wug", "wug"], lexicon)


def test_acquire_unknown_cap(lexicon):
    with pytest.raises(TooManyUnknownsError):
        acquire_syntax(["wug", "zorp", "blick"], lexicon)
    result = acquire_syntax("the wug eats the zorp".split(), lexicon,
                            max_unknowns=2)
    assert result.unknown_positions == (1, 4)
    with pytest.raises(TooManyUnknownsError):
        acquire_syntax("the wug eats the zorp".split(), lexicon,
                       max_unknowns=1)


def test_acquire_fully_known_sentence_parses(lexicon):
    result = acquire_syntax("the condor eats the meat".split(), lexicon)
    assert result.unknown_positions == ()
    assert result.hypotheses == {}
    assert result.joints == ({},)
    assert len(result.linkages) == 1
    assert result.linkages[0].link_set() == {
        (0, 1, "Ds"), (1, 2, "Ss"), (2, 4, "Os"), (3, 4, "Ds")}


def test_acquire_unparseable_known_sentence(lexicon):
    with pytest.raises(NoSolutionError):
        acquire_syntax(["meat", "eats"], lexicon)


def test_acquired_hypotheses_ordered_by_frequency(lexicon):
    result = acquire_syntax("the snipe eats meat".split(), lexicon,
                            filter_on=False)
    # ((D) (Ss)) matches six noun entries, ((D) (Os,Ss)) matches none
    assert result.prefilter[1][0] == D("((D) (Ss))")
