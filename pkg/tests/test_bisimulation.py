import pytest

from ordlogic.bisimulation import (BisimRelation, GameConfig, bisim_fixpoint,
                                   check_equiv_transfer, guarded_bisim_fixpoint,
                                   kround_game, strategy_relation,
                                   verify_bisimulation)
from ordlogic.casebook import FIXTURES, load_strategy, strategy_closure
from ordlogic.generate import enumerate_sentences
from ordlogic.syntax import parse_formula


def test_c5_strategy_relation_verifies(fx):
    A, B = fx("c5/A.txt"), fx("c5/B.txt")
    Z = strategy_closure(A, B, load_strategy(FIXTURES, "c5/strategy.txt"), 4)
    assert len(Z) == 677
    assert verify_bisimulation(A, B, Z, GameConfig("L_inf", ("R",)), depth=4).ok


def test_identity_relation_is_a_bisimulation(fx):
    A = fx("b2-lemma18/A.txt")
    pairs = {((), ())} | {(t, t) for t in A.live_tuples(["R", "T"])}
    pairs |= {((a,), (a,)) for a in A.domain}
    pairs |= {((a, b), (a, b)) for a in A.domain for b in A.domain}
    pairs |= {((a, b, c), (a, b, c)) for a in A.domain for b in A.domain for c in A.domain}
    rep = verify_bisimulation(A, A, BisimRelation(frozenset(pairs)), GameConfig("L_pre", ("R", "T")))
    assert rep.ok


def test_harmony_violation_is_reported(fx):
    A, B = fx("b2-lemma18/A.txt"), fx("b2-lemma18/B.txt")
    Z = BisimRelation(frozenset({((), ()), (("1", "2", "3"), ("8", "7", "1"))}))
    rep = verify_bisimulation(A, B, Z, GameConfig("L_pre", ("R", "T")))
    assert not rep.ok


def test_empty_relation_is_not_a_bisimulation(fx):
    A = fx("c5/A.txt")
    assert not verify_bisimulation(A, A, BisimRelation(frozenset()), GameConfig("L_inf", ("R",))).ok


def test_relation_text_round_trip():
    Z = BisimRelation(frozenset({((), ()), (("a", "b"), ("1", "2"))}))
    assert BisimRelation.from_text(Z.to_text()) == Z


def test_lemma18_repaired_games(fx):
    A, B = fx("b2-lemma18-repaired/A.txt"), fx("b2-lemma18-repaired/B.txt")
    assert kround_game(A, (), B, (), GameConfig("L_pre", ("R", "T"), 4))
    assert not kround_game(A, (), B, (), GameConfig("L_suf", ("R", "T"), 3))


@pytest.mark.parametrize("logic", ["L_pre", "L_suf", "L_inf", "G_suf", "G_inf"])
def test_structure_is_bisimilar_to_itself(fx, logic):
    A = fx("b2-lemma19/A.txt")
    assert kround_game(A, (), A, (), GameConfig(logic, ("R", "S"), 3))


def test_lemma19_guarded_fixpoints(fx):
    A, B = fx("b2-lemma19-repaired/A.txt"), fx("b2-lemma19-repaired/B.txt")
    Z = guarded_bisim_fixpoint(A, B, ("R", "S"), "suffix")
    f = {"8": "5", "7": "6"}
    for b in B.live_tuples(("R", "S")):
        assert (tuple(f.get(x, x) for x in b), b) in Z
    assert verify_bisimulation(A, B, Z, GameConfig("G_suf", ("R", "S"))).ok
    Zi = guarded_bisim_fixpoint(A, B, ("R", "S"), "infix")
    assert (("1", "2", "3"), ("8", "7", "1")) not in Zi
    Zl = guarded_bisim_fixpoint(fx("b2-lemma19/A.txt"), fx("b2-lemma19/B.txt"), ("R", "S"), "infix")
    assert (("1", "2", "3"), ("8", "7", "1")) not in Zl


def test_self_fixpoint_contains_diagonal(fx):
    A = fx("b2-lemma19/A.txt")
    Z = guarded_bisim_fixpoint(A, A, ("R", "S"), "suffix")
    assert all((t, t) in Z for t in A.live_tuples(("R", "S")))


def test_transfer_on_c5(fx):
    A, B = fx("c5/A.txt"), fx("c5/B.txt")
    pool = enumerate_sentences((("R", 2),), 2, "infix")
    rep = check_equiv_transfer(A, B, GameConfig("L_inf", ("R",), 2), pool)
    assert rep.ok


def test_transfer_reports_disagreement_when_game_fails(fx):
    A, B = fx("b2-lemma18/A.txt"), fx("b2-lemma18/B.txt")
    chi = parse_formula("(exists x1 (and (forall x2 (not (T x1 x2))) "
                        "(forall x2 (forall x3 (not (R x1 x2 x3))))))")
    rep = check_equiv_transfer(A, B, GameConfig("L_suf", ("R", "T"), 3), [chi])
    assert not kround_game(A, (), B, (), GameConfig("L_suf", ("R", "T"), 3))
    assert rep.disagreements


def test_strategy_relation_from_root(fx):
    A, B = fx("b2-lemma18-repaired/A.txt"), fx("b2-lemma18-repaired/B.txt")
    Z = strategy_relation(A, (), B, (), GameConfig("L_pre", ("R", "T")))
    assert Z is not None and ((), ()) in Z
    assert bisim_fixpoint(A, B, GameConfig("L_pre", ("R", "T"))).pairs >= Z.pairs
