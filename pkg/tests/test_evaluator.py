import random

import pytest
from hypothesis import given, settings, strategies as st

from ordlogic.evaluator import (UnsupportedFormula, eval_naive, eval_windowed,
                                peak_window)
from ordlogic.generate import all_structures, enumerate_sentences, random_formula
from ordlogic.structures import Structure
from ordlogic.syntax import parse_formula

SIG = (("P", 1), ("R", 2))


def test_fixture_truth_values(fx):
    assert eval_naive(fx("c5/A_prime.txt"), {}, fx("c5/phi.fo"))
    assert eval_naive(fx("c5/B_prime.txt"), {}, fx("c5/psi.fo"))
    assert eval_windowed(fx("c6/A.txt"), {}, fx("c6/phi.fo"))
    assert not eval_windowed(fx("b2-lemma18/B.txt"), {}, fx("b2-lemma18/formula.fo"))


def test_reflexive_point():
    S = Structure(["a"], (("R", 2),), {"R": [("a", "a")]})
    assert eval_naive(S, {}, parse_formula("(forall x1 (exists x2 (R x1 x2)))"))


def test_unknown_symbol_is_rejected():
    S = Structure(["a"], (("R", 2),), {})
    with pytest.raises(KeyError):
        eval_naive(S, {}, parse_formula("(exists x1 (P x1))"))


def test_windowed_rejects_formulas_outside_both_fragments():
    S = Structure(["a"], (("R", 2),), {})
    with pytest.raises(UnsupportedFormula):
        eval_windowed(S, {}, parse_formula("(forall x1 (forall x2 (R x2 x1)))"))


def test_atom_window_is_its_free_variables():
    S = Structure(["a", "b"], (("R", 2),), {"R": [("a", "b")]})
    assert peak_window(S, {1: "a", 2: "b"}, parse_formula("(R x1 x2)")) == 2


def test_deep_suffix_chain_keeps_window_small():
    f = parse_formula("(exists x1 (exists x2 (and (R x1 x2) (exists x3 (and (R x2 x3) "
                      "(exists x4 (and (R x3 x4) (exists x5 (R x4 x5)))))))))")
    S = Structure(["a", "b"], SIG, {"R": [("a", "b"), ("b", "a")]})
    assert eval_windowed(S, {}, f)
    assert peak_window(S, {}, f) <= 2


def test_theorem9_phi_window(fx):
    phi = fx("c6/phi.fo")
    assert peak_window(fx("c6/A.txt"), {}, phi) <= 2


def test_exhaustive_suffix_rank2_agreement():
    structures = [S for n in (1, 2) for S in all_structures(SIG, n)]
    for f in enumerate_sentences(SIG, 2, "suffix")[::7]:
        for S in structures:
            assert eval_naive(S, {}, f) == eval_windowed(S, {}, f)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), kind=st.sampled_from(["suffix", "prefix"]),
       size=st.integers(1, 3))
def test_windowed_matches_naive_on_random_inputs(seed, kind, size):
    rng = random.Random(seed)
    f = random_formula(rng, SIG, 3, kind)
    dom = [str(i) for i in range(size)]
    rels = {"P": [(d,) for d in dom if rng.random() < 0.5],
            "R": [(a, b) for a in dom for b in dom if rng.random() < 0.4]}
    S = Structure(dom, SIG, rels)
    assert eval_windowed(S, {}, f) == eval_naive(S, {}, f)
    assert peak_window(S, {}, f) <= 2
