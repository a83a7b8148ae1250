import itertools

from ordlogic.evaluator import eval_naive
from ordlogic.generate import all_structures, random_sentences
from ordlogic.search import entails, expansion_exists, find_model, satisfiable
from ordlogic.syntax import Not, parse_formula

SIG = (("P", 1), ("R", 2))


def test_sat_agrees_with_enumeration_on_small_sizes():
    structures = {n: list(all_structures(SIG, n)) for n in (1, 2)}
    for f in random_sentences(3, SIG, 25, 3, "infix"):
        for n in (1, 2):
            brute = any(eval_naive(S, {}, f) for S in structures[n])
            m = find_model([f], n, SIG, min_size=n)
            assert (m is not None) == brute
            if m is not None:
                assert eval_naive(m, {}, f)


def test_theorem9_pair_has_no_small_model(fx):
    phi, psi = fx("c5/phi.fo"), fx("c5/psi.fo")
    assert find_model([phi, psi], 4) is None
    assert satisfiable([phi], 2) and satisfiable([psi], 3)


def test_entailment_countermodel():
    a = parse_formula("(forall x1 (P x1))")
    b = parse_formula("(exists x1 (P x1))")
    assert entails(a, b, 3) is None
    cm = entails(b, a, 3)
    assert cm is not None and eval_naive(cm, {}, Not(a))


def test_expansion_keeps_base_relations(fx):
    A = fx("c5/A.txt")
    f = parse_formula("(forall x1 (iff (Q x1) (exists x2 (R x1 x2))))")
    E = expansion_exists(A, [f])
    assert E is not None and E.relations["R"] == A.relations["R"]
    assert eval_naive(E, {}, f)
