import pytest

from ordlogic.syntax import (And, Atom, Exists, Forall, FormulaSyntaxError,
                             Implies, Not, classify, depth_membership,
                             free_variables, is_guarded, parse_formula,
                             quantifier_rank, shift, signature_of, to_sexpr)

P = parse_formula


def test_parse_single_quantifier():
    assert P("(forall x1 (A x1))") == Forall(1, Atom("A", (1,)))


def test_parse_unbalanced_reports_error():
    with pytest.raises(FormulaSyntaxError):
        P("(and")


def test_iff_expands_to_two_implications():
    f = P("(iff (A x1) (B x1))")
    a, b = Atom("A", (1,)), Atom("B", (1,))
    assert f == And(Implies(a, b), Implies(b, a))


def test_sexpr_round_trip(fx):
    f = fx("c5/phi.fo")
    assert P(to_sexpr(f)) == f


def test_student_sentence_ast(fx):
    f = fx("classify/student.fo")
    body = Implies(Atom("student", (1,)),
                   Not(Forall(2, Implies(Atom("professor", (2,)), Atom("admires", (1, 2))))))
    assert f == Forall(1, body)


def test_free_variables_and_rank():
    assert free_variables(P("(R x1 x2)")) == [1, 2]
    assert free_variables(P("(exists x2 (R x1 x2))")) == [1]
    assert free_variables(P("(forall x1 (A x1))")) == []
    assert quantifier_rank(P("(A x1)")) == 0
    assert quantifier_rank(P("(forall x1 (exists x2 (forall x3 (R x1 x2 x3))))")) == 3


def test_theorem9_phi_rank_and_labels(fx):
    phi = fx("c5/phi.fo")
    assert quantifier_rank(phi) == 3
    labels = classify(phi)
    assert "L_inf" in labels and "GF" not in labels


def test_depth_membership_examples():
    requant = P("(forall x1 (forall x2 (forall x3 (implies (R x1 x2 x3) "
                "(and (A x1) (exists x2 (exists x3 (S x1 x2 x3))))))))")
    assert depth_membership(requant, 0, "L_inf")
    assert not depth_membership(P("(T x1 x3)"), 3, "L_inf")
    for frag in ("L_pre", "L_suf", "L_inf"):
        assert depth_membership(P("(R x1 x2)"), 2, frag)


@pytest.mark.parametrize("frag", ["L_pre", "L_inf"])
def test_membership_is_upward_closed(frag):
    f = P("(exists x2 (and (R x1 x2) (P x1)))")
    assert depth_membership(f, 1, frag)
    assert all(depth_membership(f, n, frag) for n in range(1, 5))


def test_guardedness_examples():
    assert is_guarded(P("(forall x1 (forall x2 (implies (R x1 x2) (A x2))))"))
    assert not is_guarded(P("(forall x1 (forall x2 (R x1 x2)))"))
    assert not is_guarded(P("(forall x1 (implies (student x1) (not (forall x2 "
                            "(implies (professor x2) (admires x1 x2))))))"))


def test_label_inclusions_hold_on_fixtures(fx):
    for rel in ("c5/phi.fo", "c5/psi.fo", "c6/phi.fo", "gsuf-pair/phi.fo",
                "gsuf-pair/psi.fo", "classify/requantify.fo"):
        labels = classify(fx(rel))
        if labels & {"L_suf", "L_pre"}:
            assert "L_inf" in labels
        for g in ("G_pre", "G_suf", "G_inf"):
            if g in labels:
                assert "GF" in labels and "L_" + g[2:] in labels


def test_signature_and_shift():
    f = P("(exists x2 (and (R x1 x2) (P x2)))")
    assert signature_of(f) == {"R": 2, "P": 1}
    assert free_variables(shift(f, 2)) == [3]
