import pytest

from ordlogic.evaluator import eval_naive
from ordlogic.generate import all_structures, random_sentences
from ordlogic.rewriter import (NormalForm, RewriteError, extract_requirements,
                               introduce_head, is_nform_guarded, is_nform_pre,
                               normalize_pair, read_normal_form, simplify,
                               to_normal_form_guarded, to_normal_form_pre,
                               to_suffix_form)
from ordlogic.search import entails, find_model
from ordlogic.syntax import (And, Atom, Exists, Forall, Implies, Top, classify,
                             is_guarded, parse_formula, to_sexpr)

P = parse_formula
SIG = (("P", 1), ("R", 2))
SMALL = [S for n in (1, 2, 3) for S in all_structures(SIG, n)]


def _equivalent(f, g, structures):
    return all(eval_naive(S, {}, f) == eval_naive(S, {}, g) for S in structures)


def test_suffix_form_moves_misplaced_atom_outward():
    f = P("(exists x1 (exists x2 (and (R x1 x2) (P x1))))")
    g = to_suffix_form(f)
    assert g == P("(exists x1 (and (P x1) (exists x2 (R x1 x2))))")
    assert _equivalent(f, g, SMALL)


def test_suffix_input_is_kept_in_suffix_fragment():
    f = P("(forall x1 (implies (P x1) (exists x2 (and (R x1 x2) (P x2)))))")
    g = to_suffix_form(f)
    assert "L_suf" in classify(g) and _equivalent(f, g, SMALL)


def test_theorem9_phi_gets_suffix_equivalent(fx):
    phi = fx("c5/phi.fo")
    g = to_suffix_form(phi)
    assert "L_suf" in classify(g)
    sig = (("P1", 1), ("P2", 1), ("R", 2))
    for S in [fx("c5/A_prime.txt")] + list(all_structures(sig, 2))[::37]:
        assert eval_naive(S, {}, phi) == eval_naive(S, {}, g)


def test_suffix_form_rejects_non_infix_input():
    with pytest.raises(RewriteError):
        to_suffix_form(P("(forall x1 (forall x2 (R x2 x1)))"))


@pytest.mark.parametrize("f", random_sentences(21, SIG, 12, 3, "infix"), ids=to_sexpr)
def test_suffix_form_on_random_infix_sentences(f):
    g = to_suffix_form(f)
    assert "L_suf" in classify(g)
    assert _equivalent(f, g, SMALL[:600])


def test_simplify_keeps_guards():
    f = P("(exists x1 (exists x2 (and (R x1 x2) true)))")
    assert is_guarded(simplify(f))
    assert simplify(P("(and (P x1) false)")) == P("false")


def test_introduce_head_open_formula():
    phi2, _ = introduce_head(P("(A x1)"), P("(B x1)"))
    assert phi2 == And(Atom("H", (1,)), Forall(1, Implies(Atom("H", (1,)), Atom("A", (1,)))))


def test_introduce_head_entails_original():
    f = P("(exists x1 (and (P x1) (exists x2 (R x1 x2))))")
    g, _ = introduce_head(f, f)
    assert entails(g, f, 3) is None


def _pre_corpus():
    sig = (("P", 1), ("R", 2), ("T", 3))
    out = []
    for f in random_sentences(40, sig, 20, 3, "prefix"):
        M = find_model([f], 3)
        if M is not None:
            out.append((f, M))
    return out[:10]


@pytest.mark.parametrize("f,M", _pre_corpus(), ids=lambda x: to_sexpr(x) if not hasattr(x, "domain") else "")
def test_prefix_normal_form(f, M):
    nf, fresh = to_normal_form_pre(f, ref=M)
    g = nf.to_formula()
    assert is_nform_pre(g)
    assert entails(g, f, 3) is None
    assert eval_naive(nf.model, {}, g)
    assert all(name.startswith("_nf") for name, _ in fresh)


def _guarded_corpus():
    sig = (("P", 1), ("R", 2), ("T", 3))
    out = []
    for kind in ("suffix", "infix", "prefix"):
        for f in random_sentences(50, sig, 12, 3, kind, guarded=True):
            M = find_model([f], 3)
            if M is not None:
                out.append((f, M))
    return out[:18]


@pytest.mark.parametrize("f,M", _guarded_corpus(), ids=lambda x: to_sexpr(x) if not hasattr(x, "domain") else "")
def test_guarded_normal_form(f, M):
    nf, _ = to_normal_form_guarded(f, ref=M)
    g = nf.to_formula()
    assert is_nform_guarded(g, nf.logic)
    assert nf.logic in classify(g)
    assert entails(g, f, 3) is None
    assert eval_naive(nf.model, {}, g)


def test_normal_form_of_open_formula():
    f = P("(and (P x1) (exists x2 (and (R x1 x2) (forall x3 (implies (T x1 x2 x3) (P x3))))))")
    nf, fresh = to_normal_form_guarded(f)
    g = nf.to_formula()
    assert is_nform_guarded(g, nf.logic)
    assert len(fresh) >= 1


def test_reading_back_a_normal_form(fx):
    nf, _ = to_normal_form_guarded(fx("gsuf-pair/phi.fo"), ref=fx("gsuf-pair/A.txt"))
    again = read_normal_form(nf.to_formula(), nf.logic)
    assert isinstance(again, NormalForm)
    assert again.to_formula() == nf.to_formula()


def test_extract_requirements_counts(fx):
    nf, _ = to_normal_form_guarded(fx("gsuf-pair/phi.fo"), ref=fx("gsuf-pair/A.txt"))
    ex, un = extract_requirements(nf)
    assert len(ex) == 3 and len(un) == 3
    assert any(r.ell == 0 for r in ex)
    assert all(r.kind == "exists" for r in ex) and all(r.kind == "forall" for r in un)


def test_normalize_pair_shares_head_and_separates_fresh_symbols(fx):
    pn, qn = normalize_pair(fx("pre-pair/phi.fo"), fx("pre-pair/psi.fo"), "L_pre",
                            refs=(fx("pre-pair/A.txt"), fx("pre-pair/B.txt")))
    assert pn.head == qn.head
    assert not {n for n, _ in pn.fresh} & {n for n, _ in qn.fresh}


def test_nested_sentence_needs_reference_model():
    f = P("(forall x1 (exists x2 (or (R x1 x2) (exists x1 (P x1)))))")
    with pytest.raises(RewriteError):
        to_normal_form_pre(f)
    M = find_model([f], 2)
    nf, _ = to_normal_form_pre(f, ref=M)
    assert is_nform_pre(nf.to_formula())
