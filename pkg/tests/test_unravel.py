import pytest

from ordlogic.casebook import fixture_structures
from ordlogic.structures import Structure, is_live
from ordlogic.unravel import (ROOT, Hat, check_claim24, check_type_preservation,
                              check_unravel_bisimulation, forward_gaifman,
                              hah_unravel, heart, is_hat, lift_tuple,
                              maximal_live, precedes, subtree)


def test_forward_gaifman_of_lemma18_structure(fx):
    edges = forward_gaifman(fx("b2-lemma18/A.txt")).edges
    assert edges == {("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "6"), ("6", "1")}


def test_forward_gaifman_edge_cases():
    assert not forward_gaifman(Structure(["a"], (("R", 2),), {})).edges
    loop = Structure(["a"], (("R", 2),), {"R": [("a", "a")]})
    assert forward_gaifman(loop).edges == {("a", "a")}


def test_single_element_unravels_to_one_node():
    h = hah_unravel(Structure(["a"], (("R", 2),), {}), 3)
    assert h.domain == ("0",)


def test_loop_unravels_to_chain():
    loop = Structure(["a"], (("R", 2),), {"R": [("a", "a")]})
    h = hah_unravel(loop, 3)
    assert h.domain == ("0", "0.0", "0.0.0")
    assert h.structure.relations["R"] == {("0", "0.0"), ("0.0", "0.0.0")}
    assert subtree(h, "0.0").domain == (ROOT, "0")


def test_lemma19_triples_map_to_live_triples(fx):
    B = fx("b2-lemma19/B.txt")
    h = hah_unravel(B, 4)
    for t in h.structure.live_tuples(["R", "S"]):
        assert is_live(B, tuple(h.last(x) for x in t), ["R", "S"])


@pytest.mark.parametrize("label,S", fixture_structures(), ids=lambda x: x if isinstance(x, str) else "")
@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_unravellings_are_hedges_preserving_types(label, S, depth):
    h = hah_unravel(S, depth)
    assert is_hat(h)
    assert check_type_preservation(S, h).ok
    assert check_claim24(h).ok


def test_corrupted_unravelling_is_detected(fx):
    A = fx("b2-lemma18/A.txt")
    h = hah_unravel(A, 4)
    rels = {n: set(ts) for n, ts in h.structure.relations.items()}
    rels["T"].remove(sorted(rels["T"])[0])
    broken = Hat(Structure(h.domain, h.structure.signature, rels), None, h.origin)
    assert not check_type_preservation(A, broken).ok


def test_hat_shape_conditions(fx):
    assert is_hat(Hat(fx("fig1-tree/T.txt"), ROOT))
    bad_step = Structure([ROOT, "0"], (("R", 2),), {"R": [("0", ROOT)]})
    assert not is_hat(Hat(bad_step, ROOT))
    gap = Structure([ROOT, "0.0"], (("R", 2),), {})
    assert not is_hat(Hat(gap, ROOT))


def test_lift_tuple_follows_paths(fx):
    A = fx("c5/A.txt")
    h = hah_unravel(A, 3)
    lifted = lift_tuple(h, ("a", "b", "c"))
    assert [h.last(x) for x in lifted] == ["a", "b", "c"]
    assert (lifted[0], lifted[1]) in h.structure.relations["R"]


def test_order_and_hearts_on_tree(fx):
    T = fx("fig1-tree/T.txt")
    c, d = ("eps", "0", "0.0"), ("0", "0.0", "0.0.0")
    assert precedes(c, d) and not precedes(d, c)
    assert heart(c, d) == (2, 3, 2)
    assert heart(("eps", "1"), ("0", "0.0")) is None
    assert set(maximal_live(T, ["T", "E"])) >= {c, d}


@pytest.mark.parametrize("depth", [2, 4])
def test_unravelling_relation_check_on_fixtures(depth):
    for label, S in fixture_structures():
        rep = check_unravel_bisimulation(S, hah_unravel(S, depth))
        assert rep.ok, (label, rep.violations[:2])
