import pytest

from ordlogic.casebook import fixture_structures
from ordlogic.structures import (Structure, affix_type, decode_list,
                                 decode_matrix, encode_list, encode_matrix,
                                 induced_substructure, is_live)


def test_affix_type_examples(fx):
    A, B = fx("b2-lemma18/A.txt"), fx("b2-lemma18/B.txt")
    t = affix_type(A, ("1", "2", "3"), ["R", "T"], "infix")
    assert t.polarity("R", 1) and t.polarity("T", 2) and not t.polarity("T", 1)
    u = affix_type(B, ("8", "7", "1"), ["R", "T"], "infix")
    assert u.polarity("R", 1) and not u.polarity("T", 2)


def test_affix_type_empty_relations_all_negative():
    S = Structure(["a", "b"], (("R", 2),), {})
    assert not any(affix_type(S, ("a", "b", "a"), ["R"]).polarities())


def test_union_rejects_inconsistent_types(fx):
    A = fx("b2-lemma18/A.txt")
    t = affix_type(A, ("1", "2"), ["T"])
    u = affix_type(A, ("2", "3"), ["T"])
    with pytest.raises(ValueError):
        t.union(u)


def test_liveness(fx):
    A, B = fx("b2-lemma18/A.txt"), fx("b2-lemma18/B.txt")
    assert is_live(A, ("4",), ["R", "T"])
    assert is_live(B, ("8", "7", "1"), ["R", "T"])
    assert not is_live(A, ("1", "4"), ["R", "T"])


def test_induced_substructure(fx):
    A = fx("b2-lemma18/A.txt")
    assert induced_substructure(A, A.domain) == A
    sub = induced_substructure(A, ["1", "2", "3"])
    assert sub.relations["R"] == {("1", "2", "3")} and sub.relations["T"] == {("2", "3")}
    assert induced_substructure(A, []).domain == ()


def test_matrix_encoding_examples():
    S = Structure(["a", "b"], (("R", 2),), {"R": [("a", "b")]})
    assert encode_matrix(S) == "001" + "0100"
    T = Structure(["x"], (("P", 1),), {})
    assert encode_matrix(T) == "01" + "0"


@pytest.mark.parametrize("label,S", fixture_structures(), ids=lambda x: x if isinstance(x, str) else "")
def test_round_trips_on_fixtures(label, S):
    bits = encode_matrix(S)
    assert decode_matrix(bits, S.signature, S.domain) == S
    n = len(S.domain)
    assert len(bits) == n + 1 + sum(n ** ar for _, ar in S.signature)
    assert decode_list(encode_list(S), S.signature) == S


def test_list_encoding_of_empty_structure_is_header_only():
    S = Structure([], (("R", 2),), {})
    assert decode_list(encode_list(S)) == S


def test_decode_list_rejects_unknown_elements():
    with pytest.raises(ValueError):
        decode_list("domain: a\nR/2: (a b)\n")
