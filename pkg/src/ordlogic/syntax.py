"""Formula AST, s-expression parser/printer and fragment membership.

Variables are the indexed family x1, x2, ...; an atom stores the relation
name and the tuple of variable indices it is applied to.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Atom", "Not", "And", "Or", "Implies", "Exists", "Forall", "Top", "Bottom",
    "Formula", "FormulaSyntaxError", "FRAGMENTS", "ORDERED", "parse_formula",
    "to_sexpr", "free_variables", "quantifier_rank", "signature_of",
    "depth_membership", "is_guarded", "classify", "conj", "disj", "subformulas",
    "max_arity", "shift", "guarded_block",
]


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple[int, ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"0-ary predicate {self.rel!r} is not supported")
        if any(i < 1 for i in self.args):
            raise ValueError(f"variable indices must be positive: {self.args}")


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


Formula = Union[Atom, Not, And, Or, Implies, Exists, Forall, Top, Bottom]
Binary = (And, Or, Implies)
Quant = (Exists, Forall)

FRAGMENTS = ("FO", "L_pre", "L_suf", "L_inf", "GF", "G_pre", "G_suf", "G_inf")
ORDERED = {"L_pre": "prefix", "L_suf": "suffix", "L_inf": "infix",
           "G_pre": "prefix", "G_suf": "suffix", "G_inf": "infix"}


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Top()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Bottom()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


# --------------------------------------------------------------------- parser

class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_VAR = re.compile(r"x(\d+)$")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
_KEYWORDS = {"not", "and", "or", "implies", "iff", "forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError("unexpected character", pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    return tokens


def _var_index(tok: str, pos: int) -> int:
    m = _VAR.match(tok)
    if not m:
        raise FormulaSyntaxError(f"expected variable x<N>, got {tok!r}", pos)
    idx = int(m.group(1))
    if idx < 1:
        raise FormulaSyntaxError(f"non-positive variable index in {tok!r}", pos)
    return idx


def parse_formula(text: str) -> Formula:
    """Parse the s-expression grammar; ``iff`` is expanded on the fly."""
    tokens = _tokenize(text)
    end = len(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, end)

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of input", end)
        tok = tokens[pos]
        pos += 1
        return tok

    def expect_close():
        tok, p = take()
        if tok != ")":
            raise FormulaSyntaxError(f"expected ')', got {tok!r}", p)

    def formula() -> Formula:
        tok, p = take()
        if tok == "true":
            return Top()
        if tok == "false":
            return Bottom()
        if tok != "(":
            raise FormulaSyntaxError(f"expected '(', got {tok!r}", p)
        head, hp = take()
        if head in ("(", ")"):
            raise FormulaSyntaxError("expected operator or relation name", hp)
        if head == "not":
            f = Not(formula())
        elif head in ("and", "or", "implies", "iff"):
            a = formula()
            b = formula()
            if head == "and":
                f = And(a, b)
            elif head == "or":
                f = Or(a, b)
            elif head == "implies":
                f = Implies(a, b)
            else:
                f = And(Implies(a, b), Implies(b, a))
        elif head in ("forall", "exists"):
            vtok, vp = take()
            v = _var_index(vtok, vp)
            body = formula()
            f = Forall(v, body) if head == "forall" else Exists(v, body)
        else:
            if head == "=":
                raise FormulaSyntaxError("equality is not supported", hp)
            if not _IDENT.match(head):
                raise FormulaSyntaxError(f"bad relation name {head!r}", hp)
            args = []
            while peek()[0] not in (")", None):
                t, tp = take()
                args.append(_var_index(t, tp))
            if not args:
                raise FormulaSyntaxError(f"0-ary predicate {head!r}", hp)
            f = Atom(head, tuple(args))
        expect_close()
        return f

    result = formula()
    if pos != len(tokens):
        raise FormulaSyntaxError("trailing input", tokens[pos][1])
    return result


def to_sexpr(f: Formula) -> str:
    if isinstance(f, Atom):
        return "(" + " ".join([f.rel] + [f"x{i}" for i in f.args]) + ")"
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        return f"(not {to_sexpr(f.body)})"
    if isinstance(f, Binary):
        op = {And: "and", Or: "or", Implies: "implies"}[type(f)]
        return f"({op} {to_sexpr(f.left)} {to_sexpr(f.right)})"
    q = "forall" if isinstance(f, Forall) else "exists"
    return f"({q} x{f.var} {to_sexpr(f.body)})"


# ------------------------------------------------------------------ utilities

def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Quant):
        yield from subformulas(f.body)


def _free(f: Formula) -> frozenset[int]:
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, Not):
        return _free(f.body)
    if isinstance(f, Binary):
        return _free(f.left) | _free(f.right)
    return _free(f.body) - {f.var}


def free_variables(f: Formula) -> list[int]:
    return sorted(_free(f))


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, Binary):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    if isinstance(f, Quant):
        return 1 + quantifier_rank(f.body)
    return 0


def signature_of(f: Formula) -> dict[str, int]:
    """Relation symbols with their arities; raises on inconsistent use."""
    sig: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            if sig.setdefault(g.rel, len(g.args)) != len(g.args):
                raise ValueError(f"relation {g.rel} used with two arities")
    return sig


def max_arity(f: Formula) -> int:
    return max(signature_of(f).values(), default=1)


def shift(f: Formula, delta: int) -> Formula:
    """Rename every variable x_i to x_{i+delta}."""
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(i + delta for i in f.args))
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(shift(f.body, delta))
    if isinstance(f, Binary):
        return type(f)(shift(f.left, delta), shift(f.right, delta))
    return type(f)(f.var + delta, shift(f.body, delta))


# ------------------------------------------------------------------ fragments

def _is_run(args: tuple[int, ...]) -> bool:
    return all(b == a + 1 for a, b in zip(args, args[1:]))


def _atom_ok(args: tuple[int, ...], n: int, kind: str) -> bool:
    if not _is_run(args) or args[-1] > n:
        return False
    if kind == "prefix":
        return args[0] == 1
    if kind == "suffix":
        return args[-1] == n
    return True


def _suf_member(f: Formula, n: int) -> bool:
    if isinstance(f, Atom):
        return _atom_ok(f.args, n, "suffix")
    if isinstance(f, (Top, Bottom)):
        return True
    if isinstance(f, Not):
        return _suf_member(f.body, n)
    if isinstance(f, Binary):
        return _suf_member(f.left, n) and _suf_member(f.right, n)
    return f.var == n + 1 and _suf_member(f.body, n + 1)


def _min_depth(f: Formula, kind: str) -> int | None:
    """Least n with f in L_pre(n) / L_inf(n), or None.

    Membership is upward closed once the boolean clause is allowed to lift
    subformulas, so the least depth determines all the others.
    """
    if isinstance(f, Atom):
        if not _is_run(f.args) or (kind == "prefix" and f.args[0] != 1):
            return None
        return f.args[-1]
    if isinstance(f, (Top, Bottom)):
        return 0
    if isinstance(f, Not):
        return _min_depth(f.body, kind)
    if isinstance(f, Binary):
        a = _min_depth(f.left, kind)
        b = _min_depth(f.right, kind)
        return None if a is None or b is None else max(a, b)
    inner = _min_depth(f.body, kind)
    if inner is None or inner > f.var:
        return None
    return f.var - 1


def depth_membership(f: Formula, n: int, frag: str) -> bool:
    """Decide f in frag(n) for an ordered fragment label."""
    if frag not in ORDERED:
        raise ValueError(f"not an ordered fragment: {frag}")
    kind = ORDERED[frag]
    if kind == "suffix":
        ok = _suf_member(f, n)
    else:
        d = _min_depth(f, kind)
        ok = d is not None and d <= n
    if ok and frag.startswith("G_"):
        ok = is_guarded(f)
    return ok


def _block(f: Formula):
    """Maximal run of same-kind quantifiers starting at f: (vars, inner bodies)."""
    kind = type(f)
    vars_, bodies = [], []
    while isinstance(f, kind):
        vars_.append(f.var)
        f = f.body
        bodies.append(f)
    return vars_, bodies


def is_guarded(f: Formula) -> bool:
    """Membership in the guarded fragment GF."""
    if isinstance(f, (Atom, Top, Bottom)):
        return True
    if isinstance(f, Not):
        return is_guarded(f.body)
    if isinstance(f, Binary):
        return is_guarded(f.left) and is_guarded(f.right)
    return guarded_block(f) is not None


def guarded_block(f):
    """Split a quantifier node into (vars, guard, rest) for its first guarded
    level, or (vars, None, body) for a single-variable quantifier, or None."""
    vars_, bodies = _block(f)
    for level, body in enumerate(bodies):
        if isinstance(f, Forall):
            if not isinstance(body, Implies):
                continue
        elif not isinstance(body, And):
            continue
        guard, rest = body.left, body.right
        covered = set(guard.args) if isinstance(guard, Atom) else set()
        if (isinstance(guard, Atom) and _free(rest) <= covered
                and set(vars_[:level + 1]) <= covered and is_guarded(rest)):
            return tuple(vars_[:level + 1]), guard, rest
    if _free(f.body) <= {f.var} and is_guarded(f.body):
        return (f.var,), None, f.body
    return None


def classify(f: Formula) -> set[str]:
    labels = {"FO"}
    guarded = is_guarded(f)
    if guarded:
        labels.add("GF")
    if not _free(f):
        for frag, kind in ORDERED.items():
            if frag.startswith("L_") and depth_membership(f, 0, frag):
                labels.add(frag)
                if guarded:
                    labels.add("G_" + frag[2:])
    return labels
