"""Formula rewriting: infix-to-suffix conversion, head introduction and the
two normal forms with existential/universal requirements."""
from __future__ import annotations

from dataclasses import dataclass, field

from .evaluator import eval_naive
from .structures import Structure
from .syntax import (And, Atom, Binary, Bottom, Exists, Forall, Formula,
                     Implies, Not, Or, Quant, Top, _free, conj, disj,
                     depth_membership, guarded_block, is_guarded, shift,
                     signature_of)

__all__ = ["to_suffix_form", "introduce_head", "Requirement", "NormalForm",
           "to_normal_form_pre", "to_normal_form_guarded", "normalize_pair",
           "extract_requirements", "read_normal_form", "is_nform_pre",
           "is_nform_guarded", "simplify", "RewriteError"]


class RewriteError(ValueError):
    pass


# ------------------------------------------------------------- simplification

def simplify(f: Formula) -> Formula:
    """Fold the constants true/false (domains are nonempty)."""
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        b = simplify(f.body)
        if isinstance(b, Top):
            return Bottom()
        if isinstance(b, Bottom):
            return Top()
        if isinstance(b, Not):
            return b.body
        return Not(b)
    if isinstance(f, Quant):
        guard_shape = And if isinstance(f, Exists) else Implies
        if isinstance(f.body, guard_shape) and isinstance(f.body.left, Atom):
            # keep the guard in place so the result stays guarded
            rest = simplify(f.body.right)
            if isinstance(f, Exists) and isinstance(rest, Bottom):
                return Bottom()
            if isinstance(f, Forall) and isinstance(rest, Top):
                return Top()
            return type(f)(f.var, guard_shape(f.body.left, rest))
        b = simplify(f.body)
        if isinstance(b, (Top, Bottom)):
            return b
        return type(f)(f.var, b)
    a, b = simplify(f.left), simplify(f.right)
    if isinstance(f, Implies):
        if isinstance(a, Bottom) or isinstance(b, Top):
            return Top()
        if isinstance(a, Top):
            return b
        if isinstance(b, Bottom):
            return simplify(Not(a))
        return Implies(a, b)
    unit, zero = (Top, Bottom) if isinstance(f, And) else (Bottom, Top)
    if isinstance(a, zero) or isinstance(b, zero):
        return zero()
    if isinstance(a, unit):
        return b
    if isinstance(b, unit):
        return a
    return type(f)(a, b)


def _qfree(f: Formula) -> bool:
    if isinstance(f, Quant):
        return False
    if isinstance(f, Not):
        return _qfree(f.body)
    if isinstance(f, Binary):
        return _qfree(f.left) and _qfree(f.right)
    return True


# ------------------------------------------------------------ infix -> suffix

def _home(c: Formula) -> int:
    return c.args[-1] if isinstance(c, Atom) else c.var - 1


def _dnf(f: Formula, pos: bool = True) -> list[list[tuple[Formula, bool]]]:
    """Disjunctive normal form over components (atoms and quantified parts)."""
    if isinstance(f, (Atom, Exists, Forall)):
        return [[(f, pos)]]
    if isinstance(f, Top):
        return [[]] if pos else []
    if isinstance(f, Bottom):
        return [] if pos else [[]]
    if isinstance(f, Not):
        return _dnf(f.body, not pos)
    if isinstance(f, Implies):
        f = Or(Not(f.left), f.right)
    conjunctive = isinstance(f, And) == pos
    left, right = _dnf(f.left, pos), _dnf(f.right, pos)
    if not conjunctive:
        out = left + right
    else:
        out = [a + b for a in left for b in right]
    return _tidy(out)


def _tidy(clauses):
    out, seen = [], set()
    for c in clauses:
        lits = list(dict.fromkeys(c))
        if any((comp, not pol) in lits for comp, pol in lits):
            continue
        key = frozenset(lits)
        if key not in seen:
            seen.add(key)
            out.append(lits)
    return out


def _lit(comp, pol):
    return comp if pol else Not(comp)


def _suffixize(f: Formula) -> Formula:
    """Rewrite so that every quantified component is in suffix form."""
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_suffixize(f.body))
    if isinstance(f, Binary):
        return type(f)(_suffixize(f.left), _suffixize(f.right))
    j = f.var
    body = _suffixize(f.body)
    if isinstance(f, Exists):
        terms = []
        for clause in _dnf(body):
            inner = [_lit(c, p) for c, p in clause if _home(c) == j]
            outer = [_lit(c, p) for c, p in clause if _home(c) < j]
            q = [Exists(j, conj(inner))] if inner else []
            terms.append(conj(outer + q))
        return simplify(disj(terms))
    # universal: work on the conjunctive normal form
    terms = []
    for clause in _dnf(body, False):
        inner = [_lit(c, not p) for c, p in clause if _home(c) == j]
        outer = [_lit(c, not p) for c, p in clause if _home(c) < j]
        q = [Forall(j, disj(inner))] if inner else []
        terms.append(disj(outer + q))
    return simplify(conj(terms))


def to_suffix_form(f: Formula) -> Formula:
    """An equivalent L_suf sentence for an L_inf sentence.

    Quantified subformulas are treated as atoms; at each quantifier the body
    is put in DNF (CNF for universals) and every part that does not mention
    the bound variable as its last argument is moved outside.
    """
    if _free(f) or not depth_membership(f, 0, "L_inf"):
        raise RewriteError("input must be an L_inf sentence")
    return _suffixize(f)


# -------------------------------------------------------------------- heads

def introduce_head(phi: Formula, psi: Formula, head: str = "H"):
    """Guard both formulas by a common fresh head symbol."""
    for f in (phi, psi):
        if head in signature_of(f):
            raise RewriteError(f"head symbol {head} already occurs")
    n = max(_free(phi) | _free(psi), default=0)
    return _with_head(phi, head, n), _with_head(psi, head, n)


def _forall_block(vars_, body):
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def _exists_block(vars_, body):
    for v in reversed(vars_):
        body = Exists(v, body)
    return body


def _with_head(f: Formula, head: str, n: int) -> Formula:
    if n == 0:
        return And(Exists(1, Atom(head, (1,))),
                   Forall(1, Implies(Atom(head, (1,)), f)))
    args = tuple(range(1, n + 1))
    return And(Atom(head, args), _forall_block(args, Implies(Atom(head, args), f)))


# ------------------------------------------------------------- normal forms

@dataclass(frozen=True)
class Requirement:
    """One conjunct of a normal form.

    Prefix shape: forall x1..x_ell (premise -> Q x_{ell+1} matrix).
    Guarded shape: forall x1..x_ell (premise -> Q block (guard op matrix)),
    where a universal may carry an extra ``condition`` before its block.
    """
    kind: str                 # "exists" | "forall"
    ell: int
    premise: Formula | None   # None: no premise (ell == 0, or an unguarded ell == 1)
    block: tuple[int, ...]
    matrix: Formula
    guard: Atom | None = None
    condition: Formula = field(default_factory=Top)

    def to_formula(self) -> Formula:
        inner = self.matrix
        if self.guard is not None:
            inner = (And(self.guard, inner) if self.kind == "exists"
                     else Implies(self.guard, inner))
        q = _exists_block if self.kind == "exists" else _forall_block
        body = q(self.block, inner)
        if not isinstance(self.condition, Top):
            body = Implies(self.condition, body)
        if self.premise is not None and not isinstance(self.premise, Top):
            body = Implies(self.premise, body)
        return _forall_block(tuple(range(1, self.ell + 1)), body)


@dataclass
class NormalForm:
    head: str
    head_arity: int           # 0: sentence head, written exists x1 H(x1)
    existential: list = field(default_factory=list)
    universal: list = field(default_factory=list)
    residual: list = field(default_factory=list)
    fresh: list = field(default_factory=list)
    logic: str = "L_pre"

    def head_formula(self) -> Formula:
        if self.head_arity == 0:
            return Exists(1, Atom(self.head, (1,)))
        return Atom(self.head, tuple(range(1, self.head_arity + 1)))

    def to_formula(self) -> Formula:
        parts = [self.head_formula()]
        parts += [r.to_formula() for r in self.existential]
        parts += [r.to_formula() for r in self.universal]
        parts += list(self.residual)
        return conj(parts)

    def requirements(self):
        return list(self.existential), list(self.universal)


def extract_requirements(nf: NormalForm):
    return nf.requirements()


class _Fresh:
    def __init__(self, pool: str, taken):
        self.pool = pool
        self.taken = set(taken)
        self.count = 0
        self.made: list[tuple[str, int]] = []

    def __call__(self, arity: int) -> str:
        while True:
            self.count += 1
            name = f"{self.pool}{self.count}"
            if name not in self.taken:
                self.taken.add(name)
                self.made.append((name, arity))
                return name


def _get(f, path):
    for i in path:
        if isinstance(f, Binary):
            f = f.left if i == 0 else f.right
        else:
            f = f.body
    return f


def _replace(f, path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(f, Binary):
        if i == 0:
            return type(f)(_replace(f.left, rest, new), f.right)
        return type(f)(f.left, _replace(f.right, rest, new))
    if isinstance(f, Not):
        return Not(_replace(f.body, rest, new))
    return type(f)(f.var, _replace(f.body, rest, new))


def _conjuncts(f):
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _expand_ref(ref: Structure | None, name: str, arity: int, chi: Formula):
    """Interpret a fresh symbol in the reference model by its definition."""
    if ref is None:
        return None
    import itertools
    tuples = []
    for t in itertools.product(ref.domain, repeat=arity):
        s = {i + 1: x for i, x in enumerate(t)}
        if eval_naive(ref, s, chi):
            tuples.append(t)
    return ref.expand({name: tuples}, {name: arity})


def _head_setup(f, head, ref, ref_tuple):
    n = max(_free(f), default=0)
    if head in signature_of(f):
        raise RewriteError(f"head symbol {head} already occurs")
    if ref is not None:
        if n == 0:
            ht = [(str(ref_tuple[0]),)] if ref_tuple else [(ref.domain[0],)]
        else:
            if ref_tuple is None or len(ref_tuple) < n:
                raise RewriteError("open input needs a reference tuple")
            ht = [tuple(map(str, ref_tuple[:n]))]
        ref = ref.expand({head: ht}, {head: max(n, 1)})
    return n, ref


def _sentence_value(chi, ref, where):
    if ref is None:
        raise RewriteError(f"sentence-level subformula {where} needs a reference structure")
    return eval_naive(ref, {}, chi)


# ........................................................... prefix version

def _innermost_quant(f, path=()):
    if isinstance(f, Quant):
        found = _innermost_quant(f.body, path + (0,))
        return found if found is not None else path
    if isinstance(f, Not):
        return _innermost_quant(f.body, path + (0,))
    if isinstance(f, Binary):
        found = _innermost_quant(f.left, path + (0,))
        if found is None:
            found = _innermost_quant(f.right, path + (1,))
        return found
    return None


def _match_pre(c: Formula) -> Requirement | None:
    vars_ = []
    body = c
    while isinstance(body, Forall) and body.var == len(vars_) + 1:
        vars_.append(body.var)
        body = body.body
    m = len(vars_)
    if (isinstance(body, Implies) and _qfree(body.left)
            and isinstance(body.right, Quant) and body.right.var == m + 1
            and _qfree(body.right.body)):
        kind = "exists" if isinstance(body.right, Exists) else "forall"
        return Requirement(kind, m, body.left, (m + 1,), body.right.body)
    if _qfree(body) and m >= 1:
        return Requirement("forall", m - 1, None, (m,), body)
    if isinstance(body, Exists) and body.var == m + 1 and _qfree(body.body):
        return Requirement("exists", m, None, (m + 1,), body.body)
    return None


def to_normal_form_pre(f: Formula, head: str = "H", pool: str = "_nf",
                       ref: Structure | None = None, ref_tuple=None,
                       taken=()):
    """Normal form with prefix requirements; returns (NormalForm, fresh symbols).

    With ``ref`` (a model of f, and the tuple for the free variables) the
    expansion of ref to the new symbols is stored on the result as
    ``nf.model``.
    """
    n = max(_free(f), default=0)
    if not depth_membership(f, n, "L_pre"):
        raise RewriteError("input is not in L_pre")
    n, ref = _head_setup(f, head, ref, ref_tuple)
    fresh = _Fresh(pool, set(signature_of(f)) | {head} | set(taken))
    nf = NormalForm(head, n, logic="L_pre")
    if n == 0:
        pending = _conjuncts(f)
    else:
        args = tuple(range(1, n + 1))
        pending = [_forall_block(args, Implies(Atom(head, args), f))]
    done: list[Requirement] = []
    while pending:
        c = simplify(pending.pop(0))
        if isinstance(c, And):
            pending[:0] = _conjuncts(c)
            continue
        if isinstance(c, Top):
            continue
        if isinstance(c, Not) and isinstance(c.body, Quant):
            dual = Forall if isinstance(c.body, Exists) else Exists
            pending.insert(0, dual(c.body.var, Not(c.body.body)))
            continue
        req = _match_pre(c)
        if req is not None:
            done.append(req)
            continue
        if _qfree(c):
            nf.residual.append(c)
            continue
        path = _innermost_quant(c)
        chi = _get(c, path)
        k = chi.var
        if k == 1:
            truth = _sentence_value(chi, ref, "at depth 1")
            pending.insert(0, _replace(c, path, Top() if truth else Bottom()))
            pending.append(chi if truth else simplify(Not(chi)))
            continue
        name = fresh(k - 1)
        atom = Atom(name, tuple(range(1, k)))
        lam = chi.body
        if isinstance(chi, Exists):
            done.append(Requirement("exists", k - 1, atom, (k,), lam))
            done.append(Requirement("forall", k - 1, Not(atom), (k,), simplify(Not(lam))))
        else:
            done.append(Requirement("forall", k - 1, atom, (k,), lam))
            done.append(Requirement("exists", k - 1, Not(atom), (k,), simplify(Not(lam))))
        ref = _expand_ref(ref, name, k - 1, chi)
        pending.insert(0, _replace(c, path, atom))
    nf.existential = [r for r in done if r.kind == "exists"]
    nf.universal = [r for r in done if r.kind == "forall"]
    nf.fresh = list(fresh.made)
    nf.model = ref
    return nf, list(fresh.made)


# .......................................................... guarded version

def _to_existential(f: Formula) -> Formula:
    """Rewrite every universal block as a negated existential one."""
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_to_existential(f.body))
    if isinstance(f, Binary):
        return type(f)(_to_existential(f.left), _to_existential(f.right))
    blk = guarded_block(f)
    if blk is None:
        raise RewriteError("input is not guarded")
    vars_, guard, rest = blk
    rest = _to_existential(rest)
    if isinstance(f, Exists):
        return _exists_block(vars_, And(guard, rest) if guard is not None else rest)
    inner = And(guard, Not(rest)) if guard is not None else Not(rest)
    return Not(_exists_block(vars_, inner))


@dataclass(frozen=True)
class _Block:
    path: tuple
    vars: tuple[int, ...]
    guard: Atom | None
    body: Formula
    body_path: tuple


def _parse_block(f, path) -> _Block:
    blk = guarded_block(f)
    if blk is None:
        raise RewriteError("unguarded quantifier")
    vars_, guard, rest = blk
    sub = path + (0,) * len(vars_)
    if guard is not None:
        sub = sub + (1,)
    if guard is not None:
        first = guard.args[0]
        if (guard.args != tuple(range(first, vars_[-1] + 1))
                or tuple(vars_) != tuple(range(vars_[0], vars_[-1] + 1))):
            raise RewriteError(f"unsupported guard shape {guard}")
    return _Block(path, tuple(vars_), guard, rest, sub)


def _innermost_block(f, path=(), enclosing=None):
    if isinstance(f, Exists):
        b = _parse_block(f, path)
        found = _innermost_block(b.body, b.body_path, b)
        return found if found is not None else (b, enclosing)
    if isinstance(f, Not):
        return _innermost_block(f.body, path + (0,), enclosing)
    if isinstance(f, Binary):
        found = _innermost_block(f.left, path + (0,), enclosing)
        if found is None:
            found = _innermost_block(f.right, path + (1,), enclosing)
        return found
    if isinstance(f, Forall):
        raise RewriteError("universal block survived the existential rewrite")
    return None


def _first(b: _Block) -> int:
    return b.guard.args[0] if b.guard is not None else b.vars[0]


def _shifted(atom, delta):
    return None if atom is None else shift(atom, delta)


def _match_guarded(c: Formula) -> Requirement | None:
    """Recognise a finished guarded requirement (existential form)."""
    neg = isinstance(c, Not)
    core = c.body if neg else c
    if not isinstance(core, Exists):
        return None
    try:
        b = _parse_block(core, ())
    except RewriteError:
        return None
    if b.vars[0] != 1 or not _qfree(b.body):
        return None
    if b.guard is not None and b.guard.args[0] != 1:
        return None
    if neg:
        return Requirement("forall", 0, None, b.vars, simplify(Not(b.body)), b.guard)
    return Requirement("exists", 0, None, b.vars, b.body, b.guard)


def to_normal_form_guarded(f: Formula, logic: str | None = None, head: str = "H",
                           pool: str = "_nf", ref: Structure | None = None,
                           ref_tuple=None, taken=()):
    """Normal form with guarded requirements; returns (NormalForm, fresh symbols).

    Innermost existential blocks are named by fresh atoms over their free
    variables; the defining conjuncts are shifted to start at x1. The
    universal direction is relativised to the guard of the innermost
    enclosing block.
    """
    n = max(_free(f), default=0)
    if not is_guarded(f):
        raise RewriteError("input is not guarded")
    if logic is None:
        logic = next((g for g in ("G_suf", "G_pre", "G_inf")
                      if depth_membership(f, n, g)), None)
        if logic is None:
            raise RewriteError("input is in no guarded ordered fragment")
    elif not depth_membership(f, n, logic):
        raise RewriteError(f"input is not in {logic}")
    n, ref = _head_setup(f, head, ref, ref_tuple)
    fresh = _Fresh(pool, set(signature_of(f)) | {head} | set(taken))
    nf = NormalForm(head, n, logic=logic)
    if n == 0:
        pending = [_to_existential(c) for c in _conjuncts(f)]
    else:
        args = tuple(range(1, n + 1))
        pending = [_to_existential(_forall_block(args, Implies(Atom(head, args), f)))]
    done: list[Requirement] = []
    while pending:
        c = simplify(pending.pop(0))
        if isinstance(c, And):
            pending[:0] = _conjuncts(c)
            continue
        if isinstance(c, Top):
            continue
        req = _match_guarded(c)
        if req is not None:
            done.append(req)
            continue
        if _qfree(c):
            nf.residual.append(c)
            continue
        blk, outer = _innermost_block(c)
        chi = _get(c, blk.path)
        r, l, k = _first(blk), blk.vars[0], blk.vars[-1]
        if r == l:
            truth = _sentence_value(chi, ref, "under a guard")
            d = 1 - l
            moved = shift(chi, d) if truth else shift(simplify(Not(chi)), d)
            pending.insert(0, _replace(c, blk.path, Top() if truth else Bottom()))
            pending.append(moved)
            continue
        name = fresh(l - r)
        atom = Atom(name, tuple(range(r, l)))
        lam = blk.body
        d = 1 - r
        done.append(Requirement(
            "exists", l - r, shift(atom, d), tuple(v + d for v in blk.vars),
            shift(lam, d), _shifted(blk.guard, d)))
        if outer is None:
            raise RewriteError("open block outside every guard")
        s = _first(outer)
        e = 1 - s
        top = outer.vars[-1] + e
        done.append(Requirement(
            "forall", top, _shifted(outer.guard, e),
            tuple(v + e for v in blk.vars), shift(simplify(Not(lam)), e),
            _shifted(blk.guard, e), Not(shift(atom, e))))
        ref = _expand_ref(ref, name, l - r, shift(chi, d))
        pending.insert(0, _replace(c, blk.path, atom))
    nf.existential = [r for r in done if r.kind == "exists"]
    nf.universal = [r for r in done if r.kind == "forall"]
    nf.fresh = list(fresh.made)
    nf.model = ref
    return nf, list(fresh.made)


def normalize_pair(phi: Formula, psi: Formula, logic: str, head: str = "H",
                   refs=(None, None), ref_tuples=(None, None)):
    """Normalise both sides with a shared head and disjoint fresh pools."""
    taken = set(signature_of(phi)) | set(signature_of(psi))
    out = []
    for f, pool, ref, rt in zip((phi, psi), ("_nfL", "_nfR"), refs, ref_tuples):
        if logic == "L_pre":
            nf, _ = to_normal_form_pre(f, head, pool, ref, rt, taken)
        else:
            nf, _ = to_normal_form_guarded(f, logic, head, pool, ref, rt, taken)
        out.append(nf)
    return tuple(out)


# ---------------------------------------------------------- reading back

def _split_universal_guarded(c: Formula) -> Requirement | None:
    # forall x1..x_ell (premise -> (condition ->)? forall block (guard -> matrix))
    prefix = c
    ell = 0
    while True:
        req = _universal_tail(prefix, ell)
        if req is not None:
            return req
        if not (isinstance(prefix, Forall) and prefix.var == ell + 1):
            return None
        prefix = prefix.body
        ell += 1


def _universal_tail(body, ell):
    premise = None
    if ell and isinstance(body, Implies) and isinstance(body.left, Atom) \
            and body.left.args == tuple(range(1, ell + 1)):
        premise, body = body.left, body.right
    elif ell > 1:
        return None
    condition: Formula = Top()
    if isinstance(body, Implies) and _qfree(body.left) and isinstance(body.right, Forall):
        condition, body = body.left, body.right
    if not isinstance(body, Forall) or body.var != ell + 1:
        return None
    blk = guarded_block(body)
    if blk is None:
        return None
    bvars, guard, rest = blk
    if not _qfree(rest) or (guard is None and len(bvars) != 1):
        return None
    return Requirement("forall", ell, premise, tuple(bvars), rest, guard, condition)


def _split_existential_guarded(c: Formula) -> Requirement | None:
    vars_ = []
    body = c
    while isinstance(body, Forall) and body.var == len(vars_) + 1:
        vars_.append(body.var)
        body = body.body
    ell = len(vars_)
    premise = None
    if ell:
        if not (isinstance(body, Implies) and isinstance(body.left, Atom)
                and body.left.args == tuple(range(1, ell + 1))):
            return None
        premise, body = body.left, body.right
    if not isinstance(body, Exists) or body.var != ell + 1:
        return None
    blk = guarded_block(body)
    if blk is None:
        return None
    bvars, guard, rest = blk
    if not _qfree(rest) or (guard is None and (ell or len(bvars) != 1)):
        return None
    return Requirement("exists", ell, premise, tuple(bvars), rest, guard)


def read_normal_form(f: Formula, logic: str = "L_pre", head: str | None = None) -> NormalForm:
    """Parse a formula written in normal form back into its parts."""
    parts = _conjuncts(f)
    if not parts:
        raise RewriteError("empty formula")
    h = parts[0]
    if isinstance(h, Atom) and h.args == tuple(range(1, len(h.args) + 1)):
        nf = NormalForm(h.rel, len(h.args), logic=logic)
    elif (isinstance(h, Exists) and h.var == 1 and isinstance(h.body, Atom)
          and h.body.args == (1,)):
        nf = NormalForm(h.body.rel, 0, logic=logic)
    else:
        raise RewriteError("first conjunct must be the head")
    if head is not None and nf.head != head:
        raise RewriteError(f"head is {nf.head}, expected {head}")
    for c in parts[1:]:
        if logic == "L_pre":
            req = _match_pre(c)
        else:
            req = _split_existential_guarded(c) or _split_universal_guarded(c)
        if req is None:
            if _qfree(c) and not _free(c):
                nf.residual.append(c)
                continue
            raise RewriteError("conjunct does not have a requirement shape")
        (nf.existential if req.kind == "exists" else nf.universal).append(req)
    return nf


def is_nform_pre(f: Formula) -> bool:
    try:
        read_normal_form(f, "L_pre")
    except RewriteError:
        return False
    return _parts_in(f, "L_pre")


def is_nform_guarded(f: Formula, logic: str = "G_inf") -> bool:
    try:
        read_normal_form(f, logic)
    except RewriteError:
        return False
    return _parts_in(f, logic)


def _parts_in(f: Formula, logic: str) -> bool:
    """Every conjunct lies in the fragment at the depth of its own free
    variables (requirements are sentences; only the head is open)."""
    return all(depth_membership(c, max(_free(c), default=0), logic)
               for c in _conjuncts(f))
