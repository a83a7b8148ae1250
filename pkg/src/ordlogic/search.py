"""Finite model search by grounding to propositional SAT.

Over a fixed domain {0..n-1} every formula becomes a propositional formula
over the ground atoms R(a1..ak); we Tseitin-encode it and hand it to a SAT
solver. Each size is decided exactly, so "no model up to size n" is a
complete answer for that range.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from pysat.solvers import Solver

from .structures import Structure, make_signature
from .syntax import (And, Atom, Bottom, Exists, Forall, Formula, Implies, Not,
                     Or, Top, _free, signature_of)

__all__ = ["find_model", "satisfiable", "entails", "joint_signature",
           "expansion_exists"]

_T, _F = "T", "F"


class _Grounder:
    def __init__(self, size: int, sig):
        self.dom = tuple(range(size))
        self.sig = dict(sig)
        self.atoms: dict[tuple, int] = {}
        for name, ar in sig:
            for t in itertools.product(self.dom, repeat=ar):
                self.atoms[(name, t)] = len(self.atoms) + 1
        self.top = len(self.atoms)
        self.clauses: list[list[int]] = []
        self.memo: dict = {}

    def fresh(self) -> int:
        self.top += 1
        return self.top

    def gate(self, kind: str, lits: list):
        """Literal equivalent to the and/or of lits (constants folded)."""
        absorbing, neutral = (_F, _T) if kind == "and" else (_T, _F)
        keep = []
        for l in lits:
            if l == absorbing:
                return absorbing
            if l != neutral:
                keep.append(l)
        keep = list(dict.fromkeys(keep))
        if not keep:
            return neutral
        if len(keep) == 1:
            return keep[0]
        g = self.fresh()
        if kind == "and":
            for l in keep:
                self.clauses.append([-g, l])
            self.clauses.append([g] + [-l for l in keep])
        else:
            for l in keep:
                self.clauses.append([g, -l])
            self.clauses.append([-g] + keep)
        return g

    @staticmethod
    def neg(l):
        if l == _T:
            return _F
        if l == _F:
            return _T
        return -l

    def lit(self, f: Formula, env: dict):
        key = (f, tuple(sorted((v, env[v]) for v in _free(f))))
        if key in self.memo:
            return self.memo[key]
        out = self._lit(f, env)
        self.memo[key] = out
        return out

    def _lit(self, f, env):
        if isinstance(f, Atom):
            return self.atoms[(f.rel, tuple(env[i] for i in f.args))]
        if isinstance(f, Top):
            return _T
        if isinstance(f, Bottom):
            return _F
        if isinstance(f, Not):
            return self.neg(self.lit(f.body, env))
        if isinstance(f, And):
            return self.gate("and", [self.lit(f.left, env), self.lit(f.right, env)])
        if isinstance(f, Or):
            return self.gate("or", [self.lit(f.left, env), self.lit(f.right, env)])
        if isinstance(f, Implies):
            return self.gate("or", [self.neg(self.lit(f.left, env)),
                                    self.lit(f.right, env)])
        parts = []
        for a in self.dom:
            env2 = dict(env)
            env2[f.var] = a
            parts.append(self.lit(f.body, env2))
        return self.gate("or" if isinstance(f, Exists) else "and", parts)

    def assert_true(self, l):
        if l == _F:
            self.clauses.append([])
        elif l != _T:
            self.clauses.append([l])


def joint_signature(formulas: Iterable[Formula], extra=()) -> tuple:
    sig: dict[str, int] = {}
    for name, ar in extra:
        sig[name] = ar
    for f in formulas:
        for name, ar in signature_of(f).items():
            if sig.setdefault(name, ar) != ar:
                raise ValueError(f"{name} used with two arities")
    return tuple(sorted(sig.items()))


def _solve_size(formulas, sig, size, fixed=None, fixed_domain=None):
    g = _Grounder(size, sig)
    for f in formulas:
        if _free(f):
            raise ValueError("model search expects sentences")
        g.assert_true(g.lit(f, {}))
    if fixed:
        for name, tuples in fixed.items():
            ar = g.sig[name]
            for t in itertools.product(g.dom, repeat=ar):
                v = g.atoms[(name, t)]
                g.clauses.append([v] if t in tuples else [-v])
    if any(len(c) == 0 for c in g.clauses):
        return None
    with Solver(name="cadical153", bootstrap_with=g.clauses) as s:
        if not s.solve():
            return None
        model = set(l for l in s.get_model() if l > 0)
    names = fixed_domain or tuple(str(i) for i in range(size))
    rels = {name: [] for name, _ in sig}
    for (name, t), v in g.atoms.items():
        if v in model:
            rels[name].append(tuple(names[i] for i in t))
    return Structure(names, sig, rels)


def find_model(formulas, max_size: int, sig=None, min_size: int = 1):
    """Smallest model (size min_size..max_size) of the conjunction, or None."""
    formulas = list(formulas)
    sig = make_signature(sig) if sig is not None else joint_signature(formulas)
    for n in range(min_size, max_size + 1):
        m = _solve_size(formulas, sig, n)
        if m is not None:
            return m
    return None


def satisfiable(formulas, max_size: int, sig=None) -> bool:
    return find_model(formulas, max_size, sig) is not None


def entails(premise: Formula, conclusion: Formula, max_size: int):
    """None if no countermodel of size <= max_size exists, else a countermodel."""
    return find_model([premise, Not(conclusion)], max_size)


def expansion_exists(S: Structure, formulas, sig=None):
    """An expansion of S (new symbols only) satisfying every formula, or None."""
    formulas = list(formulas)
    sig = make_signature(sig) if sig is not None else joint_signature(formulas, S.signature)
    index = {d: i for i, d in enumerate(S.domain)}
    fixed: Mapping = {name: {tuple(index[x] for x in t) for t in S.relations[name]}
                      for name, _ in S.signature if name in dict(sig)}
    return _solve_size(formulas, sig, len(S.domain), fixed, S.domain)
