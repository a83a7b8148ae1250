"""Random and exhaustive formula generators for the ordered fragments."""
from __future__ import annotations

import itertools
import random
from typing import Iterator

from .structures import Structure
from .syntax import (And, Atom, Exists, Forall, Formula, Implies, Not, Or,
                     Top, is_guarded)

__all__ = ["random_formula", "random_sentences", "enumerate_sentences",
           "all_structures", "atoms_at"]


def atoms_at(sig, n: int, kind: str) -> list[Atom]:
    """Atoms usable at depth n (variables x1..xn) in the given affix discipline."""
    out = []
    for name, ar in sig:
        if ar > n:
            continue
        if kind == "suffix":
            starts = [n - ar + 1]
        elif kind == "prefix":
            starts = [1]
        else:
            starts = range(1, n - ar + 2)
        for s in starts:
            out.append(Atom(name, tuple(range(s, s + ar))))
    return out


def _quant_vars(n: int, kind: str) -> list[int]:
    # the suffix grammar forbids requantification
    return [n + 1] if kind == "suffix" else list(range(1, n + 2))


def random_formula(rng: random.Random, sig, rank: int, kind: str = "suffix",
                   n: int = 0, size: int = 3) -> Formula:
    """A formula of the given affix kind at depth n, quantifier rank <= rank.

    ``size`` bounds how many boolean connectives are stacked at each level.
    """
    atoms = atoms_at(sig, n, kind)

    def leaf():
        if rank > 0 and (not atoms or rng.random() < 0.55):
            j = rng.choice(_quant_vars(n, kind))
            q = rng.choice((Exists, Forall))
            return q(j, random_formula(rng, sig, rank - 1, kind, j, size))
        if not atoms:
            return Top()
        return rng.choice(atoms)

    def build(budget):
        if budget <= 0 or rng.random() < 0.35:
            f = leaf()
            return Not(f) if rng.random() < 0.3 else f
        op = rng.choice((And, Or, Implies))
        left = rng.randint(0, budget - 1)
        return op(build(left), build(budget - 1 - left))

    return build(rng.randint(0, size))


def random_guarded(rng: random.Random, sig, rank: int, kind: str = "suffix",
                   n: int = 0, tries: int = 200) -> Formula:
    """Rejection sampling: a guarded formula built from atom-guarded blocks."""
    for _ in range(tries):
        f = _guarded_attempt(rng, sig, rank, kind, n)
        if is_guarded(f):
            return f
    raise RuntimeError("could not sample a guarded formula")


def _guarded_attempt(rng, sig, rank, kind, n):
    atoms = atoms_at(sig, n, kind)
    parts = []
    for _ in range(rng.randint(1, 2)):
        if rank > 0 and (not atoms or rng.random() < 0.6):
            # block x_{n+1}; guard covers the block and what it must see
            guards = [a for a in atoms_at(sig, n + 1, kind) if n + 1 in a.args]
            inner = _guarded_attempt(rng, sig, rank - 1, kind, n + 1)
            if n == 0 or not guards:
                q = rng.choice((Exists, Forall))
                f = q(n + 1, inner)
            else:
                g = rng.choice(guards)
                if rng.random() < 0.5:
                    f = Exists(n + 1, And(g, inner))
                else:
                    f = Forall(n + 1, Implies(g, inner))
        elif atoms:
            f = rng.choice(atoms)
        else:
            f = Top()
        parts.append(Not(f) if rng.random() < 0.25 else f)
    out = parts[0]
    for p in parts[1:]:
        out = rng.choice((And, Or))(out, p)
    return out


def random_sentences(seed: int, sig, count: int, rank: int, kind: str,
                     guarded: bool = False) -> list[Formula]:
    rng = random.Random(seed)
    gen = random_guarded if guarded else random_formula
    return [gen(rng, sig, rank, kind) for _ in range(count)]


def enumerate_sentences(sig, rank: int, kind: str) -> list[Formula]:
    """Every sentence built from single quantified literals and binary
    conjunctions/disjunctions of them, with nesting up to ``rank``.

    This is a finite slice of the fragment: at each level the body is a
    literal, a quantified formula, or a conjunction/disjunction of two.
    """
    cache: dict[tuple[int, int], list[Formula]] = {}

    def items(n, r):
        key = (n, r)
        if key in cache:
            return cache[key]
        base = []
        for a in atoms_at(sig, n, kind):
            base += [a, Not(a)]
        if r > 0:
            for j in _quant_vars(n, kind):
                for body in bodies(j, r - 1):
                    base.append(Exists(j, body))
                    base.append(Forall(j, body))
        cache[key] = base
        return base

    def bodies(n, r):
        its = items(n, r)
        out = list(its)
        for a, b in itertools.combinations(its, 2):
            out.append(And(a, b))
            out.append(Or(a, b))
        return out

    seen = []
    uniq = set()
    for f in items(0, rank):
        if f not in uniq:
            uniq.add(f)
            seen.append(f)
    return seen


def all_structures(sig, size: int, names=None) -> Iterator[Structure]:
    """Every structure over ``sig`` with exactly ``size`` elements."""
    dom = tuple(names) if names else tuple(str(i) for i in range(size))
    spaces = [list(itertools.product(dom, repeat=ar)) for _, ar in sig]
    total = sum(len(s) for s in spaces)
    for mask in range(1 << total):
        rels = {}
        pos = 0
        for (name, _), space in zip(sig, spaces):
            rels[name] = [t for i, t in enumerate(space) if mask >> (pos + i) & 1]
            pos += len(space)
        yield Structure(dom, sig, rels)
