"""Model checking over finite structures.

``eval_naive`` is plain Tarskian recursion and serves as the reference.
``eval_windowed`` keeps at most N variables bound at any time (N the largest
arity in the formula), dropping variables that can no longer be referenced.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .structures import Structure
from .syntax import (Atom, Binary, Bottom, Exists, Forall, Formula, Implies,
                     Not, Or, And, Top, _free, _min_depth, _suf_member,
                     max_arity, signature_of)

__all__ = ["eval_naive", "eval_windowed", "eval_windowed_traced",
           "peak_window", "UnsupportedFormula", "windowed_mode"]


class UnsupportedFormula(ValueError):
    pass


@lru_cache(maxsize=4096)
def _analyse(f: Formula):
    return signature_of(f), _free(f), max_arity(f)


def _check(S: Structure, s: Mapping[int, str], f: Formula):
    arity = S.arity
    used, free, _ = _analyse(f)
    for rel, ar in used.items():
        if rel not in arity:
            raise KeyError(f"unknown relation symbol {rel}")
        if arity[rel] != ar:
            raise ValueError(f"{rel} has arity {arity[rel]}, used with {ar}")
    unbound = sorted(free - set(s))
    if unbound:
        raise KeyError(f"unbound free variables {['x%d' % i for i in unbound]}")
    dom = set(S.domain)
    for v in s.values():
        if str(v) not in dom:
            raise ValueError(f"assigned element {v!r} not in domain")


def eval_naive(S: Structure, s: Mapping[int, str], f: Formula) -> bool:
    s = {int(k): str(v) for k, v in s.items()}
    _check(S, s, f)
    return _naive(S.domain, S.relations, s, f)


def _naive(dom, rels, env: dict, f) -> bool:
    if isinstance(f, Atom):
        return tuple(env[i] for i in f.args) in rels[f.rel]
    if isinstance(f, And):
        return _naive(dom, rels, env, f.left) and _naive(dom, rels, env, f.right)
    if isinstance(f, Or):
        return _naive(dom, rels, env, f.left) or _naive(dom, rels, env, f.right)
    if isinstance(f, Implies):
        return (not _naive(dom, rels, env, f.left)) or _naive(dom, rels, env, f.right)
    if isinstance(f, Not):
        return not _naive(dom, rels, env, f.body)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    v = f.var
    saved = env.get(v, _MISSING)
    want = isinstance(f, Exists)
    result = not want
    for a in dom:
        env[v] = a
        if _naive(dom, rels, env, f.body) == want:
            result = want
            break
    if saved is _MISSING:
        del env[v]
    else:
        env[v] = saved
    return result


_MISSING = object()


# ------------------------------------------------------------------ windowed

@lru_cache(maxsize=4096)
def windowed_mode(f: Formula, n: int) -> str:
    """'suffix' or 'prefix', the evaluation discipline used for f at depth n."""
    if _suf_member(f, n):
        return "suffix"
    d = _min_depth(f, "prefix")
    if d is not None and d <= n:
        return "prefix"
    raise UnsupportedFormula("formula is in neither L_suf nor L_pre at depth %d" % n)


class _Run:
    __slots__ = ("dom", "rels", "N", "peak")

    def __init__(self, S, N):
        self.dom = S.domain
        self.rels = S.relations
        self.N = N
        self.peak = 0

    def note(self, window):
        if len(window) > self.peak:
            self.peak = len(window)

    # window: dict index -> element, kept contiguous
    def suf(self, window: dict, n: int, f) -> bool:
        if isinstance(f, Atom):
            return tuple(window[i] for i in f.args) in self.rels[f.rel]
        if isinstance(f, And):
            return self.suf(window, n, f.left) and self.suf(window, n, f.right)
        if isinstance(f, Or):
            return self.suf(window, n, f.left) or self.suf(window, n, f.right)
        if isinstance(f, Implies):
            return (not self.suf(window, n, f.left)) or self.suf(window, n, f.right)
        if isinstance(f, Not):
            return not self.suf(window, n, f.body)
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        base = dict(window)
        m = min(base) if base else n + 1
        while len(base) >= self.N:
            del base[m]
            m += 1
        want = isinstance(f, Exists)
        for a in self.dom:
            child = dict(base)
            child[n + 1] = a
            self.note(child)
            if self.suf(child, n + 1, f.body) == want:
                return want
        return not want

    def pre(self, window: dict, f) -> bool:
        if isinstance(f, Atom):
            return tuple(window[i] for i in f.args) in self.rels[f.rel]
        if isinstance(f, And):
            return self.pre(window, f.left) and self.pre(window, f.right)
        if isinstance(f, Or):
            return self.pre(window, f.left) or self.pre(window, f.right)
        if isinstance(f, Implies):
            return (not self.pre(window, f.left)) or self.pre(window, f.right)
        if isinstance(f, Not):
            return not self.pre(window, f.body)
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        j = f.var
        base = {k: v for k, v in window.items() if k < j}
        want = isinstance(f, Exists)
        for a in self.dom:
            child = dict(base)
            if j <= self.N:
                child[j] = a
            self.note(child)
            if self.pre(child, f.body) == want:
                return want
        return not want


def eval_windowed_traced(S: Structure, s: Mapping[int, str], f: Formula):
    """(truth value, peak window size) in one run."""
    s = {int(k): str(v) for k, v in s.items()}
    _check(S, s, f)
    n = max(s, default=0)
    mode = windowed_mode(f, n)
    run = _Run(S, _analyse(f)[2])
    if mode == "suffix":
        lo = max(1, n - run.N + 1)
        missing = [i for i in range(lo, n + 1) if i not in s]
        if missing:
            raise KeyError(f"assignment window must cover x{lo}..x{n}")
        window = {i: s[i] for i in range(lo, n + 1)}
        run.note(window)
        return run.suf(window, n, f), run.peak
    window = {i: v for i, v in s.items() if i <= run.N}
    run.note(window)
    return run.pre(window, f), run.peak


def eval_windowed(S: Structure, s: Mapping[int, str], f: Formula) -> bool:
    return eval_windowed_traced(S, s, f)[0]


def peak_window(S: Structure, s: Mapping[int, str], f: Formula) -> int:
    """Largest number of simultaneously bound variables during eval_windowed."""
    return eval_windowed_traced(S, s, f)[1]
