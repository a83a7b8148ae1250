"""Bisimulations for the six ordered fragments.

A configuration fixes the logic (which decides both the affix discipline and
whether moves are guarded), the signature sigma the players look at, the
number of rounds and the window M (at least the largest arity in sigma).

States of the prefix and suffix logics are truncated to their first resp.
last M elements. This is exact: atoms of arity <= M only see those positions,
and every later move extends an affix that lies inside them. Infix states are
never truncated.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .structures import Structure, _names, affix_type
from .syntax import (ORDERED, Formula, depth_membership, quantifier_rank,
                     signature_of)
from .evaluator import eval_naive

__all__ = ["BisimRelation", "GameConfig", "BisimReport", "verify_bisimulation",
           "bisim_fixpoint", "guarded_bisim_fixpoint", "kround_game",
           "strategy_relation", "check_equiv_transfer", "TransferReport"]

Tuple = tuple[str, ...]
Pair = tuple[Tuple, Tuple]


@dataclass(frozen=True)
class BisimRelation:
    pairs: frozenset

    def __post_init__(self):
        norm = frozenset((tuple(map(str, a)), tuple(map(str, b)))
                         for a, b in self.pairs)
        for a, b in norm:
            if len(a) != len(b):
                raise ValueError(f"length mismatch in pair {a} ~ {b}")
        object.__setattr__(self, "pairs", norm)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        a, b = pair
        return (tuple(map(str, a)), tuple(map(str, b))) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs, key=lambda p: (len(p[0]), p)))

    def to_text(self) -> str:
        return "".join(f"({' '.join(a)}) ~ ({' '.join(b)})\n" for a, b in self)

    @classmethod
    def from_text(cls, text: str) -> "BisimRelation":
        pairs = set()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _PAIR.match(line)
            if not m:
                raise ValueError(f"line {lineno}: expected '(a b) ~ (c d)'")
            pairs.add((tuple(m.group(1).split()), tuple(m.group(2).split())))
        return cls(frozenset(pairs))


_PAIR = re.compile(r"^\(([^()]*)\)\s*~\s*\(([^()]*)\)$")


@dataclass(frozen=True)
class GameConfig:
    logic: str
    sigma: tuple[str, ...]
    rounds: int = 3
    window: int | None = None

    def __post_init__(self):
        if self.logic not in ORDERED:
            raise ValueError(f"unsupported logic {self.logic!r}")
        object.__setattr__(self, "sigma", tuple(_names(self.sigma)))

    @property
    def kind(self) -> str:
        return ORDERED[self.logic]

    @property
    def guarded(self) -> bool:
        return self.logic.startswith("G_")

    def with_rounds(self, k: int) -> "GameConfig":
        return GameConfig(self.logic, self.sigma, k, self.window)


@dataclass
class BisimReport:
    ok: bool
    clause: str | None = None
    pair: Pair | None = None
    detail: str = ""
    checked: int = 0

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"pass ({self.checked} pairs)"
        a, b = self.pair if self.pair else ((), ())
        return f"fail: {self.clause} at ({' '.join(a)}) ~ ({' '.join(b)}): {self.detail}"


class _Arena:
    """Shared per-call machinery: types, affixes, live tuples."""

    def __init__(self, A: Structure, B: Structure, cfg: GameConfig):
        self.A, self.B, self.cfg = A, B, cfg
        for S in (A, B):
            missing = [r for r in cfg.sigma if r not in S.arity]
            if missing:
                raise ValueError(f"symbols {missing} missing from a structure")
        ars = [A.arity[r] for r in cfg.sigma]
        top = max(ars, default=1)
        self.M = cfg.window if cfg.window is not None else top
        if self.M < top:
            raise ValueError(f"window {self.M} below the largest arity {top}")
        self.kind = cfg.kind
        self.guarded = cfg.guarded
        self._types = ({}, {})
        self._live = (self._live_index(A), self._live_index(B))

    def _live_index(self, S):
        by_prefix: dict[Tuple, list[Tuple]] = {}
        for t in S.live_tuples(self.cfg.sigma):
            for i in range(len(t) + 1):
                by_prefix.setdefault(t[:i], []).append(t)
        return by_prefix

    def tkey(self, side: int, t: Tuple):
        cache = self._types[side]
        if t not in cache:
            S = self.A if side == 0 else self.B
            cache[t] = affix_type(S, t, self.cfg.sigma, self.kind).atoms
        return cache[t]

    def harmonic(self, c: Tuple, d: Tuple) -> bool:
        return len(c) == len(d) and self.tkey(0, c) == self.tkey(1, d)

    def trunc(self, t: Tuple) -> Tuple:
        if len(t) <= self.M or self.kind == "infix":
            return t
        return t[:self.M] if self.kind == "prefix" else t[-self.M:]

    def spans(self, n: int, limit: int | None = None):
        """Index spans (i, j) of the kind-affixes of a length-n tuple."""
        if limit is None:
            limit = n
        if self.kind == "prefix":
            out = [(0, j) for j in range(n + 1)]
        elif self.kind == "suffix":
            out = [(n - l, n) for l in range(n + 1)]
        else:
            out = [(0, 0)] + [(i, j) for i in range(n) for j in range(i + 1, n + 1)]
        return [s for s in out if s[1] - s[0] <= limit]

    def move_limit(self, n: int) -> int:
        # longer affixes of pre/suf states lead to the same truncated state
        if self.guarded or self.kind == "infix":
            return n
        return min(n, self.M - 1)

    def live_ext(self, side: int, u: Tuple) -> list[Tuple]:
        return self._live[side].get(u, [])

    def domain(self, side: int):
        return (self.A if side == 0 else self.B).domain


def _responses(ar: _Arena, side: int, u: Tuple, v: Tuple, target_len=None):
    """Candidate spoiler moves on ``side`` extending u, each paired with the
    list of duplicator replies extending v on the other side."""
    other = 1 - side
    if ar.guarded:
        for e in ar.live_ext(side, u):
            if target_len is not None and len(e) > target_len:
                continue
            replies = [f for f in ar.live_ext(other, v) if len(f) == len(e)]
            yield e, replies
    else:
        if target_len is not None and len(u) + 1 > target_len:
            return
        replies = [v + (b,) for b in ar.domain(other)]
        for a in ar.domain(side):
            yield u + (a,), replies


def _orient(side, x, y):
    return (x, y) if side == 0 else (y, x)


# -------------------------------------------------------------- verification

def verify_bisimulation(A: Structure, B: Structure, Z: BisimRelation,
                        cfg: GameConfig, depth: int | None = None) -> BisimReport:
    """Check atomic harmony and forth/back (or gforth/gback) on every pair.

    Prefix and suffix pairs are compared through their truncation, so a
    finite Z over tuples of length <= M describes a full bisimulation. For
    infix logics Z is checked as closed up to ``depth`` (default: the longest
    tuple in Z): moves that would produce a longer tuple are not required.
    """
    if len(Z) == 0:
        return BisimReport(False, "nonempty", None, "Z is empty")
    ar = _Arena(A, B, cfg)
    pairs = {(ar.trunc(a), ar.trunc(b)) for a, b in Z.pairs}
    if depth is None:
        depth = max(len(a) for a, _ in Z.pairs)
    bound = depth if (ar.kind == "infix" and not ar.guarded) else None
    for c, d in sorted(pairs, key=lambda p: (len(p[0]), p)):
        for x in c:
            if x not in A.domain:
                return BisimReport(False, "domain", (c, d), f"{x} not in A")
        for y in d:
            if y not in B.domain:
                return BisimReport(False, "domain", (c, d), f"{y} not in B")
    checked = 0
    for c, d in sorted(pairs, key=lambda p: (len(p[0]), p)):
        checked += 1
        if not ar.harmonic(c, d):
            diff = sorted(set(ar.tkey(0, c)) ^ set(ar.tkey(1, d)))
            return BisimReport(False, "atomic harmony", (c, d),
                               "types differ on " + ", ".join(
                                   f"{r}@{i}" for (r, i), _ in diff[:4]))
        for side in (0, 1):
            mine, theirs = (c, d) if side == 0 else (d, c)
            for i, j in ar.spans(len(mine), ar.move_limit(len(mine))):
                u, v = mine[i:j], theirs[i:j]
                for e, replies in _responses(ar, side, u, v, bound):
                    ok = any(_orient(side, ar.trunc(e), ar.trunc(f)) in pairs
                             for f in replies)
                    if not ok:
                        clause = ("g" if ar.guarded else "") + ("forth" if side == 0 else "back")
                        return BisimReport(False, clause, (c, d),
                                           f"no reply to ({' '.join(e)}) via affix {i + 1}..{j}")
    return BisimReport(True, checked=checked)


# ----------------------------------------------------------------- fixpoints

def _state_space(ar: _Arena, cap: int):
    import itertools
    if ar.guarded:
        space = ([()], [()])
        for side in (0, 1):
            space[side].extend(t for t in ar.live_ext(side, ()) if t)
        return space
    length = ar.M if ar.kind != "infix" else cap
    out = []
    for side in (0, 1):
        dom = ar.domain(side)
        out.append([t for n in range(length + 1)
                    for t in itertools.product(dom, repeat=n)])
    return out


def bisim_fixpoint(A: Structure, B: Structure, cfg: GameConfig,
                   cap: int | None = None) -> BisimRelation:
    """Greatest bisimulation over a finite state space.

    Guarded logics range over sigma-live tuples and the empty tuple; prefix
    and suffix logics over truncated tuples of length <= M. Both are exact.
    Unguarded infix logic uses tuples of length <= cap (default M + rounds)
    and ignores moves leaving that space, so it is an approximation that is
    closed in the sense used by verify_bisimulation with depth=cap.
    """
    ar = _Arena(A, B, cfg)
    if cap is None:
        cap = ar.M + cfg.rounds
    left, right = _state_space(ar, cap)
    by_len: dict[int, list[Tuple]] = {}
    for t in right:
        by_len.setdefault(len(t), []).append(t)
    Z = {(c, d) for c in left for d in by_len.get(len(c), ()) if ar.harmonic(c, d)}
    bound = cap if (ar.kind == "infix" and not ar.guarded) else None
    changed = True
    while changed:
        changed = False
        for c, d in sorted(Z, key=lambda p: (len(p[0]), p)):
            if not _pair_survives(ar, Z, c, d, bound):
                Z.discard((c, d))
                changed = True
    return BisimRelation(frozenset(Z))


def _pair_survives(ar, Z, c, d, bound) -> bool:
    for side in (0, 1):
        mine, theirs = (c, d) if side == 0 else (d, c)
        for i, j in ar.spans(len(mine), ar.move_limit(len(mine))):
            u, v = mine[i:j], theirs[i:j]
            for e, replies in _responses(ar, side, u, v, bound):
                if not any(_orient(side, ar.trunc(e), ar.trunc(f)) in Z for f in replies):
                    return False
    return True


def guarded_bisim_fixpoint(A: Structure, B: Structure, sigma, affix_kind: str) -> BisimRelation:
    logic = {"prefix": "G_pre", "suffix": "G_suf", "infix": "G_inf"}[affix_kind]
    return bisim_fixpoint(A, B, GameConfig(logic, tuple(_names(sigma))))


def strategy_relation(A: Structure, a_bar, B: Structure, b_bar,
                      cfg: GameConfig, cap: int | None = None) -> BisimRelation | None:
    """The part of the greatest fixpoint reachable from (a_bar, b_bar), or None."""
    ar = _Arena(A, B, cfg)
    full = bisim_fixpoint(A, B, cfg, cap).pairs
    start = (ar.trunc(tuple(map(str, a_bar))), ar.trunc(tuple(map(str, b_bar))))
    if start not in full:
        return None
    if cap is None:
        cap = ar.M + cfg.rounds
    bound = cap if (ar.kind == "infix" and not ar.guarded) else None
    seen = {start}
    todo = [start]
    while todo:
        c, d = todo.pop()
        for side in (0, 1):
            mine, theirs = (c, d) if side == 0 else (d, c)
            for i, j in ar.spans(len(mine), ar.move_limit(len(mine))):
                for e, replies in _responses(ar, side, mine[i:j], theirs[i:j], bound):
                    for f in replies:
                        p = _orient(side, ar.trunc(e), ar.trunc(f))
                        if p in full and p not in seen:
                            seen.add(p)
                            todo.append(p)
    return BisimRelation(frozenset(seen))


# --------------------------------------------------------------------- games

def kround_game(A: Structure, a_bar, B: Structure, b_bar, cfg: GameConfig) -> bool:
    """Does the duplicator survive cfg.rounds rounds from (a_bar, b_bar)?"""
    ar = _Arena(A, B, cfg)
    c0 = tuple(map(str, a_bar))
    d0 = tuple(map(str, b_bar))
    if len(c0) != len(d0):
        raise ValueError("start tuples differ in length")

    @lru_cache(maxsize=None)
    def win(c: Tuple, d: Tuple, k: int) -> bool:
        if not ar.harmonic(c, d):
            return False
        if k == 0:
            return True
        for side in (0, 1):
            mine, theirs = (c, d) if side == 0 else (d, c)
            for i, j in ar.spans(len(mine), ar.move_limit(len(mine))):
                for e, replies in _responses(ar, side, mine[i:j], theirs[i:j]):
                    te = ar.trunc(e)
                    if not any(win(*_orient(side, te, ar.trunc(f)), k - 1)
                               for f in replies if len(f) == len(e)):
                        return False
        return True

    return win(ar.trunc(c0), ar.trunc(d0), cfg.rounds)


@dataclass
class TransferReport:
    game_passed: bool
    checked: int = 0
    skipped: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.game_passed and self.disagreements)


def check_equiv_transfer(A: Structure, B: Structure, cfg: GameConfig,
                         formula_pool, a_bar=(), b_bar=()) -> TransferReport:
    """If the k-round game passes, every in-fragment pool formula of rank
    <= k over sigma must get the same truth value on both sides."""
    a_bar = tuple(map(str, a_bar))
    b_bar = tuple(map(str, b_bar))
    passed = kround_game(A, a_bar, B, b_bar, cfg)
    rep = TransferReport(passed)
    sa = {i + 1: x for i, x in enumerate(a_bar)}
    sb = {i + 1: x for i, x in enumerate(b_bar)}
    sigma = set(cfg.sigma)
    for f in formula_pool:
        if (quantifier_rank(f) > cfg.rounds
                or not set(signature_of(f)) <= sigma
                or not depth_membership(f, len(a_bar), cfg.logic)):
            rep.skipped += 1
            continue
        rep.checked += 1
        va, vb = eval_naive(A, sa, f), eval_naive(B, sb, f)
        if va != vb:
            rep.disagreements.append((f, va, vb))
    return rep
