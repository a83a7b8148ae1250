"""Higher-arity trees and hedges, forward Gaifman graphs and bounded
unravellings.

Tree elements are addresses over the naturals written ``0.1.2``; the root
(the empty address) is written ``eps``. A hedge is a tree without its root.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .structures import Structure, affix_type, induced_substructure, _names

__all__ = ["ROOT", "ForwardGaifmanGraph", "Hat", "forward_gaifman", "hah_unravel",
           "is_hat", "subtree", "address", "address_id", "shortlex",
           "precedes", "heart", "maximal_live", "check_type_preservation",
           "check_claim24", "lift_tuple", "CheckReport",
           "check_unravel_bisimulation"]

ROOT = "eps"


def address(node: str) -> tuple[int, ...]:
    if node == ROOT:
        return ()
    return tuple(int(p) for p in node.split("."))


def address_id(addr) -> str:
    return ".".join(str(p) for p in addr) if addr else ROOT


def shortlex(node: str):
    a = address(node)
    return (len(a), a)


@dataclass(frozen=True)
class ForwardGaifmanGraph:
    nodes: tuple[str, ...]
    edges: frozenset

    def successors(self, node: str) -> list[str]:
        order = {d: i for i, d in enumerate(self.nodes)}
        return sorted((e for d, e in self.edges if d == node), key=order.get)


@dataclass
class Hat:
    """A structure over addresses. ``root`` is ROOT for a tree, None for a
    hedge; ``origin`` maps nodes of an unravelling back to source paths."""
    structure: Structure
    root: str | None = None
    origin: dict = field(default_factory=dict)

    @property
    def domain(self):
        return self.structure.domain

    def last(self, node: str) -> str:
        return self.origin[node][-1]


@dataclass
class CheckReport:
    ok: bool
    checked: int = 0
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def forward_gaifman(S: Structure) -> ForwardGaifmanGraph:
    edges = set()
    for ts in S.relations.values():
        for t in ts:
            edges.update(zip(t, t[1:]))
    return ForwardGaifmanGraph(S.domain, frozenset(edges))


def hah_unravel(S: Structure, depth: int) -> Hat:
    """Paths of length <= depth in the forward Gaifman graph, renamed to
    addresses (children numbered per parent in order of first visit)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    graph = forward_gaifman(S)
    path_of: dict[str, tuple] = {}
    node_of: dict[tuple, str] = {}
    frontier = []
    for i, d in enumerate(S.domain):
        node = address_id((i,))
        path_of[node], node_of[(d,)] = (d,), node
        frontier.append((d,))
    for _ in range(depth - 1):
        nxt = []
        for path in frontier:
            base = address(node_of[path])
            for j, e in enumerate(graph.successors(path[-1])):
                child = path + (e,)
                node = address_id(base + (j,))
                path_of[node], node_of[child] = child, node
                nxt.append(child)
        frontier = nxt
    rels = {}
    by_last: dict[str, list[tuple]] = {}
    for path in node_of:
        by_last.setdefault(path[-1], []).append(path)
    for name, ts in S.relations.items():
        out = []
        for t in ts:
            for start in by_last.get(t[0], ()):
                chain = [start]
                for e in t[1:]:
                    chain.append(chain[-1] + (e,))
                if chain[-1] in node_of:
                    out.append(tuple(node_of[p] for p in chain))
        rels[name] = out
    domain = sorted(path_of, key=shortlex)
    return Hat(Structure(domain, S.signature, rels), None, path_of)


def lift_tuple(h: Hat, a_bar) -> tuple[str, ...]:
    """The unravelling tuple whose i-th entry is the path a_1..a_i."""
    inverse = {p: n for n, p in h.origin.items()}
    a_bar = tuple(str(a) for a in a_bar)
    return tuple(inverse[a_bar[:i + 1]] for i in range(len(a_bar)))


def is_hat(h: Hat) -> bool:
    nodes = set(h.domain)
    try:
        addrs = {n: address(n) for n in nodes}
    except ValueError:
        return False
    if (ROOT in nodes) != (h.root is not None):
        return False
    for n, a in addrs.items():
        if len(a) > 1 and address_id(a[:-1]) not in nodes:
            return False
    for ts in h.structure.relations.values():
        for t in ts:
            for x, y in zip(t, t[1:]):
                ax, ay = addrs[x], addrs[y]
                if len(ay) != len(ax) + 1 or ay[:-1] != ax:
                    return False
    return True


def subtree(h: Hat, node: str) -> Hat:
    if node not in h.domain:
        raise KeyError(f"{node} is not in the domain")
    base = address(node)
    keep = [n for n in h.domain if address(n)[:len(base)] == base]
    sub = induced_substructure(h.structure, keep)
    rename = {n: address_id(address(n)[len(base):]) for n in keep}
    rels = {r: [tuple(rename[x] for x in t) for t in ts]
            for r, ts in sub.relations.items()}
    origin = {rename[n]: h.origin[n] for n in keep if n in h.origin}
    return Hat(Structure([rename[n] for n in keep], sub.signature, rels), ROOT, origin)


# ----------------------------------------------------------- type checks

def _chains(h: Hat, max_len: int):
    children: dict[str, list[str]] = {}
    for n in h.domain:
        a = address(n)
        if a:
            children.setdefault(address_id(a[:-1]), []).append(n)
    level = [(n,) for n in h.domain]
    for _ in range(max_len):
        yield from level
        level = [t + (c,) for t in level for c in children.get(t[-1], ())]


def check_type_preservation(S: Structure, h: Hat, sigma=None) -> CheckReport:
    """Every child-step chain up to the largest arity has the infix-type of
    its image under last[] in S."""
    names = _names(sigma) if sigma is not None else [n for n, _ in S.signature]
    arity = S.arity
    top = max((arity[n] for n in names), default=1)
    report = CheckReport(True)
    for chain in _chains(h, top):
        image = tuple(h.last(n) for n in chain)
        report.checked += 1
        if affix_type(h.structure, chain, names) != affix_type(S, image, names):
            report.ok = False
            report.violations.append((chain, image))
    return report


# ----------------------------------------------- order on maximal tuples

def precedes(c, d) -> bool:
    """Coordinatewise comparison of tuples of addresses (shortlex)."""
    for x, y in zip(c, d):
        if x != y:
            return shortlex(x) < shortlex(y)
    return len(c) < len(d)


def _is_infix(small, big) -> int | None:
    k = len(small)
    for i in range(len(big) - k + 1):
        if tuple(big[i:i + k]) == tuple(small):
            return i
    return None


def maximal_live(S: Structure, sigma, tuples=None) -> list[tuple]:
    live = set(tuples) if tuples is not None else set(S.live_tuples(sigma))
    out = []
    for t in live:
        if not any(u != t and len(u) > len(t) and _is_infix(t, u) is not None
                   for u in live):
            out.append(t)
    return out


def heart(c, d):
    """(i, j, k), 1-based, with c[i..j] == d[1..k] and no later element of d
    occurring in c; None if c and d are disjoint or no such split exists."""
    shared = set(c) & set(d)
    if not shared:
        return None
    k = max(i for i, x in enumerate(d, 1) if x in shared)
    if any(x in shared for x in d[k:]):
        return None
    pos = _is_infix(d[:k], c)
    if pos is None:
        return None
    return pos + 1, pos + k, k


def check_claim24(h: Hat, sigma=None, tuples=None) -> CheckReport:
    """For maximal live tuples c before d sharing elements: every prefix of d
    ending at a shared element is an infix of c."""
    names = _names(sigma) if sigma is not None else [n for n, _ in h.structure.signature]
    maximal = maximal_live(h.structure, names, tuples)
    report = CheckReport(True)
    for c, d in itertools.permutations(maximal, 2):
        if not precedes(c, d) or not set(c) & set(d):
            continue
        report.checked += 1
        for k, x in enumerate(d, 1):
            if x in c and _is_infix(d[:k], c) is None:
                report.ok = False
                report.violations.append((c, d, k))
                break
        else:
            if heart(c, d) is None:
                report.ok = False
                report.violations.append((c, d, None))
    return report


def check_unravel_bisimulation(S: Structure, h: Hat, sigma=None) -> CheckReport:
    """Check the relation {(d, last[d]) : d live in h} clause by clause under
    the guarded infix game, exempting back-moves that would need nodes below
    the depth bound. ``report.violations`` lists failures; exempted moves are
    counted in ``report.exempt``."""
    names = _names(sigma) if sigma is not None else [n for n, _ in S.signature]
    inverse = {p: n for n, p in h.origin.items()}
    live_h = h.structure.live_tuples(names)
    live_s = S.live_tuples(names)
    by_prefix: dict[tuple, list[tuple]] = {}
    for e in live_s:
        for m in range(len(e) + 1):
            by_prefix.setdefault(e[:m], []).append(e)
    report = CheckReport(True)
    report.exempt = 0
    for d in [()] + live_h:
        image = tuple(h.last(n) for n in d)
        if affix_type(h.structure, d, names) != affix_type(S, image, names):
            report.ok = False
            report.violations.append(("harmony", d))
            continue
        spans = {(0, 0)} | {(i, j) for i in range(len(d)) for j in range(i + 1, len(d) + 1)}
        for i, j in sorted(spans):
            anchor = d[i:j]
            for e in by_prefix.get(image[i:j], ()):
                report.checked += 1
                if anchor:
                    path = h.origin[anchor[-1]]
                    nodes = list(anchor)
                else:
                    path, nodes = (), []
                ok = True
                for x in e[len(anchor):]:
                    path = path + (x,)
                    node = inverse.get(path)
                    if node is None:
                        ok = False
                        break
                    nodes.append(node)
                if not ok:
                    report.exempt += 1
                    continue
                f = tuple(nodes)
                if not (len(f) <= 1 or any(f in h.structure.relations[n] for n in names)):
                    report.ok = False
                    report.violations.append(("back", d, (i, j), e))
    return report
