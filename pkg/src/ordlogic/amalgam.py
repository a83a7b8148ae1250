"""Model constructions for two jointly consistent normal forms.

``build_pre_model`` assigns prefix-types to tuples over a capped domain.
The guarded construction grows a hedge in stages: witness maps tie every
tuple to tuples of the two source models, completions fix the types of live
tuples and repairs graft source subtrees to supply missing witnesses.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from .bisimulation import (BisimRelation, GameConfig, _Arena, bisim_fixpoint,
                           verify_bisimulation)
from .evaluator import eval_naive
from .rewriter import NormalForm, RewriteError, read_normal_form
from .structures import Structure, affix_type, induced_substructure
from .syntax import And, Formula, conj, signature_of
from .unravel import (Hat, address, address_id, check_claim24, heart, is_hat,
                      maximal_live, precedes, shortlex)

__all__ = ["CapExhausted", "CompletionConflict", "PreconditionFailed",
           "WitnessFailure", "PreModel", "build_pre_model", "WitnessMaps",
           "Component", "StageStructure", "initial_stage", "completion",
           "repair", "order_maximal_live", "run_guarded_stage",
           "run_guarded", "audit_conditions", "AuditReport",
           "check_stage_invariants", "requirement_conclusion"]


class CapExhausted(RuntimeError):
    pass


class CompletionConflict(RuntimeError):
    pass


class PreconditionFailed(ValueError):
    pass


class WitnessFailure(RuntimeError):
    pass


def _as_nf(f, logic: str) -> NormalForm:
    if isinstance(f, NormalForm):
        return f
    return read_normal_form(f, logic)


def _prepare(phi, psi, A, a_bar, B, b_bar, logic):
    """Read both inputs as normal forms; plain sentences are normalised
    against the source models, which are expanded by the fresh symbols."""
    try:
        return _as_nf(phi, logic), _as_nf(psi, logic), A, B, {}
    except RewriteError:
        if isinstance(phi, NormalForm) or isinstance(psi, NormalForm):
            raise
    from .rewriter import normalize_pair
    taken = set(signature_of(phi)) | set(signature_of(psi))
    head = next(h for h in ("H", "_H", "_head") if h not in taken)
    rts = (tuple(map(str, a_bar)) or None, tuple(map(str, b_bar)) or None)
    pn, qn = normalize_pair(phi, psi, logic, head, refs=(A, B), ref_tuples=rts)
    extra = dict(signature_of(phi))
    extra.update(signature_of(psi))
    return pn, qn, pn.model, qn.model, extra


def _env(t, start: int = 1) -> dict:
    return {start + i: x for i, x in enumerate(t)}


def requirement_conclusion(req) -> Formula:
    """The quantified part of a requirement (free variables x1..x_ell)."""
    from .rewriter import _exists_block, _forall_block
    from .syntax import Implies, Top
    inner = req.matrix
    if req.guard is not None:
        inner = And(req.guard, inner) if req.kind == "exists" else Implies(req.guard, inner)
    body = (_exists_block if req.kind == "exists" else _forall_block)(req.block, inner)
    if not isinstance(req.condition, Top):
        body = Implies(req.condition, body)
    return body


# ====================================================== prefix construction

@dataclass
class PreModel:
    structure: Structure
    head: tuple[str, ...]
    assignment: dict          # U-tuple -> (A-tuple, B-tuple)
    log: list = field(default_factory=list)


def build_pre_model(phi_nf, psi_nf, A: Structure, a_bar, B: Structure, b_bar,
                    cap: int = 32, Z: BisimRelation | None = None) -> PreModel:
    """Joint model of two prefix normal forms with the same head.

    Every tuple of length <= M (the largest arity) gets a pair of source
    tuples that are prefix-bisimilar over the shared symbols; its prefix-type
    is the union of their types. Existential requirements get witnesses at
    unused positions; remaining tuples copy an already assigned pair.
    """
    phi_nf, psi_nf, A, B, extra = _prepare(phi_nf, psi_nf, A, a_bar, B, b_bar, "L_pre")
    if phi_nf.head != psi_nf.head:
        raise PreconditionFailed("normal forms have different heads")
    sig_a = signature_of(phi_nf.to_formula())
    sig_b = signature_of(psi_nf.to_formula())
    sigma = tuple(sorted(set(sig_a) & set(sig_b)))
    a_bar, b_bar = tuple(map(str, a_bar)), tuple(map(str, b_bar))
    cfg = GameConfig("L_pre", sigma)
    if Z is not None:
        rep = verify_bisimulation(A, B, Z, cfg)
        if not rep.ok:
            raise PreconditionFailed("supplied relation is not a bisimulation: " + rep.summary())
    arena = _Arena(A, B, cfg)
    full = bisim_fixpoint(A, B, cfg).pairs

    def bis(c, d) -> bool:
        return (arena.trunc(c), arena.trunc(d)) in full

    head_arity = phi_nf.head_arity
    if head_arity == 0:
        head_a = next((t for t in A.relations[phi_nf.head] if not a_bar or t == a_bar[:1]), None)
        head_b = next((t for t in B.relations[phi_nf.head]
                       if head_a is not None and bis(head_a, t)
                       and (not b_bar or t == b_bar[:1])), None)
        if head_a is None or head_b is None:
            raise PreconditionFailed("no bisimilar pair of head elements")
    else:
        head_a, head_b = a_bar, b_bar
        if len(a_bar) != head_arity or len(b_bar) != head_arity:
            raise PreconditionFailed("head tuples have the wrong length")
    if not bis(head_a, head_b):
        raise PreconditionFailed("the head tuples are not bisimilar")

    arity = dict(sig_a)
    arity.update(sig_b)
    M = max(arity.values())
    tau = tuple(sorted(arity.items()))
    ex_a = [r for r in phi_nf.existential if r.ell < M]
    ex_b = [r for r in psi_nf.existential if r.ell < M]

    # level 1: realise every element of A and of B with a bisimilar partner
    firsts: list[tuple] = [(head_a[:1], head_b[:1])]
    seen = set(firsts)
    for c in A.domain:
        d = next((d for d in B.domain if bis((c,), (d,))), None)
        if d is not None and ((c,), (d,)) not in seen:
            seen.add(((c,), (d,)))
            firsts.append(((c,), (d,)))
    for d in B.domain:
        c = next((c for c in A.domain if bis((c,), (d,))), None)
        if c is not None and ((c,), (d,)) not in seen:
            seen.add(((c,), (d,)))
            firsts.append(((c,), (d,)))
    N = max(len(firsts) + head_arity, len(ex_a) + len(ex_b) + head_arity, 1)
    if N > cap:
        raise CapExhausted(f"domain of size {N} needed, cap is {cap}")
    log = [f"domain size {N}, M = {M}"]
    assign: dict[tuple, tuple] = {}
    # the head tuple occupies positions 0..n-1 with all of its prefixes
    for i in range(1, head_arity + 1):
        assign[tuple(range(i))] = (head_a[:i], head_b[:i])
    slot = head_arity if head_arity else 0
    if head_arity:
        firsts = firsts[1:]
    for pair in firsts:
        assign[(slot,)] = pair
        slot += 1
    for e in range(N):
        if (e,) not in assign:
            assign[(e,)] = assign[(0,)]

    def witness(req, left: bool, src, other, base_src, base_other):
        s = _env(base_src)
        if req.premise is not None and not eval_naive(src, s, req.premise):
            return None
        for c in src.domain:
            s[req.ell + 1] = c
            if eval_naive(src, s, req.matrix):
                ext = base_src + (c,)
                for d in other.domain:
                    cand = base_other + (d,)
                    if (bis(ext, cand) if left else bis(cand, ext)):
                        return (ext, cand) if left else (cand, ext)
                raise PreconditionFailed(f"no bisimilar response to {ext}")
        raise PreconditionFailed(f"source model violates {req.to_formula()}")

    for k in range(1, M):
        for e_bar in itertools.product(range(N), repeat=k):
            a_t, b_t = assign[e_bar]
            used: dict[int, tuple] = {f: assign[e_bar + (f,)] for f in range(N)
                                      if e_bar + (f,) in assign}
            needs = []
            for req in ex_a:
                if req.ell == k:
                    w = witness(req, True, A, B, a_t, b_t)
                    if w is not None:
                        needs.append((req, w))
            for req in ex_b:
                if req.ell == k:
                    w = witness(req, False, B, A, b_t, a_t)
                    if w is not None:
                        needs.append((req, w))
            for req, w in needs:
                if any(v == w for v in used.values()):
                    continue
                free = next((f for f in range(N) if f not in used), None)
                if free is None:
                    raise CapExhausted(f"no free witness position for {e_bar} and {req.to_formula()}")
                used[free] = w
                assign[e_bar + (free,)] = w
            if used:
                default = used[min(used)]
            else:
                default = None
                for c in A.domain:
                    d = next((d for d in B.domain if bis(a_t + (c,), b_t + (d,))), None)
                    if d is not None:
                        default = (a_t + (c,), b_t + (d,))
                        break
                if default is None:
                    raise PreconditionFailed(f"no bisimilar extension of {a_t}, {b_t}")
            for f in range(N):
                assign.setdefault(e_bar + (f,), default)
    rels: dict[str, list] = {name: [] for name, _ in tau}
    for t, (a_t, b_t) in assign.items():
        for name, ar in tau:
            if ar != len(t):
                continue
            if (name in sig_a and a_t in A.relations[name]) or \
                    (name in sig_b and b_t in B.relations[name]):
                rels[name].append(tuple(str(x) for x in t))
    U = Structure([str(i) for i in range(N)], tau, rels)
    # symbols that normalisation simplified away are left empty
    dropped = {n: ar for n, ar in extra.items() if n not in U.arity}
    if dropped:
        U = U.expand({n: [] for n in dropped}, dropped)
    head = tuple(str(i) for i in range(head_arity)) if head_arity else (str(
        next(i for i in range(N) if (str(i),) in U.relations[phi_nf.head])),)
    return PreModel(U, head, {tuple(map(str, t)): v for t, v in assign.items()}, log)


# ===================================================== guarded construction

_KIND = {"G_suf": "suffix", "G_pre": "prefix", "G_inf": "infix"}


def _spans(n: int, kind: str):
    """0-based slices (i, j) of the nonempty kind-affixes of a length-n tuple."""
    if kind == "suffix":
        return [(i, n) for i in range(n)]
    if kind == "prefix":
        return [(0, j) for j in range(1, n + 1)]
    return [(i, j) for i in range(n) for j in range(i + 1, n + 1)]


def _elem_key(t):
    return tuple(shortlex(x) for x in t)


@dataclass
class WitnessMaps:
    wit_A: dict = field(default_factory=dict)
    wit_B: dict = field(default_factory=dict)
    stage_of: dict = field(default_factory=dict)

    def side(self, name: str) -> dict:
        return self.wit_A if name == "A" else self.wit_B

    def copy(self) -> "WitnessMaps":
        return WitnessMaps(dict(self.wit_A), dict(self.wit_B), dict(self.stage_of))


@dataclass
class Component:
    nodes: frozenset
    anchor: tuple | None
    side: str                # source the grafted nodes came from


@dataclass
class StageStructure:
    domain: list
    rels: dict               # name -> set of tuples
    tau: tuple
    wit: WitnessMaps
    A: Structure
    B: Structure
    phi_nf: NormalForm
    psi_nf: NormalForm
    sigma: tuple
    sig_A: tuple
    sig_B: tuple
    kind: str
    Z: frozenset
    stage: int = 0
    next_side: str = "B"     # source used by the next round of repairs
    components: list = field(default_factory=list)
    log: list = field(default_factory=list)
    history: list = field(default_factory=list)
    repair_checks: list = field(default_factory=list)
    orders: list = field(default_factory=list)
    pre_repair: list = field(default_factory=list)
    _cache: Structure | None = None

    def structure(self) -> Structure:
        if self._cache is None:
            self._cache = Structure(list(self.domain), self.tau, self.rels)
        return self._cache

    def touch(self):
        self._cache = None

    def clone(self) -> "StageStructure":
        out = StageStructure(list(self.domain), {n: set(ts) for n, ts in self.rels.items()},
                             self.tau, self.wit.copy(), self.A, self.B, self.phi_nf,
                             self.psi_nf, self.sigma, self.sig_A, self.sig_B, self.kind,
                             self.Z, self.stage, self.next_side, list(self.components),
                             list(self.log), list(self.history), list(self.repair_checks),
                             list(self.orders), list(self.pre_repair))
        out._cache = self._cache
        return out

    def source(self, side: str) -> Structure:
        return self.A if side == "A" else self.B

    def source_sig(self, side: str) -> tuple:
        return self.sig_A if side == "A" else self.sig_B

    def bisimilar(self, a_t, b_t) -> bool:
        return (tuple(a_t), tuple(b_t)) in self.Z

    def is_live(self, t, names) -> bool:
        return len(t) <= 1 or any(t in self.rels[n] for n in names)

    def live(self, names) -> list:
        out = {(d,) for d in self.domain}
        for n in names:
            out |= self.rels[n]
        return sorted(out, key=lambda t: (len(t), _elem_key(t)))

    def old(self, x) -> bool:
        return self.wit.stage_of[x] < self.stage

    def hat(self) -> Hat:
        return Hat(self.structure(), None)


def _set_wit(mapping: dict, t, image) -> None:
    for i in range(len(t)):
        for j in range(i + 1, len(t) + 1):
            mapping.setdefault(tuple(t[i:j]), tuple(image[i:j]))


def initial_stage(phi_nf, psi_nf, A: Structure, B: Structure, logic: str = "G_suf",
                  Z: BisimRelation | None = None) -> StageStructure:
    """U_0 := A expanded by empty interpretations, with wit_A the identity."""
    if logic not in _KIND:
        raise ValueError(f"guarded construction needs G_suf, G_pre or G_inf, not {logic}")
    phi_nf, psi_nf, A, B, extra = _prepare(phi_nf, psi_nf, A, (), B, (), logic)
    sig_a = signature_of(phi_nf.to_formula())
    sig_b = signature_of(psi_nf.to_formula())
    for S, sig in ((A, sig_a), (B, sig_b)):
        missing = [n for n in sig if n not in S.arity]
        if missing:
            raise PreconditionFailed(f"source structure lacks {missing}")
        if not is_hat(Hat(S, None)):
            raise PreconditionFailed("source structures must be hedges over addresses")
    sigma = tuple(sorted(set(sig_a) & set(sig_b)))
    kind = _KIND[logic]
    from .bisimulation import guarded_bisim_fixpoint
    full = guarded_bisim_fixpoint(A, B, sigma, kind)
    if Z is not None:
        rep = verify_bisimulation(A, B, Z, GameConfig(logic, sigma))
        if not rep.ok:
            raise PreconditionFailed("supplied relation is not a bisimulation: " + rep.summary())
    arity = dict(sig_a)
    arity.update(sig_b)
    for n, ar in extra.items():
        arity.setdefault(n, ar)
    tau = tuple(sorted(arity.items()))
    rels = {n: set(A.relations[n]) if n in sig_a else set() for n, _ in tau}
    wit = WitnessMaps()
    for d in A.domain:
        wit.stage_of[d] = 0
    st = StageStructure(list(A.domain), rels, tau, wit, A, B, phi_nf, psi_nf, sigma,
                        tuple(sorted(sig_a)), tuple(sorted(sig_b)), kind, full.pairs)
    for t in st.live(st.sig_A):
        _set_wit(wit.wit_A, t, t)
    st.history.append(st.structure())
    st.log.append(f"U_0: {len(A.domain)} elements, sigma = {list(sigma)}")
    return st


def order_maximal_live(st: StageStructure, tuples) -> list:
    """Sort maximal live tuples coordinatewise by (length, address)."""
    def cmp(c, d):
        if c == d:
            return 0
        return -1 if precedes(c, d) else 1
    return sorted(tuples, key=functools.cmp_to_key(cmp))


def _choose_witness(st: StageStructure, d, missing: str, processed, use_aged: bool):
    known_side = "A" if missing == "B" else "B"
    known = st.wit.side(known_side).get(d)
    if known is None:
        raise WitnessFailure(f"{d} has no {known_side}-witness")
    miss_map = st.wit.side(missing)
    src = st.source(missing)
    constraint = None
    if use_aged and st.kind != "suffix":
        k = 0
        while k < len(d) - 1 and st.old(d[k]):
            k += 1
        if k >= 1:
            prefix = tuple(d[:k])
            for c in st.live(st.sigma):
                if len(c) > k and all(st.old(x) for x in c) and c in miss_map:
                    for i in range(len(c) - k + 1):
                        if c[i:i + k] == prefix:
                            constraint = (k, miss_map[c][i:i + k], c)
                            break
                if constraint:
                    break
            if constraint is None and prefix in miss_map:
                constraint = (k, miss_map[prefix], prefix)
    if constraint is None:
        best = None
        for c in processed:
            h = heart(c, d)
            if h is not None and (best is None or h[2] > best[0][2]):
                best = (h, c)
        if best is not None:
            (i, j, k), c = best
            constraint = (k, miss_map[c][i - 1:j], c)
    live_src = src.live_tuples(st.sigma)
    cands = []
    for f in live_src:
        if len(f) != len(d):
            continue
        if not (st.bisimilar(known, f) if missing == "B" else st.bisimilar(f, known)):
            continue
        if constraint is not None and tuple(f[:constraint[0]]) != tuple(constraint[1]):
            continue
        cands.append(f)
    if not cands:
        why = f" agreeing with {constraint[2]} on {constraint[0]} places" if constraint else ""
        raise WitnessFailure(f"no {missing}-tuple bisimilar to {known}{why} for {d}")
    return min(cands, key=_elem_key)


def completion(st: StageStructure, d_bar, assigned: dict | None = None) -> StageStructure:
    """Rewrite the atoms on the affix windows of d_bar so that its type is
    the union of the types of its two witnesses."""
    d_bar = tuple(d_bar)
    out = st.clone()
    wa, wb = out.wit.wit_A.get(d_bar), out.wit.wit_B.get(d_bar)
    if wa is None or wb is None:
        raise CompletionConflict(f"{d_bar} lacks a witness")
    ta = affix_type(out.A, wa, out.sig_A, out.kind)
    tb = affix_type(out.B, wb, out.sig_B, out.kind)
    try:
        target = ta.union(tb)
    except ValueError as exc:
        raise CompletionConflict(f"witness types of {d_bar} disagree: {exc}") from None
    arity = dict(out.tau)
    assigned = {} if assigned is None else assigned
    for (name, first), pol in target.atoms:
        w = d_bar[first - 1:first - 1 + arity[name]]
        key = (name, w)
        if assigned.get(key, pol) != pol:
            raise CompletionConflict(f"{name}{w} set both ways (at {d_bar})")
        assigned[key] = pol
        if pol:
            out.rels[name].add(w)
        else:
            out.rels[name].discard(w)
    for i, j in _spans(len(d_bar), "infix"):
        w = d_bar[i:j]
        out.wit.wit_A.setdefault(w, wa[i:j])
        out.wit.wit_B.setdefault(w, wb[i:j])
    out.touch()
    return out


def _children_index(domain) -> dict:
    top: dict = {}
    for n in domain:
        a = address(n)
        parent = a[:-1]
        top[parent] = max(top.get(parent, -1), a[-1])
    return top


def repair(st: StageStructure, c_bar, side: str, e_bar) -> StageStructure:
    """Graft the subtree of the ``side`` source rooted at e_bar[0] below
    c_bar, identifying e_bar with c_bar."""
    c_bar, e_bar = tuple(c_bar), tuple(e_bar)
    src = st.source(side)
    if len(c_bar) != len(e_bar) or not e_bar:
        raise ValueError("tuples differ in length")
    root = address(e_bar[0])
    sub = [x for x in src.domain if address(x)[:len(root)] == root]
    before = st.structure()
    out = st.clone()
    mapping = dict(zip(e_bar, c_bar))
    counters = _children_index(out.domain)
    new_nodes = []
    for x in sorted(sub, key=shortlex):
        if x in mapping:
            continue
        parent = address_id(address(x)[:-1])
        if parent not in mapping:
            raise ValueError(f"{x} hangs below {parent}, outside the grafted tuple")
        pa = address(mapping[parent])
        idx = counters.get(pa, -1) + 1
        counters[pa] = idx
        node = address_id(pa + (idx,))
        mapping[x] = node
        new_nodes.append(node)
        out.domain.append(node)
        out.wit.stage_of[node] = st.stage + 1
    subset = set(sub)
    old = set(c_bar)
    wit_map = out.wit.side(side)
    for name in st.source_sig(side):
        for t in src.relations[name]:
            if set(t) <= subset:
                image = tuple(mapping[x] for x in t)
                if set(image) <= old:
                    continue
                out.rels[name].add(image)
                _set_wit(wit_map, image, t)
    for x in sub:
        if mapping[x] not in old:
            _set_wit(wit_map, (mapping[x],), (x,))
    out.components.append(Component(frozenset(new_nodes) | old, c_bar, side))
    out.touch()
    after = out.structure()
    ok = induced_substructure(after, before.domain) == before
    out.repair_checks.append((st.stage, c_bar, side, ok))
    return out


def _add_copy(st: StageStructure, side: str) -> StageStructure:
    src = st.source(side)
    out = st.clone()
    base = 1 + max((address(n)[0] for n in out.domain), default=-1)
    mapping = {}
    for x in src.domain:
        a = address(x)
        node = address_id((base + a[0],) + a[1:])
        mapping[x] = node
        out.domain.append(node)
        out.wit.stage_of[node] = st.stage + 1
    wit_map = out.wit.side(side)
    for name in st.source_sig(side):
        for t in src.relations[name]:
            image = tuple(mapping[x] for x in t)
            out.rels[name].add(image)
            _set_wit(wit_map, image, t)
    for x in src.domain:
        _set_wit(wit_map, (mapping[x],), (x,))
    out.components.append(Component(frozenset(mapping.values()), None, side))
    out.touch()
    return out


def _assign_missing(st: StageStructure, tuples, missing: str, use_aged: bool) -> StageStructure:
    out = st.clone()
    ordered = order_maximal_live(out, tuples)
    out.orders.append((st.stage, ordered))
    processed = []
    miss_map = out.wit.side(missing)
    for d in ordered:
        if d not in miss_map:
            f = _choose_witness(out, d, missing, processed, use_aged)
            miss_map[d] = f
            _set_wit(miss_map, d, f)
        processed.append(d)
    return out


def run_guarded_stage(st: StageStructure) -> StageStructure:
    """One stage: fill witness maps, complete fresh maximal live tuples,
    repair them from the other source (plus a copy of B at stage 0)."""
    n = st.stage
    missing = st.next_side
    if n == 0:
        targets = maximal_live(st.structure(), st.sigma)
        out = _assign_missing(st, targets, missing, use_aged=False)
    else:
        out = st
        targets = []
        for comp in st.components:
            live = [t for t in st.live(st.sigma)
                    if set(t) <= comp.nodes and not all(st.old(x) for x in t)]
            mx = [t for t in maximal_live(st.structure(), st.sigma, live)]
            out = _assign_missing(out, mx, missing, use_aged=True)
            targets.extend(t for t in mx if t not in targets)
    assigned: dict = {}
    ordered = order_maximal_live(out, targets)
    for d in ordered:
        out = completion(out, d, assigned)
    # live infixes of the targets are completed as well: for suffix kinds the
    # windows of a maximal tuple miss its leading elements
    done = set(ordered)
    for d in ordered:
        for i, j in _spans(len(d), "infix"):
            w = d[i:j]
            if w not in done and out.is_live(w, out.sigma):
                done.add(w)
                out = completion(out, w, assigned)
    out.pre_repair.append(out.structure())
    out.components = []
    for d in order_maximal_live(out, targets):
        out = repair(out, d, missing, out.wit.side(missing)[d])
    if n == 0:
        out = _add_copy(out, "B")
    out.stage = n + 1
    out.next_side = "A" if missing == "B" else "B"
    out.history.append(out.structure())
    out.log.append(f"U_{n + 1}: {len(out.domain)} elements after {len(targets)} "
                   f"{missing}-repairs")
    return out


def run_guarded(phi_nf, psi_nf, A, B, logic: str = "G_suf", stages: int = 2):
    st = initial_stage(phi_nf, psi_nf, A, B, logic)
    for _ in range(stages):
        st = run_guarded_stage(st)
    return st


# ------------------------------------------------------------------- audits

@dataclass
class AuditReport:
    stage: int
    results: dict = field(default_factory=dict)   # condition -> list of failures
    checked: dict = field(default_factory=dict)

    def passed(self, cond: str) -> bool:
        return not self.results.get(cond)

    @property
    def ok(self) -> bool:
        return all(not v for v in self.results.values())

    def summary(self) -> str:
        parts = []
        for cond in sorted(self.results):
            bad = self.results[cond]
            parts.append(f"({cond}) {'pass' if not bad else 'FAIL x%d' % len(bad)}"
                         f" [{self.checked.get(cond, 0)} checked]")
        return f"stage {self.stage}: " + ", ".join(parts)


def audit_conditions(st: StageStructure) -> AuditReport:
    """Check conditions (a), (b), (c), (e) on the aged tuples of the current
    stage, (d) as a census of source types, and the universal requirements
    on aged tuples."""
    U = st.structure()
    rep = AuditReport(st.stage, {c: [] for c in "abcde"} | {"universal": []},
                      {c: 0 for c in "abcde"} | {"universal": 0})
    n = st.stage
    aged = (lambda t: all(st.old(x) for x in t)) if n > 0 else (lambda t: False)
    tau_names = [name for name, _ in st.tau]

    def tp(S, t, names):
        return affix_type(S, t, names, st.kind)

    for c in st.live(tau_names):
        if not aged(c):
            continue
        s_live = st.is_live(c, st.sigma)
        a_live = st.is_live(c, st.sig_A)
        b_live = st.is_live(c, st.sig_B)
        wa, wb = st.wit.wit_A.get(c), st.wit.wit_B.get(c)
        if s_live:
            rep.checked["a"] += 1
            if wa is None or wb is None:
                rep.results["a"].append((c, "witness undefined"))
            elif not st.bisimilar(wa, wb):
                rep.results["a"].append((c, "witnesses not bisimilar"))
            else:
                try:
                    want = tp(st.A, wa, st.sig_A).union(tp(st.B, wb, st.sig_B))
                except ValueError:
                    want = None
                if want is None or tp(U, c, tau_names) != want:
                    rep.results["a"].append((c, "type differs from witness union"))
        else:
            for live, w, S, names in ((a_live, wa, st.A, st.sig_A), (b_live, wb, st.B, st.sig_B)):
                if not live:
                    continue
                rep.checked["b"] += 1
                if w is None or tp(U, c, names) != tp(S, w, names):
                    rep.results["b"].append((c, "witness missing or type differs"))
    # (c) and universal requirements on aged tuples
    for nf, names in ((st.phi_nf, st.sig_A), (st.psi_nf, st.sig_B)):
        for key, reqs in (("c", nf.existential), ("universal", nf.universal)):
            for req in reqs:
                concl = requirement_conclusion(req)
                if req.ell == 0:
                    if n > 0:
                        rep.checked[key] += 1
                        if not eval_naive(U, {}, concl):
                            rep.results[key].append(((), req.to_formula()))
                    continue
                for c in st.live(names):
                    if len(c) != req.ell or not aged(c):
                        continue
                    s = _env(c)
                    if req.premise is not None and not eval_naive(U, s, req.premise):
                        continue
                    rep.checked[key] += 1
                    if not eval_naive(U, s, concl):
                        rep.results[key].append((c, req.to_formula()))
    # (d) census of source types
    for S, names in ((st.A, st.sig_A), (st.B, st.sig_B)):
        have = {}
        for e in st.live(names):
            have.setdefault(len(e), set()).add(tp(U, e, names))
        for d in S.live_tuples(names):
            rep.checked["d"] += 1
            if tp(S, d, names) not in have.get(len(d), ()):
                rep.results["d"].append((d, "type not realised"))
    # (e) fresh sigma-live tuples lacking a witness
    if n > 0:
        aged_live = [c for c in st.live(st.sigma) if aged(c)]
        for d in st.live(st.sigma):
            if aged(d):
                continue
            if d in st.wit.wit_A and d in st.wit.wit_B:
                continue
            for k in range(1, len(d)):
                prefix = d[:k]
                if not aged(prefix):
                    break
                rep.checked["e"] += 1
                if not any(any(c[i:i + k] == prefix for i in range(len(c) - k + 1))
                           for c in aged_live):
                    rep.results["e"].append((d, k))
    return rep


def check_stage_invariants(st: StageStructure) -> dict:
    """Structural invariants over the recorded history of a run."""
    out = {"hedge": [], "monotone": [], "repair": [], "order": [], "claim24": [],
           "universal": []}
    for i, U in enumerate(st.history):
        if not is_hat(Hat(U, None)):
            out["hedge"].append(i)
        rep = check_claim24(Hat(U, None), st.sigma)
        if not rep.ok:
            out["claim24"].append((i, rep.violations[:3]))
    for i, (U, C) in enumerate(zip(st.history, st.pre_repair)):
        if C.reduct(st.sigma) != induced_substructure(C, U.domain).reduct(st.sigma) \
                or U.reduct(st.sigma) != induced_substructure(C, U.domain).reduct(st.sigma):
            out["monotone"].append((i, "shared symbols changed by completion"))
        nxt = st.history[i + 1] if i + 1 < len(st.history) else None
        if nxt is not None and induced_substructure(nxt, C.domain) != C:
            out["monotone"].append((i, "completed stage is not a substructure of the next"))
    # fresh grafts are typed by the next completion, so universal
    # requirements are evaluated on the completed structure of each stage
    reqs = [r for nf in (st.phi_nf, st.psi_nf) for r in nf.universal]
    for i, C in enumerate(st.pre_repair):
        for req in reqs:
            if not eval_naive(C, {}, req.to_formula()):
                out["universal"].append((i, req.to_formula()))
    out["repair"] = [r for r in st.repair_checks if not r[3]]
    for stage, ordered in st.orders:
        for a, b in zip(ordered, ordered[1:]):
            if not precedes(a, b):
                out["order"].append((stage, a, b, "not increasing"))
        for a, b in itertools.combinations(ordered, 2):
            if set(a) & set(b) and heart(a, b) is None:
                out["order"].append((stage, a, b, "overlap shape"))
    return out
