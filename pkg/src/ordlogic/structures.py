"""Finite relational structures, affix-types and the two encodings."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

Signature = tuple[tuple[str, int], ...]

KINDS = ("prefix", "suffix", "infix")


def make_signature(pairs) -> Signature:
    if isinstance(pairs, Mapping):
        pairs = pairs.items()
    sig = tuple((str(n), int(a)) for n, a in pairs)
    names = [n for n, _ in sig]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate symbols in signature {names}")
    if any(a < 1 for _, a in sig):
        raise ValueError("arities must be >= 1")
    return sig


@dataclass(frozen=True)
class Structure:
    domain: tuple[str, ...]
    signature: Signature
    relations: Mapping[str, frozenset] = field(hash=False)

    def __post_init__(self):
        dom = tuple(str(d) for d in self.domain)
        if len(set(dom)) != len(dom):
            raise ValueError("duplicate domain elements")
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "signature", make_signature(self.signature))
        members = set(dom)
        rels = {}
        arity = dict(self.signature)
        for name, tuples in self.relations.items():
            if name not in arity:
                raise ValueError(f"unknown symbol {name}")
        for name, ar in self.signature:
            ts = frozenset(tuple(str(x) for x in t)
                           for t in self.relations.get(name, ()))
            for t in ts:
                if len(t) != ar:
                    raise ValueError(f"{name}/{ar}: tuple {t} has wrong arity")
                if not set(t) <= members:
                    raise ValueError(f"{name}: tuple {t} leaves the domain")
            rels[name] = ts
        object.__setattr__(self, "relations", rels)

    @property
    def arity(self) -> dict[str, int]:
        return dict(self.signature)

    def holds(self, rel: str, t) -> bool:
        return tuple(t) in self.relations[rel]

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.domain == other.domain and self.signature == other.signature
                and dict(self.relations) == dict(other.relations))

    def __hash__(self):
        return hash((self.domain, self.signature))

    def __len__(self):
        return len(self.domain)

    def reduct(self, names: Iterable[str]) -> "Structure":
        keep = set(names)
        sig = tuple((n, a) for n, a in self.signature if n in keep)
        return Structure(self.domain, sig,
                         {n: self.relations[n] for n, _ in sig})

    def expand(self, extra: Mapping[str, Iterable], arities=None) -> "Structure":
        """Add new symbols (or extend existing ones) to a copy."""
        arities = dict(arities or {})
        sig = list(self.signature)
        rels = {n: set(ts) for n, ts in self.relations.items()}
        for name, tuples in extra.items():
            tuples = [tuple(str(x) for x in t) for t in tuples]
            if name not in rels:
                ar = arities.get(name) or (len(tuples[0]) if tuples else None)
                if ar is None:
                    raise ValueError(f"arity of {name} unknown")
                sig.append((name, ar))
                rels[name] = set()
            rels[name].update(tuples)
        return Structure(self.domain, tuple(sig), rels)

    def live_tuples(self, sigma=None) -> list[tuple[str, ...]]:
        """All sigma-live tuples of length >= 1 (singletons included)."""
        names = self.arity.keys() if sigma is None else sigma
        out = {(d,) for d in self.domain}
        for n in names:
            out |= self.relations.get(n, frozenset())
        return sorted(out, key=lambda t: (len(t), t))


@dataclass(frozen=True)
class AffixType:
    """Signed atoms over the affix windows of x1..xn.

    ``atoms`` maps (relation, first index) to the polarity of R on the
    window x_first .. x_{first+ar-1} (indices 1-based).
    """
    n: int
    kind: str
    atoms: frozenset

    def polarity(self, rel: str, first: int) -> bool:
        return dict(((r, i), v) for (r, i), v in self.atoms)[(rel, first)]

    def polarities(self) -> tuple[bool, ...]:
        return tuple(v for _, v in sorted(self.atoms))

    def positive(self) -> list[tuple[str, tuple[int, ...]]]:
        return sorted((r, i) for (r, i), v in self.atoms if v)

    def restricted(self, names) -> "AffixType":
        names = set(names)
        return AffixType(self.n, self.kind,
                         frozenset(a for a in self.atoms if a[0][0] in names))

    def union(self, other: "AffixType") -> "AffixType":
        if (self.n, self.kind) != (other.n, other.kind):
            raise ValueError("types over different tuples")
        merged = dict(self.atoms)
        for key, v in other.atoms:
            if merged.setdefault(key, v) != v:
                raise ValueError(f"inconsistent union on {key}")
        return AffixType(self.n, self.kind, frozenset(merged.items()))

    def __str__(self):
        lits = []
        for (r, i), v in sorted(self.atoms):
            lits.append(("" if v else "~") + f"{r}@{i}")
        return "{" + ", ".join(lits) + "}"


def windows(n: int, ar: int, kind: str) -> list[int]:
    """1-based start positions of the kind-affix windows of length ar."""
    if ar > n:
        return []
    if kind == "prefix":
        return [1]
    if kind == "suffix":
        return [n - ar + 1]
    if kind == "infix":
        return list(range(1, n - ar + 2))
    raise ValueError(f"unknown affix kind {kind}")


def affix_type(S: Structure, t, sigma, kind: str = "infix") -> AffixType:
    t = tuple(str(x) for x in t)
    dom = set(S.domain)
    for x in t:
        if x not in dom:
            raise ValueError(f"element {x!r} not in domain")
    arity = S.arity
    atoms = []
    for name in _names(sigma):
        ar = arity[name]
        for i in windows(len(t), ar, kind):
            atoms.append(((name, i), t[i - 1:i - 1 + ar] in S.relations[name]))
    return AffixType(len(t), kind, frozenset(atoms))


def _names(sigma) -> list[str]:
    if isinstance(sigma, Mapping):
        return list(sigma)
    return [s[0] if isinstance(s, tuple) else s for s in sigma]


def is_live(S: Structure, t, sigma) -> bool:
    t = tuple(str(x) for x in t)
    if len(t) <= 1:
        return True
    return any(t in S.relations.get(n, ()) for n in _names(sigma))


def induced_substructure(S: Structure, subset) -> Structure:
    keep = {str(x) for x in subset}
    missing = keep - set(S.domain)
    if missing:
        raise ValueError(f"not in domain: {sorted(missing)}")
    dom = tuple(d for d in S.domain if d in keep)
    rels = {n: {t for t in ts if set(t) <= keep} for n, ts in S.relations.items()}
    return Structure(dom, S.signature, rels)


# ------------------------------------------------------------------ encodings

def encode_matrix(S: Structure) -> str:
    """Unary domain size, a separating 1, then one bitmap per relation.

    Tuples are ranked lexicographically by domain order, leftmost position
    most significant.
    """
    n = len(S.domain)
    parts = ["0" * n, "1"]
    for name, ar in S.signature:
        rel = S.relations[name]
        parts.append("".join("1" if t in rel else "0"
                             for t in itertools.product(S.domain, repeat=ar)))
    return "".join(parts)


def decode_matrix(bits: str, sig, domain=None) -> Structure:
    sig = make_signature(sig)
    if set(bits) - {"0", "1"}:
        raise ValueError("matrix encoding must consist of 0/1 characters")
    n = bits.find("1")
    if n < 0:
        raise ValueError("missing separator 1")
    if domain is None:
        domain = tuple(str(i) for i in range(n))
    domain = tuple(str(d) for d in domain)
    if len(domain) != n:
        raise ValueError(f"domain has {len(domain)} names, encoding says {n}")
    expected = n + 1 + sum(n ** ar for _, ar in sig)
    if len(bits) != expected:
        raise ValueError(f"malformed length {len(bits)}, expected {expected}")
    pos = n + 1
    rels = {}
    for name, ar in sig:
        tuples = list(itertools.product(domain, repeat=ar))
        chunk = bits[pos:pos + len(tuples)]
        rels[name] = {t for t, b in zip(tuples, chunk) if b == "1"}
        pos += len(tuples)
    return Structure(domain, sig, rels)


def encode_list(S: Structure) -> str:
    rank = {d: i for i, d in enumerate(S.domain)}
    lines = ["domain: " + " ".join(S.domain) if S.domain else "domain:"]
    for name, ar in S.signature:
        ts = sorted(S.relations[name], key=lambda t: [rank[x] for x in t])
        body = " ".join("(" + " ".join(t) + ")" for t in ts)
        lines.append(f"{name}/{ar}:" + (" " + body if body else ""))
    return "\n".join(lines) + "\n"


_REL_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)/(\d+):(.*)$")
_TUPLE = re.compile(r"\(([^()]*)\)")


def decode_list(text: str, sig=None) -> Structure:
    """Parse the list format; ``sig`` (optional) is checked against it."""
    domain = None
    signature = []
    rels = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("domain:"):
            if domain is not None:
                raise ValueError(f"line {lineno}: duplicate domain line")
            domain = line[len("domain:"):].split()
            continue
        m = _REL_LINE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        name, ar, rest = m.group(1), int(m.group(2)), m.group(3)
        if name in rels:
            raise ValueError(f"line {lineno}: relation {name} listed twice")
        tuples = set()
        leftover = _TUPLE.sub("", rest).strip()
        if leftover:
            raise ValueError(f"line {lineno}: stray text {leftover!r}")
        for tm in _TUPLE.finditer(rest):
            t = tuple(tm.group(1).split())
            if len(t) != ar:
                raise ValueError(f"line {lineno}: arity mismatch for {name}/{ar}: {t}")
            tuples.add(t)
        signature.append((name, ar))
        rels[name] = tuples
    if domain is None:
        raise ValueError("missing 'domain:' line")
    if sig is not None:
        sig = make_signature(sig)
        given = dict(signature)
        for name in given:
            if name not in dict(sig):
                raise ValueError(f"unknown symbol {name}")
        for name, ar in sig:
            if name in given and given[name] != ar:
                raise ValueError(f"arity mismatch for {name}: {given[name]} vs {ar}")
            if name not in given:
                rels[name] = set()
        signature = list(sig)
    return Structure(tuple(domain), tuple(signature), rels)
