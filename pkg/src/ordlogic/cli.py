"""Command-line interface: ``ordlogic <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import casebook
from .amalgam import (CapExhausted, CompletionConflict, PreconditionFailed,
                      WitnessFailure, audit_conditions, build_pre_model,
                      check_stage_invariants, initial_stage, run_guarded_stage)
from .bisimulation import (BisimRelation, GameConfig, bisim_fixpoint,
                           kround_game, verify_bisimulation)
from .evaluator import UnsupportedFormula, eval_naive, eval_windowed
from .rewriter import (RewriteError, to_normal_form_guarded,
                       to_normal_form_pre, to_suffix_form)
from .structures import (decode_list, decode_matrix, encode_list,
                         encode_matrix, make_signature)
from .syntax import FormulaSyntaxError, classify, parse_formula, to_sexpr
from .unravel import (check_type_preservation, check_unravel_bisimulation,
                      hah_unravel, is_hat)

_LOGICS = {"pre": "L_pre", "gpre": "G_pre", "gsuf": "G_suf", "ginf": "G_inf"}


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _structure(path):
    return decode_list(_read(path))


def _formula(path):
    return parse_formula(_read(path))


def _tuple(text):
    return tuple(text.split()) if text else ()


def _sigma(text, *structures):
    if text:
        return tuple(s for s in text.replace(",", " ").split())
    names = set()
    for S in structures:
        names |= {n for n, _ in S.signature}
    return tuple(sorted(names))


def _signature(text):
    pairs = []
    for item in text.replace(",", " ").split():
        name, ar = item.split("/")
        pairs.append((name, int(ar)))
    return make_signature(pairs)


def _assignment(items):
    out = {}
    for item in items or ():
        var, val = item.split("=")
        out[int(var.lstrip("x"))] = val
    return out


# ---------------------------------------------------------------- commands

def cmd_classify(args):
    labels = sorted(classify(_formula(args.file)))
    return {"labels": labels}, " ".join(labels)


def cmd_mc(args):
    S, f = _structure(args.structure), _formula(args.formula)
    s = _assignment(args.assign)
    value = (eval_naive if args.engine == "naive" else eval_windowed)(S, s, f)
    return {"value": value, "engine": args.engine}, str(value).lower()


def _cfg(args, A, B):
    return GameConfig(args.logic, _sigma(args.sigma, A, B), getattr(args, "rounds", 3) or 3)


def cmd_bisim(args):
    A, B = _structure(args.A), _structure(args.B)
    cfg = _cfg(args, A, B)
    if args.action == "verify":
        if not args.relation:
            raise CliError("bisim verify needs a relation file")
        Z = BisimRelation.from_text(_read(args.relation))
        rep = verify_bisimulation(A, B, Z, cfg, depth=args.depth)
        return {"ok": rep.ok, "summary": rep.summary()}, rep.summary(), 0 if rep.ok else 1
    if args.action == "fixpoint":
        Z = bisim_fixpoint(A, B, cfg, args.cap)
        return {"pairs": [[list(a), list(b)] for a, b in Z],
                "root": ((), ()) in Z}, Z.to_text().rstrip() or "(empty)"
    ok = kround_game(A, _tuple(args.a), B, _tuple(args.b), cfg)
    text = f"duplicator {'survives' if ok else 'loses'} {cfg.rounds} rounds"
    return {"survives": ok, "rounds": cfg.rounds}, text, 0 if ok else 1


def cmd_rewrite(args):
    f = _formula(args.file)
    ref = _structure(args.model) if args.model else None
    rt = _tuple(args.tuple) or None
    if args.to_suf:
        g = to_suffix_form(f)
        return {"formula": to_sexpr(g)}, to_sexpr(g)
    if args.nf_pre:
        nf, fresh = to_normal_form_pre(f, args.head, ref=ref, ref_tuple=rt)
    else:
        nf, fresh = to_normal_form_guarded(f, head=args.head, ref=ref, ref_tuple=rt)
    g = nf.to_formula()
    payload = {"formula": to_sexpr(g), "logic": nf.logic, "head": nf.head,
               "fresh": [list(x) if isinstance(x, tuple) else x for x in fresh]}
    if getattr(nf, "model", None) is not None:
        payload["model"] = encode_list(nf.model)
    return payload, to_sexpr(g)


def cmd_encode(args):
    S = _structure(args.structure)
    text = encode_matrix(S) if args.matrix else encode_list(S).rstrip()
    return {"encoding": text}, text


def cmd_decode(args):
    raw = _read(args.file)
    if args.matrix:
        if not args.sig:
            raise CliError("--matrix decoding needs --sig")
        S = decode_matrix(raw.strip(), _signature(args.sig),
                          args.domain.split() if args.domain else None)
    else:
        S = decode_list(raw, _signature(args.sig) if args.sig else None)
    text = encode_list(S).rstrip()
    return {"structure": text}, text


def cmd_unravel(args):
    S = _structure(args.structure)
    h = hah_unravel(S, args.depth)
    payload = {"structure": encode_list(h.structure),
               "origin": {n: list(p) for n, p in h.origin.items()}}
    text = encode_list(h.structure).rstrip()
    if args.check:
        hat = is_hat(h)
        types = check_type_preservation(S, h).ok
        game = check_unravel_bisimulation(S, h)
        payload.update(hat=hat, types=types, bisimulation=game.ok, exempt=game.exempt)
        text += (f"\n# hedge: {hat}; types preserved: {types}; "
                 f"bisimulation: {game.ok} ({game.exempt} frontier moves exempt)")
    return payload, text


def cmd_amalgam(args):
    logic = _LOGICS[args.logic]
    phi, psi = _formula(args.phi), _formula(args.psi)
    A, B = _structure(args.A), _structure(args.B)
    Z = BisimRelation.from_text(_read(args.relation)) if args.relation else None
    if logic == "L_pre":
        m = build_pre_model(phi, psi, A, _tuple(args.a), B, _tuple(args.b), args.cap, Z)
        env = {i + 1: x for i, x in enumerate(m.head)} if _tuple(args.a) else {}
        ok = eval_naive(m.structure, env, phi) and eval_naive(m.structure, env, psi)
        text = encode_list(m.structure).rstrip() + "\n# " + "; ".join(m.log)
        return ({"structure": encode_list(m.structure), "head": list(m.head),
                 "log": m.log, "models_both": ok}, text, 0 if ok else 1)
    st = initial_stage(phi, psi, A, B, logic, Z)
    for _ in range(args.stages):
        st = run_guarded_stage(st)
    rep = audit_conditions(st)
    inv = check_stage_invariants(st)
    broken = sorted(k for k, v in inv.items() if v)
    U = st.structure()
    text = "\n".join([encode_list(U).rstrip(), *("# " + line for line in st.log),
                      "# " + rep.summary(), f"# invariants broken: {broken or 'none'}"])
    payload = {"structure": encode_list(U), "log": st.log,
               "audit": {k: [repr(x) for x in v] for k, v in rep.results.items()},
               "invariants_broken": broken}
    return payload, text, 0 if rep.ok and not broken else 1


def cmd_verify_paper(args):
    only = set(args.only) if args.only else None
    if only:
        known = set(casebook.blocks()) | {c.name for c in casebook.CHECKS}
        unknown = only - known
        if unknown:
            raise CliError(f"unknown block or check {sorted(unknown)}; "
                           f"blocks: {', '.join(casebook.blocks())}")
    outcomes = casebook.run_checks(args.fixtures, only)
    lines = [f"{o.status:5} [{o.check.block}] {o.check.name} ({o.seconds:.1f}s): {o.detail}"
             for o in outcomes]
    bad = [o for o in outcomes if not o.good]
    lines.append(f"{len(outcomes) - len(bad)}/{len(outcomes)} checks as expected")
    payload = {"checks": [{"name": o.check.name, "block": o.check.block,
                           "criterion": o.check.criterion, "status": o.status,
                           "detail": o.detail} for o in outcomes],
               "ok": not bad}
    return payload, "\n".join(lines), 1 if bad else 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordlogic",
                                description="Ordered first-order fragments toolkit.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="fragment labels of a formula")
    s.add_argument("file")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("mc", help="model-check a formula")
    s.add_argument("structure")
    s.add_argument("formula")
    s.add_argument("--engine", choices=("naive", "windowed"), default="naive")
    s.add_argument("--assign", nargs="*", metavar="xI=ELEM")
    s.set_defaults(fn=cmd_mc)

    s = sub.add_parser("bisim", help="bisimulation tools")
    s.add_argument("action", choices=("verify", "fixpoint", "game"))
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("relation", nargs="?")
    s.add_argument("--logic", default="L_inf",
                   choices=("L_pre", "L_suf", "L_inf", "G_pre", "G_suf", "G_inf"))
    s.add_argument("--sigma", help="shared symbols, comma separated")
    s.add_argument("--rounds", type=int, default=3)
    s.add_argument("--depth", type=int)
    s.add_argument("--cap", type=int)
    s.add_argument("--a", help="start tuple in A (space separated)")
    s.add_argument("--b", help="start tuple in B")
    s.set_defaults(fn=cmd_bisim)

    s = sub.add_parser("rewrite", help="suffix form and normal forms")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-suf", action="store_true")
    g.add_argument("--nf-pre", action="store_true")
    g.add_argument("--nf-guarded", action="store_true")
    s.add_argument("--model", help="a model of the input (needed for sentences)")
    s.add_argument("--tuple", help="head tuple in the model")
    s.add_argument("--head", default="H")
    s.set_defaults(fn=cmd_rewrite)

    for name, fn in (("encode", cmd_encode), ("decode", cmd_decode)):
        s = sub.add_parser(name, help=f"{name} structures")
        s.add_argument("structure" if name == "encode" else "file")
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--matrix", action="store_true")
        g.add_argument("--list", action="store_true")
        if name == "decode":
            s.add_argument("--sig", help="signature such as R/2,P/1")
            s.add_argument("--domain", help="element names, space separated")
        s.set_defaults(fn=fn)

    s = sub.add_parser("unravel", help="bounded hedge unravelling")
    s.add_argument("structure")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--check", action="store_true")
    s.set_defaults(fn=cmd_unravel)

    s = sub.add_parser("amalgam", help="joint model constructions")
    s.add_argument("phi")
    s.add_argument("psi")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("relation", nargs="?")
    s.add_argument("--logic", choices=tuple(_LOGICS), default="pre")
    s.add_argument("--stages", type=int, default=2)
    s.add_argument("--cap", type=int, default=32)
    s.add_argument("--a", help="head tuple in A")
    s.add_argument("--b", help="head tuple in B")
    s.set_defaults(fn=cmd_amalgam)

    s = sub.add_parser("verify-paper", help="run the bundled end-to-end checks")
    s.add_argument("--only", nargs="+", metavar="BLOCK")
    s.add_argument("--fixtures", type=Path, help="fixture root (default: bundled)")
    s.set_defaults(fn=cmd_verify_paper)
    return p


_USER_ERRORS = (CliError, FormulaSyntaxError, RewriteError, UnsupportedFormula,
                PreconditionFailed, CapExhausted, CompletionConflict,
                WitnessFailure, ValueError, KeyError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.fn(args)
    except _USER_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        if args.format == "json":
            print(json.dumps({"error": type(exc).__name__, "message": str(msg)}))
        else:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    payload, text, *code = result
    if args.format == "json":
        print(json.dumps(payload, indent=2, default=list))
    else:
        print(text)
    return code[0] if code else 0


if __name__ == "__main__":
    sys.exit(main())
