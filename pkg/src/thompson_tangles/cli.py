"""Command line: element, tangle, distinguish, bracket, homology, verify.

Output is JSON on stdout.  Exit codes: 0 success, 1 domain error, 2 when a
resource guard trips.  Options can also come from a key=value config file;
the output directory defaults to $THOMPSON_TANGLES_OUT or the current one.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import fgroup, khovanov, laxaction, orient, render, strand, tangle

CONFIG_KEYS = {"mirror", "kmax", "budget", "field", "outdir", "seed"}


class DomainError(Exception):
    pass


def read_config(path) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in CONFIG_KEYS:
            raise DomainError(f"{path}:{n}: expected one of {sorted(CONFIG_KEYS)} as key=value")
        out[key] = value.strip()
    if out.get("field", "Z2") not in ("Z2", "F2", "2"):
        raise DomainError("only Z/2 coefficients are implemented")
    return out


def _bool(s) -> bool:
    return str(s).lower() in ("1", "true", "yes", "on")


def _element(text: str) -> fgroup.FElement:
    try:
        return fgroup.parse_element(text)
    except (fgroup.ParseError, ValueError) as e:
        raise DomainError(f"cannot parse element {text!r}: {e}") from e


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


# -- subcommands ------------------------------------------------------------------

def cmd_element(args) -> int:
    g = _element(args.expr)
    _emit({"element": str(g), "domain": fgroup.tree_to_str(g.dom), "range": fgroup.tree_to_str(g.ran),
           "leaves": g.leaves, "height": fgroup.height(g),
           "oriented": fgroup.is_oriented_member(g),
           "leaf_sign": str(orient.NSign(fgroup.tree_sign(g.dom)))})
    return 0


def _check_k(args):
    if args.k > args.kmax:
        raise DomainError(f"k={args.k} exceeds kmax={args.kmax}")


def cmd_tangle(args) -> int:
    _check_k(args)
    g = _element(args.expr)
    d = strand.theta(args.k, g)
    if args.oriented:
        try:
            og = orient.oriented_theta(args.k, g)
        except orient.NotInOrientedF as e:
            raise DomainError(str(e)) from e
        t = tangle.oriented_tangle_of(og, mirror=args.mirror)
        signs = og.signs
    else:
        t = tangle.tangle_of(d, mirror=args.mirror)
        signs = None
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.name or f"theta{args.k}_{_slug(args.expr)}"
    pd_path = out / f"{stem}.json"
    pd_path.write_text(t.to_json() + "\n")
    report = {"element": str(g), "k": args.k, "diagram": str(as_word(d)),
              "nodes": len(strand.as_graph(d).kind), "crossings": len(t.crossings),
              "pd": str(pd_path)}
    if args.svg:
        svg_path = out / f"{stem}.svg"
        svg_path.write_text(render.tangle_svg(d, title=f"T(Theta_{args.k}({args.expr}))",
                                             mirror=args.mirror, signs=signs))
        report["svg"] = str(svg_path)
    _emit(report)
    return 0


def as_word(d):
    return strand.as_word(d)


def _slug(s: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in s).strip("_") or "e"


def cmd_distinguish(args) -> int:
    g, h = _element(args.g), _element(args.h)
    if g == h:
        raise DomainError("the two elements are equal")
    d = tangle.distinguish(g, h, kmax=args.kmax, mirror=args.mirror)
    _emit({"g": str(g), "h": str(h), "least_k": d.k, "witness": d.witness,
           "height_threshold": d.height_threshold, "leaves_threshold": d.leaves_threshold})
    return 0 if d.found else 1


def _closure(args):
    _check_k(args)
    g = _element(args.expr)
    t = tangle.tangle_of(strand.theta(args.k, g), mirror=args.mirror)
    return g, tangle.orient_closed(tangle.closure(t))


def cmd_bracket(args) -> int:
    g, link = _closure(args)
    if len(link.crossings) > tangle.MAX_BRACKET_CROSSINGS:
        raise khovanov.ResourceGuard(f"{len(link.crossings)} crossings exceeds {tangle.MAX_BRACKET_CROSSINGS}")
    br = tangle.kauffman_bracket(link)
    _emit({"element": str(g), "k": args.k, "crossings": len(link.crossings),
           "bracket": tangle.poly_str(br),
           "coefficients": {str(e): c for e, c in sorted(br.items())}})
    return 0


def cmd_homology(args) -> int:
    g, link = _closure(args)
    c = khovanov.complex_of_tangle(link)
    hom = khovanov.homology(c)
    chi = khovanov.chi_in_A(khovanov.euler_characteristic(hom))
    report = {"element": str(g), "k": args.k, "crossings": len(link.crossings),
              "complex_rank": c.dim(),
              "homology": [{"h": h, "q": q, "rank": r} for (h, q), r in sorted(hom.items())],
              "euler_matches_bracket": chi == khovanov.bracket_prediction(link)}
    if args.dump:
        Path(args.dump).write_text(c.to_json() + "\n")
        report["complex"] = args.dump
    _emit(report)
    return 0


def cmd_verify(args) -> int:
    t0 = time.time()
    if args.budget > laxaction.MAX_BUDGET:
        raise khovanov.ResourceGuard(f"budget {args.budget} exceeds {laxaction.MAX_BUDGET}")
    axioms = [a.strip() for a in args.axioms.split(",") if a.strip()]
    unknown = set(axioms) - {"unit", "assoc", "independence"}
    if unknown:
        raise DomainError(f"unknown axioms {sorted(unknown)}")
    elements = [fgroup.IDENTITY] + [g for _, g in laxaction.short_oriented_elements(2, 6, args.k)]
    reports = []
    if "unit" in axioms:
        for g in elements:
            reports.append(laxaction.verify_unit(g, args.k, args.budget, args.mirror, seed=args.seed).to_dict())
    if "assoc" in axioms:
        for f in elements:
            for g in elements:
                for h in elements:
                    r = laxaction.verify_assoc(f, g, h, args.k, args.budget, args.mirror,
                                               seed=args.seed, max_summands=args.max_summands)
                    reports.append(r.to_dict())
    if "independence" in axioms:
        for k in (0, 1):
            pairs = laxaction.height_two_pairs(k=k)
            bad = [f"{g}[{U}] / {h}[{V}]" for g, U, h, V, gr in pairs
                   if not laxaction.movie_independence(gr, args.mirror)["equal"]]
            reports.append({"axiom": f"independence k={k}", "pass": not bad,
                            "diagrams": len(pairs), "failures": bad[:5]})
    ok = all(r["pass"] for r in reports)
    _emit({"pass": ok, "k": args.k, "budget": args.budget, "mirror": args.mirror,
           "seed": args.seed, "seconds": round(time.time() - t0, 3), "reports": reports})
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thompson-tangles", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value file (mirror, kmax, budget, field, outdir, seed)")
    p.add_argument("--mirror", action="store_true", default=None, help="swap over and under everywhere")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("element", help="normalize an element of F")
    s.add_argument("expr", help="word like 'x0 x1^-1' or tree pair '(* *) *;* (* *)'")
    s.set_defaults(func=cmd_element)

    s = sub.add_parser("tangle", help="write the PD code (and SVG) of T(Theta_k(g))")
    s.add_argument("expr")
    s.add_argument("-k", type=int, default=0)
    s.add_argument("--oriented", action="store_true")
    s.add_argument("--svg", action="store_true")
    s.add_argument("--outdir", default=None)
    s.add_argument("--name", default=None, help="file stem for the outputs")
    s.set_defaults(func=cmd_tangle)

    s = sub.add_parser("distinguish", help="least k separating two elements")
    s.add_argument("g")
    s.add_argument("h")
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("bracket", help="Kauffman bracket of the closure of T(Theta_k(g))")
    s.add_argument("expr")
    s.add_argument("-k", type=int, default=0)
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("homology", help="Z/2 Khovanov homology of the closure of T(Theta_k(g))")
    s.add_argument("expr")
    s.add_argument("-k", type=int, default=0)
    s.add_argument("--dump", help="write the chain complex as JSON to this file")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("verify", help="check the lax action axioms")
    s.add_argument("--axioms", default="unit,assoc,independence")
    s.add_argument("-k", type=int, default=0)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--max-summands", type=int, default=40,
                   help="sample this many summand triples per element triple")
    s.set_defaults(func=cmd_verify)
    return p


def _merge_config(args) -> None:
    cfg = read_config(args.config) if args.config else {}
    if args.mirror is None:
        args.mirror = _bool(cfg.get("mirror", "false"))
    if args.kmax is None:
        args.kmax = int(cfg.get("kmax", 6))
    if args.seed is None:
        args.seed = int(cfg.get("seed", 0))
    if getattr(args, "budget", 0) is None:
        args.budget = int(cfg.get("budget", 1))
    if hasattr(args, "outdir") and args.outdir is None:
        args.outdir = cfg.get("outdir") or os.environ.get("THOMPSON_TANGLES_OUT", ".")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except khovanov.ResourceGuard as e:
        print(json.dumps({"error": str(e), "kind": "resource"}), file=sys.stderr)
        return 2
    except (DomainError, ValueError) as e:
        print(json.dumps({"error": str(e), "kind": "domain"}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
