"""Command-line surface: enumeration, Green's analysis, factorization,
claim verification, with JSON/CSV export and a result cache.

Exit codes: 0 = ok, 2 = a verified claim was violated (with a
counterexample in the payload), 1 = usage or resource error.  Text
output is deterministic given the flags; timing appears only in JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass

from . import enumeration as en
from . import factor, fence, genfam, greens, pinj

SCHEMA_VERSION = "v1"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for claim violations
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


@dataclass
class CommandResult:
    status: str  # ok | violation | error
    payload: dict
    timing_ms: float = 0.0


def _parse_element(text: str, n: int) -> pinj.PartialInjection:
    elt = pinj.parse(text)
    if elt.n != n:
        raise pinj.SizeMismatchError(
            f"element literal has n={elt.n} but --n {n} was given"
        )
    return elt


# --- enumerate ---------------------------------------------------------------


def cmd_enumerate(args) -> CommandResult:
    cache_dir = en.cache_dir_from_env(args.cache_dir)
    path = os.path.join(cache_dir, en.cache_filename(args.n, args.which))
    table = None
    if not args.no_cache and os.path.exists(path):
        try:
            cached = en.load_table(path)
            if cached.n == args.n and cached.kind == args.which:
                table = cached
        except (ValueError, OSError):
            table = None
    if table is None:
        table = en.build(args.n, args.which, threads=args.threads, huge=args.huge)
        if not args.no_cache:
            os.makedirs(cache_dir, exist_ok=True)
            en.save_table(table, path)
    payload: dict = {"which": args.which, "count": len(table)}
    if args.contains is not None:
        elt = _parse_element(args.contains, args.n)
        payload["contains"] = elt in table
    if args.elements:
        payload["elements"] = [e.encode() for e in table.elements]
    return CommandResult("ok", payload)


def _render_enumerate(payload, out):
    out.write(f"count {payload['count']}\n")
    if "contains" in payload:
        out.write(f"contains {str(payload['contains']).lower()}\n")
    for enc in payload.get("elements", ()):
        out.write(enc + "\n")


# --- greens ------------------------------------------------------------------


def cmd_greens(args) -> CommandResult:
    if args.classes:
        table = en.build(args.n, "IF", huge=args.huge)
        classes = greens.j_classes(table)
        rows = [
            {
                "class": idx,
                "invariant": greens.j_invariant(cls[0]).encode(),
                "size": len(cls),
                "representative": cls[0].encode(),
            }
            for idx, cls in enumerate(classes)
        ]
        return CommandResult("ok", {"count": len(table), "classes": rows})

    if len(args.elements) == 1:
        elts = [args.elements[0], args.elements[0]]
    elif len(args.elements) == 2:
        elts = args.elements
    else:
        raise ValueError("give one or two element literals, or --classes")
    a = _parse_element(elts[0], args.n)
    b = _parse_element(elts[1], args.n)
    fence.require_if(a)
    fence.require_if(b)

    rels = ["R", "L", "H", "J"] if args.relation == "all" else [args.relation]
    verdicts = {}
    for rel in rels:
        if rel in ("J", "D"):
            verdicts[rel] = greens.are_j_related(a, b)
        else:
            verdicts[rel] = greens.green_test(rel, a, b)
    payload = {
        "first": a.encode(),
        "second": b.encode(),
        "relations": verdicts,
        "invariants": {
            "first": greens.j_invariant(a).encode(),
            "second": greens.j_invariant(b).encode(),
        },
    }
    if args.witness:
        if greens.are_j_related(a, b):
            g, d = greens.j_witness(a, b)
            payload["witness"] = {
                "gamma": g.encode(),
                "delta": d.encode(),
                "verified": g * a * d == b,
            }
        else:
            payload["witness"] = None
    return CommandResult("ok", payload)


def _render_greens(payload, out):
    if "classes" in payload:
        out.write(f"count {payload['count']}\n")
        for row in payload["classes"]:
            out.write(
                f"class {row['class']}: invariant {row['invariant']} "
                f"size {row['size']} rep {row['representative']}\n"
            )
        return
    for rel, verdict in payload["relations"].items():
        out.write(f"{rel} {str(verdict).lower()}\n")
    out.write(f"invariant first {payload['invariants']['first'] or '(empty)'}\n")
    out.write(f"invariant second {payload['invariants']['second'] or '(empty)'}\n")
    if "witness" in payload:
        w = payload["witness"]
        if w is None:
            out.write("witness none (not J-related)\n")
        else:
            out.write(f"witness gamma {w['gamma']}\n")
            out.write(f"witness delta {w['delta']}\n")
            out.write(f"witness verified {str(w['verified']).lower()}\n")


def _greens_csv(payload, out):
    writer = csv.writer(out)
    writer.writerow(["class", "invariant", "size", "representative"])
    for row in payload["classes"]:
        writer.writerow([row["class"], row["invariant"], row["size"], row["representative"]])


# --- factorize ---------------------------------------------------------------


def cmd_factorize(args) -> CommandResult:
    a = _parse_element(args.element, args.n)
    fence.require_if(a)
    if args.target == "G":
        word = factor.factorize_g(a)
    else:
        word = factor.factorize_j(a)
    payload = {
        "target": args.target,
        "element": a.encode(),
        "word": word.text(),
        "length": len(word),
        "fallback": word.fallback,
        "provenance": word.provenance,
    }
    if args.target == "G":
        payload["bfs_letters"] = word.bfs_letters
    if args.verify:
        payload["verified"] = factor.eval_word(word) == a
    return CommandResult("ok", payload)


def _render_factorize(payload, out):
    out.write(f"word {payload['word']}\n")
    out.write(f"length {payload['length']}\n")
    out.write(f"fallback {str(payload['fallback']).lower()}\n")
    out.write(f"provenance {payload['provenance']}\n")
    if "bfs_letters" in payload:
        out.write(f"bfs_letters {payload['bfs_letters']}\n")
    if "verified" in payload:
        out.write(f"verified {str(payload['verified']).lower()}\n")


# --- verify ------------------------------------------------------------------


def _verify_thm1(n, huge):
    table = en.build(n, "IF", huge=huge)
    gens = genfam.set_j(n)
    generated = len(en.closure(n, gens))
    ok = generated == len(table)
    return ok, {"size": len(table), "generators": len(gens), "generated": generated}


def _verify_thm2(n, huge):
    table = en.build(n, "IF", huge=huge)
    cl = en.closure(n, genfam.set_g(n))
    ok = set(cl.elements) == set(table.elements)
    return ok, {"size": len(table), "generated": len(cl)}


def _verify_least(n, huge):
    table = en.build(n, "IF", huge=huge)
    least = en.least_generating_set(table)
    G = set(genfam.set_g(n))
    ok = least is not None and set(least) == G
    return ok, {
        "least": sorted(e.encode() for e in least) if least else None,
        "expected_size": n + 1,
    }


def _verify_rank(n, huge):
    table = en.build(n, "IF", huge=huge)
    result = en.semigroup_rank(table)
    ok = result == ("exact", n + 1)
    return ok, {"rank": list(result), "expected": n + 1}


def _verify_odd_neg(n, huge):
    if n % 2 == 0:
        raise genfam.OddAmbientError("claim odd-neg applies to odd n only")
    table = en.build(n, "IF", huge=huge)
    high = [a for a in table if a.rank >= n - 1]
    generates = en.is_generating(table, high)
    least = en.least_generating_set(table)
    ok = not generates and least is None
    return ok, {
        "high_rank_generates": generates,
        "least_generating_set": None if least is None else sorted(e.encode() for e in least),
    }


def _verify_jcrit(n, huge):
    table = en.build(n, "IF", huge=huge)
    crit = greens.j_classes(table)
    if n <= 5:
        # literal oracle: one two-sided principal ideal per element
        jsets = {a: en.principal_ideals(table, a)[2] for a in table}
        for a in table:
            for b in table:
                criterion = greens.j_invariant(a) == greens.j_invariant(b)
                oracle = b in jsets[a] and a in jsets[b]
                if criterion != oracle:
                    return False, {
                        "counterexample": [a.encode(), b.encode()],
                        "criterion": criterion,
                        "oracle": oracle,
                    }
        return True, {"classes": len(crit), "pairs": len(table) ** 2}
    oracle = en.ideal_j_classes(table, genfam.set_j(n))
    ok = [sorted(c) for c in crit] == [sorted(c) for c in oracle]
    return ok, {"classes": len(crit), "oracle_classes": len(oracle)}


def _verify_regular(n, huge):
    pfi = en.build(n, "PFI", huge=huge)
    regulars = en.regular_elements(pfi)
    stray = [a for a in regulars if not fence.in_if(a)]
    ok = not stray
    return ok, {
        "pfi_size": len(pfi),
        "regular": len(regulars),
        "outside_if": [a.encode() for a in stray[:5]],
    }


_CLAIMS = {
    "thm1": (_verify_thm1, None),
    "thm2": (_verify_thm2, "even"),
    "least": (_verify_least, "even"),
    "rank": (_verify_rank, "even"),
    "odd-neg": (_verify_odd_neg, "odd"),
    "jcrit": (_verify_jcrit, None),
    "regular": (_verify_regular, None),
}


def cmd_verify(args) -> CommandResult:
    func, parity = _CLAIMS[args.claim]
    if parity == "even" and args.n % 2:
        raise genfam.OddAmbientError(f"claim {args.claim} applies to even n only")
    if parity == "odd" and args.n % 2 == 0:
        raise genfam.OddAmbientError(f"claim {args.claim} applies to odd n only")
    ok, payload = func(args.n, args.huge)
    payload["claim"] = args.claim
    return CommandResult("ok" if ok else "violation", payload)


def _render_verify(payload, out, status):
    out.write(f"claim {payload['claim']}: {status}\n")
    for key in sorted(payload):
        if key != "claim":
            out.write(f"{key} {json.dumps(payload[key])}\n")


# --- wiring ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="fence-monoid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, required=True, help="ambient size")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--huge", action="store_true", help="allow n = 9, 10")
        p.add_argument(
            "--threads", type=int, default=1, help="max parallel workers"
        )

    p = sub.add_parser("enumerate", help="build and count I / PFI / IF")
    common(p)
    p.add_argument("--which", choices=("I", "PFI", "IF"), default="IF")
    p.add_argument("--elements", action="store_true", help="print all elements")
    p.add_argument("--contains", metavar="ELT", help="membership query")
    p.add_argument("--cache-dir", default=None, help="cache directory (env FENCE_CACHE)")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_enumerate, render=_render_enumerate)

    p = sub.add_parser("greens", help="Green's relations, invariants, witnesses")
    common(p)
    p.add_argument("elements", nargs="*", help="one or two element literals")
    p.add_argument("--relation", choices=("R", "L", "H", "J", "D", "all"), default="all")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--classes", action="store_true", help="full J-class table of IF_n")
    p.set_defaults(func=cmd_greens, render=_render_greens)

    p = sub.add_parser("factorize", help="factor an element into high-rank letters")
    common(p)
    p.add_argument("--element", required=True, metavar="ELT")
    p.add_argument("--target", choices=("J", "G"), default="J")
    p.add_argument("--verify", action="store_true", help="re-evaluate the word")
    p.set_defaults(func=cmd_factorize, render=_render_factorize)

    p = sub.add_parser("verify", help="check a structural claim, report ok/violation")
    common(p)
    p.add_argument("--claim", choices=sorted(_CLAIMS), required=True)
    p.set_defaults(func=cmd_verify, render=_render_verify)
    return parser


def _emit(args, result: CommandResult) -> None:
    if args.format == "json":
        params = {
            k: v
            for k, v in vars(args).items()
            if k not in ("func", "render", "command", "n", "format") and v is not None
        }
        doc = {
            "command": args.command,
            "n": args.n,
            "params": params,
            "status": result.status,
            "result": result.payload,
            "timing_ms": result.timing_ms,
            "version": SCHEMA_VERSION,
        }
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    elif args.format == "csv":
        if args.command == "greens" and "classes" in result.payload:
            _greens_csv(result.payload, sys.stdout)
        else:
            raise ValueError("csv format is only available for tabular output (greens --classes)")
    else:
        if args.command == "verify":
            _render_verify(result.payload, sys.stdout, result.status)
        else:
            args.render(result.payload, sys.stdout)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    if args.n < 1:
        sys.stderr.write("error: --n must be positive\n")
        return 1
    try:
        t0 = time.perf_counter()
        result = args.func(args)
        result.timing_ms = (time.perf_counter() - t0) * 1000.0
        _emit(args, result)
    except BrokenPipeError:
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0 if result.status == "ok" else 2


if __name__ == "__main__":
    sys.exit(main())
