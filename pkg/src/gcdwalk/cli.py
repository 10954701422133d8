"""Command-line front end: ``gcdwalk <command> --group Z4xZ2xZ3 --divisors '[[1,1,1]]' ...``.

Every command writes one JSON report (``{"schema_version", "command",
"group", "result"}``) validated by ``report_schema.json``; ``export-dot``
writes Graphviz DOT and ``--format text`` prints a short summary.

Exit status: 0 for any verdict (refusals included), 2 for argument errors,
3 when a size cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from .abelian import CayleyGraph, Group, ResourceError, divisor_set, gcd_set
from .classify import (
    Certificate,
    Refusal,
    certify_periodic,
    certify_pst,
    construct_pst,
    factorize,
    membership,
    rule_out_pst,
)
from .spectra import eigenvalue_parities, spectrum
from .walk import RationalPiTime, classify_at, oracle_deviation, transition_row

SCHEMA_VERSION = 1
ORACLE_TOLERANCE = 1e-9

COMMANDS = (
    "spectrum",
    "evolve",
    "classify-at",
    "membership",
    "certify",
    "construct",
    "cube-iso",
    "rule-out",
    "oracle-compare",
    "export-dot",
)


def load_schema() -> dict:
    return json.loads(resources.files("gcdwalk").joinpath("report_schema.json").read_text())


def parse_divisors(text: str, g: Group) -> frozenset:
    """JSON array of integer arrays, ``@path`` to such a file, or inline ``1,1,1;1,2,1``."""
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    if text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed divisor JSON: {exc}") from exc
        if not isinstance(raw, list) or not all(
            isinstance(d, list) and all(isinstance(c, int) for c in d) for d in raw
        ):
            raise ValueError("divisors must be a JSON array of integer arrays")
    else:
        try:
            raw = [[int(c) for c in part.split(",")] for part in text.split(";") if part.strip()]
        except ValueError as exc:
            raise ValueError(f"malformed inline divisors {text!r}") from exc
    return divisor_set(raw, g)


def _divisor_list(D) -> list:
    return [list(d) for d in sorted(D)]


def to_dot(graph: CayleyGraph, name: str = "gcd_graph") -> str:
    """DOT for an undirected Cayley graph; vertices are labelled by coordinate tuples."""
    g = graph.group
    lines = [f"graph {name} {{"]
    for x in g.elements():
        label = "(" + ",".join(map(str, x)) + ")"
        lines.append(f'  v{g.index(x)} [label="{label}"];')
    for u, v in graph.edges():
        iu, iv = g.index(u), g.index(v)
        attr = ' [style=dashed, comment="loop"]' if iu == iv else ""
        lines.append(f"  v{iu} -- v{iv}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"--{name.replace('_', '-')} is required for {args.command}")


def _graph(args, g):
    _require(args, "divisors")
    D = parse_divisors(args.divisors, g)
    return D, CayleyGraph(g, gcd_set(g, D).elements)


def _verdict_text(result) -> str:
    return json.dumps(result, sort_keys=True)


def run_command(args) -> dict | str:
    """Dispatch a parsed command; returns the report dict, or DOT text for ``export-dot``."""
    g = Group.parse(args.group)
    g.check_order()
    cmd = args.command
    result: dict
    if cmd == "spectrum":
        D, graph = _graph(args, g)
        spec = spectrum(graph)
        result = {
            "divisors": _divisor_list(D),
            "spectrum": spec.to_json(),
            "parity": eigenvalue_parities(spec).value,
        }
    elif cmd in ("evolve", "classify-at", "oracle-compare"):
        _require(args, "time")
        D, graph = _graph(args, g)
        t = RationalPiTime.parse(args.time)
        if cmd == "evolve":
            result = {"divisors": _divisor_list(D), "row": transition_row(graph, t).to_json()}
        elif cmd == "classify-at":
            result = {"divisors": _divisor_list(D), **classify_at(graph, t).to_json()}
        else:
            dev = oracle_deviation(graph, transition_row(graph, t))
            result = {
                "divisors": _divisor_list(D),
                "time": t.to_json(),
                "max_deviation": dev,
                "tolerance": ORACLE_TOLERANCE,
                "agrees": dev < ORACLE_TOLERANCE,
            }
    elif cmd == "membership":
        _require(args, "divisors")
        D = parse_divisors(args.divisors, g)
        result = {"divisors": _divisor_list(D), **membership(g, D).to_json()}
    elif cmd == "certify":
        _require(args, "divisors")
        D = parse_divisors(args.divisors, g)
        if args.pst_divisors is not None:
            out = certify_pst(g, D, parse_divisors(args.pst_divisors, g))
        else:
            out = certify_periodic(g, D)
        result = out.to_json() if isinstance(out, Refusal) else {"refused": False, **out.to_json()}
    elif cmd == "construct":
        out = construct_pst(g)
        if isinstance(out, Refusal):
            result = out.to_json()
        else:
            cert = certify_pst(g, out.periodic_part, out.pst_part)
            confirmed = isinstance(cert, Certificate) and cert.walk_confirmed
            result = {"refused": False, **out.to_json(), "walk_confirmed": confirmed}
    elif cmd == "cube-iso":
        _require(args, "divisors")
        D = parse_divisors(args.divisors, g)
        fac = factorize(g, D)
        emb = fac.embedding
        result = {
            "divisors": _divisor_list(D),
            "two_part": str(emb.source),
            "dimension": emb.target_dim,
            "connection": [list(c) for c in sorted(emb.connection_image)],
            "sigma": list(fac.cube.sigma),
            "odd_divisors": list(fac.odd_divisors),
            "vertex_map": [[list(x), list(emb.vertex_map(x))] for x in emb.source.elements()],
            "verified": emb.verify(),
        }
    elif cmd == "rule-out":
        _require(args, "divisors", "extra_divisors")
        D = parse_divisors(args.divisors, g)
        Dp = parse_divisors(args.extra_divisors, g)
        result = {
            "divisors": _divisor_list(D),
            "extra_divisors": _divisor_list(Dp),
            **rule_out_pst(g, D, Dp, k=args.k).to_json(),
        }
    elif cmd == "export-dot":
        _, graph = _graph(args, g)
        return to_dot(graph)
    else:  # pragma: no cover - argparse restricts the choices
        raise ValueError(f"unknown command {cmd}")
    return {"schema_version": SCHEMA_VERSION, "command": cmd, "group": str(g), "result": result}


def _text_summary(report: dict) -> str:
    res = report["result"]
    head = f"{report['command']} on {report['group']}"
    if "kind" in res and "refused" not in res:
        return f"{head}: {res['kind']}\n"
    if res.get("refused"):
        return f"{head}: refused ({res['kind']}): {res['reason']}\n"
    return f"{head}: {_verdict_text(res)}\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcdwalk", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--group", required=True, help='group literal such as "Z4xZ2xZ3"')
    parser.add_argument("--divisors", help="divisor set: JSON, @file.json or inline '1,1,1;1,2,1'")
    parser.add_argument("--pst-divisors", help="certify: the PST part of the divisor set")
    parser.add_argument("--extra-divisors", help="rule-out: the added divisor set D'")
    parser.add_argument("--time", help='time as a multiple of pi, e.g. "1/2"')
    parser.add_argument("--k", type=int, default=1, help="rule-out: PST of D is at pi/2^k")
    parser.add_argument("--format", choices=("json", "dot", "text"), default=None)
    parser.add_argument("--output", "-o", help="output path (default stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("dot" if args.command == "export-dot" else "json")
    try:
        if fmt == "dot" and args.command != "export-dot":
            raise ValueError("--format dot is only available for export-dot")
        if args.command == "export-dot" and fmt != "dot":
            raise ValueError("export-dot only writes DOT")
        out = run_command(args)
    except ResourceError as exc:
        print(f"gcdwalk: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"gcdwalk: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, str):
        text = out
    elif fmt == "text":
        text = _text_summary(out)
    else:
        text = json.dumps(out, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
