"""Command-line interface.

Every command prints one JSON report per line on stdout and a short summary
on stderr.  Exit codes: 0 success, 1 no solution / false decision / failed
isolation attempt, 2 input error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from typing import Any, Callable, Sequence

from . import __version__
from .edpp import solve_edpp, validate_edge_solution
from .errors import InputError, InternalInconsistency, NoSolution, PlanarDPPError
from .graph import EDGE_DISJOINT, ONE_FACE, Instance, PlanarGraph, validate_instance
from .oneface import count_one_face
from .oracle import FAMILIES, enum_disjoint_paths, gen_instance, outer_dart
from .pairings import Pairing, telescope
from .search import GREEDY, ISOLATION, DetectedFailure, search, validate_solution
from .twoface import count_two_face

log = logging.getLogger("planardpp")

JOBS_ENV = "PLANARDPP_JOBS"

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Negative(Exception):
    """Carries a finished report whose outcome maps to exit code 1."""

    def __init__(self, result: dict[str, Any]) -> None:
        super().__init__("negative outcome")
        self.result = result


def load_instance(path: str) -> Instance:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read instance file {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"instance file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("instance file must hold a JSON object")
    return validate_instance(Instance.from_json(data))


def to_dot(instance: Instance) -> str:
    """Undirected DOT rendering with terminals highlighted."""
    g = instance.graph
    role = {}
    for i, (s, t) in enumerate(instance.terminals):
        role[s] = f"s{i + 1}"
        role[t] = f"t{i + 1}"
    lines = ["graph instance {", "  node [shape=circle];"]
    for v in range(g.n):
        if v in role:
            lines.append(f'  {v} [label="{v}\\n{role[v]}", style=filled, fillcolor=lightblue];')
        else:
            lines.append(f"  {v};")
    for e, ((u, v), w) in enumerate(zip(g.edges, g.weights)):
        lines.append(f'  {u} -- {v} [label="e{e}:{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _require_vertex_mode(instance: Instance, command: str) -> None:
    if instance.mode == EDGE_DISJOINT:
        if command == "count":
            raise InputError("counting is not available for edge-disjoint instances; use 'edpp' to solve")
        raise InputError(f"'{command}' needs a vertex-disjoint instance; use 'edpp' for edge-disjoint ones")


def _count(instance: Instance, jobs: int) -> Any:
    if instance.case == ONE_FACE:
        return count_one_face(instance, jobs=jobs, validate=False)
    return count_two_face(instance, validate=False)


def cmd_count(args: argparse.Namespace, instance: Instance) -> dict[str, Any]:
    _require_vertex_mode(instance, "count")
    res = _count(instance, args.jobs)
    out = res.to_json()
    if args.polynomial:
        out["polynomial"] = {str(e): c for e, c in sorted(res.polynomial.terms().items())}
    return out


def cmd_decide(args: argparse.Namespace, instance: Instance) -> dict[str, Any]:
    _require_vertex_mode(instance, "decide")
    res = _count(instance, args.jobs)
    decision = res.count > 0 and res.length is not None and res.length <= args.budget
    out = {"decision": decision, "budget": args.budget, "length": res.length}
    if not decision:
        raise _Negative(out)
    return out


def cmd_search(args: argparse.Namespace, instance: Instance) -> dict[str, Any]:
    _require_vertex_mode(instance, "search")
    sol = search(instance, args.method, seed=args.seed, jobs=args.jobs, batch=args.batch)
    if isinstance(sol, DetectedFailure):
        raise _Negative(sol.to_json())
    if not validate_solution(instance, sol):
        raise InternalInconsistency("search returned a system that fails validation")
    return sol.to_json()


def cmd_edpp(args: argparse.Namespace, instance: Instance) -> dict[str, Any]:
    if instance.mode != EDGE_DISJOINT:
        raise InputError('edpp needs an instance with "mode": "edge-disjoint"')
    gm, sol = solve_edpp(instance, args.method, seed=args.seed, jobs=args.jobs)
    if isinstance(sol, DetectedFailure):
        raise _Negative({**sol.to_json(), "reduction": gm.to_json()})
    if not validate_edge_solution(instance, sol):
        raise InternalInconsistency("lifted system fails edge-disjoint validation")
    return {**sol.to_json(), "reduction": gm.to_json()}


def cmd_oracle(args: argparse.Namespace, instance: Instance) -> dict[str, Any]:
    return enum_disjoint_paths(instance, bound=args.bound).to_json()


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def cmd_gen(args: argparse.Namespace) -> tuple[dict[str, Any], Instance]:
    params: dict[str, Any] = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--param expects key=value, got {item!r}")
        params[key] = _parse_value(value)
    instance = gen_instance(args.seed, args.family, params)
    validate_instance(instance)
    return {"family": args.family, "params": params, "instance": instance.to_json()}, instance


def _parse_pairing(text: str) -> Pairing:
    try:
        pairs = [tuple(int(x) for x in chunk.split("-")) for chunk in text.split(",") if chunk]
        if any(len(p) != 2 for p in pairs):
            raise ValueError(text)
    except ValueError as exc:
        raise InputError(f"pairing must look like 1-8,2-5,3-4,6-7; got {text!r}") from exc
    return Pairing.of(pairs)


def cmd_telescope(args: argparse.Namespace) -> dict[str, Any]:
    try:
        return telescope(_parse_pairing(args.pairing)).to_json()
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def square_instance(pairs: Sequence[tuple[int, int]]) -> Instance:
    """4-cycle 0-1-2-3 with the given demands on its outer face."""
    coords = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    g = PlanarGraph.from_coordinates(coords, [(0, 1), (1, 2), (2, 3), (3, 0)])
    return Instance(g, tuple(pairs), ONE_FACE, (outer_dart(coords, g),))


def selftest_checks() -> list[tuple[str, bool, str]]:
    """Golden telescoping plus small solver-versus-oracle cross-checks."""
    checks: list[tuple[str, bool, str]] = []
    m1 = Pairing.of([(1, 8), (2, 5), (3, 4), (6, 7)])
    m2 = Pairing.of([(1, 8), (2, 7), (3, 4), (5, 6)])
    m3 = Pairing.of([(1, 8), (2, 7), (3, 6), (4, 5)])
    got = telescope(m1).as_dict()
    checks.append(("telescope", got == {m1: 1, m2: 1, m3: 1}, str({str(p): c for p, c in got.items()})))
    res = count_one_face(square_instance([(0, 1), (2, 3)]))
    checks.append(("square-serial", (res.length, res.count) == (2, 1), f"length={res.length} count={res.count}"))
    res = count_one_face(square_instance([(0, 2), (1, 3)]))
    checks.append(("square-crossing", res.count == 0, f"count={res.count}"))
    for seed in range(6):
        inst = gen_instance(seed, "grid", {"rows": 3, "cols": 3, "k": 2, "order": "any"})
        res, ora = count_one_face(inst), enum_disjoint_paths(inst)
        ok = (res.length, res.count) == (ora.minimum, ora.count)
        checks.append((f"grid-{seed}", ok, f"solver=({res.length},{res.count}) oracle=({ora.minimum},{ora.count})"))
    for seed in range(4):
        inst = gen_instance(seed, "annulus", {"rings": 2, "spokes": 4, "k": 2, "shift": "random"})
        res, ora = count_two_face(inst), enum_disjoint_paths(inst)
        ok = (res.length, res.count) == (ora.minimum, ora.count)
        checks.append((f"annulus-{seed}", ok, f"solver=({res.length},{res.count}) oracle=({ora.minimum},{ora.count})"))
    return checks


def cmd_selftest(args: argparse.Namespace) -> dict[str, Any]:
    checks = selftest_checks()
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=sys.stderr)
    out = {"checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in checks]}
    if not all(ok for _, ok, _ in checks):
        raise InternalInconsistency("selftest failed: " + ", ".join(n for n, ok, _ in checks if not ok))
    return out


def _summary(command: str, result: dict[str, Any]) -> str:
    if command in ("count", "oracle"):
        n = result.get("count")
        return f"{command}: length={result.get('length', result.get('minimum'))} count={n}"
    if command == "decide":
        return f"decide: {result['decision']} (length {result['length']}, budget {result['budget']})"
    if command in ("search", "edpp"):
        if "failure" in result:
            return f"{command}: failed ({result['failure']})"
        return f"{command}: length={result['length']} paths={result['paths']}"
    if command == "gen":
        inst = result["instance"]
        return f"gen: {result['family']} n={inst['n']} m={len(inst['edges'])} k={len(inst['terminals'])}"
    if command == "telescope":
        return "telescope: " + ", ".join(f"{e['coefficient']:+d} {e['pairing']}" for e in result["entries"])
    return f"{command}: ok"


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planardpp", description="Shortest disjoint paths in planar graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--jobs", type=int, default=_default_jobs(), help=f"worker threads (default ${JOBS_ENV} or 1)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_instance(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("instance", help="instance JSON file, or - for stdin")
        p.add_argument("--dump-graph", metavar="DOT", help="also write the instance as a DOT file")
        return p

    p = with_instance("count", "length and number of shortest systems")
    p.add_argument("--polynomial", action="store_true", help="include the good-cover polynomial")
    p = with_instance("decide", "is there a system of length <= budget")
    p.add_argument("--budget", type=int, required=True)
    p = with_instance("search", "construct one shortest system")
    p.add_argument("--method", choices=(GREEDY, ISOLATION), default=GREEDY)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--batch", action="store_true", help="greedy: delete edges in halving blocks")
    p = with_instance("edpp", "shortest edge-disjoint system (one face)")
    p.add_argument("--method", choices=(GREEDY, ISOLATION), default=GREEDY)
    p.add_argument("--seed", type=int, default=None)
    p = with_instance("oracle", "brute-force enumeration")
    p.add_argument("--bound", type=int, default=16, help="largest n accepted")
    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("-o", "--output", help="write the instance JSON here")
    p.add_argument("--dump-graph", metavar="DOT")
    p = sub.add_parser("telescope", help="expansion of a pairing into determinants")
    p.add_argument("pairing", help="e.g. 1-8,2-5,3-4,6-7")
    sub.add_parser("selftest", help="golden example and small oracle cross-checks")
    return parser


INSTANCE_COMMANDS: dict[str, Callable[[argparse.Namespace, Instance], dict[str, Any]]] = {
    "count": cmd_count,
    "decide": cmd_decide,
    "search": cmd_search,
    "edpp": cmd_edpp,
    "oracle": cmd_oracle,
}


def _args_echo(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "verbose", "dump_graph")}


def run(argv: Sequence[str] | None = None) -> tuple[int, dict[str, Any]]:
    """Parse, execute, and return ``(exit code, report)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    report: dict[str, Any] = {"command": args.command, "args": _args_echo(args), "version": __version__}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        if args.command in INSTANCE_COMMANDS:
            instance = load_instance(args.instance)
            report["instance"] = instance.digest()
            if args.dump_graph:
                with open(args.dump_graph, "w", encoding="utf-8") as fh:
                    fh.write(to_dot(instance))
            report["result"] = INSTANCE_COMMANDS[args.command](args, instance)
        elif args.command == "gen":
            result, instance = cmd_gen(args)
            report["instance"] = instance.digest()
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    json.dump(instance.to_json(), fh, sort_keys=True)
                    fh.write("\n")
            if args.dump_graph:
                with open(args.dump_graph, "w", encoding="utf-8") as fh:
                    fh.write(to_dot(instance))
            report["result"] = result
        elif args.command == "telescope":
            report["result"] = cmd_telescope(args)
        else:
            report["result"] = cmd_selftest(args)
        if "seed" in vars(args) and args.seed is not None:
            report["seed"] = args.seed
    except _Negative as neg:
        report["result"] = neg.result
        code = EXIT_NEGATIVE
    except NoSolution as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_NEGATIVE
    except InputError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    except (InternalInconsistency, PlanarDPPError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INTERNAL
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def main(argv: Sequence[str] | None = None) -> int:
    code, report = run(argv)
    print(json.dumps(report, sort_keys=True, separators=(",", ":")))
    if "error" in report:
        print(f"error ({report['error']['type']}): {report['error']['message']}", file=sys.stderr)
    else:
        print(_summary(report["command"], report["result"]), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
