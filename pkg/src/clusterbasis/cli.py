"""Command-line entry point.

Exit codes: 0 when everything passes, 1 when a verification fails, 2 for
usage or validation errors (with a JSON error object on stderr).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Sequence

from . import __version__
from .bases import (
    CheckResult,
    enumerate_basis_elements,
    verify_bracelet_chebyshev,
    verify_g_injectivity,
    verify_good_count_inequality,
    verify_ptolemy,
)
from .cluster import principal_seed, random_paths, mutate_path
from .expansion import expand_arc, expand_loop
from .families import Annulus, FamilyError, parse_family
from .snakegraph import (
    all_shapes,
    band_lattice,
    build_band_graph,
    build_band_poset,
    build_poset,
    build_snake_graph,
    lattice_to_dot,
    matching_lattice,
    snake_from_shape,
    snake_to_dot,
    verify_twist_parity,
)
from .surface import (
    CurveWord,
    SurfaceError,
    Triangulation,
    extend_principal,
    fixture_path,
    load_triangulation,
    signed_adjacency,
)

SUITES = ("ptolemy", "chebyshev", "counts", "g-injectivity", "lattice-parity")


class UsageError(Exception):
    """Bad arguments or inputs; reported with exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunManifest:
    command: List[str]
    inputs: dict
    version: str
    seed: int
    summary: dict
    elapsed_seconds: float = 0.0
    digest: str = field(default="")

    def seal(self) -> "RunManifest":
        body = {k: v for k, v in asdict(self).items() if k not in ("elapsed_seconds", "digest")}
        self.digest = hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()
        return self


# ---------------------------------------------------------------------------
# input helpers


def _resolve_input(path: str) -> str:
    if os.path.isfile(path):
        return path
    try:
        return str(fixture_path(os.path.basename(path)))
    except SurfaceError:
        raise UsageError(f"no such file: {path}") from None


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_surface(args, inputs: dict) -> Triangulation:
    if not args.surface:
        raise UsageError("--surface is required")
    path = _resolve_input(args.surface)
    inputs[os.path.basename(path)] = _file_digest(path)
    try:
        return load_triangulation(path)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _load_curve(args, inputs: dict, attr: str = "curve") -> CurveWord:
    raw = getattr(args, attr)
    if not raw:
        raise UsageError(f"--{attr.replace('_', '-')} is required")
    path = _resolve_input(raw)
    inputs[os.path.basename(path)] = _file_digest(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON ({exc})") from None
    if "curve" in data:
        data = data["curve"]
    return CurveWord.from_json(data)


def _family(T: Triangulation):
    try:
        return parse_family(T.name)
    except FamilyError:
        raise UsageError("this command needs a polygon or annulus fixture (a 'name' such as 'annulus(1,1)')") from None


def _run_pool(jobs: int, tasks: Sequence[Callable[[], CheckResult]]) -> List[CheckResult]:
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda f: f(), tasks))
    return sorted(results, key=lambda r: (r.check, r.instance))


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args, inputs):
    T = _load_surface(args, inputs)
    w = _load_curve(args, inputs)
    if args.format == "dot":
        graph = build_snake_graph(T, w) if w.kind == "open" else build_band_graph(T, w)
        return 0, snake_to_dot(graph)
    r = expand_arc(T, w, kinks=args.kinks) if w.kind == "open" else expand_loop(T, w, kinks=args.kinks)
    if args.format == "text":
        return 0, r.laurent.to_text()
    return 0, r.to_json()


def _parse_path(text: Optional[str], n: int) -> List[int]:
    if not text:
        return []
    try:
        path = [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad mutation path {text!r}") from None
    bad = [k for k in path if not 1 <= k <= n]
    if bad:
        raise UsageError(f"directions must lie in 1..{n}, got {bad}")
    return path


def cmd_mutate(args, inputs):
    T = _load_surface(args, inputs)
    seed0 = principal_seed(T)
    if args.random:
        paths = random_paths(T.n, args.random, args.max_length, seed=args.seed)
        checked = 0
        for p in paths:
            for s in mutate_path(seed0, p):
                for x in s.cluster:
                    checked += 1
                    if any(c <= 0 for c in x.coefficients()):
                        return 1, {"status": "fail", "path": p, "variable": x.to_text()}
        return 0, {"status": "pass", "paths": len(paths), "variables_checked": checked, "seed": args.seed}
    path = _parse_path(args.path, T.n)
    trace = mutate_path(seed0, path)
    out = {"path": path, "trace": [s.to_json() for s in trace]}
    if args.check_against_curve:
        w = _load_curve(args, inputs, "check_against_curve")
        expected = expand_arc(T, w).laurent
        if args.slot is not None:
            slots = [args.slot]
        elif path:
            slots = [path[-1]]
        else:
            slots = list(range(1, T.n + 1))
        got = [trace[-1].cluster[s - 1] for s in slots]
        match = any(g == expected for g in got)
        out["check"] = {
            "curve": w.to_json(),
            "status": "pass" if match else "fail",
            "expected": expected.to_text(),
            "got": [g.to_text() for g in got],
        }
        if not match:
            out["check"]["difference"] = (got[0] - expected).to_text(factor=False)
            return 1, out
    if args.format == "text":
        return 0, "\n".join(" | ".join(s["cluster"]) for s in out["trace"])
    return 0, out


def cmd_lattice(args, inputs):
    T = _load_surface(args, inputs)
    w = _load_curve(args, inputs)
    if w.kind == "open":
        G = build_snake_graph(T, w)
        lat, poset = matching_lattice(G), build_poset(G)
        parity = verify_twist_parity(G)
    else:
        B = build_band_graph(T, w)
        lat, poset = band_lattice(B), build_band_poset(B)
        parity = verify_twist_parity(B)
    if args.format == "dot" or args.dot:
        return 0, lattice_to_dot(lat)
    ideals = len(poset.order_ideals())
    ok = ideals == len(lat) and parity.ok
    out = {
        "status": "pass" if ok else "fail",
        "tiles": lat.graph.d,
        "matchings": len(lat),
        "order_ideals": ideals,
        "covers": [list(c) for c in lat.covers],
        "heights": [list(m.height) for m in lat.matchings],
        "parity": parity.to_json(),
    }
    return (0 if ok else 1), out


def _lattice_check(name: str, graph) -> CheckResult:
    if hasattr(graph, "cut_label"):
        lat, poset = band_lattice(graph), build_band_poset(graph)
    else:
        lat, poset = matching_lattice(graph), build_poset(graph)
    parity = verify_twist_parity(graph)
    ideals = len(poset.order_ideals())
    return CheckResult(
        "lattice-parity",
        name,
        ideals == len(lat) and parity.ok,
        {"matchings": len(lat), "order_ideals": ideals, "covers": parity.checked, "parity_failures": list(parity.failures)},
    )


def _suite_tasks(args, T: Optional[Triangulation]) -> List[Callable[[], CheckResult]]:
    suite = args.suite
    if suite == "lattice-parity":
        tasks = []
        for d in range(1, args.max_tiles + 1):
            for dirs in all_shapes(d):
                tag = "".join("r" if x == "right" else "a" for x in dirs) or "-"
                tasks.append(lambda d=d, dirs=dirs, tag=tag: _lattice_check(f"shape {d}:{tag}", snake_from_shape(dirs)))
        if T is not None:
            fam = _family(T)
            bound = args.bound if args.bound is not None else args.max_tiles
            for c in fam.catalog(bound):
                if not 0 < c.length <= args.max_tiles:
                    continue
                label = f"{T.name} {' '.join(c.word.crossings)}"
                if c.kind == "arc":
                    tasks.append(lambda c=c, label=label: _lattice_check(label, build_snake_graph(T, c.word)))
                else:
                    tasks.append(lambda c=c, label=label: _lattice_check(label, build_band_graph(T, c.word)))
        return tasks
    if T is None:
        raise UsageError(f"suite {suite!r} needs --surface")
    if suite == "ptolemy":
        return [lambda a=a: verify_ptolemy(T, a) for a in T.arcs]
    if suite in ("chebyshev", "counts"):
        fam = _family(T)
        if not isinstance(fam, Annulus):
            raise UsageError(f"suite {suite!r} needs an annulus surface")
        loop = fam.loop_word(1)
        ks = [args.k] if args.k is not None else [1, 2, 3]
        fn = verify_bracelet_chebyshev if suite == "chebyshev" else verify_good_count_inequality
        return [lambda k=k: fn(T, loop, k) for k in ks]
    if suite == "g-injectivity":
        fam = _family(T)
        bound = args.bound if args.bound is not None else 2
        Bt = extend_principal(signed_adjacency(T))
        return [
            lambda v=v: _named(verify_g_injectivity(enumerate_basis_elements(fam, bound, v), Bt), f"{T.name} {v} bound {bound}")
            for v in ("B0", "B")
        ]
    raise UsageError(f"unknown suite {suite!r}")  # pragma: no cover - argparse restricts choices


def _named(r: CheckResult, instance: str) -> CheckResult:
    return CheckResult(r.check, instance, r.ok, r.witness)


def cmd_verify(args, inputs):
    T = _load_surface(args, inputs) if args.surface else None
    results = _run_pool(args.jobs, _suite_tasks(args, T))
    ok = all(r.ok for r in results)
    if args.format == "text":
        lines = [f"{'PASS' if r.ok else 'FAIL'} {r.check} {r.instance}" for r in results]
        return (0 if ok else 1), "\n".join(lines)
    report = {
        "suite": args.suite,
        "status": "pass" if ok else "fail",
        "passed": sum(r.ok for r in results),
        "total": len(results),
        "results": [r.to_json() for r in results],
    }
    return (0 if ok else 1), report


def cmd_catalog(args, inputs):
    T = _load_surface(args, inputs)
    fam = _family(T)
    bound = args.bound if args.bound is not None else 3
    curves = fam.catalog(bound)
    if args.format == "text":
        return 0, "\n".join(
            f"{c.kind} crosses={' '.join(c.word.crossings)}" if c.word.crossings else f"{c.kind} edge={c.word.edge}"
            for c in curves
        )
    return 0, {"family": fam.name, "bound": bound, "curves": [dict(c.word.to_json(), type=c.kind) for c in curves]}


def cmd_bases(args, inputs):
    T = _load_surface(args, inputs)
    fam = _family(T)
    bound = args.bound if args.bound is not None else 1
    elements = enumerate_basis_elements(fam, bound, args.variant)
    if args.format == "text":
        return 0, "\n".join(f"{list(e.g)} {e.laurent.to_text()}" for e in elements)
    return 0, {
        "family": fam.name,
        "variant": args.variant,
        "bound": bound,
        "elements": [
            {"collection": e.describe(), "g_vector": list(e.g), "laurent": e.laurent.to_text()} for e in elements
        ],
    }


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--surface", help="triangulation JSON (path or bundled fixture name)")
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for verification suites")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    common.add_argument("--manifest", help="write a run manifest to this path")

    parser = _Parser(prog="clusterbasis", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("expand", parents=[common], help="Laurent expansion of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--kinks", type=int, default=0)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("mutate", parents=[common], help="mutate the initial seed")
    p.add_argument("--path", default="", help="1-based directions, e.g. '1,2,1'")
    p.add_argument("--slot", type=int)
    p.add_argument("--check-against-curve", dest="check_against_curve")
    p.add_argument("--random", type=int, default=0, help="check this many random paths instead")
    p.add_argument("--max-length", type=int, default=8)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("lattice", parents=[common], help="matching lattice of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--bound", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--max-tiles", type=int, default=6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list curves up to a bound")
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("bases", parents=[common], help="enumerate basis elements")
    p.add_argument("--bound", type=int)
    p.add_argument("--variant", choices=("B0", "B"), default="B0")
    p.set_defaults(func=cmd_bases)
    return parser


def _emit_error(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        inputs: dict = {}
        code, payload = args.func(args, inputs)
    except UsageError as exc:
        return _emit_error("usage", str(exc))
    except (ValueError, KeyError, ArithmeticError) as exc:
        return _emit_error(type(exc).__name__, str(exc))
    except OSError as exc:
        return _emit_error("io", str(exc))

    if isinstance(payload, str):
        sys.stdout.write(payload + "\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")

    if args.manifest:
        summary = {"exit_code": code}
        if isinstance(payload, dict) and "status" in payload:
            summary["status"] = payload["status"]
        if isinstance(payload, dict) and "total" in payload:
            summary.update(passed=payload["passed"], total=payload["total"])
        manifest = RunManifest(argv, dict(sorted(inputs.items())), __version__, args.seed, summary)
        manifest.elapsed_seconds = round(time.perf_counter() - started, 6)
        with open(args.manifest, "w") as fh:
            json.dump(asdict(manifest.seal()), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
