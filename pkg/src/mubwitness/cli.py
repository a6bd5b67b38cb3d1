"""Command-line entry point: build, bounds, scan, classify and reproduce.

Exit codes: 0 on success, 1 when a set fails verification or a reproduction
misses its tolerance, 2 on usage errors. Every command records a run manifest
(command line, configuration, seed, version, duration and a SHA-256 digest of
the output). It is written next to ``--out`` as ``<out>.manifest.json``, or to
``--manifest`` if given, and otherwise printed to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .classify import DEFAULT_CLUSTER_TOL, classify_subsets, render_report
from .mub import FAMILIES, MubSet, family_set, load_mub_set, mub_set_to_json, verify_mub_set
from .optimize import OptimizerConfig, available_threads, lower_bound
from .reproduce import TARGETS, parse_value, reproduce, resolve_set
from .sweep import rows_to_csv, scan_family
from .witness import upper_bound

log = logging.getLogger("mubwitness")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_TOL = 1e-10


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: list[str]
    config: dict
    seed: int
    version: str
    duration_seconds: float
    output_sha256: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)


# -- argument handling --------------------------------------------------------------


def _add_optimizer_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("optimizer")
    g.add_argument("--restarts", type=int, help="multi-start count (default 200 for d<=7, 1000 above)")
    g.add_argument("--seed", type=int, help="random seed (default 0)")
    g.add_argument("--threads", type=int, help="worker processes (default: available CPUs)")
    g.add_argument("--max-iterations", type=int, dest="max_iterations")
    g.add_argument("--gradient-tolerance", type=float, dest="gradient_tolerance")
    g.add_argument("--unitary-restarts", type=int, dest="unitary_restarts", help="restarts per local-unitary family")


def _add_set_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--set", help="MUB set JSON file, or a set spec such as hw, tao6, a7, d4:x,y,z, d4pair:x")
    p.add_argument("--d", type=int, help="dimension")
    p.add_argument("--m", type=int, help="use the first m bases")
    p.add_argument("--subset", help="comma-separated 1-based basis indices, e.g. 1,2,4")


def _add_io_flags(p: argparse.ArgumentParser, formats, default_format) -> None:
    p.add_argument("--out", help="write the result to this file instead of stdout")
    p.add_argument("--format", choices=formats, help=f"output format (default {default_format})")
    p.add_argument("--config", help="JSON file whose keys mirror the command-line flags")
    p.add_argument("--manifest", help="path of the run manifest (default <out>.manifest.json, else stderr)")
    p.set_defaults(default_format=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mubwitness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct and verify a MUB set")
    p.add_argument("--family", choices=FAMILIES, help="hw, fourier4, h4, tao6 or a7")
    p.add_argument("--d", type=int)
    p.add_argument("--x", help="F(x) angle; accepts forms like 0.5pi (default pi/2)")
    p.add_argument("--y", help="H(y,z) angle (default 0)")
    p.add_argument("--z", help="H(y,z) angle (default 0)")
    p.add_argument("--tol", type=float, help=f"verification tolerance (default {VERIFY_TOL:g})")
    _add_io_flags(p, ["json"], "json")

    p = sub.add_parser("bounds", help="optimized lower bound L and exact upper bound U")
    _add_set_flags(p)
    p.add_argument("--tol", type=float, help=f"verification tolerance (default {VERIFY_TOL:g})")
    _add_optimizer_flags(p)
    _add_io_flags(p, ["json", "table"], "json")

    p = sub.add_parser("scan", help="witness values along a state family")
    p.add_argument("--family", choices=["magic", "werner"], help="magic: rho(a,a); werner: (I - phi F)/(d^2 - phi d)")
    p.add_argument("--grid", help="lo:hi:n evenly spaced parameters (default 0:0.5:11)")
    p.add_argument("--params", help="explicit comma-separated parameter list")
    p.add_argument("--no-unitaries", action="store_true", dest="no_unitaries", help="skip the local-unitary search")
    _add_set_flags(p)
    p.add_argument("--tol", type=float, help=f"verification tolerance (default {VERIFY_TOL:g})")
    _add_optimizer_flags(p)
    _add_io_flags(p, ["csv", "json"], "csv")

    p = sub.add_parser("classify", help="group subsets of a set by their lower bound")
    _add_set_flags(p)
    p.add_argument("--tol", type=float, help=f"clustering tolerance (default {DEFAULT_CLUSTER_TOL:g})")
    _add_optimizer_flags(p)
    _add_io_flags(p, ["table", "json"], "table")

    p = sub.add_parser("reproduce", help="recompute a reference table and compare")
    p.add_argument("target", choices=TARGETS + ("all",))
    p.add_argument("--quick", action="store_true", help="reduced restarts with 5e-3 tolerance")
    p.add_argument("--full", action="store_true", help="d9: scan every subset instead of representatives")
    _add_optimizer_flags(p)
    _add_io_flags(p, ["table", "json", "csv"], "table")
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    """Fill flags left unset on the command line from ``--config``."""
    if not getattr(args, "config", None):
        return
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    for key, value in data.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise UsageError(f"config key {key!r} is not a flag of '{args.command}'")
        if getattr(args, key) in (None, False):
            setattr(args, key, value)


def _optimizer_config(args) -> OptimizerConfig:
    names = {f.name for f in fields(OptimizerConfig)}
    given = {k: getattr(args, k) for k in names if getattr(args, k, None) is not None}
    given.setdefault("threads", available_threads())
    try:
        return OptimizerConfig(**given)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _angle(text, default: float) -> float:
    if text is None:
        return default
    try:
        return parse_value(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad angle {text!r}") from exc


def _parse_subset(text) -> list[int]:
    if isinstance(text, list):
        return [int(i) for i in text]
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --subset {text!r}; expected comma-separated integers") from exc


def _load_set(args) -> MubSet:
    spec = args.set or "hw"
    if Path(spec).is_file():
        mubs = load_mub_set(spec)
        if args.d is not None and args.d != mubs.dim:
            raise UsageError(f"--d {args.d} does not match the set file (d={mubs.dim})")
    else:
        if spec == "hw" and args.d is None:
            raise UsageError("give --d or a --set file")
        try:
            mubs = resolve_set(spec, args.d)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if args.subset is not None and args.m is not None:
        raise UsageError("--subset and --m are mutually exclusive")
    if args.subset is not None:
        idx = _parse_subset(args.subset)
        if not idx or any(not 1 <= i <= len(mubs) for i in idx) or len(set(idx)) != len(idx):
            raise UsageError(f"--subset must list distinct indices in 1..{len(mubs)}")
        mubs = mubs.subset([i - 1 for i in idx])
    elif args.m is not None and getattr(args, "command", "") != "classify":
        if not 1 <= args.m <= len(mubs):
            raise UsageError(f"--m must lie in 1..{len(mubs)}")
        mubs = mubs.subset(range(args.m))
    return mubs


def _verified(mubs: MubSet, tol) -> bool:
    report = verify_mub_set(mubs, tol or VERIFY_TOL)
    if not report.ok:
        print(
            f"verification failed: max deviation {report.max_deviation:.3e} at bases {report.worst_pair}",
            file=sys.stderr,
        )
    return report.ok


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


# -- commands -----------------------------------------------------------------------


def cmd_build(args) -> tuple[int, str, dict]:
    if args.family is None:
        raise UsageError("--family is required")
    try:
        mubs = family_set(args.family, args.d, _angle(args.x, np.pi / 2), _angle(args.y, 0.0), _angle(args.z, 0.0))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = _verified(mubs, args.tol)
    return (EXIT_OK if ok else EXIT_FAIL), _dumps(mub_set_to_json(mubs)), {}


def cmd_bounds(args) -> tuple[int, str, dict]:
    mubs = _load_set(args)
    if not _verified(mubs, args.tol):
        return EXIT_FAIL, "", {}
    config = _optimizer_config(args)
    est = lower_bound(mubs, config)
    d, m = mubs.dim, len(mubs)
    U = upper_bound(d, m)
    result = {
        "d": d,
        "m": m,
        "provenance": mubs.provenance,
        "labels": list(mubs.labels),
        "L": est.value,
        "U": str(U),
        "U_float": float(U),
        "diagnostics": est.to_dict(),
    }
    if args.format == "table":
        text = f"d={d} m={m} {mubs.provenance}\nL = {est.value:.6f}\nU = {U}\n"
        text += f"restarts {est.restarts}, converged {est.converged_fraction:.2f}, hits {est.hits}\n"
    else:
        text = _dumps(result)
    return EXIT_OK, text, config.to_dict()


def _grid(args) -> list[float]:
    if args.params is not None:
        return [parse_value(p) for p in str(args.params).split(",")]
    lo, hi, n = (args.grid or "0:0.5:11").split(":")
    return list(np.linspace(parse_value(lo), parse_value(hi), int(n)))


def cmd_scan(args) -> tuple[int, str, dict]:
    if args.family is None:
        raise UsageError("--family is required (magic or werner)")
    mubs = _load_set(args)
    if not _verified(mubs, args.tol):
        return EXIT_FAIL, "", {}
    try:
        grid = _grid(args)
    except ValueError as exc:
        raise UsageError(f"bad parameter grid: {exc}") from exc
    config = _optimizer_config(args)
    rows = scan_family(args.family, grid, mubs, config, optimize_unitaries=not args.no_unitaries)
    if args.format == "json":
        text = _dumps([{**asdict(r), "detected": r.detected if r.status == "ok" else None} for r in rows])
    else:
        text = rows_to_csv(rows)
    return EXIT_OK, text, config.to_dict()


def cmd_classify(args) -> tuple[int, str, dict]:
    if args.m is None:
        raise UsageError("--m is required")
    subset_arg, args.subset = args.subset, None
    mubs = _load_set(args)
    if not _verified(mubs, VERIFY_TOL):
        return EXIT_FAIL, "", {}
    config = _optimizer_config(args)
    if not 2 <= args.m <= len(mubs):
        raise UsageError(f"--m must lie in 2..{len(mubs)}")
    subsets = None
    if subset_arg is not None:
        subsets = [tuple(i - 1 for i in _parse_subset(s)) for s in str(subset_arg).split(";")]
    report = classify_subsets(mubs, args.m, config, args.tol or DEFAULT_CLUSTER_TOL, subsets=subsets)
    if args.format == "json":
        text = _dumps(report.to_dict())
    else:
        text = render_report(report) + "\n"
    return EXIT_OK, text, config.to_dict()


def cmd_reproduce(args) -> tuple[int, str, dict]:
    config = _optimizer_config(args)
    targets = TARGETS if args.target == "all" else (args.target,)
    results = [reproduce(t, config, quick=args.quick, full=args.full) for t in targets]
    if args.format == "json":
        text = _dumps([r.to_dict() for r in results])
    elif args.format == "csv":
        csvs = [r.csv for r in results if r.csv is not None]
        if not csvs:
            raise UsageError("csv output is only produced by the fig1 target")
        text = "".join(csvs)
        for r in results:
            if not r.passed:
                print(r.render(), file=sys.stderr)
    else:
        text = "\n\n".join(r.render() for r in results) + "\n"
    ok = all(r.passed for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), text, config.to_dict()


COMMANDS = {
    "build": cmd_build,
    "bounds": cmd_bounds,
    "scan": cmd_scan,
    "classify": cmd_classify,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        _apply_config_file(args)
        args.format = args.format or args.default_format
        code, text, config = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    manifest = RunManifest(
        command=["mubwitness", *argv],
        config=config,
        seed=config.get("seed", 0),
        version=__version__,
        duration_seconds=round(time.perf_counter() - start, 3),
        output_sha256=hashlib.sha256(text.encode()).hexdigest(),
    )
    target = args.manifest or (f"{args.out}.manifest.json" if args.out else None)
    if target:
        Path(target).write_text(manifest.to_json() + "\n")
    else:
        print(manifest.to_json(), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
