"""Group subsets of a MUB set by their optimized lower bound.

Subsets whose bounds differ are inequivalent. Subsets sharing a bound are
only indistinguishable by this criterion, not proven equivalent.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from .mub import MubSet
from .optimize import BoundEstimate, OptimizerConfig, default_restarts, lower_bound
from .witness import upper_bound

__all__ = [
    "SubsetFingerprint",
    "BoundClass",
    "ClassificationReport",
    "enumerate_subsets",
    "scan_restarts",
    "fingerprint_subsets",
    "cluster_fingerprints",
    "classify_subsets",
    "render_report",
    "DEFAULT_CLUSTER_TOL",
]

DEFAULT_CLUSTER_TOL = 5e-3
# Scans larger than this get a proportionally smaller per-subset budget.
FULL_BUDGET_SUBSETS = 64
MIN_SCAN_RESTARTS = 100


@dataclass(frozen=True)
class SubsetFingerprint:
    subset: tuple[int, ...]
    L: float
    estimate: BoundEstimate = field(repr=False)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.subset, self.subset[1:])):
            raise ValueError(f"subset indices must be strictly increasing: {self.subset}")

    def label(self, labels=None) -> str:
        if labels is None:
            return "".join(f"B{i + 1}" for i in self.subset)
        return "".join(labels[i] for i in self.subset)


@dataclass(frozen=True)
class BoundClass:
    L: float
    members: tuple[tuple[int, ...], ...]
    spread: float

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ClassificationReport:
    d: int
    m: int
    classes: tuple[BoundClass, ...]
    cluster_tol: float
    restarts: int
    scanned: int
    fingerprints: tuple[SubsetFingerprint, ...] = field(repr=False, default=())
    provenance: str = ""

    @property
    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.classes]

    @property
    def values(self) -> list[float]:
        return [c.L for c in self.classes]

    @property
    def upper(self) -> Fraction:
        return upper_bound(self.d, self.m)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "U": str(self.upper),
            "cluster_tol": self.cluster_tol,
            "restarts_per_subset": self.restarts,
            "subsets_scanned": self.scanned,
            "provenance": self.provenance,
            "classes": [
                {
                    "L": c.L,
                    "multiplicity": c.multiplicity,
                    "spread": c.spread,
                    "members": [list(s) for s in c.members],
                }
                for c in self.classes
            ],
            "fingerprints": [
                {
                    "subset": list(fp.subset),
                    "L": fp.L,
                    "converged_fraction": fp.estimate.converged_fraction,
                    "hits": fp.estimate.hits,
                    "best_restart_index": fp.estimate.best_restart_index,
                }
                for fp in self.fingerprints
            ],
        }


def enumerate_subsets(mubs: MubSet | int, m: int) -> list[tuple[int, ...]]:
    """All size-``m`` index subsets in lexicographic order."""
    n = mubs if isinstance(mubs, int) else len(mubs)
    if not 2 <= m <= n:
        raise ValueError(f"m must lie in [2, {n}], got {m}")
    return list(combinations(range(n), m))


def scan_restarts(d: int, n_subsets: int) -> int:
    """Per-subset restart budget for a scan of ``n_subsets`` subsets."""
    base = default_restarts(d)
    if n_subsets <= FULL_BUDGET_SUBSETS:
        return base
    return max(MIN_SCAN_RESTARTS, math.ceil(base * FULL_BUDGET_SUBSETS / n_subsets))


def _fingerprint(mubs: MubSet, subset: tuple[int, ...], config: OptimizerConfig) -> SubsetFingerprint:
    est = lower_bound(mubs.subset(subset), config)
    return SubsetFingerprint(subset, est.value, est)


def fingerprint_subsets(mubs: MubSet, subsets, config: OptimizerConfig) -> list[SubsetFingerprint]:
    """Lower bound for every subset, in the order given. Runs in parallel when threads > 1."""
    subsets = [tuple(s) for s in subsets]
    workers = max(1, min(config.threads, len(subsets)))
    # Parallelism goes to the subsets; each bound itself runs single-threaded.
    inner = replace(config, threads=1)
    if workers == 1:
        return [_fingerprint(mubs, s, inner) for s in subsets]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_fingerprint, mubs, s, inner) for s in subsets]
        return [f.result() for f in futures]


def cluster_fingerprints(fingerprints, cluster_tol: float) -> list[BoundClass]:
    """Single-linkage grouping of sorted bound values with gap threshold ``cluster_tol``."""
    ordered = sorted(fingerprints, key=lambda fp: (fp.L, fp.subset))
    groups: list[list[SubsetFingerprint]] = []
    for fp in ordered:
        if groups and fp.L - groups[-1][-1].L < cluster_tol:
            groups[-1].append(fp)
        else:
            groups.append([fp])
    classes = []
    for g in groups:
        values = [fp.L for fp in g]
        members = tuple(sorted(fp.subset for fp in g))
        classes.append(BoundClass(min(values), members, max(values) - min(values)))
    return classes


def classify_subsets(
    mubs: MubSet,
    m: int,
    config: OptimizerConfig | None = None,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    subsets=None,
) -> ClassificationReport:
    """Fingerprint subsets of size ``m`` by their lower bound and group equal bounds.

    By default every subset is scanned. When ``config.restarts`` is unset the
    per-subset budget follows :func:`scan_restarts`.
    """
    config = config or OptimizerConfig()
    subsets = enumerate_subsets(mubs, m) if subsets is None else [tuple(sorted(s)) for s in subsets]
    if any(len(s) != m for s in subsets):
        raise ValueError(f"all subsets must have size {m}")
    if config.restarts is None:
        config = replace(config, restarts=scan_restarts(mubs.dim, len(subsets)))
    fps = fingerprint_subsets(mubs, subsets, config)
    classes = cluster_fingerprints(fps, cluster_tol)
    return ClassificationReport(
        d=mubs.dim,
        m=m,
        classes=tuple(classes),
        cluster_tol=cluster_tol,
        restarts=config.restarts,
        scanned=len(subsets),
        fingerprints=tuple(fps),
        provenance=mubs.provenance,
    )


def render_report(report: ClassificationReport, labels=None) -> str:
    """Text table in the layout m | subset | L | U, one line per class."""
    rows = [("m", "subset", "L", "U")]
    for c in report.classes:
        rep = SubsetFingerprint(c.members[0], c.L, None).label(labels)
        if c.multiplicity > 1:
            rep += f" [{c.multiplicity} times]"
        rows.append((str(report.m), rep, f"{c.L:.4f}", str(report.upper)))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [" | ".join(cell.ljust(w) for cell, w in zip(r, widths)) for r in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)
