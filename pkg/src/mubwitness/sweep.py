"""Parameter sweeps over state families with witness detection flags."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import astuple, dataclass, fields

from scipy.optimize import brentq

from .linalg import hermitian_eigenvalues, partial_transpose
from .mub import MubSet
from .optimize import OptimizerConfig, lower_bound, optimize_over_local_unitaries
from .states import NonPhysicalStateError, is_ppt, magic_simplex_state, werner_state
from .witness import upper_bound, witness_value

__all__ = [
    "ScanRow",
    "CSV_HEADER",
    "DETECTION_TOL",
    "scan_family",
    "rows_to_csv",
    "magic_ppt_boundary",
    "werner_ppt_boundary",
]

log = logging.getLogger(__name__)

DETECTION_TOL = 1e-6


@dataclass(frozen=True)
class ScanRow:
    family: str
    param: float
    d: int
    m: int
    status: str
    ppt: bool | None = None
    min_pt_eigenvalue: float | None = None
    M_raw: float | None = None
    M_max: float | None = None
    M_min: float | None = None
    L: float | None = None
    U: float | None = None
    violates_upper: bool | None = None
    violates_lower: bool | None = None

    @property
    def detected(self) -> bool:
        return bool(self.violates_upper or self.violates_lower)


CSV_HEADER = [f.name for f in fields(ScanRow)] + ["detected"]


def _state(family: str, d: int, param: float):
    if family == "magic":
        return magic_simplex_state(d, param, param)
    if family == "werner":
        return werner_state(d, param)
    raise ValueError(f"unknown state family {family!r}; expected 'magic' or 'werner'")


def scan_family(
    family: str,
    params,
    mubs: MubSet,
    config: OptimizerConfig | None = None,
    L: float | None = None,
    optimize_unitaries: bool = True,
) -> list[ScanRow]:
    """Evaluate the witness over a family of states.

    ``magic`` uses rho(alpha, alpha); ``werner`` uses the swap-parameterized
    Werner family. Detection compares the local-unitary optimized values with
    U_m and the lower bound L_m (computed here unless passed in) at
    :data:`DETECTION_TOL`. Non-physical parameters produce a row with status
    ``nonphysical`` and no values.
    """
    config = config or OptimizerConfig()
    d, m = mubs.dim, len(mubs)
    if family not in ("magic", "werner"):
        raise ValueError(f"unknown state family {family!r}; expected 'magic' or 'werner'")
    if L is None:
        L = lower_bound(mubs, config).value
    U = float(upper_bound(d, m))
    rows = []
    for p in params:
        p = float(p)
        try:
            rho = _state(family, d, p)
        except (NonPhysicalStateError, ValueError) as exc:
            log.warning("skipping %s parameter %g: %s", family, p, exc)
            rows.append(ScanRow(family, p, d, m, "nonphysical"))
            continue
        ppt = is_ppt(rho)
        if optimize_unitaries:
            hi = optimize_over_local_unitaries(rho, mubs, config, "max")
            lo = optimize_over_local_unitaries(rho, mubs, config, "min")
            raw, mmax, mmin = hi.raw, hi.value, lo.value
        else:
            raw = witness_value(rho, mubs).value
            mmax = mmin = raw
        rows.append(
            ScanRow(
                family,
                p,
                d,
                m,
                "ok",
                ppt.ppt,
                ppt.min_eigenvalue,
                raw,
                mmax,
                mmin,
                L,
                U,
                mmax > U + DETECTION_TOL,
                mmin < L - DETECTION_TOL,
            )
        )
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(round(v, 12))
    return str(v)


def rows_to_csv(rows) -> str:
    """CSV text with the fixed header :data:`CSV_HEADER`; '.' decimals, '\\n' line ends."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        cells = list(astuple(row)) + [row.detected if row.status == "ok" else None]
        writer.writerow([_fmt(c) for c in cells])
    return buf.getvalue()


def _min_pt_eig(family: str, d: int, p: float) -> float:
    rho = _state(family, d, p)
    return float(hermitian_eigenvalues(partial_transpose(rho.matrix, d))[0])


def magic_ppt_boundary(d: int, tol: float = 1e-13) -> float:
    """Smallest alpha > 0 at which rho(alpha, alpha) stops being PPT."""
    hi = 0.5
    while True:
        try:
            _state("magic", d, hi)
            break
        except NonPhysicalStateError:
            hi *= 0.99
    return brentq(lambda a: _min_pt_eig("magic", d, a), 0.0, hi, xtol=tol)


def werner_ppt_boundary(d: int, tol: float = 1e-13) -> float:
    return brentq(lambda p: _min_pt_eig("werner", d, p), 0.0, 1.0, xtol=tol)

