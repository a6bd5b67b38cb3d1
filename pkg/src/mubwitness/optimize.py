"""Lower bounds of the MUB witness over separable states, and local-unitary searches.

Because M_m is linear in rho, its minimum over separable states is attained
on a pure product state |a>|b>. :func:`lower_bound` minimizes

    f(a, b) = sum_k sum_i |<i_k|a>|^2 |<i_k|b>|^2

from many Haar-random starts. All restarts are advanced together by a
vectorized L-BFGS with an Armijo backtracking line search; the iterate is kept
on the unit sphere of each party, where f is evaluated as the scale-invariant
function f(a/|a|, b/|b|).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .linalg import haar_unitary
from .mub import MubSet
from .witness import witness_operator, witness_value_product

__all__ = [
    "OptimizerConfig",
    "ProductParams",
    "BoundEstimate",
    "LocalUnitaryResult",
    "default_restarts",
    "decode_pure_state",
    "encode_pure_state",
    "product_objective",
    "lower_bound",
    "sample_product_minimum",
    "gellmann_generators",
    "optimize_over_local_unitaries",
    "maximize_over_local_unitaries",
    "minimize_over_local_unitaries",
    "gradient_check",
]

# A restart counts as converged when its final gradient norm is below this.
STATIONARY_TOL = 1e-6
STALL_RTOL = 1e-15
ARMIJO_C = 1e-4
MAX_BACKTRACKS = 40


def default_restarts(d: int) -> int:
    return 200 if d <= 7 else 1000


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start settings shared by the bound and local-unitary searches.

    ``restarts=None`` picks :func:`default_restarts` for the dimension at hand.
    """

    restarts: int | None = None
    max_iterations: int = 2000
    gradient_tolerance: float = 1e-9
    step_policy: str = "lbfgs-armijo"
    memory: int = 8
    seed: int = 0
    threads: int = 1
    unitary_restarts: int = 24

    def __post_init__(self):
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.unitary_restarts < 1:
            raise ValueError("unitary_restarts must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.step_policy != "lbfgs-armijo":
            raise ValueError(f"unknown step policy {self.step_policy!r}")

    def restarts_for(self, d: int) -> int:
        return self.restarts if self.restarts is not None else default_restarts(d)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> OptimizerConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown optimizer settings: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def from_json_file(cls, path) -> OptimizerConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def with_(self, **changes) -> OptimizerConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


# -- pure-state parameterization -------------------------------------------------


def _gauge(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-15)
    if nz.size == 0:
        raise ValueError("zero vector has no state")
    first = v[nz[0]]
    return v * (abs(first) / first)


def decode_pure_state(theta, d: int) -> np.ndarray:
    """Unit vector from d-1 hyperspherical magnitude angles followed by d-1 phases.

    The first nonzero amplitude of the result is real and non-negative.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (2 * (d - 1),):
        raise ValueError(f"expected {2 * (d - 1)} angles for d={d}, got shape {theta.shape}")
    mags, phases = theta[: d - 1], theta[d - 1 :]
    sines = np.concatenate([[1.0], np.cumprod(np.sin(mags))])
    cosines = np.concatenate([np.cos(mags), [1.0]])
    r = sines * cosines
    v = r * np.exp(1j * np.concatenate([[0.0], phases]))
    return _gauge(v)


def encode_pure_state(v) -> np.ndarray:
    """Angles reproducing ``v`` up to a global phase (inverse of :func:`decode_pure_state`)."""
    v = np.asarray(v, dtype=complex)
    v = _gauge(v / np.linalg.norm(v))
    d = v.size
    r = np.abs(v)
    tails = np.sqrt(np.cumsum((r**2)[::-1])[::-1])  # tails[j] = |v[j:]|
    mags = np.arctan2(tails[1:], r[:-1])
    phases = np.where(r[1:] > 1e-15, np.angle(v[1:]), 0.0)
    return np.concatenate([mags, phases]) if d > 1 else np.zeros(0)


@dataclass(frozen=True)
class ProductParams:
    """Angle vectors for the two parties, each of length 2(d-1)."""

    theta_a: tuple[float, ...]
    theta_b: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.theta_a) // 2 + 1

    def states(self) -> tuple[np.ndarray, np.ndarray]:
        d = self.dim
        return decode_pure_state(self.theta_a, d), decode_pure_state(self.theta_b, d)

    def vector(self) -> np.ndarray:
        return np.concatenate([self.theta_a, self.theta_b])

    @classmethod
    def from_states(cls, a, b) -> ProductParams:
        return cls(tuple(encode_pure_state(a).tolist()), tuple(encode_pure_state(b).tolist()))

    @classmethod
    def from_vector(cls, theta, d: int) -> ProductParams:
        theta = np.asarray(theta, dtype=float)
        n = 2 * (d - 1)
        if theta.shape != (2 * n,):
            raise ValueError(f"expected {2 * n} angles for d={d}")
        return cls(tuple(theta[:n].tolist()), tuple(theta[n:].tolist()))


def _magnitude_jacobian(mags: np.ndarray) -> np.ndarray:
    """d r_j / d mags_m for the hyperspherical magnitudes, shape (d, d-1)."""
    n = mags.size
    s, c = np.sin(mags), np.cos(mags)
    jac = np.zeros((n + 1, n))
    for j in range(n + 1):
        cj = c[j] if j < n else 1.0
        for m in range(min(j + 1, n)):
            if m < j:
                others = np.prod(np.delete(s[:j], m))
                jac[j, m] = others * c[m] * cj
            else:
                jac[j, m] = -np.prod(s[:j]) * s[j]
    return jac


def _party_gradient(theta: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Chain rule from the Wirtinger gradient ``g`` (df = 2 Re <g, dv>) to the angles."""
    d = g.size
    mags, phases = theta[: d - 1], theta[d - 1 :]
    raw = np.concatenate([[1.0], np.exp(1j * phases)])
    sines = np.concatenate([[1.0], np.cumprod(np.sin(mags))])
    cosines = np.concatenate([np.cos(mags), [1.0]])
    amp = sines * cosines * raw
    jac = _magnitude_jacobian(mags) * raw[:, None]
    grad_mags = 2 * np.real(g.conj() @ jac)
    grad_phases = 2 * np.real(g.conj() * 1j * amp)[1:]
    return np.concatenate([grad_mags, grad_phases])


def product_objective(theta, mubs: MubSet) -> tuple[float, np.ndarray]:
    """Witness value of the product state encoded by ``theta`` and its angle gradient."""
    d = mubs.dim
    n = 2 * (d - 1)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (2 * n,):
        raise ValueError(f"expected {2 * n} angles for d={d}")
    stack = mubs.stacked()
    raw = []
    for t in (theta[:n], theta[n:]):
        mags, phases = t[: d - 1], t[d - 1 :]
        sines = np.concatenate([[1.0], np.cumprod(np.sin(mags))])
        cosines = np.concatenate([np.cos(mags), [1.0]])
        raw.append(sines * cosines * np.exp(1j * np.concatenate([[0.0], phases])))
    a, b = raw
    ca = np.einsum("kji,j->ki", stack.conj(), a)
    cb = np.einsum("kji,j->ki", stack.conj(), b)
    pa, pb = np.abs(ca) ** 2, np.abs(cb) ** 2
    value = float(np.sum(pa * pb))
    ga = np.einsum("kji,ki->j", stack, pb * ca)
    gb = np.einsum("kji,ki->j", stack, pa * cb)
    grad = np.concatenate([_party_gradient(theta[:n], ga), _party_gradient(theta[n:], gb)])
    return value, grad


# -- batched minimization over product states -------------------------------------------


def _batch_value_grad(stack: np.ndarray, x: np.ndarray):
    """Values and tangent gradients for unit-norm iterates ``x`` of shape (R, 2, d)."""
    c = np.einsum("kji,rpj->rpki", stack.conj(), x)
    p = c.real**2 + c.imag**2
    f = np.einsum("rki,rki->r", p[:, 0], p[:, 1])
    weights = np.stack([p[:, 1], p[:, 0]], axis=1) * c
    g = np.einsum("kji,rpki->rpj", stack, weights)
    g = 2.0 * (g - f[:, None, None] * x)
    return f, g


def _to_real(z: np.ndarray) -> np.ndarray:
    r = z.shape[0]
    return np.concatenate([z.real.reshape(r, -1), z.imag.reshape(r, -1)], axis=1)


def _to_complex(v: np.ndarray, d: int) -> np.ndarray:
    half = v.shape[1] // 2
    return (v[:, :half] + 1j * v[:, half:]).reshape(v.shape[0], 2, d)


def _normalize(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x, axis=2, keepdims=True)


@dataclass
class _BatchResult:
    x: np.ndarray
    f: np.ndarray
    grad_norm: np.ndarray
    iterations: np.ndarray


def _minimize_batch(stack: np.ndarray, x0: np.ndarray, config: OptimizerConfig) -> _BatchResult:
    """L-BFGS over all restarts at once; each row stops independently."""
    nrest, _, d = x0.shape
    mem = config.memory
    x = _normalize(x0.astype(complex))
    f, g = _batch_value_grad(stack, x)
    n = 4 * d
    s_hist = np.zeros((nrest, mem, n))
    y_hist = np.zeros((nrest, mem, n))
    rho_hist = np.zeros((nrest, mem))
    count = np.zeros(nrest, dtype=int)
    iters = np.zeros(nrest, dtype=int)
    gnorm = np.linalg.norm(_to_real(g), axis=1)
    active = gnorm >= config.gradient_tolerance

    for _ in range(config.max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        iters[idx] += 1
        gi = _to_real(g[idx])
        k = count[idx]

        # Two-loop recursion, vectorized over restarts with ragged history.
        q = gi.copy()
        alphas = np.zeros((idx.size, mem))
        for j in range(mem):
            slot = (k - 1 - j) % mem
            valid = j < k
            s = s_hist[idx, slot]
            y = y_hist[idx, slot]
            a = np.where(valid, rho_hist[idx, slot] * np.einsum("ri,ri->r", s, q), 0.0)
            alphas[:, j] = a
            q -= a[:, None] * y
        last = (k - 1) % mem
        sy = np.einsum("ri,ri->r", s_hist[idx, last], y_hist[idx, last])
        yy = np.einsum("ri,ri->r", y_hist[idx, last], y_hist[idx, last])
        gamma = np.where(k > 0, sy / np.maximum(yy, 1e-300), 0.1)
        z = gamma[:, None] * q
        for j in reversed(range(mem)):
            slot = (k - 1 - j) % mem
            valid = j < k
            beta = np.where(valid, rho_hist[idx, slot] * np.einsum("ri,ri->r", y_hist[idx, slot], z), 0.0)
            z += (alphas[:, j] - beta)[:, None] * s_hist[idx, slot]
        direction = -z
        slope = np.einsum("ri,ri->r", gi, direction)
        uphill = slope >= 0
        direction[uphill] = -gi[uphill]
        slope[uphill] = -np.einsum("ri,ri->r", gi[uphill], gi[uphill])

        # Armijo backtracking, retracting each trial point onto the spheres.
        x_old = _to_real(x[idx])
        f_old = f[idx]
        step = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        x_new = x[idx].copy()
        f_new = f_old.copy()
        g_new = g[idx].copy()
        for _ in range(MAX_BACKTRACKS):
            todo = np.flatnonzero(~accepted)
            if todo.size == 0:
                break
            trial = _normalize(_to_complex(x_old[todo] + step[todo, None] * direction[todo], d))
            ft, gt = _batch_value_grad(stack, trial)
            ok = ft <= f_old[todo] + ARMIJO_C * step[todo] * slope[todo]
            hit = todo[ok]
            accepted[hit] = True
            x_new[hit], f_new[hit], g_new[hit] = trial[ok], ft[ok], gt[ok]
            step[todo[~ok]] *= 0.5

        s = _to_real(x_new) - x_old
        y = _to_real(g_new) - gi
        sy = np.einsum("ri,ri->r", s, y)
        store = accepted & (sy > 1e-16)
        rows = idx[store]
        slots = count[rows] % mem
        s_hist[rows, slots] = s[store]
        y_hist[rows, slots] = y[store]
        rho_hist[rows, slots] = 1.0 / sy[store]
        count[rows] += 1

        x[idx], f[idx], g[idx] = x_new, f_new, g_new
        gn = np.linalg.norm(_to_real(g_new), axis=1)
        gnorm[idx] = gn
        stalled = (f_old - f_new) <= STALL_RTOL * np.maximum(np.abs(f_old), 1.0)
        done = (gn < config.gradient_tolerance) | ~accepted | stalled
        active[idx[done]] = False

    return _BatchResult(x, f, gnorm, iters)


def _restart_starts(d: int, seed: int, first: int, last: int) -> np.ndarray:
    """Haar-random product starts; restart ``r`` draws from its own stream (seed, r)."""
    out = np.empty((last - first, 2, d), dtype=complex)
    for row, r in enumerate(range(first, last)):
        rng = np.random.default_rng([seed, r])
        z = rng.standard_normal((2, d)) + 1j * rng.standard_normal((2, d))
        out[row] = z
    return _normalize(out)


def _run_chunk(stack: np.ndarray, config: OptimizerConfig, first: int, last: int) -> _BatchResult:
    d = stack.shape[1]
    return _minimize_batch(stack, _restart_starts(d, config.seed, first, last), config)


@dataclass(frozen=True)
class BoundEstimate:
    """Outcome of a multi-start minimization of M_m over product states."""

    value: float
    argmin: ProductParams
    state_a: np.ndarray = field(repr=False)
    state_b: np.ndarray = field(repr=False)
    restarts: int
    converged_fraction: float
    best_restart_index: int
    seed: int
    hits: int
    gap: float
    mean_iterations: float
    config: OptimizerConfig = field(repr=False)
    restart_values: tuple[float, ...] = field(default=(), repr=False)

    def __float__(self):
        return self.value

    def to_dict(self, include_restarts: bool = False) -> dict:
        out = {
            "value": self.value,
            "restarts": self.restarts,
            "converged_fraction": self.converged_fraction,
            "best_restart_index": self.best_restart_index,
            "seed": self.seed,
            "hits": self.hits,
            "gap": self.gap,
            "mean_iterations": self.mean_iterations,
            "argmin": {"theta_a": list(self.argmin.theta_a), "theta_b": list(self.argmin.theta_b)},
            "config": self.config.to_dict(),
        }
        if include_restarts:
            out["restart_values"] = list(self.restart_values)
        return out


HIT_TOL = 1e-7


def lower_bound(mubs: MubSet, config: OptimizerConfig | None = None) -> BoundEstimate:
    """Estimate L_m = min over separable states of M_m for the bases in ``mubs``.

    The estimate is the smallest local minimum found over all restarts; ties go
    to the lowest restart index. ``hits`` counts restarts that landed within
    1e-7 of the best value and ``gap`` is the distance from the best value to
    the next-best distinct local minimum (0 if every restart agrees).
    """
    config = config or OptimizerConfig()
    d = mubs.dim
    nrest = config.restarts_for(d)
    stack = mubs.stacked()
    workers = max(1, min(config.threads, nrest))
    if workers == 1:
        res = _run_chunk(stack, config, 0, nrest)
        parts = [res]
    else:
        bounds = np.linspace(0, nrest, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, stack, config, lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
            parts = [fut.result() for fut in futures]
    x = np.concatenate([p.x for p in parts])
    f = np.concatenate([p.f for p in parts])
    gnorm = np.concatenate([p.grad_norm for p in parts])
    iters = np.concatenate([p.iterations for p in parts])

    best = int(np.argmin(f))
    value = float(f[best])
    a, b = x[best, 0], x[best, 1]
    params = ProductParams.from_states(a, b)
    a_dec, b_dec = params.states()
    hits = int(np.sum(f <= value + HIT_TOL))
    others = f[f > value + HIT_TOL]
    gap = float(others.min() - value) if others.size else 0.0
    return BoundEstimate(
        value=value,
        argmin=params,
        state_a=a_dec,
        state_b=b_dec,
        restarts=nrest,
        converged_fraction=float(np.mean(gnorm < STATIONARY_TOL)),
        best_restart_index=best,
        seed=config.seed,
        hits=hits,
        gap=gap,
        mean_iterations=float(np.mean(iters)),
        config=config,
        restart_values=tuple(f.tolist()),
    )


def sample_product_minimum(mubs: MubSet, samples: int, seed: int = 0, chunk: int = 100_000) -> float:
    """Smallest M_m over ``samples`` Haar-random product states (no optimization)."""
    rng = np.random.default_rng(seed)
    d = mubs.dim
    # Columns of all bases side by side, so the overlaps are one matrix product.
    columns = np.concatenate([b.matrix for b in mubs.bases], axis=1).conj()
    best = math.inf
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        z = rng.standard_normal((n, 2, d)) + 1j * rng.standard_normal((n, 2, d))
        z = _normalize(z)
        c = z.reshape(2 * n, d) @ columns
        p = (c.real**2 + c.imag**2).reshape(n, 2, -1)
        f = np.einsum("ri,ri->r", p[:, 0], p[:, 1])
        best = min(best, float(f.min()))
        done += n
    return best


# -- local unitary searches ------------------------------------------------------


def gellmann_generators(d: int) -> np.ndarray:
    """The d^2 - 1 generalized Gell-Mann matrices, normalized to tr(l_a l_b) = 2 delta_ab."""
    gens = []
    for a in range(d):
        for b in range(a + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[a, b] = sym[b, a] = 1
            gens.append(sym)
            anti = np.zeros((d, d), dtype=complex)
            anti[a, b], anti[b, a] = -1j, 1j
            gens.append(anti)
    for l in range(1, d):
        diag = np.zeros((d, d), dtype=complex)
        diag[np.arange(l), np.arange(l)] = 1
        diag[l, l] = -l
        gens.append(diag * np.sqrt(2 / (l * (l + 1))))
    return np.array(gens)


def _expi(theta: np.ndarray, gens: np.ndarray):
    """U = exp(i sum theta_k g_k), its eigenvectors and divided differences of exp(i x)."""
    h = np.tensordot(theta, gens, axes=1)
    lam, q = np.linalg.eigh((h + h.conj().T) / 2)
    e = np.exp(1j * lam)
    u = (q * e) @ q.conj().T
    diff = lam[:, None] - lam[None, :]
    close = np.abs(diff) < 1e-12
    gamma = np.where(close, 1j * e[:, None], (e[:, None] - e[None, :]) / np.where(close, 1.0, diff))
    return u, q, gamma


def _generator_gradient(q, gamma, gens, gmat) -> np.ndarray:
    """d/d theta_k of 2 Re tr(gmat dU) for U = exp(i sum theta g)."""
    c = (q.conj().T @ gmat @ q).T * gamma
    lk = np.einsum("ca,kcd,db->kab", q.conj(), gens, q)
    return 2 * np.real(np.einsum("ab,kab->k", c, lk))


def _coords_of(u: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Generator coordinates of a unitary, after removing its global phase."""
    d = u.shape[0]
    u = u / np.linalg.det(u) ** (1 / d)
    lam, q = np.linalg.eig(u)
    h = (q * np.angle(lam)) @ np.linalg.inv(q)
    h = (h + h.conj().T) / 2
    h -= np.trace(h) / d * np.eye(d)
    return np.real(np.einsum("kab,ba->k", gens, h)) / 2


@dataclass(frozen=True)
class LocalUnitaryResult:
    value: float
    raw: float
    unitary_a: np.ndarray = field(repr=False)
    unitary_b: np.ndarray = field(repr=False)
    family: str
    sense: str


def optimize_over_local_unitaries(rho, mubs: MubSet, config: OptimizerConfig | None = None, sense: str = "max"):
    """Extremize M_m((U (x) V) rho (U (x) V)^dagger) over local unitaries.

    Two families are searched: the constrained one V = conj(U) and free pairs
    (U, V). The better of the two is returned. Restart 0 of each family starts
    at U = V = I, so the result never does worse than the raw value.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    config = config or OptimizerConfig()
    d = mubs.dim
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"state of shape {rho.shape} does not act on C^{d} (x) C^{d}")
    w = witness_operator(mubs)
    raw = float(np.real(np.trace(w @ rho)))
    gens = gellmann_generators(d)
    gens_conj = -gens.conj()
    n = gens.shape[0]
    sign = -1.0 if sense == "max" else 1.0

    def evaluate(u, v):
        t = np.kron(u, v)
        k = rho @ t.conj().T @ w
        val = float(np.real(np.trace(k @ t)))
        k4 = k.reshape(d, d, d, d)
        ga = np.einsum("abcd,db->ac", k4, v)
        gb = np.einsum("abcd,ca->bd", k4, u)
        return val, ga, gb

    def conj_objective(theta):
        u, q, gam = _expi(theta, gens)
        v, qv, gamv = _expi(theta, gens_conj)
        val, ga, gb = evaluate(u, v)
        grad = _generator_gradient(q, gam, gens, ga) + _generator_gradient(qv, gamv, gens_conj, gb)
        return sign * val, sign * grad

    def free_objective(theta):
        u, q, gam = _expi(theta[:n], gens)
        v, qv, gamv = _expi(theta[n:], gens)
        val, ga, gb = evaluate(u, v)
        grad = np.concatenate([_generator_gradient(q, gam, gens, ga), _generator_gradient(qv, gamv, gens, gb)])
        return sign * val, sign * grad

    best = None
    for family, objective, width in (("conjugate", conj_objective, n), ("free", free_objective, 2 * n)):
        for r in range(config.unitary_restarts):
            if r == 0:
                start = np.zeros(width)
            else:
                rng = np.random.default_rng([config.seed, r, width])
                start = np.concatenate(
                    [_coords_of(haar_unitary(d, rng), gens) for _ in range(width // n)]
                )
            res = minimize(
                objective,
                start,
                jac=True,
                method="L-BFGS-B",
                options={"maxiter": config.max_iterations, "gtol": config.gradient_tolerance, "ftol": 1e-15},
            )
            value = sign * float(res.fun)
            if best is None or sign * value < sign * best[0]:
                theta = res.x
                if family == "conjugate":
                    u = _expi(theta, gens)[0]
                    v = u.conj()
                else:
                    u = _expi(theta[:n], gens)[0]
                    v = _expi(theta[n:], gens)[0]
                best = (value, u, v, family)

    value, u, v, family = best
    # Report the value of the returned unitaries, not the optimizer's internal one.
    t = np.kron(u, v)
    value = float(np.real(np.trace(w @ t @ rho @ t.conj().T)))
    if sense == "max":
        value = max(value, raw)
    else:
        value = min(value, raw)
    return LocalUnitaryResult(value, raw, u, v, family, sense)


def maximize_over_local_unitaries(rho, mubs: MubSet, config: OptimizerConfig | None = None) -> LocalUnitaryResult:
    return optimize_over_local_unitaries(rho, mubs, config, "max")


def minimize_over_local_unitaries(rho, mubs: MubSet, config: OptimizerConfig | None = None) -> LocalUnitaryResult:
    return optimize_over_local_unitaries(rho, mubs, config, "min")


def gradient_check(f, theta, grad=None, step: float = 1e-6, seed: int = 0) -> float:
    """Largest deviation between a gradient and central finite differences.

    ``f`` may return either a value or ``(value, gradient)``; an explicit
    ``grad`` callable takes precedence. Deviations are absolute for components
    of magnitude below one and relative above. Without any analytic gradient the
    finite-difference gradient is checked for consistency against a directional
    derivative along a random unit direction.
    """
    theta = np.asarray(theta, dtype=float)

    def value(t):
        out = f(t)
        return float(out[0]) if isinstance(out, tuple) else float(out)

    analytic = None
    if grad is not None:
        analytic = np.asarray(grad(theta), dtype=float)
    else:
        out = f(theta)
        if isinstance(out, tuple):
            analytic = np.asarray(out[1], dtype=float)

    fd = np.empty_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = step
        fd[i] = (value(theta + e) - value(theta - e)) / (2 * step)

    if analytic is None:
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(theta.size)
        u /= np.linalg.norm(u)
        directional = (value(theta + step * u) - value(theta - step * u)) / (2 * step)
        return abs(directional - fd @ u) / max(1.0, abs(directional))
    return float(np.max(np.abs(analytic - fd) / np.maximum(1.0, np.abs(fd))))


def available_threads() -> int:
    return os.cpu_count() or 1
