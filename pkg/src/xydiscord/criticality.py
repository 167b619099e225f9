"""Parameter sweeps, lambda-derivatives and critical-point location."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .correlators import DEFAULT_QUAD, CorrelatorSet, ModelParams, QuadratureConfig, correlator_set
from .errors import QuadratureFailure, StepTooLarge, WindowTooNarrow
from .measures import CorrelationReport, report
from .state import build_state

__all__ = [
    "QUANTITIES",
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "evaluate_point",
    "sweep",
    "quantity_function",
    "derivative_wrt_lambda",
    "table_derivatives",
    "PeakEstimate",
    "CriticalPoint",
    "locate_critical_point",
]

QUANTITIES = {
    "discord": "discord",
    "classical": "classical",
    "mutual": "mutual_information",
}
#: A derivative peak counts as low contrast below this multiple of the window median.
PROMINENCE_THRESHOLD = 2.0


@dataclass(frozen=True)
class SweepSpec:
    """Grid of parameter points.

    ``lambda_range`` is ``(min, max, steps)`` with both ends included;
    ``lambda_values`` may replace it with an explicit list.
    """

    gamma_values: Sequence[float]
    lambda_range: tuple[float, float, int] | None = None
    kT_values: Sequence[float] = (0.0,)
    distances: Sequence[int] = (1,)
    derivative_step: float = 1e-3
    lambda_values: Sequence[float] | None = None

    def __post_init__(self):
        if (self.lambda_range is None) == (self.lambda_values is None):
            raise ValueError("give exactly one of lambda_range and lambda_values")
        if self.lambda_values is not None:
            if len(self.lambda_values) == 0 or min(self.lambda_values) < 0:
                raise ValueError("lambda_values must be non-empty and >= 0")
        else:
            lo, hi, steps = self.lambda_range
            if lo < 0 or hi < lo:
                raise ValueError(f"lambda_range needs 0 <= min <= max, got {self.lambda_range}")
            if int(steps) != steps or steps < 1 or (steps == 1 and hi != lo):
                raise ValueError(f"lambda_range needs at least 2 steps for a range, got {steps}")
        if not (self.gamma_values and self.kT_values and self.distances):
            raise ValueError("every sweep axis needs at least one value")
        if self.derivative_step <= 0:
            raise ValueError("derivative_step must be positive")
        spacing = self.lambda_spacing
        if spacing is not None and self.derivative_step >= spacing:
            raise StepTooLarge(
                f"derivative step {self.derivative_step} is not smaller than the grid spacing {spacing}"
            )

    @property
    def lambdas(self) -> np.ndarray:
        if self.lambda_values is not None:
            return np.unique(np.asarray(self.lambda_values, dtype=float))
        lo, hi, steps = self.lambda_range
        return np.linspace(lo, hi, int(steps))

    @property
    def lambda_spacing(self) -> float | None:
        lams = self.lambdas
        return float(np.min(np.diff(lams))) if len(lams) > 1 else None

    def points(self) -> list[tuple[ModelParams, int]]:
        out = {}
        for g in self.gamma_values:
            for kT in self.kT_values:
                for n in self.distances:
                    for lam in self.lambdas:
                        p = ModelParams(g, lam, kT)
                        out[(p, int(n))] = None
        return list(out)


@dataclass(frozen=True)
class SweepRow:
    params: ModelParams
    n: int
    correlators: CorrelatorSet
    report: CorrelationReport

    @property
    def key(self) -> tuple[float, float, int, float]:
        return (self.params.gamma, self.params.kT, self.n, self.params.lam)

    def record(self) -> dict[str, float]:
        c, r = self.correlators, self.report
        return {
            "gamma": self.params.gamma,
            "lambda": self.params.lam,
            "kT": self.params.kT,
            "n": self.n,
            "sz": c.sz,
            "sxx": c.sxx,
            "syy": c.syy,
            "szz": c.szz,
            "mutual_info": r.mutual_information,
            "classical": r.classical,
            "discord": r.discord,
            "concurrence": r.concurrence,
            "eof": r.eof,
        }


@dataclass(frozen=True)
class SweepTable:
    """Rows ordered by ``(gamma, kT, n, lambda)``."""

    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ordered = tuple(sorted(self.rows, key=lambda r: r.key))
        keys = [r.key for r in ordered]
        if len(set(keys)) != len(keys):
            raise ValueError("sweep table contains duplicate parameter points")
        object.__setattr__(self, "rows", ordered)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def records(self) -> list[dict[str, float]]:
        return [r.record() for r in self.rows]

    def groups(self) -> dict[tuple[float, float, int], list[SweepRow]]:
        """Rows split into lambda series keyed by ``(gamma, kT, n)``."""
        out: dict[tuple[float, float, int], list[SweepRow]] = {}
        for r in self.rows:
            out.setdefault((r.params.gamma, r.params.kT, r.n), []).append(r)
        return out

    def column(self, name: str) -> np.ndarray:
        return np.array([rec[name] for rec in self.records()])


@lru_cache(maxsize=4096)
def evaluate_point(
    params: ModelParams, n: int, quad_cfg: QuadratureConfig = DEFAULT_QUAD, verify: bool = False
) -> SweepRow:
    """Correlators and every correlation measure at one parameter point."""
    try:
        corr = correlator_set(n, params, quad_cfg)
    except QuadratureFailure as exc:
        raise QuadratureFailure(f"{exc} [sweep point n={n}]") from exc
    return SweepRow(params=params, n=int(n), correlators=corr, report=report(build_state(corr), verify=verify))


def _evaluate_job(job):
    return evaluate_point(*job)


def sweep(
    spec: SweepSpec,
    quad_cfg: QuadratureConfig = DEFAULT_QUAD,
    jobs: int = 1,
    verify: bool = False,
) -> SweepTable:
    """Evaluate every grid point of ``spec``.

    With ``jobs > 1`` points are distributed over a process pool; the table is
    sorted after collection, so its contents do not depend on ``jobs``.
    """
    work = [(p, n, quad_cfg, verify) for p, n in spec.points()]
    if jobs <= 1 or len(work) < 2:
        rows = [_evaluate_job(w) for w in work]
    else:
        chunk = max(1, len(work) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate_job, work, chunksize=chunk))
    return SweepTable(tuple(rows))


def quantity_function(
    gamma: float,
    kT: float,
    n: int,
    quantity: str = "discord",
    quad_cfg: QuadratureConfig = DEFAULT_QUAD,
) -> Callable[[float], float]:
    """``lam -> quantity`` at fixed ``(gamma, kT, n)``."""
    attr = QUANTITIES[quantity]

    def f(lam: float) -> float:
        row = evaluate_point(ModelParams(gamma, lam, kT), n, quad_cfg)
        return getattr(row.report, attr)

    return f


def derivative_wrt_lambda(
    func: Callable[[float], float],
    lambdas,
    order: int = 1,
    step: float = 1e-3,
    grid_spacing: float | None = None,
) -> np.ndarray:
    """Central differences of ``func`` with one Richardson step.

    The stencils at ``step`` and ``step / 2`` are combined as
    ``(4 D(h/2) - D(h)) / 3``, which cancels the ``h^2`` error term. ``func`` is
    evaluated fresh at ``lam +- step`` and ``lam +- step / 2``.

    Raises
    ------
    StepTooLarge
        If ``grid_spacing`` is given and ``step >= grid_spacing``.
    ValueError
        If a stencil would reach below ``lambda = 0``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if step <= 0:
        raise ValueError("step must be positive")
    if grid_spacing is not None and step >= grid_spacing:
        raise StepTooLarge(f"step {step} is not smaller than the grid spacing {grid_spacing}")
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if np.any(lambdas - step < 0):
        raise ValueError("every lambda must be at least one step above 0")

    def stencil(x, h):
        if order == 1:
            return (func(x + h) - func(x - h)) / (2.0 * h)
        return (func(x + h) - 2.0 * func(x) + func(x - h)) / (h * h)

    return np.array([(4.0 * stencil(x, step / 2.0) - stencil(x, step)) / 3.0 for x in lambdas])


def table_derivatives(
    table: SweepTable,
    quantity: str = "discord",
    order: int = 1,
    step: float = 1e-3,
    quad_cfg: QuadratureConfig = DEFAULT_QUAD,
) -> dict[tuple[float, float, int], tuple[np.ndarray, np.ndarray]]:
    """Derivative series for every ``(gamma, kT, n)`` series in a sweep table.

    Only the table's lambda points are used; the values are recomputed around
    them at the finite-difference stencil.
    """
    out = {}
    for key, rows in table.groups().items():
        lambdas = np.array([r.params.lam for r in rows])
        spacing = float(np.min(np.diff(lambdas))) if len(lambdas) > 1 else None
        f = quantity_function(key[0], key[1], key[2], quantity, quad_cfg)
        out[key] = (lambdas, derivative_wrt_lambda(f, lambdas, order, step, spacing))
    return out


@dataclass(frozen=True)
class PeakEstimate:
    """Location of the largest ``|d quantity / d lambda|`` in a window."""

    quantity: str
    lambda_star: float
    peak: float
    prominence: float
    lambdas: np.ndarray
    derivative: np.ndarray

    @property
    def low_contrast(self) -> bool:
        return self.prominence < PROMINENCE_THRESHOLD


@dataclass(frozen=True)
class CriticalPoint:
    gamma: float
    kT: float
    n: int
    discord: PeakEstimate
    classical: PeakEstimate


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def _peak(quantity, f, lambdas, step, tol) -> PeakEstimate:
    deriv = derivative_wrt_lambda(f, lambdas, 1, step)
    mag = np.abs(deriv)
    i = int(np.argmax(mag))
    lo = lambdas[max(i - 1, 0)]
    hi = lambdas[min(i + 1, len(lambdas) - 1)]
    lam_star, peak = _golden_max(
        lambda x: float(abs(derivative_wrt_lambda(f, [x], 1, step)[0])), lo, hi, tol
    )
    if peak < mag[i]:
        lam_star, peak = float(lambdas[i]), float(mag[i])
    median = float(np.median(mag))
    prominence = peak / median if median > 0 else math.inf
    return PeakEstimate(quantity, float(lam_star), float(peak), prominence, lambdas, deriv)


def locate_critical_point(
    gamma: float,
    kT: float,
    n: int,
    window: tuple[float, float] = (0.8, 1.2),
    step: float = 1e-3,
    num_points: int = 41,
    tol: float = 1e-4,
    quad_cfg: QuadratureConfig = DEFAULT_QUAD,
) -> CriticalPoint:
    """Locate the maximum of ``|dD/dlambda|`` and ``|dC/dlambda|`` in ``window``.

    A uniform grid scan picks the best grid point, then golden-section search
    refines within its two neighbouring cells. Each estimate carries a
    prominence (peak over the window median); values below 2 are flagged as
    low contrast rather than rejected.

    Raises
    ------
    WindowTooNarrow
        If the window does not contain ``lambda = 1`` strictly inside, or is too
        narrow for the finite-difference stencil.
    """
    lo, hi = window
    if not lo < 1.0 < hi:
        raise WindowTooNarrow(f"window {window} must contain lambda = 1 strictly inside")
    spacing = (hi - lo) / (num_points - 1)
    if lo - step < 0 or spacing <= step or num_points < 3:
        raise WindowTooNarrow(
            f"window {window} with {num_points} points is too narrow for step {step}"
        )
    lambdas = np.linspace(lo, hi, num_points)
    estimates = {
        q: _peak(q, quantity_function(gamma, kT, n, q, quad_cfg), lambdas, step, tol)
        for q in ("discord", "classical")
    }
    return CriticalPoint(gamma=float(gamma), kT=float(kT), n=int(n), **estimates)
