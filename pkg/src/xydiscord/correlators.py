"""Thermodynamic-limit magnetization and two-point functions of the XY chain.

The chain is

.. math::

    H = -\\sum_j \\left\\{ \\frac{\\lambda}{2}\\left[(1+\\gamma)\\sigma^x_j\\sigma^x_{j+1}
        + (1-\\gamma)\\sigma^y_j\\sigma^y_{j+1}\\right] + \\sigma^z_j \\right\\}

in the limit of infinitely many sites. Every pair correlator is built from the
single contraction integral :func:`g_function`; the xx and yy correlators are
Toeplitz determinants of it.

Temperature ``kT == 0`` is an exact flag: the thermal factor is replaced by its
limit instead of evaluating ``tanh`` with a huge inverse temperature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.linalg import toeplitz

from .errors import DistanceTooLarge, QuadratureFailure

__all__ = [
    "MAX_DISTANCE",
    "ModelParams",
    "CorrelatorSet",
    "QuadratureConfig",
    "dispersion",
    "thermal_factor",
    "transverse_magnetization",
    "g_function",
    "correlator_xx",
    "correlator_yy",
    "correlator_zz",
    "correlator_set",
    "ground_energy_density",
]

#: Largest separation for which the Toeplitz determinants are evaluated.
MAX_DISTANCE = 50


@dataclass(frozen=True)
class ModelParams:
    """Parameter point of the chain.

    Parameters
    ----------
    gamma : float
        Anisotropy, ``0 <= gamma <= 1``. ``gamma=0`` is the XX chain and
        ``gamma=1`` the transverse-field Ising chain.
    lam : float
        Inverse transverse-field strength, ``lam >= 0``. The critical line is
        ``lam = 1``.
    kT : float
        Temperature in units of the field term. ``0`` selects the exact
        ground-state limit, ``math.inf`` the fully mixed limit.
    """

    gamma: float
    lam: float
    kT: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "lam", "kT"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ValueError(f"lambda must be finite and >= 0, got {self.lam}")
        if math.isnan(self.kT) or self.kT < 0.0:
            raise ValueError(f"kT must be >= 0, got {self.kT}")

    @property
    def zero_temperature(self) -> bool:
        return self.kT == 0.0


@dataclass(frozen=True)
class CorrelatorSet:
    """Single-site magnetization and the three pair correlators at separation ``n``.

    ``n`` is ``None`` for states that do not come from the chain (e.g. a Bell
    pair supplied as a raw matrix).
    """

    n: int | None
    sz: float
    sxx: float
    syy: float
    szz: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.sz, self.sxx, self.syy, self.szz)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the adaptive Gauss-Kronrod integration."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")
        object.__setattr__(self, "max_subdivisions", int(self.max_subdivisions))


DEFAULT_QUAD = QuadratureConfig()


def dispersion(phi, params: ModelParams):
    """Quasiparticle energy ``sqrt((g l sin phi)^2 + (1 + l cos phi)^2) / 2``."""
    phi = np.asarray(phi, dtype=float)
    gl = params.gamma * params.lam
    out = 0.5 * np.hypot(gl * np.sin(phi), 1.0 + params.lam * np.cos(phi))
    return out if out.ndim else float(out)


def thermal_factor(omega, params: ModelParams):
    """``tanh(omega / kT)``, with the exact limit at ``kT == 0``.

    At zero temperature the factor is 1 for ``omega > 0`` and 0 at ``omega == 0``
    (a measure-zero point of every integrand).
    """
    omega = np.asarray(omega, dtype=float)
    if params.zero_temperature:
        out = np.where(omega > 0.0, 1.0, 0.0)
    else:
        out = np.tanh(omega / params.kT)
    return out if out.ndim else float(out)


def _tanh_over_omega(omega: float, kT: float) -> float:
    # tanh(omega/kT) / omega with its finite limit 1/kT at omega -> 0
    if kT == 0.0:
        return 1.0 / omega if omega > 0.0 else 0.0
    if omega == 0.0:
        return 1.0 / kT
    return math.tanh(omega / kT) / omega


def _breakpoints(params: ModelParams) -> list[float] | None:
    # 1 + lam cos(phi) changes sign here; at gamma=0, kT=0 the integrands jump
    if params.lam > 1.0:
        return [math.acos(-1.0 / params.lam)]
    return None


def _integrate(f, params: ModelParams, cfg: QuadratureConfig, what: str) -> float:
    points = _breakpoints(params)
    limit = max(cfg.max_subdivisions, len(points) + 1) if points else cfg.max_subdivisions
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        out = quad(
            f,
            0.0,
            math.pi,
            epsabs=cfg.abs_tol,
            epsrel=cfg.rel_tol,
            limit=limit,
            points=points,
            full_output=1,
        )
    value, abserr = out[0], out[1]
    # a fourth element (message) means QUADPACK flagged the result; roundoff
    # flags with an error estimate inside the budget are accepted
    flagged = len(out) > 3
    budget = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if (flagged and abserr > budget) or not math.isfinite(value):
        raise QuadratureFailure(
            f"{what} did not converge at gamma={params.gamma}, lambda={params.lam}, "
            f"kT={params.kT}: estimate {value!r} +/- {abserr:.3g} "
            f"(max_subdivisions={cfg.max_subdivisions})"
        )
    return float(value)


@lru_cache(maxsize=256)
def transverse_magnetization(
    params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """Transverse magnetization per site.

    Computed as ``-int_0^pi (1 + l cos phi) tanh(omega/kT) / (2 pi omega) dphi``,
    which gives ``-tanh(1/(2 kT))`` at ``lam = 0``.

    Raises
    ------
    QuadratureFailure
        If the integral does not converge within ``max_subdivisions``.
    """
    if math.isinf(params.kT):
        return 0.0
    g, lam, kT = params.gamma, params.lam, params.kT
    gl = g * lam

    def integrand(phi):
        c = 1.0 + lam * math.cos(phi)
        omega = 0.5 * math.hypot(gl * math.sin(phi), c)
        return -c * _tanh_over_omega(omega, kT) / (2.0 * math.pi)

    return _integrate(integrand, params, quad_cfg, "<sigma^z>")


@lru_cache(maxsize=1 << 16)
def g_function(n: int, params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Contraction integral ``G_n`` for any integer ``n``.

    ``G_n = int_0^pi tanh(omega/kT)/(2 pi omega)
    [cos(n phi)(1 + l cos phi) - g l sin(n phi) sin phi] dphi``.

    Results are memoised on ``(n, params, quad_cfg)``; the cache is
    thread-safe and values are deterministic, so sharing it between sweeps
    is harmless.
    """
    n = int(n)
    if math.isinf(params.kT):
        return 0.0
    g, lam, kT = params.gamma, params.lam, params.kT
    gl = g * lam

    def integrand(phi):
        s, c = math.sin(phi), math.cos(phi)
        omega = 0.5 * math.hypot(gl * s, 1.0 + lam * c)
        bracket = math.cos(n * phi) * (1.0 + lam * c) - gl * math.sin(n * phi) * s
        return bracket * _tanh_over_omega(omega, kT) / (2.0 * math.pi)

    return _integrate(integrand, params, quad_cfg, f"G_{n}")


def _check_distance(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"separation must be a positive integer, got {n}")
    if n > MAX_DISTANCE:
        raise DistanceTooLarge(f"separation {n} exceeds the cap of {MAX_DISTANCE}")
    return int(n)


def _xx_matrix(n: int, G) -> np.ndarray:
    # first column G_{-1}, G_0, ..., G_{n-2}; first row G_{-1}, ..., G_{-n}
    col = [G(k - 1) for k in range(n)]
    row = [G(-1 - k) for k in range(n)]
    return toeplitz(col, row)


def _yy_matrix(n: int, G) -> np.ndarray:
    # first column G_1, ..., G_n; first row G_1, G_0, ..., G_{-n+2}
    col = [G(1 + k) for k in range(n)]
    row = [G(1 - k) for k in range(n)]
    return toeplitz(col, row)


def correlator_xx(
    n: int, params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """``<sigma^x_0 sigma^x_n>`` as an ``n x n`` Toeplitz determinant of ``G``."""
    n = _check_distance(n)
    return float(np.linalg.det(_xx_matrix(n, lambda k: g_function(k, params, quad_cfg))))


def correlator_yy(
    n: int, params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """``<sigma^y_0 sigma^y_n>`` as an ``n x n`` Toeplitz determinant of ``G``."""
    n = _check_distance(n)
    return float(np.linalg.det(_yy_matrix(n, lambda k: g_function(k, params, quad_cfg))))


def correlator_zz(
    n: int, params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """``<sigma^z_0 sigma^z_n> = <sigma^z>^2 - G_n G_{-n}``."""
    n = _check_distance(n)
    sz = transverse_magnetization(params, quad_cfg)
    return sz * sz - g_function(n, params, quad_cfg) * g_function(-n, params, quad_cfg)


def correlator_set(
    n: int, params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD
) -> CorrelatorSet:
    """All four expectation values at separation ``n`` from one table of ``G_k``."""
    n = _check_distance(n)
    table = {k: g_function(k, params, quad_cfg) for k in range(-n, n + 1)}
    sz = transverse_magnetization(params, quad_cfg)
    return CorrelatorSet(
        n=n,
        sz=sz,
        sxx=float(np.linalg.det(_xx_matrix(n, table.__getitem__))),
        syy=float(np.linalg.det(_yy_matrix(n, table.__getitem__))),
        szz=sz * sz - table[n] * table[-n],
    )


def ground_energy_density(
    params: ModelParams, quad_cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """Ground-state energy per site, ``-(1/pi) int_0^pi 2 omega dphi``."""
    gl, lam = params.gamma * params.lam, params.lam

    def integrand(phi):
        return -math.hypot(gl * math.sin(phi), 1.0 + lam * math.cos(phi)) / math.pi

    return _integrate(integrand, params, quad_cfg, "ground energy")
