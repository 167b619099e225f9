"""Mutual information, classical correlation, discord, concurrence and EoF.

Classical correlation is available in two independent forms. The closed form
assumes the optimal projective measurement on the partner spin is along x
(``theta = pi/2, phi = 0``). :func:`classical_correlation_optimized` makes no
such assumption: it scans the Bloch sphere and refines the best grid point,
so the two can be compared point by point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .state import (
    SIGMA_Y,
    TwoSiteState,
    binary_entropy,
    joint_entropy,
    partial_trace,
    von_neumann_entropy,
)

__all__ = [
    "MeasurementAngles",
    "CorrelationReport",
    "MISMATCH_TOL",
    "mutual_information",
    "conditional_entropy_measured",
    "conditional_entropy_grid",
    "classical_correlation_closed",
    "classical_correlation_optimized",
    "quantum_discord",
    "concurrence",
    "concurrence_x_state",
    "entanglement_of_formation",
    "eof",
    "report",
]

# tiny negatives from floating-point dust are reported as 0
CLAMP = 1e-10
#: Closed-form and optimized classical correlation must agree to this level.
MISMATCH_TOL = 1e-6
DEFAULT_GRID = (64, 128)
# objective range below which the measurement landscape counts as flat
FLAT_TOL = 1e-12
# concurrence below this is rounding dust from the singular values
CONCURRENCE_FLOOR = 1e-14


@dataclass(frozen=True)
class MeasurementAngles:
    """Direction of the projective measurement on the partner spin.

    ``|Theta_par> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` and its
    orthogonal complement. ``unique`` is False when the objective was flat and
    the angles are only the deterministic first grid minimum.
    """

    theta: float
    phi: float
    unique: bool = True

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(self.theta / 2.0), math.sin(self.theta / 2.0)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([c, e * s]), np.array([s / e, -c])


X_MEASUREMENT = MeasurementAngles(math.pi / 2.0, 0.0)


@dataclass(frozen=True)
class CorrelationReport:
    """All pairwise correlation measures of one state, in bits.

    ``classical_optimized`` is filled only in verification mode.
    """

    mutual_information: float
    classical: float
    discord: float
    concurrence: float
    eof: float
    optimal_angles: MeasurementAngles = X_MEASUREMENT
    classical_optimized: float | None = None

    @property
    def measurement_mismatch(self) -> bool:
        if self.classical_optimized is None:
            return False
        return abs(self.classical - self.classical_optimized) > MISMATCH_TOL


def _clamp(x: float) -> float:
    if -CLAMP <= x < 0.0:
        return 0.0
    return float(x)


def mutual_information(state: TwoSiteState) -> float:
    """``S(rho_A) + S(rho_B) - S(rho_AB)``."""
    s_a = von_neumann_entropy(np.linalg.eigvalsh(state.reduced(0)))
    s_b = von_neumann_entropy(np.linalg.eigvalsh(state.reduced(1)))
    return _clamp(s_a + s_b - joint_entropy(state))


def _oriented(state: TwoSiteState, side: str) -> np.ndarray:
    # returns rho[a, b, a', b'] with b the measured spin
    r = np.asarray(state.matrix).reshape(2, 2, 2, 2)
    if side == "B":
        return r
    if side == "A":
        return r.transpose(1, 0, 3, 2)
    raise ValueError("side must be 'A' or 'B'")


def _measured_entropy(r: np.ndarray, theta, phi) -> np.ndarray:
    """Vectorised ``sum_j q_j S(rho_A^j)`` for arrays of angles."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    total = np.zeros(np.broadcast(theta, phi).shape)
    for v0, v1 in ((c + 0j, e * s), (s / e, -c + 0j)):
        v = np.stack(np.broadcast_arrays(v0, v1), axis=-1)
        # unnormalised conditional state <v|_B rho |v>_B
        m = np.einsum("...b,abcd,...d->...ac", v.conj(), r, v)
        q = np.real(m[..., 0, 0] + m[..., 1, 1])
        bloch = np.sqrt(np.real(m[..., 0, 0] - m[..., 1, 1]) ** 2 + 4.0 * np.abs(m[..., 0, 1]) ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = np.where(q > 0.0, 0.5 * (1.0 + bloch / q), 1.0)
        total = total + np.where(q > 0.0, q, 0.0) * binary_entropy(p)
    return total


def conditional_entropy_measured(
    state: TwoSiteState, m: MeasurementAngles, side: str = "B"
) -> float:
    """Average entropy of one spin after a projective measurement on the other.

    Parameters
    ----------
    state : TwoSiteState
    m : MeasurementAngles
        Measurement direction.
    side : {"B", "A"}
        Which spin is measured. ``"B"`` (the partner at distance ``n``) is the
        convention used throughout; ``"A"`` measures site 0 instead.

    Returns
    -------
    float
        ``sum_j q_j S(rho^j)`` in bits; outcomes with ``q_j = 0`` contribute 0.
    """
    return float(_measured_entropy(_oriented(state, side), m.theta, m.phi))


def conditional_entropy_grid(
    state: TwoSiteState, thetas, phis, side: str = "B"
) -> np.ndarray:
    """Measured conditional entropy on the outer product grid ``thetas x phis``."""
    t, p = np.meshgrid(np.asarray(thetas, float), np.asarray(phis, float), indexing="ij")
    return _measured_entropy(_oriented(state, side), t, p)


def classical_correlation_closed(state: TwoSiteState) -> float:
    """``H_bin(p1) - H_bin(p2)`` for the x-direction measurement.

    ``p1 = (1 + sz) / 2`` and ``p2 = (1 + sqrt(sxx^2 + sz^2)) / 2``. Valid for
    the exchange-symmetric X-states produced by :func:`~xydiscord.state.build_state`.
    """
    c = state.correlators
    p1 = 0.5 * (1.0 + c.sz)
    p2 = 0.5 * (1.0 + math.sqrt(c.sxx * c.sxx + c.sz * c.sz))
    return _clamp(binary_entropy(p1) - binary_entropy(p2))


def classical_correlation_optimized(
    state: TwoSiteState,
    grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = 1e-8,
    side: str = "B",
) -> tuple[float, MeasurementAngles]:
    """Classical correlation by explicit minimisation over projective measurements.

    A ``theta x phi`` grid over ``[0, pi] x [0, 2 pi)`` is scanned, the first
    lexicographic minimum is taken, then coordinate descent alternates bounded
    scalar minimisations in ``theta`` and ``phi`` until both move by less than
    ``refine_tol``. Flat objectives return the grid minimum with
    ``unique=False``.

    Returns
    -------
    (float, MeasurementAngles)
        ``S(rho_A) - min S_{Pi}(A|B)`` in bits and the minimising direction.
    """
    n_theta, n_phi = int(grid[0]), int(grid[1])
    if n_theta < 8 or n_phi < 8:
        raise ValueError("grid sizes must be >= 8")
    r = _oriented(state, side)
    kept = partial_trace(np.asarray(state.matrix), keep=0 if side == "B" else 1)
    s_kept = von_neumann_entropy(np.linalg.eigvalsh(kept))

    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(thetas, phis, indexing="ij")
    values = _measured_entropy(r, t, p)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    best = float(values[i, j])
    theta, phi = float(thetas[i]), float(phis[j])

    if float(np.ptp(values)) < FLAT_TOL:
        return _clamp(s_kept - best), MeasurementAngles(theta, phi, unique=False)

    dt, dp = math.pi / (n_theta - 1), 2.0 * math.pi / n_phi

    def f_theta(x):
        return float(_measured_entropy(r, x, phi))

    def f_phi(x):
        return float(_measured_entropy(r, theta, x))

    for _ in range(50):
        lo, hi = max(0.0, theta - dt), min(math.pi, theta + dt)
        res = minimize_scalar(f_theta, bounds=(lo, hi), method="bounded", options={"xatol": refine_tol})
        new_theta = float(res.x) if res.fun < best else theta
        best = min(best, float(res.fun))
        theta, moved_t = new_theta, abs(new_theta - theta)
        res = minimize_scalar(f_phi, bounds=(phi - dp, phi + dp), method="bounded", options={"xatol": refine_tol})
        new_phi = float(res.x) if res.fun < best else phi
        best = min(best, float(res.fun))
        moved_p = abs(new_phi - phi)
        phi = new_phi
        if moved_t < refine_tol and moved_p < refine_tol:
            break
    return _clamp(s_kept - best), MeasurementAngles(theta, phi)


def quantum_discord(state: TwoSiteState, optimized: bool = False) -> float:
    """``I - C``; ``optimized=True`` uses the numerical classical correlation."""
    if optimized:
        c, _ = classical_correlation_optimized(state)
    else:
        c = classical_correlation_closed(state)
    return _clamp(mutual_information(state) - c)


_YY = np.kron(SIGMA_Y, SIGMA_Y)


def concurrence(state: TwoSiteState) -> float:
    """Wootters concurrence from the spectrum of ``rho (Y x Y) rho* (Y x Y)``.

    With ``rho = A A^dagger`` the square roots of that spectrum are the
    singular values of ``A^dagger (Y x Y) A*``. Taking them directly avoids
    square roots of rounding noise, which would cost ~1e-8 on pure states.
    """
    w, v = np.linalg.eigh(np.asarray(state.matrix))
    a = v * np.sqrt(np.clip(w, 0.0, None))
    roots = np.linalg.svd(a.conj().T @ _YY @ a.conj(), compute_uv=False)
    conc = float(roots[0] - roots[1] - roots[2] - roots[3])
    return conc if conc > CONCURRENCE_FLOOR else 0.0


def concurrence_x_state(state: TwoSiteState) -> float:
    """X-state shortcut ``2 max(0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44))``."""
    r = np.asarray(state.matrix)
    d = np.clip(np.real(np.diag(r)), 0.0, None)
    a = abs(r[0, 3]) - math.sqrt(d[1] * d[2])
    b = abs(r[1, 2]) - math.sqrt(d[0] * d[3])
    return float(2.0 * max(0.0, a, b))


def entanglement_of_formation(conc: float) -> float:
    """EoF in bits as a function of concurrence."""
    conc = min(max(float(conc), 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - conc * conc)))


def eof(state: TwoSiteState) -> float:
    return entanglement_of_formation(concurrence(state))


def report(state: TwoSiteState, verify: bool = False, grid: tuple[int, int] = DEFAULT_GRID) -> CorrelationReport:
    """Bundle every measure for one state.

    With ``verify=True`` the classical correlation is also computed by the
    optimizer; the report keeps the closed-form value and records the
    optimized one and its angles so callers can flag disagreements.
    """
    mi = mutual_information(state)
    c = classical_correlation_closed(state)
    conc = concurrence(state)
    angles, c_opt = X_MEASUREMENT, None
    if verify:
        c_opt, angles = classical_correlation_optimized(state, grid=grid)
    return CorrelationReport(
        mutual_information=mi,
        classical=c,
        discord=_clamp(mi - c),
        concurrence=conc,
        eof=entanglement_of_formation(conc),
        optimal_angles=angles,
        classical_optimized=c_opt,
    )
