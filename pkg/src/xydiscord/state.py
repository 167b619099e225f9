"""Two-site reduced density matrix of the chain and its entropies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlators import CorrelatorSet
from .errors import NotPositive

__all__ = [
    "PAULI",
    "TwoSiteState",
    "binary_entropy",
    "von_neumann_entropy",
    "build_state",
    "single_site_entropy",
    "joint_entropy",
    "partial_trace",
]

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
#: Pauli basis ``(I, X, Y, Z)``; basis state 0 is spin up (``sigma^z = +1``).
PAULI = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)

# eigenvalues in [-CLAMP_TOL, 0) are quadrature dust; below -NEGATIVE_TOL is an error
CLAMP_TOL = 1e-9
NEGATIVE_TOL = 1e-6


def binary_entropy(p):
    """``-p log2 p - (1-p) log2 (1-p)`` with ``0 log 0 = 0``; accepts arrays."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(p > 0, p * np.log2(p), 0.0) - np.where(q > 0, q * np.log2(q), 0.0)
    h = h + 0.0  # no negative zero
    return h if h.ndim else float(h)


def von_neumann_entropy(eigenvalues) -> float:
    """Entropy in bits of a spectrum; zero eigenvalues contribute nothing."""
    ev = np.asarray(eigenvalues, dtype=float)
    ev = ev[ev > 0.0]
    return float(-np.sum(ev * np.log2(ev))) + 0.0


def _clamp_spectrum(ev: np.ndarray) -> np.ndarray:
    lowest = float(np.min(ev))
    if lowest < -NEGATIVE_TOL:
        raise NotPositive(
            f"density matrix has eigenvalue {lowest:.3e}; the correlator input is "
            "not a physical state (loose quadrature tolerance?)"
        )
    if lowest < -CLAMP_TOL:
        # between the two thresholds: keep the value, callers see it in xi
        return ev
    return np.where(ev < 0.0, 0.0, ev)


@dataclass(frozen=True, eq=False)
class TwoSiteState:
    """Density matrix of sites ``(0, n)`` in the basis ``|uu>, |ud>, |du>, |dd>``.

    ``xi`` holds the spectrum: the closed-form X-state eigenvalues for states
    built from correlators, or a numerical eigendecomposition for raw matrices.
    """

    correlators: CorrelatorSet
    matrix: np.ndarray
    xi: np.ndarray

    @classmethod
    def from_matrix(cls, rho, n: int | None = None) -> "TwoSiteState":
        """Wrap an arbitrary two-qubit density matrix.

        Correlators are read off the matrix (``sz`` from site 0), so measures
        that only use the matrix work for any state. The closed-form classical
        correlation is only meaningful for exchange-symmetric X-states.
        """
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=1e-12):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValueError("density matrix does not have unit trace")

        def ev(a, b):
            return float(np.trace(rho @ np.kron(a, b)).real)

        corr = CorrelatorSet(
            n=n,
            sz=ev(SIGMA_Z, IDENTITY),
            sxx=ev(SIGMA_X, SIGMA_X),
            syy=ev(SIGMA_Y, SIGMA_Y),
            szz=ev(SIGMA_Z, SIGMA_Z),
        )
        xi = _clamp_spectrum(np.linalg.eigvalsh(rho))[::-1].copy()
        return cls(correlators=corr, matrix=rho, xi=xi)

    @property
    def sz(self) -> float:
        return self.correlators.sz

    def reduced(self, site: int) -> np.ndarray:
        """Single-site density matrix of site 0 or site 1 (the partner at ``n``)."""
        return partial_trace(self.matrix, keep=site)


def partial_trace(rho: np.ndarray, keep: int) -> np.ndarray:
    """Trace a two-qubit matrix down to qubit ``keep`` (0 or 1)."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("abcb->ac", r)
    if keep == 1:
        return np.einsum("abad->bd", r)
    raise ValueError("keep must be 0 or 1")


def build_state(c: CorrelatorSet) -> TwoSiteState:
    """Assemble the two-site state from the magnetization and pair correlators.

    .. math::

        \\rho = \\tfrac14\\left[I + s_z(\\sigma^z\\otimes I + I\\otimes\\sigma^z)
              + \\sum_k \\langle\\sigma^k\\sigma^k\\rangle\\,\\sigma^k\\otimes\\sigma^k\\right]

    The spectrum comes from the X-state closed form
    ``xi_i = [1 + szz +- sqrt((sxx - syy)^2 + 4 sz^2)] / 4`` and
    ``xi_j = [1 - szz +- (sxx + syy)] / 4``.

    Raises
    ------
    NotPositive
        If an eigenvalue is below ``-1e-6``.
    """
    sz, sxx, syy, szz = c.as_tuple()
    rho = 0.25 * (
        np.kron(IDENTITY, IDENTITY)
        + sz * (np.kron(SIGMA_Z, IDENTITY) + np.kron(IDENTITY, SIGMA_Z))
        + sxx * np.kron(SIGMA_X, SIGMA_X)
        + syy * np.kron(SIGMA_Y, SIGMA_Y)
        + szz * np.kron(SIGMA_Z, SIGMA_Z)
    )
    root = np.sqrt((sxx - syy) ** 2 + 4.0 * sz * sz)
    xi = 0.25 * np.array(
        [
            1.0 + szz + root,
            1.0 + szz - root,
            1.0 - szz + (sxx + syy),
            1.0 - szz - (sxx + syy),
        ]
    )
    return TwoSiteState(correlators=c, matrix=rho, xi=_clamp_spectrum(xi))


def single_site_entropy(sz: float) -> float:
    """Entropy of a spin with magnetization ``sz``: ``H_bin((1 + sz) / 2)``."""
    return binary_entropy(0.5 * (1.0 + sz))


def joint_entropy(state: TwoSiteState) -> float:
    return von_neumann_entropy(state.xi)
