"""Exact diagonalization of small periodic XY rings.

An independent check of the thermodynamic-limit formulas: the Hamiltonian is
built literally on ``N`` sites, diagonalized densely, and the Gibbs state is
reduced to two sites. Nothing here depends on :mod:`xydiscord.correlators`
except :func:`convergence_ladder`, which exists to compare the two.

Conventions
-----------
The closed-form integrals use ``tanh(omega / kT)`` with ``omega`` equal to a
quarter of the single-fermion excitation energy of the Hamiltonian, and report
``<sigma^z>`` with the opposite sign of the field term. Their states therefore
coincide with ``exp(-H / (2 kT))`` rotated by ``pi`` about x on every site.
The oracle applies exactly that mapping, so its output is directly comparable
(for instance ``<sigma^z> = -tanh(1 / (2 kT))`` at ``lam = 0``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .correlators import (
    DEFAULT_QUAD,
    CorrelatorSet,
    ModelParams,
    QuadratureConfig,
    correlator_set,
)
from .state import PAULI, TwoSiteState

__all__ = [
    "MIN_SITES",
    "MAX_SITES",
    "BETA_SCALE",
    "DegenerateGroundStateWarning",
    "FiniteChainSpec",
    "build_hamiltonian",
    "ground_energy_per_site",
    "thermal_matrix",
    "pauli_expectation",
    "gibbs_two_site_state",
    "ConvergenceRow",
    "convergence_ladder",
]

MIN_SITES = 4
MAX_SITES = 12
#: Boltzmann weight is ``exp(-BETA_SCALE * H / kT)``.
BETA_SCALE = 0.5
DEGENERACY_TOL = 1e-10
# Boltzmann weights below this fraction of the largest are dropped
WEIGHT_CUTOFF = 1e-18
# x-rotation on every site: sigma^y, sigma^z change sign
_FLIP_SIGN = (1.0, 1.0, -1.0, -1.0)


class DegenerateGroundStateWarning(UserWarning):
    """The finite ring has a (quasi-)degenerate ground space at ``kT = 0``."""


@dataclass(frozen=True)
class FiniteChainSpec:
    num_sites: int
    params: ModelParams

    def __post_init__(self):
        n = self.num_sites
        if int(n) != n:
            raise ValueError(f"num_sites must be an integer, got {n}")
        if n == 2:
            raise ValueError(
                "num_sites=2 is not allowed: on a periodic ring of two sites the "
                "bonds (0,1) and (1,0) are the same bond and would be counted twice"
            )
        if not MIN_SITES <= n <= MAX_SITES:
            raise ValueError(f"num_sites must lie in [{MIN_SITES}, {MAX_SITES}], got {n}")
        object.__setattr__(self, "num_sites", int(n))


def _bits(num_sites: int) -> np.ndarray:
    # bits[i, j] = occupation of site j in basis state i; site 0 is the most
    # significant bit and bit value 0 is spin up
    idx = np.arange(1 << num_sites)
    return (idx[:, None] >> (num_sites - 1 - np.arange(num_sites))) & 1


def build_hamiltonian(spec: FiniteChainSpec) -> np.ndarray:
    """Dense real matrix of the periodic ring Hamiltonian.

    ``H = -sum_j {(lam/2)[(1+g) X_j X_{j+1} + (1-g) Y_j Y_{j+1}] + Z_j}`` with
    ``j + 1`` taken mod ``N``. On a bond with equal spins the flip amplitude is
    ``-lam g``, on opposite spins ``-lam``.
    """
    n_sites = spec.num_sites
    gamma, lam = spec.params.gamma, spec.params.lam
    dim = 1 << n_sites
    idx = np.arange(dim)
    bits = _bits(n_sites)
    h = np.zeros((dim, dim))
    h[idx, idx] = -(n_sites - 2 * bits.sum(axis=1))
    for j in range(n_sites):
        k = (j + 1) % n_sites
        flipped = idx ^ (1 << (n_sites - 1 - j)) ^ (1 << (n_sites - 1 - k))
        same = bits[:, j] == bits[:, k]
        h[flipped, idx] -= np.where(same, lam * gamma, lam)
    return h


@lru_cache(maxsize=2)
def _eigensystem(num_sites: int, gamma: float, lam: float):
    """Eigenpairs in full-space coordinates, diagonalized per spin-flip parity.

    The couplings flip spins in pairs, so the Hamiltonian is block diagonal in
    the parity of the number of down spins.
    """
    h = build_hamiltonian(FiniteChainSpec(num_sites, ModelParams(gamma, lam, 0.0)))
    dim = h.shape[0]
    parity = _bits(num_sites).sum(axis=1) & 1
    energies = np.empty(dim)
    vectors = np.zeros((dim, dim))
    col = 0
    for p in (0, 1):
        block = np.flatnonzero(parity == p)
        e, v = np.linalg.eigh(h[np.ix_(block, block)])
        energies[col : col + len(block)] = e
        vectors[block, col : col + len(block)] = v
        col += len(block)
    order = np.argsort(energies, kind="stable")
    return energies[order], vectors[:, order]


def ground_energy_per_site(spec: FiniteChainSpec) -> float:
    energies, _ = _eigensystem(spec.num_sites, spec.params.gamma, spec.params.lam)
    return float(energies[0] / spec.num_sites)


def _weights(spec: FiniteChainSpec, energies: np.ndarray) -> np.ndarray:
    kT = spec.params.kT
    if kT == 0.0:
        ground = np.abs(energies - energies[0]) < DEGENERACY_TOL
        if ground.sum() > 1:
            warnings.warn(
                f"ground space of the N={spec.num_sites} ring is {int(ground.sum())}-fold "
                "degenerate; averaging over it",
                DegenerateGroundStateWarning,
                stacklevel=3,
            )
        return ground / ground.sum()
    if math.isinf(kT):
        return np.full(len(energies), 1.0 / len(energies))
    w = np.exp(-BETA_SCALE * (energies - energies[0]) / kT)
    return w / w.sum()


def thermal_matrix(vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Full-ring density matrix ``sum_k w_k |v_k><v_k|``.

    Weights below ``WEIGHT_CUTOFF`` times the largest are dropped.
    """
    keep = weights > WEIGHT_CUTOFF * weights.max()
    v = vectors[:, keep]
    return (v * weights[keep]) @ v.T


def pauli_expectation(rho: np.ndarray, num_sites: int, ops: dict[int, int]) -> float:
    """``Tr(rho P)`` for a Pauli string ``{site: 0..3}`` on a real symmetric ``rho``.

    The string acts on basis states as a bit flip times a phase, so no operator
    matrix is formed.
    """
    idx = np.arange(1 << num_sites)
    target = idx.copy()
    phase = np.ones(len(idx), dtype=complex)
    for site, op in ops.items():
        bit = (idx >> (num_sites - 1 - site)) & 1
        sign = 1 - 2 * bit
        if op in (1, 2):
            target = target ^ (1 << (num_sites - 1 - site))
        if op == 2:
            phase = phase * (1j * sign)
        elif op == 3:
            phase = phase * sign
    # P|i> = phase_i |target_i>, so Tr(rho P) = sum_i phase_i rho[i, target_i];
    # rho is real, so only Re(phase) survives in the real part
    return float(np.sum(phase.real * rho[idx, target]))


def gibbs_two_site_state(
    spec: FiniteChainSpec, n: int, reference_site: int = 0
) -> TwoSiteState:
    """Two-site reduced state of sites ``(r, r + n)`` in the thermal state.

    All 16 two-site Pauli expectations are evaluated and the state is
    reassembled from them, so off-X-structure entries are computed rather than
    assumed to vanish. At ``kT = 0`` the normalized projector onto the ground
    space is used; a :class:`DegenerateGroundStateWarning` is emitted when that
    space is degenerate.
    """
    n_sites = spec.num_sites
    if not 1 <= n <= n_sites - 1:
        raise ValueError(f"separation must lie in [1, {n_sites - 1}], got {n}")
    energies, vectors = _eigensystem(n_sites, spec.params.gamma, spec.params.lam)
    rho_ring = thermal_matrix(vectors, _weights(spec, energies))
    a, b = reference_site % n_sites, (reference_site + n) % n_sites

    expect = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            ops = {site: op for site, op in ((a, i), (b, j)) if op}
            value = pauli_expectation(rho_ring, n_sites, ops) if ops else 1.0
            expect[i, j] = _FLIP_SIGN[i] * _FLIP_SIGN[j] * value

    rho = 0.25 * sum(expect[i, j] * np.kron(PAULI[i], PAULI[j]) for i in range(4) for j in range(4))
    corr = CorrelatorSet(
        n=int(n), sz=expect[3, 0], sxx=expect[1, 1], syy=expect[2, 2], szz=expect[3, 3]
    )
    xi = np.linalg.eigvalsh(rho)[::-1]
    xi = np.where((xi < 0.0) & (xi > -1e-9), 0.0, xi)
    return TwoSiteState(correlators=corr, matrix=rho, xi=xi)


@dataclass(frozen=True)
class ConvergenceRow:
    num_sites: int
    finite: CorrelatorSet
    limit: CorrelatorSet

    @property
    def gap(self) -> float:
        """Largest absolute difference over the four correlators."""
        return max(abs(x - y) for x, y in zip(self.finite.as_tuple(), self.limit.as_tuple()))


def convergence_ladder(
    params: ModelParams,
    sizes=(6, 8, 10, 12),
    n: int = 1,
    quad_cfg: QuadratureConfig = DEFAULT_QUAD,
) -> list[ConvergenceRow]:
    """Finite-ring correlators next to the thermodynamic limit for each size."""
    limit = correlator_set(n, params, quad_cfg)
    rows = []
    for size in sizes:
        state = gibbs_two_site_state(FiniteChainSpec(size, params), n)
        rows.append(ConvergenceRow(num_sites=size, finite=state.correlators, limit=limit))
    return rows
