"""Lattice supersymmetry of the XYZ chain on the supersymmetric line.

The supercharge maps a chain of ``L`` sites to ``L + 1`` sites by inserting the
local map ``q|↑> = 0, q|↓> = |↑↑> - zeta|↓↓>`` at alternating positions. It acts
only on the alternate-cyclic sector; the composition with the sector projector
is kept lazy so the projector is never densified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import sqrt
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from . import hilbert
from .hilbert import LinearMap, compose, dim

KERNEL_THRESHOLD = 1e-9


class FalsificationError(RuntimeError):
    """A numerical outcome contradicts a proven statement; points at an implementation bug."""


def _check_zeta(zeta: float) -> float:
    if zeta == 0:
        raise ValueError("zeta must be non-zero")
    return zeta


def local_supercharge(zeta: float) -> LinearMap:
    """The single-site map ``q``: ``|↑> -> 0``, ``|↓> -> |↑↑> - zeta |↓↓>``."""
    _check_zeta(zeta)
    mat = np.zeros((4, 2), dtype=complex)
    mat[0b00, 1] = 1.0
    mat[0b11, 1] = -zeta
    return LinearMap.dense(mat, 1, 2, name="q")


@lru_cache(maxsize=None)
def _insertion_pattern(L: int, j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Columns with site ``j`` down and their images with ``q`` inserted at ``j``, ``j+1``."""
    c = hilbert.codes(L)
    src = c[(c >> (j - 1)) & 1 == 1]
    low = src & ((1 << (j - 1)) - 1)
    high = src >> j
    base = low | (high << (j + 1))
    return src, base, base | (0b11 << (j - 1))


def insertion_matrix(L: int, j: int, zeta: float) -> sp.csr_matrix:
    """Sparse matrix of ``q_j`` from ``L`` to ``L + 1`` sites, ``j = 0 .. L``.

    ``q_0`` is built literally as the translation of the longer chain after
    inserting at the last site.
    """
    if j == 0:
        return (hilbert.translation(L + 1).matrix @ insertion_matrix(L, L, zeta)).tocsr()
    if not 1 <= j <= L:
        raise ValueError(f"insertion site {j} outside 0..{L}")
    src, up_up, down_down = _insertion_pattern(L, j)
    rows = np.concatenate([up_up, down_down])
    cols = np.concatenate([src, src])
    vals = np.concatenate([np.ones(src.size), np.full(src.size, -zeta)]).astype(complex)
    return sp.csr_matrix((vals, (rows, cols)), shape=(dim(L + 1), dim(L)))


def insertion(L: int, j: int, zeta: float) -> LinearMap:
    _check_zeta(zeta)
    return LinearMap.sparse(insertion_matrix(L, j, zeta), L, L + 1, name=f"q_{j}")


@lru_cache(maxsize=64)
def _alternating_sum(L: int, zeta: float) -> sp.csr_matrix:
    total = insertion_matrix(L, 0, zeta)
    for j in range(1, L + 1):
        total = total + (-1) ** j * insertion_matrix(L, j, zeta)
    total = sqrt(L / (L + 1)) * total
    total.sum_duplicates()
    total.eliminate_zeros()
    return total.tocsr()


def supercharge(L: int, zeta: float) -> LinearMap:
    """Supercharge from ``L`` to ``L + 1`` sites.

    ``sqrt(L/(L+1)) * sum_j (-1)**j q_j`` composed with the alternate-cyclic
    projector, so the map vanishes outside that sector.
    """
    L = hilbert._check_length(L)
    _check_zeta(zeta)
    qsum = LinearMap.sparse(_alternating_sum(L, zeta), L, L + 1, name="Σq")
    Q = compose(qsum, hilbert.alternate_cyclic_projector(L))
    Q.name = "Q"
    return Q


def supercharge_adjoint(L: int, zeta: float) -> LinearMap:
    """Adjoint supercharge acting on ``L`` sites, i.e. the adjoint of the supercharge at ``L - 1``."""
    L = hilbert._check_length(L, 2)
    return supercharge(L - 1, zeta).adjoint()


@dataclass(frozen=True)
class SuperchargeSet:
    L: int
    zeta: float
    Q_up: LinearMap
    Q_down_adjoint: Optional[LinearMap]

    @classmethod
    def build(cls, L: int, zeta: float) -> "SuperchargeSet":
        down = supercharge_adjoint(L, zeta) if L >= 2 else None
        return cls(L, zeta, supercharge(L, zeta), down)


def susy_hamiltonian(L: int, zeta: float) -> LinearMap:
    """``Q†Q + QQ†`` on ``L`` sites; zero off the alternate-cyclic sector."""
    L = hilbert._check_length(L, 2)
    _check_zeta(zeta)
    up = supercharge(L, zeta)
    down = supercharge(L - 1, zeta)
    H = compose(up.adjoint(), up) + compose(down, down.adjoint())
    H.name = "H"
    return H


# ---------------------------------------------------------------------------
# representative states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepresentativePair:
    n: int
    zeta: float
    phi: np.ndarray
    phi_bar: np.ndarray

    @property
    def L(self) -> int:
        return 2 * self.n + 1


def _representative_closed_form(n: int, zeta: float) -> tuple[np.ndarray, np.ndarray]:
    L = 2 * n + 1
    k = hilbert.down_counts(L)
    odd = k % 2 == 1
    z = complex(zeta)
    phi = np.where(odd, z ** ((k - 1) // 2), 0.0).astype(complex)
    phi_bar = np.where(~odd, z ** (k // 2), 0.0).astype(complex)
    return phi, phi_bar


def trivial_representatives(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform superposition projected to parity ``+1`` and ``-1``."""
    L = 2 * n + 1
    uniform = np.ones(dim(L), dtype=complex)
    p = hilbert.parity_apply(uniform)
    return 0.5 * (uniform + p), 0.5 * (uniform - p)


def representative_states_literal(n: int, zeta: float) -> RepresentativePair:
    """Representatives obtained by rescaling the trivial ones with ``M(sqrt(zeta))``; needs ``zeta > 0``."""
    if zeta <= 0:
        raise ValueError("the sqrt(zeta) construction needs zeta > 0")
    phi0, phibar0 = trivial_representatives(n)
    s = sqrt(zeta)
    phi = zeta ** (-(n + 1)) * hilbert.m_lambda_apply(s, phi0)
    phi_bar = zeta ** (-(n + 0.5)) * hilbert.m_lambda_apply(s, phibar0)
    return RepresentativePair(n, zeta, phi, phi_bar)


def representative_states(n: int, zeta: float) -> RepresentativePair:
    """Polynomial representatives on ``2n + 1`` sites, valid for every non-zero ``zeta``.

    A state with ``k`` down spins has amplitude ``zeta**((k-1)/2)`` in ``phi`` when
    ``k`` is odd and ``zeta**(k/2)`` in ``phi_bar`` when ``k`` is even.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    _check_zeta(zeta)
    phi, phi_bar = _representative_closed_form(int(n), zeta)
    return RepresentativePair(int(n), zeta, phi, phi_bar)


def check_annihilation(n: int, zeta: float) -> dict[str, float]:
    """Relative norms of ``Q Φ(ζ)``, ``Q Φ̄(ζ)``, ``Q† Φ(1/ζ)``, ``Q† Φ̄(1/ζ)``."""
    L = 2 * n + 1
    rep = representative_states(n, zeta)
    inv = representative_states(n, 1.0 / zeta)
    Q = supercharge(L, zeta)
    Qd = supercharge_adjoint(L, zeta)

    def rel(op, v):
        return float(np.linalg.norm(op.apply(v)) / np.linalg.norm(v))

    return {
        "Q_phi": rel(Q, rep.phi),
        "Q_phi_bar": rel(Q, rep.phi_bar),
        "Qdag_phi_inv": rel(Qd, inv.phi),
        "Qdag_phi_bar_inv": rel(Qd, inv.phi_bar),
    }


# ---------------------------------------------------------------------------
# zero-energy states
# ---------------------------------------------------------------------------


@dataclass
class ZeroEnergyPair:
    n: int
    zeta: float
    psi: np.ndarray
    psi_bar: np.ndarray
    sector_spectrum: np.ndarray = field(repr=False)
    coefficients: dict = field(default_factory=dict)

    @property
    def L(self) -> int:
        return 2 * self.n + 1


@dataclass
class SectorKernel:
    """Kernel of the SUSY Hamiltonian restricted to the alternate-cyclic sector."""

    L: int
    zeta: float
    dimension: int
    gap: float
    spectrum: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)


def restricted_hamiltonian(L: int, zeta: float) -> tuple[np.ndarray, sp.csc_matrix]:
    """Dense ``B† H B`` for the orthonormal alternate-cyclic basis ``B``."""
    B = hilbert.alternate_cyclic_basis(L)
    H = susy_hamiltonian(L, zeta)
    HB = H.apply(B.toarray())
    h = np.asarray(B.conj().T @ HB)
    return 0.5 * (h + h.conj().T), B


def sector_kernel(L: int, zeta: float, threshold: float = KERNEL_THRESHOLD) -> SectorKernel:
    h, B = restricted_hamiltonian(L, zeta)
    if h.shape[0] == 0:
        return SectorKernel(L, zeta, 0, np.inf, np.zeros(0), np.zeros((dim(L), 0), dtype=complex))
    w, v = np.linalg.eigh(h)
    scale = max(np.abs(w).max(), 1.0)
    zero = np.abs(w) < threshold * scale
    gap = float(w[~zero].min()) if (~zero).any() else np.inf
    vectors = np.asarray(B @ v[:, zero])
    return SectorKernel(L, zeta, int(zero.sum()), gap, w, vectors)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    return v / np.linalg.norm(v)


def zero_energy_states(L: int, zeta: float, threshold: float = KERNEL_THRESHOLD) -> Optional[ZeroEnergyPair]:
    """Alternate-cyclic zero-energy states, or ``None`` for even ``L``.

    For odd ``L`` the two kernel vectors are rotated into the parity basis, the
    parity ``+1`` state is phase-fixed to be real and non-negative where possible,
    and the partner is defined as its spin reversal.
    """
    kern = sector_kernel(L, zeta, threshold)
    expected = 2 if L % 2 else 0
    if kern.dimension != expected:
        raise FalsificationError(
            f"kernel of H on the alternate-cyclic sector has dimension {kern.dimension} "
            f"for L={L}, zeta={zeta}; expected {expected}"
        )
    if expected == 0:
        return None
    V = kern.vectors
    p_small = V.conj().T @ hilbert.parity_apply(V)
    w, u = np.linalg.eigh(0.5 * (p_small + p_small.conj().T))
    if not (abs(w[0] + 1) < 1e-8 and abs(w[1] - 1) < 1e-8):
        raise FalsificationError(f"kernel is not split by parity into +1/-1 (eigenvalues {w})")
    psi = _fix_phase(V @ u[:, 1])
    psi_bar = hilbert.reversal_apply(psi)
    return ZeroEnergyPair((L - 1) // 2, zeta, psi, psi_bar, kern.spectrum)


@lru_cache(maxsize=32)
def _orthonormal_range(L_in: int, zeta: float, adjoint: bool) -> np.ndarray:
    """Orthonormal basis of the image of the supercharge from ``L_in`` sites (or of its adjoint onto ``L_in``)."""
    if adjoint:
        M = supercharge(L_in, zeta).adjoint().to_dense()
    else:
        M = supercharge(L_in, zeta).to_dense()
    U, s, _ = sla.svd(M, full_matrices=False)
    rank = int((s > 1e-10 * max(s.max(), 1.0)).sum())
    return U[:, :rank]


def image_residual(v: np.ndarray, zeta: float, adjoint: bool = False, reference: float = 1.0) -> float:
    """Norm of the part of ``v`` orthogonal to ``image(Q)`` (or ``image(Q†)``), divided by ``reference``."""
    L = hilbert.chain_length(v)
    U = _orthonormal_range(L if adjoint else L - 1, zeta, adjoint)
    rest = v - U @ (U.conj().T @ v)
    return float(np.linalg.norm(rest) / reference)


def overlap_coefficients(
    pair: ZeroEnergyPair,
    reps: Optional[RepresentativePair] = None,
    reps_inv: Optional[RepresentativePair] = None,
    floor: float = 1e-8,
) -> dict[str, complex]:
    """Overlaps of the zero-energy pair with the representatives at ``zeta`` and ``1/zeta``."""
    n, zeta = pair.n, pair.zeta
    reps = reps or representative_states(n, zeta)
    reps_inv = reps_inv or representative_states(n, 1.0 / zeta)
    scale = 4.0**-n
    coeffs = {
        "lambda": scale * np.vdot(reps_inv.phi, pair.psi),
        "lambda_bar": scale * np.vdot(reps_inv.phi_bar, pair.psi_bar),
        "mu": scale * np.vdot(reps.phi, pair.psi),
        "mu_bar": scale * np.vdot(reps.phi_bar, pair.psi_bar),
        "nu": np.vdot(reps_inv.phi_bar, pair.psi_bar),
    }
    for name in ("lambda", "lambda_bar", "mu", "mu_bar", "nu"):
        if abs(coeffs[name]) < floor * np.linalg.norm(pair.psi):
            raise FalsificationError(f"overlap coefficient {name} vanishes: {coeffs[name]}")
    pair.coefficients = coeffs
    return coeffs


def decomposition_residuals(pair: ZeroEnergyPair, coeffs: Optional[dict] = None) -> dict[str, float]:
    """How far each representative decomposition is from holding exactly.

    Removes the representative term from each zero-energy state and measures the
    part of the remainder outside the image of ``Q`` (or ``Q†``).
    """
    n, zeta = pair.n, pair.zeta
    coeffs = coeffs or overlap_coefficients(pair)
    reps = representative_states(n, zeta)
    reps_inv = representative_states(n, 1.0 / zeta)
    up = hilbert.all_up(pair.L)
    ref = float(np.linalg.norm(pair.psi))
    return {
        "psi_cohomology": image_residual(pair.psi - coeffs["lambda"] * reps.phi, zeta, reference=ref),
        "psi_bar_cohomology": image_residual(
            pair.psi_bar - coeffs["lambda_bar"] * reps.phi_bar, zeta, reference=ref
        ),
        "psi_homology": image_residual(
            pair.psi - coeffs["mu"] * reps_inv.phi, zeta, adjoint=True, reference=ref
        ),
        "psi_bar_homology": image_residual(
            pair.psi_bar - coeffs["mu_bar"] * reps_inv.phi_bar, zeta, adjoint=True, reference=ref
        ),
        "psi_bar_all_up": image_residual(pair.psi_bar - coeffs["nu"] * up, zeta, reference=ref),
    }

