"""Eight-vertex R-matrix, periodic transfer matrix and the eigenvalue ``(a+b)**L``.

The auxiliary space ``V_0`` is handled explicitly: matrix-free applies carry a
leading axis of length 2 for it, and the local-identity check embeds it as an
extra site (bit 0) in front of the chain.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Iterator, Optional

import numpy as np
import scipy.sparse as sp

from . import hilbert, spectral, susy
from .hilbert import DEFAULT_DENSE_LIMIT, LinearMap, dim


class ConstraintError(ValueError):
    """Weights do not lie on (or cannot be mapped onto) the supersymmetric manifold."""


@dataclass(frozen=True)
class VertexWeights:
    """Vertex weights ``a, b, c, d``.

    Construction does not enforce the supersymmetric constraint so that
    off-manifold quadruples can be used as negative controls; call
    :meth:`require_supersymmetric` where the constraint matters.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not all(np.isfinite([self.a, self.b, self.c, self.d])):
            raise ValueError(f"vertex weights must be finite: {self}")

    @classmethod
    def parse(cls, text: str) -> "VertexWeights":
        """``"a,b,c,d"`` literally, or ``"a,b,c"`` with ``d`` solved from the constraint."""
        parts = [float(x) for x in text.replace(" ", "").split(",") if x]
        if len(parts) == 4:
            return cls(*parts)
        if len(parts) == 3:
            return solve_d(*parts)
        raise ValueError(f"expected 3 or 4 comma-separated weights, got {text!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def zeta(self) -> float:
        return self.c * self.d / (self.a * self.b)

    @property
    def theta_base(self) -> float:
        return self.a + self.b

    def constraint_sides(self) -> tuple[float, float]:
        a, b, c, d = self.as_tuple()
        ab = a * b
        return (a * a + ab) * (b * b + ab), (c * c + ab) * (d * d + ab)

    def constraint_residual(self) -> float:
        """``|lhs - rhs| / max(|lhs|, |rhs|)`` for ``(a²+ab)(b²+ab) = (c²+ab)(d²+ab)``."""
        lhs, rhs = self.constraint_sides()
        scale = max(abs(lhs), abs(rhs))
        return abs(lhs - rhs) / scale if scale > 0 else 0.0

    def nonzero(self) -> bool:
        return all(x != 0 for x in self.as_tuple())

    def require_supersymmetric(self, tol: float = 1e-10) -> "VertexWeights":
        if not self.nonzero():
            raise ConstraintError(f"all weights must be non-zero: {self.as_tuple()}")
        r = self.constraint_residual()
        if r > tol:
            raise ConstraintError(f"weights {self.as_tuple()} violate the constraint (residual {r:.3e})")
        return self

    def scale(self, L: int) -> float:
        return (abs(self.a) + abs(self.b) + abs(self.c) + abs(self.d)) ** L


def solve_d(a: float, b: float, c: float) -> VertexWeights:
    """Positive ``d`` completing ``(a, b, c)`` to a supersymmetric quadruple."""
    if a == 0 or b == 0 or c == 0:
        raise ConstraintError("a, b and c must be non-zero")
    ab = a * b
    denom = c * c + ab
    if denom == 0:
        raise ZeroDivisionError("c² + ab vanishes; d is undetermined")
    radicand = (a * a + ab) * (b * b + ab) / denom - ab
    if radicand <= 0:
        raise ConstraintError(f"no real positive d for (a, b, c) = ({a}, {b}, {c}); radicand {radicand:.6g}")
    return VertexWeights(a, b, c, sqrt(radicand))


def random_weights(rng: np.random.Generator, low: float = 0.25, high: float = 4.0, max_tries: int = 1000) -> VertexWeights:
    """Log-uniform ``(a, b, c)`` in ``[low, high]`` completed by :func:`solve_d`."""
    for _ in range(max_tries):
        a, b, c = np.exp(rng.uniform(np.log(low), np.log(high), size=3))
        try:
            return solve_d(float(a), float(b), float(c))
        except ConstraintError:
            continue
    raise RuntimeError("could not sample a constrained quadruple")


def r_matrix_array(w: VertexWeights) -> np.ndarray:
    """4x4 R-matrix in the basis ``|↑↑>, |↑↓>, |↓↑>, |↓↓>`` (first factor most significant)."""
    a, b, c, d = w.as_tuple()
    return np.array(
        [[a, 0, 0, d], [0, b, c, 0], [0, c, b, 0], [d, 0, 0, a]],
        dtype=float,
    )


def r_matrix(w: VertexWeights) -> LinearMap:
    # the matrix is invariant under exchanging the two factors, so it reads the
    # same in the package's site-1-least-significant encoding
    return LinearMap.dense(r_matrix_array(w), 2, 2, name="R")


def _local_blocks(w: VertexWeights) -> np.ndarray:
    """``W[α', α]`` = 2x2 operator on a chain site, from ``<α' s'|R|α s>``."""
    R = r_matrix_array(w).reshape(2, 2, 2, 2)  # [α', s', α, s]
    return R.transpose(0, 2, 1, 3)  # [α', α, s', s]


def transfer_matrix_dense(w: VertexWeights, L: int) -> np.ndarray:
    """Dense ``tr_0(R_0L ... R_01)`` assembled by Kronecker products of the local blocks."""
    L = hilbert._check_length(L)
    W = _local_blocks(w)
    M = [[W[x, y] for y in range(2)] for x in range(2)]
    for _ in range(2, L + 1):
        M = [[sum(np.kron(W[x, g], M[g][y]) for g in range(2)) for y in range(2)] for x in range(2)]
    return M[0][0] + M[1][1]


def transfer_apply(w: VertexWeights, psi: np.ndarray) -> np.ndarray:
    """Matrix-free transfer matrix: sweep the sites with the auxiliary index explicit."""
    x = np.asarray(psi)
    L = hilbert.chain_length(x)
    vec = x.ndim == 1
    if vec:
        x = x[:, None]
    ncol = x.shape[1]
    R = r_matrix_array(w).reshape(2, 2, 2, 2)  # [α', s', α, s]
    out = np.zeros(x.shape, dtype=complex)
    for alpha in range(2):
        state = np.zeros((2,) + x.shape, dtype=complex)
        state[alpha] = x
        for j in range(1, L + 1):
            s = state.reshape(2, 1 << (L - j), 2, 1 << (j - 1), ncol)
            s = np.einsum("pqas,ahslc->phqlc", R, s, optimize=True)
            state = s.reshape((2,) + x.shape)
        out += state[alpha]
    return out[:, 0] if vec else out


def transfer_matrix(w: VertexWeights, L: int, dense_limit: int = DEFAULT_DENSE_LIMIT) -> LinearMap:
    """Periodic transfer matrix on ``L`` sites; dense up to ``dense_limit``, matrix-free above."""
    L = hilbert._check_length(L)
    if L <= dense_limit:
        return LinearMap.dense(transfer_matrix_dense(w, L), L, name="T")
    W = VertexWeights(w.a, w.b, w.c, w.d)

    def func(x):
        return transfer_apply(W, x)

    # T is real, so its adjoint is the transfer matrix of the transposed R, which equals R
    def adjoint(x):
        return np.conj(transfer_apply_transpose(W, np.conj(x)))

    return LinearMap.matrix_free(func, L, adjoint_func=adjoint, name="T")


def transfer_apply_transpose(w: VertexWeights, psi: np.ndarray) -> np.ndarray:
    """``T^t psi``: the auxiliary sweep in reverse order with transposed local blocks."""
    x = np.asarray(psi)
    L = hilbert.chain_length(x)
    vec = x.ndim == 1
    if vec:
        x = x[:, None]
    ncol = x.shape[1]
    Rt = r_matrix_array(w).reshape(2, 2, 2, 2).transpose(2, 1, 0, 3)  # aux transposed: [α, s', α', s]
    Rt = Rt.transpose(0, 3, 2, 1)  # site transposed too: [α, s, α', s'] -> full transpose of R
    out = np.zeros(x.shape, dtype=complex)
    for alpha in range(2):
        state = np.zeros((2,) + x.shape, dtype=complex)
        state[alpha] = x
        for j in range(L, 0, -1):
            s = state.reshape(2, 1 << (L - j), 2, 1 << (j - 1), ncol)
            s = np.einsum("pqas,ahslc->phqlc", Rt, s, optimize=True)
            state = s.reshape((2,) + x.shape)
        out += state[alpha]
    return out[:, 0] if vec else out


# ---------------------------------------------------------------------------
# local identity and TQ relation
# ---------------------------------------------------------------------------


def a_operator_array(w: VertexWeights) -> np.ndarray:
    """4x2 matrix of ``A: V -> V ⊗ V`` in the basis ``|↑↑>, |↑↓>, |↓↑>, |↓↓>`` (first factor most significant)."""
    a, b, c, d = w.as_tuple()
    if a == 0 or b == 0:
        raise ValueError("the A-operator needs a != 0 and b != 0")
    A = np.zeros((4, 2))
    A[0b01, 0] = -d * c / a
    A[0b10, 0] = d
    A[0b00, 1] = c
    A[0b11, 1] = -c * d / b
    return A


def _paper_to_codes_pair(M: np.ndarray) -> np.ndarray:
    """Reorder rows from (first factor most significant) to (first factor = bit 0)."""
    return M[[0b00, 0b10, 0b01, 0b11]]


def a_operator(w: VertexWeights) -> LinearMap:
    """``A`` as a map from one site to two; the label's first character is the first factor."""
    return LinearMap.dense(_paper_to_codes_pair(a_operator_array(w)), 1, 2, name="A")


def _embed_pair(n_sites: int, i: int, j: int, M4: np.ndarray) -> sp.csr_matrix:
    """4x4 operator (index ``2*b_i + b_j``) acting on bits ``i`` and ``j`` of an ``n_sites`` register."""
    c = hilbert.codes(n_sites)
    bi, bj = (c >> i) & 1, (c >> j) & 1
    rest = c & ~((1 << i) | (1 << j))
    rows, cols, vals = [], [], []
    for out in range(4):
        oi, oj = out >> 1, out & 1
        amp = M4[out, 2 * bi + bj]
        keep = amp != 0
        rows.append((rest | (oi << i) | (oj << j))[keep])
        cols.append(c[keep])
        vals.append(amp[keep])
    n = dim(n_sites)
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )


def local_identity_residual(w: VertexWeights) -> float:
    """``|R02 R01 q1 + (a+b) q1 R01 - A0² R01 - R02 A0¹|`` (spectral norm) on ``V0 ⊗ V¹``.

    The auxiliary space is bit 0, chain site ``j`` is bit ``j``; ``q`` uses
    ``zeta = cd/ab``.
    """
    a, b, c, d = w.as_tuple()
    zeta = w.zeta
    R = r_matrix_array(w)
    R01_small = _embed_pair(2, 0, 1, R)  # V0 ⊗ V1
    R01 = _embed_pair(3, 0, 1, R)
    R02 = _embed_pair(3, 0, 2, R)
    # q on chain site 1 of V0 ⊗ V^1 -> V0 ⊗ V^2 is an insertion at bit 1 of the register
    q1 = susy.insertion_matrix(2, 2, zeta)
    A = a_operator_array(w)  # rows: 2*aux' + new site
    A01 = np.zeros((8, 4))
    A02 = np.zeros((8, 4))
    for aux in range(2):
        for s1 in range(2):
            col = aux | (s1 << 1)
            for out in range(4):
                aux_o, new = out >> 1, out & 1
                A01[aux_o | (new << 1) | (s1 << 2), col] += A[out, aux]
                # A0² = S A0¹ S⁻¹: the inserted site becomes chain site 2
                A02[aux_o | (s1 << 1) | (new << 2), col] += A[out, aux]
    lhs = R02 @ R01 @ q1 + (a + b) * (q1 @ R01_small)
    rhs = A02 @ R01_small.toarray() + R02 @ A01
    diff = np.asarray(lhs.toarray() - rhs)
    return float(np.linalg.norm(diff, 2))


def check_local_identity(w: VertexWeights, perturb: float = 0.01) -> dict:
    """Residual of the local identity at ``w`` and at ``d * (1 + perturb)`` (off the manifold)."""
    broken = VertexWeights(w.a, w.b, w.c, w.d * (1 + perturb))
    return {
        "residual": local_identity_residual(w),
        "perturbed_residual": local_identity_residual(broken),
        "constraint_residual": w.constraint_residual(),
        "perturbed_constraint_residual": broken.constraint_residual(),
    }


def tq_residual(w: VertexWeights, L: int, psi: np.ndarray, dense_limit: int = DEFAULT_DENSE_LIMIT) -> float:
    """``|T_{L+1} Q psi + (a+b) Q T_L psi| / (|psi| * (|a|+|b|+|c|+|d|)**L)``."""
    Q = susy.supercharge(L, w.zeta)
    T_small = transfer_matrix(w, L, dense_limit)
    T_big = transfer_matrix(w, L + 1, dense_limit)
    r = T_big.apply(Q.apply(psi)) + w.theta_base * Q.apply(T_small.apply(psi))
    return float(np.linalg.norm(r) / (np.linalg.norm(psi) * w.scale(L)))


def check_tq_anticommutation(w: VertexWeights, L: int, samples: int = 3, seed: int = 0) -> float:
    """Largest scale-normalized residual of ``TQ + (a+b)QT`` over random states."""
    if L < 2:
        raise ValueError("TQ check needs L >= 2")
    rng = np.random.default_rng(seed)
    return max(tq_residual(w, L, hilbert.random_state(L, rng)) for _ in range(samples))


# ---------------------------------------------------------------------------
# word sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WordWeight:
    word: str
    weight: float


def words(a: float, b: float, length: int) -> Iterator[WordWeight]:
    """Every word over ``{a, b}`` of the given length with its product weight."""
    value = {"a": a, "b": b}
    for letters in itertools.product("ab", repeat=length):
        yield WordWeight("".join(letters), float(np.prod([value[x] for x in letters])))


def _alternating_weight(first: float, second: float, xs: tuple[int, ...], L: int) -> float:
    w = 1.0
    for i in range(len(xs) - 1):
        w *= (first if i % 2 == 0 else second) ** (xs[i + 1] - xs[i])
    return w * second ** (L - (xs[-1] - xs[0]))


def word_sum(a: float, b: float, n: int) -> float:
    """``a^L + b^L + sum_m sum_{x_1<...<x_2m} (α + δ)`` evaluated literally, ``L = 2n + 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    L = 2 * n + 1
    total = a**L + b**L
    for m in range(1, n + 1):
        for xs in itertools.combinations(range(1, L + 1), 2 * m):
            total += _alternating_weight(a, b, xs, L) + _alternating_weight(b, a, xs, L)
    return total


def word_sum_bruteforce(a: float, b: float, n: int) -> float:
    return sum(ww.weight for ww in words(a, b, 2 * n + 1))


@lru_cache(maxsize=None)
def _alternating_exponents(L: int) -> np.ndarray:
    """Histogram over all even-size position tuples of ``e = (x2-x1) + (x4-x3) + ...``.

    ``α = first**e * second**(L-e)``, so the tuple sum only depends on this
    histogram. A tuple is a bit mask; site ``p`` contributes to ``e`` exactly
    when an odd number of positions ``<= p`` are selected.
    """
    masks = np.arange(1 << L, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(L)) & 1
    even = (bits.sum(axis=1) % 2 == 0) & (masks != 0)
    inside = np.cumsum(bits[even], axis=1) % 2
    return np.bincount(inside.sum(axis=1), minlength=L + 1)


def word_sum_fast(a: float, b: float, n: int, exact: bool = False):
    """Same tuple sum as :func:`word_sum`, grouped by the exponent of the first letter.

    With ``exact=True`` the inputs are converted to :class:`fractions.Fraction`
    and the sum is returned as an exact rational.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    L = 2 * n + 1
    counts = _alternating_exponents(L)
    if exact:
        fa, fb = Fraction(a), Fraction(b)
        total = fa**L + fb**L
        for e, k in enumerate(counts.tolist()):
            total += k * (fa**e * fb ** (L - e) + fb**e * fa ** (L - e))
        return total
    e = np.arange(L + 1)
    terms = counts * (np.power(a, e) * np.power(b, L - e) + np.power(b, e) * np.power(a, L - e))
    return float(a**L + b**L + terms.sum())


def word_weights(a: float, b: float, L: int) -> np.ndarray:
    """Weights of all ``2**L`` words (bit set = letter ``b``), vectorized enumeration."""
    nb = hilbert.down_counts(L)
    return np.power(float(a), L - nb) * np.power(float(b), nb)


# ---------------------------------------------------------------------------
# eigenvalue checks
# ---------------------------------------------------------------------------


def theta(w: VertexWeights, L: int) -> float:
    return w.theta_base**L


def theta_matrix_element(w: VertexWeights, n: int, dense_limit: int = DEFAULT_DENSE_LIMIT) -> float:
    """``<Φ̄_n(1/ζ)| T |↑...↑>``, which equals ``(a+b)**(2n+1)``."""
    if w.a + w.b == 0:
        raise ValueError("a + b = 0 is only reachable as a limit")
    L = 2 * n + 1
    reps = susy.representative_states(n, 1.0 / w.zeta)
    T = transfer_matrix(w, L, dense_limit)
    return complex(np.vdot(reps.phi_bar, T.apply(hilbert.all_up(L)))).real


def rayleigh_quotient(T: LinearMap, v: np.ndarray) -> complex:
    return complex(np.vdot(v, T.apply(v)) / np.vdot(v, v))


def parity_sector_codes(L: int, sign: int) -> np.ndarray:
    return np.flatnonzero(hilbert.parity_signs(L) == sign)


def sector_spectra(T: np.ndarray, L: int, max_dim: int = spectral.GENERAL_DIM_LIMIT) -> np.ndarray:
    """Full spectrum of a parity-preserving matrix as the union of its two parity blocks."""
    vals = []
    for sign in (1, -1):
        idx = parity_sector_codes(L, sign)
        block = T[np.ix_(idx, idx)]
        vals.append(spectral.eig_dense_general(block, max_dim=max_dim, vectors=False).eigenvalues)
    return np.concatenate(vals)


@dataclass
class StroganovReport:
    weights: tuple
    n: int
    L: int
    theta: float
    multiplicity: int
    separation: float
    cluster_tol: float
    nearest_distance: float
    susy_checked: bool = False
    cross_residuals: list = field(default_factory=list)
    translation_residuals: list = field(default_factory=list)
    xyz_residuals: list = field(default_factory=list)
    rayleigh: list = field(default_factory=list)
    passed: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def stroganov_check(
    w: VertexWeights,
    n: int,
    cluster_tol: float = 1e-8,
    separation: float = 10.0,
    residual_tol: float = 1e-10,
    dense_limit: int = 11,
    with_susy: bool = True,
) -> StroganovReport:
    """Check that ``(a+b)**L`` is a doubly degenerate eigenvalue spanned by the SUSY ground states.

    The spectrum is computed blockwise in the two parity sectors. When
    ``with_susy`` is set and ``zeta != 0`` the alternate-cyclic zero-energy pair
    is built and tested as an eigenbasis of ``T``, of the translation and of
    the XYZ Hamiltonian.
    """
    L = 2 * n + 1
    if L > dense_limit:
        raise spectral.BudgetError(f"L={L} above the dense limit {dense_limit}; use largest_eigenvalue_check")
    target = theta(w, L)
    Tmat = transfer_matrix_dense(w, L)
    spec = sector_spectra(Tmat, L)
    tol = cluster_tol * max(abs(target), 1e-300)
    mult, gap = spectral.isolated_cluster(spec, target, tol, separation)
    nearest = float(np.min(np.abs(spec - target)) / max(abs(target), 1e-300))
    report = StroganovReport(w.as_tuple(), n, L, target, mult, gap, tol, nearest)
    ok = mult == 2 and gap > separation * tol
    if with_susy and w.nonzero():
        zeta = w.zeta
        pair = susy.zero_energy_states(L, zeta)
        HX = hilbert.xyz_hamiltonian_susy(L, zeta)
        E0 = hilbert.ground_energy(L, zeta)
        for v in (pair.psi, pair.psi_bar):
            Tv = Tmat @ v
            report.cross_residuals.append(float(np.linalg.norm(Tv - target * v) / abs(target)))
            report.translation_residuals.append(float(np.linalg.norm(hilbert.translate(v) - v)))
            report.xyz_residuals.append(float(np.linalg.norm(HX.apply(v) - E0 * v)))
            report.rayleigh.append(float(np.vdot(v, Tv).real / np.vdot(v, v).real))
        report.susy_checked = True
        ok = ok and max(report.cross_residuals) < residual_tol
        ok = ok and max(report.translation_residuals) < 1e-10
        ok = ok and max(report.xyz_residuals) < 1e-10 * max(1.0, abs(E0))
    report.passed = bool(ok)
    return report


@dataclass
class LargestEigenvalueReport:
    weights: tuple
    n: int
    L: int
    theta: float
    sector_values: dict
    iterations: dict
    min_component: dict
    relative_errors: dict
    free_energy_difference: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def largest_eigenvalue_check(
    w: VertexWeights,
    n: int,
    tol: float = 1e-8,
    maxiter: int = 5000,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> LargestEigenvalueReport:
    """Power iteration in each parity sector for strictly positive weights.

    The start vector is the (positive, translation-invariant) indicator of the
    sector, so iterates stay inside it.
    """
    if not all(x > 0 for x in w.as_tuple()):
        raise ValueError("largest-eigenvalue check needs strictly positive weights")
    L = 2 * n + 1
    T = transfer_matrix(w, L, dense_limit)
    target = theta(w, L)
    # scale out the expected growth so iterates stay O(1)
    scale = 1.0 / target

    def apply(v):
        return scale * T.apply(v)

    values, iters, mins, errs = {}, {}, {}, {}
    for label, sign in (("+", 1), ("-", -1)):
        v0 = (hilbert.parity_signs(L) == sign).astype(complex)
        res = spectral.power_iteration(apply, v0, tol=min(tol, 1e-10) * 0.1, maxiter=maxiter)
        lam = res.value.real / scale
        v = res.vector
        k = int(np.argmax(np.abs(v)))
        v = v * (abs(v[k]) / v[k])
        support = v[hilbert.parity_signs(L) == sign]
        values[label] = lam
        iters[label] = res.iterations
        mins[label] = float(support.real.min() / np.abs(support).max())
        errs[label] = abs(lam - target) / abs(target)
    lead = max(values.values())
    free = abs(np.log(lead) / L - np.log(w.a + w.b))
    ok = all(e < tol for e in errs.values()) and all(m > 0 for m in mins.values()) and free < tol
    return LargestEigenvalueReport(w.as_tuple(), n, L, target, values, iters, mins, errs, float(free), bool(ok))


@dataclass
class ContinuityReport:
    eps: float
    L: int
    entries: list
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def continuity_check(L: int = 3, eps: float = 1e-3, c: float = 1.5, scale_tol: float = 1e-12) -> ContinuityReport:
    """Follow the ``(a+b)**L`` pair through ``a + b = ±eps`` with ``a = 1`` and ``d`` solved.

    Near ``a + b = 0`` the eigenvalue is tiny compared with the entries of
    ``T``, so clustering and residuals are measured against
    ``(|a|+|b|+|c|+|d|)**L`` rather than ``|Θ|``.
    """
    if L % 2 == 0:
        raise ValueError("continuity check needs odd L")
    entries, ok = [], True
    for sign in (1, -1):
        w = solve_d(1.0, -1.0 + sign * eps, c)
        target = theta(w, L)
        Tmat = transfer_matrix_dense(w, L)
        spec = sector_spectra(Tmat, L)
        tol = scale_tol * w.scale(L)
        mult, gap = spectral.isolated_cluster(spec, target, tol)
        pair = susy.zero_energy_states(L, w.zeta)
        resid = max(
            float(np.linalg.norm(Tmat @ v - target * v) / (np.linalg.norm(v) * w.scale(L)))
            for v in (pair.psi, pair.psi_bar)
        )
        good = mult == 2 and gap > 10 * tol and resid < 1e-10 and np.sign(target) == sign
        ok = ok and good
        entries.append(
            {"sign": sign, "weights": w.as_tuple(), "theta": target, "multiplicity": mult,
             "separation": gap, "cluster_tol": tol, "residual": resid, "passed": bool(good)}
        )
    return ContinuityReport(eps, L, entries, bool(ok))
