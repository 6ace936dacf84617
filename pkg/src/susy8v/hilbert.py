"""Spin-1/2 chains: basis encoding, linear maps, symmetry operators, XYZ Hamiltonian.

Basis convention used everywhere in the package: bit ``j - 1`` of a basis code
describes site ``j`` (sites are numbered from 1), and a set bit means spin down.
Vectors are complex arrays of length ``2**L`` indexed by that code; operators
accept either a single vector or a 2D block whose columns are vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

UP = "↑"
DOWN = "↓"
_SPIN_CHARS = {UP: 0, "u": 0, "U": 0, "+": 0, DOWN: 1, "d": 1, "D": 1, "-": 1}

DEFAULT_DENSE_LIMIT = 12

ArrayLike = Union[np.ndarray, sp.spmatrix]


def dim(L: int) -> int:
    return 1 << L


def _check_length(L: int, minimum: int = 1) -> int:
    if int(L) != L or L < minimum:
        raise ValueError(f"chain length must be an integer >= {minimum}, got {L!r}")
    return int(L)


@dataclass(frozen=True)
class SpinState:
    """A basis configuration of ``length`` spins encoded as an integer ``code``."""

    length: int
    code: int

    def __post_init__(self):
        _check_length(self.length)
        if not 0 <= self.code < (1 << self.length):
            raise ValueError(f"code {self.code} out of range for L={self.length}")

    @classmethod
    def from_label(cls, label: str) -> "SpinState":
        label = label.strip().strip("|>⟩")
        if not label:
            raise ValueError("empty spin label")
        code = 0
        for j, ch in enumerate(label):
            try:
                bit = _SPIN_CHARS[ch]
            except KeyError:
                raise ValueError(f"invalid spin character {ch!r} in {label!r}") from None
            code |= bit << j
        return cls(len(label), code)

    @property
    def spins(self) -> tuple[int, ...]:
        return tuple((self.code >> j) & 1 for j in range(self.length))

    @property
    def label(self) -> str:
        return "".join(DOWN if s else UP for s in self.spins)

    @property
    def ascii_label(self) -> str:
        return "".join("d" if s else "u" for s in self.spins)

    @property
    def n_down(self) -> int:
        return int(self.code).bit_count()

    @property
    def n_up(self) -> int:
        return self.length - self.n_down

    def vector(self) -> np.ndarray:
        v = np.zeros(dim(self.length), dtype=complex)
        v[self.code] = 1.0
        return v

    def __str__(self) -> str:
        return f"|{self.label}⟩"


def basis_state(label: Union[str, SpinState]) -> np.ndarray:
    """Unit vector for a label such as ``"↑↓↑"`` or ``"udu"``."""
    state = label if isinstance(label, SpinState) else SpinState.from_label(label)
    return state.vector()


def all_up(L: int) -> np.ndarray:
    v = np.zeros(dim(L), dtype=complex)
    v[0] = 1.0
    return v


def random_state(L: int, rng: np.random.Generator, normalize: bool = True) -> np.ndarray:
    psi = rng.standard_normal(dim(L)) + 1j * rng.standard_normal(dim(L))
    if normalize:
        psi /= np.linalg.norm(psi)
    return psi


def chain_length(psi: np.ndarray) -> int:
    n = np.shape(psi)[0]
    L = n.bit_length() - 1
    if n < 2 or (1 << L) != n:
        raise ValueError(f"vector dimension {n} is not a power of two >= 2")
    return L


@lru_cache(maxsize=None)
def codes(L: int) -> np.ndarray:
    return np.arange(dim(L), dtype=np.int64)


@lru_cache(maxsize=None)
def down_counts(L: int) -> np.ndarray:
    return np.bitwise_count(codes(L)).astype(np.int64)


class LinearMap:
    """Linear operator from the chain of ``length_in`` sites to ``length_out`` sites.

    ``kind`` is ``"dense"``, ``"sparse"`` or ``"matrix-free"``. Stored matrices are
    indexed ``[out_code, in_code]``. Matrix-free maps carry ``func`` and, when
    available, ``adjoint_func``. Maps are treated as immutable.
    """

    __slots__ = ("length_in", "length_out", "kind", "matrix", "func", "adjoint_func", "name")

    def __init__(
        self,
        length_in: int,
        length_out: int,
        kind: str,
        matrix: Optional[ArrayLike] = None,
        func: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        adjoint_func: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        name: str = "",
    ):
        if kind not in ("dense", "sparse", "matrix-free"):
            raise ValueError(f"unknown LinearMap kind {kind!r}")
        if kind == "matrix-free" and func is None:
            raise ValueError("matrix-free map needs an apply function")
        if kind != "matrix-free":
            if matrix is None:
                raise ValueError(f"{kind} map needs a matrix")
            if matrix.shape != (dim(length_out), dim(length_in)):
                raise ValueError(
                    f"matrix shape {matrix.shape} does not match lengths {length_in}->{length_out}"
                )
        self.length_in = length_in
        self.length_out = length_out
        self.kind = kind
        self.matrix = matrix
        self.func = func
        self.adjoint_func = adjoint_func
        self.name = name

    @classmethod
    def dense(cls, matrix: np.ndarray, length_in: int, length_out: Optional[int] = None, name=""):
        length_out = length_in if length_out is None else length_out
        return cls(length_in, length_out, "dense", matrix=np.asarray(matrix), name=name)

    @classmethod
    def sparse(cls, matrix, length_in: int, length_out: Optional[int] = None, name=""):
        length_out = length_in if length_out is None else length_out
        return cls(length_in, length_out, "sparse", matrix=sp.csr_matrix(matrix), name=name)

    @classmethod
    def matrix_free(cls, func, length_in: int, length_out: Optional[int] = None, adjoint_func=None, name=""):
        length_out = length_in if length_out is None else length_out
        return cls(length_in, length_out, "matrix-free", func=func, adjoint_func=adjoint_func, name=name)

    @property
    def shape(self) -> tuple[int, int]:
        return dim(self.length_out), dim(self.length_in)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<LinearMap{label} {self.kind} L={self.length_in}->{self.length_out}>"

    def apply(self, psi: np.ndarray) -> np.ndarray:
        x = np.asarray(psi)
        if x.shape[0] != dim(self.length_in):
            raise ValueError(f"{self!r} cannot act on a vector of dimension {x.shape[0]}")
        if not np.iscomplexobj(x):
            x = x.astype(complex)
        if self.matrix is not None:
            return np.asarray(self.matrix @ x)
        return self.func(x)

    __call__ = apply

    def apply_adjoint(self, psi: np.ndarray) -> np.ndarray:
        x = np.asarray(psi)
        if x.shape[0] != dim(self.length_out):
            raise ValueError(f"adjoint of {self!r} cannot act on dimension {x.shape[0]}")
        if not np.iscomplexobj(x):
            x = x.astype(complex)
        if self.matrix is not None:
            return np.asarray(self.matrix.conj().T @ x)
        if self.adjoint_func is None:
            raise NotImplementedError(f"{self!r} has no adjoint")
        return self.adjoint_func(x)

    def adjoint(self) -> "LinearMap":
        name = f"{self.name}†" if self.name else ""
        if self.kind == "dense":
            return LinearMap.dense(self.matrix.conj().T, self.length_out, self.length_in, name=name)
        if self.kind == "sparse":
            return LinearMap.sparse(self.matrix.conj().T, self.length_out, self.length_in, name=name)
        if self.adjoint_func is None:
            raise NotImplementedError(f"{self!r} has no adjoint")
        return LinearMap.matrix_free(
            self.adjoint_func, self.length_out, self.length_in, adjoint_func=self.func, name=name
        )

    @property
    def H(self) -> "LinearMap":
        return self.adjoint()

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return compose(self, other)
        return self.apply(other)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return linear_combination([(1.0, self), (-1.0, other)])

    def __mul__(self, scalar) -> "LinearMap":
        return linear_combination([(scalar, self)])

    __rmul__ = __mul__

    def __neg__(self) -> "LinearMap":
        return linear_combination([(-1.0, self)])

    def to_dense(self) -> np.ndarray:
        if self.kind == "dense":
            return np.asarray(self.matrix)
        if self.kind == "sparse":
            return self.matrix.toarray()
        return self.apply(np.eye(dim(self.length_in), dtype=complex))

    def to_sparse(self) -> sp.csr_matrix:
        if self.kind == "sparse":
            return self.matrix
        return sp.csr_matrix(self.to_dense())

    def materialize(self, dense_limit: int = DEFAULT_DENSE_LIMIT) -> "LinearMap":
        """Store the map explicitly (dense) when both lengths are within ``dense_limit``."""
        if self.kind != "matrix-free" or max(self.length_in, self.length_out) > dense_limit:
            return self
        return LinearMap.dense(self.to_dense(), self.length_in, self.length_out, name=self.name)

    def as_scipy(self) -> spla.LinearOperator:
        rmatvec = None
        if self.matrix is not None or self.adjoint_func is not None:
            rmatvec = self.apply_adjoint
        return spla.LinearOperator(
            self.shape, matvec=self.apply, rmatvec=rmatvec, matmat=self.apply, dtype=complex
        )


def compose(*maps: LinearMap) -> LinearMap:
    """``compose(A, B, C)`` acts as ``A @ B @ C`` (rightmost first), evaluated lazily."""
    for left, right in zip(maps, maps[1:]):
        if left.length_in != right.length_out:
            raise ValueError(f"cannot compose {left!r} after {right!r}")
    maps = tuple(maps)

    def func(x):
        for m in reversed(maps):
            x = m.apply(x)
        return x

    has_adj = all(m.matrix is not None or m.adjoint_func is not None for m in maps)

    def adjoint_func(x):
        for m in maps:
            x = m.apply_adjoint(x)
        return x

    return LinearMap.matrix_free(
        func,
        maps[-1].length_in,
        maps[0].length_out,
        adjoint_func=adjoint_func if has_adj else None,
        name="∘".join(m.name for m in maps if m.name),
    )


def linear_combination(terms) -> LinearMap:
    """Lazy sum ``sum(c * A for c, A in terms)``."""
    terms = [(complex(c), m) for c, m in terms]
    first = terms[0][1]
    for _, m in terms:
        if (m.length_in, m.length_out) != (first.length_in, first.length_out):
            raise ValueError("cannot add maps between different spaces")

    def func(x):
        return sum(c * m.apply(x) for c, m in terms)

    has_adj = all(m.matrix is not None or m.adjoint_func is not None for _, m in terms)

    def adjoint_func(x):
        return sum(np.conj(c) * m.apply_adjoint(x) for c, m in terms)

    return LinearMap.matrix_free(
        func, first.length_in, first.length_out, adjoint_func=adjoint_func if has_adj else None
    )


def identity(L: int) -> LinearMap:
    return LinearMap.sparse(sp.identity(dim(L), dtype=complex, format="csr"), L, name="1")


# ---------------------------------------------------------------------------
# symmetry operators
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _translation_targets(L: int) -> np.ndarray:
    c = codes(L)
    mask = dim(L) - 1
    return ((c << 1) & mask) | (c >> (L - 1))


def _permutation_matrix(targets: np.ndarray, weights=None) -> sp.csr_matrix:
    n = targets.size
    data = np.ones(n, dtype=complex) if weights is None else np.asarray(weights, dtype=complex)
    return sp.csr_matrix((data, (targets, np.arange(n))), shape=(n, n))


def translate(psi: np.ndarray, power: int = 1) -> np.ndarray:
    """Cyclic shift ``|s1 ... s_{L-1} s_L> -> |s_L s1 ... s_{L-1}>`` applied ``power`` times."""
    L = chain_length(psi)
    out = np.asarray(psi)
    power %= L
    if power == 0:
        return out.copy()
    targets = _translation_targets(L)
    for _ in range(power):
        nxt = np.empty_like(out)
        nxt[targets] = out
        out = nxt
    return out


def translation(L: int) -> LinearMap:
    _check_length(L)
    return LinearMap.sparse(_permutation_matrix(_translation_targets(L)), L, name="S")


@lru_cache(maxsize=None)
def parity_signs(L: int) -> np.ndarray:
    """Diagonal of the spin parity: ``(-1)**(number of up spins)``."""
    n_up = L - down_counts(L)
    return np.where(n_up % 2 == 0, 1.0, -1.0)


def parity_apply(psi: np.ndarray) -> np.ndarray:
    L = chain_length(psi)
    x = np.asarray(psi)
    signs = parity_signs(L)
    return signs * x if x.ndim == 1 else signs[:, None] * x


def parity(L: int) -> LinearMap:
    _check_length(L)
    return LinearMap.sparse(sp.diags(parity_signs(L).astype(complex), format="csr"), L, name="P")


def reversal_apply(psi: np.ndarray) -> np.ndarray:
    L = chain_length(psi)
    x = np.asarray(psi)
    return x[codes(L) ^ (dim(L) - 1)]


def reversal(L: int) -> LinearMap:
    _check_length(L)
    c = codes(L)
    return LinearMap.sparse(_permutation_matrix(c ^ (dim(L) - 1)), L, name="R")


def m_lambda_diagonal(L: int, lam: complex) -> np.ndarray:
    if lam == 0:
        raise ValueError("m(lambda) is only invertible for lambda != 0")
    k = down_counts(L)
    return np.asarray(lam, dtype=complex) ** (L + k)


def m_lambda_apply(lam: complex, psi: np.ndarray) -> np.ndarray:
    """Scale each basis state with ``u`` up and ``k`` down spins by ``lam**(u + 2k)``."""
    L = chain_length(psi)
    x = np.asarray(psi)
    d = m_lambda_diagonal(L, lam)
    return d * x if x.ndim == 1 else d[:, None] * x


def m_lambda(L: int, lam: complex) -> LinearMap:
    _check_length(L)
    return LinearMap.sparse(sp.diags(m_lambda_diagonal(L, lam), format="csr"), L, name="M")


def sector_sign(L: int) -> int:
    """Translation eigenvalue ``(-1)**(L+1)`` of the alternate-cyclic sector."""
    return 1 if L % 2 else -1


@lru_cache(maxsize=None)
def _alternate_cyclic_matrix(L: int) -> sp.csr_matrix:
    eps = sector_sign(L)
    n = dim(L)
    rows, cols, vals = [], [], []
    src = codes(L)
    cur = src
    targets = _translation_targets(L)
    for k in range(L):
        rows.append(cur)
        cols.append(src)
        vals.append(np.full(n, float(eps**k) / L))
        cur = targets[cur]
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat.astype(complex)


def alternate_cyclic_projector(L: int) -> LinearMap:
    """Orthogonal projector onto states with translation eigenvalue ``(-1)**(L+1)``."""
    _check_length(L)
    return LinearMap.sparse(_alternate_cyclic_matrix(L), L, name="P_W")


@lru_cache(maxsize=None)
def alternate_cyclic_basis(L: int) -> sp.csc_matrix:
    """Orthonormal basis of the alternate-cyclic sector, one column per admissible orbit.

    Each column is the normalized orbit sum ``sum_k eps**k S**k |r>`` of an orbit
    representative ``r``; orbits whose period ``p`` has ``eps**p != 1`` drop out.
    """
    _check_length(L)
    eps = sector_sign(L)
    targets = _translation_targets(L)
    seen = np.zeros(dim(L), dtype=bool)
    rows, cols, vals = [], [], []
    col = 0
    for r in range(dim(L)):
        if seen[r]:
            continue
        orbit = [r]
        c = targets[r]
        while c != r:
            orbit.append(int(c))
            c = targets[c]
        seen[orbit] = True
        period = len(orbit)
        if eps**period != 1:
            continue
        amp = np.array([eps**k for k in range(period)], dtype=float) / np.sqrt(period)
        rows.extend(orbit)
        cols.extend([col] * period)
        vals.extend(amp)
        col += 1
    return sp.csc_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim(L), col))


# ---------------------------------------------------------------------------
# XYZ Hamiltonian
# ---------------------------------------------------------------------------


def susy_couplings(zeta: float) -> tuple[float, float, float]:
    """Couplings ``(1 + zeta, 1 - zeta, (zeta**2 - 1) / 2)`` of the supersymmetric line."""
    return 1.0 + zeta, 1.0 - zeta, 0.5 * (zeta * zeta - 1.0)


def ground_energy(L: int, zeta: float) -> float:
    return -L * (3.0 + zeta * zeta) / 4.0


def xyz_matrix(L: int, Jx: float, Jy: float, Jz: float) -> sp.csr_matrix:
    L = _check_length(L, 2)
    c = codes(L)
    n = dim(L)
    diag = np.zeros(n)
    rows, cols, vals = [], [], []
    for j in range(L):
        k = (j + 1) % L
        bj = (c >> j) & 1
        bk = (c >> k) & 1
        equal = bj == bk
        # sigma^z sigma^z is +1 on equal spins; sigma^y sigma^y flips with -1 on equal spins
        diag += np.where(equal, 1.0, -1.0) * Jz
        amp = Jx + np.where(equal, -1.0, 1.0) * Jy
        keep = amp != 0
        rows.append((c ^ ((1 << j) | (1 << k)))[keep])
        cols.append(c[keep])
        vals.append(amp[keep])
    off = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    mat = (-0.5 * (sp.diags(diag) + off)).tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat.astype(complex)


def xyz_hamiltonian(L: int, Jx: float, Jy: float, Jz: float) -> LinearMap:
    """Periodic XYZ chain ``-1/2 sum_j (Jx XX + Jy YY + Jz ZZ)`` as a sparse map."""
    return LinearMap.sparse(xyz_matrix(L, Jx, Jy, Jz), L, name="H_XYZ")


def xyz_hamiltonian_susy(L: int, zeta: float) -> LinearMap:
    return xyz_hamiltonian(L, *susy_couplings(zeta))
