"""Jacobi theta functions and the elliptic parametrization of the vertex weights.

Theta functions take the nome ``q`` directly (Whittaker–Watson form). The weight
map receives the model's nome ``p`` and evaluates every theta function at
``p**2``.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass
from math import cos, pi, sin

import numpy as np

from . import hilbert, vertex
from .vertex import VertexWeights

SUSY_ETA = pi / 3
_SERIES_CAP = 10_000


def jacobi_theta(kind: int, u: float, q: float) -> float:
    """``ϑ_kind(u, q)`` by direct summation of its Fourier series."""
    if kind not in (1, 2, 3, 4):
        raise ValueError(f"theta kind must be 1..4, got {kind}")
    if not 0.0 <= q < 1.0:
        raise ValueError(f"nome must lie in [0, 1), got {q}")
    if q == 0.0:
        return {1: 0.0, 2: 0.0, 3: 1.0, 4: 1.0}[kind]
    if kind in (1, 2):
        total = 0.0
        for n in range(_SERIES_CAP):
            power = q ** ((n + 0.5) ** 2)
            if kind == 1:
                term = 2.0 * (-1) ** n * power * sin((2 * n + 1) * u)
            else:
                term = 2.0 * power * cos((2 * n + 1) * u)
            total += term
            # the bound uses q**(...) rather than |term| so that a zero of
            # sin/cos does not stop the sum early
            if 2.0 * q ** ((n + 1.5) ** 2) < 1e-16 * (abs(total) + 1.0):
                break
        return total
    total = 1.0
    sign = -1 if kind == 4 else 1
    for n in range(1, _SERIES_CAP):
        total += 2.0 * sign**n * q ** (n * n) * cos(2 * n * u)
        if 2.0 * q ** ((n + 1) ** 2) < 1e-16 * (abs(total) + 1.0):
            break
    return total


def theta1(u, q):
    return jacobi_theta(1, u, q)


def theta2(u, q):
    return jacobi_theta(2, u, q)


def theta3(u, q):
    return jacobi_theta(3, u, q)


def theta4(u, q):
    return jacobi_theta(4, u, q)


def parse_angle(text: str) -> float:
    """Radians from ``"0.7"``, ``"pi/3"``, ``"2*pi/5"`` or ``"pi"``."""
    s = text.strip().lower().replace(" ", "")
    try:
        return float(s)
    except ValueError:
        pass
    m = re.fullmatch(r"(?:([0-9.]+)\*?)?pi(?:/([0-9.]+))?", s)
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * pi / den


class VanishingWeightError(ValueError):
    """A weight of the elliptic parametrization is zero at the requested point."""


@dataclass(frozen=True)
class EllipticParams:
    eta: float = SUSY_ETA
    nome: float = 0.2
    u: float = 0.4
    rho: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.nome < 1.0:
            raise ValueError(f"nome must lie in [0, 1), got {self.nome}")
        if not all(np.isfinite([self.eta, self.u, self.rho])):
            raise ValueError("eta, u and rho must be finite")

    def at(self, u: float) -> "EllipticParams":
        return EllipticParams(self.eta, self.nome, u, self.rho)


def raw_weights(eta: float, nome: float, u: float, rho: float = 1.0) -> tuple[float, float, float, float]:
    q = nome * nome
    t1_2e, t4_2e = theta1(2 * eta, q), theta4(2 * eta, q)
    t1_u2e, t4_u2e = theta1(u + 2 * eta, q), theta4(u + 2 * eta, q)
    t1_u, t4_u = theta1(u, q), theta4(u, q)
    a = rho * t4_2e * t1_u2e * t4_u
    b = rho * t4_2e * t4_u2e * t1_u
    c = rho * t1_2e * t4_u2e * t4_u
    d = rho * t1_2e * t1_u2e * t1_u
    return a, b, c, d


def weights_from_elliptic(p: EllipticParams, allow_degenerate: bool = False) -> VertexWeights:
    """Vertex weights at ``(rho, eta, nome, u)``.

    Raises :class:`VanishingWeightError` when a weight is zero unless
    ``allow_degenerate`` is set (needed for ``u = 0`` and the six-vertex point
    ``nome = 0``).
    """
    w = raw_weights(p.eta, p.nome, p.u, p.rho)
    if not allow_degenerate:
        scale = max(abs(x) for x in w)
        if scale == 0 or any(abs(x) <= 1e-15 * scale for x in w):
            names = [n for n, x in zip("abcd", w) if abs(x) <= 1e-15 * max(scale, 1e-300)]
            raise VanishingWeightError(f"weight vanishes: {', '.join(names)} at {p}")
    return VertexWeights(*w)


def zeta_theta(eta: float, nome: float) -> float:
    q = nome * nome
    return (theta1(2 * eta, q) / theta4(2 * eta, q)) ** 2


def jz_theta(eta: float, nome: float) -> float:
    q = nome * nome
    if q == 0.0:
        # theta2 carries an overall q**(1/4); its ratio tends to cos(2 eta)
        return float(np.cos(2 * eta))
    num = theta2(2 * eta, q) * theta3(2 * eta, q) * theta4(0.0, q) ** 2
    den = theta2(0.0, q) * theta3(0.0, q) * theta4(2 * eta, q) ** 2
    return num / den


@dataclass
class ZetaJzReport:
    zeta_theta: float
    zeta_weights: float
    zeta_residual: float
    jz_theta: float
    jz_weights: float
    jz_residual: float
    susy_point: bool
    jz_susy_residual: float | None
    six_vertex: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _rel(x: float, y: float, floor: float = 0.0) -> float:
    scale = max(abs(x), abs(y), floor)
    return abs(x - y) / scale if scale > 0 else 0.0


def zeta_and_jz_consistency(p: EllipticParams) -> ZetaJzReport:
    """Theta-function forms of ``zeta`` and ``J_z`` against their weight forms.

    At ``eta = pi/3`` the supersymmetric relation ``J_z = (zeta² - 1)/2`` is also
    tested; ``nome = 0`` is reported as the excluded six-vertex point.
    """
    z_t = zeta_theta(p.eta, p.nome)
    jz_t = jz_theta(p.eta, p.nome)
    six = z_t == 0.0
    if six:
        return ZetaJzReport(z_t, 0.0, 0.0, jz_t, float("nan"), float("nan"), False, None, True)
    w = weights_from_elliptic(p)
    z_w = w.zeta
    jz_w = (w.a**2 + w.b**2 - w.c**2 - w.d**2) / (2 * w.a * w.b)
    susy_point = abs(p.eta - SUSY_ETA) < 1e-14
    # J_z is an O(1) coupling that passes through zero (eta = pi/4), so its
    # residuals are relative to max(|J_z|, 1)
    jz_susy = _rel(jz_t, (z_t**2 - 1) / 2, 1.0) if susy_point else None
    return ZetaJzReport(z_t, z_w, _rel(z_t, z_w), jz_t, jz_w, _rel(jz_t, jz_w, 1.0), susy_point, jz_susy, False)


def r_matrix_raw(eta: float, nome: float, u: float, rho: float = 1.0) -> np.ndarray:
    return vertex.r_matrix_array(VertexWeights(*raw_weights(eta, nome, u, rho)))


def yang_baxter_residual(eta: float, p: float, u: float, v: float, allow_degenerate: bool = True) -> float:
    """``|R12(u-v) R13(u) R23(v) - R23(v) R13(u) R12(u-v)|`` over the product of the three norms.

    Degenerate points (e.g. ``u = v``, where ``R(0)`` is a multiple of the
    permutation) are allowed by default; pass ``allow_degenerate=False`` to
    reject vanishing weights instead.
    """
    mats = []
    for x in (u - v, u, v):
        w = weights_from_elliptic(EllipticParams(eta, p, x), allow_degenerate=allow_degenerate)
        mats.append(vertex.r_matrix_array(w))
    R12 = vertex._embed_pair(3, 0, 1, mats[0]).toarray()
    R13 = vertex._embed_pair(3, 0, 2, mats[1]).toarray()
    R23 = vertex._embed_pair(3, 1, 2, mats[2]).toarray()
    diff = R12 @ R13 @ R23 - R23 @ R13 @ R12
    norm = np.prod([np.linalg.norm(m, 2) for m in mats])
    return float(np.linalg.norm(diff, 2) / norm)


def transfer_at(eta: float, nome: float, u: float, L: int, rho: float = 1.0) -> np.ndarray:
    return vertex.transfer_matrix_dense(VertexWeights(*raw_weights(eta, nome, u, rho)), L)


def commuting_residual(eta: float, nome: float, u: float, v: float, L: int, psi: np.ndarray) -> float:
    """``|[T(u), T(v)] psi| / (|psi| * scale(u) * scale(v))``."""
    wu = VertexWeights(*raw_weights(eta, nome, u))
    wv = VertexWeights(*raw_weights(eta, nome, v))
    Tu = vertex.transfer_matrix(wu, L)
    Tv = vertex.transfer_matrix(wv, L)
    r = Tu.apply(Tv.apply(psi)) - Tv.apply(Tu.apply(psi))
    return float(np.linalg.norm(r) / (np.linalg.norm(psi) * wu.scale(L) * wv.scale(L)))


def _richardson(f, h: float):
    """Central difference with one Richardson step: ``(4 D(h/2) - D(h)) / 3``."""

    def central(step):
        return (f(step) - f(-step)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


@dataclass
class TUZeroReport:
    L: int
    a0: float
    shift_residual: float
    log_derivative_residual: float
    couplings: tuple
    susy_couplings: tuple | None
    coupling_residuals: tuple | None

    def to_dict(self) -> dict:
        return asdict(self)


def weight_derivatives(eta: float, nome: float, rho: float = 1.0, h: float = 1e-4) -> np.ndarray:
    return np.asarray(_richardson(lambda x: np.array(raw_weights(eta, nome, x, rho)), h))


def derived_couplings(eta: float, nome: float, rho: float = 1.0, h: float = 1e-4) -> tuple[float, float, float]:
    da, db, dc, dd = weight_derivatives(eta, nome, rho, h)
    return 1 + dd / db, 1 - dd / db, (da - dc) / db


def tu_zero_checks(eta: float, p: float, L: int, rho: float = 1.0, h: float = 1e-4) -> TUZeroReport:
    """``T(0) = a(0)^L S`` and the logarithmic derivative of ``T`` at ``u = 0``.

    ``T'(0)`` and the weight derivatives come from central differences with a
    Richardson step; the XYZ couplings are the derived ones.
    """
    L = hilbert._check_length(L, 2)
    a0 = raw_weights(eta, p, 0.0, rho)[0]
    if a0 == 0:
        raise ValueError("a(0) vanishes")
    T0 = transfer_at(eta, p, 0.0, L, rho)
    S = hilbert.translation(L).to_dense()
    shift = float(np.linalg.norm(T0 - a0**L * S, 2) / abs(a0) ** L)

    dT = _richardson(lambda x: transfer_at(eta, p, x, L, rho), h)
    da, db, dc, dd = weight_derivatives(eta, p, rho, h)
    Jx, Jy, Jz = 1 + dd / db, 1 - dd / db, (da - dc) / db
    H = hilbert.xyz_matrix(L, Jx, Jy, Jz).toarray()
    lhs = np.linalg.solve(T0, dT)
    rhs = L * (da + dc) / (2 * a0) * np.eye(1 << L) - (db / a0) * H
    logd = float(np.linalg.norm(lhs - rhs, 2) / max(np.linalg.norm(rhs, 2), 1e-300))

    susy_c = coupling_res = None
    if abs(eta - SUSY_ETA) < 1e-14 and p > 0:
        susy_c = hilbert.susy_couplings(zeta_theta(eta, p))
        coupling_res = tuple(abs(x - y) for x, y in zip((Jx, Jy, Jz), susy_c))
    return TUZeroReport(L, a0, shift, logd, (Jx, Jy, Jz), susy_c, coupling_res)


def random_susy_weights(rng: np.random.Generator, nome_range=(0.05, 0.6), u_range=(0.05, 1.0)) -> VertexWeights:
    """Elliptic weights at ``eta = pi/3`` with random nome and spectral parameter.

    For ``0 < u < pi/3`` every weight is positive.
    """
    nome = rng.uniform(*nome_range)
    u = rng.uniform(*u_range)
    return weights_from_elliptic(EllipticParams(SUSY_ETA, nome, u))
