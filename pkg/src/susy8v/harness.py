"""Named verification suites, per-check records and JSON reports.

A suite never stops at a failing check: exceptions raised inside a check are
recorded as a failure with the error message. Configuration problems are
detected by :func:`validate_config` before anything runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterable, Optional

import numpy as np

from . import __version__, elliptic, hilbert, spectral, susy, vertex
from .elliptic import SUSY_ETA, EllipticParams
from .vertex import VertexWeights

SCHEMA_VERSION = "1.0"

SUITES = (
    "constraint",
    "local-identity",
    "nilpotency",
    "tq-anticommutation",
    "stroganov",
    "ground-state",
    "kernel-law",
    "elliptic",
    "yang-baxter",
    "word-sum",
    "largest-eigenvalue",
)
WEIGHT_SOURCES = ("explicit", "solve-d", "elliptic")

DEFAULT_TOLERANCES = {
    "constraint": 1e-10,
    "local_identity": 1e-12,
    "local_identity_converse": 1e-4,
    "nilpotency": 1e-11,
    "tq": 1e-10,
    "cluster": 1e-8,
    "cross_residual": 1e-10,
    "matrix_element": 1e-10,
    "ground_state": 1e-10,
    "kernel": susy.KERNEL_THRESHOLD,
    "elliptic_constraint": 1e-10,
    "elliptic_identity": 1e-11,
    "elliptic_negative": 1e-4,
    "tu_shift": 1e-10,
    "tu_log": 1e-7,
    "couplings": 1e-9,
    "commuting": 1e-10,
    "yang_baxter": 1e-10,
    "word_sum": 1e-12,
    "largest": 1e-8,
}

DEFAULT_ZETAS = (0.3, 1.0, 2.5, -1.2)


class ConfigError(ValueError):
    """Invalid suite configuration; reported before any check runs."""


@dataclass
class SuiteConfig:
    suite: str = "all"
    L_list: list = field(default_factory=lambda: [3, 5])
    weight_source: str = "solve-d"
    weights: Optional[tuple] = None
    elliptic_params: Optional[dict] = None
    zetas: list = field(default_factory=lambda: list(DEFAULT_ZETAS))
    samples: int = 3
    seed: int = spectral.DEFAULT_SEED
    tolerance_overrides: dict = field(default_factory=dict)
    dense_limit: int = 11
    n_max: Optional[int] = None
    allow_unconstrained: bool = False

    def tolerance(self, key: str) -> float:
        return float(self.tolerance_overrides.get(key, DEFAULT_TOLERANCES[key]))

    def suites(self) -> list[str]:
        return list(SUITES) if self.suite == "all" else [self.suite]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["weights"] = list(self.weights) if self.weights is not None else None
        return d


@dataclass
class CheckRecord:
    name: str
    inputs: dict
    value: object
    tolerance: object
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "value": self.value,
            "tolerance": self.tolerance,
            "verdict": "pass" if self.passed else "fail",
            "details": self.details,
        }


@dataclass
class VerificationReport:
    config: dict
    checks: list
    suites: dict
    environment: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_suites(self) -> set[str]:
        return {s for s, v in self.suites.items() if v == "fail"}

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "suites": dict(sorted(self.suites.items())),
            "environment": self.environment,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self, include_timestamp: bool = True) -> str:
        d = self.to_dict()
        if not include_timestamp:
            d["environment"] = {k: v for k, v in d["environment"].items() if k != "timestamp"}
        return json.dumps(to_jsonable(d), sort_keys=True, indent=2, allow_nan=False) + "\n"


def report_schema() -> dict:
    """The JSON schema shipped with the package (``report_schema.json``)."""
    from importlib.resources import files

    return json.loads(files(__package__).joinpath("report_schema.json").read_text(encoding="utf-8"))


def to_jsonable(x):
    """Plain JSON types; non-finite floats become the strings ``"nan"``, ``"inf"``, ``"-inf"``."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        if x.imag == 0:
            return to_jsonable(float(x.real))
        return {"re": to_jsonable(float(x.real)), "im": to_jsonable(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        f = float(x)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return x


def spectrum_csv(clusters: Iterable[tuple[complex, int]]) -> str:
    """Clustered spectrum as CSV with columns ``re, im, multiplicity``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "multiplicity"])
    for value, mult in clusters:
        writer.writerow([repr(float(np.real(value))), repr(float(np.imag(value))), int(mult)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def validate_config(cfg: SuiteConfig) -> None:
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    if not cfg.L_list:
        raise ConfigError("L_list must be non-empty")
    if any(not isinstance(L, (int, np.integer)) or L < 1 for L in cfg.L_list):
        raise ConfigError(f"chain lengths must be positive integers: {cfg.L_list}")
    if cfg.samples < 1:
        raise ConfigError("samples must be >= 1")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if cfg.weight_source not in WEIGHT_SOURCES:
        raise ConfigError(f"unknown weight source {cfg.weight_source!r}")
    if cfg.weight_source == "explicit" and cfg.weights is None:
        raise ConfigError("weight source 'explicit' needs weights")
    unknown = set(cfg.tolerance_overrides) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ConfigError(f"unknown tolerance keys: {', '.join(sorted(unknown))}")
    if any(not (float(v) > 0) for v in cfg.tolerance_overrides.values()):
        raise ConfigError("tolerances must be positive")
    if any(z == 0 for z in cfg.zetas) or not cfg.zetas:
        raise ConfigError("zeta values must be non-zero and at least one must be given")
    if cfg.weights is not None:
        w = VertexWeights(*cfg.weights)
        if not w.nonzero():
            raise ConfigError(f"all weights must be non-zero: {cfg.weights}")
        if not cfg.allow_unconstrained and w.constraint_residual() > cfg.tolerance("constraint"):
            raise ConfigError(
                f"weights {cfg.weights} violate the constraint (residual {w.constraint_residual():.3e}); "
                "pass --allow-unconstrained for negative controls"
            )
    if cfg.elliptic_params is not None:
        try:
            EllipticParams(**cfg.elliptic_params)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid elliptic parameters: {exc}") from None
    for suite in cfg.suites():
        if not _suite_lengths(cfg, suite) and suite not in ("yang-baxter", "constraint", "local-identity"):
            raise ConfigError(f"no chain length in {cfg.L_list} applies to suite {suite!r}")
    if "largest-eigenvalue" in cfg.suites() and cfg.weights is not None:
        if not all(x > 0 for x in cfg.weights):
            raise ConfigError("largest-eigenvalue needs strictly positive weights")


def _suite_lengths(cfg: SuiteConfig, suite: str) -> list[int]:
    Ls = sorted(set(int(L) for L in cfg.L_list))
    rules: dict[str, Callable[[int], bool]] = {
        "nilpotency": lambda L: 1 <= L <= 10,
        "tq-anticommutation": lambda L: 2 <= L <= 12,
        "stroganov": lambda L: L % 2 == 1 and 3 <= L <= max(cfg.dense_limit, 13),
        "ground-state": lambda L: L % 2 == 1 and 3 <= L <= 13,
        "kernel-law": lambda L: 2 <= L <= 11,
        "elliptic": lambda L: 2 <= L <= 7,
        "word-sum": lambda L: L % 2 == 1 and L >= 3,
        "largest-eigenvalue": lambda L: L % 2 == 1 and 3 <= L <= 15,
    }
    rule = rules.get(suite)
    return [L for L in Ls if rule(L)] if rule else Ls


def _rng(cfg: SuiteConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, SUITES.index(suite)])


def _quadruples(cfg: SuiteConfig, rng: np.random.Generator, positive: bool = False) -> list[tuple[str, VertexWeights]]:
    if cfg.weights is not None:
        return [("w0", VertexWeights(*cfg.weights))]
    out = []
    for i in range(cfg.samples):
        if cfg.weight_source == "elliptic":
            if cfg.elliptic_params is not None and i == 0:
                w = elliptic.weights_from_elliptic(EllipticParams(**cfg.elliptic_params))
            else:
                w = elliptic.random_susy_weights(rng)
        else:
            w = vertex.random_weights(rng)
        out.append((f"w{i}", w))
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _guard(records: list, name: str, inputs: dict, tolerance, fn: Callable[[], tuple]) -> None:
    """Run ``fn`` returning ``(value, passed, details)``; exceptions become failed records."""
    try:
        value, passed, details = fn()
    except Exception as exc:  # noqa: BLE001 - recorded, never raised
        records.append(CheckRecord(name, inputs, None, tolerance, False, {"error": f"{type(exc).__name__}: {exc}"}))
        return
    records.append(CheckRecord(name, inputs, value, tolerance, bool(passed), details))


def suite_constraint(cfg, rng):
    tol = cfg.tolerance("constraint")
    recs = []
    for tag, w in _quadruples(cfg, rng):
        _guard(recs, f"constraint/{tag}", {"weights": w.as_tuple()}, tol,
               lambda w=w: (w.constraint_residual(), w.nonzero() and w.constraint_residual() < tol,
                            {"zeta": w.zeta if w.nonzero() else None}))
    return recs


def suite_local_identity(cfg, rng):
    tol, conv = cfg.tolerance("local_identity"), cfg.tolerance("local_identity_converse")
    recs = []
    for tag, w in _quadruples(cfg, rng):
        def run(w=w):
            r = vertex.check_local_identity(w)
            return r["residual"], r["residual"] < tol and r["perturbed_residual"] > conv, r
        _guard(recs, f"local-identity/{tag}", {"weights": w.as_tuple()}, {"max": tol, "converse_min": conv}, run)
    return recs


def suite_nilpotency(cfg, rng):
    tol = cfg.tolerance("nilpotency")
    recs = []
    for L in _suite_lengths(cfg, "nilpotency"):
        for zeta in cfg.zetas:
            def run(L=L, zeta=zeta):
                Q = susy.supercharge(L, zeta)
                Q2 = susy.supercharge(L + 1, zeta)
                H_small = susy.susy_hamiltonian(L, zeta)
                H_big = susy.susy_hamiltonian(L + 1, zeta)
                worst = {"QQ": 0.0, "HQ-QH": 0.0, "QP-PQ": 0.0, "QZ+ZQ": 0.0}
                for _ in range(cfg.samples):
                    psi = hilbert.random_state(L, rng)
                    q = Q.apply(psi)
                    worst["QQ"] = max(worst["QQ"], np.linalg.norm(Q2.apply(q)))
                    worst["HQ-QH"] = max(worst["HQ-QH"], np.linalg.norm(H_big.apply(q) - Q.apply(H_small.apply(psi))))
                    # spin parity commutes with Q; the bare sigma^z string anticommutes
                    worst["QP-PQ"] = max(worst["QP-PQ"], np.linalg.norm(Q.apply(hilbert.parity_apply(psi)) - hilbert.parity_apply(q)))
                    z_small = (-1) ** L * hilbert.parity_signs(L)
                    z_big = (-1) ** (L + 1) * hilbert.parity_signs(L + 1)
                    worst["QZ+ZQ"] = max(worst["QZ+ZQ"], np.linalg.norm(Q.apply(z_small * psi) + z_big * q))
                worst = {k: float(v) for k, v in worst.items()}
                return max(worst.values()), max(worst.values()) < tol, worst
            _guard(recs, f"nilpotency/L={L:02d}/zeta={zeta:+.6g}", {"L": L, "zeta": zeta, "samples": cfg.samples}, tol, run)
    return recs


def suite_tq(cfg, rng):
    tol = cfg.tolerance("tq")
    recs = []
    for tag, w in _quadruples(cfg, rng):
        for L in _suite_lengths(cfg, "tq-anticommutation"):
            seed = int(rng.integers(2**63))
            def run(w=w, L=L, seed=seed):
                r = vertex.check_tq_anticommutation(w, L, samples=cfg.samples, seed=seed)
                return r, r < tol, {"zeta": w.zeta}
            _guard(recs, f"tq-anticommutation/{tag}/L={L:02d}", {"weights": w.as_tuple(), "L": L}, tol, run)
    return recs


def suite_stroganov(cfg, rng):
    ctol, xtol, mtol = cfg.tolerance("cluster"), cfg.tolerance("cross_residual"), cfg.tolerance("matrix_element")
    ltol = cfg.tolerance("largest")
    recs = []
    for tag, w in _quadruples(cfg, rng):
        for L in _suite_lengths(cfg, "stroganov"):
            n = (L - 1) // 2
            inputs = {"weights": w.as_tuple(), "L": L, "n": n}
            if L <= cfg.dense_limit:
                def run(w=w, n=n):
                    r = vertex.stroganov_check(w, n, cluster_tol=ctol, residual_tol=xtol, dense_limit=cfg.dense_limit)
                    return r.theta, r.passed, r.to_dict()
                _guard(recs, f"stroganov/{tag}/L={L:02d}", inputs, {"cluster": ctol, "cross_residual": xtol}, run)
            else:
                def run(w=w, n=n):
                    r = vertex.largest_eigenvalue_check(w, n, tol=ltol)
                    return r.theta, r.passed, r.to_dict()
                _guard(recs, f"stroganov/{tag}/L={L:02d}", {**inputs, "method": "power-iteration"}, ltol, run)
            def elem(w=w, n=n):
                value = vertex.theta_matrix_element(w, n)
                target = vertex.theta(w, 2 * n + 1)
                err = abs(value - target) / abs(target)
                return value, err < mtol, {"theta": target, "relative_error": err}
            _guard(recs, f"stroganov/{tag}/L={L:02d}/matrix-element", inputs, mtol, elem)

    def cont():
        r = vertex.continuity_check()
        return r.entries[0]["theta"], r.passed, r.to_dict()
    _guard(recs, "stroganov/continuity", {"L": 3, "eps": 1e-3}, {"scale_relative": 1e-12}, cont)
    return recs


def ground_state_summary(L: int, zeta: float, tol: float, rng: np.random.Generator) -> dict:
    """Bottom of the full XYZ spectrum compared with ``-L(3+ζ²)/4`` and the zero-energy pair."""
    E0 = hilbert.ground_energy(L, zeta)
    H = hilbert.xyz_hamiltonian_susy(L, zeta)
    if L <= 11:
        res = spectral.eig_dense_hermitian(H, max_dim=1 << 11)
        vals = res.eigenvalues.real[::-1]
        vecs = res.eigenvectors[:, ::-1]
        method = "dense-hermitian"
    else:
        res = spectral.krylov_extremal(H, 1 << L, 3, True, which="smallest", seed=int(rng.integers(2**63)))
        vals = res.eigenvalues.real[::-1]
        vecs = res.eigenvectors[:, ::-1]
        method = "krylov-extremal"
    tol_abs = tol * abs(E0)
    mult = int(np.sum(np.abs(vals - E0) < tol_abs))
    out = {
        "E0": E0,
        "minimum": float(vals[0]),
        "relative_error": abs(vals[0] - E0) / abs(E0),
        "multiplicity": mult,
        "next": float(vals[mult]) if mult < len(vals) else None,
        "method": method,
    }
    if zeta != 0 and mult == 2:
        pair = susy.zero_energy_states(L, zeta)
        basis = np.linalg.qr(np.column_stack([pair.psi, pair.psi_bar]))[0]
        ground = vecs[:, :2]
        out["subspace_residual"] = float(np.linalg.norm(ground - basis @ (basis.conj().T @ ground)))
    return out


def suite_ground_state(cfg, rng):
    tol = cfg.tolerance("ground_state")
    recs = []
    for L in _suite_lengths(cfg, "ground-state"):
        for zeta in cfg.zetas:
            def run(L=L, zeta=zeta):
                s = ground_state_summary(L, zeta, tol, rng)
                ok = s["relative_error"] < tol and s["multiplicity"] == 2 and s.get("subspace_residual", 0.0) < 1e-8
                if zeta < 0:
                    # the M(i) conjugation maps H(zeta) onto H(-zeta)
                    Mi = hilbert.m_lambda_diagonal(L, 1j)
                    Hz = hilbert.xyz_hamiltonian_susy(L, zeta).to_sparse()
                    Hm = hilbert.xyz_hamiltonian_susy(L, -zeta).to_sparse()
                    conj = (Hz.multiply(Mi[:, None]).multiply(np.conj(Mi)[None, :]) - Hm)
                    s["conjugation_residual"] = float(abs(conj).max()) if conj.nnz else 0.0
                    ok = ok and s["conjugation_residual"] < 1e-12
                return s["minimum"], ok, s
            _guard(recs, f"ground-state/L={L:02d}/zeta={zeta:+.6g}", {"L": L, "zeta": zeta}, tol, run)
    return recs


def suite_kernel_law(cfg, rng):
    tol = cfg.tolerance("kernel")
    recs = []
    for L in _suite_lengths(cfg, "kernel-law"):
        for zeta in cfg.zetas:
            def run(L=L, zeta=zeta):
                k = susy.sector_kernel(L, zeta, threshold=tol)
                expected = 2 if L % 2 else 0
                ok = k.dimension == expected and k.gap > 0
                return k.dimension, ok, {"expected": expected, "gap": k.gap, "sector_dim": len(k.spectrum)}
            _guard(recs, f"kernel-law/L={L:02d}/zeta={zeta:+.6g}", {"L": L, "zeta": zeta}, tol, run)
    return recs


def suite_elliptic(cfg, rng):
    recs = []
    ctol, itol, ntol = (cfg.tolerance(k) for k in ("elliptic_constraint", "elliptic_identity", "elliptic_negative"))
    points = []
    if cfg.elliptic_params is not None:
        points.append(EllipticParams(**cfg.elliptic_params))
    while len(points) < cfg.samples:
        points.append(EllipticParams(SUSY_ETA, float(rng.uniform(0.05, 0.6)), float(rng.uniform(0.05, 1.0))))
    for i, p in enumerate(points):
        def run(p=p):
            w = elliptic.weights_from_elliptic(p)
            z = elliptic.zeta_and_jz_consistency(p)
            on_susy = abs(p.eta - SUSY_ETA) < 1e-14
            vals = {"constraint": w.constraint_residual(), "zeta": z.zeta_residual, "jz": z.jz_residual}
            ok = vals["zeta"] < itol and vals["jz"] < itol
            if on_susy:
                vals["jz_susy"] = z.jz_susy_residual
                ok = ok and vals["constraint"] < ctol and vals["jz_susy"] < itol
            return max(vals.values()), ok, {"weights": w.as_tuple(), **vals}
        _guard(recs, f"elliptic/point{i:02d}", asdict(p), {"constraint": ctol, "identity": itol}, run)
    for i in range(cfg.samples):
        eta = float(rng.uniform(0.1, 1.5))
        while abs(eta - SUSY_ETA) < 0.1:
            eta = float(rng.uniform(0.1, 1.5))
        p = EllipticParams(eta, float(rng.uniform(0.05, 0.5)), float(rng.uniform(0.05, 1.0)))
        def neg(p=p):
            r = elliptic.weights_from_elliptic(p).constraint_residual()
            return r, r > ntol, {}
        _guard(recs, f"elliptic/off-manifold{i:02d}", asdict(p), {"min": ntol}, neg)
    stol, ltol, jtol, mtol = (cfg.tolerance(k) for k in ("tu_shift", "tu_log", "couplings", "commuting"))
    for L in _suite_lengths(cfg, "elliptic"):
        nome = float(rng.uniform(0.05, 0.6))
        def tu(L=L, nome=nome):
            r = elliptic.tu_zero_checks(SUSY_ETA, nome, L)
            cres = max(r.coupling_residuals)
            ok = r.shift_residual < stol and r.log_derivative_residual < ltol and cres < jtol
            return r.log_derivative_residual, ok, r.to_dict()
        _guard(recs, f"elliptic/tu-zero/L={L:02d}", {"eta": SUSY_ETA, "nome": nome, "L": L},
               {"shift": stol, "log_derivative": ltol, "couplings": jtol}, tu)
        u, v = (float(x) for x in rng.uniform(0.05, 1.0, size=2))
        psi = hilbert.random_state(L, rng)
        def comm(L=L, nome=nome, u=u, v=v, psi=psi):
            r = elliptic.commuting_residual(SUSY_ETA, nome, u, v, L, psi)
            return r, r < mtol, {}
        _guard(recs, f"elliptic/commuting/L={L:02d}", {"nome": nome, "u": u, "v": v, "L": L}, mtol, comm)
    return recs


def random_ybe_point(rng: np.random.Generator) -> dict:
    return {
        "eta": float(rng.uniform(0.1, 1.5)),
        "p": float(rng.uniform(0.0, 0.6)),
        "u": float(rng.uniform(-1.5, 1.5)),
        "v": float(rng.uniform(-1.5, 1.5)),
    }


def suite_yang_baxter(cfg, rng):
    tol = cfg.tolerance("yang_baxter")
    recs = []
    for i in range(max(cfg.samples, 1)):
        pt = random_ybe_point(rng)
        def run(pt=pt):
            r = elliptic.yang_baxter_residual(**pt)
            return r, r < tol, {}
        _guard(recs, f"yang-baxter/{i:02d}", pt, tol, run)
    return recs


def random_word_pair(rng: np.random.Generator, mixed: bool) -> tuple[float, float]:
    """``(a, b)`` with ``(|a|+|b|)/|a+b| <= 1.5`` so the float sum keeps 1e-12 relative accuracy at n = 8."""
    a = float(rng.uniform(0.5, 2.0)) * (1 if rng.random() < 0.5 else -1)
    ratio = float(rng.uniform(0.0, 0.2)) if mixed else float(rng.uniform(0.1, 2.0))
    b = -a * ratio if mixed else a * ratio
    return a, b


def suite_word_sum(cfg, rng):
    tol = cfg.tolerance("word_sum")
    recs = []
    n_max = cfg.n_max or max((L - 1) // 2 for L in _suite_lengths(cfg, "word-sum"))
    pairs = [random_word_pair(rng, mixed=i % 2 == 1) for i in range(cfg.samples)]
    for n in range(1, n_max + 1):
        for i, (a, b) in enumerate(pairs):
            def run(n=n, a=a, b=b):
                target = (a + b) ** (2 * n + 1)
                value = vertex.word_sum(a, b, n) if n <= 4 else vertex.word_sum_fast(a, b, n)
                brute = float(vertex.word_weights(a, b, 2 * n + 1).sum())
                err = abs(value - target) / abs(target)
                berr = abs(brute - target) / abs(target)
                return value, err < tol and berr < tol, {"target": target, "relative_error": err, "bruteforce_error": berr}
            _guard(recs, f"word-sum/n={n:02d}/{i:02d}", {"a": a, "b": b, "n": n}, tol, run)
    return recs


def suite_largest(cfg, rng):
    tol = cfg.tolerance("largest")
    recs = []
    # both random sources produce strictly positive quadruples
    for tag, w in _quadruples(cfg, rng):
        for L in _suite_lengths(cfg, "largest-eigenvalue"):
            def run(w=w, L=L):
                r = vertex.largest_eigenvalue_check(w, (L - 1) // 2, tol=tol)
                return r.theta, r.passed, r.to_dict()
            _guard(recs, f"largest-eigenvalue/{tag}/L={L:02d}", {"weights": w.as_tuple(), "L": L}, tol, run)
    return recs


SUITE_RUNNERS = {
    "constraint": suite_constraint,
    "local-identity": suite_local_identity,
    "nilpotency": suite_nilpotency,
    "tq-anticommutation": suite_tq,
    "stroganov": suite_stroganov,
    "ground-state": suite_ground_state,
    "kernel-law": suite_kernel_law,
    "elliptic": suite_elliptic,
    "yang-baxter": suite_yang_baxter,
    "word-sum": suite_word_sum,
    "largest-eigenvalue": suite_largest,
}


def environment() -> dict:
    return {
        "version": __version__,
        "precision": "float64/complex128",
        "numpy": np.__version__,
        "python": platform.python_version(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Validate ``cfg`` then run every requested suite, recording all outcomes."""
    validate_config(cfg)
    checks: list[CheckRecord] = []
    verdicts = {}
    for suite in cfg.suites():
        recs = SUITE_RUNNERS[suite](cfg, _rng(cfg, suite))
        checks.extend(recs)
        verdicts[suite] = "pass" if recs and all(r.passed for r in recs) else "fail"
    return VerificationReport(cfg.to_dict(), checks, verdicts, environment())


def exit_code(report: VerificationReport) -> int:
    return 0 if report.passed else 1
