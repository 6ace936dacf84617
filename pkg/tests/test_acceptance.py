"""Acceptance criteria 1-11, one test each, at the stated tolerances.

Every test appends a single ``[PASS]``/``[FAIL]`` line to
``conftest.ACCEPTANCE_LINES`` (printed in the terminal summary) before asserting.
"""

import io
import json
from math import sqrt

import numpy as np
import pytest

from susy8v import cli, elliptic, harness, hilbert, susy, vertex
from susy8v.elliptic import SUSY_ETA, EllipticParams
from susy8v.vertex import VertexWeights

import conftest

SEED = 20240917


def report(number: int, ok: bool, summary: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {summary}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def constrained_quadruples(rng, count):
    """``count`` quadruples, half from solve_d and half from the elliptic map."""
    half = count // 2
    return [vertex.random_weights(rng) for _ in range(half)] + [
        elliptic.random_susy_weights(rng) for _ in range(count - half)]


def test_criterion_01_stroganov_eigenvalue():
    rng = np.random.default_rng([SEED, 1])
    failures, worst_cross, checked = [], 0.0, 0
    for L in (3, 5, 7, 9, 11):
        for w in constrained_quadruples(rng, 20):
            r = vertex.stroganov_check(w, (L - 1) // 2, cluster_tol=1e-8, residual_tol=1e-10)
            checked += 1
            worst_cross = max(worst_cross, *r.cross_residuals)
            if not (r.passed and r.multiplicity == 2 and r.susy_checked):
                failures.append((L, w.as_tuple(), r.multiplicity))
    # L = 13 by per-parity power iteration; both generators give positive weights
    worst_13 = 0.0
    for w in constrained_quadruples(rng, 20):
        r = vertex.largest_eigenvalue_check(w, 6, tol=1e-8)
        checked += 1
        worst_13 = max(worst_13, *r.relative_errors.values())
        if not (r.passed and abs(r.sector_values["+"] - r.sector_values["-"]) < 1e-8 * r.theta):
            failures.append((13, w.as_tuple(), r.relative_errors))
    ok = not failures
    report(1, ok, f"Theta=(a+b)^L doubly degenerate for {checked} quadruples, L=3..13; "
                  f"max cross-residual/|Theta| {worst_cross:.1e}, max L=13 error {worst_13:.1e}")
    assert ok, failures[:5]


def test_criterion_02_ground_state():
    rng = np.random.default_rng([SEED, 2])
    failures, worst = [], 0.0
    for L in (3, 5, 7, 9):
        for zeta in (0.3, 1.0, 2.5, -1.2):
            s = harness.ground_state_summary(L, zeta, 1e-10, rng)
            worst = max(worst, s["relative_error"])
            good = s["relative_error"] < 1e-10 and s["multiplicity"] == 2
            if zeta < 0:
                # M(i) maps H(zeta) onto H(-zeta), so the spectra coincide
                Mi = hilbert.m_lambda(L, 1j).to_dense()
                Hz = hilbert.xyz_hamiltonian_susy(L, zeta).to_dense()
                Hm = hilbert.xyz_hamiltonian_susy(L, -zeta).to_dense()
                good = good and np.abs(Mi @ Hz @ Mi.conj().T - Hm).max() < 1e-12
            if not good:
                failures.append((L, zeta, s))
    ok = not failures
    report(2, ok, f"min spec(H_XYZ) = -L(3+zeta^2)/4 with multiplicity 2, L=3..9, 4 zetas; max rel. error {worst:.1e}")
    assert ok, failures


def test_criterion_03_kernel_law():
    failures, min_gap = [], np.inf
    for L in range(2, 10):
        for zeta in (0.3, 1.0, 2.5, -1.2):
            k = susy.sector_kernel(L, zeta)
            expected = 2 if L % 2 else 0
            if L % 2 == 0:
                min_gap = min(min_gap, k.gap)
            if k.dimension != expected or (L % 2 == 0 and not k.gap > 0):
                failures.append((L, zeta, k.dimension, k.gap))
    ok = not failures
    report(3, ok, f"dim ker(H|W) = 0 (even L) / 2 (odd L), L=2..9, 4 zetas; smallest even-L gap {min_gap:.3f}")
    assert ok, failures


def test_criterion_04_nilpotency_and_commutations():
    rng = np.random.default_rng([SEED, 4])
    worst = {"QQ": 0.0, "QP+PQ": 0.0, "HQ-QH": 0.0}
    for L in range(1, 11):
        Q, Q2 = susy.supercharge(L, 0.7), susy.supercharge(L + 1, 0.7)
        # H needs two sites, so the commutator starts at L = 2
        H, Hb = (susy.susy_hamiltonian(L, 0.7), susy.susy_hamiltonian(L + 1, 0.7)) if L >= 2 else (None, None)
        for _ in range(10):
            psi = hilbert.random_state(L, rng)
            nrm = np.linalg.norm(psi)
            q = Q.apply(psi)
            worst["QQ"] = max(worst["QQ"], np.linalg.norm(Q2.apply(q)) / nrm)
            # P = (-1)^L sigma^z ... sigma^z on each side of Q
            acpq = Q.apply(hilbert.parity_apply(psi)) + hilbert.parity_apply(q)
            worst["QP+PQ"] = max(worst["QP+PQ"], np.linalg.norm(acpq) / nrm)
            if H is not None:
                worst["HQ-QH"] = max(worst["HQ-QH"], np.linalg.norm(Hb.apply(q) - Q.apply(H.apply(psi))) / nrm)
    ok = all(v < 1e-11 for v in worst.values())
    report(4, ok, "L=1..10, 10 states each; " + ", ".join(f"|{k}| {v:.1e}" for k, v in worst.items())
           + " (tolerance 1e-11)")
    assert ok, worst


def test_criterion_05_local_identity_both_directions():
    rng = np.random.default_rng([SEED, 5])
    on = [vertex.local_identity_residual(w) for w in constrained_quadruples(rng, 50)]
    off, violations = [], []
    for w in constrained_quadruples(rng, 50):
        factor = 1 + rng.choice([-1, 1]) * rng.uniform(0.01, 0.5)
        broken = VertexWeights(w.a, w.b, w.c, w.d * factor)
        violations.append(broken.constraint_residual())
        off.append(vertex.local_identity_residual(broken))
    ok = max(on) < 1e-12 and min(off) > 1e-6 and min(violations) >= 1e-3
    report(5, ok, f"50 constrained: max residual {max(on):.1e} (< 1e-12); "
                  f"50 violating by >= {min(violations):.1e}: min residual {min(off):.1e} (> 1e-6)")
    assert ok


def test_criterion_06_tq_anticommutation():
    rng = np.random.default_rng([SEED, 6])
    worst, zetas = 0.0, []
    for L in range(2, 10):
        for w in constrained_quadruples(rng, 4) + [VertexWeights(1, 1, 1, 1)]:
            zetas.append(w.zeta)
            worst = max(worst, vertex.check_tq_anticommutation(w, L, samples=2, seed=L))
    ok = worst < 1e-10 and any(abs(z - 1) > 0.1 for z in zetas)
    report(6, ok, f"TQ + (a+b)QT, L=2..9, zeta in [{min(zetas):.2f}, {max(zetas):.2f}]; max residual {worst:.1e}")
    assert ok


def test_criterion_07_word_sum_and_matrix_element():
    rng = np.random.default_rng([SEED, 7])
    pairs = [harness.random_word_pair(rng, mixed=i % 2 == 1) for i in range(20)]
    assert any(a * b < 0 for a, b in pairs)
    worst_words = 0.0
    for n in range(1, 9):
        for a, b in pairs:
            brute = float(vertex.word_weights(a, b, 2 * n + 1).sum())
            target = (a + b) ** (2 * n + 1)
            worst_words = max(worst_words, abs(brute - target) / abs(target))
    worst_me = 0.0
    for n in range(1, 6):
        for w in constrained_quadruples(rng, 4):
            target = vertex.theta(w, 2 * n + 1)
            worst_me = max(worst_me, abs(vertex.theta_matrix_element(w, n) - target) / abs(target))
    ok = worst_words < 1e-12 and worst_me < 1e-10
    report(7, ok, f"word sum n<=8, 20 pairs (mixed signs): max rel. error {worst_words:.1e}; "
                  f"matrix element n<=5: {worst_me:.1e}")
    assert ok


def test_criterion_08_elliptic_manifold():
    rng = np.random.default_rng([SEED, 8])
    worst = {"constraint": 0.0, "zeta": 0.0, "jz": 0.0, "shift": 0.0, "log-derivative": 0.0, "yang-baxter": 0.0}
    for i in range(100):
        p = EllipticParams(SUSY_ETA, float(rng.uniform(0.05, 0.6)), float(rng.uniform(0.05, 1.0)))
        w = elliptic.weights_from_elliptic(p)
        z = elliptic.zeta_and_jz_consistency(p)
        worst["constraint"] = max(worst["constraint"], w.constraint_residual())
        worst["zeta"] = max(worst["zeta"], z.zeta_residual)
        worst["jz"] = max(worst["jz"], z.jz_residual, z.jz_susy_residual)
        t = elliptic.tu_zero_checks(SUSY_ETA, p.nome, 2 + i % 4)
        worst["shift"] = max(worst["shift"], t.shift_residual)
        worst["log-derivative"] = max(worst["log-derivative"], t.log_derivative_residual)
    for _ in range(50):
        worst["yang-baxter"] = max(worst["yang-baxter"], elliptic.yang_baxter_residual(**harness.random_ybe_point(rng)))
    tolerances = {"constraint": 1e-10, "zeta": 1e-11, "jz": 1e-11, "shift": 1e-10, "log-derivative": 1e-7,
                  "yang-baxter": 1e-10}
    ok = all(worst[k] < tolerances[k] for k in worst)
    report(8, ok, "100 points at eta=pi/3, 50 Yang-Baxter points; "
           + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok, worst


def test_criterion_09_largest_eigenvalue():
    rng = np.random.default_rng([SEED, 9])
    failures, worst, worst_free = [], 0.0, 0.0
    quads = [VertexWeights(2, 1, 1, 2), VertexWeights(1, 1, 1, 1)] + constrained_quadruples(rng, 6)
    for L in range(3, 14, 2):
        for w in quads:
            r = vertex.largest_eigenvalue_check(w, (L - 1) // 2, tol=1e-8)
            worst = max(worst, *r.relative_errors.values())
            worst_free = max(worst_free, r.free_energy_difference)
            if not (r.passed and min(r.min_component.values()) > 0):
                failures.append((L, w.as_tuple(), r.relative_errors))
    ok = not failures
    report(9, ok, f"sector power iteration, L=3..13 odd, {len(quads)} positive quadruples; "
                  f"max rel. error {worst:.1e}, max free-energy gap {worst_free:.1e}")
    assert ok, failures


def test_criterion_10_six_vertex_limit():
    w = VertexWeights(1.0, 1.0, sqrt(3.0), 0.0)
    results = {}
    for L in (3, 5, 7):
        r = vertex.stroganov_check(w, (L - 1) // 2, with_susy=False)
        results[L] = (r.theta, r.multiplicity, r.passed)
    ok = all(theta == 2**L and mult == 2 and passed for L, (theta, mult, passed) in results.items())
    report(10, ok, "(1,1,sqrt3,0): 2^L with multiplicity " + ", ".join(f"{m} at L={L}" for L, (_, m, _) in results.items()))
    assert ok, results


def _verify_all(seed):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(["verify", "--all", "--seed", str(seed)], stdout=out, stderr=err)
    doc = json.loads(out.getvalue())
    doc["environment"].pop("timestamp")
    return code, json.dumps(doc, sort_keys=True, indent=2)


def test_criterion_11_determinism():
    code_a, a = _verify_all(SEED)
    code_b, b = _verify_all(SEED)
    ok = a == b and code_a == code_b == 0
    report(11, ok, f"two `verify --all` runs with seed {SEED}: {'identical' if a == b else 'different'} "
                   f"reports ({len(a)} bytes), exit codes {code_a}/{code_b}")
    assert ok


@pytest.mark.parametrize("L", [2, 3, 4, 5])
def test_parity_relation_holds_as_commutation(L):
    """Companion to criterion 4: with P = (-1)^L sigma^z...sigma^z the supercharge commutes with P,
    and it anticommutes with the bare sigma^z string."""
    rng = np.random.default_rng([SEED, 40 + L])
    Q = susy.supercharge(L, 0.7)
    psi = hilbert.random_state(L, rng)
    q = Q.apply(psi)
    assert np.linalg.norm(Q.apply(hilbert.parity_apply(psi)) - hilbert.parity_apply(q)) < 1e-12
    z_small = (-1) ** L * hilbert.parity_signs(L)
    z_big = (-1) ** (L + 1) * hilbert.parity_signs(L + 1)
    assert np.linalg.norm(Q.apply(z_small * psi) + z_big * q) < 1e-12
