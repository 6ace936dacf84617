"""Command-line front end.

Every subcommand writes a JSON payload (or CSV for ``spectrum --format csv``)
to stdout or to ``--out``; diagnostics go to stderr. Exit codes: 0 success,
1 failed verification, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import elliptic, harness, hilbert, spectral, susy, vertex
from .elliptic import EllipticParams
from .harness import ConfigError, to_jsonable
from .vertex import ConstraintError, VertexWeights

PROG = "susy8v"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line diagnostic, exit status 2
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    """``"3,5,7"`` or ranges ``"2..9"`` / ``"2-9"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        for sep in ("..", "-"):
            if sep in part[1:]:
                lo, hi = part.split(sep, 1)
                out.extend(range(int(lo), int(hi) + 1))
                break
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return out


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _angle(text: str) -> float:
    try:
        return elliptic.parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tol(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key!r} is not a number: {value!r}") from None


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _add_output(p: argparse.ArgumentParser, csv: bool = False) -> None:
    p.add_argument("--out", metavar="PATH", help="write the payload to PATH instead of stdout")
    p.add_argument("--format", choices=("json", "csv") if csv else ("json",), default="json",
                   help="payload format" + (" (csv exports the clustered spectrum)" if csv else ""))


def _add_weights(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("weights (mutually exclusive: --weights or the elliptic flags)")
    g.add_argument("--weights", metavar="a,b,c[,d]", help="quadruple, or triple with d solved from the constraint")
    g.add_argument("--eta", type=_angle, help="crossing parameter in radians, e.g. 0.9 or pi/3")
    g.add_argument("--nome", type=float, help="elliptic nome p in [0, 1)")
    g.add_argument("--u", type=float, help="spectral parameter")
    g.add_argument("--rho", type=float, default=None, help="normalization (default 1)")
    g.add_argument("--allow-unconstrained", action="store_true",
                   help="accept quadruples that violate the supersymmetric constraint")
    g.add_argument("--tol", type=_tol, action="append", default=[], metavar="KEY=VALUE",
                   help="tolerance override, repeatable; keys: " + ", ".join(harness.DEFAULT_TOLERANCES))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Numerical checks for the supersymmetric eight-vertex model.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {harness.__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run verification suites and emit a JSON report")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--all", action="store_true", help="run every suite (default)")
    which.add_argument("--suite", choices=harness.SUITES, help="run a single suite")
    p.add_argument("--L", type=_int_list, default=[3, 5], metavar="LIST", help="chain lengths, e.g. 3,5 or 2..9")
    p.add_argument("--zeta", type=_float_list, default=None, metavar="LIST", help="zeta values for SUSY suites")
    p.add_argument("--n", type=int, default=None, help="largest n for the word-sum suite")
    p.add_argument("--samples", type=int, default=3, help="random samples per check")
    p.add_argument("--seed", type=_seed, default=spectral.DEFAULT_SEED, help="64-bit seed")
    p.add_argument("--weight-source", choices=harness.WEIGHT_SOURCES, default=None,
                   help="random source when no explicit weights are given")
    p.add_argument("--dense-limit", type=int, default=11, help="largest L for dense transfer-matrix spectra")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    _add_weights(p)
    _add_output(p)

    p = sub.add_parser("spectrum", help="dense spectrum of the transfer matrix or XYZ Hamiltonian")
    p.add_argument("--L", type=int, required=True, help="chain length")
    p.add_argument("--operator", choices=("transfer", "xyz"), default="transfer")
    p.add_argument("--zeta", type=float, default=None, help="zeta for --operator xyz")
    p.add_argument("--dense-limit", type=int, default=11, help="largest L accepted")
    _add_weights(p)
    _add_output(p, csv=True)

    p = sub.add_parser("stroganov", help="check the doubly degenerate eigenvalue (a+b)^L")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, help="L = 2n+1")
    g.add_argument("--L", type=int, help="odd chain length")
    p.add_argument("--dense-limit", type=int, default=11, help="largest L for dense spectra; power iteration above")
    _add_weights(p)
    _add_output(p)

    p = sub.add_parser("susy", help="supercharge and zero-energy data at given L and zeta")
    p.add_argument("--L", type=int, required=True, help="chain length")
    p.add_argument("--zeta", type=float, required=True, help="anisotropy parameter (non-zero)")
    p.add_argument("--samples", type=int, default=3, help="random states for the nilpotency check")
    p.add_argument("--seed", type=_seed, default=spectral.DEFAULT_SEED, help="64-bit seed")
    _add_output(p)

    p = sub.add_parser("elliptic", help="weights from the elliptic parametrization")
    p.add_argument("--eta", type=_angle, required=True, help="crossing parameter, e.g. pi/3")
    p.add_argument("--nome", type=float, required=True, help="nome p in [0, 1)")
    p.add_argument("--u", type=float, required=True, help="spectral parameter")
    p.add_argument("--rho", type=float, default=1.0, help="normalization")
    _add_output(p)

    p = sub.add_parser("yangbaxter", help="Yang-Baxter residual for elliptic R-matrices")
    p.add_argument("--eta", type=_angle, required=True, help="crossing parameter")
    p.add_argument("--nome", type=float, required=True, help="nome p in [0, 1)")
    p.add_argument("--u", type=float, required=True, help="first spectral parameter")
    p.add_argument("--v", type=float, required=True, help="second spectral parameter")
    p.add_argument("--tol", type=float, default=harness.DEFAULT_TOLERANCES["yang_baxter"], help="pass threshold")
    _add_output(p)

    p = sub.add_parser("word-sum", help="evaluate the alternating word sum for weights a,b")
    p.add_argument("--n", type=int, required=True, help="word length 2n+1")
    p.add_argument("--weights", required=True, metavar="a,b", help="two letter weights")
    p.add_argument("--tol", type=float, default=harness.DEFAULT_TOLERANCES["word_sum"], help="relative tolerance")
    _add_output(p)
    return parser


# ---------------------------------------------------------------------------


def _tolerances(args) -> dict:
    return dict(getattr(args, "tol", []) or [])


def _elliptic_given(args) -> bool:
    return any(getattr(args, k, None) is not None for k in ("eta", "nome", "u", "rho"))


def _elliptic_params(args) -> dict:
    missing = [k for k in ("nome", "u") if getattr(args, k) is None]
    if missing:
        raise UsageError(f"elliptic weights need --{' and --'.join(missing)}")
    return {
        "eta": args.eta if args.eta is not None else elliptic.SUSY_ETA,
        "nome": args.nome,
        "u": args.u,
        "rho": args.rho if args.rho is not None else 1.0,
    }


def resolve_weights(args, required: bool = True) -> Optional[VertexWeights]:
    """Weights from ``--weights`` or the elliptic flags, validated against the constraint."""
    if args.weights is not None and _elliptic_given(args):
        raise UsageError("--weights and the elliptic flags are mutually exclusive")
    tol = _tolerances(args).get("constraint", harness.DEFAULT_TOLERANCES["constraint"])
    if args.weights is not None:
        try:
            w = VertexWeights.parse(args.weights)
        except ConstraintError as exc:
            raise ConfigError(str(exc)) from None
        except ValueError as exc:
            raise UsageError(f"--weights: {exc}") from None
    elif _elliptic_given(args):
        try:
            w = elliptic.weights_from_elliptic(EllipticParams(**_elliptic_params(args)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    elif required:
        raise UsageError("weights required: pass --weights or --nome/--u")
    else:
        return None
    if not args.allow_unconstrained:
        try:
            w.require_supersymmetric(tol)
        except ConstraintError as exc:
            raise ConfigError(f"{exc}; pass --allow-unconstrained to proceed") from None
    return w


def _emit(args, payload, stdout) -> None:
    text = payload if isinstance(payload, str) else json.dumps(
        to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def cmd_verify(args, stdout) -> int:
    if args.weights is not None and _elliptic_given(args):
        raise UsageError("--weights and the elliptic flags are mutually exclusive")
    weights = None
    source = args.weight_source or "solve-d"
    ell = None
    if args.weights is not None:
        try:
            weights = VertexWeights.parse(args.weights).as_tuple()
        except ConstraintError as exc:
            raise ConfigError(str(exc)) from None
        except ValueError as exc:
            raise UsageError(f"--weights: {exc}") from None
        source = "explicit"
    elif _elliptic_given(args):
        ell = _elliptic_params(args)
        source = "elliptic"
    cfg = harness.SuiteConfig(
        suite=args.suite or "all",
        L_list=args.L,
        weight_source=source,
        weights=weights,
        elliptic_params=ell,
        zetas=args.zeta if args.zeta is not None else list(harness.DEFAULT_ZETAS),
        samples=args.samples,
        seed=args.seed,
        tolerance_overrides=_tolerances(args),
        dense_limit=args.dense_limit,
        n_max=args.n,
        allow_unconstrained=args.allow_unconstrained,
    )
    report = harness.run_suite(cfg)
    _emit(args, report.to_json(include_timestamp=not args.no_timestamp), stdout)
    return harness.exit_code(report)


def cmd_spectrum(args, stdout) -> int:
    L = hilbert._check_length(args.L)
    if L > args.dense_limit:
        raise ConfigError(f"L={L} exceeds the dense limit {args.dense_limit}")
    if args.operator == "xyz":
        if args.zeta is None:
            raise UsageError("--operator xyz needs --zeta")
        if L < 2:
            raise ConfigError("the XYZ Hamiltonian needs L >= 2")
        res = spectral.eig_dense_hermitian(hilbert.xyz_hamiltonian_susy(L, args.zeta))
        inputs = {"operator": "xyz", "L": L, "zeta": args.zeta}
    else:
        w = resolve_weights(args)
        T = vertex.transfer_matrix_dense(w, L)
        res = spectral.eig_dense_general(T, vectors=False)
        inputs = {"operator": "transfer", "L": L, "weights": w.as_tuple(), "theta": vertex.theta(w, L)}
    if args.format == "csv":
        _emit(args, harness.spectrum_csv(res.clusters), stdout)
    else:
        _emit(args, {"schema_version": harness.SCHEMA_VERSION, "inputs": inputs, "method": res.method,
                     "eigenvalues": res.eigenvalues,
                     "clusters": [{"value": v, "multiplicity": m} for v, m in res.clusters]}, stdout)
    return 0


def cmd_stroganov(args, stdout) -> int:
    w = resolve_weights(args)
    if args.L is not None and (args.L < 3 or args.L % 2 == 0):
        raise ConfigError("--L must be odd and >= 3")
    n = args.n if args.n is not None else (args.L - 1) // 2
    if n < 1:
        raise ConfigError("--n must be >= 1")
    if 2 * n + 1 <= args.dense_limit:
        r = vertex.stroganov_check(w, n, dense_limit=args.dense_limit, with_susy=w.nonzero())
    else:
        if not all(x > 0 for x in w.as_tuple()):
            raise ConfigError("above the dense limit the check uses power iteration and needs positive weights")
        r = vertex.largest_eigenvalue_check(w, n)
    _emit(args, {"schema_version": harness.SCHEMA_VERSION, "report": r.to_dict(),
                 "verdict": "pass" if r.passed else "fail"}, stdout)
    return 0 if r.passed else 1


def cmd_susy(args, stdout) -> int:
    L = hilbert._check_length(args.L)
    if args.zeta == 0:
        raise ConfigError("zeta must be non-zero")
    rng = np.random.default_rng(args.seed)
    Q, Q2 = susy.supercharge(L, args.zeta), susy.supercharge(L + 1, args.zeta)
    nil = max(float(np.linalg.norm(Q2.apply(Q.apply(hilbert.random_state(L, rng))))) for _ in range(args.samples))
    k = susy.sector_kernel(L, args.zeta)
    expected = 2 if L % 2 else 0
    out = {
        "L": L,
        "zeta": args.zeta,
        "E0": hilbert.ground_energy(L, args.zeta),
        "couplings": hilbert.susy_couplings(args.zeta),
        "sector_dimension": len(k.spectrum),
        "kernel_dimension": k.dimension,
        "expected_kernel_dimension": expected,
        "gap": k.gap,
        "nilpotency_residual": nil,
    }
    if L % 2 == 1 and L >= 3:
        n = (L - 1) // 2
        out["annihilation_residuals"] = susy.check_annihilation(n, args.zeta)
        pair = susy.zero_energy_states(L, args.zeta)
        reps = susy.representative_states(n, args.zeta)
        reps_inv = susy.representative_states(n, 1.0 / args.zeta)
        coeffs = susy.overlap_coefficients(pair, reps, reps_inv)
        out["overlaps"] = coeffs
        out["decomposition_residuals"] = susy.decomposition_residuals(pair, coeffs)
    ok = k.dimension == expected and nil < harness.DEFAULT_TOLERANCES["nilpotency"]
    out["verdict"] = "pass" if ok else "fail"
    _emit(args, {"schema_version": harness.SCHEMA_VERSION, **out}, stdout)
    return 0 if ok else 1


def cmd_elliptic(args, stdout) -> int:
    try:
        p = EllipticParams(args.eta, args.nome, args.u, args.rho)
        w = elliptic.weights_from_elliptic(p, allow_degenerate=True)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = {
        "schema_version": harness.SCHEMA_VERSION,
        "inputs": {"eta": args.eta, "nome": args.nome, "u": args.u, "rho": args.rho},
        "weights": {"a": w.a, "b": w.b, "c": w.c, "d": w.d},
        "nonzero": w.nonzero(),
        "constraint_residual": w.constraint_residual(),
    }
    if w.nonzero():
        out["zeta"] = w.zeta
        out["consistency"] = elliptic.zeta_and_jz_consistency(p).to_dict()
    else:
        out["note"] = "a weight vanishes at this point"
    _emit(args, out, stdout)
    return 0


def cmd_yangbaxter(args, stdout) -> int:
    try:
        r = elliptic.yang_baxter_residual(args.eta, args.nome, args.u, args.v)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ok = r < args.tol
    _emit(args, {"schema_version": harness.SCHEMA_VERSION,
                 "inputs": {"eta": args.eta, "nome": args.nome, "u": args.u, "v": args.v},
                 "residual": r, "tolerance": args.tol, "verdict": "pass" if ok else "fail"}, stdout)
    return 0 if ok else 1


def cmd_word_sum(args, stdout) -> int:
    try:
        ab = [float(x) for x in args.weights.split(",")]
    except ValueError:
        raise UsageError(f"--weights: expected a,b, got {args.weights!r}") from None
    if len(ab) != 2:
        raise UsageError(f"--weights: expected exactly two numbers a,b, got {args.weights!r}")
    if args.n < 1:
        raise ConfigError("--n must be >= 1")
    a, b = ab
    value = vertex.word_sum(a, b, args.n) if args.n <= 4 else vertex.word_sum_fast(a, b, args.n)
    target = (a + b) ** (2 * args.n + 1)
    err = abs(value - target) / abs(target) if target != 0 else abs(value)
    ok = err < args.tol
    _emit(args, {"schema_version": harness.SCHEMA_VERSION, "inputs": {"a": a, "b": b, "n": args.n},
                 "value": value, "expected": target, "relative_error": err,
                 "verdict": "pass" if ok else "fail"}, stdout)
    return 0 if ok else 1


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "stroganov": cmd_stroganov,
    "susy": cmd_susy,
    "elliptic": cmd_elliptic,
    "yangbaxter": cmd_yangbaxter,
    "word-sum": cmd_word_sum,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=stderr)
        return 2
    except (ConfigError, ConstraintError, spectral.BudgetError) as exc:
        print(f"{PROG}: error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
