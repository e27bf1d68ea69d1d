"""Command-line interface.

Subcommands: ``decompose``, ``certify``, ``spectrum``, ``simulate``,
``check`` (the full pipeline), and ``generate``.  Inputs come either
from a pair of Matrix Market files (``--A``, ``--D``) or from a builtin
generator (``--generate scalar|wave|random``).  Every run emits one
JSON report on stdout (and to ``--out`` when given).

Exit codes: 0 all requested checks passed, 1 input error (unreadable or
malformed files, bad flag values), 2 certificate invalid or a
verification failed.
"""

import argparse
import sys
import time

import numpy as np

from . import mmio
from . import report as rpt
from ._version import __version__
from .certificate import (
    CONTRACTION_RTOL,
    DEFAULT_CONTRACTION_TIMES,
    DEFAULT_VERIFY_TOL,
    Certificate,
    SearchConfig,
    Variant,
    contraction_factors,
    envelope_constant,
    make_certificate_t1,
    make_certificate_t2,
    optimize_rate,
    verify_accretivity,
    verify_norm_equivalence,
)
from .constants import Theorem1Params, Theorem2Params
from .decomposition import OperatorPair, check_assumptions, decompose
from .errors import DecayCertError, DimensionMismatch, ParseError, VerificationFailed
from .generators import gen_damped_wave, gen_random_valid, gen_scalar
from .pencil import pencil_spectrum, verify_localization
from .simulate import (
    check_envelope,
    check_stepwise_contraction,
    default_time_grid,
    fit_rate,
    propagate,
    write_csv,
)

# errors that mean the inputs themselves were unusable
_INPUT_ERRORS = (ParseError, DimensionMismatch, OSError, ValueError)

_FAMILIES = {
    "scalar": "scalar",
    "wave": "wave",
    "damped_wave": "wave",
    "random": "random",
    "random_valid": "random",
}


class _Parser(argparse.ArgumentParser):
    """argparse flags usage problems with exit code 2; the contract here
    reserves 2 for failed certification, so remap to 1."""

    def exit(self, status=0, message=None):
        if message:
            self._print_message(message, sys.stderr)
        sys.exit(0 if status == 0 else 1)


def parse_complex(text: str) -> complex:
    """Parse '1', '-2.5', '1+1i', '3-0.5j' style complex literals."""
    s = text.strip().replace(" ", "").lower().replace("i", "j")
    try:
        z = complex(s)
    except ValueError:
        raise ValueError(f"cannot parse complex value {text!r}") from None
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"complex value must be finite, got {text!r}")
    return z


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="decaycert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"decaycert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(p):
        p.add_argument("--A", metavar="PATH", help="stiffness matrix (Matrix Market)")
        p.add_argument("--D", metavar="PATH", help="damping matrix (Matrix Market)")
        p.add_argument(
            "--generate",
            metavar="FAMILY",
            help="built-in family instead of files: scalar | wave | random",
        )
        p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
        p.add_argument("--n", type=int, help="dimension for wave/random families")
        p.add_argument("--a", default="1", help="scalar stiffness, e.g. 1+1i")
        p.add_argument("--d", default="2", help="scalar/wave damping coefficient")
        p.add_argument("--gamma", type=float, default=0.0, help="wave loss tangent")
        p.add_argument(
            "--sector-tan-max", type=float, default=2.0, help="random family sector bound"
        )
        p.add_argument(
            "--beta-min", type=float, default=0.5, help="random family damping floor"
        )

    def add_cert_flags(p):
        p.add_argument(
            "--variant", choices=("t1", "t2", "both"), default="both",
            help="certificate variant(s) to evaluate (default both)",
        )
        p.add_argument("--k", type=float, help="pin k (skips optimization)")
        p.add_argument("--m", type=float, help="pin m (variant t1)")
        p.add_argument("--p", type=float, help="pin p (variant t2)")
        p.add_argument("--q", type=float, help="pin q (variant t2)")
        p.add_argument("--grid", type=int, help="search grid resolution per axis")
        p.add_argument(
            "--tol", type=float, default=DEFAULT_VERIFY_TOL,
            help="verification tolerance (default 1e-8)",
        )

    def add_out_flag(p):
        p.add_argument("--out", metavar="PATH", help="also write the JSON report here")

    p = sub.add_parser("decompose", help="structural split and assumption check")
    add_input_flags(p)
    add_out_flag(p)

    p = sub.add_parser("certify", help="compute decay certificates")
    add_input_flags(p)
    add_cert_flags(p)
    add_out_flag(p)

    p = sub.add_parser("spectrum", help="pencil spectrum and localization")
    add_input_flags(p)
    add_cert_flags(p)
    add_out_flag(p)

    p = sub.add_parser("simulate", help="propagate and check the energy envelope")
    add_input_flags(p)
    add_cert_flags(p)
    add_out_flag(p)
    p.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV")
    p.add_argument(
        "--points", type=int, default=400, help="number of time samples (default 400)"
    )

    p = sub.add_parser("check", help="full pipeline: decompose through simulate")
    add_input_flags(p)
    add_cert_flags(p)
    add_out_flag(p)
    p.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV")
    p.add_argument(
        "--points", type=int, default=400, help="number of time samples (default 400)"
    )

    p = sub.add_parser("generate", help="write a generated pair to Matrix Market files")
    add_input_flags(p)
    add_out_flag(p)
    p.add_argument("--A-out", default="A.mtx", help="output path for A (default A.mtx)")
    p.add_argument("--D-out", default="D.mtx", help="output path for D (default D.mtx)")

    return parser


def build_pair(args) -> tuple[OperatorPair, dict]:
    """Materialize the operator pair and its input descriptor."""
    if args.generate is not None:
        if args.A or args.D:
            raise ValueError("--generate cannot be combined with --A/--D")
        family = _FAMILIES.get(args.generate.lower())
        if family is None:
            raise ValueError(
                f"unknown family {args.generate!r}; use scalar, wave, or random"
            )
        if family == "scalar":
            a = parse_complex(args.a)
            d = parse_complex(args.d)
            pair = gen_scalar(a, d)
            params = {"a": rpt.complex_obj(a), "d": rpt.complex_obj(d)}
        elif family == "wave":
            if args.n is None:
                raise ValueError("the wave family needs --n")
            d = parse_complex(args.d)
            if d.imag != 0.0:
                raise ValueError("wave damping --d must be real")
            pair = gen_damped_wave(args.n, args.gamma, d.real)
            params = {"n": args.n, "gamma": args.gamma, "d": d.real}
        else:
            if args.n is None:
                raise ValueError("the random family needs --n")
            pair = gen_random_valid(
                args.n, args.sector_tan_max, args.beta_min, args.seed
            )
            params = {
                "n": args.n,
                "sector_tan_max": args.sector_tan_max,
                "beta_min": args.beta_min,
            }
        doc = {"kind": "generator", "family": family, "seed": args.seed, "params": params}
        return pair, doc
    if not (args.A and args.D):
        raise ValueError("provide either --A and --D files or --generate FAMILY")
    A = mmio.read(args.A)
    D = mmio.read(args.D)
    pair = OperatorPair(A=A, D=D)
    return pair, {"kind": "files", "A": args.A, "D": args.D}


def _requested_variants(args) -> list[Variant]:
    return {
        "t1": [Variant.THEOREM1],
        "t2": [Variant.THEOREM2],
        "both": [Variant.THEOREM1, Variant.THEOREM2],
    }[args.variant]


def _pinned(args) -> bool:
    return any(v is not None for v in (args.k, args.m, args.p, args.q))


def run_certificates(dec, args) -> dict[str, Certificate | DecayCertError]:
    """One certificate (or captured error) per requested variant."""
    variants = _requested_variants(args)
    if _pinned(args):
        complete = []
        for var in variants:
            if var is Variant.THEOREM1 and args.k is not None and args.m is not None:
                complete.append(var)
            if (
                var is Variant.THEOREM2
                and args.k is not None
                and args.p is not None
                and args.q is not None
            ):
                complete.append(var)
        if not complete:
            if len(variants) == 1:
                need = "--k and --m" if variants[0] is Variant.THEOREM1 else "--k, --p and --q"
                raise ValueError(f"pinning variant {args.variant} needs {need}")
            raise ValueError("pinned parameters are incomplete for every variant")
        variants = complete
    out = {}
    config = SearchConfig(grid=args.grid) if args.grid else SearchConfig()
    for var in variants:
        try:
            if _pinned(args):
                if var is Variant.THEOREM1:
                    cert = make_certificate_t1(dec, Theorem1Params(k=args.k, m=args.m))
                else:
                    cert = make_certificate_t2(
                        dec, Theorem2Params(k=args.k, p=args.p, q=args.q)
                    )
            else:
                cert = optimize_rate(dec, var, config)
            out[var.value] = cert
        except DecayCertError as exc:
            out[var.value] = exc
    return out


def _best_certificate(certs) -> Certificate | None:
    best = None
    for cert in certs.values():
        if isinstance(cert, Certificate) and cert.valid:
            if best is None or cert.rate > best.rate:
                best = cert
    return best


def _certificates_doc(certs) -> dict:
    doc = {}
    for name, cert in certs.items():
        if isinstance(cert, Certificate):
            doc[name] = rpt.certificate_doc(cert)
        else:
            doc[name] = rpt.error_obj(cert)
    return doc


def _verification_doc(dec, cert, tol) -> tuple[dict, bool]:
    """Accretivity, norm equivalence, and contraction checks for one cert."""
    ok = True
    doc = {}
    try:
        vr = verify_accretivity(dec, cert, tol=tol)
        doc["accretivity"] = rpt.accretivity_doc(vr)
    except VerificationFailed as exc:
        doc["accretivity"] = rpt.error_obj(exc)
        ok = False
    lower, upper = verify_norm_equivalence(dec, cert.k)
    doc["norm_equivalence"] = {
        "lower": lower,
        "upper": upper,
        "guaranteed_lower": cert.equivalence_lower,
    }
    times = DEFAULT_CONTRACTION_TIMES
    factors = contraction_factors(dec, cert, times)
    bounds = np.exp(-cert.rate * np.asarray(times)) * (1.0 + CONTRACTION_RTOL)
    contraction_ok = bool(np.all(factors <= bounds))
    doc["contraction"] = {
        "times": list(times),
        "factors": [float(f) for f in factors],
        "ok": contraction_ok,
    }
    return doc, ok and contraction_ok


def _default_initial_data(n: int) -> tuple[np.ndarray, np.ndarray]:
    u0 = np.ones(n, dtype=complex) / np.sqrt(n)
    return u0, np.zeros(n, dtype=complex)


def _simulation_section(dec, cert, abscissa, args) -> tuple[dict, bool]:
    """Trajectory, envelope checks, and optional CSV; returns (doc, ok)."""
    # grid horizon from the true decay speed, not the certified one:
    # a conservative certificate would otherwise stretch the grid until
    # the energy underflows
    hint = -abscissa if abscissa < 0.0 else cert.rate
    grid = default_time_grid(hint, num=args.points)
    u0, u1 = _default_initial_data(dec.n)
    traj = propagate(dec, u0, u1, grid)
    C = envelope_constant(dec, cert)
    env_ok = check_envelope(traj, cert, C, rtol=1e-9)
    step_ok = check_stepwise_contraction(traj, cert, C)
    try:
        fit_rate(traj)
    except DecayCertError:
        pass
    csv_path = getattr(args, "csv", None)
    if csv_path:
        write_csv(traj, csv_path)
    doc = rpt.simulation_doc(
        traj,
        envelope_ok=env_ok,
        stepwise_ok=step_ok,
        envelope_constant=C,
        csv_path=csv_path,
    )
    return doc, env_ok and step_ok


def _emit(doc: dict, args) -> None:
    rpt.validate(doc)
    text = rpt.dumps(doc)
    sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)


def _run(args) -> int:
    timings: dict[str, float] = {}
    command = args.command

    if command == "generate":
        pair, input_doc = build_pair(args)
        if input_doc["kind"] != "generator":
            raise ValueError("generate needs --generate FAMILY, not input files")
        mmio.write(getattr(args, "A_out"), pair.A, comment="decaycert stiffness matrix")
        mmio.write(getattr(args, "D_out"), pair.D, comment="decaycert damping matrix")
        input_doc = dict(input_doc)
        input_doc["A"] = getattr(args, "A_out")
        input_doc["D"] = getattr(args, "D_out")
        doc = rpt.new_report(input_doc)
        _emit(doc, args)
        return 0

    t0 = time.perf_counter()
    pair, input_doc = build_pair(args)
    doc = rpt.new_report(input_doc)
    dec = decompose(pair)
    doc["assumptions"] = rpt.assumptions_doc(check_assumptions(dec), n=dec.n)
    timings["decompose"] = time.perf_counter() - t0

    if command == "decompose":
        doc["timings"] = timings
        _emit(doc, args)
        return 0

    t0 = time.perf_counter()
    certs = run_certificates(dec, args)
    best = _best_certificate(certs)
    doc["certificates"] = _certificates_doc(certs)
    doc["best_variant"] = best.variant.value if best else None
    timings["certify"] = time.perf_counter() - t0
    all_ok = best is not None

    if best is not None and command in ("certify", "check"):
        t0 = time.perf_counter()
        vdoc, vok = _verification_doc(dec, best, args.tol)
        doc["verification"] = vdoc
        all_ok = all_ok and vok
        timings["verify"] = time.perf_counter() - t0

    spectrum_report = None
    if command in ("spectrum", "simulate", "check"):
        t0 = time.perf_counter()
        spectrum_report = pencil_spectrum(dec)
        if best is not None:
            verify_localization(spectrum_report, best)
            all_ok = all_ok and bool(spectrum_report.localized)
        if command in ("spectrum", "check"):
            doc["spectrum"] = rpt.spectrum_doc(spectrum_report)
        timings["spectrum"] = time.perf_counter() - t0

    if command in ("simulate", "check") and best is not None:
        t0 = time.perf_counter()
        sdoc, sok = _simulation_section(
            dec, best, spectrum_report.spectral_abscissa, args
        )
        doc["simulation"] = sdoc
        all_ok = all_ok and sok
        timings["simulate"] = time.perf_counter() - t0

    doc["timings"] = timings
    _emit(doc, args)
    return 0 if all_ok else 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except _INPUT_ERRORS as exc:
        _emit_error(args, exc)
        return 1
    except DecayCertError as exc:
        _emit_error(args, exc)
        return 2


def _emit_error(args, exc) -> None:
    kind = "generator" if getattr(args, "generate", None) else "files"
    doc = rpt.new_report({"kind": kind})
    doc["error"] = rpt.error_obj(exc)
    try:
        _emit(doc, args)
    except OSError:
        pass
    print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
