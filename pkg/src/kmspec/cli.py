"""Command line front end: ``kmspec <subcommand> --chain FILE --out DIR``.

Every subcommand writes one CSV per table and a ``summary.json`` holding the
checks it ran.  The exit code is 0 iff every asserted check passed; a failure
inside a module produces ``error.json`` and a nonzero code.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _backend, acceptance
from .banded_extension import contour_pt_pieces, fourier_resolvent
from .chain_model import BandedChain
from .chainspec import load_chain
from .errors import ConfigInvalid, KMSpecError
from .jacobi_map import jacobi_from_moments, lanczos_jacobi, moments_from_operator, resolvent_G
from .kernel import fbasis_kernel, generating_function, gf_partial_sum, pt_oracle, pt_oracle_matrix, pt_spectral
from .montecarlo import ALGORITHM, DEFAULT_BLOCK, estimates_from_counts, simulate_counts
from .orthopoly import OrthoPolySystem, coefficients_Q, roots_Qn
from .rh_verify import check_asymptotics, check_jump, gf_relative_difference
from .spectral_measure import (arcsine_measure, moments, pentadiagonal_measure, psi_n, two_sided_measure)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_MODULE = 0, 1, 2, 3


def fmt(x) -> str:
    """Shortest round-trip text for numbers; everything else via ``str``."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


class Run:
    """Accumulates tables, checks and metadata for one subcommand."""

    def __init__(self, command: str, out: Path, meta: dict):
        self.command = command
        self.out = out
        self.meta = meta
        self.checks: list[dict] = []

    def table(self, name: str, header: list[str], rows) -> None:
        with open(self.out / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([fmt(v) for v in r])

    def check(self, cid: str, expected, actual, tolerance, ok: bool, asserted: bool = True) -> None:
        self.checks.append({"id": cid, "expected": _jsonable(expected), "actual": _jsonable(actual),
                            "tolerance": tolerance, "pass": bool(ok), "asserted": asserted})

    def max_error(self, cid: str, errors, tolerance: float) -> None:
        worst = float(np.max(errors)) if len(errors) else 0.0
        self.check(cid, 0.0, worst, tolerance, worst <= tolerance)

    def finish(self) -> int:
        ok = all(c["pass"] for c in self.checks if c["asserted"])
        summary = {"command": self.command, "meta": self.meta, "checks": self.checks, "pass": ok}
        (self.out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return EXIT_OK if ok else EXIT_CHECK_FAILED


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def parse_z(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ConfigInvalid(f"cannot parse complex number {text!r}") from exc


def _system(chain: BandedChain, n: int) -> OrthoPolySystem:
    """Exact recurrence for tridiagonal chains; otherwise the Jacobi operator's system."""
    if chain.m == 1:
        return OrthoPolySystem.from_chain(chain)
    return lanczos_jacobi(chain, n).system()


def _density_measure(chain: BandedChain):
    if chain.name == "chebyshev":
        return arcsine_measure()
    if chain.name == "pentadiagonal":
        return pentadiagonal_measure()
    return None


def cmd_moments(chain, args, run: Run):
    k_max = args.n if args.n is not None else 8
    mom = moments_from_operator(chain, k_max)
    rows = []
    for k, v in enumerate(mom.m):
        if mom.exact:
            rows.append((k, float(v), v.numerator, v.denominator))
        else:
            rows.append((k, float(v), "", ""))
    run.table("moments", ["k", "m_k", "numerator", "denominator"], rows)
    worst = min(mom.hankel_min_eigenvalues())
    run.check("hankel_positivity", ">= -1e-10", worst, 1e-10, worst >= -1e-10)
    run.meta["exact"] = mom.exact


def cmd_jacobi(chain, args, run: Run):
    n = args.n if args.n is not None else 8
    lan = lanczos_jacobi(chain, n)
    mom = jacobi_from_moments(moments_from_operator(chain, 2 * n), n)
    rows = [(j, lan.a[j], lan.b[j], mom.a[j], mom.b[j]) for j in range(n)]
    run.table("jacobi", ["j", "a_j", "b_j", "a_j_moments", "b_j_moments"], rows)
    diff = max(np.max(np.abs(lan.a[:n] - mom.a[:n])), np.max(np.abs(lan.b[:n] - mom.b[:n])))
    run.max_error("route_agreement", [diff], 1e-8)


def cmd_poly(chain, args, run: Run):
    n = args.n if args.n is not None else 8
    sys_ = _system(chain, n + 2)
    rows = []
    for j in range(n + 1):
        for power, c in enumerate(coefficients_Q(sys_, j)):
            rows.append((j, power, float(c), str(c) if isinstance(c, Fraction) else ""))
    run.table("coefficients", ["j", "power", "coefficient", "exact"], rows)
    root_rows, bad = [], 0
    prev = None
    for k in range(1, n + 1):
        r = roots_Qn(sys_, k)
        root_rows.extend((k, idx, x) for idx, x in enumerate(r))
        if prev is not None and not (np.all(r[:-1] < prev) and np.all(prev < r[1:])):
            bad += 1
        prev = r
    run.table("roots", ["n", "k", "root"], root_rows)
    run.check("interlacing", 0, bad, 0, bad == 0)


def cmd_measure(chain, args, run: Run):
    n = args.n if args.n is not None else 16
    sys_ = _system(chain, n + 1)
    mu = psi_n(sys_, n)
    run.table("psi_n", ["node", "weight"], zip(mu.nodes, mu.weights))
    ref = moments_from_operator(chain, 2 * n - 1, exact=False).values
    errs = [abs(moments(mu, k) - ref[k]) for k in range(2 * n)]
    run.max_error("gauss_exactness", errs, 1e-10)
    dens = _density_measure(chain)
    if dens is not None:
        a, b = dens.support
        lam = np.linspace(a, b, 401)[1:-1]
        run.table("density", ["lambda", "density"], zip(lam, dens.density(lam)))
        errs = [abs(moments(dens, k) - ref[k]) for k in range(min(2 * n, 9))]
        run.max_error("density_moments", errs, 1e-8)
    if chain.name == "pentadiagonal":
        contour = two_sided_measure()
        rows = []
        for idx, p in enumerate(contour.pieces):
            lam = np.linspace(p.a, p.b, 101)[1:-1]
            rows.extend((idx, p.side, x, d) for x, d in zip(lam, p.density(lam)))
        run.table("contour", ["piece", "side", "lambda", "density"], rows)


def cmd_pt(chain, args, run: Run):
    tmax = args.tmax if args.tmax is not None else 20
    size = 6 if chain.m == 1 else 4
    rows, errs = [], []
    if chain.m == 1:
        n = args.n if args.n is not None else 16
        n = max(n, (tmax + 2 * (size - 1)) // 2 + 1)
        sys_ = _system(chain, n + 1)
        mu = psi_n(sys_, n)
        for t in range(tmax + 1):
            for i in range(size):
                for j in range(size):
                    ps, po = pt_spectral(sys_, mu, i, j, t), pt_oracle(chain, i, j, t)
                    rows.append((i, j, t, ps, po, abs(ps - po)))
                    errs.append(abs(ps - po))
        run.table("pt", ["i", "j", "t", "p_spectral", "p_oracle", "abs_diff"], rows)
        run.max_error("spectral_vs_oracle", errs, 1e-10)
        run.meta["psi_n"] = n
        return
    for t in range(tmax + 1):
        K = fbasis_kernel(chain, t, size)
        O = pt_oracle_matrix(chain, t, size)
        for i in range(size):
            for j in range(size):
                rows.append((i, j, t, K[i, j], O[i, j], abs(K[i, j] - O[i, j])))
                errs.append(abs(K[i, j] - O[i, j]))
    run.table("pt", ["i", "j", "t", "p_fbasis", "p_oracle", "abs_diff"], rows)
    run.max_error("fbasis_vs_oracle", errs, 1e-7)


def _z_list(args):
    if args.z is not None:
        return [parse_z(args.z)]
    return list(acceptance.GF_Z)


def cmd_gf(chain, args, run: Run):
    zs = _z_list(args)
    if any(abs(z) <= 1.0 for z in zs):
        raise ConfigInvalid("generating functions need |z| > 1")
    pairs = [(i, j) for i in range(3) for j in range(3)] if chain.m == 1 else [(0, 0)]
    sys_ = _system(chain, 65)
    measure = _density_measure(chain) if chain.m == 1 else None
    if measure is None:
        measure = psi_n(sys_, 64)
    rows, excess = [], []
    for z in zs:
        for i, j in pairs:
            g = generating_function(sys_, measure, i, j, z)
            s, tail = gf_partial_sum(chain, i, j, z, 200)
            rows.append((z.real, z.imag, i, j, g.real, g.imag, s.real, s.imag, tail))
            excess.append(max(0.0, abs(g - s) - tail))
    run.table("gf", ["re_z", "im_z", "i", "j", "re_G", "im_G", "re_partial", "im_partial", "tail_bound"], rows)
    run.max_error("spectral_vs_partial_sums", excess, 1e-8)
    res_rows, res_err = [], []
    for z in zs:
        g = -z * resolvent_G(chain, z)
        s, tail = gf_partial_sum(chain, 0, 0, z, 200)
        res_rows.append((z.real, z.imag, g.real, g.imag))
        res_err.append(max(0.0, abs(g - s) - tail))
    run.table("resolvent", ["re_z", "im_z", "re_G00", "im_G00"], res_rows)
    run.max_error("resolvent_vs_partial_sums", res_err, 1e-8)
    if chain.name == "pentadiagonal":
        errs = [abs(resolvent_G(chain, z) - fourier_resolvent(z)) for z in zs]
        run.max_error("resolvent_vs_fourier", errs, 1e-7)


def cmd_rh_check(chain, args, run: Run):
    measure = _density_measure(chain)
    if measure is None:
        raise ConfigInvalid("rh-check needs a chain with a closed-form density (chebyshev or pentadiagonal)")
    n_max = args.n if args.n is not None else 4
    sys_ = _system(chain, n_max + 8)
    a, b = measure.support
    xs = a + (b - a) * np.array([0.05, 0.25, 0.52, 0.65, 0.9])
    xs = [float(x) for x in xs if abs(x) > 1e-3]
    jump_rows, jump = [], []
    for n in range(1, n_max + 1):
        for x in xs:
            r = check_jump(n, measure, x, sys_)
            jump_rows.append((n, x, r.residual, r.column1_residual))
            jump.append(r.residual)
    run.table("jump", ["n", "x", "residual", "column1_residual"], jump_rows)
    run.max_error("jump_residual", jump, 1e-6)
    asym_rows, slopes, monotone = [], [], True
    for n in range(n_max + 1):
        r = check_asymptotics(n, measure, sys_)
        asym_rows.extend((n, z.real, z.imag, d) for z, d in zip(r.z, r.deviations))
        slopes.append(r.slope)
        monotone &= r.monotone
    run.table("asymptotics", ["n", "re_z", "im_z", "deviation"], asym_rows)
    worst = max(abs(s + 1.0) for s in slopes)
    run.check("normalization_slope", -1.0, slopes, 0.2, worst <= 0.2 and monotone)
    gf_rows, rel = [], []
    for n in range(n_max + 1):
        for z in _z_list(args):
            d = gf_relative_difference(n, measure, sys_, z)
            gf_rows.append((n, z.real, z.imag, d))
            rel.append(d)
    run.table("gf_from_rh", ["n", "re_z", "im_z", "relative_difference"], gf_rows)
    run.max_error("gf_from_rh", rel, 1e-6)


def cmd_contour_pt(chain, args, run: Run):
    if chain.name != "pentadiagonal":
        raise ConfigInvalid("contour-pt is implemented for the pentadiagonal chain only")
    tmax = args.tmax if args.tmax is not None else 10
    size = 4
    contour = two_sided_measure()
    piece_rows, rows, errs = [], [], []
    for t in range(tmax + 1):
        for i in range(size):
            for j in range(size):
                pieces = contour_pt_pieces(i, j, t, contour)
                for idx, (side, v) in enumerate(pieces):
                    piece_rows.append((i, j, t, idx, side, v))
                total = sum(v for _, v in pieces)
                o = pt_oracle(chain, i, j, t)
                rows.append((i, j, t, total, o, abs(total - o)))
                errs.append(abs(total - o))
    run.table("contour_pieces", ["i", "j", "t", "piece", "side", "value"], piece_rows)
    run.table("contour_pt", ["i", "j", "t", "p_contour", "p_oracle", "abs_diff"], rows)
    run.max_error("contour_vs_oracle", errs, 1e-6)


def cmd_mc(chain, args, run: Run):
    tmax = args.tmax if args.tmax is not None else 10
    trials = args.trials if args.trials is not None else 10 ** 5
    seed = args.seed if args.seed is not None else 0
    if trials < 1:
        raise ConfigInvalid("trials must be at least 1")
    counts = simulate_counts(chain, tmax, trials, seed)
    rows, outside = [], 0
    jmax = min(6, chain.m * tmax)
    for t in range(tmax + 1):
        ref = pt_oracle_matrix(chain, t, jmax + 1)[0]
        for e in estimates_from_counts(counts, t, trials)[:jmax + 1]:
            ok = e.within(ref[e.j])
            outside += not ok
            rows.append((t, e.j, e.estimate, e.stderr, ref[e.j], ok))
    run.table("mc", ["t", "j", "estimate", "stderr", "p_oracle", "within_4se"], rows)
    run.check("within_4_standard_errors", 0, outside, 0, outside == 0, asserted=False)
    run.meta.update({"rng": ALGORITHM, "seed": seed, "trials": trials, "block": DEFAULT_BLOCK})


def cmd_report(chain, args, run: Run):
    records = acceptance.run_all()
    run.table("acceptance", ["id", "pass", "actual", "tolerance"],
              ((r["id"], r["pass"], json.dumps(r["actual"]), r["tolerance"]) for r in records))
    for r in records:
        run.check(r["id"], r["expected"], r["actual"], r["tolerance"], r["pass"])


COMMANDS = {"moments": cmd_moments, "jacobi": cmd_jacobi, "poly": cmd_poly, "measure": cmd_measure,
            "pt": cmd_pt, "gf": cmd_gf, "rh-check": cmd_rh_check, "contour-pt": cmd_contour_pt,
            "mc": cmd_mc, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmspec", description="Spectral computations for banded reversible chains.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--chain", help="chain description (JSON); optional for report")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--tmax", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--z")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = {"backend": _backend.BACKEND, "chain_file": args.chain}
    try:
        if args.chain is None and args.command != "report":
            raise ConfigInvalid(f"{args.command} requires --chain")
        chain = load_chain(args.chain) if args.chain is not None else None
        if chain is not None:
            meta["chain"] = chain.name
            meta["bandwidth"] = chain.m
        run = Run(args.command, out, meta)
        COMMANDS[args.command](chain, args, run)
        return run.finish()
    except KMSpecError as exc:
        record = {"command": args.command, "error": exc.code, "type": type(exc).__name__, "message": str(exc)}
        (out / "error.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        print(json.dumps(record), file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, ConfigInvalid) else EXIT_MODULE


if __name__ == "__main__":
    sys.exit(main())
