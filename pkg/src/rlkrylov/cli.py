"""Command line entry point: ``python -m rlkrylov <command> ...``.

Exit status 0 on success, 2 on usage errors (bad arguments, malformed
input files), 3 on numerical failure.
"""

import argparse
import csv
import sys

import numpy as np

from . import io
from .bound import gmres_bound_trace
from .coneig import coneigenvalue_moduli, con_diagonalize, con_schur
from .errors import ArgumentError, NumericalError
from .experiments import run_example
from .polyspace import approx_from_samples
from .randmat import estimate_condiag_probability
from .solver import csym, rgmres

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _prefix(args, default):
    return args.out or default


def _solve_common(args, method):
    kappa, M, b = io.read_problem(args.problem)
    if method == "csym":
        if kappa != 0:
            raise ArgumentError("csym solves M conj(z) = b; the problem file sets a nonzero kappa")
        rep = csym(M, b, tol=args.tol, maxit=args.maxit, precision=args.precision)
    else:
        rep = rgmres(kappa, M, b, tol=args.tol, maxit=args.maxit, precision=args.precision)
    bounds = None
    if args.with_bound:
        bt = gmres_bound_trace(M, b, kappa, steps=rep.iterations)
        bounds = {"": bt.B}
    paths = io.emit_outputs({"": rep.trace}, _prefix(args, method), bounds=bounds)
    print(f"iterations {rep.iterations}  converged {rep.converged}  "
          f"relative residual {rep.trace.relative[-1]:.3e}")
    for p in paths:
        print(p)


def cmd_solve(args):
    _solve_common(args, "solve")


def cmd_csym(args):
    _solve_common(args, "csym")


def cmd_coneig(args):
    _, M, _ = io.read_problem(args.problem)
    moduli = coneigenvalue_moduli(M)
    nM = np.linalg.norm(M)
    cs = con_schur(M)
    print("coneigenvalue moduli:", " ".join(f"{m:.12g}" for m in moduli))
    print(f"con-Schur residual ||M - U R U^T||/||M|| = "
          f"{np.linalg.norm(M - cs.U @ cs.R @ cs.U.T) / nM:.3e}")
    try:
        cd = con_diagonalize(M)
    except NumericalError as exc:
        print(f"condiagonalization: {exc}")
        return
    rec = cd.X @ np.diag(cd.Lambda) @ np.linalg.inv(cd.X).conj()
    print(f"condiagonalization residual ||M - X L conj(X^-1)||/||M|| = "
          f"{np.linalg.norm(M - rec) / nM:.3e}  cond(X) = {cd.cond_X:.3e}")


def cmd_bound(args):
    kappa, M, b = io.read_problem(args.problem)
    bt = gmres_bound_trace(M, b, kappa, steps=args.steps)
    rows = [["step", "E_j", "B_j"] + (["residual"] if args.with_solve else [])]
    res = None
    if args.with_solve:
        rep = rgmres(kappa, M, b, tol=0.0, maxit=len(bt.E))
        res = rep.trace.residual_norms
    for j in range(1, len(bt.E) + 1):
        row = [str(j), repr(float(bt.E[j - 1])), repr(float(bt.B[j - 1]))]
        if res is not None:
            row.append(repr(float(res[j])) if j < len(res) else repr(0.0))
        rows.append(row)
    path = _prefix(args, "bound") + ".csv"
    io.write_csv(path, rows)
    print(f"cond(X) {bt.cond_X:.6g}; wrote {path}")


def cmd_randmat(args):
    est = estimate_condiag_probability(args.n, args.kind, args.samples, args.seed)
    rows = [["n", "kind", "samples", "hits", "p_hat", "stderr", "expected"],
            [str(est.n), est.kind, str(est.samples), str(est.hits), repr(est.p_hat),
             repr(est.stderr), repr(est.expected)]]
    if args.out:
        io.write_csv(args.out + ".csv", rows)
    csv.writer(sys.stdout, lineterminator="\n").writerows(rows)


def cmd_approx(args):
    data = np.loadtxt(args.samples, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] not in (5, 9):
        raise ArgumentError(
            "approx needs columns r, Re z1, Im z1, Re z2, Im z2 followed by "
            "Re g1, Im g1, Re g2, Im g2 (or 5 columns with --function)")
    r = data[:, 0]
    z1 = data[:, 1] + 1j * data[:, 2]
    z2 = data[:, 3] + 1j * data[:, 4]
    if data.shape[1] == 9:
        g1 = data[:, 5] + 1j * data[:, 6]
        g2 = data[:, 7] + 1j * data[:, 8]
    else:
        f = _builtin_function(args.function)
        g1, g2 = f(z1), f(z2)
    one = np.allclose(z1, z2, rtol=0, atol=1e-14 * max(1.0, r.max()))
    p, err = approx_from_samples(r, z1, None if one else z2, g1, None if one else g2, args.degree)
    rows = [["k", "re", "im"]] + [[str(k), repr(float(c.real)), repr(float(c.imag))] for k, c in enumerate(p.coeffs)]
    rows.append(["sup_error", repr(err), "0.0"])
    path = _prefix(args, "approx") + ".csv"
    io.write_csv(path, rows)
    print(f"sampled sup error {err:.3e}; wrote {path}")


def _builtin_function(name):
    table = {"z": lambda z: z, "conj": np.conj, "abs": lambda z: np.abs(z) + 0j,
             "exp": np.exp, "expconj": lambda z: np.exp(np.conj(z))}
    if name not in table:
        raise ArgumentError(f"--function must be one of {sorted(table)}")
    return table[name]


def cmd_example(args):
    run = run_example(args.k, n=args.n, precision=args.precision, seed=args.seed,
                      tol=args.tol, maxit=args.maxit)
    bounds = None
    if args.with_bound:
        from .bound import gmres_bound_trace as gbt
        bounds = {}
        for label, d in run.diagonals.items():
            bounds[label] = gbt(np.diag(d), np.ones(len(d)), 0.0,
                                steps=len(run.traces[label]) - 1).B
    first = next(iter(run.diagonals.values()))
    paths = io.emit_outputs(run.traces, _prefix(args, f"example{args.k}"), bounds=bounds,
                            diagonal=first)
    for label, tr in run.traces.items():
        hit = tr.iterations_to(1e-8)
        print(f"{label}: {len(tr) - 1} iterations, final relative residual "
              f"{tr.relative[-1]:.3e}, reaches 1e-8 at {hit}")
    for p in paths:
        print(p)


def build_parser():
    parser = argparse.ArgumentParser(prog="rlkrylov", description=(
        "R-linear GMRES, CSYM and related tools for kappa*z + M conj(z) = b."))
    parser.add_argument("--precision", choices=("double", "dd"), default=None,
                        help="arithmetic for the solvers (default: double; dd for example 1)")
    parser.add_argument("--seed", type=int, default=1, help="random seed (default 1)")
    parser.add_argument("--out", default=None, help="output path prefix")
    # the global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=("double", "dd"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, text in (("solve", cmd_solve, "R-linear GMRES on a problem file"),
                           ("csym", cmd_csym, "CSYM on a problem file (kappa = 0, M symmetric)")):
        p = sub.add_parser(name, help=text, parents=[common])
        p.add_argument("problem")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--maxit", type=int, default=None)
        p.add_argument("--with-bound", action="store_true",
                       help="add the min-max bound column (M must be condiagonalizable)")
        p.set_defaults(func=fn)

    p = sub.add_parser("coneig", parents=[common], help="coneigenvalue moduli and decomposition residuals")
    p.add_argument("problem")
    p.set_defaults(func=cmd_coneig)

    p = sub.add_parser("bound", parents=[common], help="min-max residual bounds per step")
    p.add_argument("problem")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--with-solve", action="store_true", help="add the rgmres residual column")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("randmat", parents=[common], help="Monte Carlo condiagonalizability probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("complex", "real"), default="complex")
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_randmat)

    p = sub.add_parser("approx", parents=[common], help="fit a P(r2) polynomial to samples on a curve")
    p.add_argument("samples", help="CSV with header: r,re_z1,im_z1,re_z2,im_z2[,re_g1,im_g1,re_g2,im_g2]")
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--function", default="z", help="built-in f when the CSV has no values")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("example", parents=[common], help="run one of the diagonal test problems 1..5")
    p.add_argument("k", type=int, choices=range(1, 6))
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--maxit", type=int, default=None)
    p.add_argument("--with-bound", action="store_true")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
