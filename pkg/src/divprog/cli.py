"""Command-line front end.

Subcommands map one-to-one onto library operations; table-like results
go to CSV files under --out-dir, single-object results go to stdout as
JSON.  Exit codes: 0 success, 2 for configuration or usage problems,
3 when a sweep's configured envelope threshold is breached (CI gating).

--threads is accepted for interface stability and recorded in report
headers; computation is vectorized and the flag does not fan out work.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bilinear as bl
from . import sweeps
from .characters import congruence_bound_report, fourth_moment, multiplicative_congruence_count
from .errors import ConfigInvalid
from .kloosterman import check_weil, kloosterman, kloosterman_batch_over_a
from .mainterm import error_vector, exceptional_set, interval_residues
from .poisson import BumpFunction, ProductTestFunction, poisson_tau, poisson_tau_twisted
from .tausieve import divisor_sum_progressions, total_divisor_sum
from .voronoi import voronoi_error_terms

_DEFAULT_BUMPS = ((2.5, 1.6), (3.0, 2.2))  # the documented Poisson test function


def _json_out(doc) -> None:
    print(sweeps._json_dumps(doc))


def _parse_pair(text: str, flag: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigInvalid(f"{flag}: expected two comma-separated integers, got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_float_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigInvalid(f"{flag}: expected center,radius, got {text!r}")
    return float(parts[0]), float(parts[1])


def _residue_set(text: str, q: int) -> list[int]:
    """Either 'B,A' (interval, lenient reduction) or a file of residues."""
    path = Path(text)
    if path.is_file():
        residues = [int(line) for line in path.read_text().split()]
        return sorted({a % q for a in residues})
    try:
        B, A = _parse_pair(text, "--set")
    except ValueError as exc:
        raise ConfigInvalid(f"--set: neither a file nor 'B,A': {text!r}") from exc
    residues, _ = interval_residues(q, B, A, strict=False)
    return sorted(set(residues))


def _out_path(args, default_name: str) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / default_name


def _cmd_tau(args) -> int:
    vec = divisor_sum_progressions(args.x, args.q)
    if args.a is not None:
        _json_out({"X": args.x, "q": args.q, "a": args.a % args.q, "S": vec[args.a]})
        return 0
    rows = [{"a": a, "S": int(vec.sums[a])} for a in range(args.q)]
    assert vec.total() == total_divisor_sum(args.x)
    path = _out_path(args, f"tau_x{args.x}_q{args.q}.csv")
    sweeps.emit_report(rows, args.format, path, seed=args.seed)
    print(path)
    return 0


def _cmd_errors(args) -> int:
    residues = _residue_set(args.set, args.q)
    vec = error_vector(args.x, args.q)
    rows = [
        {"a": a, "S": int(vec.S[a]), "M": float(vec.M[a]), "R": float(vec.R[a])}
        for a in residues
    ]
    path = _out_path(args, f"errors_x{args.x}_q{args.q}.csv")
    sweeps.emit_report(rows, args.format, path, seed=args.seed)
    print(path)
    return 0


def _cmd_exceptional(args) -> int:
    members = exceptional_set(args.x, args.p, args.kappa)
    rows = [{"a": a} for a in members]
    path = _out_path(args, f"exceptional_x{args.x}_p{args.p}.csv")
    sweeps.emit_report(rows, args.format, path, seed=args.seed)
    print(path)
    return 0


def _cmd_kloosterman(args) -> int:
    if args.batch_a:
        lo, hi = _parse_pair(args.batch_a, "--batch-a")
        a_vals = list(range(lo, hi + 1))
        ks = kloosterman_batch_over_a(args.d, args.m, a_vals)
        rows = [{"a": a, "K": float(k)} for a, k in zip(a_vals, ks)]
        path = _out_path(args, f"kloosterman_d{args.d}_m{args.m}.csv")
        sweeps.emit_report(rows, args.format, path, seed=args.seed)
        print(path)
        return 0
    if args.n is None:
        raise ConfigInvalid("kloosterman: need --n or --batch-a")
    w = check_weil(args.d, args.m, args.n)
    _json_out({
        "d": args.d, "m": args.m, "n": args.n,
        "value": w.value, "weil_bound": w.bound, "weil_ok": w.ok,
    })
    return 0


def _cmd_bilinear(args) -> int:
    B, A = _parse_pair(args.I, "--I")
    M, N = _parse_pair(args.J, "--J")
    rng = np.random.default_rng(np.random.PCG64(args.seed))
    if args.weights == "pm1":
        alpha = rng.choice([-1.0, 1.0], size=A)
        nu = rng.choice([-1.0, 1.0], size=N)
    else:
        data = json.loads(Path(args.weights).read_text())
        alpha = np.asarray(data["alpha"], dtype=np.complex128)
        nu = np.asarray(data["nu"], dtype=np.complex128)
    if args.fast:
        alpha = np.ones(A)
    inst = bl.BilinearInstance(d=args.d, I=(B, A), J=(M, N), alpha=alpha, nu=nu)
    value = bl.bilinear_sum_unweighted_a(inst) if args.fast else bl.bilinear_sum(inst)
    b21 = bl.bilinear_bound_initial_interval(A, N, args.d)
    b22 = bl.bilinear_bound_general(A, N, args.d)
    _json_out({
        "d": args.d, "A": A, "N": N,
        "value_re": value.real, "value_im": value.imag,
        "bound_21": b21, "bound_22": b22,
        "ratios": {"initial_interval": abs(value) / b21, "general": abs(value) / b22},
        "conditions_initial_interval": bool(
            M == 0 and bl.initial_interval_conditions(A, N, args.d)
        ),
    })
    return 0


def _cmd_voronoi_check(args) -> int:
    q = args.q
    if args.a == "all-coprime":
        residues = [a for a in range(1, q) if math.gcd(a, q) == 1]
    else:
        residues = sorted({int(t) % q for t in args.a.split(",")})
    vec = error_vector(args.x, q)
    results = voronoi_error_terms(args.x, q, residues, args.y, eps=args.eps)
    rows = []
    for r in results:
        exact = float(vec.R[r.a])
        rows.append({
            "a": r.a,
            "R_exact": exact,
            "R_voronoi": r.approx_R,
            "residual": exact - r.approx_R,
            "budget": r.budget,
        })
    path = _out_path(args, f"voronoi_x{args.x}_q{q}.csv")
    sweeps.emit_report(rows, args.format, path, seed=args.seed)
    print(path)
    return 0


def _cmd_poisson_check(args) -> int:
    (cx, rx) = _parse_float_pair(args.gx, "--gx")
    (cy, ry) = _parse_float_pair(args.gy, "--gy")
    g = ProductTestFunction(BumpFunction(cx, rx), BumpFunction(cy, ry))
    if args.chi is not None:
        chk = poisson_tau_twisted(g, args.q, args.chi)
        _json_out({
            "q": args.q, "chi": args.chi,
            "lhs_re": chk.lhs.real, "lhs_im": chk.lhs.imag,
            "rhs_re": chk.rhs.real, "rhs_im": chk.rhs.imag,
            "eta_re": chk.eta.real, "eta_im": chk.eta.imag,
            "residual": chk.residual,
            "m_cutoffs": list(chk.m_cutoffs), "freq_converged": chk.freq_converged,
        })
        return 0
    if args.z is None:
        raise ConfigInvalid("poisson-check: need --z or --chi")
    chk = poisson_tau(g, args.q, args.z)
    _json_out({
        "q": args.q, "z": args.z,
        "lhs_re": chk.lhs.real, "lhs_im": chk.lhs.imag,
        "rhs_re": chk.rhs.real, "rhs_im": chk.rhs.imag,
        "tau_h0": chk.tau_h0, "residual": chk.residual,
        "m_cutoffs": list(chk.m_cutoffs), "freq_converged": chk.freq_converged,
    })
    return 0


def _cmd_moment4(args) -> int:
    moment = fourth_moment(args.p, args.k, args.h)
    _json_out({
        "p": args.p, "K": args.k, "H": args.h,
        "moment": moment,
        "h_squared_ratio": moment / max(args.h, 1) ** 2,
    })
    return 0


def _cmd_congcount(args) -> int:
    parts = [int(t) for t in args.boxes.split(",")]
    if len(parts) != 8:
        raise ConfigInvalid("--boxes: expected 8 comma-separated integers a1,b1,...,a4,b4")
    boxes = [(parts[i], parts[i + 1]) for i in range(0, 8, 2)]
    count = multiplicative_congruence_count(args.p, *boxes)
    rep = congruence_bound_report(count, args.p, *boxes)
    _json_out({"p": args.p, "count": count, "bound_ratio": rep.ratio, "envelope": rep.envelope})
    return 0


def _cmd_sweep(args) -> int:
    cfg = sweeps.ExperimentConfig.from_json(args.config)
    if args.seed_override is not None:
        cfg = sweeps.ExperimentConfig(
            experiment=cfg.experiment, x_grid=cfg.x_grid, modulus_grid=cfg.modulus_grid,
            set_kind=cfg.set_kind, lengths=cfg.lengths, offsets=cfg.offsets,
            kappas=cfg.kappas, seed=args.seed_override, eps=cfg.eps, thresholds=cfg.thresholds,
        )
    result = sweeps.run_theorem_sweep(cfg, args.out_dir, fmt=args.format)
    _json_out(result.summary)
    for p in result.paths:
        print(p, file=sys.stderr)
    return 3 if result.breaches else 0


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # The same flags are attached to the top-level parser (with real
    # defaults) and to every subparser (defaulting to SUPPRESS), so
    # they are accepted on either side of the subcommand name.
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--threads", type=int,
                        default=d if suppress else 1,
                        help="accepted for compatibility; no-op")
    parser.add_argument("--seed", type=int, default=d if suppress else 0,
                        help="seed for any randomized inputs")
    parser.add_argument("--out-dir", default=d if suppress else ".",
                        help="directory for report files")
    parser.add_argument("--format", choices=("csv", "json"),
                        default=d if suppress else "csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="divprog",
        description="Divisor sums over progressions: exact computations and bound experiments.",
    )
    _add_global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("tau", "S(X; a, q) for one or all residues")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_tau)

    p = add("errors", "S, M, R over a residue set")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--set", required=True, help="interval 'B,A' or a file of residues")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_errors)

    p = add("exceptional", "residues with R >= X^(1/3 - kappa)")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_exceptional)

    p = add("kloosterman", "K_d(m, n) scalar or batched over a")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--batch-a", help="inclusive range 'lo,hi' of a values")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_kloosterman)

    p = add("bilinear", "bilinear Kloosterman sum and bound ratios")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--I", required=True, help="interval 'B,A'")
    p.add_argument("--J", required=True, help="interval 'M,N'")
    p.add_argument("--weights", default="pm1", help="'pm1' or a JSON file {alpha, nu}")
    p.add_argument("--fast", action="store_true", help="alpha=1 collapsed-kernel route")
    p.set_defaults(fn=_cmd_bilinear)

    p = add("voronoi-check", "transform-side R against the exact R")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--a", required=True, help="comma list of residues or 'all-coprime'")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_voronoi_check)

    p = add("poisson-check", "both sides of the summation formula")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--z", type=int)
    p.add_argument("--chi", type=int, help="character index (twisted variant)")
    p.add_argument("--gx", default=f"{_DEFAULT_BUMPS[0][0]},{_DEFAULT_BUMPS[0][1]}")
    p.add_argument("--gy", default=f"{_DEFAULT_BUMPS[1][0]},{_DEFAULT_BUMPS[1][1]}")
    p.set_defaults(fn=_cmd_poisson_check)

    p = add("moment4", "fourth moment of window character sums")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.set_defaults(fn=_cmd_moment4)

    p = add("congcount", "x1 x2 = x3 x4 (mod p) box count")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--boxes", required=True, help="a1,b1,a2,b2,a3,b3,a4,b4 inclusive")
    p.set_defaults(fn=_cmd_congcount)

    p = add("sweep", "run a configured experiment grid")
    p.add_argument("--config", required=True)
    p.add_argument("--seed-override", type=int, dest="seed_override")
    p.set_defaults(fn=_cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigInvalid as exc:
        print(f"divprog: config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"divprog: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
