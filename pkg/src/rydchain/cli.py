"""Command-line front end: sweeps, area tables, fits, solvable-point checks.

Every result file is written together with a ``<name>.manifest.txt`` that
records the command, all parameters, the seed and the package version, so
the CSV body can be reproduced byte for byte.  Floats are printed with
``repr``, the shortest round-trip decimal form.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 capacity.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import estimate_n_max, fit_exponential_decay, rk_ground_state_overlap
from .dynamics import InteractionRange
from .errors import CapacityError, NumericalError
from .montecarlo import SweepSpec, run_sweep
from .protocols import (
    HyperfinePolicy,
    ProtocolKind,
    mps_area_schedule,
    mps_area_schedule_polynomial,
)

SWEEP_HEADER = "protocol,N,v0_over_omega,disorder,realizations,mean_fidelity,std_error,min,max"

_PROTOCOLS = {
    "ghz2": ProtocolKind.GHZ2,
    "ghz3": ProtocolKind.GHZ3,
    "mps": ProtocolKind.DIMER_MPS,
    "transport": ProtocolKind.TRANSPORT,
}
_RANGES = {"full": InteractionRange.FULL, "nn": InteractionRange.NEAREST_NEIGHBOR}
_POLICIES = {"instant": HyperfinePolicy.INSTANTANEOUS, "same": HyperfinePolicy.SAME_AS_OMEGA}


def _fmt(x) -> str:
    return repr(float(x))


def parse_grid(text: str) -> tuple[float, ...]:
    """Either "lo:hi:count" (inclusive linspace) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r}: expected lo:hi:count")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        return tuple(float(v) for v in np.linspace(lo, hi, count))
    return tuple(float(v) for v in text.split(","))


def parse_n_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def write_manifest(out_base: Path, command: str, params: dict) -> Path:
    path = out_base.with_suffix(".manifest.txt")
    lines = [f"command={command}", f"version={__version__}",
             f"timestamp={datetime.now(timezone.utc).isoformat()}"]
    lines += [f"{key}={value}" for key, value in sorted(params.items())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def _write_csv(path: Path, header: str, rows) -> None:
    body = "\n".join([header] + list(rows)) + "\n"
    path.write_text(body, encoding="utf-8", newline="\n")


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        protocol=_PROTOCOLS[args.protocol],
        n_list=parse_n_list(args.n),
        grid=parse_grid(args.grid),
        disorder=args.disorder,
        realizations=args.realizations,
        master_seed=args.seed,
        interaction_range=_RANGES[args.range],
        z=args.z,
        blockade_range=args.blockade_range,
        alpha=args.alpha,
        beta=args.beta if args.beta is not None else float(np.sqrt(1.0 - args.alpha**2)),
    )
    out = Path(args.out)
    write_manifest(out, "sweep", {
        "protocol": args.protocol, "n": args.n, "grid": args.grid,
        "disorder": args.disorder, "realizations": args.realizations,
        "seed": args.seed, "range": args.range, "z": _fmt(args.z),
        "R": args.blockade_range, "alpha": _fmt(spec.alpha.real),
        "beta": _fmt(spec.beta.real), "workers": args.workers or "env",
    })
    records = run_sweep(spec, workers=args.workers)
    rows = [
        ",".join([
            r.protocol, str(r.n), _fmt(r.v0_over_omega), r.disorder, str(r.realizations),
            _fmt(r.mean_fidelity), _fmt(r.std_error), _fmt(r.fid_min), _fmt(r.fid_max),
        ])
        for r in records
    ]
    _write_csv(out.with_suffix(".csv"), SWEEP_HEADER, rows)
    print(f"wrote {out.with_suffix('.csv')} ({len(rows)} rows)")
    return 0


def cmd_mps_areas(args) -> int:
    rec = mps_area_schedule(args.n, args.z, args.blockade_range)
    poly = mps_area_schedule_polynomial(args.n, args.z, args.blockade_range)
    disagreement = float(np.abs(rec.thetas - poly.thetas).max())
    chosen = rec if args.method == "recursion" else poly
    out = Path(args.out)
    write_manifest(out, "mps-areas", {
        "n": args.n, "z": _fmt(args.z), "R": args.blockade_range,
        "method": args.method, "cross_method_disagreement": _fmt(disagreement),
    })
    _write_csv(
        out.with_suffix(".csv"),
        "k,theta",
        [f"{k + 1},{_fmt(th)}" for k, th in enumerate(chosen.thetas)],
    )
    print(f"wrote {out.with_suffix('.csv')}; methods agree within {disagreement:.3e}")
    if disagreement > 1e-8:
        raise NumericalError(
            f"recursion and polynomial schedules disagree by {disagreement:.3e}"
        )
    return 0


def cmd_fit(args) -> int:
    points = []
    for ln, raw in enumerate(Path(args.input).read_text(encoding="utf-8").splitlines(), 1):
        raw = raw.strip()
        if not raw:
            continue
        fields = raw.split(",")
        if ln == 1 and any(not _is_number(f) for f in fields[:2]):
            continue  # header
        try:
            points.append((float(fields[0]), float(fields[1])))
        except (ValueError, IndexError):
            raise ValueError(f"{args.input}: cannot parse line {ln}: {raw!r}") from None
    fit = fit_exponential_decay(points)
    print(f"a={_fmt(fit.a)} b={_fmt(fit.b)} sa={_fmt(fit.a_err)} sb={_fmt(fit.b_err)}")
    return 0


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def cmd_rk_check(args) -> int:
    if args.omega <= 0:
        raise ValueError("omega must be positive")
    if args.n > 10:
        raise ValueError("rk-check supports n <= 10")
    result = rk_ground_state_overlap(
        args.n, args.v0_over_omega, _RANGES[args.range], omega=args.omega
    )
    print(f"delta={_fmt(result.delta)} z={_fmt(result.z)} overlap={_fmt(result.overlap)}")
    return 0


def cmd_nmax(args) -> int:
    policy = _POLICIES[args.policy]
    omega = args.v0 / args.ratio
    rows = [
        ("transport", estimate_n_max(ProtocolKind.TRANSPORT, args.v0, omega, args.tau_exp,
                                     hyperfine_policy=policy)),
        ("ghz", estimate_n_max(ProtocolKind.GHZ3, args.v0, omega, args.tau_exp,
                               hyperfine_policy=policy)),
    ]
    for z in args.z:
        rows.append((f"mps_z{z:g}", estimate_n_max(ProtocolKind.DIMER_MPS, args.v0, omega,
                                                   args.tau_exp, z=z, hyperfine_policy=policy)))
    for name, n_max in rows:
        print(f"{name}={n_max}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydchain",
        description="Pulsed Rydberg-chain protocol simulator and analysis tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="disorder-averaged fidelity sweep, CSV output")
    p.add_argument("--protocol", choices=sorted(_PROTOCOLS), required=True)
    p.add_argument("--n", required=True, help="comma list of chain lengths")
    p.add_argument("--grid", required=True, help="V0/Omega grid: lo:hi:count or comma list")
    p.add_argument("--disorder", choices=["none", "iso", "aniso"], default="none")
    p.add_argument("--realizations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--R", dest="blockade_range", type=int, default=1)
    p.add_argument("--alpha", type=float, default=float(2**-0.5))
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--range", choices=sorted(_RANGES), default="full")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default="sweep", help="output basename")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mps-areas", help="pulse-angle table for the dimer preparation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--R", dest="blockade_range", type=int, default=1)
    p.add_argument("--method", choices=["recursion", "polynomial"], default="recursion")
    p.add_argument("--out", default="areas")
    p.set_defaults(func=cmd_mps_areas)

    p = sub.add_parser("fit", help="fit a*exp(-b(N-2)) to an (N,fidelity) CSV")
    p.add_argument("input")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("rk-check", help="ground-state overlap with the dimer target")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v0-over-omega", dest="v0_over_omega", type=float, required=True)
    p.add_argument("--range", choices=sorted(_RANGES), default="nn")
    p.add_argument("--omega", type=float, default=1.0)
    p.set_defaults(func=cmd_rk_check)

    p = sub.add_parser("nmax", help="largest chain fitting the coherence budget")
    p.add_argument("--tau-exp", dest="tau_exp", type=float, required=True, help="budget in us")
    p.add_argument("--v0", type=float, required=True, help="interaction strength in rad/us")
    p.add_argument("--ratio", type=float, required=True, help="V0/Omega operating point")
    p.add_argument("--policy", choices=sorted(_POLICIES), default="instant")
    p.add_argument("--z", type=float, nargs="*", default=[1.0, 10.0])
    p.set_defaults(func=cmd_nmax)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
