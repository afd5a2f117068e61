"""Deterministic experiment harness.

Subcommands:
  selftest     run every exact identity suite at minimal sizes
  verify       per-trial certificate runs over a (p, k, d, m) grid
  cusp-census  cusp counts of general fibers against the generic values
  interpolate  fit a curve through interior points from a CSV file

Reports are byte-deterministic for a fixed configuration: every trial
derives its own generator from the global seed hashed with
(check name, p, k, d, m, trial), so scheduling cannot reorder entropy,
and rows are emitted in sorted order.  Checks are tagged identity or
genericity; only identity failures affect the exit code (0 pass,
1 verification failure, 2 usage or input error).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from . import boundary as boundary_mod
from . import curves, family
from .boundary import Boundary, boundary_cusp_census, frobenius_factorization_check
from .errors import (
    A1LabError,
    CertificateFailure,
    GenericityExhausted,
    IdentityFailure,
    PointOnBoundary,
)
from .field import Field
from .unipoly import UniPoly

CENSUS_COLUMNS = ["p", "k", "d", "m", "seed", "pi_nonzero", "cusp_count",
                  "expected", "tangent_cone_ordinary",
                  "total_space_smooth_at_cusps", "boundary_cusp_count",
                  "genericity_exhausted"]

RESULT_COLUMNS = ["check_name", "p", "k", "d", "m", "trial", "klass", "pass",
                  "detail"]


@dataclass
class RunConfig:
    p_list: list
    k: int | None
    d: int
    m: str  # integer as string, or "all"
    trials: int
    seed: int
    sigma_mode: str
    out: str | None
    fmt: str
    parallelism: int
    timestamps: bool = False
    d_min: int | None = None
    d_max: int | None = None
    points: str | None = None


def derive_rng(seed: int, check_name: str, p: int, k: int, d: int, m: int,
               trial: int) -> random.Random:
    """Per-trial generator: global seed xor a stable hash of the slot."""
    material = f"{check_name}|{p}|{k}|{d}|{m}|{trial}".encode()
    h = int.from_bytes(hashlib.sha256(material).digest()[:8], "big")
    return random.Random(seed ^ h)


def auto_ext(p: int) -> int:
    """Smallest k with p^k >= 2^12, the default census field size."""
    k = 1
    while p**k < 2**12:
        k += 1
    return k


def _thread_count(requested: int) -> int:
    env = os.environ.get("A1LAB_THREADS")
    if env:
        return max(1, int(env))
    return max(1, requested)


def _run_tasks(tasks, parallelism: int) -> list:
    n = _thread_count(parallelism)
    if n <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _sort_rows(rows: list) -> list:
    return sorted(rows, key=lambda r: (r.get("check_name", ""), r.get("p", 0),
                                       r.get("d", 0), r.get("m", 0),
                                       r.get("trial", r.get("seed", 0))))


def _report_bytes(report: dict, fmt: str, table: str) -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2,
                           default=str) + "\n").encode()
    buf = io.StringIO()
    columns = CENSUS_COLUMNS if table == "census" else RESULT_COLUMNS
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore",
                            lineterminator="\n")
    writer.writeheader()
    for row in report[table]:
        writer.writerow(row)
    return buf.getvalue().encode()


def _emit(report: dict, out: str | None, fmt: str, table: str) -> None:
    data = _report_bytes(report, fmt, table)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

def cmd_selftest(args) -> int:
    primes = args.p or [2, 3]
    checks = []

    def record(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
            print(f"PASS {name}")
        except A1LabError as exc:
            checks.append((name, False, f"{type(exc).__name__}: {exc}"))
            print(f"FAIL {name}: {type(exc).__name__}: {exc}", file=sys.stderr)

    for p in primes:
        f = Field(p, 2 if p == 2 else 1, seed=0)
        rng = random.Random(1)
        b_random = Boundary.random(f, rng)
        b_special = Boundary.special(f)
        record(f"frobenius-factorization p={p}",
               lambda b1=b_random, b2=b_special: (
                   frobenius_factorization_check(b1),
                   frobenius_factorization_check(b2)))
        v = UniPoly.from_elements(f, [f.sample(rng), f.sample(rng)])
        w = UniPoly.from_elements(f, [f.sample(rng), f.sample(rng)])
        record(f"root-form-derivative p={p}",
               lambda b=b_special, v=v, w=w:
               boundary_mod.special_root_form_derivative_check(b, v, w))
        for d in range(p, p + 4):
            spec = family.FamilySpec.sample(b_random, d, rng)
            record(f"gradient p={p} d={d}",
                   lambda s=spec: family.gradient_check(s))
            fiber = family.FiberParams.sample(spec, rng)
            record(f"equation-pullback p={p} d={d}",
                   lambda fb=fiber: family.equation_pullback_check(fb))
            params = curves.CurveParams.sample(b_random, d, d % p, rng)
            record(f"tangent-determinant p={p} d={d}",
                   lambda cp=params: curves.tangent_determinant_check(
                       curves.build_curve(cp)))
            record(f"delta-identity p={p} d={d}",
                   lambda p0=p, d0=d: family.genus_delta_identity(p0, d0))
    failed = [c for c in checks if not c[1]]
    print(f"selftest: {len(checks) - len(failed)}/{len(checks)} passed")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _verify_trial(cfg: RunConfig, p: int, k: int, d: int, m: int,
                  trial: int) -> list:
    rows = []

    def add(name, klass, ok, detail=""):
        rows.append({"check_name": name, "p": p, "k": k, "d": d, "m": m,
                     "trial": trial, "klass": klass, "pass": ok,
                     "detail": detail})

    rng = derive_rng(cfg.seed, "verify", p, k, d, m, trial)
    f = Field(p, k, seed=cfg.seed)
    b = Boundary.make(f, cfg.sigma_mode, rng)

    params = curves.CurveParams.sample(b, d, m, rng)
    try:
        built = curves.build_curve(params)
        add("toric-relations", "identity", True)
    except IdentityFailure as exc:
        add("toric-relations", "identity", False, str(exc))
        return rows
    try:
        cert = curves.contact_check(b, built.x)
        add("contact", "identity", True, f"order={cert.contact_order}")
    except IdentityFailure as exc:
        add("contact", "identity", False, str(exc))
    try:
        curves.tangent_determinant_check(built)
        add("tangent-determinant", "identity", True)
    except IdentityFailure as exc:
        add("tangent-determinant", "identity", False, str(exc))
    lam, c = f.sample_nonzero(rng), f.sample(rng)
    try:
        curves.reparameterize(params, lam, c)
        add("reparameterization", "identity", True)
    except IdentityFailure as exc:
        add("reparameterization", "identity", False, str(exc))
    sc = curves.strangeness_check(built, limit=min(f.order, 512))
    add("strangeness", "identity", sc.ok,
        f"checked={sc.checked} skipped={sc.skipped}")
    mult = curves.multiplicity_at_strange_point(built)
    add("ordinary-multiplicity", "genericity", mult.ordinary,
        f"m={mult.multiplicity}")

    if m == d:
        add("cusp-suite", "identity", True, "line cover; skipped")
        return rows
    if d - m != p:
        return rows

    spec = family.FamilySpec.sample(b, d, rng)
    try:
        fiber = family.sample_general_fiber(spec, rng)
    except GenericityExhausted as exc:
        add("general-fiber", "genericity", False, str(exc))
        return rows
    fbuilt = curves.build_curve(fiber.curve_params())
    try:
        family.equation_pullback_check(fiber, fbuilt)
        add("equation-pullback", "identity", True)
    except IdentityFailure as exc:
        add("equation-pullback", "identity", False, str(exc))
    cd = family.cusp_data(fiber)
    add("cusp-count", "genericity",
        cd.count == family.expected_cusp_count(p, d, b.mode),
        f"count={cd.count} expected={family.expected_cusp_count(p, d, b.mode)}")
    try:
        family.cusp_image_check(fiber, fbuilt)
        add("cusp-image", "identity", True)
    except (CertificateFailure, IdentityFailure) as exc:
        add("cusp-image", "identity", False, str(exc))
    try:
        tc = family.tangent_cone_check(fiber)
        add("tangent-cone", "identity", True)
        add("tangent-cone-ordinary", "genericity", tc.ordinary)
    except A1LabError as exc:
        add("tangent-cone", "identity", False, str(exc))
    try:
        family.smoothness_at_cusps_check(fiber, fbuilt)
        ok = True
    except CertificateFailure:
        ok = False
    add("total-space-smoothness", "identity" if m <= 1 else "genericity", ok)
    try:
        family.classify_total_space_singularities(fiber)
        add("singular-classes", "identity", True)
    except A1LabError as exc:
        add("singular-classes", "identity", False, str(exc))
    return rows


def cmd_verify(cfg: RunConfig) -> int:
    tasks = []
    for p in cfg.p_list:
        k = cfg.k or auto_ext(p)
        mults = (curves.admissible_mults(p, cfg.d) if cfg.m == "all"
                 else [int(cfg.m)])
        for m in mults:
            for trial in range(cfg.trials):
                tasks.append(lambda p=p, k=k, m=m, t=trial:
                             _verify_trial(cfg, p, k, cfg.d, m, t))
    nested = _run_tasks(tasks, cfg.parallelism)
    rows = _sort_rows([r for chunk in nested for r in chunk])
    identity_failures = [r for r in rows
                         if r["klass"] == "identity" and not r["pass"]]
    by_check: dict = {}
    for r in rows:
        agg = by_check.setdefault(r["check_name"],
                                  {"pass": 0, "fail": 0, "klass": r["klass"]})
        agg["pass" if r["pass"] else "fail"] += 1
    report = {
        "config": _config_echo(cfg),
        "results": rows,
        "census": [],
        "summary": {
            "checks": by_check,
            "identity_failures": len(identity_failures),
            "rates": {name: agg["pass"] / (agg["pass"] + agg["fail"])
                      for name, agg in by_check.items()},
        },
    }
    _emit(report, cfg.out, cfg.fmt, "results")
    return 1 if identity_failures else 0


# ---------------------------------------------------------------------------
# cusp census
# ---------------------------------------------------------------------------

def _census_trial(cfg: RunConfig, p: int, k: int, d: int, trial: int) -> dict:
    rng = derive_rng(cfg.seed, "census", p, k, d, 0, trial)
    f = Field(p, k, seed=cfg.seed)
    b = Boundary.make(f, cfg.sigma_mode, rng)
    try:
        row = family.census_row(b, d, trial, rng)
    except (IdentityFailure, CertificateFailure) as exc:
        row = {"p": p, "k": k, "d": d, "m": d - p, "seed": trial,
               "pi_nonzero": None, "cusp_count": None,
               "expected": family.expected_cusp_count(p, d, b.mode),
               "tangent_cone_ordinary": None,
               "total_space_smooth_at_cusps": None,
               "genericity_exhausted": False,
               "identity_failure": str(exc)}
    row["boundary_cusp_count"] = boundary_cusp_census(b).count
    return row


def cmd_cusp_census(cfg: RunConfig) -> int:
    tasks = []
    for p in cfg.p_list:
        k = cfg.k or auto_ext(p)
        d_lo = max(cfg.d_min or p, p)
        for d in range(d_lo, (cfg.d_max or d_lo) + 1):
            for trial in range(cfg.trials):
                tasks.append(lambda p=p, k=k, d=d, t=trial:
                             _census_trial(cfg, p, k, d, t))
    rows = _sort_rows(_run_tasks(tasks, cfg.parallelism))
    agreement: dict = {}
    identity_failures = [r for r in rows if r.get("identity_failure")]
    for r in rows:
        if r.get("genericity_exhausted") or r.get("identity_failure"):
            continue
        key = f"p={r['p']},d={r['d']}"
        agg = agreement.setdefault(key, {"match": 0, "total": 0})
        agg["total"] += 1
        if r["cusp_count"] == r["expected"]:
            agg["match"] += 1
    report = {
        "config": _config_echo(cfg),
        "results": [],
        "census": rows,
        "summary": {
            "agreement": {key: agg["match"] / agg["total"]
                          for key, agg in agreement.items() if agg["total"]},
            "identity_failures": len(identity_failures),
        },
    }
    _emit(report, cfg.out, cfg.fmt, "census")
    return 1 if identity_failures else 0


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def cmd_interpolate(cfg: RunConfig) -> int:
    try:
        with open(cfg.points, newline="") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        print(f"cannot read points file: {exc}", file=sys.stderr)
        return 2
    if not lines:
        print("points file is empty", file=sys.stderr)
        return 2
    p = cfg.p_list[0]
    k = cfg.k or auto_ext(p)
    f = Field(p, k, seed=cfg.seed)
    rng = derive_rng(cfg.seed, "interpolate", p, k, 0, 0, 0)
    b = Boundary.make(f, cfg.sigma_mode, rng)
    points = []
    for lineno, line in enumerate(lines, start=1):
        parts = line.split(",")
        if len(parts) != 3:
            print(f"line {lineno}: expected 'x0,x1,x2'", file=sys.stderr)
            return 2
        try:
            points.append(tuple(f.from_int(int(x)) for x in parts))
        except ValueError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            return 2
    for lineno, pt in enumerate(points, start=1):
        if b.equation(pt).is_zero():
            print(f"line {lineno}: point lies on the boundary", file=sys.stderr)
            return 1
    try:
        result = curves.curve_through_points(b, points, rng)
    except PointOnBoundary as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except A1LabError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    memberships = []
    for node, lf, pt in zip(result.nodes, result.lifts, result.points):
        got = tuple(xi(node) for xi in result.built.x.components())
        want = tuple(lf.scale * c for c in pt)
        memberships.append(got == want)
    report = {
        "config": _config_echo(cfg),
        "results": [{
            "check_name": "interpolate", "p": p, "k": k,
            "d": result.params.degree, "m": 0, "trial": 0,
            "klass": "identity", "pass": all(memberships),
            "detail": f"points={len(result.points)}",
        }],
        "census": [],
        "curve": {
            "field": f.header(),
            "boundary": b.serialize(),
            "d": result.params.degree,
            "m": 0,
            "v_coeffs": [f.to_int(c) for c in result.params.v_coeffs],
            "w_coeffs": [f.to_int(c) for c in result.params.w_coeffs],
            "nodes": [f.to_int(n) for n in result.nodes],
            "memberships": memberships,
        },
        "summary": {"pass": all(memberships)},
    }
    _emit(report, cfg.out, cfg.fmt, "results")
    return 0 if all(memberships) else 1


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _config_echo(cfg: RunConfig) -> dict:
    echo = asdict(cfg)
    if cfg.timestamps:
        echo["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    else:
        echo.pop("timestamps", None)
    return echo


def _int_list(text: str) -> list:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="a1lab",
        description="exact certificates and censuses for strange-boundary curves")
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("selftest", help="run the identity suites at small sizes")
    st.add_argument("--p", type=_int_list, default=None,
                    help="comma-separated primes (default 2,3)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_int_list, required=True,
                        help="comma-separated primes")
    common.add_argument("--ext", type=int, default=None,
                        help="extension degree k (default: smallest with p^k >= 4096)")
    common.add_argument("--trials", type=int, default=25)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sigma", choices=["random", "special"], default="random")
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--timestamps", action="store_true")

    vf = sub.add_parser("verify", parents=[common],
                        help="run certificates for a (d, m) grid")
    vf.add_argument("--d", type=int, required=True)
    vf.add_argument("--m", default="all", help="multiplicity or 'all'")

    cc = sub.add_parser("cusp-census", parents=[common],
                        help="census of cusp counts for m = d - p fibers")
    cc.add_argument("--d-min", type=int, default=None)
    cc.add_argument("--d-max", type=int, required=True)

    ip = sub.add_parser("interpolate", parents=[common],
                        help="curve through interior points from CSV")
    ip.add_argument("--points", required=True)
    return parser


def _make_config(args) -> RunConfig:
    fmt = args.format
    if fmt is None:
        fmt = "csv" if (args.out or "").endswith(".csv") else "json"
    return RunConfig(
        p_list=args.p, k=args.ext,
        d=getattr(args, "d", 0), m=str(getattr(args, "m", "all")),
        trials=args.trials, seed=args.seed, sigma_mode=args.sigma,
        out=args.out, fmt=fmt, parallelism=args.threads,
        timestamps=args.timestamps,
        d_min=getattr(args, "d_min", None), d_max=getattr(args, "d_max", None),
        points=getattr(args, "points", None))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.command == "selftest":
        return cmd_selftest(args)
    cfg = _make_config(args)
    try:
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "cusp-census":
            return cmd_cusp_census(cfg)
        if args.command == "interpolate":
            return cmd_interpolate(cfg)
    except A1LabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
