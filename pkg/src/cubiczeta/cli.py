"""``cubiczeta`` command line: enumerate, table, verify.

Exit codes: 0 everything passed, 1 a verification failed, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import analytic, finite, kernel
from .lattices import LATTICES, InsufficientCutoff, is_dual
from .orbits import CacheError, enumerate_orbits, load_or_enumerate, read_manifest, read_records, write_cache
from .relations import (COMBINED, NAMED_SERIES, RELATIONS, ZetaData, combined_series, cutoff_arithmetic,
                        default_cutoff, required_cutoff, verify)
from .series import DirichletSeries, SeriesPair, series_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ANALYTIC_CHECKS = ("symmetrization", "gamma_zeta", "tauberian")
SYMMETRIZATION_TOL = 1e-9
GAMMA_ZETA_TOL = 1e-10
CONTROL_MIN = 1e-3
TAUBERIAN_TOL = 0.30
TAUBERIAN_X = 50000


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    cutoff: int | None = None
    cache: str | None = None
    fmt: str = "json"
    workers: int = 1
    seed: int = 0
    relations: list = field(default_factory=list)
    finite: list = field(default_factory=list)
    analytic: list = field(default_factory=list)
    lattice: str | None = None
    series: str | None = None
    timing: bool = True
    tauberian_x: int = TAUBERIAN_X

    def __post_init__(self):
        if self.cutoff is not None and self.cutoff <= 0:
            raise UsageError("--cutoff must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _pick(value, universe, flag) -> list:
    if value is None:
        return []
    if value == "all":
        return list(universe)
    names = [v.strip() for v in value.split(",") if v.strip()]
    bad = [n for n in names if n not in universe]
    if bad:
        raise UsageError(f"unknown {flag} {', '.join(bad)}; choose from {', '.join(universe)}")
    return names


def _check_range(X: int) -> None:
    if X > kernel.MAX_CUTOFF and kernel.IMPLEMENTATION != "python":
        raise UsageError(f"cutoff |P| <= {X} exceeds the kernel's safe range {kernel.MAX_CUTOFF}")


def _orbits(cfg: RunConfig, X: int) -> list:
    _check_range(X)
    return load_or_enumerate(X, cfg.cache, cfg.workers)


# ----------------------------------------------------------------- enumerate

def cmd_enumerate(cfg: RunConfig, out) -> int:
    if cfg.cutoff is None:
        raise UsageError("enumerate needs --cutoff")
    if not cfg.cache:
        raise UsageError("enumerate needs --out/--cache or CUBICZETA_CACHE")
    path = Path(cfg.cache)
    X = cfg.cutoff
    if path.exists():
        man = read_manifest(path)
        read_records(path)  # checksum and parse
        if man.cutoff >= X:
            _note(f"cache already covers |P| <= {man.cutoff}; nothing to do")
            out.write(man.to_json() + "\n")
            return EXIT_OK
        _note(f"extending cache from |P| <= {man.cutoff} to {X}")
        fresh = [r for r in _orbits_fresh(cfg, X) if abs(r.disc) > man.cutoff]
        man = write_cache(path, fresh, X, append=True)
    else:
        man = write_cache(path, _orbits_fresh(cfg, X), X)
    out.write(man.to_json() + "\n")
    return EXIT_OK


def _orbits_fresh(cfg, X):
    _check_range(X)
    return enumerate_orbits(X, cfg.workers)


# --------------------------------------------------------------------- table

def _series_factor(name: str) -> Fraction:
    probe = ZetaData([], 1)
    S = combined_series(probe, name) if name in COMBINED else NAMED_SERIES[name](probe)
    return S.cutoff


def _rows_of_series(S) -> list:
    """``(component, q, coefficient)`` rows; combined series have a single component 0."""
    if isinstance(S, SeriesPair):
        parts = [(1, S.first), (2, S.second)]
    else:
        parts = [(0, S)]
    rows = []
    for j, part in parts:
        for q, c in part.items():
            if q <= part.cutoff:
                rows.append((j, q, c))
    return rows


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_table(cfg: RunConfig, out) -> int:
    if (cfg.lattice is None) == (cfg.series is None):
        raise UsageError("table needs exactly one of --lattice or --series")
    Q = cfg.cutoff if cfg.cutoff is not None else 200
    if cfg.lattice is not None:
        if cfg.lattice not in LATTICES:
            raise UsageError(f"unknown lattice {cfg.lattice}; choose from {', '.join(LATTICES)}")
        X = Q * 27 if is_dual(cfg.lattice) else Q
        _note(f"table {cfg.lattice} to n <= {Q} needs orbits with |P| <= {X}"
              + (" (27x rule: dual index is |P|/27)" if is_dual(cfg.lattice) else ""))
        data = ZetaData(_orbits(cfg, X), X)
        table = data._tables()[cfg.lattice]
        if cfg.fmt == "csv":
            out.write(table.to_csv())
        else:
            for n in sorted(table.rows):
                hp, hm = table.rows[n]
                out.write(json.dumps({"lattice": cfg.lattice, "n": n, "h_plus": _fmt_frac(hp),
                                      "h_minus": _fmt_frac(hm)}) + "\n")
        return EXIT_OK
    name = cfg.series
    if name not in NAMED_SERIES and name not in COMBINED:
        raise UsageError(f"unknown series {name}; choose from {', '.join(list(NAMED_SERIES) + list(COMBINED))}")
    X = max(1, math.ceil(Fraction(Q) / _series_factor(name)))
    _note(f"series {name} to q <= {Q} needs orbits with |P| <= {X}")
    data = ZetaData(_orbits(cfg, X), X)
    S = combined_series(data, name) if name in COMBINED else NAMED_SERIES[name](data)
    S = S.truncated(Q) if isinstance(S, DirichletSeries) else SeriesPair(S.first.truncated(Q), S.second.truncated(Q))
    rows = _rows_of_series(S)
    if cfg.fmt == "csv":
        if isinstance(S, SeriesPair):
            out.write(series_to_csv(S))
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["series", "q", "u", "v"])
            for _, q, c in rows:
                w.writerow([name, _fmt_frac(q), _fmt_frac(c.u), _fmt_frac(c.v)])
    else:
        for j, q, c in rows:
            rec = {"series": name, "q": _fmt_frac(q), "coefficient": [_fmt_frac(c.u), _fmt_frac(c.v)]}
            if j:
                rec["component"] = j
            out.write(json.dumps(rec) + "\n")
    return EXIT_OK


# -------------------------------------------------------------------- verify

def _analytic_reports(cfg: RunConfig, names) -> list:
    out = []
    note = "numeric prefactor identity only; the functional equations themselves need analytic continuation"
    if "symmetrization" in names:
        t0 = time.perf_counter()
        points = analytic.sample_strip(100, cfg.seed)
        r = analytic.check_symmetrization(points)
        ctrl = analytic.check_symmetrization(points, A=analytic.np.eye(2, dtype=complex))
        ok = r <= SYMMETRIZATION_TOL and ctrl >= CONTROL_MIN
        out.append({"relation": "symmetrization", "cutoff": 100, "status": "pass" if ok else "fail",
                    "first_discrepancy": None if ok else {"residual": r, "control_residual": ctrl},
                    "residual": r, "tolerance": SYMMETRIZATION_TOL, "control_residual": ctrl,
                    "wall_time_ms": (time.perf_counter() - t0) * 1000, "detail": note})
    if "gamma_zeta" in names:
        t0 = time.perf_counter()
        r = analytic.check_gamma_zeta_identity(3)
        ctrl = analytic.check_gamma_zeta_identity(2)
        ok = r <= GAMMA_ZETA_TOL and ctrl >= CONTROL_MIN
        out.append({"relation": "gamma_zeta", "cutoff": 1, "status": "pass" if ok else "fail",
                    "first_discrepancy": None if ok else {"residual": r, "control_residual": ctrl},
                    "residual": r, "tolerance": GAMMA_ZETA_TOL, "control_residual": ctrl,
                    "wall_time_ms": (time.perf_counter() - t0) * 1000})
    if "tauberian" in names:
        X = cfg.tauberian_x
        _note(f"tauberian: partial sums to n <= {X} need orbits with |P| <= {X}")
        data = ZetaData(_orbits(cfg, X), X)
        for name in ("xi1plus", "xi1minus"):
            t0 = time.perf_counter()
            res = analytic.RESIDUES[name]
            dev = analytic.tauberian_diagnostic(combined_series(data, name), res.residue_at_one(),
                                                res.residue_at_five_sixths(), X)
            ok = dev <= TAUBERIAN_TOL
            out.append({"relation": f"tauberian_{name}", "cutoff": X, "status": "pass" if ok else "fail",
                        "first_discrepancy": None if ok else {"deviation": dev},
                        "residual": dev, "tolerance": TAUBERIAN_TOL,
                        "wall_time_ms": (time.perf_counter() - t0) * 1000,
                        "detail": "heuristic partial-sum diagnostic, not a proof"})
    if not cfg.timing:
        for rep in out:
            rep["wall_time_ms"] = None
    else:
        for rep in out:
            rep["wall_time_ms"] = round(rep["wall_time_ms"], 3)
    return out


def cmd_verify(cfg: RunConfig, out) -> int:
    if not (cfg.relations or cfg.finite or cfg.analytic):
        raise UsageError("verify needs --relations, --finite or --analytic")
    reports = []
    if cfg.relations:
        plan = [(rel, cfg.cutoff if cfg.cutoff is not None else default_cutoff(rel)) for rel in cfg.relations]
        for rel, Q in plan:
            _note(cutoff_arithmetic(rel, Q))
        X = max(required_cutoff(rel, Q) for rel, Q in plan)
        _note(f"enumerating orbits with |P| <= {X}")
        data = ZetaData(_orbits(cfg, X), X)
        for rel, Q in plan:
            reports.append(verify(rel, Q, data).as_dict(cfg.timing))
    for name in cfg.finite:
        fn = finite.FINITE_CHECKS[name]
        rep = fn(seed=cfg.seed) if name == "counting_lemma" else fn()
        reports.append(rep.as_dict(cfg.timing))
    reports.extend(_analytic_reports(cfg, cfg.analytic))
    _emit_reports(reports, cfg.fmt, out)
    return EXIT_OK if all(r["status"] == "pass" for r in reports) else EXIT_FAIL


def _emit_reports(reports, fmt, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["relation", "cutoff", "status", "first_discrepancy", "wall_time_ms"])
        for r in reports:
            fd = r["first_discrepancy"]
            w.writerow([r["relation"], r["cutoff"], r["status"], "" if fd is None else json.dumps(fd, sort_keys=True),
                        "" if r["wall_time_ms"] is None else r["wall_time_ms"]])
        return
    for r in reports:
        out.write(json.dumps(r, sort_keys=True) + "\n")


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubiczeta", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, fmt_default):
        sp.add_argument("--cutoff", type=int, default=None)
        sp.add_argument("--cache", "--out", dest="cache", default=os.environ.get("CUBICZETA_CACHE"),
                        help="orbit cache path (default $CUBICZETA_CACHE)")
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("enumerate", help="enumerate orbits into a cache file")
    common(e, "json")
    t = sub.add_parser("table", help="class-number tables and derived series coefficients")
    common(t, "csv")
    t.add_argument("--lattice")
    t.add_argument("--series")
    v = sub.add_parser("verify", help="run relation, finite and analytic checks")
    common(v, "json")
    v.add_argument("--relations", help="'all' or comma-separated: " + ",".join(RELATIONS))
    v.add_argument("--finite", help="'all' or comma-separated: " + ",".join(finite.FINITE_CHECKS))
    v.add_argument("--analytic", help="'all' or comma-separated: " + ",".join(ANALYTIC_CHECKS))
    v.add_argument("--tauberian-x", type=int, default=TAUBERIAN_X)
    v.add_argument("--no-timing", action="store_true", help="null wall_time_ms for byte-identical output")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            subcommand=args.subcommand, cutoff=args.cutoff, cache=args.cache, fmt=args.fmt,
            workers=args.workers, seed=args.seed,
            relations=_pick(getattr(args, "relations", None), RELATIONS, "relation"),
            finite=_pick(getattr(args, "finite", None), finite.FINITE_CHECKS, "finite check"),
            analytic=_pick(getattr(args, "analytic", None), ANALYTIC_CHECKS, "analytic check"),
            lattice=getattr(args, "lattice", None), series=getattr(args, "series", None),
            timing=not getattr(args, "no_timing", False),
            tauberian_x=getattr(args, "tauberian_x", TAUBERIAN_X),
        )
        handler = {"enumerate": cmd_enumerate, "table": cmd_table, "verify": cmd_verify}[cfg.subcommand]
        return handler(cfg, out)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except CacheError as exc:
        _note(f"cache error: {exc}")
        return EXIT_USAGE
    except InsufficientCutoff as exc:
        _note(f"insufficient cutoff: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
