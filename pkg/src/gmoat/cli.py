"""Command-line front end.

One executable, subcommands per experiment family:

    gmoat sieve --segment 10^1:10^2 [--include-axis] [--csv out.csv] [--cache]
    gmoat paths build --segment 10^3:10^4 --gap cramer --out paths.csv
    gmoat paths audit --in paths.csv [--M 10] [--json report.json]
    gmoat paths bound --gap cramer --A 4
    gmoat paths compare --segment 10^3:10^4 --gap cramer
    gmoat paths isolate --prime 0,20785207 --bound 20
    gmoat paths triangles --in paths.csv --M 10
    gmoat moat component --seed 1,1 --k2 8 --region 10^6 [--svg moat.svg]
    gmoat moat escape --seed 1,1 --region 10^4
    gmoat moat minimax --from 1,1 --to 5,2 --region 10^4
    gmoat moat factorial --n 6
    gmoat walk run --M 2 --region 10^3 --start 1,1 [--paths paths.csv]
    gmoat walk dominance --M 10 --A 2:50
    gmoat circle count --R 1000 [--json]
    gmoat circle density --segment 10^3:10^4
    gmoat cache write --segment 10^1:10^3 --out seg.bin
    gmoat cache read --in seg.bin [--csv rows.csv]
    gmoat cache verify --in seg.bin

Exit codes: 0 success, 1 precondition/domain/usage error, 2 internal
invariant violation.  Every JSON/CSV artifact embeds a run manifest
(command, parameters, tool version, input digests, wall time); reruns with
identical manifests are byte-identical once the wall-time field is ignored.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .arith import (
    GaussianPrime,
    NormSegment,
    _parse_norm_value,
    is_gaussian_prime,
    sieve_octant,
)
from .circlecount import (
    GAUSS_ERROR_COEFF,
    error_exponent_fit,
    lattice_count,
    octant_prime_density,
)
from .errors import (
    CacheFormatError,
    DomainError,
    GmoatError,
    InconclusiveRegionError,
    InternalInvariantError,
    ResourceError,
)
from .gapmodels import GapKind, GapModel, gap_value, segment_max_gap
from .lattice import PrimeLattice
from .moat import (
    MinimaxIndex,
    StepBound,
    component,
    factorial_square_check,
    widest_escape,
)
from .paths import (
    PathDecomposition,
    Path as PrimePath,
    audit_decomposition,
    build_paths,
    compare_count,
    isolation_radius,
    path_count_bound,
    triangle_audit,
)
from .persistence import read_segment, write_segment
from .render import render_plane_svg
from .walk import (
    WalkConfig,
    WalkStrategy,
    dominance_table,
    first_dominant_exponent,
    run_walk,
)

_SVG_BACKGROUND_CAP = 50_000  # don't scatter-plot more points than this


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures to exit code 1
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# small parsers


def _point(text: str) -> GaussianPrime:
    try:
        a_s, b_s = text.split(",")
        return GaussianPrime(int(a_s), int(b_s))
    except (ValueError, TypeError):
        raise DomainError(f"expected a point like '1,1', got {text!r}") from None


def _a_range(text: str) -> list[int]:
    if ":" in text:
        lo_s, _, hi_s = text.partition(":")
        lo, hi = int(lo_s), int(hi_s)
        if lo > hi:
            raise DomainError(f"empty exponent range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _gap_model(args) -> GapModel:
    return GapModel(
        kind=GapKind(args.gap),
        c=args.gap_c,
        delta=args.gap_delta,
        const_value=args.gap_const,
        use_log10=args.log10,
    )


def _sha256(path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def _cache_dir() -> Path | None:
    v = os.environ.get("GMOAT_CACHE_DIR")
    return Path(v) if v else None


def _cache_file(segment: NormSegment, include_axis: bool) -> str:
    tag = "ax" if include_axis else "oct"
    return f"seg_{segment.lo}_{segment.hi}_{tag}.gmoat"


# ---------------------------------------------------------------------------
# manifest + emission


def _norm_param(v):
    if isinstance(v, GaussianPrime):
        return f"{v.a},{v.b}"
    if isinstance(v, NormSegment):
        return f"{v.lo}:{v.hi}"
    if isinstance(v, (list, tuple)):
        return [_norm_param(x) for x in v]
    if isinstance(v, Path):
        return str(v)
    if hasattr(v, "value"):
        return v.value
    return v


# output routing does not affect results, so it stays out of the manifest
_ROUTING_KEYS = frozenset({"func", "cmd", "subcmd", "json", "csv", "out", "svg"})


def _manifest(args, command: str, inputs: dict | None, wall_ms: float) -> dict:
    params = {
        k: _norm_param(v)
        for k, v in sorted(vars(args).items())
        if k not in _ROUTING_KEYS and not callable(v)
    }
    return {
        "command": command,
        "params": params,
        "version": __version__,
        "input_digests": dict(sorted((inputs or {}).items())),
        "wall_time_ms": round(wall_ms, 3),
    }


def _emit(args, manifest: dict, report: dict, human: list[str], table=None) -> None:
    """Route the report to --json / --csv / stdout."""
    to_stdout = False
    if getattr(args, "json", None) is not None:
        doc = json.dumps({"manifest": manifest, "report": report}, sort_keys=True, indent=2)
        if args.json == "-":
            print(doc)
            to_stdout = True
        else:
            Path(args.json).write_text(doc + "\n")
            human = human + [f"wrote {args.json}"]
    if getattr(args, "csv", None) is not None and table is not None:
        header, rows = table
        buf = io.StringIO()
        buf.write("# " + json.dumps(manifest, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        if args.csv == "-":
            sys.stdout.write(buf.getvalue())
            to_stdout = True
        else:
            Path(args.csv).write_text(buf.getvalue())
            human = human + [f"wrote {args.csv}"]
    if not to_stdout:
        for line in human:
            print(line)


# ---------------------------------------------------------------------------
# decomposition CSV round trip

_DECOMP_HEADER = ["path_index", "member_index", "a", "b", "norm", "step_dist_prev"]


def _decomposition_rows(d: PathDecomposition):
    rows = []
    for path in d.paths:
        prev = None
        for mi, p in enumerate(path.members, start=1):
            dist = "" if prev is None else repr(math.dist((prev.a, prev.b), (p.a, p.b)))
            rows.append([path.index, mi, p.a, p.b, p.norm, dist])
            prev = p
    return rows


def write_decomposition_csv(d: PathDecomposition, path, manifest: dict) -> None:
    buf = io.StringIO()
    buf.write("# " + json.dumps(manifest, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_DECOMP_HEADER)
    w.writerows(_decomposition_rows(d))
    Path(path).write_text(buf.getvalue())


def read_decomposition_csv(path) -> tuple[PathDecomposition, dict]:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise DomainError(f"{path}: missing manifest comment line")
    manifest = json.loads(lines[0][2:])
    params = manifest.get("params", {})
    try:
        segment = NormSegment.parse(params["segment"])
        model = GapModel(
            kind=GapKind(params["gap"]),
            c=params["gap_c"],
            delta=params["gap_delta"],
            const_value=params["gap_const"],
            use_log10=params["log10"],
        )
        include_axis = bool(params.get("include_axis", False))
    except (KeyError, TypeError) as e:
        raise DomainError(f"{path}: manifest lacks decomposition parameters ({e})") from None
    reader = csv.reader(lines[1:])
    header = next(reader)
    if header != _DECOMP_HEADER:
        raise DomainError(f"{path}: unexpected CSV header {header}")
    by_path: dict[int, list[GaussianPrime]] = {}
    for row in reader:
        if not row:
            continue
        pi, _, a, b = int(row[0]), int(row[1]), int(row[2]), int(row[3])
        by_path.setdefault(pi, []).append(GaussianPrime(a, b))
    paths = tuple(
        PrimePath(index=i, members=tuple(by_path[i])) for i in sorted(by_path)
    )
    return (
        PathDecomposition(segment=segment, model=model, include_axis=include_axis, paths=paths),
        manifest,
    )


# ---------------------------------------------------------------------------
# handlers


def _cmd_sieve(args) -> int:
    t0 = time.perf_counter()
    inputs = {}
    primes = None
    cache_note = None
    if args.cache:
        root = _cache_dir()
        if root is None:
            raise DomainError("--cache needs GMOAT_CACHE_DIR to be set")
        root.mkdir(parents=True, exist_ok=True)
        f = root / _cache_file(args.segment, args.include_axis)
        if f.exists():
            seg, ax, primes = read_segment(f)
            if (seg.lo, seg.hi, ax) != (args.segment.lo, args.segment.hi, args.include_axis):
                raise CacheFormatError(f"{f} does not match the requested segment")
            inputs[str(f)] = _sha256(f)
            cache_note = f"cache hit: {f}"
        else:
            primes = sieve_octant(args.segment, args.include_axis, threads=args.threads)
            write_segment(f, primes, args.segment, args.include_axis)
            cache_note = f"cache write: {f}"
    if primes is None:
        primes = sieve_octant(args.segment, args.include_axis, threads=args.threads)
    report = {
        "segment": {"lo": args.segment.lo, "hi": args.segment.hi},
        "include_axis": args.include_axis,
        "count": len(primes),
        "first": [[p.a, p.b] for p in primes[:5]],
        "last": [[p.a, p.b] for p in primes[-5:]],
    }
    human = [
        f"segment {args.segment} include_axis={args.include_axis}: {len(primes)} primes"
    ]
    if primes:
        human.append(f"first {primes[0]} norm {primes[0].norm}; last {primes[-1]} norm {primes[-1].norm}")
    if cache_note:
        human.append(cache_note)
    table = (["a", "b", "norm"], [[p.a, p.b, p.norm] for p in primes])
    _emit(args, _manifest(args, "sieve", inputs, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_paths_build(args) -> int:
    t0 = time.perf_counter()
    model = _gap_model(args)
    d = build_paths(args.segment, model, args.include_axis, threads=args.threads)
    manifest = _manifest(args, "paths build", {}, (time.perf_counter() - t0) * 1e3)
    report = {
        "segment": {"lo": args.segment.lo, "hi": args.segment.hi},
        "model": model.describe(),
        "n_primes": d.n_primes,
        "n_paths": d.n_paths,
        "sizes": d.sizes,
    }
    human = [
        f"{args.segment} with {model.describe()}: {d.n_primes} primes in {d.n_paths} paths",
        f"sizes: {d.sizes[:20]}{'...' if d.n_paths > 20 else ''}",
    ]
    if args.out:
        write_decomposition_csv(d, args.out, manifest)
        human.append(f"wrote {args.out}")
    table = (_DECOMP_HEADER, _decomposition_rows(d))
    _emit(args, manifest, report, human, table)
    return 0


def _audit_report_dict(audit) -> dict:
    return {
        "n_primes": audit.n_primes,
        "n_paths": audit.n_paths,
        "sizes": audit.sizes,
        "disjoint": audit.disjoint,
        "coverage": audit.coverage,
        "norm_increase_violations": audit.norm_increase_violations,
        "step_exclusion_violations": audit.step_exclusion_violations,
        "forward_isolation_violations": audit.forward_isolation_violations,
        "backward_isolation_violations": audit.backward_isolation_violations,
        "sizes_monotone": audit.sizes_monotone,
        "monotone_adjacent_violations": audit.monotone_adjacent_violations,
        "step_stats": {
            "n_steps": audit.step_stats.n_steps,
            "min": audit.step_stats.min,
            "max": audit.step_stats.max,
            "mean": audit.step_stats.mean,
        },
    }


def _cmd_paths_audit(args) -> int:
    t0 = time.perf_counter()
    d, _ = read_decomposition_csv(args.infile)
    inputs = {str(args.infile): _sha256(args.infile)}
    audit = audit_decomposition(d, threads=args.threads)
    report = _audit_report_dict(audit)
    if args.M is not None:
        tri = triangle_audit(d, args.M)
        report["triangles"] = {
            "M": tri.M,
            "n_records": len(tri.records),
            "n_within_bound": tri.n_within_bound,
            "n_witnesses": tri.n_witnesses,
            "max_law_residual": tri.max_law_residual,
        }
    human = [
        f"audit {d.segment}: {audit.n_primes} primes, {audit.n_paths} paths",
        f"disjoint={audit.disjoint} coverage={audit.coverage} "
        f"norm_viol={audit.norm_increase_violations} step_viol={audit.step_exclusion_violations}",
        f"isolation measured: forward={audit.forward_isolation_violations} "
        f"backward={audit.backward_isolation_violations}; monotone={audit.sizes_monotone}",
    ]
    _emit(args, _manifest(args, "paths audit", inputs, (time.perf_counter() - t0) * 1e3), report, human)
    if not audit.hard_invariants_hold:
        print("internal invariant violation: decomposition failed its hard audit", file=sys.stderr)
        return 2
    return 0


def _cmd_paths_bound(args) -> int:
    t0 = time.perf_counter()
    b = path_count_bound(GapKind(args.gap), args.A, args.gap_c, args.gap_delta, args.error_const)
    report = {
        "kind": b.kind.value,
        "A": b.A,
        "c": b.c,
        "delta": b.delta,
        "error_const": b.error_const,
        "bound_value": b.bound_value,
    }
    human = [f"path-count bound for {b.kind.value} at A={b.A}: {b.bound_value}"]
    _emit(args, _manifest(args, "paths bound", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_paths_compare(args) -> int:
    t0 = time.perf_counter()
    A = args.segment.exponent()
    if A is None:
        raise DomainError(f"segment {args.segment} is not a decade [10^(A-1), 10^A)")
    model = _gap_model(args)
    d = build_paths(args.segment, model, args.include_axis, threads=args.threads)
    b = path_count_bound(model.kind, A, args.gap_c, args.gap_delta, args.error_const)
    cmp_ = compare_count(d, b)
    report = {
        "A": A,
        "kind": model.kind.value,
        "measured": cmp_.measured,
        "bound": cmp_.bound,
        "satisfied": cmp_.satisfied,
        "ratio": cmp_.ratio,
    }
    human = [
        f"A={A} {model.describe()}: measured {cmp_.measured} paths, bound {cmp_.bound:.6g}, "
        f"{'OK' if cmp_.satisfied else 'EXCEEDED'} (ratio {cmp_.ratio:.4f})"
    ]
    _emit(args, _manifest(args, "paths compare", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_paths_isolate(args) -> int:
    t0 = time.perf_counter()
    res = isolation_radius(args.prime, args.bound)
    report = {
        "prime": [args.prime.a, args.prime.b],
        "search_bound": args.bound,
        "exceeds_bound": res.exceeds_bound,
        "distance": res.distance,
        "dist_squared": res.dist_squared,
        "nearest": list(res.nearest) if res.nearest else None,
    }
    if res.exceeds_bound:
        human = [f"{args.prime}: no other Gaussian prime within {args.bound}"]
    else:
        human = [
            f"{args.prime}: nearest Gaussian prime {res.nearest} at distance "
            f"{res.distance:.6f} (d^2 = {res.dist_squared})"
        ]
    _emit(args, _manifest(args, "paths isolate", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_paths_triangles(args) -> int:
    t0 = time.perf_counter()
    d, _ = read_decomposition_csv(args.infile)
    inputs = {str(args.infile): _sha256(args.infile)}
    tri = triangle_audit(d, args.M)
    report = {
        "M": tri.M,
        "n_records": len(tri.records),
        "n_within_bound": tri.n_within_bound,
        "n_witnesses": tri.n_witnesses,
        "max_law_residual": tri.max_law_residual,
    }
    human = [
        f"triangles over {d.segment}: {len(tri.records)} records, "
        f"{tri.n_within_bound} with both cross sides <= {args.M}, "
        f"{tri.n_witnesses} witnesses, max law residual {tri.max_law_residual:.3e}"
    ]
    table = (
        ["path_index", "member_index", "s1", "s2", "s3", "theta", "within_bound", "witness"],
        [
            [r.path_index, r.member_index, repr(r.s1), repr(r.s2), repr(r.s3), repr(r.theta), r.within_bound, r.witness]
            for r in tri.records
        ],
    )
    _emit(args, _manifest(args, "paths triangles", inputs, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_moat_component(args) -> int:
    t0 = time.perf_counter()
    lat = PrimeLattice.from_region(args.region, args.include_axis, threads=args.threads)
    comp = component(args.seed, StepBound(args.k2), args.region, args.include_axis, lattice=lat)
    report = {
        "seed": [args.seed.a, args.seed.b],
        "k_squared": args.k2,
        "region_limit": args.region,
        "size": comp.size,
        "exhausted": comp.exhausted,
        "boundary_gap_squared": comp.boundary_gap_squared,
        "members_head": [[p.a, p.b] for p in comp.members[:10]],
        "max_norm": max(p.norm for p in comp.members),
    }
    human = [
        f"component of {args.seed} at k^2={args.k2} in region<{args.region}: "
        f"{comp.size} members, exhausted={comp.exhausted}, "
        f"boundary gap^2={comp.boundary_gap_squared}"
    ]
    if args.svg:
        background = (
            [(int(a), int(b)) for a, b in zip(lat.a, lat.b)]
            if lat.size <= _SVG_BACKGROUND_CAP
            else []
        )
        svg = render_plane_svg(
            background,
            highlight=[(p.a, p.b) for p in comp.members],
            title=f"component {args.seed} k2={args.k2} region<{args.region}",
        )
        Path(args.svg).write_text(svg)
        human.append(f"wrote {args.svg}")
    table = (["a", "b", "norm"], [[p.a, p.b, p.norm] for p in comp.members])
    _emit(args, _manifest(args, "moat component", {}, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_moat_escape(args) -> int:
    t0 = time.perf_counter()
    rep = widest_escape(args.seed, args.region, args.include_axis, threads=args.threads)
    report = {
        "seed": [args.seed.a, args.seed.b],
        "region_limit": rep.region_limit,
        "k_squared": rep.k_squared,
        "next_k_squared": rep.next_k_squared,
        "component_size": rep.component_size,
        "boundary_gap_squared": rep.boundary_gap_squared,
        "width": rep.width,
    }
    human = [
        f"widest exhausted threshold for {args.seed}: k^2={rep.k_squared} "
        f"(next realized {rep.next_k_squared} escapes); component size {rep.component_size}; "
        f"moat width {rep.width:.6f}"
    ]
    _emit(args, _manifest(args, "moat escape", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_moat_minimax(args) -> int:
    t0 = time.perf_counter()
    idx = MinimaxIndex(args.region, args.include_axis, threads=args.threads)
    res = idx.hop(args.src, args.dst)
    report = {
        "from": [args.src.a, args.src.b],
        "to": [args.dst.a, args.dst.b],
        "region_limit": args.region,
        "connected": res.connected,
        "hop_squared": res.hop_squared,
        "hop": res.hop if res.connected else None,
    }
    if res.connected:
        human = [f"minimax hop {args.src} -> {args.dst}: {res.hop:.6f} (d^2 = {res.hop_squared})"]
    else:
        human = [f"{args.src} and {args.dst}: threshold greater than region supports"]
    _emit(args, _manifest(args, "moat minimax", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_moat_factorial(args) -> int:
    t0 = time.perf_counter()
    rep = factorial_square_check(args.n)
    report = {
        "n": rep.n,
        "factorial": rep.factorial,
        "plus_one": rep.plus_one,
        "plus_one_is_prime": rep.plus_one_is_prime,
        "plus_one_mod4": rep.plus_one_mod4,
        "lift": list(rep.lift) if rep.lift else None,
        "square_x": list(rep.square_x),
        "square_y": list(rep.square_y),
        "primes_found": [list(t) for t in rep.primes_found],
    }
    human = [
        f"n={rep.n}: {rep.n}!+1 = {rep.plus_one} "
        f"({'prime' if rep.plus_one_is_prime else 'composite'}, = {rep.plus_one_mod4} mod 4)",
        f"square [{rep.square_x[0]}, {rep.square_x[1]}] x [0, {rep.square_y[1]}]: "
        f"{len(rep.primes_found)} Gaussian primes found",
    ]
    if rep.lift:
        human.append(f"two-square lift of {rep.plus_one}: {rep.lift}")
    _emit(args, _manifest(args, "moat factorial", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_walk_run(args) -> int:
    t0 = time.perf_counter()
    decomposition = None
    inputs = {}
    if args.paths:
        decomposition, _ = read_decomposition_csv(args.paths)
        inputs[str(args.paths)] = _sha256(args.paths)
    config = WalkConfig(
        M=args.M,
        region_limit=args.region,
        strategy=WalkStrategy(args.strategy),
        require_increasing_norm=not args.no_increasing_norm,
        include_axis=args.include_axis,
    )
    rep = run_walk(config, args.start, decomposition, threads=args.threads)
    report = {
        "start": [args.start.a, args.start.b],
        "M": args.M,
        "region_limit": args.region,
        "strategy": config.strategy.value,
        "require_increasing_norm": config.require_increasing_norm,
        "n_steps": rep.n_steps,
        "terminated_reason": rep.terminated_reason.value,
        "max_norm_reached": rep.max_norm_reached,
        "step_length_histogram": {str(k): v for k, v in rep.step_length_histogram.items()},
        "steps": [[p.a, p.b] for p in rep.steps],
    }
    if rep.path_visits is not None:
        report["path_visits"] = {str(k): v for k, v in rep.path_visits.items()}
        report["path_changes"] = rep.path_changes
        report["steps_outside_segment"] = rep.steps_outside_segment
    human = [
        f"walk from {args.start} with M={args.M}: {rep.n_steps} steps, "
        f"terminated {rep.terminated_reason.value}, max norm {rep.max_norm_reached}"
    ]
    if rep.path_visits is not None:
        human.append(
            f"paths visited: {len(rep.path_visits)}; path changes: {rep.path_changes}; "
            f"steps outside the decomposition segment: {rep.steps_outside_segment}"
        )
    rows = []
    prev = None
    for i, p in enumerate(rep.steps):
        d2 = "" if prev is None else rep.step_lengths_squared[i - 1]
        rows.append([i, p.a, p.b, p.norm, d2])
        prev = p
    table = (["step", "a", "b", "norm", "d2_prev"], rows)
    _emit(args, _manifest(args, "walk run", inputs, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_walk_dominance(args) -> int:
    t0 = time.perf_counter()
    kinds = (
        [GapKind(args.gap)]
        if args.gap
        else [GapKind.RH, GapKind.CRAMER, GapKind.BHP]
    )
    rows = dominance_table(args.A, args.M, args.gap_c, args.gap_delta, args.error_const, kinds=kinds)
    flips = {
        k.value: first_dominant_exponent(
            k, args.M, args.gap_c, args.gap_delta, args.error_const, A_max=max(args.A)
        )
        for k in kinds
    }
    report = {
        "M": args.M,
        "first_dominant_A": flips,
        "rows": [
            {
                "A": r.A,
                "kind": r.kind.value,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "log10_lhs": r.log10_lhs,
                "log10_rhs": r.log10_rhs,
                "dominates": r.dominates,
            }
            for r in rows
        ],
    }
    human = [f"dominance over A={args.A[0]}..{args.A[-1]}, M={args.M}"]
    for k, v in flips.items():
        human.append(f"  {k}: gap first outruns path room at A={v}")
    table = (
        ["A", "kind", "lhs", "rhs", "log10_lhs", "log10_rhs", "dominates"],
        [
            [r.A, r.kind.value, repr(r.lhs), repr(r.rhs), repr(r.log10_lhs), repr(r.log10_rhs), r.dominates]
            for r in rows
        ],
    )
    _emit(args, _manifest(args, "walk dominance", {}, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_circle_count(args) -> int:
    t0 = time.perf_counter()
    cc = lattice_count(args.R)
    bound = GAUSS_ERROR_COEFF * cc.R
    report = {
        "R": cc.R,
        "N": cc.N,
        "E": cc.E,
        "abs_E_bound": bound,
        "within_classical_bound": abs(cc.E) <= bound,
    }
    human = [
        f"N({cc.R:g}) = {cc.N}; E = {cc.E:.6f}; classical bound {bound:.6f} "
        f"({'holds' if abs(cc.E) <= bound else 'violated'})"
    ]
    table = (["R", "N", "E"], [[cc.R, cc.N, repr(cc.E)]])
    _emit(args, _manifest(args, "circle count", {}, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_circle_density(args) -> int:
    t0 = time.perf_counter()
    rep = octant_prime_density(args.segment, threads=args.threads)
    report = {
        "segment": {"lo": args.segment.lo, "hi": args.segment.hi},
        "lattice_points_octant": rep.lattice_points_octant,
        "gaussian_primes_octant": rep.gaussian_primes_octant,
        "pnt_estimate": rep.pnt_estimate,
        "ratio_actual_vs_estimate": rep.ratio_actual_vs_estimate,
    }
    human = [
        f"{args.segment}: {rep.lattice_points_octant} octant lattice points, "
        f"{rep.gaussian_primes_octant} Gaussian primes",
        f"PNT-style estimate {rep.pnt_estimate:.4f}; ratio {rep.ratio_actual_vs_estimate:.4f}",
    ]
    _emit(args, _manifest(args, "circle density", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_cache_write(args) -> int:
    t0 = time.perf_counter()
    out = args.out
    if out is None:
        root = _cache_dir()
        if root is None:
            raise DomainError("no --out given and GMOAT_CACHE_DIR is not set")
        root.mkdir(parents=True, exist_ok=True)
        out = root / _cache_file(args.segment, args.include_axis)
    primes = sieve_octant(args.segment, args.include_axis, threads=args.threads)
    write_segment(out, primes, args.segment, args.include_axis)
    report = {
        "path": str(out),
        "count": len(primes),
        "sha256": _sha256(out),
    }
    human = [f"wrote {out}: {len(primes)} records, sha256 {report['sha256'][:16]}..."]
    _emit(args, _manifest(args, "cache write", {}, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


def _cmd_cache_read(args) -> int:
    t0 = time.perf_counter()
    segment, include_axis, primes = read_segment(args.infile)
    inputs = {str(args.infile): _sha256(args.infile)}
    report = {
        "segment": {"lo": segment.lo, "hi": segment.hi},
        "include_axis": include_axis,
        "count": len(primes),
        "first": [[p.a, p.b] for p in primes[:5]],
        "last": [[p.a, p.b] for p in primes[-5:]],
    }
    human = [f"{args.infile}: segment {segment} include_axis={include_axis}, {len(primes)} records"]
    table = (["a", "b", "norm"], [[p.a, p.b, p.norm] for p in primes])
    _emit(args, _manifest(args, "cache read", inputs, (time.perf_counter() - t0) * 1e3), report, human, table)
    return 0


def _cmd_cache_verify(args) -> int:
    t0 = time.perf_counter()
    segment, include_axis, primes = read_segment(args.infile)
    inputs = {str(args.infile): _sha256(args.infile)}
    report = {
        "ok": True,
        "segment": {"lo": segment.lo, "hi": segment.hi},
        "include_axis": include_axis,
        "count": len(primes),
    }
    human = [f"{args.infile}: OK ({len(primes)} records, segment {segment})"]
    _emit(args, _manifest(args, "cache verify", inputs, (time.perf_counter() - t0) * 1e3), report, human)
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", nargs="?", const="-", default=None, metavar="FILE",
                   help="emit a JSON report (to FILE, or stdout when bare)")
    p.add_argument("--csv", nargs="?", const="-", default=None, metavar="FILE",
                   help="emit CSV rows (to FILE, or stdout when bare)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="cap internal parallelism (results are independent of this)")


def _add_gap_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gap", choices=[k.value for k in GapKind], default="cramer")
    p.add_argument("--gap-c", type=float, default=1.0, help="coefficient c")
    p.add_argument("--gap-delta", type=float, default=0.025, help="BHP exponent offset")
    p.add_argument("--gap-const", type=float, default=1.0, help="CONSTANT model value")
    p.add_argument("--log10", action="store_true", help="use base-10 logs in the model")


def build_parser() -> _Parser:
    top = _Parser(prog="gmoat", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    top.add_argument("--version", action="version", version=f"gmoat {__version__}")
    sub = top.add_subparsers(dest="cmd", metavar="COMMAND")

    p = sub.add_parser("sieve", help="sieve a norm segment of octant primes")
    p.add_argument("--segment", type=NormSegment.parse, required=True)
    p.add_argument("--include-axis", action="store_true")
    p.add_argument("--cache", action="store_true", help="read/write GMOAT_CACHE_DIR")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_sieve)

    paths_p = sub.add_parser("paths", help="greedy path decompositions and their audits")
    paths_sub = paths_p.add_subparsers(dest="subcmd", metavar="SUBCOMMAND")

    p = paths_sub.add_parser("build", help="build the greedy decomposition of a segment")
    p.add_argument("--segment", type=NormSegment.parse, required=True)
    p.add_argument("--include-axis", action="store_true")
    p.add_argument("--out", metavar="FILE", help="write the decomposition CSV here")
    _add_gap_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_paths_build)

    p = paths_sub.add_parser("audit", help="re-check every invariant of a decomposition CSV")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--M", type=float, default=None, help="also audit triangles at this bound")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_paths_audit)

    p = paths_sub.add_parser("bound", help="closed-form path-count bound")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--error-const", type=float, default=0.0)
    _add_gap_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_paths_bound)

    p = paths_sub.add_parser("compare", help="measured path count vs the closed-form bound")
    p.add_argument("--segment", type=NormSegment.parse, required=True)
    p.add_argument("--include-axis", action="store_true")
    p.add_argument("--error-const", type=float, default=0.0)
    _add_gap_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_paths_compare)

    p = paths_sub.add_parser("isolate", help="nearest-neighbor distance over the full plane")
    p.add_argument("--prime", type=_point, required=True)
    p.add_argument("--bound", type=float, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_paths_isolate)

    p = paths_sub.add_parser("triangles", help="law-of-cosines audit across consecutive paths")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--M", type=float, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_paths_triangles)

    moat_p = sub.add_parser("moat", help="step-bounded components and percolation thresholds")
    moat_sub = moat_p.add_subparsers(dest="subcmd", metavar="SUBCOMMAND")

    p = moat_sub.add_parser("component", help="BFS closure under a squared step bound")
    p.add_argument("--seed", type=_point, required=True)
    p.add_argument("--k2", type=int, required=True, help="squared step bound")
    p.add_argument("--region", type=_parse_norm_value, required=True)
    p.add_argument("--include-axis", action="store_true")
    p.add_argument("--svg", metavar="FILE", help="write a static plot")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_moat_component)

    p = moat_sub.add_parser("escape", help="largest exhausted threshold for a seed")
    p.add_argument("--seed", type=_point, required=True)
    p.add_argument("--region", type=_parse_norm_value, required=True)
    p.add_argument("--include-axis", action="store_true")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_moat_escape)

    p = moat_sub.add_parser("minimax", help="bottleneck hop between two primes")
    p.add_argument("--from", dest="src", type=_point, required=True)
    p.add_argument("--to", dest="dst", type=_point, required=True)
    p.add_argument("--region", type=_parse_norm_value, required=True)
    p.add_argument("--include-axis", action="store_true")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_moat_minimax)

    p = moat_sub.add_parser("factorial", help="scan the square [n!-n, n!+n] x [0, 2n]")
    p.add_argument("--n", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_moat_factorial)

    walk_p = sub.add_parser("walk", help="bounded-step walks and dominance tables")
    walk_sub = walk_p.add_subparsers(dest="subcmd", metavar="SUBCOMMAND")

    p = walk_sub.add_parser("run", help="run a deterministic bounded-step walk")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--region", type=_parse_norm_value, required=True)
    p.add_argument("--start", type=_point, required=True)
    p.add_argument("--strategy", choices=[s.value for s in WalkStrategy], default="nearest")
    p.add_argument("--no-increasing-norm", action="store_true")
    p.add_argument("--include-axis", action="store_true")
    p.add_argument("--paths", metavar="FILE", help="decomposition CSV for step annotation")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_walk_run)

    p = walk_sub.add_parser("dominance", help="decade gap vs path-room table")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--A", type=_a_range, required=True, help="exponent or LO:HI range")
    p.add_argument("--gap", choices=[k.value for k in GapKind if k is not GapKind.CONSTANT],
                   default=None, help="restrict to one model (default: all three)")
    p.add_argument("--gap-c", type=float, default=1.0)
    p.add_argument("--gap-delta", type=float, default=0.025)
    p.add_argument("--error-const", type=float, default=0.0)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_walk_dominance)

    circle_p = sub.add_parser("circle", help="disk lattice counts and prime densities")
    circle_sub = circle_p.add_subparsers(dest="subcmd", metavar="SUBCOMMAND")

    p = circle_sub.add_parser("count", help="exact lattice count N(R)")
    p.add_argument("--R", type=float, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_circle_count)

    p = circle_sub.add_parser("density", help="octant prime density over a segment")
    p.add_argument("--segment", type=NormSegment.parse, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_circle_density)

    cache_p = sub.add_parser("cache", help="binary segment cache maintenance")
    cache_sub = cache_p.add_subparsers(dest="subcmd", metavar="SUBCOMMAND")

    p = cache_sub.add_parser("write", help="sieve a segment and write its cache file")
    p.add_argument("--segment", type=NormSegment.parse, required=True)
    p.add_argument("--include-axis", action="store_true")
    p.add_argument("--out", metavar="FILE", help="default: GMOAT_CACHE_DIR")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_cache_write)

    p = cache_sub.add_parser("read", help="read and validate a cache file")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_cache_read)

    p = cache_sub.add_parser("verify", help="validate a cache file")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_cache_verify)

    return top


def dispatch(argv=None) -> int:
    """Parse and run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"gmoat: error: {e}", file=sys.stderr)
        return 1
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except InternalInvariantError as e:
        print(f"gmoat: internal invariant violation: {e}", file=sys.stderr)
        return 2
    except (DomainError, ResourceError, CacheFormatError, InconclusiveRegionError) as e:
        print(f"gmoat: error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"gmoat: error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
