"""Command-line surface: builds, sweeps, atlases, values, energy, reports.

Every command emits a JSON report (or CSV for tabular outputs) whose
numeric payload is decimal strings at full working precision; JSON number
types are never used for big values.  Reports embed a manifest with the
exact parameters, cache keys and wall time; re-running a command with the
same manifest parameters reproduces the numeric payload byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import gmpy2

from . import __version__
from . import analysis, eigensingle, energy, magic
from .cache import FORMAT_VERSION, load_or_build_pair
from .lattice import (InternalInconsistency, NoDecay, get_lattice,
                      hexagonal_constants, shell_counts)
from .mpnum import (NoConvergence, PrecisionContext, SingularMatrix,
                    UnsupportedArgument)
from .schedule import DegenerateSchedule, modified_schedule, naive_schedule

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_BADARGS = 3

_NUMERIC_ERRORS = (SingularMatrix, NoConvergence, NoDecay, InternalInconsistency,
                   magic.ScalingDegenerate, eigensingle.DegenerateNullspace,
                   DegenerateSchedule)
_ARG_ERRORS = (UnsupportedArgument, analysis.OutOfRange, eigensingle.OutOfScope,
               ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_BADARGS)


@dataclass
class RunManifest:
    command: str
    parameters: dict
    cache_keys: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    wall_time_s: float = 0.0
    artifact_version: str = __version__
    format_version: int = FORMAT_VERSION

    def as_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _parse_n(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse dimension {text!r}")


def _resolve_lattice(n: Fraction, lattice_opt):
    if lattice_opt:
        return get_lattice(lattice_opt)
    if n == 8:
        return get_lattice(8)
    if n == 24:
        return get_lattice(24)
    raise ValueError("for dimensions other than 8 and 24, pass --lattice")


def _resolve_ctx(k: int, digits, force_digits) -> PrecisionContext:
    default = 8 * k + 75
    if force_digits is not None:
        return PrecisionContext(max(int(force_digits), 30))
    if digits is None:
        return PrecisionContext(default)
    digits = int(digits)
    if digits < default:
        raise ValueError(
            f"--digits {digits} is below the default {default}; "
            f"use --force-digits to lower the precision deliberately")
    return PrecisionContext(digits)


def _make_schedule(kind: str, lat, k: int):
    if kind == "naive":
        return naive_schedule(lat, k)
    return modified_schedule(lat, k)


def _parse_c(text: str, ctx: PrecisionContext):
    """Gaussian steepness: a decimal, 'pi', or '<factor>pi' (e.g. 2pi)."""
    t = text.strip().lower().replace("*", "")
    with ctx.working():
        if t.endswith("pi"):
            head = t[:-2]
            factor = ctx.mpf(Fraction(head)) if head else ctx.mpf(1)
            return factor * ctx.pi_cached
        return ctx.mpf(Fraction(t)) if "/" in t else ctx.mpf(t)


def _parse_points(text: str):
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        re_s, _, im_s = chunk.partition(":")
        pts.append((Fraction(re_s), Fraction(im_s or "0")))
    if not pts:
        raise ValueError("no sample points given")
    return pts


def _pair_for(args, n, lat, sched, ctx):
    cache_root = Path(args.cache_dir) if args.cache_dir else None
    nv = ctx.mpf(n)
    pair, key, hit = load_or_build_pair(nv, sched, ctx, cache_root)
    return pair, key, hit


def _emit_json(report: dict, out_path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, out_path, manifest: RunManifest | None = None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if out_path:
        Path(out_path).write_text(buf.getvalue(), encoding="utf-8")
        # CSV cannot embed its manifest, so it rides in a sidecar file
        if manifest is not None:
            manifest.outputs = [str(out_path)]
            side = Path(str(out_path) + ".manifest.json")
            side.write_text(json.dumps(manifest.as_dict(), indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())


def _atlas_rows(atlas, ctx, side_tag):
    rows = []
    for z, mult, forced in atlas.x_roots:
        rows.append([ctx.to_str(z.real), ctx.to_str(z.imag), mult,
                     int(forced), side_tag])
    return rows


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_bound(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    sched = _make_schedule(args.schedule, lat, args.k)
    pair, key, hit = _pair_for(args, n, lat, sched, ctx)
    report = magic.density_bound(pair)
    with ctx.working():
        results = {
            "n": ctx.to_str(pair.n),
            "k": pair.k,
            "lattice": lat.name,
            "schedule": sched.kind,
            "digits": ctx.digits,
            "bound_vs_lattice": ctx.to_str(report.bound_vs_lattice),
            "excess_over_one": ctx.to_str(report.bound_vs_lattice - 1),
            "fhat0": ctx.to_str(report.fhat0),
            "ratio": ctx.to_str(report.ratio),
        }
        if args.skip_signs:
            results["signs_valid"] = None
        else:
            sr = report.sign_report
            results["signs_valid"] = report.signs_valid
            results["nonforced_real_roots_f"] = [
                [ctx.to_str(u), m] for u, m in sr.nonforced_real_roots_f]
            results["nonforced_real_roots_fhat"] = [
                [ctx.to_str(u), m] for u, m in sr.nonforced_real_roots_fhat]
    manifest = RunManifest(
        command="bound",
        parameters={"n": str(n), "k": args.k, "lattice": lat.name,
                    "schedule": sched.kind, "digits": ctx.digits,
                    "skip_signs": bool(args.skip_signs)},
        cache_keys=[key],
        outputs=[args.out] if args.out else [],
        wall_time_s=round(time.perf_counter() - t0, 3),
    )
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def _sweep_value(task, args, n, lat, k, cache_root):
    """One sweep row; returns the scalar as a decimal string."""
    ctx = _resolve_ctx(k, args.digits, args.force_digits)
    if task == "conj61":
        c = _parse_c(args.c, ctx)
        build = energy.build_h(int(n), c, k, ctx)
        with ctx.working():
            return ctx.to_str(energy.conjecture61_check(build))
    sched = _make_schedule(args.schedule, lat, k)
    nv = ctx.mpf(n)
    pair, _, _ = load_or_build_pair(nv, sched, ctx, cache_root)
    side = pair.f if args.side == "f" else pair.fhat
    with ctx.working():
        if task == "bound":
            return ctx.to_str(magic.density_bound(pair).bound_vs_lattice)
        if task == "taylor":
            tc = analysis.taylor_coefficients(side, args.order)
            return ctx.to_str(tc.values[args.order // 2])
        if task == "minimag":
            atlas = analysis.root_atlas(side, sched, args.side, ctx)
            return ctx.to_str(atlas.min_imag) if atlas.min_imag is not None else ""
        if task == "fprime":
            return ctx.to_str(analysis.fprime_check(pair, lat))
        if task == "mellin":
            return ctx.to_str(analysis.mellin_value(side, args.s).value)
    raise ValueError(f"unknown sweep task {task}")


def _sweep_row(packed) -> tuple:
    """One (k, value, error) row; module-level so worker processes can run it."""
    args, n_str, k = packed
    n = Fraction(n_str)
    lat = _resolve_lattice(n, args.lattice)
    cache_root = Path(args.cache_dir) if args.cache_dir else None
    try:
        value = _sweep_value(args.task, args, n, lat, k, cache_root)
        return (k, value, "")
    except _NUMERIC_ERRORS as err:
        return (k, "", f"{type(err).__name__}: {err}")


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    _resolve_lattice(n, args.lattice)  # validate up front
    ks = sorted({int(s) for s in args.k_list.split(",") if s.strip()})
    if not ks:
        raise ValueError("empty k list")
    packed = [(args, str(n), k) for k in ks]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_row, packed))
    else:
        results = [_sweep_row(p) for p in packed]
    rows = [list(r) for r in sorted(results)]
    failures = sum(1 for r in rows if r[2])
    manifest = RunManifest("sweep",
                           {"n": str(n), "k_list": ks, "task": args.task,
                            "schedule": args.schedule, "side": args.side,
                            "order": args.order, "s": args.s, "c": args.c,
                            "jobs": args.jobs},
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_csv(["k", "value", "error"], rows, args.out, manifest)
    if args.plot:
        if not args.out:
            raise ValueError("--plot needs --out to name the figure")
        from .plots import render_sweep_png
        values = [None if r[1] == "" else r[1] for r in rows]
        render_sweep_png([r[0] for r in rows], values, args.task,
                         str(Path(args.out).with_suffix(".png")),
                         title=f"{args.task}, n={n}")
    return EXIT_NUMERIC if failures == len(ks) else EXIT_OK


def cmd_atlas(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    sched = _make_schedule(args.schedule, lat, args.k)
    pair, key, _ = _pair_for(args, n, lat, sched, ctx)
    side = pair.f if args.side == "f" else pair.fhat
    atlas = analysis.root_atlas(side, sched, args.side, ctx)
    rows = _atlas_rows(atlas, ctx, args.side)
    manifest = RunManifest("atlas",
                           {"n": str(n), "k": args.k, "schedule": sched.kind,
                            "side": args.side, "digits": ctx.digits},
                           cache_keys=[key],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_csv(["re", "im", "mult", "forced", "side"], rows, args.out, manifest)
    if args.plot:
        if not args.out:
            raise ValueError("--plot needs --out to name the figure")
        from .plots import render_atlas_png
        dict_rows = [{"re": r[0], "im": r[1], "forced": bool(r[3])} for r in rows]
        render_atlas_png(dict_rows, str(Path(args.out).with_suffix(".png")),
                         title=f"roots of {args.side}, n={n}, k={args.k}")
    return EXIT_OK


def cmd_values(args) -> int:
    from .polybasis import eval_profile
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    sched = _make_schedule(args.schedule, lat, args.k)
    pair, key, _ = _pair_for(args, n, lat, sched, ctx)

    if args.compare_k is not None:
        # per-point agreement digits between this build and a second one,
        # on the standard grid (the convergence-figure axes)
        ctx_lo = _resolve_ctx(args.compare_k, None, None)
        sched_lo = _make_schedule(args.schedule, lat, args.compare_k)
        pair_lo, key_lo, _ = _pair_for(args, n, lat, sched_lo, ctx_lo)
        grid_rows = analysis.convergence_grid(pair, pair_lo)
        rows = [[x, y,
                 "" if df is None else f"{df:.3f}",
                 "" if dh is None else f"{dh:.3f}"]
                for x, y, df, dh in grid_rows]
        manifest = RunManifest("values",
                               {"n": str(n), "k": args.k, "compare_k": args.compare_k,
                                "schedule": sched.kind, "digits": ctx.digits},
                               cache_keys=[key, key_lo],
                               wall_time_s=round(time.perf_counter() - t0, 3))
        _emit_csv(["x_tenths", "y_tenths", "digits_f", "digits_fhat"],
                  rows, args.out, manifest)
        return EXIT_OK

    rows = []

    def complex_cells(v):
        if hasattr(v, "imag"):
            return [ctx.to_str(v.real), ctx.to_str(v.imag)]
        return [ctx.to_str(v), "0"]

    with ctx.working():
        if args.points:
            for re_f, im_f in _parse_points(args.points):
                z = ctx.mpcx(ctx.mpf(re_f), ctx.mpf(im_f))
                rows.append([ctx.to_str(z.real), ctx.to_str(z.imag)]
                            + complex_cells(eval_profile(pair.f, z))
                            + complex_cells(eval_profile(pair.fhat, z)))
            header = ["re", "im", "f_re", "f_im", "fhat_re", "fhat_im"]
        else:
            for x, y in analysis.default_grid():
                z = ctx.mpcx(ctx.mpf(x) / 10, ctx.mpf(y) / 10)
                rows.append([x, y]
                            + complex_cells(eval_profile(pair.f, z))
                            + complex_cells(eval_profile(pair.fhat, z)))
            header = ["x_tenths", "y_tenths", "f_re", "f_im", "fhat_re", "fhat_im"]
    manifest = RunManifest("values",
                           {"n": str(n), "k": args.k, "schedule": sched.kind,
                            "points": args.points, "digits": ctx.digits},
                           cache_keys=[key],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_csv(header, rows, args.out, manifest)
    if args.plot and not args.points:
        if not args.out:
            raise ValueError("--plot needs --out to name the figure")
        from .plots import render_values_png
        dict_rows = [{"x": r[0], "y": r[1], "f": r[2]} for r in rows]
        render_values_png(dict_rows, str(Path(args.out).with_suffix(".png")),
                          title=f"profile values, n={n}, k={args.k}")
    return EXIT_OK


def cmd_taylor(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    sched = _make_schedule(args.schedule, lat, args.k)
    pair, key, _ = _pair_for(args, n, lat, sched, ctx)
    side = pair.f if args.side == "f" else pair.fhat
    tc = analysis.taylor_coefficients(side, args.order)
    with ctx.working():
        results = {
            "side": args.side,
            "order": args.order,
            "rescaled": tc.rescaled,
            "coefficients": [ctx.to_str(v) for v in tc.values],
        }
    manifest = RunManifest("taylor",
                           {"n": str(n), "k": args.k, "schedule": sched.kind,
                            "side": args.side, "order": args.order,
                            "digits": ctx.digits},
                           cache_keys=[key], outputs=[args.out] if args.out else [],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def cmd_mellin(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    sched = _make_schedule(args.schedule, lat, args.k)
    pair, key, _ = _pair_for(args, n, lat, sched, ctx)
    with ctx.working():
        results = {
            "s": args.s,
            "M_f": ctx.to_str(analysis.mellin_value(pair.f, args.s).value),
            "M_fhat": ctx.to_str(analysis.mellin_value(pair.fhat, args.s).value),
        }
        if args.symmetry:
            results["symmetry_discrepancy"] = ctx.to_str(
                analysis.mellin_symmetry_check(pair, args.s))
    manifest = RunManifest("mellin",
                           {"n": str(n), "k": args.k, "schedule": sched.kind,
                            "s": args.s, "digits": ctx.digits},
                           cache_keys=[key], outputs=[args.out] if args.out else [],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def cmd_fprime(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    sched = _make_schedule(args.schedule, lat, args.k)
    pair, key, _ = _pair_for(args, n, lat, sched, ctx)
    with ctx.working():
        rho = analysis.fprime_check(pair, lat)
        hex_r1, hex_kiss = hexagonal_constants(ctx)
        results = {
            "rho": ctx.to_str(rho),
            "deviation_from_one": ctx.to_str(rho - 1),
            "minimal_vector_constants": [
                {"n": 2, "lattice": "hexagonal", "r1": ctx.to_str(hex_r1),
                 "kissing": hex_kiss},
                {"n": 8, "lattice": "E8",
                 "r1": ctx.to_str(get_lattice(8).min_length(ctx)), "kissing": 240},
                {"n": 24, "lattice": "Leech",
                 "r1": ctx.to_str(get_lattice(24).min_length(ctx)), "kissing": 196560},
            ],
        }
    manifest = RunManifest("fprime",
                           {"n": str(n), "k": args.k, "schedule": sched.kind,
                            "digits": ctx.digits},
                           cache_keys=[key], outputs=[args.out] if args.out else [],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def cmd_ratio(args) -> int:
    n = _parse_n(args.n)
    lat = _resolve_lattice(n, args.lattice)
    value = analysis.ratio_formula(n, lat)
    ctx = PrecisionContext(60)
    with ctx.working():
        results = {
            "n": str(n),
            "lattice": lat.name,
            "ratio_exact": f"{value.numerator}/{value.denominator}",
            "ratio_decimal": ctx.to_str(ctx.mpf(value)),
        }
    manifest = RunManifest("ratio", {"n": str(n), "lattice": lat.name})
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def cmd_energy(args) -> int:
    t0 = time.perf_counter()
    n = int(_parse_n(args.n))
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    c = _parse_c(args.c, ctx)
    build = energy.build_h(n, c, args.k, ctx)
    with ctx.working():
        results = {
            "n": n,
            "c": ctx.to_str(build.c),
            "k": build.k,
            "bound": ctx.to_str(build.bound),
            "lattice_energy": ctx.to_str(build.lattice_energy),
            "gap": ctx.to_str(build.gap),
            "conj61_discrepancy": ctx.to_str(energy.conjecture61_check(build)),
        }
        if args.validate:
            cert = energy.validate_certificate(build)
            results["certificate_valid"] = cert.valid
            results["max_tangency_residual"] = ctx.to_str(cert.max_tangency_residual)
        if args.dual:
            dual = energy.duality_transform(build)
            results["dual"] = {
                "c_dual": ctx.to_str(dual.c_dual),
                "amplitude": ctx.to_str(dual.amplitude),
                "bound": ctx.to_str(dual.bound),
                "lattice_energy": ctx.to_str(dual.lattice_energy),
                "gap": ctx.to_str(dual.gap),
                "identity_discrepancy": ctx.to_str(dual.identity_discrepancy),
            }
    manifest = RunManifest("energy",
                           {"n": n, "c": args.c, "k": args.k, "digits": ctx.digits,
                            "dual": bool(args.dual), "validate": bool(args.validate)},
                           outputs=[args.out] if args.out else [],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def cmd_single(args) -> int:
    t0 = time.perf_counter()
    n = _parse_n(args.n)
    ctx = _resolve_ctx(args.k, args.digits, args.force_digits)
    if args.extra_root is not None:
        g = eigensingle.extra_root_variant(Fraction(args.extra_root), args.k, ctx)
    else:
        g = eigensingle.build_single(ctx.mpf(n), args.k, args.eps, ctx,
                                     leech_style=args.leech_style)
    with ctx.working():
        results = {
            "n": str(n), "k": args.k, "eps": args.eps,
            "eigen_sign": g.eigen_sign(),
            "degree": g.r_poly.degree,
            "leech_style": bool(args.leech_style),
        }
        if args.imag_roots:
            roots = eigensingle.imaginary_roots(g, args.imag_roots)
            results["imaginary_root_squares"] = [ctx.to_str(r) for r in roots]
        if args.ratio_test:
            if args.extra_root is not None:
                target = eigensingle.extra_variant_target(Fraction(args.extra_root), ctx)
                dev = eigensingle.ratio_deviation(g, target)
            else:
                target = eigensingle.closed_form_g(int(n), args.eps, ctx)
                dev = eigensingle.ratio_deviation(g, target)
            results["closed_form_ratio_deviation"] = f"{dev:.6e}"
        if args.extra_root is not None:
            disc, real_roots = eigensingle.extraneous_quadratic(Fraction(args.extra_root), ctx)
            results["extraneous_quadratic_discriminant"] = ctx.to_str(disc)
            results["extraneous_roots_real"] = bool(real_roots)
    if args.atlas:
        forced = [(ctx.mpf(u), 1) for u in g.forced_u]
        if g.extra_root is not None:
            forced.append((ctx.mpf(g.extra_root), 1))
        atlas = analysis.atlas_from_poly(g.r_poly, forced, ctx,
                                         f"single_eps{args.eps}", g.n, g.k)
        rows = _atlas_rows(atlas, ctx, f"single_eps{args.eps}")
        atlas_manifest = RunManifest("single",
                                     {"n": str(n), "k": args.k, "eps": args.eps,
                                      "digits": ctx.digits})
        _emit_csv(["re", "im", "mult", "forced", "side"], rows, args.atlas,
                  atlas_manifest)
        if args.plot:
            from .plots import render_atlas_png
            dict_rows = [{"re": r[0], "im": r[1], "forced": bool(r[3])} for r in rows]
            render_atlas_png(dict_rows, str(Path(args.atlas).with_suffix(".png")),
                             title=f"single-root eigenfunction roots, n={n}, k={args.k}")
    manifest = RunManifest("single",
                           {"n": str(n), "k": args.k, "eps": args.eps,
                            "leech_style": bool(args.leech_style),
                            "extra_root": args.extra_root, "digits": ctx.digits},
                           outputs=[p for p in (args.out, args.atlas) if p],
                           wall_time_s=round(time.perf_counter() - t0, 3))
    _emit_json({"manifest": manifest.as_dict(), "results": results}, args.out)
    return EXIT_OK


def cmd_shells(args) -> int:
    lat = get_lattice(args.lattice)
    counts = shell_counts(lat, args.max_j)
    ctx = PrecisionContext(40)
    rows = []
    with ctx.working():
        for j, count in enumerate(counts, start=1):
            rows.append([j, ctx.to_str(gmpy2.sqrt(gmpy2.mpfr(2 * j))), count])
    manifest = RunManifest("shells", {"lattice": lat.name, "max_j": args.max_j})
    _emit_csv(["j", "norm", "count"], rows, args.out, manifest)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_common(p, k_required=True):
    p.add_argument("--n", required=True, help="dimension (integer, fraction, or decimal)")
    if k_required:
        p.add_argument("--k", type=int, required=True, help="number of forced roots")
    p.add_argument("--lattice", choices=["E8", "Leech"], default=None,
                   help="root-length family; inferred from n = 8 or 24")
    p.add_argument("--schedule", choices=["modified", "naive"], default="modified")
    p.add_argument("--digits", type=int, default=None,
                   help="working precision; must not go below the 8k+75 default")
    p.add_argument("--force-digits", type=int, default=None,
                   help="override the precision floor (use with care)")
    p.add_argument("--cache-dir", default=None, help="pair cache directory")
    p.add_argument("--out", "-o", default=None, help="output file (stdout if omitted)")


def build_parser() -> _Parser:
    parser = _Parser(prog="packbound",
                     description="Density and energy bounds for the E8/Leech "
                                 "packings from forced-root Gaussian functions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="density bound for one build")
    _add_common(p)
    p.add_argument("--skip-signs", action="store_true",
                   help="skip the (possibly slow) sign-validity root scan")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="k-sweep of a scalar task, CSV output")
    _add_common(p, k_required=False)
    p.add_argument("--k-list", required=True, help="comma-separated k values")
    p.add_argument("--task", required=True,
                   choices=["bound", "taylor", "minimag", "fprime", "mellin", "conj61"])
    p.add_argument("--side", choices=["f", "fhat"], default="f")
    p.add_argument("--order", type=int, default=2, help="taylor order")
    p.add_argument("--s", type=int, default=4, help="mellin argument")
    p.add_argument("--c", default="pi", help="Gaussian steepness for conj61")
    p.add_argument("--jobs", type=int, default=1, help="parallel build workers")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("atlas", help="complex root atlas of one side, CSV output")
    _add_common(p)
    p.add_argument("--side", choices=["f", "fhat"], default="f")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("values", help="profile values on the sample grid or at points")
    _add_common(p)
    p.add_argument("--points", default=None,
                   help="semicolon list of re:im radii (default: the x/10+(y/10)i grid)")
    p.add_argument("--compare-k", type=int, default=None,
                   help="emit per-point agreement digits against this second build")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_values)

    p = sub.add_parser("taylor", help="Taylor coefficients about 0")
    _add_common(p)
    p.add_argument("--side", choices=["f", "fhat"], default="f")
    p.add_argument("--order", type=int, default=4)
    p.set_defaults(func=cmd_taylor)

    p = sub.add_parser("mellin", help="Mellin special values and symmetry check")
    _add_common(p)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--symmetry", action="store_true")
    p.set_defaults(func=cmd_mellin)

    p = sub.add_parser("fprime", help="slope identity ratio at the first root")
    _add_common(p)
    p.set_defaults(func=cmd_fprime)

    p = sub.add_parser("ratio", help="closed-form predicted f(0)/fhat(0)")
    p.add_argument("--n", required=True)
    p.add_argument("--lattice", choices=["E8", "Leech"], default=None)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("energy", help="Gaussian-potential energy certificate")
    p.add_argument("--n", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", required=True, help="steepness: decimal, 'pi', or '2pi'")
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--force-digits", type=int, default=None)
    p.add_argument("--dual", action="store_true", help="include the dual certificate")
    p.add_argument("--validate", action="store_true", help="run the sign sampling")
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("single", help="single-root Fourier eigenfunction")
    p.add_argument("--n", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=int, choices=[0, 1], required=True)
    p.add_argument("--leech-style", action="store_true",
                   help="force roots at 4,6,8,... instead of 2,4,6,...")
    p.add_argument("--extra-root", default=None,
                   help="extra forced factor location (n=4, eps=0 variant)")
    p.add_argument("--imag-roots", type=int, default=0,
                   help="report this many negative real u-roots")
    p.add_argument("--ratio-test", action="store_true")
    p.add_argument("--atlas", default=None, help="write the root atlas CSV here")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--force-digits", type=int, default=None)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("shells", help="theta shell table, CSV output")
    p.add_argument("--lattice", required=True, choices=["E8", "Leech"])
    p.add_argument("--max-j", type=int, required=True)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=cmd_shells)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _NUMERIC_ERRORS as err:
        sys.stderr.write(f"numeric failure: {type(err).__name__}: {err}\n")
        return EXIT_NUMERIC
    except _ARG_ERRORS as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_BADARGS


if __name__ == "__main__":
    sys.exit(main())
