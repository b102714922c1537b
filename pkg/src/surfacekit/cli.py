"""Command-line front end.

    surfacekit pants    --input pants.json
    surfacekit assemble --input theta_R8.json --R 8 --eps 0.1 --word-bound 6
    surfacekit match    --input measure_pair.json [--delta D]
    surfacekit sweep    --r-grid 10:60:5 [--eps 0.1 --seed 0]
    surfacekit xi       --r-grid 0.1:20:0.2

Every command prints a JSON summary (or writes it to --output); tabular
commands also write a CSV next to it (--output with suffix .csv).  Exit
codes: 0 success, 1 malformed input, 2 geometric error (its class name is
printed on stderr).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from surfacekit import io as sio
from surfacekit.assembly import (
    build_graph,
    extract_shear,
    glue,
    glue_from_feet,
    injectivity_certificate,
    is_flat_rep,
    labeling_from_classes,
    theta_labeling,
)
from surfacekit.config import PROFILES, Tolerances, use_profile
from surfacekit.errors import GeometryError
from surfacekit.measures import construct_involution, hall_match
from surfacekit.pants import CuffTorus, foot, half_lengths_of, is_futal, pants_rep
from surfacekit.psl2c import IDENTITY

EXIT_INPUT, EXIT_GEOMETRY = 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input: str | None = None
    output: str | None = None
    R: float | None = None
    eps: float | None = None
    delta: float | None = None
    r_grid: tuple = ()
    word_bound: int = 6
    seed: int = 0
    tolerance_profile: str = "default"

    def __post_init__(self):
        for name in ("R", "eps", "delta"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise sio.InputError(f"--{name} must be positive")
        if self.word_bound < 1:
            raise sio.InputError("--word-bound must be at least 1")


def parse_grid(text: str) -> tuple:
    """'a:b:step' (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, step = (float(t) for t in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            n = int(math.floor((b - a) / step + 1e-9)) + 1
            return tuple(a + k * step for k in range(n))
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise sio.InputError(f"bad --r-grid {text!r}") from exc


def _tolerances(name: str) -> Tolerances:
    if name in PROFILES:
        return PROFILES[name]
    data = sio.load(name)
    base = PROFILES[data.pop("profile", "default")]
    names = {f.name for f in dataclasses.fields(Tolerances)}
    bad = set(data) - names
    if bad:
        raise sio.InputError(f"unknown tolerances: {sorted(bad)}")
    return dataclasses.replace(base, **{k: sio.number(v, k) for k, v in data.items()})


def _need_input(cfg: RunConfig) -> dict:
    if cfg.input is None:
        raise sio.InputError(f"{cfg.subcommand} needs --input")
    return sio.load(cfg.input)


# ---------------------------------------------------------------------------


def cmd_pants(cfg: RunConfig):
    data = _need_input(cfg)
    sig = sio.field(data, "sigmas")
    if not isinstance(sig, list) or len(sig) != 3:
        raise sio.InputError("sigmas must list three half-lengths")
    sig = [sio.half_length_input(s) for s in sig]
    p = pants_rep(*sig)
    f = foot(p)
    report = {
        "sigmas": sig,
        "matrices": [sio.matrix(g) for g in p.as_tuple()],
        "half_lengths": list(half_lengths_of(p)),
        "foot": f.position,
        "futal": is_futal(p),
    }
    return report, None


def _graph_from_input(data: dict, R: float):
    if data.get("graph") == "theta":
        sig = data.get("sigmas", [R / 2] * 3)
        lab, tau = theta_labeling(tuple(sio.half_length_input(s) for s in sig))
        return build_graph(lab, tau)
    classes = [sio.pants_class(c) for c in sio.field(data, "classes")]
    counts = data.get("counts", [1] * len(classes))
    if len(counts) != len(classes) or any(not isinstance(n, int) or n < 1 for n in counts):
        raise sio.InputError("counts must be positive integers, one per class")
    delta = sio.number(sio.field(data, "delta"), "delta")
    lab = labeling_from_classes(classes, counts)
    return build_graph(lab, construct_involution(lab, delta))


def cmd_assemble(cfg: RunConfig):
    data = _need_input(cfg)
    R = cfg.R or sio.number(data.get("R", 8.0), "R")
    eps = cfg.eps or sio.number(data.get("eps", 0.1), "eps")
    graph = _graph_from_input(data, R)
    if "shears" in data:
        shears = [sio.cnum(t, "shear") for t in data["shears"]]
        if len(shears) != len(graph.edges):
            raise sio.InputError(f"need {len(graph.edges)} shears, got {len(shears)}")
        rep = glue(graph, shears)
    elif "shear" in data:
        rep = glue(graph, [sio.cnum(data["shear"], "shear")] * len(graph.edges))
    else:
        rep = glue_from_feet(graph)
    table = []
    cert = injectivity_certificate(rep, cfg.word_bound, table)
    summary = {
        "genus": graph.genus,
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "dropped_vertices": graph.dropped_vertices,
        "component": (
            f"kept the component of vertex 0; {graph.dropped_vertices} vertices in other components dropped"
            if graph.dropped_vertices
            else "connected"
        ),
        "R": R,
        "eps": eps,
        "shears": [extract_shear(rep, k) for k in range(len(graph.edges))],
        "is_flat_rep": is_flat_rep(rep, R, eps),
        "word_bound": cfg.word_bound,
        "word_count": cert.word_count,
        "min_translation": cert.min_translation,
        "max_relative_imag_trace": cert.max_imag_trace,
        "non_loxodromic_count": len(cert.failures),
        "non_loxodromic_sample": cert.failures[:10],
        "injectivity_passed": cert.passed,
    }
    rows = []
    for word, tr, ell in table:
        ell = ell if ell is not None else complex("nan")
        rows.append((word, tr.real, tr.imag, ell.real, ell.imag))
    return summary, (("word", "trace_re", "trace_im", "ell_re", "ell_im"), rows)


def cmd_match(cfg: RunConfig):
    data = _need_input(cfg)
    sigma = sio.half_length_input(sio.field(data, "sigma"), "sigma")
    A = [sio.cnum(z, "A point") for z in sio.field(data, "A")]
    B = [sio.cnum(z, "B point") for z in sio.field(data, "B")]
    shift = sio.cnum(data.get("shift", 0), "shift")
    delta = cfg.delta or sio.number(sio.field(data, "delta"), "delta")
    torus = CuffTorus(sigma)
    out = hall_match(range(len(A)), range(len(B)), lambda i: A[i] + shift, lambda j: B[j], delta, torus)
    summary = {"delta": delta, "matched": out.ok}
    if out.ok:
        perm = [out.bijection[i] for i in range(len(A))]
        summary["permutation"] = perm
        summary["max_displacement"] = max(
            (torus.distance(A[i] + shift, B[j]) for i, j in enumerate(perm)), default=0.0
        )
    else:
        summary["hall_violator"] = list(out.witness)
        summary["neighbors"] = list(out.neighbors)
    return summary, None


def _sweep_row(args):
    r, eps, seed, profile = args
    from surfacekit.tripods import foot_gap, g_r_cartan_sweep, tripod_report

    with use_profile(profile):
        row = g_r_cartan_sweep([r])[0]
        rep = tripod_report(IDENTITY, IDENTITY, r)
        gap = foot_gap(IDENTITY, IDENTITY, r, eps, seed)
    d = row.deviations
    return (r, row.ell, row.theta1, row.theta2, d[0], d[1], d[2], rep.sigma_deviation, max(rep.axis_distances), gap)


def _slope(rs, ys):
    from surfacekit.tripods import loglinear_slope

    pts = [(r, y) for r, y in zip(rs, ys) if y > 0]
    if len(pts) < 2:
        return None
    return loglinear_slope([p[0] for p in pts], [p[1] for p in pts])


def cmd_sweep(cfg: RunConfig):
    rs = cfg.r_grid or tuple(float(r) for r in range(10, 61, 5))
    if any(r <= 0 for r in rs):
        raise sio.InputError("sweep radii must be positive")
    eps = cfg.eps or 0.1
    jobs = [(r, eps, cfg.seed, _tolerances(cfg.tolerance_profile)) for r in rs]
    if len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(len(jobs), os.cpu_count() or 1)) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    header = ("r", "ell", "theta1", "theta2", "dev_ell", "dev_theta1", "dev_theta2",
              "dev_sigma", "axis_distance", "foot_gap")
    cols = {h: [row[k] for row in rows] for k, h in enumerate(header)}
    summary = {
        "r_grid": list(rs),
        "perturbation": eps,
        "seed": cfg.seed,
        "fitted_slopes": {
            h: _slope(rs, cols[h])
            for h in ("dev_ell", "dev_theta1", "dev_theta2", "dev_sigma", "axis_distance", "foot_gap")
        },
        "foot_gap_monotone": all(b < a for a, b in zip(cols["foot_gap"], cols["foot_gap"][1:])),
    }
    return summary, (header, rows)


def cmd_xi(cfg: RunConfig):
    from surfacekit.tripods import xi_closed_form, xi_harish_chandra

    rs = cfg.r_grid or tuple(float(r) for r in np.linspace(0.1, 20, 100))
    if any(r <= 0 for r in rs):
        raise sio.InputError("xi radii must be positive")
    rows = []
    for r in rs:
        q, c = xi_harish_chandra(r), xi_closed_form(r)
        rows.append((r, q, c, abs(q - c) / c))
    summary = {"points": len(rows), "max_relative_error": max(row[3] for row in rows)}
    return summary, (("r", "quadrature", "closed_form", "relative_error"), rows)


COMMANDS = {
    "pants": cmd_pants,
    "assemble": cmd_assemble,
    "match": cmd_match,
    "sweep": cmd_sweep,
    "xi": cmd_xi,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surfacekit", description="Pants, gluing, matching and tripod sweeps.")
    ap.add_argument("subcommand", choices=sorted(COMMANDS))
    ap.add_argument("--input")
    ap.add_argument("--output")
    ap.add_argument("--R", type=float)
    ap.add_argument("--eps", type=float)
    ap.add_argument("--delta", type=float)
    ap.add_argument("--r-grid", default="")
    ap.add_argument("--word-bound", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tolerance-profile", default="default")
    return ap


def _emit(cfg: RunConfig, summary: dict, table) -> None:
    text = sio.dumps(summary) + "\n"
    if cfg.output is None:
        sys.stdout.write(text)
        return
    out = Path(cfg.output)
    out.write_text(text, encoding="utf-8")
    if table is not None:
        out.with_suffix(".csv").write_text(sio.to_csv(*table), encoding="utf-8")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    try:
        cfg = RunConfig(
            ns.subcommand, ns.input, ns.output, ns.R, ns.eps, ns.delta,
            parse_grid(ns.r_grid) if ns.r_grid else (), ns.word_bound, ns.seed, ns.tolerance_profile,
        )
        profile = _tolerances(cfg.tolerance_profile)
        with use_profile(profile):
            summary, table = COMMANDS[cfg.subcommand](cfg)
        _emit(cfg, summary, table)
    except sio.InputError as exc:
        print(f"InputError: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GeometryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        print(f"InputError: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
