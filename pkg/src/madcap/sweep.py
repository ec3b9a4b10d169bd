"""Grid sweeps over rate planes and figure data sets, written as CSV."""
from __future__ import annotations

import csv
import io
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import capacity as cap
from . import channel as ch
from .degradability import classify

__all__ = [
    "HEADER",
    "QUANTITIES",
    "SweepConfig",
    "parse_plane",
    "plane_points",
    "evaluate_point",
    "run_sweep",
    "write_rows",
    "sweep_csv",
    "FIGURES",
    "figure",
    "worker_count",
]

HEADER = ("g1", "g2", "g3", "quantity", "value_lo", "value_hi", "status", "method")
QUANTITIES = ("q", "cp", "qe", "classify", "qdiag")
NON_CPTP = "non-CPTP"


def fmt(x: float) -> str:
    return f"{float(x) + 0.0:.9g}"


@dataclass(frozen=True)
class SweepConfig:
    plane: str
    step: float = 0.01
    quantities: tuple[str, ...] = ("q",)
    out: str | None = None
    tol: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.step <= 0.5):
            raise ValueError(f"step must lie in (0, 0.5], got {self.step}")
        bad = [q for q in self.quantities if q not in QUANTITIES]
        if bad:
            raise ValueError(f"unknown quantities {bad}; choose from {QUANTITIES}")
        parse_plane(self.plane)


_FIXED = re.compile(r"^g([123])\s*=\s*([0-9.eE+-]+)$")
_SUM = re.compile(r"^g2\s*\+\s*g3\s*=\s*1(\.0*)?$")


def parse_plane(plane: str):
    """Map a plane description to a function (a, b) -> (g1, g2, g3).

    Accepted: ``gK=c`` for K in 1..3 and 0 <= c <= 1, or ``g2+g3=1``.
    """
    plane = plane.replace(" ", "")
    if _SUM.match(plane):
        return lambda a, b: (a, b, 1.0 - b)
    m = _FIXED.match(plane)
    if not m:
        raise ValueError(f"cannot parse plane {plane!r}; use e.g. g2=0, g1=1 or g2+g3=1")
    k, c = int(m.group(1)), float(m.group(2))
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"fixed rate {c} outside [0, 1]")
    if k == 1:
        return lambda a, b: (c, a, b)
    if k == 2:
        return lambda a, b: (a, c, b)
    return lambda a, b: (a, b, c)


def _axis(step: float) -> list[float]:
    n = int(np.floor(1.0 / step + 1e-9))
    return [round(i * step, 12) for i in range(n + 1)]


def plane_points(plane: str, step: float) -> list[tuple[float, float, float]]:
    """All grid points of a plane in lexicographic (g1, g2, g3) order."""
    f = parse_plane(plane)
    pts = {tuple(round(x, 12) + 0.0 for x in f(a, b)) for a in _axis(step) for b in _axis(step)}
    return sorted(pts)


def evaluate_point(g: Sequence[float], quantity: str, tol: float = 1e-9) -> tuple[str, ...]:
    """One CSV row (as strings) for rate vector `g`."""
    g1, g2, g3 = (float(x) for x in g)
    head = (fmt(g1), fmt(g2), fmt(g3), quantity)
    problems = ch.validate_rates((g1, g2, g3))
    if problems:
        return head + ("", "", NON_CPTP, "; ".join(problems))
    if quantity == "classify":
        r = classify((g1, g2, g3), tol)
        status = f"degradable={r.degradable};antidegradable={r.antidegradable}"
        method = (f"{r.witness['degradable'].get('rule')}/"
                  f"{r.witness['antidegradable'].get('rule')}")
        return head + ("", "", status, method)
    if quantity == "qdiag":
        est = cap.max_diag_coherent_info((g1, g2, g3))
        return head + (fmt(est.lower), fmt(est.lower), str(est.status), est.method)
    est = cap.capacity((g1, g2, g3), quantity)
    return head + (fmt(est.lower), fmt(est.upper), str(est.status), est.method)


def _eval_star(args):
    return evaluate_point(*args)


def worker_count() -> int:
    """Pool size: MADCAP_WORKERS if set, else min(4, cpu count)."""
    env = os.environ.get("MADCAP_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, min(4, os.cpu_count() or 1))


def run_sweep(points: Iterable[Sequence[float]], quantities: Sequence[str],
              tol: float = 1e-9, workers: int | None = None) -> list[tuple[str, ...]]:
    """Evaluate every (point, quantity); rows come back in input order."""
    jobs = [(tuple(p), q, tol) for p in points for q in quantities]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(jobs) < 8:
        return [_eval_star(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_eval_star, jobs, chunksize=max(1, len(jobs) // (8 * workers))))


def write_rows(rows: Iterable[Sequence[str]], header: Sequence[str], out) -> None:
    """Write CSV to a path or a text stream."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_rows(rows, header, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def sweep_csv(config: SweepConfig, workers: int | None = None) -> str:
    """Run a sweep and return the CSV text (also written to config.out)."""
    rows = run_sweep(plane_points(config.plane, config.step), config.quantities, config.tol, workers)
    buf = io.StringIO()
    write_rows(rows, HEADER, buf)
    text = buf.getvalue()
    if config.out:
        Path(config.out).write_text(text)
    return text


# ---------------------------------------------------------------- figures


def _line(fn, step: float) -> list[tuple[float, float, float]]:
    return [fn(x) for x in _axis(step)]


def _fig2(outdir: Path, step: float, curve_step: float, workers) -> list[Path]:
    pts = _line(lambda x: (x, 0.0, 0.0), curve_step)
    cap_path = outdir / "fig02_capacity.csv"
    write_rows(run_sweep(pts, ["q"], workers=workers), HEADER, cap_path)
    rows = []
    for g1, _, _ in pts:
        p, v = cap.maximize_simplex(lambda q: cap.single_decay_bracket(g1, q))
        rows.append((fmt(g1), fmt(p.p0), fmt(p.p1), fmt(p.p2), fmt(v)))
    pop_path = outdir / "fig02_populations.csv"
    write_rows(rows, ("g1", "p0", "p1", "p2", "bracket_max"), pop_path)
    return [cap_path, pop_path]


def _surface(name: str, plane: str, quantity: str):
    def make(outdir: Path, step: float, curve_step: float, workers) -> list[Path]:
        path = outdir / name
        write_rows(run_sweep(plane_points(plane, step), [quantity], workers=workers), HEADER, path)
        return [path]
    return make


def _fig4(outdir: Path, step: float, curve_step: float, workers) -> list[Path]:
    path = outdir / "fig04_curve.csv"
    pts = _line(lambda x: (1.0, x, 0.0), curve_step)
    write_rows(run_sweep(pts, ["q"], workers=workers), HEADER, path)
    return [path]


def _fig6(outdir: Path, step: float, curve_step: float, workers) -> list[Path]:
    rows = []
    ax = _axis(step)
    for g1 in ax:
        for g2 in ax:
            for g3 in ax:
                ok = not ch.validate_rates((g1, g2, g3))
                zero = ok and g1 >= 0.5 and g3 >= 0.5
                rows.append((fmt(g1), fmt(g2), fmt(g3), str(int(ok)), str(int(zero))))
    path = outdir / "fig06_zero_region.csv"
    write_rows(rows, ("g1", "g2", "g3", "cptp", "zero"), path)
    return [path]


def _fig10(outdir: Path, step: float, curve_step: float, workers) -> list[Path]:
    curve = outdir / "fig10_qe_single_decay.csv"
    pts = _line(lambda x: (x, 0.0, 0.0), curve_step)
    write_rows(run_sweep(pts, ["qe"], workers=workers), HEADER, curve)
    paths = [curve]
    for label, plane in (("g3_0", "g3=0"), ("g2_0", "g2=0"), ("g1_0", "g1=0")):
        path = outdir / f"fig10_qe_{label}.csv"
        write_rows(run_sweep(plane_points(plane, step), ["qe"], workers=workers), HEADER, path)
        paths.append(path)
    return paths


FIGURES = {
    2: _fig2,
    3: _surface("fig03_g1_1.csv", "g1=1", "q"),
    4: _fig4,
    5: _surface("fig05_g2_0.csv", "g2=0", "q"),
    6: _fig6,
    7: _surface("fig07_g1_0.csv", "g1=0", "q"),
    8: _surface("fig08_g3_0_lower.csv", "g3=0", "qdiag"),
    9: _surface("fig09_g2_g3_1.csv", "g2+g3=1", "q"),
    10: _fig10,
}


def figure(fig_id: int, outdir, step: float = 0.05, curve_step: float = 0.01,
           workers: int | None = None) -> list[Path]:
    """Write the CSV files behind figure `fig_id` into `outdir`."""
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure {fig_id}; available: {sorted(FIGURES)}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return FIGURES[fig_id](outdir, step, curve_step, workers)
