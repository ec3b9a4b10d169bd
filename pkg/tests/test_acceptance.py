"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (shown even
without ``-s``) before asserting. Reference values come from oracles
written here independently of the library: explicit Kraus operators,
explicit Stinespring dilations and closed-form diagonal entropies.
"""
import csv
import io
import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from madcap import capacity as cap
from madcap import channel as ch
from madcap import degradability as dg
from madcap import sweep as sw

LOG2_3 = math.log2(3)


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else ""))
        assert ok, f"criterion {n} failed: {detail}"
    return emit


# ---------------------------------------------------------------- oracles


def kraus_oracle(g1, g2, g3):
    k0 = np.diag([1.0, math.sqrt(max(1 - g1, 0)), math.sqrt(max(1 - g2 - g3, 0))])
    k01 = np.zeros((3, 3)); k01[0, 1] = math.sqrt(g1)
    k12 = np.zeros((3, 3)); k12[1, 2] = math.sqrt(g2)
    k02 = np.zeros((3, 3)); k02[0, 2] = math.sqrt(g3)
    return [k0, k01, k12, k02]


def superop_oracle(ops):
    # row-major vec: vec(A X B) = (A (x) B^T) vec(X)
    return sum(np.kron(k, k.conj()) for k in ops)


def mad_superop(g):
    return superop_oracle(kraus_oracle(*g))


def stinespring_outputs(ops, rho):
    n, d_out = len(ops), ops[0].shape[0]
    v = np.zeros((d_out * n, ops[0].shape[1]), dtype=complex)
    for a, k in enumerate(ops):
        v[a::n, :] = k  # row index = out * n + env
    big = (v @ rho @ v.conj().T).reshape(d_out, n, d_out, n)
    return np.einsum("ikjk->ij", big), np.einsum("kikj->ij", big)


def haar_state(rng, d=3):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def valid_rates(rng, n, lo=(0, 0, 0), hi=(1, 1, 1), cond=lambda g: True):
    out = []
    while len(out) < n:
        g = tuple(float(x) for x in rng.uniform(lo, hi))
        if g[1] + g[2] <= 1 and cond(g):
            out.append(g)
    return out


def H(*ps):
    ps = [np.clip(np.asarray(p, dtype=float), 0, None) for p in ps]
    return -sum(np.where(p > 0, p * np.log2(np.where(p > 0, p, 1)), 0.0) for p in ps)


def ic_single_decay(g, p0, p1, p2):
    return H(p0 + g * p1, (1 - g) * p1, p2) - H(1 - g * p1, g * p1)


def ic_gamma2_zero(g1, g3, p0, p1, p2):
    return H(p0 + g1 * p1 + g3 * p2, (1 - g1) * p1, (1 - g3) * p2) - H(
        p0 + (1 - g1) * p1 + (1 - g3) * p2, g1 * p1, g3 * p2)


def ic_gamma1_zero(g2, g3, p0, p1, p2):
    return H(p0 + g3 * p2, p1 + g2 * p2, (1 - g2 - g3) * p2) - H(
        1 - (g2 + g3) * p2, g2 * p2, g3 * p2)


def ic_effective(g2, g3, q):
    return H(1 - q + g3 * q, g2 * q, (1 - g2 - g3) * q) - H(1 - (g2 + g3) * q, g2 * q, g3 * q)


def mi_single_decay(g, p0, p1, p2):
    return H(p0, p1, p2) + ic_single_decay(g, p0, p1, p2)


def brute_simplex(f, coarse=1e-3, fine=1e-4, window=3e-3):
    """Grid maximum at `coarse`, then a `fine` grid around the best point."""
    def grid(step, c0=None):
        if c0 is None:
            a = np.arange(0, 1 + step / 2, step)
            b = a
        else:
            a = np.arange(max(c0[0] - window, 0), min(c0[0] + window, 1) + step / 2, step)
            b = np.arange(max(c0[1] - window, 0), min(c0[1] + window, 1) + step / 2, step)
        p0, p1 = np.meshgrid(a, b, indexing="ij")
        keep = p0 + p1 <= 1 + 1e-12
        p0, p1 = p0[keep], p1[keep]
        p2 = np.clip(1 - p0 - p1, 0, None)
        v = f(p0, p1, p2)
        k = int(np.argmax(v))
        return (p0[k], p1[k]), float(v[k])

    c, _ = grid(coarse)
    _, v = grid(fine, c)
    return v


def brute_line(f, step=1e-4):
    q = np.arange(0, 1 + step / 2, step)
    return float(np.max(f(q)))


def qubit_adc_oracle(g):
    res = minimize_scalar(lambda q: -(H((1 - g) * q, 1 - (1 - g) * q) - H(g * q, 1 - g * q)),
                          bounds=(0, 1), method="bounded", options={"xatol": 1e-12})
    return max(-res.fun, 0.0)


def csv_rows(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


# ---------------------------------------------------------------- criteria


def test_01_single_decay_plateau(report):
    vals = {g: cap.q_single_decay(g).value for g in (0.5, 0.6, 0.8, 1.0)}
    ok = all(abs(v - 1) <= 1e-6 for v in vals.values())
    q0 = cap.q_single_decay(0.0).value
    ok &= abs(q0 - LOG2_3) <= 1e-9
    report(1, "single-decay plateau and log2(3) at zero", ok, f"plateau {vals}, Q(0)={q0:.12f}")


def test_02_degradability_boundaries(report, rng):
    ax = np.round(np.linspace(0, 1, 21), 12)
    mismatches = []
    for a in ax:
        for b in ax:
            r = dg.classify((a, 0.0, b))
            if (r.degradable == "yes") != (a <= 0.5 and b <= 0.5):
                mismatches.append(("deg", a, 0, b))
            if (r.antidegradable == "yes") != (a >= 0.5 and b >= 0.5):
                mismatches.append(("anti", a, 0, b))
            if a + b <= 1:
                r = dg.classify((0.0, a, b))
                if (r.degradable == "yes") != (a + b <= 0.5):
                    mismatches.append(("deg", 0, a, b))
    for g1, g2 in rng.uniform(0.01, 0.99, size=(10, 2)):
        r = dg.classify((g1, g2, 0.0))
        if (r.degradable, r.antidegradable) != ("no", "no"):
            mismatches.append(("interior", g1, g2, 0))
    report(2, "degradability boundaries on the g2=0 and g1=0 planes", not mismatches,
           f"{len(mismatches)} mismatches {mismatches[:3]}")


def test_03_zero_capacity_regions(report, rng):
    pts = valid_rates(rng, 20, lo=(0.5, 0, 0.5))
    pts += [(1.0, g2, g3) for _, g2, g3 in valid_rates(rng, 20, cond=lambda g: g[2] >= (1 - g[1]) / 2)]
    bad = []
    for g in pts:
        for est in (cap.q_bounds(g), cap.cp(g)):
            if est.status is not cap.Status.ZERO or est.value != 0:
                bad.append((g, est.status))
    report(3, "zero capacity in both zero regions (Q and C_p)", not bad, f"{len(pts)} points, bad={bad[:3]}")


def test_04_gamma1_zero_plateau(report, rng):
    pts = valid_rates(rng, 20, cond=lambda g: g[1] + g[2] >= 0.5)
    worst = max(abs(cap.q_plane_gamma1_zero(g2, g3).value - 1) for _, g2, g3 in pts)
    report(4, "value 1 on the g1=0 plane for g2+g3 >= 1/2", worst <= 1e-6, f"max |Q-1| = {worst:.2e}")


def test_05_sum_one_plane(report):
    details, ok = [], True
    for g1 in (0.0, 0.1, 0.2, 0.3, 0.4, 0.45, 0.5, 0.6, 0.8, 1.0):
        g2s = (0.0, 0.25, 0.5, 0.75, 1.0, 1.0 - g1)
        vals = [cap.q_bounds((g1, g2, 1.0 - g2)).value for g2 in g2s]
        spread = max(vals) - min(vals)
        target = 0.0 if g1 >= 0.5 else qubit_adc_oracle(g1)
        err = abs(vals[0] - target)
        ok &= spread <= 1e-9 and err <= 1e-8
        if g1 >= 0.5:
            ok &= all(v == 0 for v in vals)
        details.append(f"{g1}:{spread:.0e}/{err:.0e}")
    report(5, "g2+g3=1 plane independent of g2 and equal to qubit ADC", ok, " ".join(details))


def test_06_oracle_equivalence(report, rng):
    worst = 0.0
    for _ in range(1000):
        g = valid_rates(rng, 1)[0]
        rho = haar_state(rng)
        out, env = stinespring_outputs(kraus_oracle(*g), rho)
        worst = max(worst, np.max(np.abs(ch.apply(g, rho) - out)),
                    np.max(np.abs(ch.complement(g, rho) - env)))
    report(6, "apply/complement match the Stinespring partial traces", worst <= 1e-10, f"max dev {worst:.1e}")


def test_07_composition(report, rng):
    ax = np.linspace(0, 1, 10)
    worst = 0.0
    n = 0
    for a1 in ax:
        for a2 in ax:
            for a3 in ax:
                if a2 + a3 > 1 + 1e-12:
                    continue
                # boundary points a2 + a3 = 1 represented so 1 - a2 - a3 is exactly 0
                outer = (a1, a2, 1 - a2 if a2 + a3 > 1 - 1e-12 else a3)
                inner = valid_rates(rng, 1)[0]
                lhs = mad_superop(tuple(ch.compose_rates(outer, inner)))
                rhs = mad_superop(outer) @ mad_superop(inner)
                worst = max(worst, np.max(np.abs(lhs - rhs)))
                n += 1

    def bar(num, den):
        return num / den if num > 0 else 0.0

    dec = 0.0
    for g1, g2, g3 in valid_rates(rng, 50, hi=(1, 0.999, 0.999)) + [(0.3, 0.0, 0.5), (0.3, 0.5, 0.0), (1, 0.2, 0.3)]:
        b2, b3 = bar(g2, 1 - g3), bar(g3, 1 - g2)
        target = mad_superop((g1, g2, g3))
        chains = [
            [(0, 0, b3), (0, g2, 0), (g1, 0, 0)],
            [(0, b2, 0), (0, 0, g3), (g1, 0, 0)],
            [(0, b2, 0), (g1, 0, g3)],
            [(0, g2, g3), (g1, 0, 0)],
            [(0, 0, b3), (g1, g2, 0)],
        ]
        for chain in chains:
            m = np.eye(9)
            for g in chain:
                m = m @ mad_superop(g)
            dec = max(dec, np.max(np.abs(m - target)))
    ok = worst <= 1e-12 and dec <= 1e-12
    report(7, "composition rule and decomposition identities", ok,
           f"{n} grid pairs, max dev {worst:.1e}; decompositions {dec:.1e}")


def test_08_degrading_map_identity(report):
    worst = 0.0
    pts = [(g2, f * (1 - g2) / 2) for g2 in (0.0, 0.2, 0.4, 0.6, 0.8) for f in (0.0, 0.5, 1.0)]
    for g2, g3 in pts:
        a = [np.zeros((3, 2)) for _ in range(3)]
        a[0][0, 0] = 1; a[0][2, 1] = math.sqrt(1 - g2 - g3)
        a[1][1, 1] = math.sqrt(g2)
        a[2][0, 1] = math.sqrt(g3)
        m_eff = superop_oracle(a)
        m_env = dg.complement_superop(ch.effective_kraus(g2, g3))
        c = (1 - g2 - 2 * g3) / (1 - g2 - g3)
        worst = max(worst, np.max(np.abs(mad_superop((0, 0, c)) @ m_eff - m_env)))
    report(8, "D(0,0,c) o D' equals the complement of D'", worst <= 1e-10, f"{len(pts)} points, max dev {worst:.1e}")


def _non_increasing(vals, tol=1e-7):
    return all(b <= a + tol for a, b in zip(vals, vals[1:]))


def test_09_monotonicity(report, rng):
    ax = np.round(np.linspace(0, 1, 21), 12)
    failures = []

    def check(name, fn, lines):
        for line in lines:
            ests = [fn(*pt) for pt in line]
            vals = [e.value for e in ests if e.is_exact]
            if len(vals) == len(ests) and not _non_increasing(vals):
                failures.append(name)

    check("single decay", lambda a: cap.q_single_decay(a), [[(a,) for a in ax]])
    check("qubit ADC", lambda a: cap.q_qubit_adc(a), [[(a,) for a in ax]])
    sq = [[(a, b) for a in ax] for b in ax] + [[(a, b) for b in ax] for a in ax]
    check("g2=0 plane", cap.q_plane_gamma2_zero, sq)
    tri = [[(a, b) for a in ax if a + b <= 1] for b in ax] + [[(a, b) for b in ax if a + b <= 1] for a in ax]
    check("g1=0 plane", cap.q_plane_gamma1_zero, tri)
    check("g1=1 plane", cap.q_gamma1_one, tri)
    check("g2+g3=1 plane", cap.q_plane_sum_one, [[(a,) for a in ax]])

    qe_curve = [cap.qe((a, 0, 0)).value for a in ax]
    if not _non_increasing(qe_curve):
        failures.append("Q_E single decay")

    below = []
    samples = valid_rates(rng, 40) + [(a, 0, b) for a in ax[::4] for b in ax[::4]]
    for g in samples:
        if cap.qe(g).value < cap.q_bounds(g).lower - 1e-9:
            below.append(g)
    ok = not failures and not below
    report(9, "capacities non-increasing in each rate; Q_E >= Q", ok,
           f"failing surfaces {failures}, Q_E<Q at {below[:3]}")


def test_10_optimizer_vs_brute_force(report):
    errs = {}
    for g in (0.05, 0.15, 0.25, 0.35, 0.45):
        lib = cap.max_diag_coherent_info((g, 0, 0)).value
        errs[("single", g)] = lib - brute_simplex(lambda p0, p1, p2: ic_single_decay(g, p0, p1, p2))
    for g2, g3 in ((0.0, 0.1), (0.1, 0.2), (0.3, 0.2), (0.5, 0.1), (0.2, 0.35)):
        lib = cap.q_gamma1_one(g2, g3).value
        errs[("g1=1", g2, g3)] = lib - brute_line(lambda q: ic_effective(g2, g3, q))
    for g1, g3 in ((0.1, 0.1), (0.2, 0.4), (0.4, 0.3), (0.5, 0.05), (0.05, 0.45)):
        lib = cap.max_diag_coherent_info((g1, 0, g3)).value
        errs[("g2=0", g1, g3)] = lib - brute_simplex(lambda p0, p1, p2: ic_gamma2_zero(g1, g3, p0, p1, p2))
    for g2, g3 in ((0.05, 0.05), (0.1, 0.2), (0.3, 0.1), (0.2, 0.25), (0.0, 0.4)):
        lib = cap.max_diag_coherent_info((0, g2, g3)).value
        errs[("g1=0", g2, g3)] = lib - brute_simplex(lambda p0, p1, p2: ic_gamma1_zero(g2, g3, p0, p1, p2))
    for g in (0.0, 0.2, 0.4, 0.6, 0.9):
        lib = 2 * cap.qe((g, 0, 0)).value
        errs[("mutual", g)] = lib - brute_simplex(lambda p0, p1, p2: mi_single_decay(g, p0, p1, p2))
    worst = max(abs(e) for e in errs.values())
    under = min(errs.values())
    report(10, "optimizer agrees with 1e-4 brute-force grids", worst <= 1e-5,
           f"25 points, max |diff| {worst:.1e}, min diff {under:.1e}")


def test_11_figure_reproduction(report, tmp_path):
    problems = []
    out = tmp_path

    # single-decay curve and populations
    f2 = sw.figure(2, out, step=0.1, curve_step=0.01)
    curve = {round(float(r["g1"]), 6): float(r["value_lo"]) for r in csv_rows(f2[0])}
    plateau = [v for g, v in curve.items() if g >= 0.5]
    if max(abs(v - 1) for v in plateau) > 1e-6:
        problems.append("fig2 plateau not flat")
    if abs(curve[0.0] - LOG2_3) > 1e-9 or not _non_increasing(list(curve.values())):
        problems.append("fig2 curve shape")
    if abs(curve[0.49] - curve[0.5]) > 1e-4:
        problems.append("fig2 seam at g1=1/2")
    pops = csv_rows(f2[1])
    for r in pops:
        p = [float(r[k]) for k in ("p0", "p1", "p2")]
        if abs(sum(p) - 1) > 1e-8:  # three 9-digit fields
            problems.append("fig2 populations not normalized")
        if float(r["g1"]) >= 0.5 and (p[1] > 1e-6 or abs(p[0] - 0.5) > 1e-4):
            problems.append("fig2 populations beyond 1/2")
    if abs(float(pops[0]["p1"]) - 1 / 3) > 1e-4:
        problems.append("fig2 uniform populations at 0")

    # g1 = 1 triangle
    for r in csv_rows(sw.figure(3, out, step=0.05)[0]):
        g2, g3 = float(r["g2"]), float(r["g3"])
        if g2 + g3 > 1 + 1e-12:
            if r["status"] != "non-CPTP":
                problems.append("fig3 invalid point not flagged")
        elif g3 >= (1 - g2) / 2 - 1e-12:
            if r["status"] != "Zero":
                problems.append(f"fig3 zero region at {g2},{g3}")
        elif float(r["value_lo"]) <= 0:
            problems.append(f"fig3 positive region at {g2},{g3}")

    # g2 = 0 square: symmetry, zero quadrant, seams
    sq = {(round(float(r["g1"]), 6), round(float(r["g3"]), 6)): float(r["value_lo"])
          for r in csv_rows(sw.figure(5, out, step=0.05)[0])}
    for (a, b), v in sq.items():
        if abs(v - sq[(b, a)]) > 1e-6:
            problems.append(f"fig5 asymmetric at {a},{b}")
        if a >= 0.5 and b >= 0.5 and v != 0:
            problems.append("fig5 zero quadrant")
    for b in (0.0, 0.1, 0.2, 0.3, 0.4):
        if abs(sq[(0.5, b)] - sq[(0.55, b)]) > 1e-4 or abs(sq[(b, 0.5)] - sq[(b, 0.55)]) > 1e-4:
            problems.append(f"fig5 seam at 1/2, {b}")

    # g1 = 0 triangle: plateau, symmetry, seam
    tri = {}
    for r in csv_rows(sw.figure(7, out, step=0.05)[0]):
        g2, g3 = round(float(r["g2"]), 6), round(float(r["g3"]), 6)
        if g2 + g3 > 1 + 1e-12:
            if r["status"] != "non-CPTP":
                problems.append("fig7 invalid point not flagged")
            continue
        tri[(g2, g3)] = float(r["value_lo"])
    for (a, b), v in tri.items():
        if a + b >= 0.5 - 1e-12 and abs(v - 1) > 1e-6:
            problems.append(f"fig7 plateau at {a},{b}")
        if abs(v - tri[(b, a)]) > 1e-6:
            problems.append(f"fig7 asymmetric at {a},{b}")
    for a in (0.0, 0.1, 0.25, 0.4, 0.4999):
        if abs(cap.q_plane_gamma1_zero(a, 0.4999 - a).value - 1) > 1e-4:
            problems.append(f"fig7 seam at {a}")

    # g2 + g3 = 1 plane: no dependence on g2
    by_g1 = {}
    for r in csv_rows(sw.figure(9, out, step=0.05)[0]):
        by_g1.setdefault(round(float(r["g1"]), 6), []).append(float(r["value_lo"]))
    for g1, vals in by_g1.items():
        if max(vals) - min(vals) > 1e-9:
            problems.append(f"fig9 depends on g2 at g1={g1}")
        if g1 >= 0.5 and max(vals) != 0:
            problems.append("fig9 zero for g1 >= 1/2")

    # entanglement-assisted curve and surfaces
    f10 = sw.figure(10, out, step=0.1, curve_step=0.02)
    qe_curve = [float(r["value_lo"]) for r in csv_rows(f10[0])]
    if abs(qe_curve[0] - LOG2_3) > 1e-8 or not _non_increasing(qe_curve) or qe_curve[-1] < 0.5 - 1e-6:
        problems.append("fig10 curve shape")
    for path in f10[1:]:
        for r in csv_rows(path):
            if r["status"] == "non-CPTP":
                continue
            v = float(r["value_lo"])
            if not -1e-12 <= v <= LOG2_3 + 1e-9:
                problems.append(f"fig10 range {path.name}")
    g2z = {(round(float(r["g1"]), 6), round(float(r["g3"]), 6)): float(r["value_lo"]) for r in csv_rows(f10[2])}
    if any(abs(v - g2z[(b, a)]) > 1e-6 for (a, b), v in g2z.items()):
        problems.append("fig10 g2=0 surface asymmetric")

    report(11, "figure data sets have the expected shapes and seams", not problems, f"{problems[:5]}")
