"""Quantum, private and entanglement-assisted capacities of qutrit MAD channels.

MAD channels are covariant under diagonal unitaries, so every entropic
maximization can be restricted to diagonal inputs ``diag(p0, p1, p2)``.
For such inputs both the output and the environment state are diagonal and
the functionals reduce to Shannon entropies of linear images of ``p``.

Every result is a :class:`CapacityEstimate` carrying a status:

* ``Exact``      - the capacity itself
* ``Zero``       - the capacity is provably 0
* ``LowerBound`` - only a lower bound is known
* ``Interval``   - lower and upper bounds from data processing
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import xlogy

from . import channel as ch
from .linalg import entropy, shannon_entropy

__all__ = [
    "Status",
    "SimplexPoint",
    "CapacityEstimate",
    "LOG2_3",
    "coherent_info",
    "mutual_info",
    "diag_output",
    "diag_environment",
    "diag_coherent_info",
    "diag_mutual_info",
    "golden_section",
    "maximize_interval",
    "maximize_simplex",
    "single_decay_bracket",
    "gamma1_one_bracket",
    "plane_gamma2_zero_bracket",
    "plane_gamma1_zero_bracket",
    "qubit_adc_bracket",
    "single_decay_mutual_bracket",
    "max_diag_coherent_info",
    "q_single_decay",
    "q_gamma1_one",
    "q_plane_gamma2_zero",
    "q_plane_gamma1_zero",
    "q_plane_sum_one",
    "q_qubit_adc",
    "q_bounds",
    "cp",
    "qe",
    "capacity",
]

LOG2_3 = math.log2(3)
EXACT_GAP = 1e-6
PLANE_TOL = 1e-12
GRID_STEP = 0.01
OPT_TOL = 1e-9
MAX_STARTS = 16
ZERO_SNAP = 1e-12  # optimizer round-off below this is reported as Zero
_LN2 = math.log(2.0)


class Status(str, enum.Enum):
    EXACT = "Exact"
    ZERO = "Zero"
    LOWER_BOUND = "LowerBound"
    INTERVAL = "Interval"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SimplexPoint:
    """Populations of a diagonal qutrit input."""

    p0: float
    p1: float
    p2: float

    def __post_init__(self):
        p = (self.p0, self.p1, self.p2)
        if min(p) < -1e-12 or abs(sum(p) - 1.0) > 1e-12:
            raise ValueError(f"{p} is not a point of the probability simplex")

    @classmethod
    def from_array(cls, p) -> "SimplexPoint":
        p = np.clip(np.asarray(p, dtype=float), 0.0, None)
        p = p / p.sum()
        return cls(float(p[0]), float(p[1]), float(1.0 - p[0] - p[1]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2])

    def density(self) -> np.ndarray:
        return np.diag(self.array).astype(complex)


@dataclass(frozen=True)
class CapacityEstimate:
    lower: float
    upper: float
    status: Status
    method: str
    argmax: Optional[SimplexPoint] = None
    note: str = ""
    extras: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        if self.status in (Status.EXACT, Status.ZERO) and self.lower != self.upper:
            raise ValueError("an exact estimate needs lower == upper")

    @property
    def value(self) -> float:
        """Point value; for bounds this is the lower bound."""
        return self.lower

    @property
    def is_exact(self) -> bool:
        return self.status in (Status.EXACT, Status.ZERO)

    def to_json(self) -> dict:
        out = {"status": str(self.status), "method": self.method}
        if self.is_exact:
            out["value"] = self.lower
        else:
            out["interval"] = [self.lower, self.upper]
        if self.argmax is not None:
            out["argmax"] = [self.argmax.p0, self.argmax.p1, self.argmax.p2]
        if self.note:
            out["note"] = self.note
        return out


def _exact(value: float, method: str, argmax=None, note: str = "") -> CapacityEstimate:
    value = float(value)
    if value <= ZERO_SNAP:
        return CapacityEstimate(0.0, 0.0, Status.ZERO, method, argmax, note)
    return CapacityEstimate(value, value, Status.EXACT, method, argmax, note)


def _zero(method: str, note: str = "") -> CapacityEstimate:
    return CapacityEstimate(0.0, 0.0, Status.ZERO, method, None, note)


# ---------------------------------------------------------------- functionals


def coherent_info(gamma: ch.RatesLike, rho: np.ndarray) -> float:
    """S(D(rho)) - S(D~(rho)) in bits, by full diagonalization."""
    return entropy(ch.apply(gamma, rho)) - entropy(ch.complement(gamma, rho))


def mutual_info(gamma: ch.RatesLike, rho: np.ndarray) -> float:
    """S(rho) + S(D(rho)) - S(D~(rho)) in bits."""
    return entropy(rho) + coherent_info(gamma, rho)


@functools.lru_cache(maxsize=4096)
def _diag_maps(rm: ch.RateMatrix) -> tuple[np.ndarray, np.ndarray]:
    t = rm.population_matrix()
    env = [1.0 - rm.xi()]
    for (j, _), g in zip(ch.rate_pairs(rm.d), rm.values):
        row = np.zeros(rm.d)
        row[j] = g
        env.append(row)
    return t, np.array(env)


def diag_output(gamma: ch.RatesLike, p) -> np.ndarray:
    """Diagonal of D(diag(p)); `p` may carry leading batch axes."""
    t, _ = _diag_maps(ch.as_rate_matrix(gamma))
    return np.asarray(p) @ t.T


def diag_environment(gamma: ch.RatesLike, p) -> np.ndarray:
    """Diagonal of D~(diag(p)) in Kraus order (the matrix is diagonal)."""
    _, e = _diag_maps(ch.as_rate_matrix(gamma))
    return np.asarray(p) @ e.T


def _entropy_bits(q):
    return -np.sum(xlogy(q, np.clip(q, 0.0, None)), axis=-1) / _LN2


def _h(xs) -> float:
    return -sum(x * math.log(x) for x in xs if x > 0.0) / _LN2


def _coherent_info_fn(gamma: ch.RatesLike, assisted: bool = False) -> Callable:
    """Fast p -> I_c (or mutual information) with the maps bound once.

    Single points take a pure-Python path; numpy call overhead dominates
    for 3-vectors and the line searches evaluate thousands of them.
    """
    t, e = _diag_maps(ch.as_rate_matrix(gamma))
    tt, et = t.T.copy(), e.T.copy()
    trows, erows = t.tolist(), e.tolist()

    def f(p):
        if np.ndim(p) == 1:
            p = [float(x) for x in p]
            out = [sum(r[k] * p[k] for k in range(3)) for r in trows]
            env = [sum(r[k] * p[k] for k in range(3)) for r in erows]
            v = _h(out) - _h(env)
            return v + _h(p) if assisted else v
        p = np.asarray(p, dtype=float)
        v = shannon_entropy(p @ tt) - shannon_entropy(p @ et)
        return v + shannon_entropy(p) if assisted else v
    return f


def diag_coherent_info(gamma: ch.RatesLike, p) -> np.ndarray:
    t, e = _diag_maps(ch.as_rate_matrix(gamma))
    p = np.asarray(p, dtype=float)
    return shannon_entropy(p @ t.T) - shannon_entropy(p @ e.T)


def diag_mutual_info(gamma: ch.RatesLike, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return shannon_entropy(p) + diag_coherent_info(gamma, p)


# ---------------------------------------------------------------- optimizers

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float,
                   xtol: float = 1e-10) -> tuple[float, float]:
    """Maximize a unimodal scalar function on [a, b]; endpoints included."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    for end in (a, b):
        fe = f(end)
        if fe > fx:
            x, fx = end, fe
    return x, fx


def maximize_interval(f: Callable, lo: float = 0.0, hi: float = 1.0,
                      step: float = 1e-3, tol: float = OPT_TOL) -> tuple[float, float]:
    """Grid search on [lo, hi] then golden-section refinement of the best cell.

    `f` must accept numpy arrays.
    """
    n = max(int(round((hi - lo) / step)), 1)
    xs = lo + (hi - lo) * np.arange(n + 1) / n
    vals = np.asarray(f(xs), dtype=float)
    k = int(np.argmax(vals))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, n)]
    x, fx = golden_section(lambda x: float(f(np.array(x))), a, b, xtol=min(tol, 1e-10))
    if vals[k] > fx:
        x, fx = xs[k], vals[k]
    return float(x), float(fx)


def _simplex_grid(n: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j <= n
    i, j = i[keep], j[keep]
    return np.stack([i / n, j / n, (n - i - j) / n], axis=-1)


_DIRECTIONS = tuple(np.eye(3)[a] - np.eye(3)[b] for a, b in ((0, 1), (0, 2), (1, 2)))


def _refine(f, p: np.ndarray, window: float, tol: float) -> tuple[np.ndarray, float]:
    """Cyclic golden-section ascent along the three edge directions."""
    val = float(f(p))
    for _ in range(500):
        start = val
        for e in _DIRECTIONS:
            pos = e > 0
            lo = max(-p[pos][0], -window)
            hi = min(p[~pos & (e != 0)][0], window)
            if hi - lo <= 1e-15:
                continue
            t, v = golden_section(lambda t: float(f(p + t * e)), lo, hi)
            if v > val:
                p = np.clip(p + t * e, 0.0, 1.0)
                p[2] = max(1.0 - p[0] - p[1], 0.0)
                val = float(f(p))
        if val - start < tol:
            break
    return p, val


def _local_maxima(grid: np.ndarray, vals: np.ndarray, n: int, limit: int) -> list[int]:
    """Indices of the best grid points that beat all their grid neighbours."""
    ij = np.rint(grid[:, :2] * n).astype(int)
    table = np.full((n + 3, n + 3), -np.inf)
    table[ij[:, 0] + 1, ij[:, 1] + 1] = vals
    centre = table[1:-1, 1:-1]
    peak = np.ones_like(centre, dtype=bool)
    for a, b in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
        peak &= table[1 + a:n + 2 + a, 1 + b:n + 2 + b] <= centre
    is_peak = peak[ij[:, 0], ij[:, 1]]
    order = np.lexsort((np.arange(len(vals)), -vals))
    picked = [int(k) for k in order if is_peak[k]][:limit]
    return picked or [int(order[0])]


def maximize_simplex(f: Callable, tol: float = OPT_TOL, step: float = GRID_STEP,
                     starts: int = 1, vectorized: bool = True) -> tuple[SimplexPoint, float]:
    """Maximize `f` over the probability 2-simplex.

    A grid with spacing `step` is evaluated first; the best point (or, with
    ``starts > 1``, up to that many grid local maxima) is then polished by
    golden-section line searches along the simplex edge directions until a
    sweep gains less than `tol`. Deterministic for a given `f`.

    `f` takes an array of shape (..., 3). Pass ``vectorized=False`` for a
    function that only accepts a single point.
    """
    g = f if vectorized else (lambda p: np.apply_along_axis(f, -1, np.asarray(p)) if np.ndim(p) > 1 else f(p))
    n = max(int(round(1.0 / step)), 1)
    grid = _simplex_grid(n)
    vals = np.asarray(g(grid), dtype=float)
    seeds = [int(np.argmax(vals))] if starts <= 1 else _local_maxima(grid, vals, n, starts)
    best_p, best_v = grid[seeds[0]].copy(), float(vals[seeds[0]])
    for k in seeds:
        p, v = _refine(g, grid[k].copy(), 2.0 / n, tol)
        if v > best_v + 1e-15:
            best_p, best_v = p, v
    return SimplexPoint.from_array(best_p), best_v


# ---------------------------------------------------------------- closed brackets


def _xlog2(x):
    x = np.clip(x, 0.0, None)
    return xlogy(x, x) / _LN2


def _unpack(p):
    p = np.asarray(p, dtype=float)
    return p[..., 0], p[..., 1], p[..., 2]


def single_decay_bracket(g1: float, p) -> np.ndarray:
    """Diagonal coherent information of D_(g1,0,0)."""
    p0, p1, p2 = _unpack(p)
    return (-_xlog2(p2) - _xlog2(p0 + g1 * p1) - _xlog2((1 - g1) * p1)
            + _xlog2(1 - g1 * p1) + _xlog2(g1 * p1))


def gamma1_one_bracket(g2: float, g3: float, p) -> np.ndarray:
    """Coherent information of D_(1,g2,g3) on (1-p)|0><0| + p|2><2|."""
    p = np.asarray(p, dtype=float)
    return (-_xlog2(1 - (1 - g3) * p) - _xlog2((1 - g2 - g3) * p)
            + _xlog2(1 - (g2 + g3) * p) + _xlog2(g3 * p))


def plane_gamma2_zero_bracket(g1: float, g3: float, p) -> np.ndarray:
    """Diagonal coherent information of D_(g1,0,g3)."""
    _, p1, p2 = _unpack(p)
    return (-_xlog2(1 - (1 - g1) * p1 - (1 - g3) * p2)
            - _xlog2((1 - g1) * p1) - _xlog2((1 - g3) * p2)
            + _xlog2(1 - g1 * p1 - g3 * p2) + _xlog2(g1 * p1) + _xlog2(g3 * p2))


def plane_gamma1_zero_bracket(g2: float, g3: float, p) -> np.ndarray:
    """Diagonal coherent information of D_(0,g2,g3)."""
    _, p1, p2 = _unpack(p)
    return (-_xlog2(p1 + g2 * p2) - _xlog2(1 - p1 - (1 - g3) * p2)
            - _xlog2((1 - g2 - g3) * p2) + _xlog2(1 - (g2 + g3) * p2)
            + _xlog2(g2 * p2) + _xlog2(g3 * p2))


def qubit_adc_bracket(g: float, p) -> np.ndarray:
    """Coherent information of the qubit ADC on diag(1-p, p)."""
    p = np.asarray(p, dtype=float)
    return (-_xlog2(1 - (1 - g) * p) - _xlog2((1 - g) * p)
            + _xlog2(1 - g * p) + _xlog2(g * p))


def single_decay_mutual_bracket(g1: float, p) -> np.ndarray:
    """Mutual information S(p) + S(out) - S(env) of D_(g1,0,0)."""
    p0, p1, p2 = _unpack(p)
    return (-_xlog2(p0) - _xlog2(p1) - 2 * _xlog2(p2)
            - _xlog2(p0 + g1 * p1) - _xlog2((1 - g1) * p1)
            + _xlog2(1 - g1 * p1) + _xlog2(g1 * p1))


# ---------------------------------------------------------------- regime results


def _check_unit(name: str, x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ch.InvalidRatesError([f"{name} = {x:g} outside [0, 1]"])
    return x


def _check_vector(gamma: ch.RatesLike) -> ch.RateVector3:
    g = ch.as_rate_vector(gamma)
    problems = ch.validate_rates(g)
    if problems:
        raise ch.InvalidRatesError(problems)
    return ch.RateVector3(*(min(max(x, 0.0), 1.0) for x in g))


def max_diag_coherent_info(gamma: ch.RatesLike, starts: Optional[int] = None) -> CapacityEstimate:
    """Maximum of the coherent information over diagonal inputs.

    Exact when the channel is degradable (coherent information is then
    concave and single-letter); a lower bound otherwise. Non-degradable
    channels are searched from several grid local maxima.
    """
    return _max_diag_coherent_info(_check_vector(gamma), starts)


@functools.lru_cache(maxsize=65536)
def _max_diag_coherent_info(g: ch.RateVector3, starts: Optional[int]) -> CapacityEstimate:
    from .degradability import classify

    degradable = classify(g).degradable == "yes"
    if starts is None:
        starts = 1 if degradable else MAX_STARTS
    p, v = maximize_simplex(_coherent_info_fn(g), starts=starts)
    v = max(v, 0.0)
    if degradable:
        return _exact(v, "diagonal maximization (degradable)", p)
    return CapacityEstimate(v, LOG2_3, Status.LOWER_BOUND, "diagonal maximization (lower bound)", p)


@functools.lru_cache(maxsize=65536)
def q_single_decay(g1: float) -> CapacityEstimate:
    """Q = C_p of D_(g1,0,0): maximization for g1 <= 1/2, plateau 1 above."""
    g1 = _check_unit("g1", g1)
    if g1 >= 0.5:
        return _exact(1.0, "single-decay plateau")
    p, v = maximize_simplex(lambda q: single_decay_bracket(g1, q))
    return _exact(v, "single-decay maximization", p)


@functools.lru_cache(maxsize=65536)
def q_qubit_adc(g: float) -> CapacityEstimate:
    """Quantum capacity of the qubit amplitude damping channel."""
    g = _check_unit("gamma", g)
    if g >= 0.5:
        return _zero("qubit ADC antidegradable")
    x, v = maximize_interval(lambda q: qubit_adc_bracket(g, q))
    return _exact(v, "qubit ADC maximization", SimplexPoint(1 - x, x, 0.0))


@functools.lru_cache(maxsize=65536)
def q_gamma1_one(g2: float, g3: float) -> CapacityEstimate:
    """Q = C_p of D_(1,g2,g3), from the effective qubit-input map."""
    g = _check_vector((1.0, g2, g3))
    g2, g3 = g.g2, g.g3
    if g3 >= (1.0 - g2) / 2.0 - PLANE_TOL:
        return _zero("g1=1 plane, effective map antidegradable")
    x, v = maximize_interval(lambda q: gamma1_one_bracket(g2, g3, q))
    return _exact(v, "g1=1 plane, effective map maximization", SimplexPoint(1 - x, 0.0, x))


@functools.lru_cache(maxsize=65536)
def _deg_quadrant_g2_zero(g1: float, g3: float) -> CapacityEstimate:
    p, v = maximize_simplex(lambda q: plane_gamma2_zero_bracket(g1, g3, q))
    return _exact(v, "g2=0 plane maximization (degradable quadrant)", p)


@functools.lru_cache(maxsize=65536)
def q_plane_gamma2_zero(g1: float, g3: float) -> CapacityEstimate:
    """Q = C_p of D_(g1,0,g3) on the whole unit square."""
    g1, g3 = _check_unit("g1", g1), _check_unit("g3", g3)
    if g1 >= 0.5 and g3 >= 0.5:
        return _zero("g2=0 plane, antidegradable quadrant")
    if g1 <= 0.5 and g3 <= 0.5:
        return _deg_quadrant_g2_zero(g1, g3)
    small = min(g1, g3)
    edge = _deg_quadrant_g2_zero(min(small, 0.5), 0.5)
    adc = q_qubit_adc(small)
    note = f"seam gap to qubit ADC value {abs(edge.value - adc.value):.2e}"
    return _exact(edge.value, "g2=0 plane, constant beyond the degradable edge", note=note)


@functools.lru_cache(maxsize=65536)
def q_plane_gamma1_zero(g2: float, g3: float) -> CapacityEstimate:
    """Q = C_p of D_(0,g2,g3): maximization below g2+g3 = 1/2, 1 above."""
    g = _check_vector((0.0, g2, g3))
    g2, g3 = g.g2, g.g3
    if g2 + g3 >= 0.5:
        return _exact(1.0, "g1=0 plane plateau")
    p, v = maximize_simplex(lambda q: plane_gamma1_zero_bracket(g2, g3, q))
    return _exact(v, "g1=0 plane maximization", p)


@functools.lru_cache(maxsize=65536)
def q_plane_sum_one(g1: float) -> CapacityEstimate:
    """Q = C_p on the g2+g3 = 1 plane: the qubit ADC capacity at g1."""
    g1 = _check_unit("g1", g1)
    est = q_qubit_adc(g1)
    method = "g2+g3=1 plane, qubit ADC capacity"
    if est.status is Status.ZERO:
        return _zero(method)
    return _exact(est.value, method, est.argmax)


def q_bounds(gamma: ch.RatesLike) -> CapacityEstimate:
    """Best available statement about Q for any valid qutrit rate vector.

    Dispatches to the solved regimes; elsewhere returns the diagonal lower
    bound together with the smallest data-processing upper bound obtained
    from the decompositions of D_g into solvable factors.
    """
    return _q_bounds(_check_vector(gamma))


@functools.lru_cache(maxsize=65536)
def _q_bounds(g: ch.RateVector3) -> CapacityEstimate:
    g1, g2, g3 = g
    if g1 >= 0.5 and g3 >= 0.5:
        return _zero("zero region g1,g3 >= 1/2")
    if g2 <= PLANE_TOL and g3 <= PLANE_TOL:
        return q_single_decay(g1)
    if g1 >= 1.0 - PLANE_TOL:
        return q_gamma1_one(g2, g3)
    if g2 + g3 >= 1.0 - PLANE_TOL:
        return q_plane_sum_one(g1)
    if g2 <= PLANE_TOL:
        return q_plane_gamma2_zero(g1, g3)
    if g1 <= PLANE_TOL:
        return q_plane_gamma1_zero(g2, g3)

    low = max_diag_coherent_info(g)
    if low.is_exact:
        return low
    chains = {
        "D(0,bar g2,0) o D(g1,0,g3)": min(q_single_decay(g.bar2).value, q_plane_gamma2_zero(g1, g3).value),
        "D(0,g2,g3) o D(g1,0,0)": min(q_plane_gamma1_zero(g2, g3).value, q_single_decay(g1).value),
        "D(0,0,bar g3) o D(g1,g2,0)": q_single_decay(g.bar3).value,
    }
    best = min(chains, key=chains.get)
    upper = max(chains[best], low.value)
    if upper - low.value <= EXACT_GAP:
        return _exact(low.value, "diagonal lower bound meets data-processing bound", low.argmax)
    return CapacityEstimate(low.value, upper, Status.INTERVAL,
                            "diagonal lower bound + data-processing upper bound",
                            low.argmax, note=f"upper bound from {best}")


def cp(gamma: ch.RatesLike) -> CapacityEstimate:
    """Private classical capacity.

    Equal to Q wherever Q is known exactly. Elsewhere the Q interval is
    returned: its upper bound also holds for C_p, its lower bound holds
    because C_p >= Q, but C_p may exceed Q.
    """
    est = q_bounds(gamma)
    if est.is_exact:
        return est
    return CapacityEstimate(est.lower, est.upper, Status.INTERVAL, est.method, est.argmax,
                            note=(est.note + "; " if est.note else "") + "C_p >= Q lower bound; C_p may exceed Q")


def qe(gamma: ch.RatesLike) -> CapacityEstimate:
    """Entanglement-assisted quantum capacity, half the maximal mutual information."""
    return _qe(_check_vector(gamma))


@functools.lru_cache(maxsize=65536)
def _qe(g: ch.RateVector3) -> CapacityEstimate:
    # mutual information is concave in the input, so a coarse seed grid suffices
    p, v = maximize_simplex(_coherent_info_fn(g, assisted=True), step=0.05)
    return _exact(0.5 * v, "entanglement-assisted diagonal maximization", p)


_QUANTITIES = {"q": q_bounds, "cp": cp, "qe": qe}


def capacity(gamma: ch.RatesLike, quantity: str = "q") -> CapacityEstimate:
    try:
        fn = _QUANTITIES[quantity.lower()]
    except KeyError:
        raise ValueError(f"unknown quantity {quantity!r}; expected one of {sorted(_QUANTITIES)}") from None
    return fn(ch.as_rate_vector(gamma))
