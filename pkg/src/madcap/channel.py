"""Multi-level amplitude damping (MAD) channels.

A d-level MAD channel moves population from level j to a lower level i
with probability ``gamma_ji``. It is described by the Kraus operators

    K0    = |0><0| + sum_j sqrt(1 - xi_j) |j><j|,   xi_j = sum_{i<j} gamma_ji
    K_ij  = sqrt(gamma_ji) |i><j|                 (i < j)

For qutrits the three rates are renamed ``g1 = gamma_10``, ``g2 = gamma_21``
and ``g3 = gamma_20`` and the Kraus list is ordered (K0, K01, K12, K02).
That order fixes the basis of the environment used by :func:`complement`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .linalg import DimensionError, check_density

__all__ = [
    "ZERO_RATE",
    "InvalidRatesError",
    "RateMatrix",
    "RateVector3",
    "KrausSet",
    "rate_pairs",
    "as_rate_matrix",
    "as_rate_vector",
    "validate_rates",
    "kraus_set",
    "apply",
    "complement",
    "apply_kraus",
    "complement_kraus",
    "stinespring",
    "compose_rates",
    "compose_kraus",
    "effective_kraus",
    "effective_qubit_map",
    "erase_level1_kraus",
    "erase_level1",
    "erase_level2_kraus",
    "erase_level2",
    "qubit_adc",
    "rates_from_json",
    "rates_to_json",
]

RATE_TOL = 1e-12
# rates below this are dropped from a minimal Kraus set
ZERO_RATE = 1e-12


class InvalidRatesError(ValueError):
    """Rates outside the region where the map is CPTP."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def rate_pairs(d: int) -> list[tuple[int, int]]:
    """Decay pairs (j, i), i < j, in Kraus order.

    For d = 3 this is [(1, 0), (2, 1), (2, 0)], i.e. (g1, g2, g3).
    """
    return [(j, i) for j in range(1, d) for i in range(j - 1, -1, -1)]


@dataclass(frozen=True)
class RateMatrix:
    """Decay rates of a d-level MAD channel, stored in :func:`rate_pairs` order."""

    d: int
    values: tuple[float, ...]

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("dimension must be at least 2")
        n = self.d * (self.d - 1) // 2
        if len(self.values) != n:
            raise ValueError(f"a {self.d}-level channel needs {n} rates, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def from_dict(cls, d: int, rates: Mapping[tuple[int, int], float]) -> "RateMatrix":
        """Build from ``{(j, i): gamma_ji}``; missing pairs default to 0."""
        pairs = rate_pairs(d)
        unknown = set(rates) - set(pairs)
        if unknown:
            raise ValueError(f"invalid decay pairs {sorted(unknown)} for d={d}")
        return cls(d, tuple(rates.get(p, 0.0) for p in pairs))

    def rate(self, j: int, i: int) -> float:
        return self.values[rate_pairs(self.d).index((j, i))]

    def as_dict(self) -> dict[tuple[int, int], float]:
        return dict(zip(rate_pairs(self.d), self.values))

    def xi(self) -> np.ndarray:
        """Total decay probability out of each level; xi[0] = 0."""
        out = np.zeros(self.d)
        for (j, _), g in zip(rate_pairs(self.d), self.values):
            out[j] += g
        return out

    def population_matrix(self) -> np.ndarray:
        """Column-stochastic map of populations, out[i] = sum_j T[i, j] p[j]."""
        t = np.diag(1.0 - self.xi())
        for (j, i), g in zip(rate_pairs(self.d), self.values):
            t[i, j] += g
        return t

    def coherence_factors(self) -> np.ndarray:
        """Scale factor sqrt(1 - xi_i) sqrt(1 - xi_j) applied to rho_ij."""
        s = np.sqrt(np.clip(1.0 - self.xi(), 0.0, None))
        return np.outer(s, s)


@dataclass(frozen=True)
class RateVector3:
    """Qutrit rates: g1 (1->0), g2 (2->1), g3 (2->0)."""

    g1: float
    g2: float
    g3: float

    def __iter__(self):
        return iter((self.g1, self.g2, self.g3))

    @property
    def bar2(self) -> float:
        """g2 / (1 - g3), the 2->1 rate left after a 2->0 decay of rate g3."""
        return self.g2 / (1.0 - self.g3) if self.g2 > 0 else 0.0

    @property
    def bar3(self) -> float:
        """g3 / (1 - g2)."""
        return self.g3 / (1.0 - self.g2) if self.g3 > 0 else 0.0

    def matrix(self) -> RateMatrix:
        return RateMatrix(3, (self.g1, self.g2, self.g3))


RatesLike = Union[RateMatrix, RateVector3, Sequence[float]]


def as_rate_matrix(gamma: RatesLike) -> RateMatrix:
    if isinstance(gamma, RateMatrix):
        return gamma
    if isinstance(gamma, RateVector3):
        return gamma.matrix()
    vals = tuple(float(g) for g in gamma)
    if len(vals) != 3:
        raise ValueError("a bare rate sequence must be a qutrit (g1, g2, g3)")
    return RateMatrix(3, vals)


def as_rate_vector(gamma: RatesLike) -> RateVector3:
    if isinstance(gamma, RateVector3):
        return gamma
    if isinstance(gamma, RateMatrix):
        if gamma.d != 3:
            raise ValueError("not a qutrit rate matrix")
        return RateVector3(*gamma.values)
    return RateVector3(*(float(g) for g in gamma))


def validate_rates(gamma: RatesLike, tol: float = RATE_TOL) -> list[str]:
    """List every violated CPTP constraint; an empty list means valid."""
    rm = as_rate_matrix(gamma)
    problems = []
    for (j, i), g in zip(rate_pairs(rm.d), rm.values):
        if not math.isfinite(g) or g < -tol or g > 1 + tol:
            problems.append(f"gamma_{j}{i} = {g:g} outside [0, 1]")
    for j in range(1, rm.d):
        terms = [g for (jj, _), g in zip(rate_pairs(rm.d), rm.values) if jj == j]
        total = sum(terms)
        if len(terms) > 1 and total > 1 + tol:
            if rm.d == 3:
                problems.append(f"g2+g3 = {total:.12g} > 1 (gamma2+gamma3 <= 1 violated)")
            else:
                problems.append(f"xi_{j} = {total:.12g} > 1")
    return problems


def _checked(gamma: RatesLike) -> RateMatrix:
    rm = as_rate_matrix(gamma)
    problems = validate_rates(rm)
    if problems:
        raise InvalidRatesError(problems)
    return rm


@dataclass(frozen=True)
class KrausSet:
    """Ordered Kraus operators of a channel from C^d_in to C^d_out."""

    ops: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = ()

    @property
    def d_in(self) -> int:
        return self.ops[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def completeness_residual(self) -> float:
        s = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(s - np.eye(self.d_in))))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply_kraus(self, rho)

    def complement(self, rho: np.ndarray) -> np.ndarray:
        return complement_kraus(self, rho)


def kraus_set(gamma: RatesLike, minimal: bool = False) -> KrausSet:
    """Kraus operators of the MAD channel with rates `gamma`.

    With ``minimal=True`` decay operators whose rate is below 1e-12 are
    dropped, so the environment dimension equals the Choi rank.
    """
    rm = _checked(gamma)
    d = rm.d
    xi = np.clip(rm.xi(), 0.0, 1.0)
    ops = [np.diag(np.sqrt(1.0 - xi)).astype(complex)]
    labels = ["K0"]
    for (j, i), g in zip(rate_pairs(d), rm.values):
        if minimal and g < ZERO_RATE:
            continue
        k = np.zeros((d, d), dtype=complex)
        k[i, j] = math.sqrt(max(g, 0.0))
        ops.append(k)
        labels.append(f"K{i}{j}")
    return KrausSet(tuple(ops), tuple(labels))


def apply_kraus(kraus: KrausSet | Iterable[np.ndarray], rho: np.ndarray) -> np.ndarray:
    ops = list(kraus)
    rho = np.asarray(rho)
    if rho.shape != (ops[0].shape[1],) * 2:
        raise DimensionError(f"state of shape {rho.shape} does not fit input dimension {ops[0].shape[1]}")
    return sum(k @ rho @ k.conj().T for k in ops)


def complement_kraus(kraus: KrausSet | Iterable[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """Environment output: entries Tr[K_a rho K_b^dagger] in Kraus order."""
    ops = list(kraus)
    rho = np.asarray(rho)
    if rho.shape != (ops[0].shape[1],) * 2:
        raise DimensionError(f"state of shape {rho.shape} does not fit input dimension {ops[0].shape[1]}")
    a = np.stack(ops)
    # Tr[K_a rho K_b^+] = sum_{x,y,z} K_a[x,y] rho[y,z] conj(K_b[x,z])
    return np.einsum("axy,yz,bxz->ab", a, rho, a.conj())


def stinespring(kraus: KrausSet | Iterable[np.ndarray]) -> np.ndarray:
    """Isometry V = sum_k K_k (x) |k>_E, of shape (d_out * n_kraus, d_in)."""
    ops = list(kraus)
    n = len(ops)
    return sum(np.kron(k, np.eye(n)[:, [a]]) for a, k in enumerate(ops))


def apply(gamma: RatesLike, rho: np.ndarray) -> np.ndarray:
    """Output state of the MAD channel for input `rho`."""
    rm = _checked(gamma)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (rm.d, rm.d):
        raise DimensionError(f"state of shape {rho.shape} does not fit a {rm.d}-level channel")
    rho = check_density(rho)
    return apply_kraus(kraus_set(rm), rho)


def complement(gamma: RatesLike, rho: np.ndarray, minimal: bool = False) -> np.ndarray:
    """Environment state of the complementary channel (dimension = #Kraus)."""
    rm = _checked(gamma)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (rm.d, rm.d):
        raise DimensionError(f"state of shape {rho.shape} does not fit a {rm.d}-level channel")
    rho = check_density(rho)
    return complement_kraus(kraus_set(rm, minimal=minimal), rho)


def compose_rates(outer: RatesLike, inner: RatesLike) -> RateVector3:
    """Rates of D_outer o D_inner (the inner channel acts first)."""
    a1, a2, a3 = as_rate_vector(outer)
    b1, b2, b3 = as_rate_vector(inner)
    for g in (outer, inner):
        problems = validate_rates(g)
        if problems:
            raise InvalidRatesError(problems)
    # survivals multiply; using them where a level is fully emptied keeps
    # 1 - xi exactly 0 there, since sqrt(1 - xi) amplifies round-off at 0
    g1 = 1.0 - (1 - a1) * (1 - b1) if 1.0 in (a1, b1) else b1 + a1 - a1 * b1
    g2 = b2 * (1 - a1 - a2) + a2 * (1 - b3)
    g3 = b3 + b2 * (a1 - a3) + a3 * (1 - b3)
    if (1 - a2 - a3) * (1 - b2 - b3) == 0.0:
        g3 = 1.0 - g2
    return RateVector3(g1, g2, g3)


def compose_kraus(outer: KrausSet, inner: KrausSet) -> KrausSet:
    """Kraus set of outer o inner, for any dimensions."""
    if outer.d_in != inner.d_out:
        raise DimensionError("dimensions do not chain")
    return KrausSet(tuple(a @ b for a in outer.ops for b in inner.ops))


def _check_pair(g2: float, g3: float) -> None:
    problems = validate_rates((0.0, g2, g3))
    if problems:
        raise InvalidRatesError(problems)


def effective_kraus(g2: float, g3: float) -> KrausSet:
    """Kraus set of the qubit-to-qutrit map that D_(1,g2,g3) reduces to.

    The qubit lives on span{|0>, |2>}, stored as basis (0, 1) of the input.
    """
    _check_pair(g2, g3)
    a0 = np.zeros((3, 2), dtype=complex)
    a0[0, 0] = 1.0
    a0[2, 1] = math.sqrt(max(1.0 - g2 - g3, 0.0))
    a1 = np.zeros((3, 2), dtype=complex)
    a1[1, 1] = math.sqrt(g2)
    a2 = np.zeros((3, 2), dtype=complex)
    a2[0, 1] = math.sqrt(g3)
    return KrausSet((a0, a1, a2), ("A0", "A12", "A02"))


def effective_qubit_map(g2: float, g3: float, tau: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Qutrit output and 3x3 environment state for a qubit input `tau`."""
    tau = check_density(np.asarray(tau, dtype=complex))
    if tau.shape != (2, 2):
        raise DimensionError("tau must be 2x2")
    k = effective_kraus(g2, g3)
    return apply_kraus(k, tau), complement_kraus(k, tau)


def erase_level1_kraus() -> KrausSet:
    """Qutrit -> qubit map moving level 1 into level 0; level 2 becomes basis 1."""
    a = np.zeros((2, 3), dtype=complex)
    a[0, 0] = a[1, 2] = 1.0
    b = np.zeros((2, 3), dtype=complex)
    b[0, 1] = 1.0
    return KrausSet((a, b))


def erase_level1(rho: np.ndarray) -> np.ndarray:
    rho = check_density(np.asarray(rho, dtype=complex))
    return apply_kraus(erase_level1_kraus(), rho)


def erase_level2_kraus(g2: float) -> KrausSet:
    """Qutrit -> qubit map sending level 2 to |1> w.p. g2 and to |0> otherwise."""
    if not 0.0 <= g2 <= 1.0:
        raise InvalidRatesError([f"g2 = {g2:g} outside [0, 1]"])
    a = np.zeros((2, 3), dtype=complex)
    a[0, 0] = a[1, 1] = 1.0
    b = np.zeros((2, 3), dtype=complex)
    b[0, 2] = math.sqrt(1.0 - g2)
    c = np.zeros((2, 3), dtype=complex)
    c[1, 2] = math.sqrt(g2)
    return KrausSet((a, b, c))


def erase_level2(g2: float, rho: np.ndarray) -> np.ndarray:
    rho = check_density(np.asarray(rho, dtype=complex))
    return apply_kraus(erase_level2_kraus(g2), rho)


def qubit_adc(gamma: float, tau: np.ndarray) -> np.ndarray:
    """Standard qubit amplitude damping with decay probability `gamma`."""
    tau = np.asarray(tau, dtype=complex)
    if tau.shape != (2, 2):
        raise DimensionError("tau must be 2x2")
    return apply(RateMatrix(2, (gamma,)), tau)


def rates_from_json(obj: Mapping) -> RateMatrix:
    """Parse ``{"g1", "g2", "g3"}`` or ``{"d": int, "rates": {"j,i": float}}``."""
    if "rates" in obj:
        d = int(obj["d"])
        rates = {}
        for key, val in obj["rates"].items():
            j, i = (int(s) for s in str(key).split(","))
            rates[(j, i)] = float(val)
        return RateMatrix.from_dict(d, rates)
    return RateMatrix(3, tuple(float(obj.get(k, 0.0)) for k in ("g1", "g2", "g3")))


def rates_to_json(gamma: RatesLike) -> dict:
    rm = as_rate_matrix(gamma)
    if rm.d == 3:
        return dict(zip(("g1", "g2", "g3"), rm.values))
    return {"d": rm.d, "rates": {f"{j},{i}": g for (j, i), g in rm.as_dict().items()}}
