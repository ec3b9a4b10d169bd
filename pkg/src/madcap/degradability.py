"""Superoperator representation and degradability of MAD channels.

Operators are vectorized row-major, ``vec(rho)[i*d + j] = rho[i, j]``, so a
channel with Kraus operators K_k acts as ``M = sum_k K_k (x) conj(K_k)``.

A channel Phi that is invertible is degradable iff ``M_env @ inv(M_Phi)``
is CPTP, where M_env is the superoperator of the complementary channel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import channel as ch
from .linalg import DimensionError, partial_trace

__all__ = [
    "NotInvertibleError",
    "InverseResult",
    "CPTPReport",
    "ClassificationResult",
    "vec",
    "unvec",
    "superop_matrix",
    "superop_of_map",
    "channel_superop",
    "complement_superop",
    "superop_inverse",
    "degrading_candidate",
    "antidegrading_candidate",
    "choi_of_superop",
    "is_cptp_superop",
    "mad_rates_of_superop",
    "kernel_included",
    "classify",
    "classify_effective",
]

CHOI_TOL = 1e-9
SINGULAR_TOL = 1e-12


class NotInvertibleError(ValueError):
    """The channel superoperator is singular."""


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1)


def unvec(v: np.ndarray, d: Optional[int] = None) -> np.ndarray:
    v = np.asarray(v)
    d = d or math.isqrt(v.size)
    return v.reshape(d, d)


def _dims(m: np.ndarray) -> tuple[int, int]:
    """(d_in, d_out) of a superoperator matrix."""
    rows, cols = m.shape
    d_out, d_in = math.isqrt(rows), math.isqrt(cols)
    if d_out**2 != rows or d_in**2 != cols:
        raise DimensionError(f"{m.shape} is not a superoperator shape")
    return d_in, d_out


def superop_matrix(kraus: ch.KrausSet) -> np.ndarray:
    """d_out^2 x d_in^2 matrix of the channel with Kraus set `kraus`."""
    return sum(np.kron(k, k.conj()) for k in kraus)


def superop_of_map(f: Callable[[np.ndarray], np.ndarray], d_in: int) -> np.ndarray:
    """Matrix of a linear map given as a function on operators."""
    cols = []
    for idx in range(d_in * d_in):
        e = np.zeros(d_in * d_in, dtype=complex)
        e[idx] = 1.0
        cols.append(vec(f(unvec(e, d_in))))
    return np.stack(cols, axis=1)


def channel_superop(gamma: ch.RatesLike) -> np.ndarray:
    return superop_matrix(ch.kraus_set(gamma))


def complement_superop(kraus: ch.KrausSet) -> np.ndarray:
    return superop_of_map(lambda x: ch.complement_kraus(kraus, x), kraus.d_in)


@dataclass(frozen=True)
class InverseResult:
    """Outcome of :func:`superop_inverse`; ``matrix`` is None when singular."""

    invertible: bool
    matrix: Optional[np.ndarray]
    condition: float

    def __bool__(self):
        return self.invertible


def superop_inverse(gamma: ch.RatesLike) -> InverseResult:
    """Exact inverse of a MAD superoperator.

    A MAD channel maps populations by a triangular stochastic matrix and
    scales each coherence rho_ij by a positive factor, so the inverse is
    the inverse population block plus reciprocal coherence factors.
    """
    rm = ch.as_rate_matrix(gamma)
    if ch.validate_rates(rm):
        raise ch.InvalidRatesError(ch.validate_rates(rm))
    d = rm.d
    survive = 1.0 - rm.xi()
    t = rm.population_matrix()
    factors = rm.coherence_factors()
    off = ~np.eye(d, dtype=bool)
    sv = np.concatenate([np.linalg.svd(t, compute_uv=False), np.abs(factors[off])])
    if np.min(survive) <= SINGULAR_TOL:
        return InverseResult(False, None, math.inf)
    condition = float(sv.max() / sv.min())
    # population block is upper triangular: back-substitute column by column
    tinv = np.zeros_like(t)
    for col in range(d):
        rhs = np.zeros(d)
        rhs[col] = 1.0
        x = np.zeros(d)
        for i in range(d - 1, -1, -1):
            x[i] = (rhs[i] - t[i, i + 1:] @ x[i + 1:]) / t[i, i]
        tinv[:, col] = x
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            if i == j:
                for k in range(d):
                    m[i * d + i, k * d + k] = tinv[i, k]
            else:
                m[i * d + j, i * d + j] = 1.0 / factors[i, j]
    return InverseResult(True, m, condition)


def degrading_candidate(gamma: ch.RatesLike, minimal: bool = True) -> np.ndarray:
    """``M_env @ inv(M_Phi)``: the only linear map that could degrade Phi."""
    inv = superop_inverse(gamma)
    if not inv:
        raise NotInvertibleError(f"channel {ch.as_rate_matrix(gamma).values} is not invertible")
    return complement_superop(ch.kraus_set(gamma, minimal=minimal)) @ inv.matrix


def antidegrading_candidate(gamma: ch.RatesLike, minimal: bool = True) -> tuple[np.ndarray, bool]:
    """``M_Phi @ pinv(M_env)`` and whether it is the unique solution.

    The candidate is unique when the complementary superoperator is
    square and invertible.
    """
    k = ch.kraus_set(gamma, minimal=minimal)
    m_env = complement_superop(k)
    m_phi = superop_matrix(k)
    sv = np.linalg.svd(m_env, compute_uv=False)
    unique = m_env.shape[0] == m_env.shape[1] and sv.min() > SINGULAR_TOL * sv.max()
    return m_phi @ np.linalg.pinv(m_env, rcond=1e-12), unique


def choi_of_superop(m: np.ndarray) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) Phi(|i><j|), of size d_in*d_out."""
    m = np.asarray(m)
    d_in, d_out = _dims(m)
    t = m.reshape(d_out, d_out, d_in, d_in)  # [a, b, i, j] = Phi(|i><j|)[a, b]
    return t.transpose(2, 0, 3, 1).reshape(d_in * d_out, d_in * d_out)


@dataclass(frozen=True)
class CPTPReport:
    ok: bool
    min_eigenvalue: float
    hermiticity: float
    trace_residual: float

    def __bool__(self):
        return self.ok


def is_cptp_superop(m: np.ndarray, tol: float = CHOI_TOL) -> CPTPReport:
    """Check complete positivity (Choi PSD) and trace preservation."""
    choi = choi_of_superop(m)
    d_in, d_out = _dims(np.asarray(m))
    herm = float(np.max(np.abs(choi - choi.conj().T)))
    h = 0.5 * (choi + choi.conj().T)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    tp = float(np.max(np.abs(partial_trace(choi, "A", (d_in, d_out)) - np.eye(d_in))))
    ok = herm <= tol and min_eig >= -tol and tp <= tol
    return CPTPReport(ok, min_eig, herm, tp)


def mad_rates_of_superop(m: np.ndarray, tol: float = 1e-9) -> Optional[ch.RateVector3]:
    """Rate vector of a qutrit MAD channel equal to `m`, if there is one."""
    m = np.asarray(m)
    if m.shape != (9, 9):
        return None
    t = np.real(m[np.ix_([0, 4, 8], [0, 4, 8])])
    g = ch.RateVector3(t[0, 1], t[1, 2], t[0, 2])
    if ch.validate_rates(g, tol):
        return None
    g = ch.RateVector3(*(min(max(x, 0.0), 1.0) for x in g))
    if ch.validate_rates(g):
        return None
    if np.max(np.abs(channel_superop(g) - m)) > tol:
        return None
    return g


def kernel_included(m_a: np.ndarray, m_b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff ker(m_a) is contained in ker(m_b)."""
    _, s, vh = np.linalg.svd(m_a)
    rank = int(np.sum(s > 1e-10 * max(s.max(), 1.0)))
    null = vh[rank:].conj().T
    if null.size == 0:
        return True
    return bool(np.max(np.abs(m_b @ null)) <= tol)


@dataclass
class ClassificationResult:
    gamma: ch.RateVector3
    degradable: str
    antidegradable: str
    witness: dict = field(default_factory=dict)
    tol: float = CHOI_TOL

    def to_json(self) -> dict:
        return {
            "g": list(self.gamma),
            "degradable": self.degradable,
            "antidegradable": self.antidegradable,
            "witness": self.witness,
            "tol": self.tol,
        }


def _rates_or_none(g: Optional[ch.RateVector3]):
    return None if g is None else [float(x) for x in g]


def classify(gamma: ch.RatesLike, tol: float = CHOI_TOL) -> ClassificationResult:
    """Decide degradability and antidegradability of a qutrit MAD channel.

    Degradability: excluded if Phi forgets something the environment
    keeps (kernel test) or if the Choi rank exceeds the output dimension;
    otherwise decided by the CPTP test on the unique candidate
    ``M_env inv(M_Phi)``.

    Antidegradability: excluded by the reverse kernel test; certified when
    ``M_Phi pinv(M_env)`` is CPTP; refuted only when that candidate is
    unique. Everything else is reported as "unknown".
    """
    g = ch.as_rate_vector(gamma)
    problems = ch.validate_rates(g)
    if problems:
        raise ch.InvalidRatesError(problems)
    k = ch.kraus_set(g, minimal=True)
    m_phi = superop_matrix(k)
    m_env = complement_superop(k)
    choi_rank = int(np.linalg.matrix_rank(choi_of_superop(m_phi), tol=1e-10))
    witness: dict = {"choi_rank": choi_rank, "env_dim": len(k)}

    inv = superop_inverse(g)
    witness["condition"] = inv.condition if math.isfinite(inv.condition) else None
    deg_info: dict = {}
    if not kernel_included(m_phi, m_env, tol):
        degradable = "no"
        deg_info["rule"] = "kernel"
    else:
        cand = m_env @ inv.matrix if inv else m_env @ np.linalg.pinv(m_phi, rcond=1e-12)
        rep = is_cptp_superop(cand, tol)
        deg_info.update(min_eigenvalue=rep.min_eigenvalue, trace_residual=rep.trace_residual)
        if choi_rank > 3:
            degradable = "no"
            deg_info["rule"] = "choi-rank"
        else:
            degradable = "yes" if rep else "no"
            deg_info["rule"] = "inversion" if inv else "pseudo-inverse"
            if rep:
                deg_info["map_rates"] = _rates_or_none(mad_rates_of_superop(cand))
    witness["degradable"] = deg_info

    anti_info: dict = {}
    if not kernel_included(m_env, m_phi, tol):
        antidegradable = "no"
        anti_info["rule"] = "kernel"
    else:
        cand, unique = antidegrading_candidate(g)
        exact = float(np.max(np.abs(cand @ m_env - m_phi)))
        rep = is_cptp_superop(cand, tol)
        anti_info.update(min_eigenvalue=rep.min_eigenvalue, trace_residual=rep.trace_residual,
                         unique=unique, reproduction_residual=exact)
        if rep and exact <= tol:
            antidegradable = "yes"
            anti_info["rule"] = "inversion" if unique else "pseudo-inverse"
            anti_info["map_rates"] = _rates_or_none(mad_rates_of_superop(cand))
        elif unique:
            antidegradable = "no"
            anti_info["rule"] = "inversion"
        else:
            antidegradable = "unknown"
            anti_info["rule"] = "undecided"
    witness["antidegradable"] = anti_info

    if g.g1 >= 1 - ch.RATE_TOL and g.g2 + g.g3 < 1 - ch.RATE_TOL:
        witness["effective_map"] = classify_effective(g.g2, g.g3, tol).to_json()
    return ClassificationResult(g, degradable, antidegradable, witness, tol)


def classify_effective(g2: float, g3: float, tol: float = CHOI_TOL) -> ClassificationResult:
    """Classify the qubit-input map D' that D_(1,g2,g3) reduces to.

    D' is degraded by D_(0,0,c) with c = (1-g2-2 g3)/(1-g2-g3) when that c
    is a valid rate; its complement equals D' with g3 -> 1-g2-g3, so the
    same construction run backwards gives the antidegrading map.
    """
    k = ch.effective_kraus(g2, g3)
    m_phi = superop_matrix(k)
    m_env = complement_superop(k)

    def connecting(src_g3: float) -> Optional[tuple[ch.RateVector3, float]]:
        denom = 1.0 - g2 - src_g3
        if denom <= SINGULAR_TOL:
            return None
        c = (1.0 - g2 - 2.0 * src_g3) / denom
        if c < -tol or c > 1 + tol:
            return None
        return ch.RateVector3(0.0, 0.0, min(max(c, 0.0), 1.0)), c

    # the connecting rate leaves [0, 1] exactly on the far side of g3 = (1-g2)/2
    witness: dict = {"degradable": {"rule": "connecting-rate"},
                     "antidegradable": {"rule": "connecting-rate"}}
    deg = connecting(g3)
    degradable = "no"
    if deg is not None:
        r = float(np.max(np.abs(channel_superop(deg[0]) @ m_phi - m_env)))
        if r <= 1e-9:
            degradable = "yes"
            witness["degradable"].update(map_rates=list(deg[0]), residual=r)
    anti = connecting(1.0 - g2 - g3)
    antidegradable = "no"
    if anti is not None:
        r = float(np.max(np.abs(channel_superop(anti[0]) @ m_env - m_phi)))
        if r <= 1e-9:
            antidegradable = "yes"
            witness["antidegradable"].update(map_rates=list(anti[0]), residual=r)
    return ClassificationResult(ch.RateVector3(1.0, g2, g3), degradable, antidegradable, witness, tol)
