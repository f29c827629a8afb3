"""Worst-case approximation error and analytic incompatibility bounds.

Conventions follow the factor-2 statistical-distance form: the worst-case
error between triples M and N is 2 * max_r sum_i |r.(m_i - n_i)|, which has
the closed form 2 * max_j |g_j| over the four signed difference vectors g_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bloch import (
    DERIVED_SIGNS,
    InputError,
    MeasurementTuple,
    Measurement,
    QubitState,
    derived_p_vectors,
    require_valid,
)
from .compat import criterion_sum, sign_pattern_sum

# Fallback witness when N == M and every g-vector vanishes.
_DEFAULT_WITNESS = np.array([0.0, 0.0, 1.0])


@dataclass
class DeltaReport:
    delta: float
    g_vectors: list[np.ndarray]
    witness_r: np.ndarray
    per_measurement_d: list[float]

    def to_dict(self) -> dict:
        return {
            "delta": float(self.delta),
            "g_vectors": [[float(c) for c in g] for g in self.g_vectors],
            "witness_r": [float(c) for c in self.witness_r],
            "per_measurement_d": [float(d) for d in self.per_measurement_d],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "DeltaReport":
        return cls(
            delta=float(obj["delta"]),
            g_vectors=[np.array(g, dtype=float) for g in obj["g_vectors"]],
            witness_r=np.array(obj["witness_r"], dtype=float),
            per_measurement_d=[float(d) for d in obj["per_measurement_d"]],
        )


@dataclass
class BoundReport:
    raw_margin: float
    degree: float
    kind: str

    def to_dict(self) -> dict:
        return {"raw_margin": float(self.raw_margin), "degree": float(self.degree),
                "kind": self.kind}

    @classmethod
    def from_dict(cls, obj: dict) -> "BoundReport":
        return cls(float(obj["raw_margin"]), float(obj["degree"]), obj["kind"])


def _bound(raw: float, kind: str) -> BoundReport:
    return BoundReport(raw, max(0.0, raw), kind)


def delta_state_dependent(M: MeasurementTuple, N: MeasurementTuple, s: QubitState) -> float:
    """State-dependent error 2 * sum_i |r.(m_i - n_i)|."""
    require_valid(M, arity=3)
    require_valid(N, arity=3)
    if not s.is_valid():
        raise InputError("invalid state Bloch vector")
    diff = M.vectors() - N.vectors()
    return 2.0 * float(np.abs(diff @ s.r).sum())


def _delta_from_g(g: np.ndarray, diff: np.ndarray) -> DeltaReport:
    norms = np.linalg.norm(g, axis=1)
    # Lowest index wins ties: argmax returns the first maximum.
    j = int(np.argmax(norms))
    delta = 2.0 * float(norms[j])
    if norms[j] > 0.0:
        witness = g[j] / norms[j]
    else:
        witness = _DEFAULT_WITNESS.copy()
    per = [2.0 * abs(float(np.dot(witness, d))) for d in diff]
    return DeltaReport(delta, [row.copy() for row in g], witness, per)


def delta_worst_case(M: MeasurementTuple, N: MeasurementTuple) -> DeltaReport:
    """Closed-form worst case over states: 2 * max_j |g_j|, with its witness."""
    require_valid(M, arity=3)
    require_valid(N, arity=3)
    diff = M.vectors() - N.vectors()
    g = DERIVED_SIGNS @ diff
    return _delta_from_g(g, diff)


def delta_worst_case_pairwise(M: MeasurementTuple, N: MeasurementTuple) -> DeltaReport:
    """Two-measurement analogue: 2 * max over the sum/difference g-vectors."""
    require_valid(M, arity=2)
    require_valid(N, arity=2)
    diff = M.vectors() - N.vectors()
    signs = np.array([[1.0, 1.0], [1.0, -1.0]])
    g = signs @ diff
    return _delta_from_g(g, diff)


def triple_lower_bound(M: MeasurementTuple) -> BoundReport:
    """Triple bound: raw = (sum_k |p_k - p_F| - 4) / 2."""
    require_valid(M, arity=3)
    total, _ = criterion_sum(M)
    return _bound(0.5 * (total - 4.0), "triple_ft")


def pairwise_lower_bound(m1: Measurement, m2: Measurement) -> BoundReport:
    """Pair bound: raw = |m1+m2| + |m1-m2| - 2."""
    require_valid(MeasurementTuple([m1, m2]))
    a, b = m1.bloch, m2.bloch
    raw = float(np.linalg.norm(a + b)) + float(np.linalg.norm(a - b)) - 2.0
    return _bound(raw, "pairwise_single")


def pairwise_sum_lower_bound(M: MeasurementTuple) -> BoundReport:
    """Summed pair bound over the three pairs, halved."""
    require_valid(M, arity=3)
    raw = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = M.items[i].bloch, M.items[j].bloch
            raw += float(np.linalg.norm(a + b)) + float(np.linalg.norm(a - b)) - 2.0
    return _bound(0.5 * raw, "pairwise_sum")


def ntuple_lower_bound_heuristic(M: MeasurementTuple) -> BoundReport:
    """Heuristic n-tuple bound (valid only for special tuples): (S - 2^n)/2^(n-2)."""
    require_valid(M)
    n = M.arity
    if not 4 <= n <= 20:
        raise InputError(f"heuristic n-tuple bound needs arity 4..20, got {n}")
    raw = (sign_pattern_sum(M.vectors()) - float(2**n)) / float(2 ** (n - 2))
    return _bound(raw, "ntuple_heuristic")


class DominanceResult(NamedTuple):
    l1: float
    l2: float
    holds: bool


def dominance_check(M: MeasurementTuple) -> DominanceResult:
    """Check that the triple bound dominates the pairwise-sum bound.

    Also verifies the intermediate chain: the criterion sum is at least the
    best two-pair split of the derived vectors, which in turn is at least
    2 * max over pairs of (|m_i+m_j| + |m_i-m_j|).
    """
    require_valid(M, arity=3)
    l1 = triple_lower_bound(M).raw_margin
    l2 = pairwise_sum_lower_bound(M).raw_margin
    total, _ = criterion_sum(M)
    p = np.array(derived_p_vectors(M))
    split = max(
        np.linalg.norm(p[0] - p[1]) + np.linalg.norm(p[2] - p[3]),
        np.linalg.norm(p[0] - p[2]) + np.linalg.norm(p[1] - p[3]),
        np.linalg.norm(p[0] - p[3]) + np.linalg.norm(p[1] - p[2]),
    )
    pair_max = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = M.items[i].bloch, M.items[j].bloch
            pair_max = max(pair_max, float(np.linalg.norm(a + b)) + float(np.linalg.norm(a - b)))
    chain_ok = total >= float(split) - 1e-9 and float(split) >= 2.0 * pair_max - 1e-9
    return DominanceResult(l1, l2, bool(l1 >= l2 - 1e-9 and chain_ok))


def fibonacci_sphere_points(count: int) -> np.ndarray:
    """Deterministic near-uniform lattice of `count` unit vectors."""
    if count < 1:
        raise InputError("need at least one grid point")
    i = np.arange(count, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / count
    rad = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    return np.column_stack((rad * np.cos(phi), rad * np.sin(phi), z))


def delta_grid_max(M: MeasurementTuple, N: MeasurementTuple, grid: np.ndarray) -> float:
    """Grid oracle: maximize the state-dependent error over lattice states."""
    diff = M.vectors() - N.vectors()
    return 2.0 * float(np.abs(grid @ diff.T).sum(axis=1).max())
