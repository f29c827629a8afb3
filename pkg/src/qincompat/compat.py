"""Joint-measurability tests for tuples of unbiased qubit measurements.

Three routes are provided: the exact pairwise criterion, the exact triple
criterion built on the Fermat-Torricelli point of the four derived vectors,
and a sufficient-only n-tuple criterion.  Independently of those, a parent
POVM with the prescribed marginals is searched directly as a small
second-order-cone feasibility problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .bloch import (
    InputError,
    MeasurementTuple,
    Measurement,
    derived_p_vectors,
    require_valid,
)
from .geomedian import FTResult, fermat_torricelli

BOUNDARY_TOL = 1e-9     # analytic criteria
FEAS_TOL = 1e-7         # numerical parent-POVM oracle
NTUPLE_MAX_ARITY = 20
ORACLE_MAX_ARITY = 4

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
INCONCLUSIVE = "inconclusive"


@dataclass
class CompatReport:
    verdict: str
    margin: float
    criterion: str
    certificate: dict | None = None

    @property
    def compatible(self) -> bool:
        return self.verdict == COMPATIBLE

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "verdict": self.verdict,
            "margin": float(self.margin),
            "certificate": self.certificate,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CompatReport":
        return cls(
            verdict=obj["verdict"],
            margin=float(obj["margin"]),
            criterion=obj["criterion"],
            certificate=obj.get("certificate"),
        )


def pairwise_compatible(m1: Measurement, m2: Measurement) -> CompatReport:
    """Exact pair criterion: |m1+m2| + |m1-m2| <= 2."""
    t = MeasurementTuple([m1, m2])
    require_valid(t)
    a, b = m1.bloch, m2.bloch
    margin = 2.0 - float(np.linalg.norm(a + b)) - float(np.linalg.norm(a - b))
    verdict = COMPATIBLE if margin >= -BOUNDARY_TOL else INCOMPATIBLE
    return CompatReport(verdict, margin, "pairwise")


def criterion_sum(t: MeasurementTuple) -> tuple[float, FTResult]:
    """Sum of distances of the four derived vectors to their median."""
    q = np.array(derived_p_vectors(t))
    ft = fermat_torricelli(q)
    return ft.total_distance, ft


def triple_compatible(t: MeasurementTuple) -> CompatReport:
    """Exact triple criterion: sum_k |q_k - q_F| <= 4."""
    require_valid(t, arity=3)
    total, ft = criterion_sum(t)
    margin = 4.0 - total
    verdict = COMPATIBLE if margin >= -BOUNDARY_TOL else INCOMPATIBLE
    return CompatReport(verdict, margin, "triple_ft", certificate=ft.to_dict())


def sign_pattern_sum(vectors: np.ndarray) -> float:
    """Sum over all 2^n sign patterns of |sum_i mu_i v_i|."""
    n = len(vectors)
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    return float(np.linalg.norm(signs @ vectors, axis=1).sum())


def ntuple_sufficient(t: MeasurementTuple) -> CompatReport:
    """Sufficient-only n-tuple criterion: pattern sum <= 2^n."""
    require_valid(t)
    n = t.arity
    if n < 2:
        raise InputError("ntuple criterion needs arity >= 2")
    if n > NTUPLE_MAX_ARITY:
        raise InputError(f"arity {n} exceeds the 2^n enumeration guard ({NTUPLE_MAX_ARITY})")
    margin = float(2**n) - sign_pattern_sum(t.vectors())
    verdict = COMPATIBLE if margin >= -BOUNDARY_TOL else INCONCLUSIVE
    return CompatReport(verdict, margin, "ntuple_sufficient")


# ---------------------------------------------------------------------------
# Parent-POVM feasibility oracle.
#
# A parent observable with operators O_mu = (a_mu I + z_mu . sigma)/2 over the
# 2^n sign patterns mu reproduces the marginals iff
#   sum_mu a_mu = 2,            sum_mu z_mu = 0,
#   sum_{mu_i=+1} a_mu = 1,     sum_{mu_i=+1} z_mu = m_i   for each i,
# and is positive iff |z_mu| <= a_mu.  Feasibility is decided by minimizing a
# uniform slack s in |z_mu| <= a_mu + s subject to the equalities (an SOCP).
# ---------------------------------------------------------------------------

_PARENT_CACHE: dict[int, tuple] = {}


def _parent_problem(n: int):
    import cvxpy as cp

    patterns = np.array(list(itertools.product((1, -1), repeat=n)))
    k = 2**n
    a = cp.Variable(k)
    z = cp.Variable((k, 3))
    slack = cp.Variable()
    marg = cp.Parameter((n, 3))
    cons = [cp.sum(a) == 2, cp.sum(z, axis=0) == 0]
    for i in range(n):
        sel = patterns[:, i] == 1
        cons.append(cp.sum(a[sel]) == 1)
        cons.append(cp.sum(z[sel], axis=0) == marg[i])
    cons += [cp.norm(z[j, :]) <= a[j] + slack for j in range(k)]
    prob = cp.Problem(cp.Minimize(slack), cons)
    return prob, marg, a, z, slack, patterns


def _solver_name():
    import cvxpy as cp

    for name in ("CLARABEL", "ECOS", "SCS"):
        if name in cp.installed_solvers():
            return name
    raise RuntimeError("no conic solver available")


def parent_povm_feasible(t: MeasurementTuple) -> CompatReport:
    """Search for a parent POVM with the tuple as marginals (SOCP oracle)."""
    require_valid(t)
    n = t.arity
    if not 2 <= n <= ORACLE_MAX_ARITY:
        raise InputError(f"parent-POVM oracle supports arity 2..{ORACLE_MAX_ARITY}, got {n}")
    if n not in _PARENT_CACHE:
        _PARENT_CACHE[n] = _parent_problem(n)
    prob, marg, a, z, slack, patterns = _PARENT_CACHE[n]
    marg.value = t.vectors()
    prob.solve(solver=_solver_name())
    if prob.status not in ("optimal", "optimal_inaccurate"):
        return CompatReport(INCONCLUSIVE, float("nan"), "parent_feasibility",
                            certificate={"status": prob.status})
    violation = float(slack.value)
    verdict = COMPATIBLE if violation <= FEAS_TOL else INCOMPATIBLE
    certificate = {
        "patterns": patterns.tolist(),
        "a": [float(v) for v in a.value],
        "z": [[float(c) for c in row] for row in z.value],
        "max_positivity_violation": violation,
    }
    return CompatReport(verdict, -violation, "parent_feasibility", certificate=certificate)
