"""Minimization of the worst-case error over triple-wise compatible triples.

Multi-start Nelder-Mead with a graduated penalty on the triple criterion.
The criterion sum min_y sum_k |q_k - y| is handled by adjoining the center y
to the search variables (the joint minimum over (N, y) equals the true
penalized objective), so no inner median solve runs per evaluation.  The
best iterate is finished by a uniform shrink back onto the feasible set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .bloch import DERIVED_SIGNS, InputError, MeasurementTuple, require_valid
from .compat import criterion_sum, triple_compatible
from .metrics import triple_lower_bound

PENALTY_SCHEDULE = (10.0, 1e2, 1e3, 1e4)
FEAS_SLACK = 1e-7


@dataclass
class OptimizerConfig:
    seed: int = 0
    starts: int = 32
    max_evals: int = 50000

    def to_dict(self) -> dict:
        return {"seed": int(self.seed), "starts": int(self.starts),
                "max_evals": int(self.max_evals)}

    @classmethod
    def from_dict(cls, obj: dict) -> "OptimizerConfig":
        return cls(int(obj.get("seed", 0)), int(obj.get("starts", 32)),
                   int(obj.get("max_evals", 50000)))


@dataclass
class OptimizeResult:
    best_n: MeasurementTuple
    achieved_delta: float
    lower_bound: float
    gap: float
    feasibility_margin: float
    starts: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "best_n": self.best_n.to_json_dict(),
            "achieved_delta": float(self.achieved_delta),
            "lower_bound": float(self.lower_bound),
            "gap": float(self.gap),
            "feasibility_margin": float(self.feasibility_margin),
            "starts": int(self.starts),
            "converged": bool(self.converged),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "OptimizeResult":
        return cls(
            best_n=MeasurementTuple.from_json_dict(obj["best_n"]),
            achieved_delta=float(obj["achieved_delta"]),
            lower_bound=float(obj["lower_bound"]),
            gap=float(obj["gap"]),
            feasibility_margin=float(obj["feasibility_margin"]),
            starts=int(obj["starts"]),
            converged=bool(obj["converged"]),
        )


def shrink_to_compatible(M: MeasurementTuple) -> tuple[float, MeasurementTuple]:
    """Largest t in [0,1] with t*M triple-compatible, by bisection to 1e-10."""
    require_valid(M, arity=3)

    def ok(t: float) -> bool:
        return triple_compatible(M.scaled(t)).compatible

    if ok(1.0):
        return 1.0, M
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo, M.scaled(lo)


def _raw_delta(pM: np.ndarray, nv: np.ndarray) -> float:
    return 2.0 * float(np.linalg.norm(pM - DERIVED_SIGNS @ nv, axis=1).max())


def _project_feasible(nv: np.ndarray) -> tuple[np.ndarray, float]:
    """Uniformly shrink until the triple criterion holds; return (N, margin)."""
    t = MeasurementTuple.from_vectors(nv)
    total, _ = criterion_sum(t)
    if total > 4.0:
        # The criterion sum is positively homogeneous in a uniform scale.
        s = 4.0 / total
        while s > 0.0:
            scaled = nv * s
            total_s, _ = criterion_sum(MeasurementTuple.from_vectors(scaled))
            if 4.0 - total_s >= -FEAS_SLACK:
                return scaled, 4.0 - total_s
            s *= 1.0 - 1e-9
        return nv * 0.0, 4.0
    return nv, 4.0 - total


def minimize_delta(M: MeasurementTuple, cfg: OptimizerConfig | None = None) -> OptimizeResult:
    """Minimize the worst-case error over triple-wise compatible triples."""
    require_valid(M, arity=3)
    cfg = cfg or OptimizerConfig()
    if cfg.starts < 1:
        raise InputError("need at least one start")

    pM = DERIVED_SIGNS @ M.vectors()
    lb = triple_lower_bound(M).degree
    _, n_start = shrink_to_compatible(M)
    nv0 = n_start.vectors()
    _, ft0 = criterion_sum(n_start)
    x_base = np.concatenate([nv0.ravel(), ft0.point])

    rng = np.random.default_rng(cfg.seed)
    maxfev_stage = max(200, cfg.max_evals // len(PENALTY_SCHEDULE))

    best_nv = None
    best_delta = np.inf
    best_margin = 0.0
    best_converged = False

    for start in range(cfg.starts):
        x = x_base.copy()
        if start > 0:
            x = x + rng.uniform(-0.2, 0.2, size=x.shape)
        converged = True
        for pen in PENALTY_SCHEDULE:

            def objective(xx, pen=pen):
                nv = xx[:9].reshape(3, 3)
                y = xx[9:]
                delta = _raw_delta(pM, nv)
                q = DERIVED_SIGNS @ nv
                total = float(np.linalg.norm(q - y, axis=1).sum())
                return delta + pen * max(0.0, total - 4.0) ** 2

            res = _scipy_minimize(
                objective,
                x,
                method="Nelder-Mead",
                options={"maxfev": maxfev_stage, "xatol": 1e-9, "fatol": 1e-11},
            )
            x = res.x
            converged = converged and bool(res.success)

        nv, margin = _project_feasible(x[:9].reshape(3, 3))
        delta = _raw_delta(pM, nv)
        if delta < best_delta - 1e-12 or best_nv is None:
            best_nv, best_delta, best_margin = nv, delta, margin
            best_converged = converged

    best = MeasurementTuple.from_vectors(best_nv)
    return OptimizeResult(
        best_n=best,
        achieved_delta=best_delta,
        lower_bound=lb,
        gap=best_delta - lb,
        feasibility_margin=best_margin,
        starts=cfg.starts,
        converged=best_converged,
    )
