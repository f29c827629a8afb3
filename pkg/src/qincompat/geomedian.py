"""Fermat-Torricelli point (geometric median) of a finite set in 3-space.

Weiszfeld iteration with vertex-singularity handling: exact duplicates are
merged into weighted points, and an iterate landing on an input point is
either accepted (if the vertex-optimality condition holds) or pushed off
along the descent direction with a Vardi-Zhang step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bloch import InputError, as_vec3

GRAD_TOL = 1e-10     # stationarity residual for convergence
STEP_TOL = 1e-13     # iterate displacement cutoff
VERTEX_EPS = 1e-13   # distance under which an iterate counts as "at" a vertex
MAX_ITER = 100000


@dataclass
class FTResult:
    point: np.ndarray
    total_distance: float
    iterations: int
    stationarity_residual: float
    converged: bool
    f_history: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "point": [float(c) for c in self.point],
            "total_distance": float(self.total_distance),
            "iterations": int(self.iterations),
            "stationarity_residual": float(self.stationarity_residual),
            "converged": bool(self.converged),
        }


def _merge_duplicates(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, counts = np.unique(pts, axis=0, return_counts=True)
    return uniq, counts.astype(float)


def _total_distance(pts: np.ndarray, w: np.ndarray, x: np.ndarray) -> float:
    return float(w @ np.linalg.norm(pts - x, axis=1))


def is_vertex_optimal(points, v_index: int) -> bool:
    """Optimality test at an input point: |sum of unit pulls| <= multiplicity."""
    pts = np.array([as_vec3(p) for p in points])
    if not 0 <= v_index < len(pts):
        raise InputError(f"vertex index {v_index} out of range")
    v = pts[v_index]
    diffs = pts - v
    dists = np.linalg.norm(diffs, axis=1)
    at_v = dists <= VERTEX_EPS
    mult = float(np.count_nonzero(at_v))
    if np.all(at_v):
        return True
    pull = np.sum(diffs[~at_v] / dists[~at_v, None], axis=0)
    return float(np.linalg.norm(pull)) <= mult + 1e-12


def fermat_torricelli(points, max_iter: int = MAX_ITER) -> FTResult:
    """Minimize f(x) = sum_k |x - points_k| starting from the centroid."""
    if len(points) == 0:
        raise InputError("fermat_torricelli requires at least one point")
    raw = np.array([as_vec3(p) for p in points])
    pts, w = _merge_duplicates(raw)

    if len(pts) == 1:
        return FTResult(pts[0].copy(), 0.0, 0, 0.0, True, [0.0])

    x = raw.mean(axis=0)
    history = [_total_distance(pts, w, x)]
    residual = np.inf
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        diffs = pts - x
        dists = np.linalg.norm(diffs, axis=1)
        near = dists < VERTEX_EPS
        if near.any():
            v = int(np.argmax(near))
            keep = ~near
            units = diffs[keep] / dists[keep, None]
            pull = w[keep] @ units
            pull_norm = float(np.linalg.norm(pull))
            if pull_norm <= w[v] + GRAD_TOL:
                x = pts[v].copy()
                residual = max(0.0, pull_norm - w[v])
                converged = True
                history.append(_total_distance(pts, w, x))
                break
            # Vardi-Zhang escape: descend along the net pull.
            lips = float(np.sum(w[keep] / dists[keep]))
            x = x + (pull_norm - w[v]) / lips * (pull / pull_norm)
            history.append(_total_distance(pts, w, x))
            continue
        inv = w / dists
        units = diffs / dists[:, None]
        residual = float(np.linalg.norm(w @ units))
        if residual <= GRAD_TOL:
            converged = True
            break
        x_new = (inv @ pts) / inv.sum()
        history.append(_total_distance(pts, w, x_new))
        step = float(np.linalg.norm(x_new - x))
        x = x_new
        if step < STEP_TOL:
            converged = True
            break

    return FTResult(x, _total_distance(pts, w, x), it, residual, converged, history)
