"""Bloch-vector data model for unbiased qubit measurements and qubit states.

An unbiased two-outcome qubit measurement is represented by a single real
3-vector m with |m| <= 1 (effects (I +/- m.sigma)/2); a qubit state by its
Bloch vector r with |r| <= 1.  Everything downstream works on these vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Validation tolerance for Bloch-norm constraints.  Inputs are accepted or
# rejected at this tolerance, never renormalized.
NORM_TOL = 1e-12


class InputError(ValueError):
    """An input violates a shape, finiteness, norm, or arity constraint."""


def as_vec3(v) -> np.ndarray:
    """Coerce v to a float 3-vector (finiteness is checked by validate())."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise InputError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


@dataclass(eq=False)
class Measurement:
    """Unbiased qubit measurement with effects (I +/- bloch.sigma)/2."""

    bloch: np.ndarray

    def __post_init__(self):
        self.bloch = as_vec3(self.bloch)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.bloch))

    def is_valid(self) -> bool:
        return bool(np.all(np.isfinite(self.bloch))) and self.norm <= 1.0 + NORM_TOL


@dataclass(eq=False)
class QubitState:
    """Qubit state rho = (I + r.sigma)/2 given by its Bloch vector r."""

    r: np.ndarray

    def __post_init__(self):
        self.r = as_vec3(self.r)

    def is_valid(self) -> bool:
        return bool(np.all(np.isfinite(self.r))) and float(np.linalg.norm(self.r)) <= 1.0 + NORM_TOL


@dataclass(eq=False)
class MeasurementTuple:
    """Ordered tuple of measurements under joint analysis."""

    items: list[Measurement]

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[float]]) -> "MeasurementTuple":
        return cls([Measurement(as_vec3(v)) for v in vectors])

    @property
    def arity(self) -> int:
        return len(self.items)

    def vectors(self) -> np.ndarray:
        """Stacked (arity, 3) array of the Bloch vectors."""
        return np.array([m.bloch for m in self.items])

    def scaled(self, t: float) -> "MeasurementTuple":
        return MeasurementTuple.from_vectors(t * self.vectors())

    def permuted(self, order: Sequence[int]) -> "MeasurementTuple":
        return MeasurementTuple([self.items[i] for i in order])

    def to_json_dict(self) -> dict:
        return {"measurements": [[float(c) for c in m.bloch] for m in self.items]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, obj) -> "MeasurementTuple":
        if not isinstance(obj, dict) or "measurements" not in obj:
            raise InputError('expected an object with a "measurements" key')
        vecs = obj["measurements"]
        if not isinstance(vecs, list) or not vecs:
            raise InputError('"measurements" must be a non-empty list of 3-vectors')
        t = cls.from_vectors(vecs)
        res = validate(t)
        if not res.ok:
            raise InputError(res.message)
        return t

    @classmethod
    def from_json(cls, text: str) -> "MeasurementTuple":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from exc
        return cls.from_json_dict(obj)


@dataclass
class ValidationResult:
    ok: bool
    index: int | None = None
    message: str = ""


def validate(t: MeasurementTuple) -> ValidationResult:
    """Accept iff every Bloch vector is finite with norm <= 1 + NORM_TOL."""
    for i, m in enumerate(t.items):
        if not np.all(np.isfinite(m.bloch)):
            return ValidationResult(False, i, f"measurement {i} has non-finite components")
        if m.norm > 1.0 + NORM_TOL:
            return ValidationResult(False, i, f"measurement {i} has Bloch norm {m.norm} > 1")
    return ValidationResult(True)


def require_valid(t: MeasurementTuple, arity: int | None = None) -> None:
    res = validate(t)
    if not res.ok:
        raise InputError(res.message)
    if arity is not None and t.arity != arity:
        raise InputError(f"expected a tuple of {arity} measurements, got {t.arity}")


def outcome_probabilities(m: Measurement, s: QubitState) -> tuple[float, float]:
    """Outcome probabilities (p_plus, p_minus) = ((1 +/- r.m)/2)."""
    if not m.is_valid():
        raise InputError("invalid measurement Bloch vector")
    if not s.is_valid():
        raise InputError("invalid state Bloch vector")
    d = float(np.dot(s.r, m.bloch))
    return (1.0 + d) / 2.0, (1.0 - d) / 2.0


def derived_p_vectors(t: MeasurementTuple) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four signed combinations of a triple's Bloch vectors.

    Returns (m1+m2+m3, m1-m2-m3, m2-m1-m3, m3-m1-m2); they sum to zero.
    """
    if t.arity != 3:
        raise InputError(f"expected a triple, got arity {t.arity}")
    m1, m2, m3 = (m.bloch for m in t.items)
    return (m1 + m2 + m3, m1 - m2 - m3, m2 - m1 - m3, m3 - m1 - m2)


# Rows are the sign patterns mapping a stacked triple to its four derived
# vectors: derived = DERIVED_SIGNS @ vectors.
DERIVED_SIGNS = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
)


def random_ball_vectors(rng: np.random.Generator, count: int) -> np.ndarray:
    """Sample `count` vectors uniformly from the closed unit ball."""
    dirs = rng.normal(size=(count, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.random(count) ** (1.0 / 3.0)
    return dirs * radii[:, None]


def random_triple(rng: np.random.Generator) -> MeasurementTuple:
    return MeasurementTuple.from_vectors(random_ball_vectors(rng, 3))
