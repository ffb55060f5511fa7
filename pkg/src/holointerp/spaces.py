"""Weighted Hilbert couples and their interpolation-norm scale.

A couple (E0, E1) is realized on a truncated coordinate space C^N by two
strictly positive weight sequences: ``||x||_i^2 = sum_k (wi_k |x_k|)^2``.
For such diagonal couples the complex-interpolation norm has the closed
form ``||x||_theta^2 = sum_k (w0_k^(1-theta) w1_k^theta |x_k|)^2``, which
this module evaluates directly; the strip machinery certifies the formula
against the inf-definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "WeightedCouple",
    "ThetaNorm",
    "theta_norm",
    "theta_weights",
    "normalize_couple",
    "interpolation_inequality_check",
    "make_weights",
    "couple_from_json",
    "couple_to_json",
    "WEIGHT_GENERATORS",
]


def _as_weight_array(w, dim: int, name: str) -> np.ndarray:
    arr = np.asarray(w, dtype=float)
    if arr.shape != (dim,):
        raise ValueError(f"{name}: expected {dim} weights, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError(f"{name}: weights must be strictly positive and finite")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class WeightedCouple:
    """A pair of weighted-l2 norms on C^dim, E1 embedded in E0.

    ``embed_const`` is the smallest C with ||x||_0 <= C ||x||_1, i.e.
    max_k w0_k / w1_k; it equals 1 for couples in normalized position.
    """

    dim: int
    w0: np.ndarray
    w1: np.ndarray
    embed_const: float = field(init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim: must be a positive integer, got {self.dim}")
        object.__setattr__(self, "w0", _as_weight_array(self.w0, self.dim, "w0"))
        object.__setattr__(self, "w1", _as_weight_array(self.w1, self.dim, "w1"))
        object.__setattr__(self, "embed_const", float(np.max(self.w0 / self.w1)))

    def _coerce(self, x) -> np.ndarray:
        arr = np.asarray(x, dtype=complex)
        if arr.shape != (self.dim,):
            raise ValueError(f"vector: expected shape ({self.dim},), got {arr.shape}")
        return arr

    def norm0(self, x) -> float:
        """Endpoint norm ||x||_{E0}."""
        return float(np.linalg.norm(self.w0 * self._coerce(x)))

    def norm1(self, x) -> float:
        """Endpoint norm ||x||_{E1}."""
        return float(np.linalg.norm(self.w1 * self._coerce(x)))


def theta_weights(couple: WeightedCouple, theta: float) -> np.ndarray:
    """Per-coordinate weights w0^(1-theta) * w1^theta of the theta-norm.

    The endpoints reuse the stored weight arrays so that theta in {0, 1}
    follows the identical arithmetic path as the endpoint norms.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta: must lie in [0, 1], got {theta}")
    if theta == 0.0:
        return couple.w0
    if theta == 1.0:
        return couple.w1
    return couple.w0 ** (1.0 - theta) * couple.w1 ** theta


@dataclass(frozen=True)
class ThetaNorm:
    """The interpolation norm ||.||_theta with precomputed diagonal weights."""

    theta: float
    weights: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta: must lie in [0, 1], got {self.theta}")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights: must be a 1-d strictly positive array")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_couple(cls, couple: WeightedCouple, theta: float) -> "ThetaNorm":
        return cls(theta=theta, weights=theta_weights(couple, theta))

    def __call__(self, x) -> float:
        arr = np.asarray(x, dtype=complex)
        if arr.shape != self.weights.shape:
            raise ValueError(
                f"vector: expected shape {self.weights.shape}, got {arr.shape}"
            )
        return float(np.linalg.norm(self.weights * arr))


def theta_norm(couple: WeightedCouple, theta: float, x) -> float:
    """Interpolation norm ||x||_theta = (sum (w0^(1-t) w1^t |x|)^2)^(1/2)."""
    return float(np.linalg.norm(theta_weights(couple, theta) * couple._coerce(x)))


def normalize_couple(couple: WeightedCouple) -> tuple[WeightedCouple, float]:
    """Rescale w1 so that the embedding constant becomes exactly 1.

    Returns the rescaled couple together with the factor applied to the
    E1 norm; constants certified against the original norm must be
    adjusted by that factor when mapped back. Idempotent: couples already
    within 1e-14 of normalized are returned unchanged with factor 1.
    """
    c = couple.embed_const
    if abs(c - 1.0) <= 1e-14:
        return couple, 1.0
    return WeightedCouple(couple.dim, couple.w0, c * couple.w1), c


def interpolation_inequality_check(
    couple: WeightedCouple,
    x,
    theta_grid: Iterable[float],
    tol: float = 1e-12,
) -> list[tuple[float, float]]:
    """Ratios ||x||_theta / (||x||_0^(1-theta) ||x||_1^theta) over a grid.

    Sanity layer for the log-convexity of the norm scale; each ratio must
    not exceed 1 + tol. Rejects the zero vector, whose ratio is undefined.
    """
    arr = couple._coerce(x)
    n0 = couple.norm0(arr)
    n1 = couple.norm1(arr)
    if n0 == 0.0 or n1 == 0.0:
        raise ValueError("x: zero vector has no defined inequality ratio")
    rows = []
    for theta in theta_grid:
        nt = theta_norm(couple, theta, arr)
        ratio = nt / (n0 ** (1.0 - theta) * n1**theta)
        if ratio > 1.0 + tol:
            raise AssertionError(
                f"log-convexity violated at theta={theta}: ratio={ratio!r}"
            )
        rows.append((float(theta), float(ratio)))
    return rows


# -- weight generators, addressable by name from CLI configs ---------------


def _constant_weights(dim: int, value: float = 1.0) -> np.ndarray:
    if value <= 0:
        raise ValueError(f"value: must be positive, got {value}")
    return np.full(dim, float(value))


def _geometric_weights(dim: int, ratio: float = 2.0) -> np.ndarray:
    if ratio <= 0:
        raise ValueError(f"ratio: must be positive, got {ratio}")
    return float(ratio) ** np.arange(dim)


def _sobolev_weights(dim: int, s: float = 1.0) -> np.ndarray:
    k = np.arange(dim, dtype=float)
    return (1.0 + k * k) ** (s / 2.0)


WEIGHT_GENERATORS: dict[str, Callable[..., np.ndarray]] = {
    "constant": _constant_weights,
    "geometric": _geometric_weights,
    "sobolev": _sobolev_weights,
}


def make_weights(name: str, dim: int, **params) -> np.ndarray:
    """Build a named weight sequence: constant, geometric, or sobolev."""
    try:
        gen = WEIGHT_GENERATORS[name]
    except KeyError:
        raise ValueError(
            f"generator: unknown name {name!r}, expected one of "
            f"{sorted(WEIGHT_GENERATORS)}"
        ) from None
    return gen(dim, **params)


def couple_to_json(couple: WeightedCouple) -> dict:
    return {
        "dim": couple.dim,
        "w0": [float(v) for v in couple.w0],
        "w1": [float(v) for v in couple.w1],
    }


def couple_from_json(obj: dict) -> WeightedCouple:
    try:
        dim, w0, w1 = obj["dim"], obj["w0"], obj["w1"]
    except KeyError as exc:
        raise ValueError(f"couple: missing key {exc.args[0]!r}") from None
    return WeightedCouple(int(dim), w0, w1)
