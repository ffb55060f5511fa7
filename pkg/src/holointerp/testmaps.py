"""Built-in maps with analytically known endpoint constants.

Every verification sweep needs sound constants; these maps supply them in
closed form (or, for the geometric kind, by a one-dimensional grid
supremum per coordinate, which is exact because the coordinate ratio is
monotone up to the ball boundary). The truncated Cauchy convolution is
the one deliberately uncertified member: its constants must come from
empirical estimation and any report built on them is advisory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytic import AnalyticMap
from .spaces import WeightedCouple

__all__ = [
    "OracleMap",
    "DiagonalLinear",
    "DiagonalMonomial",
    "RankOneQuadratic",
    "ComponentwiseGeometric",
    "CauchyConvolutionTruncated",
    "ConstantsUnavailable",
    "oracle_constants",
    "ball_constants",
    "to_analytic",
    "MAP_KINDS",
    "map_from_config",
]


class ConstantsUnavailable(ValueError):
    """The map ships without certified closed-form constants."""


def _weights_for_side(couple: WeightedCouple, side: int) -> np.ndarray:
    return couple.w0 if side == 0 else couple.w1


class OracleMap:
    """Interface shared by the catalog: evaluate, degree, constants, maximizer."""

    kind: str = ""
    homogeneous_degree: int | None = None

    @property
    def in_dim(self) -> int:
        raise NotImplementedError

    @property
    def out_dim(self) -> int:
        raise NotImplementedError

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def endpoint_constant(
        self, e_couple: WeightedCouple, h_couple: WeightedCouple, side: int,
        radius: float | None = None,
    ) -> float:
        raise NotImplementedError

    def maximizer(
        self, e_couple: WeightedCouple, h_couple: WeightedCouple, side: int,
        radius: float | None = None,
    ) -> np.ndarray:
        """A deterministic sample whose ratio attains the oracle constant."""
        raise NotImplementedError

    def _check_dims(self, e_couple: WeightedCouple, h_couple: WeightedCouple):
        if e_couple.dim != self.in_dim:
            raise ValueError(
                f"e_couple: dimension {e_couple.dim} != map input dim {self.in_dim}"
            )
        if h_couple.dim != self.out_dim:
            raise ValueError(
                f"h_couple: dimension {h_couple.dim} != map output dim {self.out_dim}"
            )

    def _coerce(self, x) -> np.ndarray:
        arr = np.asarray(x, dtype=complex)
        if arr.shape != (self.in_dim,):
            raise ValueError(f"x: expected shape ({self.in_dim},), got {arr.shape}")
        return arr


def _as_diag(scale, dim: int) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(scale, dtype=complex), (dim,)).copy()
    if not np.all(np.isfinite(arr)):
        raise ValueError("scale: entries must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class DiagonalLinear(OracleMap):
    """phi(x)_k = a_k x_k; endpoint constants max_k |a_k| v_k / w_k."""

    scale: np.ndarray
    dim: int
    kind: str = field(default="diagonal_linear", init=False)
    homogeneous_degree: int | None = field(default=1, init=False)

    def __post_init__(self):
        object.__setattr__(self, "scale", _as_diag(self.scale, self.dim))

    @property
    def in_dim(self) -> int:
        return self.dim

    @property
    def out_dim(self) -> int:
        return self.dim

    def evaluate(self, x) -> np.ndarray:
        return self.scale * self._coerce(x)

    def _ratios(self, e_couple, h_couple, side) -> np.ndarray:
        w = _weights_for_side(e_couple, side)
        v = _weights_for_side(h_couple, side)
        return np.abs(self.scale) * v / w

    def endpoint_constant(self, e_couple, h_couple, side, radius=None) -> float:
        self._check_dims(e_couple, h_couple)
        return float(np.max(self._ratios(e_couple, h_couple, side)))

    def maximizer(self, e_couple, h_couple, side, radius=None) -> np.ndarray:
        k = int(np.argmax(self._ratios(e_couple, h_couple, side)))
        e = np.zeros(self.dim, dtype=complex)
        e[k] = 1.0
        return e


@dataclass(frozen=True)
class DiagonalMonomial(OracleMap):
    """phi(x)_k = a_k x_k^p, homogeneous of degree p.

    The endpoint constant is max_k |a_k| v_k / w_k^p, attained on the
    basis ray of the maximizing coordinate (sum y_k^p <= (sum y_k)^p for
    p >= 1 concentrates the supremum on one coordinate).
    """

    power: int
    scale: np.ndarray
    dim: int
    kind: str = field(default="diagonal_monomial", init=False)

    def __post_init__(self):
        if self.power < 1:
            raise ValueError(f"power: must be a positive integer, got {self.power}")
        object.__setattr__(self, "scale", _as_diag(self.scale, self.dim))

    @property
    def homogeneous_degree(self) -> int:  # type: ignore[override]
        return self.power

    @property
    def in_dim(self) -> int:
        return self.dim

    @property
    def out_dim(self) -> int:
        return self.dim

    def evaluate(self, x) -> np.ndarray:
        return self.scale * self._coerce(x) ** self.power

    def _ratios(self, e_couple, h_couple, side) -> np.ndarray:
        w = _weights_for_side(e_couple, side)
        v = _weights_for_side(h_couple, side)
        return np.abs(self.scale) * v / w**self.power

    def endpoint_constant(self, e_couple, h_couple, side, radius=None) -> float:
        self._check_dims(e_couple, h_couple)
        return float(np.max(self._ratios(e_couple, h_couple, side)))

    def maximizer(self, e_couple, h_couple, side, radius=None) -> np.ndarray:
        k = int(np.argmax(self._ratios(e_couple, h_couple, side)))
        e = np.zeros(self.dim, dtype=complex)
        e[k] = 1.0
        return e


@dataclass(frozen=True)
class RankOneQuadratic(OracleMap):
    """phi(x) = (sum_k u_k x_k)^2 * v with a bilinear (analytic) pairing.

    The constant ||v||_{H_i} * sum_k |u_k|^2 / w_k^2 is the squared dual
    norm of u; the maximizer is the dual direction conj(u) / w^2.
    """

    direction_in: np.ndarray
    direction_out: np.ndarray
    kind: str = field(default="rank_one_quadratic", init=False)
    homogeneous_degree: int | None = field(default=2, init=False)

    def __post_init__(self):
        u = np.asarray(self.direction_in, dtype=complex).copy()
        v = np.asarray(self.direction_out, dtype=complex).copy()
        if u.ndim != 1 or v.ndim != 1 or u.size == 0 or v.size == 0:
            raise ValueError("direction_in/direction_out: need nonempty 1-d vectors")
        if not np.any(u) or not np.any(v):
            raise ValueError("direction_in/direction_out: must be nonzero")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "direction_in", u)
        object.__setattr__(self, "direction_out", v)

    @property
    def in_dim(self) -> int:
        return self.direction_in.size

    @property
    def out_dim(self) -> int:
        return self.direction_out.size

    def evaluate(self, x) -> np.ndarray:
        pairing = np.sum(self.direction_in * self._coerce(x))
        return pairing**2 * self.direction_out

    def endpoint_constant(self, e_couple, h_couple, side, radius=None) -> float:
        self._check_dims(e_couple, h_couple)
        w = _weights_for_side(e_couple, side)
        v = _weights_for_side(h_couple, side)
        out_norm = float(np.linalg.norm(v * self.direction_out))
        dual_sq = float(np.sum(np.abs(self.direction_in) ** 2 / w**2))
        return out_norm * dual_sq

    def maximizer(self, e_couple, h_couple, side, radius=None) -> np.ndarray:
        w = _weights_for_side(e_couple, side)
        return np.conj(self.direction_in) / w**2


@dataclass(frozen=True)
class ComponentwiseGeometric(OracleMap):
    """phi(x)_k = x_k / (1 - x_k / pole_k), analytic for |x_k| < pole_k.

    Not homogeneous; its ball constants C_i(R) are found per coordinate by
    a scalar grid supremum of v |s/(1 - s/pole)| / (w s) over the reach
    |x_k| <= R / w_k (the multivariate supremum concentrates on one
    coordinate because the per-coordinate gain is convex in |x_k|^2).
    """

    pole: np.ndarray
    dim: int
    kind: str = field(default="componentwise_geometric", init=False)
    homogeneous_degree: int | None = field(default=None, init=False)
    grid_points: int = 4097

    def __post_init__(self):
        arr = np.broadcast_to(np.asarray(self.pole, dtype=float), (self.dim,)).copy()
        if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
            raise ValueError("pole: entries must be strictly positive and finite")
        arr.flags.writeable = False
        object.__setattr__(self, "pole", arr)

    @property
    def in_dim(self) -> int:
        return self.dim

    @property
    def out_dim(self) -> int:
        return self.dim

    def evaluate(self, x) -> np.ndarray:
        arr = self._coerce(x)
        return arr / (1.0 - arr / self.pole)

    def _coordinate_sup(self, w: float, v: float, pole: float, radius: float) -> float:
        reach = radius / w
        if reach >= pole:
            raise ValueError(
                f"radius: ball reach {reach!r} touches the pole at {pole!r}; "
                "shrink the radius"
            )
        s = np.linspace(reach / self.grid_points, reach, self.grid_points)
        return float(np.max(v * (s / (1.0 - s / pole)) / (w * s)))

    def endpoint_constant(self, e_couple, h_couple, side, radius=None) -> float:
        if radius is None:
            raise ValueError("radius: ball radius required for geometric constants")
        self._check_dims(e_couple, h_couple)
        w = _weights_for_side(e_couple, side)
        v = _weights_for_side(h_couple, side)
        return max(
            self._coordinate_sup(w[k], v[k], self.pole[k], radius)
            for k in range(self.dim)
        )

    def maximizer(self, e_couple, h_couple, side, radius=None) -> np.ndarray:
        if radius is None:
            raise ValueError("radius: ball radius required for geometric maximizer")
        self._check_dims(e_couple, h_couple)
        w = _weights_for_side(e_couple, side)
        v = _weights_for_side(h_couple, side)
        sups = [
            self._coordinate_sup(w[k], v[k], self.pole[k], radius)
            for k in range(self.dim)
        ]
        k = int(np.argmax(sups))
        e = np.zeros(self.dim, dtype=complex)
        e[k] = radius / w[k]
        return e


@dataclass(frozen=True)
class CauchyConvolutionTruncated(OracleMap):
    """phi(x)_k = sum_{i+j=k} x_i x_j on the truncation; no closed-form constants.

    The closest desk-scale analogue of quadratic convolution-type maps;
    constants must be estimated empirically and reports stay advisory.
    """

    dim: int
    kind: str = field(default="cauchy_convolution_truncated", init=False)
    homogeneous_degree: int | None = field(default=2, init=False)

    @property
    def in_dim(self) -> int:
        return self.dim

    @property
    def out_dim(self) -> int:
        return self.dim

    def evaluate(self, x) -> np.ndarray:
        arr = self._coerce(x)
        return np.convolve(arr, arr)[: self.dim]

    def endpoint_constant(self, e_couple, h_couple, side, radius=None) -> float:
        raise ConstantsUnavailable(
            "cauchy_convolution_truncated ships without closed-form constants; "
            "use estimate_constants (advisory)"
        )

    def maximizer(self, e_couple, h_couple, side, radius=None) -> np.ndarray:
        raise ConstantsUnavailable(
            "cauchy_convolution_truncated has no certified maximizer"
        )


def oracle_constants(
    map_: OracleMap,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    radius: float | None = None,
) -> tuple[float, float]:
    """Closed-form endpoint constants (M0, M1) or ball constants (C0, C1)."""
    return (
        map_.endpoint_constant(e_couple, h_couple, 0, radius),
        map_.endpoint_constant(e_couple, h_couple, 1, radius),
    )


def ball_constants(
    map_: OracleMap,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    radius: float,
) -> tuple[float, float]:
    """Ball-restricted constants C_i(R) with ||phi(x)|| <= C_i(R) ||x||.

    A k-homogeneous bound M ||x||^k restricts to M R^(k-1) ||x|| on the
    radius-R ball; non-homogeneous kinds certify their ball constants
    directly.
    """
    k = map_.homogeneous_degree
    if k is None:
        return oracle_constants(map_, e_couple, h_couple, radius)
    if k < 1:
        raise ValueError(f"homogeneous degree must be >= 1 on a ball, got {k}")
    m0, m1 = oracle_constants(map_, e_couple, h_couple, radius)
    return m0 * radius ** (k - 1), m1 * radius ** (k - 1)


def to_analytic(
    map_: OracleMap,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    radius: float,
    constants: tuple[float, float] | None = None,
) -> AnalyticMap:
    """Bind an oracle map to couples and a ball as an AnalyticMap."""
    if constants is None:
        constants = ball_constants(map_, e_couple, h_couple, radius)
    c0, c1 = constants
    return AnalyticMap(
        evaluate=map_.evaluate,
        radius=radius,
        c0=c0,
        c1=c1,
        dim=map_.in_dim,
        maps_zero_to_zero=True,
        reentrant=True,
    )


def _build_diagonal_linear(dim: int, scale=1.0, **_ignored) -> DiagonalLinear:
    return DiagonalLinear(scale=scale, dim=dim)


def _build_diagonal_monomial(dim: int, power: int = 2, scale=1.0) -> DiagonalMonomial:
    return DiagonalMonomial(power=int(power), scale=scale, dim=dim)


def _build_rank_one(dim: int, direction_in=None, direction_out=None) -> RankOneQuadratic:
    if direction_in is None:
        direction_in = np.ones(dim)
    if direction_out is None:
        direction_out = np.ones(dim)
    return RankOneQuadratic(direction_in=direction_in, direction_out=direction_out)


def _build_geometric(dim: int, pole=2.0) -> ComponentwiseGeometric:
    return ComponentwiseGeometric(pole=pole, dim=dim)


def _build_cauchy(dim: int) -> CauchyConvolutionTruncated:
    return CauchyConvolutionTruncated(dim=dim)


MAP_KINDS: dict[str, Callable[..., OracleMap]] = {
    "diagonal_linear": _build_diagonal_linear,
    "diagonal_monomial": _build_diagonal_monomial,
    "rank_one_quadratic": _build_rank_one,
    "componentwise_geometric": _build_geometric,
    "cauchy_convolution_truncated": _build_cauchy,
}


def map_from_config(obj: dict, dim: int) -> OracleMap:
    """Build a catalog map from a {"kind": ..., params...} descriptor."""
    if "kind" not in obj:
        raise ValueError("map.kind: missing")
    kind = obj["kind"]
    if kind not in MAP_KINDS:
        raise ValueError(
            f"map.kind: unknown kind {kind!r}, expected one of {sorted(MAP_KINDS)}"
        )
    params = {k: v for k, v in obj.items() if k != "kind"}
    try:
        return MAP_KINDS[kind](dim=dim, **params)
    except TypeError as exc:
        raise ValueError(f"map: bad parameters for kind {kind!r}: {exc}") from None
