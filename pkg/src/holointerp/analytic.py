"""Analytic maps on balls and contour extraction of homogeneous components.

An analytic map ``phi`` on a ball of radius R (in the E0 norm) expands as
``phi(h) = sum_n P_n(h)`` with P_n homogeneous of degree n. Each component
is a scalar contour integral of ``phi(xi * h) / xi^(n+1)`` over a circle
``|xi| = rho`` with ``rho * ||h||_0 < R``. Discretizing on M equispaced
roots of unity turns the integral into an exact finite sum over
components: the discrete value equals

    P_n(h) + sum_{m>=1} P_{n+mM}(h) * rho^(mM),

so the only error is aliasing from degrees congruent to n mod M, and for a
polynomial of degree d the extraction with M >= d+1 nodes is exact. The
aliasing tail is certified from the declared ball bounds: with
``q = rho ||h||_0 / R < 1`` it is at most

    C0(R) * R * (||h||_0 / R)^n * q^M / (1 - q^M).

Analyticity of a black-box evaluator cannot be verified by any finite
procedure; it is a declared contract. Extraction surfaces anomalies (a
nonzero degree-0 component of a map flagged as vanishing at zero,
rho-dependence beyond the certified aliasing) as evidence of violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .spaces import WeightedCouple

__all__ = [
    "AnalyticMap",
    "Extraction",
    "HomogeneousComponent",
    "MapContractError",
    "aliasing_tail",
    "extract_component",
    "rho_independence_check",
    "RhoDeviation",
    "component_norm_bound",
    "truncated_series",
    "SeriesTruncation",
]

DEFAULT_EXTRACTION_TOL = 1e-12
DEFAULT_ZERO_TOL = 1e-9


class MapContractError(RuntimeError):
    """A declared analytic-map contract failed a numeric spot check."""


@dataclass(frozen=True)
class AnalyticMap:
    """A black-box analytic map with declared domain radius and ball bounds.

    ``evaluate`` must accept complex input vectors (extraction samples the
    map at complex multiples of real arguments); maps defined by a formula
    on real vectors are used through their analytic continuation, which
    the caller supplies and this library cannot verify.

    ``c0`` bounds ||phi(x)||_{H0} <= c0 ||x||_{E0} on the E0-ball of
    ``radius``; ``c1`` is the E1/H1 analogue. ``maps_zero_to_zero``
    declares phi(0) = 0 (spot-checked at construction) and arms the
    degree-0 extraction diagnostic. ``reentrant`` declares the evaluator
    safe for concurrent calls; extraction itself never mutates state.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    radius: float
    c0: float
    c1: float
    dim: int
    maps_zero_to_zero: bool = True
    reentrant: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius: must be positive, got {self.radius}")
        if self.c0 < 0 or self.c1 < 0:
            raise ValueError("c0, c1: ball bounds must be nonnegative")
        if self.dim < 1:
            raise ValueError(f"dim: must be a positive integer, got {self.dim}")
        if self.maps_zero_to_zero:
            at_zero = np.asarray(self.evaluate(np.zeros(self.dim, dtype=complex)))
            if float(np.linalg.norm(at_zero)) > 1e-12:
                raise MapContractError(
                    "maps_zero_to_zero declared but ||phi(0)|| = "
                    f"{np.linalg.norm(at_zero):.3e} > 1e-12"
                )


@dataclass(frozen=True)
class Extraction:
    """One discrete contour extraction: value plus certified alias error."""

    value: np.ndarray
    alias_bound: float
    rho: float
    nodes: int

    def __post_init__(self):
        v = np.asarray(self.value, dtype=complex).copy()
        v.flags.writeable = False
        object.__setattr__(self, "value", v)


def aliasing_tail(
    bound_const: float, radius: float, h_norm: float, n: int, rho: float, nodes: int
) -> float:
    """Certified aliasing error of M-node extraction of degree n.

    Valid in the norm whose ball constant ``bound_const`` certifies; +inf
    when the contour leaves the corresponding ball (q >= 1).
    """
    q = rho * h_norm / radius
    if q >= 1.0:
        return math.inf
    if bound_const == 0.0 or h_norm == 0.0:
        return 0.0
    qm = q**nodes
    return bound_const * radius * (h_norm / radius) ** n * qm / (1.0 - qm)


def _resolve_contour(
    map_: AnalyticMap,
    h0_norm: float,
    n: int,
    rho: float | None,
    nodes: int | None,
    tol: float,
) -> tuple[float, int]:
    if rho is None:
        rho = map_.radius / (2.0 * h0_norm)
    if rho <= 0:
        raise ValueError(f"rho: contour radius must be positive, got {rho}")
    q = rho * h0_norm / map_.radius
    if q >= 1.0:
        raise ValueError(
            f"rho: contour exits the domain ball (rho*||h||_0 = {rho * h0_norm!r} "
            f">= radius {map_.radius!r})"
        )
    if nodes is None:
        nodes = max(16, n + 1 + math.ceil(math.log(tol) / math.log(q)))
    if nodes <= n:
        raise ValueError(
            f"nodes: need more than degree n={n} contour nodes, got {nodes}"
        )
    return float(rho), int(nodes)


def _contour_values(map_: AnalyticMap, h: np.ndarray, rho: float, nodes: int) -> np.ndarray:
    """Evaluate phi at the scaled roots-of-unity samples; shape (nodes, out_dim)."""
    xi = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    return np.stack([np.asarray(map_.evaluate(x * h), dtype=complex) for x in xi])


def _check_p0(map_: AnalyticMap, value: np.ndarray, alias: float, zero_tol: float):
    p0 = float(np.linalg.norm(value))
    if map_.maps_zero_to_zero and p0 > zero_tol + alias:
        raise MapContractError(
            f"degree-0 component has norm {p0:.3e} beyond aliasing bound "
            f"{alias:.3e}; map violates its maps_zero_to_zero contract "
            "(or is not analytic)"
        )


def extract_component(
    map_: AnalyticMap,
    couple: WeightedCouple,
    h,
    n: int,
    rho: float | None = None,
    nodes: int | None = None,
    *,
    tol: float = DEFAULT_EXTRACTION_TOL,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> Extraction:
    """Discrete contour extraction of the degree-n component at h.

    Parameters
    ----------
    map_ : AnalyticMap
        Source map; its radius and c0 certify the aliasing bound.
    couple : WeightedCouple
        Domain couple supplying the E0 norm for the contour precondition.
    h : complex vector
        Nonzero evaluation point.
    n : int
        Component degree, n >= 0.
    rho : float, optional
        Contour radius; default R / (2 ||h||_0), making the per-step
        aliasing factor exactly 1/2.
    nodes : int, optional
        Sample count M > n; default targets aliasing below ``tol``.

    Returns
    -------
    Extraction
        The discrete sum (exact up to the reported alias_bound; exact to
        rounding for polynomials of degree < nodes) with its contour.
    """
    if n < 0:
        raise ValueError(f"n: degree must be nonnegative, got {n}")
    arr = couple._coerce(h)
    h0 = couple.norm0(arr)
    if h0 == 0.0:
        raise ValueError("h: zero vector admits no contour")
    rho, nodes = _resolve_contour(map_, h0, n, rho, nodes, tol)
    values = _contour_values(map_, arr, rho, nodes)
    twiddle = np.exp(-2j * np.pi * n * np.arange(nodes) / nodes)
    total = twiddle @ values / (nodes * rho**n)
    alias = aliasing_tail(map_.c0, map_.radius, h0, n, rho, nodes)
    if n == 0:
        _check_p0(map_, total, alias, zero_tol)
    return Extraction(value=total, alias_bound=alias, rho=rho, nodes=nodes)


@dataclass(frozen=True)
class HomogeneousComponent:
    """A degree-n component evaluator backed by contour extraction.

    With ``contour_radius`` set, every evaluation reuses that fixed rho
    and must satisfy 0 < rho * ||h||_0 < radius. With it unset, rho is
    chosen per evaluation as ``contour_scale * R / a(h)`` where a(h) is
    the E0 norm of h, or max(E0, E1) norm when ``two_sided`` is set so
    that the aliasing tail is certified in both codomain norms. The
    relative policy samples identical contour points for h and lambda*h,
    making the evaluator homogeneous up to aliasing.
    """

    source: AnalyticMap
    domain: WeightedCouple
    degree: int
    node_count: int
    contour_radius: float | None = None
    contour_scale: float = 0.5
    two_sided: bool = False

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree: must be nonnegative, got {self.degree}")
        if self.node_count <= self.degree:
            raise ValueError(
                f"node_count: need more than degree {self.degree}, got {self.node_count}"
            )
        if self.contour_radius is None and not 0.0 < self.contour_scale < 1.0:
            raise ValueError(
                f"contour_scale: must lie in (0, 1), got {self.contour_scale}"
            )

    @classmethod
    def build(
        cls,
        map_: AnalyticMap,
        couple: WeightedCouple,
        n: int,
        nodes: int | None = None,
        rho: float | None = None,
        *,
        two_sided: bool = False,
        scale: float = 0.5,
        tol: float = DEFAULT_EXTRACTION_TOL,
    ) -> "HomogeneousComponent":
        if nodes is None:
            if rho is not None:
                raise ValueError("nodes: required when a fixed contour radius is given")
            nodes = max(16, n + 1 + math.ceil(math.log(tol) / math.log(scale)))
        return cls(
            source=map_,
            domain=couple,
            degree=n,
            node_count=int(nodes),
            contour_radius=rho,
            contour_scale=scale,
            two_sided=two_sided,
        )

    def _anchor_norm(self, arr: np.ndarray) -> float:
        a = self.domain.norm0(arr)
        if self.two_sided:
            a = max(a, self.domain.norm1(arr))
        return a

    def _rho_for(self, arr: np.ndarray) -> float:
        anchor = self._anchor_norm(arr)
        if anchor == 0.0:
            raise ValueError("h: zero vector admits no contour")
        if self.contour_radius is not None:
            rho = self.contour_radius
        else:
            rho = self.contour_scale * self.source.radius / anchor
        if not 0.0 < rho * self.domain.norm0(arr) < self.source.radius:
            raise ValueError(
                f"contour exits the domain ball at ||h||_0 = {self.domain.norm0(arr)!r}"
            )
        return rho

    def extraction(self, h) -> Extraction:
        arr = self.domain._coerce(h)
        rho = self._rho_for(arr)
        values = _contour_values(self.source, arr, rho, self.node_count)
        twiddle = np.exp(
            -2j * np.pi * self.degree * np.arange(self.node_count) / self.node_count
        )
        total = twiddle @ values / (self.node_count * rho**self.degree)
        alias = aliasing_tail(
            self.source.c0,
            self.source.radius,
            self.domain.norm0(arr),
            self.degree,
            rho,
            self.node_count,
        )
        if self.degree == 0:
            _check_p0(self.source, total, alias, DEFAULT_ZERO_TOL)
        return Extraction(value=total, alias_bound=alias, rho=rho, nodes=self.node_count)

    def evaluate(self, h) -> np.ndarray:
        return self.extraction(h).value

    def alias_bound(self, h, side: int = 0) -> float:
        """Certified aliasing error in the H_side endpoint norm."""
        arr = self.domain._coerce(h)
        rho = self._rho_for(arr)
        if side == 0:
            c, norm = self.source.c0, self.domain.norm0(arr)
        elif side == 1:
            c, norm = self.source.c1, self.domain.norm1(arr)
        else:
            raise ValueError(f"side: must be 0 or 1, got {side}")
        return aliasing_tail(c, self.source.radius, norm, self.degree, rho, self.node_count)


class RhoDeviation(NamedTuple):
    deviation: float
    worst_ratio: float


def rho_independence_check(
    map_: AnalyticMap,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    h,
    n: int,
    rho_list: Sequence[float],
    nodes: int,
) -> RhoDeviation:
    """Max pairwise H0-distance between extractions over a list of contours.

    The exact contour integral does not depend on rho; the discrete sums
    differ only through aliasing, so every pairwise deviation must stay
    below the sum of the two alias bounds plus rounding slack.
    ``worst_ratio`` is the largest deviation/allowance over pairs.
    """
    if len(rho_list) == 0:
        raise ValueError("rho_list: must contain at least one contour radius")
    extractions = [
        extract_component(map_, e_couple, h, n, rho=r, nodes=nodes) for r in rho_list
    ]
    scale = max(float(np.linalg.norm(e.value)) for e in extractions)
    slack = 1e-11 * (1.0 + scale)
    deviation = 0.0
    worst_ratio = 0.0
    for i in range(len(extractions)):
        for j in range(i + 1, len(extractions)):
            dev = h_couple.norm0(extractions[i].value - extractions[j].value)
            allowed = extractions[i].alias_bound + extractions[j].alias_bound + slack
            deviation = max(deviation, dev)
            worst_ratio = max(worst_ratio, dev / allowed)
    return RhoDeviation(deviation=deviation, worst_ratio=worst_ratio)


def component_norm_bound(
    component: HomogeneousComponent,
    h_couple: WeightedCouple,
    samples: Iterable,
    sides: tuple[int, ...] = (0, 1),
) -> float:
    """Worst ratio of ||P_n(h)||_{H_i} to C_i(R) R^(1-n) ||h||_{E_i}^n.

    Samples must lie strictly inside the ball of each tested side; the
    ratio stays below 1 up to the extraction's aliasing slack.
    """
    src = component.source
    e_couple = component.domain
    n = component.degree
    consts = {0: src.c0, 1: src.c1}
    worst = 0.0
    for h in samples:
        arr = e_couple._coerce(h)
        norms = {0: e_couple.norm0(arr), 1: e_couple.norm1(arr)}
        for side in sides:
            if norms[side] >= src.radius:
                raise ValueError(
                    f"sample outside the E{side} ball: ||h|| = {norms[side]!r} "
                    f">= {src.radius!r}"
                )
        if min(norms[side] for side in sides) == 0.0:
            raise ValueError("sample: zero vector excluded (rhs degenerates)")
        value = component.evaluate(arr)
        for side in sides:
            h_norm = h_couple.norm0(value) if side == 0 else h_couple.norm1(value)
            rhs = consts[side] * src.radius ** (1 - n) * norms[side] ** n
            if rhs == 0.0:
                raise ValueError("rhs bound degenerate (zero ball constant)")
            worst = max(worst, h_norm / rhs)
    return worst


class SeriesTruncation(NamedTuple):
    value: np.ndarray
    tail_bound: float
    alias_total: float


def truncated_series(
    map_: AnalyticMap,
    couple: WeightedCouple,
    h,
    degree_cap: int,
    nodes: int | None = None,
    *,
    tol: float = DEFAULT_EXTRACTION_TOL,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> SeriesTruncation:
    """Partial sum of homogeneous components with a certified tail bound.

    All components up to ``degree_cap`` are extracted from one shared
    contour (a single FFT across degrees). The analytic tail obeys

        sum_{n > cap} C0 R^(1-n) ||h||_0^n
            = C0 * R * (||h||_0 / R)^(cap+1) / (1 - ||h||_0 / R),

    so ||phi(h) - value||_{H0} <= tail_bound + alias_total.
    """
    if degree_cap < 0:
        raise ValueError(f"degree_cap: must be nonnegative, got {degree_cap}")
    arr = couple._coerce(h)
    h0 = couple.norm0(arr)
    if h0 >= map_.radius:
        raise ValueError(
            f"h: must lie strictly inside the ball, ||h||_0 = {h0!r} >= {map_.radius!r}"
        )
    if h0 == 0.0:
        out = np.zeros(map_.dim, dtype=complex)
        if map_.maps_zero_to_zero:
            return SeriesTruncation(out, 0.0, 0.0)
        return SeriesTruncation(
            np.asarray(map_.evaluate(arr), dtype=complex), 0.0, 0.0
        )
    rho, nodes = _resolve_contour(map_, h0, degree_cap, None, nodes, tol)
    values = _contour_values(map_, arr, rho, nodes)
    coeffs = np.fft.fft(values, axis=0) / nodes
    ratio = h0 / map_.radius
    alias_total = 0.0
    total = np.zeros(values.shape[1], dtype=complex)
    for n in range(degree_cap + 1):
        p_n = coeffs[n] / rho**n
        alias_n = aliasing_tail(map_.c0, map_.radius, h0, n, rho, nodes)
        if n == 0:
            _check_p0(map_, p_n, alias_n, zero_tol)
        total += p_n
        alias_total += alias_n
    tail = map_.c0 * map_.radius * ratio ** (degree_cap + 1) / (1.0 - ratio)
    return SeriesTruncation(value=total, tail_bound=tail, alias_total=alias_total)
