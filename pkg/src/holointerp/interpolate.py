"""Interpolated bounds and verification sweeps against oracle constants.

Two bound families are computed and checked empirically. For a map
homogeneous of degree k with endpoint bounds M0, M1 the interpolated
bound is the geometric mean M0^(1-theta) M1^theta; for an analytic map on
a ball of radius R with ball bounds C0(R), C1(R) the interpolated bound
on the smaller ball of radius r < R carries the series factor R/(R-r).
Sweeps draw deterministic extremal candidates (basis vectors and their
pairwise sums, the maximizers for the diagonal oracles) plus seeded
random samples, and report per-sample ratios of measured norm to bound.
Reports built on empirically estimated constants are advisory: an
underestimated supremum can falsify a true bound, so pass/fail gating
requires oracle or declared constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .analytic import HomogeneousComponent
from .spaces import ThetaNorm, WeightedCouple
from .strip import homogeneous_degree_of

__all__ = [
    "BoundSpec",
    "ReportRow",
    "VerificationReport",
    "BallSampler",
    "EstimatedConstants",
    "default_theta_grid",
    "lemma_bound",
    "theorem1_bound",
    "lemma_rows",
    "theorem1_rows",
    "build_report",
    "verify_lemma",
    "verify_theorem1",
    "estimate_constants",
    "REPORT_SCHEMA",
    "CSV_HEADER",
    "format_row",
]

REPORT_SCHEMA = "report/v1"
CSV_HEADER = "theta,sample_id,lhs_norm,rhs_bound,ratio"

PROVENANCES = ("oracle", "declared", "empirical")


def default_theta_grid() -> list[float]:
    """Grid {0, 0.1, ..., 1.0} plus 1/3 and 1/2 for irrational exponents."""
    grid = {i / 10 for i in range(11)}
    grid.update({1.0 / 3.0, 0.5})
    return sorted(grid)


@dataclass(frozen=True)
class BoundSpec:
    """Constants of one bound: endpoint constants, ball radii, theta, degree."""

    c0: float
    c1: float
    theta: float = 0.0
    radius: float | None = None
    inner_radius: float | None = None
    degree: int | None = None

    def __post_init__(self):
        if not (self.c0 > 0 and math.isfinite(self.c0)):
            raise ValueError(f"c0: must be a positive finite constant, got {self.c0}")
        if not (self.c1 > 0 and math.isfinite(self.c1)):
            raise ValueError(f"c1: must be a positive finite constant, got {self.c1}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta: must lie in [0, 1], got {self.theta}")
        if (self.radius is None) != (self.inner_radius is None):
            raise ValueError("radius and inner_radius must be given together")
        if self.radius is not None:
            if not 0.0 < self.inner_radius < self.radius:
                raise ValueError(
                    f"inner_radius: need 0 < r < R, got r={self.inner_radius}, "
                    f"R={self.radius}"
                )
        if self.degree is not None and self.degree < 0:
            raise ValueError(f"degree: must be nonnegative, got {self.degree}")

    def at(self, theta: float) -> "BoundSpec":
        return replace(self, theta=theta)


def lemma_bound(spec: BoundSpec) -> float:
    """Interpolated homogeneous bound M0^(1-theta) M1^theta."""
    if spec.degree is None:
        raise ValueError("degree: required for the homogeneous bound")
    return spec.c0 ** (1.0 - spec.theta) * spec.c1**spec.theta


def theorem1_bound(spec: BoundSpec) -> float:
    """Interpolated ball bound C0^(1-theta) C1^theta R / (R - r)."""
    if spec.radius is None:
        raise ValueError("radius, inner_radius: required for the ball bound")
    geo = spec.c0 ** (1.0 - spec.theta) * spec.c1**spec.theta
    return geo * spec.radius / (spec.radius - spec.inner_radius)


class ReportRow(NamedTuple):
    theta: float
    sample_id: int
    lhs_norm: float
    rhs_bound: float
    ratio: float


def format_row(row: ReportRow) -> str:
    """CSV line with shortest round-trip float formatting (deterministic)."""
    return (
        f"{row.theta!r},{row.sample_id},{row.lhs_norm!r},"
        f"{row.rhs_bound!r},{row.ratio!r}"
    )


@dataclass(frozen=True)
class VerificationReport:
    """Per-sample bound ratios with worst case, tolerance, and provenance."""

    rows: tuple[ReportRow, ...]
    worst_ratio: float
    tolerance: float
    constants_provenance: str

    def __post_init__(self):
        if self.constants_provenance not in PROVENANCES:
            raise ValueError(
                f"constants_provenance: expected one of {PROVENANCES}, "
                f"got {self.constants_provenance!r}"
            )

    @property
    def advisory(self) -> bool:
        return self.constants_provenance == "empirical"

    @property
    def passed(self) -> bool | None:
        """True/False for certifying reports; None (no verdict) for advisory."""
        if self.advisory:
            return None
        return self.worst_ratio <= 1.0 + self.tolerance

    def to_json_dict(self, with_rows: bool = True) -> dict:
        doc = {
            "schema": REPORT_SCHEMA,
            "worst_ratio": self.worst_ratio,
            "pass": self.passed,
            "advisory": self.advisory,
            "tolerance": self.tolerance,
            "constants_provenance": self.constants_provenance,
            "row_count": len(self.rows),
        }
        if with_rows:
            doc["rows"] = [list(r) for r in self.rows]
        return doc


def build_report(
    rows: Sequence[ReportRow], tolerance: float, provenance: str
) -> VerificationReport:
    if len(rows) == 0:
        raise ValueError("rows: empty sweep (no grid points or samples)")
    ordered = tuple(sorted(rows, key=lambda r: (r.theta, r.sample_id)))
    worst = max(r.ratio for r in ordered)
    return VerificationReport(
        rows=ordered,
        worst_ratio=worst,
        tolerance=tolerance,
        constants_provenance=provenance,
    )


@dataclass(frozen=True)
class BallSampler:
    """Seeded sample source: deterministic extremals plus complex Gaussians.

    Deterministic samples (all basis vectors, then their pairwise sums)
    are scaled to the full ball radius in the theta-norm under test;
    random samples get a uniformly random norm fraction. The random
    stream for sample s at grid index i is seeded by (seed, i, s), so
    results are independent of scheduling order.
    """

    couple: WeightedCouple
    seed: int = 0
    radius: float = 1.0
    include_deterministic: bool = True

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius: must be positive, got {self.radius}")
        if self.seed < 0:
            raise ValueError(f"seed: must be a nonnegative integer, got {self.seed}")

    def deterministic_count(self) -> int:
        if not self.include_deterministic:
            return 0
        n = self.couple.dim
        return n + n * (n - 1) // 2

    def _deterministic_directions(self) -> Iterator[np.ndarray]:
        n = self.couple.dim
        eye = np.eye(n, dtype=complex)
        for k in range(n):
            yield eye[k]
        for i in range(n):
            for j in range(i + 1, n):
                yield eye[i] + eye[j]

    def draw(
        self, random_count: int, theta: float, theta_idx: int
    ) -> Iterator[tuple[int, np.ndarray]]:
        """Yield (sample_id, x) with ||x||_theta <= radius, x != 0."""
        if random_count < 0:
            raise ValueError(f"random_count: must be >= 0, got {random_count}")
        norm = ThetaNorm.from_couple(self.couple, theta)
        sample_id = 0
        if self.include_deterministic:
            for d in self._deterministic_directions():
                yield sample_id, d * (self.radius / norm(d))
                sample_id += 1
        for s in range(random_count):
            rng = np.random.default_rng([self.seed, theta_idx, s])
            z = rng.standard_normal(self.couple.dim) + 1j * rng.standard_normal(
                self.couple.dim
            )
            fraction = 1.0 - rng.uniform()
            yield sample_id, z * (fraction * self.radius / norm(z))
            sample_id += 1


def _default_tolerance(phi) -> float:
    # extraction-backed maps carry aliasing slack on top of analytic slack
    return 1e-6 if isinstance(phi, HomogeneousComponent) else 1e-9


def lemma_rows(
    phi,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    m0: float,
    m1: float,
    theta: float,
    theta_idx: int,
    sampler: BallSampler,
    samples: int,
) -> list[ReportRow]:
    """Ratios ||phi(x)||_{H_theta} / (M0^(1-t) M1^t ||x||_theta^k) at one theta."""
    degree = homogeneous_degree_of(phi)
    bound = lemma_bound(
        BoundSpec(c0=m0, c1=m1, theta=theta, degree=degree)
    )
    norm_e = ThetaNorm.from_couple(e_couple, theta)
    norm_h = ThetaNorm.from_couple(h_couple, theta)
    rows = []
    for sample_id, x in sampler.draw(samples, theta, theta_idx):
        rhs = bound * norm_e(x) ** degree
        if rhs == 0.0:
            raise ValueError("sampler yielded a zero vector (rhs degenerate)")
        lhs = norm_h(phi.evaluate(x))
        rows.append(ReportRow(theta, sample_id, lhs, rhs, lhs / rhs))
    return rows


def theorem1_rows(
    map_,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    spec: BoundSpec,
    theta: float,
    theta_idx: int,
    sampler: BallSampler,
    samples: int,
) -> list[ReportRow]:
    """Ratios ||phi(x)||_{H_theta} / (bound * ||x||_theta) on the theta-ball."""
    bound = theorem1_bound(spec.at(theta))
    norm_e = ThetaNorm.from_couple(e_couple, theta)
    norm_h = ThetaNorm.from_couple(h_couple, theta)
    r = spec.inner_radius
    rows = []
    for sample_id, x in sampler.draw(samples, theta, theta_idx):
        x_norm = norm_e(x)
        if x_norm > r * (1.0 + 1e-9):
            raise ValueError(
                f"sample outside the theta-ball: ||x||_theta = {x_norm!r} > r = {r!r}"
            )
        if x_norm == 0.0:
            raise ValueError("sampler yielded a zero vector (ratio degenerate)")
        lhs = norm_h(map_.evaluate(x))
        rhs = bound * x_norm
        rows.append(ReportRow(theta, sample_id, lhs, rhs, lhs / rhs))
    return rows


def _validate_grid(theta_grid) -> list[float]:
    grid = [float(t) for t in theta_grid]
    if len(grid) == 0:
        raise ValueError("theta_grid: must be nonempty")
    for t in grid:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"theta_grid: value {t} outside [0, 1]")
    return grid


def verify_lemma(
    phi,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    m0: float,
    m1: float,
    theta_grid=None,
    sampler: BallSampler | None = None,
    samples: int = 1000,
    tolerance: float | None = None,
    provenance: str = "oracle",
    seed: int = 0,
) -> VerificationReport:
    """Sweep the homogeneous interpolated bound over a theta grid.

    ``phi`` is an exact homogeneous map or an extraction-backed
    HomogeneousComponent (which widens the default tolerance to absorb
    aliasing slack). M0, M1 must be valid endpoint constants; a report
    with empirical provenance is advisory.
    """
    if not (m0 > 0 and m1 > 0 and math.isfinite(m0) and math.isfinite(m1)):
        raise ValueError(f"m0, m1: invalid endpoint constants {m0}, {m1}")
    grid = _validate_grid(default_theta_grid() if theta_grid is None else theta_grid)
    if sampler is None:
        sampler = BallSampler(e_couple, seed=seed)
    if tolerance is None:
        tolerance = _default_tolerance(phi)
    rows: list[ReportRow] = []
    for idx, theta in enumerate(grid):
        rows.extend(
            lemma_rows(phi, e_couple, h_couple, m0, m1, theta, idx, sampler, samples)
        )
    return build_report(rows, tolerance, provenance)


def verify_theorem1(
    map_,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    spec: BoundSpec,
    theta_grid=None,
    sampler: BallSampler | None = None,
    samples: int = 1000,
    tolerance: float | None = None,
    provenance: str = "declared",
    seed: int = 0,
) -> VerificationReport:
    """Sweep the analytic-map ball bound over a theta grid.

    Requires the couple in normalized position (embedding constant 1), so
    that the theta-ball of radius r sits inside the E0 ball where the
    map's series expansion is certified.
    """
    if spec.radius is None:
        raise ValueError("spec: radius and inner_radius required")
    if abs(e_couple.embed_const - 1.0) > 1e-12:
        raise ValueError(
            f"e_couple: embedding constant {e_couple.embed_const!r} != 1; "
            "apply normalize_couple first (constants change accordingly)"
        )
    declared_radius = getattr(map_, "radius", None)
    if declared_radius is not None and declared_radius < spec.radius * (1 - 1e-12):
        raise ValueError(
            f"map: declared analyticity radius {declared_radius!r} smaller than "
            f"spec radius {spec.radius!r}"
        )
    grid = _validate_grid(default_theta_grid() if theta_grid is None else theta_grid)
    if sampler is None:
        sampler = BallSampler(e_couple, seed=seed, radius=spec.inner_radius)
    if tolerance is None:
        tolerance = 1e-9
    rows: list[ReportRow] = []
    for idx, theta in enumerate(grid):
        rows.extend(
            theorem1_rows(map_, e_couple, h_couple, spec, theta, idx, sampler, samples)
        )
    return build_report(rows, tolerance, provenance)


class EstimatedConstants(NamedTuple):
    c0: float
    c1: float
    provenance: str


def estimate_constants(
    map_,
    e_couple: WeightedCouple,
    h_couple: WeightedCouple,
    radius: float,
    sampler: BallSampler | None = None,
    budget: int = 1000,
    seed: int = 0,
) -> EstimatedConstants:
    """Empirical lower estimates of the ball constants by sampled suprema.

    The returned values are suprema over finitely many samples and hence
    lower bounds of the true constants; reports built on them never
    certify and are labeled advisory.
    """
    if budget < 1:
        raise ValueError(f"budget: must be >= 1, got {budget}")
    if sampler is None:
        sampler = BallSampler(e_couple, seed=seed, radius=radius)
    estimates = []
    for side, theta in ((0, 0.0), (1, 1.0)):
        norm_e = e_couple.norm0 if side == 0 else e_couple.norm1
        norm_h = h_couple.norm0 if side == 0 else h_couple.norm1
        best = 0.0
        for _, x in sampler.draw(budget, theta, side):
            best = max(best, norm_h(map_.evaluate(x)) / norm_e(x))
        estimates.append(best)
    return EstimatedConstants(estimates[0], estimates[1], "empirical")
