"""Discrete joint distributions and their cumulative-distribution primitives.

Everything downstream (the dependence measures, the Markov algebra, the
conditional measure) consumes the types defined here.  All types are frozen
after construction and all functions are pure, so concurrent reads are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CellBudgetExceeded,
    EmptyData,
    OrderingError,
    ShapeError,
    ValidationError,
)

# Tolerance for "sums to one" checks on ingested probabilities.  Input outside
# this tolerance is rejected, never silently renormalized.
EPS_NORM = 1e-9

# Dense tensors larger than this are rejected rather than allowed to thrash.
DEFAULT_CELL_BUDGET = 10**8

ORDERING_POLICIES = ("numeric", "lex", "given")


def compensated_cumsum(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Cumulative sum with Kahan error compensation along ``axis``.

    Keeps cumulative distributions monotone and their final entry at 1 well
    within 1e-12 even for tens of thousands of terms.
    """
    a = np.asarray(a, dtype=float)
    a = np.moveaxis(a, axis, 0)
    out = np.empty_like(a)
    total = np.zeros(a.shape[1:], dtype=float)
    comp = np.zeros(a.shape[1:], dtype=float)
    for k in range(a.shape[0]):
        y = a[k] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[k] = total
    return np.moveaxis(out, 0, axis)


def _parse_numeric(label: str) -> float:
    try:
        v = float(label)
    except (TypeError, ValueError):
        raise OrderingError(f"label {label!r} is not numeric")
    if not math.isfinite(v):
        raise OrderingError(f"label {label!r} is not a finite number")
    return v


@dataclass(frozen=True)
class DiscreteSupport:
    """Ordered category labels for one discrete variable.

    The ordering is load-bearing: the cumulative distributions that every
    measure consumes are taken over this order.  ``numeric`` sorts labels by
    their parsed real value (the default, matching the continuous analogue),
    ``lex`` sorts lexicographically, ``given`` keeps the caller's order.
    """

    labels: tuple[str, ...]
    ordering_policy: str = "numeric"

    def __post_init__(self) -> None:
        if self.ordering_policy not in ORDERING_POLICIES:
            raise ValidationError(
                f"unknown ordering policy {self.ordering_policy!r}"
            )
        if len(self.labels) < 1:
            raise ValidationError("support must contain at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("support labels must be unique")
        if self.ordering_policy == "numeric":
            vals = [_parse_numeric(lbl) for lbl in self.labels]
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise OrderingError(
                    "labels are not strictly increasing numerically"
                )

    @classmethod
    def from_labels(
        cls, labels: Iterable[object], ordering_policy: str = "numeric"
    ) -> "DiscreteSupport":
        """Build a support from raw labels, sorting per the policy."""
        distinct = list(dict.fromkeys(str(x) for x in labels))
        if ordering_policy == "numeric":
            distinct.sort(key=_parse_numeric)
        elif ordering_policy == "lex":
            distinct.sort()
        elif ordering_policy not in ORDERING_POLICIES:
            raise ValidationError(f"unknown ordering policy {ordering_policy!r}")
        return cls(tuple(distinct), ordering_policy)

    @property
    def size(self) -> int:
        return len(self.labels)

    def numeric_values(self) -> list[float]:
        return [_parse_numeric(lbl) for lbl in self.labels]

    def index(self, label: str) -> int:
        return self.labels.index(label)


def _check_prob_array(p: np.ndarray, what: str) -> None:
    if np.any(p < 0):
        raise ValidationError(f"{what} has negative entries")
    total = math.fsum(p.ravel().tolist())
    if abs(total - 1.0) > EPS_NORM:
        raise ValidationError(
            f"{what} sums to {total!r}, outside tolerance {EPS_NORM}"
        )


@dataclass(frozen=True)
class ProbVector:
    """Probability vector over one support."""

    p: np.ndarray
    support: DiscreteSupport

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        self.p.setflags(write=False)
        if self.p.ndim != 1 or self.p.shape[0] != self.support.size:
            raise ShapeError("probability vector does not match its support")
        _check_prob_array(self.p, "probability vector")

    def cdf(self) -> np.ndarray:
        return compensated_cumsum(self.p)


@dataclass(frozen=True)
class JointTable:
    """m x n joint probability matrix with its two supports.

    Rows index the conditioning variable X, columns the target variable Y.
    """

    p: np.ndarray
    x_support: DiscreteSupport
    y_support: DiscreteSupport

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        self.p.setflags(write=False)
        if self.p.ndim != 2:
            raise ShapeError("joint table must be a 2-d matrix")
        if self.p.shape != (self.x_support.size, self.y_support.size):
            raise ShapeError("joint table shape does not match supports")
        _check_prob_array(self.p, "joint table")

    @property
    def shape(self) -> tuple[int, int]:
        return self.p.shape

    def x_marginal(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def y_marginal(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def transpose(self) -> "JointTable":
        """Swap the roles of X and Y."""
        return JointTable(self.p.T.copy(), self.y_support, self.x_support)


@dataclass(frozen=True)
class CondCdf:
    """Conditional cdf matrix F(j|i) together with the marginal cdf F(j).

    Rows whose conditioning probability is zero are all-zero by convention
    and carry no weight in any measure.
    """

    f: np.ndarray
    marginal_cdf: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", np.asarray(self.f, dtype=float))
        object.__setattr__(
            self, "marginal_cdf", np.asarray(self.marginal_cdf, dtype=float)
        )
        self.f.setflags(write=False)
        self.marginal_cdf.setflags(write=False)
        if self.f.ndim != 2 or self.f.shape[1] != self.marginal_cdf.shape[0]:
            raise ShapeError("conditional cdf shape mismatch")


@dataclass(frozen=True)
class MultiTable:
    """Dense probability tensor over d X-axes followed by e Y-axes."""

    p: np.ndarray
    x_axes: tuple[DiscreteSupport, ...]
    y_axes: tuple[DiscreteSupport, ...]
    cell_budget: int = field(default=DEFAULT_CELL_BUDGET, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        object.__setattr__(self, "x_axes", tuple(self.x_axes))
        object.__setattr__(self, "y_axes", tuple(self.y_axes))
        self.p.setflags(write=False)
        if len(self.x_axes) < 1 or len(self.y_axes) < 1:
            raise ShapeError("need at least one X axis and one Y axis")
        expect = tuple(s.size for s in self.x_axes) + tuple(
            s.size for s in self.y_axes
        )
        if self.p.shape != expect:
            raise ShapeError(
                f"tensor shape {self.p.shape} does not match axes {expect}"
            )
        if self.p.size > self.cell_budget:
            raise CellBudgetExceeded(
                f"tensor has {self.p.size} cells, budget is {self.cell_budget}"
            )
        _check_prob_array(self.p, "probability tensor")

    @property
    def d(self) -> int:
        return len(self.x_axes)

    @property
    def e(self) -> int:
        return len(self.y_axes)

    @property
    def x_shape(self) -> tuple[int, ...]:
        return self.p.shape[: self.d]

    @property
    def y_shape(self) -> tuple[int, ...]:
        return self.p.shape[self.d :]

    def x_marginal(self) -> np.ndarray:
        return self.p.sum(axis=tuple(range(self.d, self.d + self.e)))

    def y_marginal(self) -> np.ndarray:
        return self.p.sum(axis=tuple(range(self.d)))

    def as_joint(self) -> JointTable:
        """Reduce to a JointTable; only valid when d = e = 1."""
        if self.d != 1 or self.e != 1:
            raise ShapeError("as_joint requires exactly one axis per group")
        return JointTable(self.p.copy(), self.x_axes[0], self.y_axes[0])


def from_counts(
    counts: Sequence[Sequence[float]] | np.ndarray,
    x_support: DiscreteSupport,
    y_support: DiscreteSupport,
) -> JointTable:
    """Empirical plug-in table: normalize a co-occurrence count matrix."""
    c = np.asarray(counts, dtype=float)
    if c.ndim != 2 or c.shape != (x_support.size, y_support.size):
        raise ShapeError("count matrix shape does not match supports")
    if np.any(c < 0):
        raise ValidationError("counts must be non-negative")
    total = c.sum()
    if total == 0:
        raise EmptyData("all counts are zero")
    return JointTable(c / total, x_support, y_support)


def from_samples(
    records: Sequence[tuple[object, object]],
    ordering_policy: str = "numeric",
) -> JointTable:
    """Build an empirical joint table from (x, y) observation pairs."""
    records = list(records)
    if not records:
        raise EmptyData("no observations")
    xs = [str(r[0]) for r in records]
    ys = [str(r[1]) for r in records]
    x_support = DiscreteSupport.from_labels(xs, ordering_policy)
    y_support = DiscreteSupport.from_labels(ys, ordering_policy)
    xi = {lbl: i for i, lbl in enumerate(x_support.labels)}
    yi = {lbl: j for j, lbl in enumerate(y_support.labels)}
    counts = np.zeros((x_support.size, y_support.size))
    for x, y in zip(xs, ys):
        counts[xi[x], yi[y]] += 1
    return from_counts(counts, x_support, y_support)


def conditional_cdf(t: JointTable) -> CondCdf:
    """Conditional cdf F(j|i) = sum_{j' <= j} P(j'|i), zero rows for P(i)=0."""
    px = t.x_marginal()
    cum = compensated_cumsum(t.p, axis=1)
    f = np.zeros_like(cum)
    pos = px > 0
    f[pos] = cum[pos] / px[pos, None]
    marginal = compensated_cumsum(t.y_marginal())
    return CondCdf(f, marginal)


def multi_conditional_cdf(t: MultiTable) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise-cumulative conditional cdf tensor and Y-marginal cdf.

    Returns ``(f, marginal)`` where ``f`` has the tensor's full shape with
    entry F(j_vec | i_vec) and ``marginal`` has the Y-shape with entry
    F(j_vec).  Cells conditioned on a zero-probability X-cell are zero.
    """
    cum = t.p
    for ax in range(t.d, t.d + t.e):
        cum = compensated_cumsum(cum, axis=ax)
    px = t.x_marginal()
    f = np.zeros_like(cum)
    pos = px > 0
    # broadcast the X-marginal over the Y axes
    f[pos] = cum[pos] / px[pos][(...,) + (None,) * t.e]
    marginal = t.y_marginal()
    for ax in range(t.e):
        marginal = compensated_cumsum(marginal, axis=ax)
    return f, marginal
