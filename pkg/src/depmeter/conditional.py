"""Conditional nonsymmetric dependence measure for causality screening.

tau(X,Y|Z)^2 averages the per-slice bivariate measure over the conditioning
variable: it is zero exactly when X and Y are independent given Z (X, Z, Y
form a Markov chain) and attains its bound exactly when Y is a function of
(X, Z).  The bound depends on the conditional distribution of Y, so the
normalized ratio is only a rough indicator of conditional complete
dependence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bivariate import (
    FLAG_DEGENERATE_TARGET,
    MeasureReport,
    tau_max_squared,
    tau_squared,
)
from .errors import ShapeError
from .model import DiscreteSupport, JointTable, _check_prob_array


@dataclass(frozen=True)
class TripleTable:
    """m x n x l probability tensor P(i, j, k) over (X, Y, Z)."""

    p: np.ndarray
    x_support: DiscreteSupport
    y_support: DiscreteSupport
    z_support: DiscreteSupport

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        self.p.setflags(write=False)
        expect = (self.x_support.size, self.y_support.size, self.z_support.size)
        if self.p.ndim != 3 or self.p.shape != expect:
            raise ShapeError("triple tensor shape does not match supports")
        _check_prob_array(self.p, "triple tensor")

    def z_marginal(self) -> np.ndarray:
        return self.p.sum(axis=(0, 1))

    def xy_margin(self) -> JointTable:
        return JointTable(self.p.sum(axis=2), self.x_support, self.y_support)

    def slice_table(self, k: int) -> JointTable | None:
        """XY table conditioned on Z = z_k, or None when P(k) = 0."""
        pk = float(self.p[:, :, k].sum())
        if pk <= 0:
            return None
        return JointTable(self.p[:, :, k] / pk, self.x_support, self.y_support)


def tau_conditional_max(t: TripleTable) -> float:
    """P(k)-weighted average of the per-slice attainable bounds."""
    pz = t.z_marginal()
    bound = 0.0
    for k in range(t.z_support.size):
        if pz[k] <= 0:
            continue
        slice_t = t.slice_table(k)
        bound += tau_max_squared(slice_t) * pz[k]
    return bound


def tau_conditional_squared(t: TripleTable) -> MeasureReport:
    """Conditional measure of the dependence of Y on X given Z."""
    pz = t.z_marginal()
    value = 0.0
    bound = 0.0
    for k in range(t.z_support.size):
        if pz[k] <= 0:
            continue
        slice_t = t.slice_table(k)
        rep = tau_squared(slice_t)
        value += rep.value * pz[k]
        bound += (rep.upper_bound or 0.0) * pz[k]
    flags = (FLAG_DEGENERATE_TARGET,) if bound <= 0 else ()
    return MeasureReport.bounded("tau2", value, bound, flags=flags)


def tau_conditional(t: TripleTable) -> float:
    """The measure itself (square root of the squared form)."""
    return float(np.sqrt(max(tau_conditional_squared(t).value, 0.0)))
