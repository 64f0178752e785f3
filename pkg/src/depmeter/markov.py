"""Transition-matrix algebra and the Data Processing Inequality harness.

The conditional matrix P(j|i) of a joint table is a row-stochastic
(transition) matrix; composing two of them by ordinary matrix product gives
the two-step transition matrix of a Markov chain.  For any convex-phi
measure, dependence on the far end of a chain can never exceed dependence on
the near end; ``check_dpi`` verifies that on concrete chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bivariate import ConvexPhi, phi_measure
from .errors import ShapeError, ValidationError
from .model import EPS_NORM, DiscreteSupport, JointTable, ProbVector


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix of conditionals P(j|i).

    Rows conditioned on a zero-probability source state are all zero and are
    excluded from the stochasticity check (``zero_rows`` lists them).
    """

    rows: np.ndarray
    x_support: DiscreteSupport
    y_support: DiscreteSupport

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", np.asarray(self.rows, dtype=float))
        self.rows.setflags(write=False)
        if self.rows.ndim != 2 or self.rows.shape != (
            self.x_support.size,
            self.y_support.size,
        ):
            raise ShapeError("transition matrix shape does not match supports")
        if np.any(self.rows < 0):
            raise ValidationError("transition matrix has negative entries")
        sums = self.rows.sum(axis=1)
        live = ~np.isclose(sums, 0.0, atol=EPS_NORM)
        if np.any(np.abs(sums[live] - 1.0) > 1e-8):
            raise ValidationError("transition matrix rows do not sum to 1")

    @property
    def zero_rows(self) -> tuple[int, ...]:
        sums = self.rows.sum(axis=1)
        return tuple(int(i) for i in np.nonzero(sums <= EPS_NORM)[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape


def transition_from_joint(t: JointTable) -> TransitionMatrix:
    """Row-normalize a joint table; zero-marginal rows stay all zero."""
    px = t.x_marginal()
    rows = np.zeros_like(t.p)
    pos = px > 0
    rows[pos] = t.p[pos] / px[pos, None]
    return TransitionMatrix(rows, t.x_support, t.y_support)


def compose(a: TransitionMatrix, b: TransitionMatrix) -> TransitionMatrix:
    """Two-step transition matrix M_XZ = M_XY . M_YZ."""
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot compose {a.shape} with {b.shape}: inner dimensions differ"
        )
    return TransitionMatrix(a.rows @ b.rows, a.x_support, b.y_support)


@dataclass(frozen=True)
class MarkovChain3:
    """Three-variable chain X -> Y -> Z given by P(X) and two transitions."""

    source_marginal: ProbVector
    m_xy: TransitionMatrix
    m_yz: TransitionMatrix

    def __post_init__(self) -> None:
        if self.source_marginal.p.shape[0] != self.m_xy.shape[0]:
            raise ShapeError("source marginal does not match M_XY rows")
        if self.m_xy.shape[1] != self.m_yz.shape[0]:
            raise ShapeError("M_XY columns do not match M_YZ rows")

    def y_marginal(self) -> np.ndarray:
        return self.source_marginal.p @ self.m_xy.rows

    def z_marginal(self) -> np.ndarray:
        return self.y_marginal() @ self.m_yz.rows


def joint_from_chain(c: MarkovChain3, endpoints: str) -> JointTable:
    """Joint table of a pair of chain variables: 'xy', 'yz', or 'xz'."""
    px = c.source_marginal.p
    if endpoints == "xy":
        p = px[:, None] * c.m_xy.rows
        return JointTable(p, c.m_xy.x_support, c.m_xy.y_support)
    if endpoints == "yz":
        py = c.y_marginal()
        p = py[:, None] * c.m_yz.rows
        return JointTable(p, c.m_yz.x_support, c.m_yz.y_support)
    if endpoints == "xz":
        m_xz = compose(c.m_xy, c.m_yz)
        p = px[:, None] * m_xz.rows
        return JointTable(p, m_xz.x_support, m_xz.y_support)
    raise ValidationError(f"unknown endpoints {endpoints!r}")


@dataclass(frozen=True)
class DpiReport:
    """Forward and reverse data-processing-inequality check on one chain."""

    tau_xz: float
    tau_yz: float
    holds: bool
    slack: float
    tau_zx: float
    tau_yx: float
    reverse_holds: bool
    reverse_slack: float

    def to_dict(self) -> dict:
        return {
            "tau_xz": self.tau_xz,
            "tau_yz": self.tau_yz,
            "holds": self.holds,
            "slack": self.slack,
            "tau_zx": self.tau_zx,
            "tau_yx": self.tau_yx,
            "reverse_holds": self.reverse_holds,
            "reverse_slack": self.reverse_slack,
        }


DPI_TOL = 1e-10


def check_dpi(c: MarkovChain3, phi: ConvexPhi) -> DpiReport:
    """Verify tau(X,Z) <= tau(Y,Z) and the reverse chain tau(Z,X) <= tau(Y,X)."""
    t_xy = joint_from_chain(c, "xy")
    t_yz = joint_from_chain(c, "yz")
    t_xz = joint_from_chain(c, "xz")
    tau_xz = phi_measure(t_xz, phi)
    tau_yz = phi_measure(t_yz, phi)
    tau_zx = phi_measure(t_xz.transpose(), phi)
    tau_yx = phi_measure(t_xy.transpose(), phi)
    return DpiReport(
        tau_xz=tau_xz,
        tau_yz=tau_yz,
        holds=tau_xz <= tau_yz + DPI_TOL,
        slack=tau_yz - tau_xz,
        tau_zx=tau_zx,
        tau_yx=tau_yx,
        reverse_holds=tau_zx <= tau_yx + DPI_TOL,
        reverse_slack=tau_yx - tau_zx,
    )
