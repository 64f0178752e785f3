"""Group-on-group dependence measures over probability tensors.

The bivariate measures generalize directly: conditional and marginal cdfs
become componentwise-cumulative tensors, the transition matrix becomes a
conditional tensor, and composition becomes a tensor contraction over the
middle group's axes (matrix product after lexicographic flattening).  Every
operation reduces exactly to its bivariate counterpart when each group has
a single axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bivariate import (
    FLAG_DEGENERATE_TARGET,
    ConvexPhi,
    MeasureReport,
)
from .errors import AlphaOutOfRange, ShapeError
from .model import (
    DiscreteSupport,
    MultiTable,
    compensated_cumsum,
    multi_conditional_cdf,
)


def _weights(t: MultiTable) -> tuple[np.ndarray, np.ndarray]:
    return t.x_marginal(), t.y_marginal()


def _outer_weighted_sum(
    terms: np.ndarray, px: np.ndarray, py: np.ndarray
) -> float:
    """sum over (i_vec, j_vec) of terms * P(i_vec) * P(j_vec)."""
    flat = terms.reshape(px.size, py.size)
    return float(px @ flat @ py)


def _flatten(t: MultiTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    px = t.x_marginal().ravel()
    py = t.y_marginal().ravel()
    return t.p.reshape(px.size, py.size), px, py


def tau_max_mv(t: MultiTable) -> float:
    """Attainable upper bound of the group measure; Y-marginal only."""
    _, marginal = multi_conditional_cdf(t)
    py = t.y_marginal()
    bound = 6.0 * float(np.sum((marginal - marginal * marginal) * py))
    return max(bound, 0.0)


def tau_squared_mv(t: MultiTable) -> MeasureReport:
    """Distance-form measure of the dependence of group Y on group X."""
    f, marginal = multi_conditional_cdf(t)
    px, py = _weights(t)
    diff = f - marginal[(None,) * t.d]
    value = 6.0 * _outer_weighted_sum(diff * diff, px.ravel(), py.ravel())
    bound = tau_max_mv(t)
    flags = (FLAG_DEGENERATE_TARGET,) if bound <= 0 else ()
    return MeasureReport.bounded("tau2", value, bound, flags=flags)


def phi_mv(t: MultiTable, phi: ConvexPhi) -> float:
    """Generic convex-phi form over tensors."""
    f, marginal = multi_conditional_cdf(t)
    px, py = _weights(t)
    diff = f - marginal[(None,) * t.d]
    return _outer_weighted_sum(phi(diff), px.ravel(), py.ravel())


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 2.0):
        raise AlphaOutOfRange(f"alpha must lie in (0, 2), got {alpha}")


def _ratio_power_sum(t: MultiTable, alpha: float) -> float:
    f, marginal = multi_conditional_cdf(t)
    px, py = _weights(t)
    pyf = py.ravel()
    ff = f.reshape(px.size, pyf.size)
    mf = marginal.ravel()
    ratio = np.zeros_like(ff)
    cols = pyf > 0
    ratio[:, cols] = ff[:, cols] / mf[None, cols]
    return float(px.ravel() @ (ratio**alpha) @ pyf)


def _entropy_upper_sum(t: MultiTable, alpha: float) -> float:
    _, marginal = multi_conditional_cdf(t)
    py = t.y_marginal().ravel()
    mf = marginal.ravel()
    mask = py > 0
    return float(np.sum(mf[mask] ** (1.0 - alpha) * py[mask]))


def renyi_mv(t: MultiTable, alpha: float) -> MeasureReport:
    _check_alpha(alpha)
    if alpha == 1.0:
        return limit_mv(t)
    value = math.log(_ratio_power_sum(t, alpha)) / (alpha - 1.0)
    value = max(value, 0.0) if value > -1e-12 else value
    bound = math.log(_entropy_upper_sum(t, alpha)) / (alpha - 1.0)
    return MeasureReport.bounded("renyi", value, bound, alpha=alpha)


def tsallis_mv(t: MultiTable, alpha: float) -> MeasureReport:
    _check_alpha(alpha)
    if alpha == 1.0:
        return limit_mv(t)
    value = (_ratio_power_sum(t, alpha) - 1.0) / (alpha - 1.0)
    value = max(value, 0.0) if value > -1e-12 else value
    bound = (_entropy_upper_sum(t, alpha) - 1.0) / (alpha - 1.0)
    return MeasureReport.bounded("tsallis", value, bound, alpha=alpha)


def limit_mv(t: MultiTable) -> MeasureReport:
    f, marginal = multi_conditional_cdf(t)
    px = t.x_marginal().ravel()
    py = t.y_marginal().ravel()
    ff = f.reshape(px.size, py.size)
    mf = marginal.ravel()
    cols = py > 0
    ratio = np.zeros_like(ff)
    ratio[:, cols] = ff[:, cols] / mf[None, cols]
    terms = np.zeros_like(ratio)
    pos = ratio > 0
    terms[pos] = ratio[pos] * np.log(ratio[pos])
    value = float(px @ terms @ py)
    value = max(value, 0.0) if value > -1e-12 else value
    mask = py > 0
    bound = -float(np.sum(np.log(mf[mask]) * py[mask]))
    return MeasureReport.bounded("limit", value, bound)


def compute_mv(
    t: MultiTable,
    measure_id: str,
    alpha: float | None = None,
    phi: ConvexPhi | None = None,
) -> MeasureReport:
    """Dispatch a group measure by its stable identifier."""
    from .errors import ValidationError

    if measure_id == "tau2":
        return tau_squared_mv(t)
    if measure_id == "phi":
        return MeasureReport("phi", phi_mv(t, phi or ConvexPhi.square()))
    if measure_id == "renyi":
        if alpha is None:
            raise ValidationError("renyi requires an alpha value")
        return renyi_mv(t, alpha)
    if measure_id == "tsallis":
        if alpha is None:
            raise ValidationError("tsallis requires an alpha value")
        return tsallis_mv(t, alpha)
    if measure_id == "limit":
        return limit_mv(t)
    raise ValidationError(
        f"measure {measure_id!r} is not defined for grouped (multivariate) input"
    )


def compose_mv(m1: np.ndarray, d: int, m2: np.ndarray, e: int) -> np.ndarray:
    """Generalized transition product P(k_vec|i_vec) = sum_j P(k|j) P(j|i).

    ``m1`` has d source axes then e middle axes; ``m2`` has e middle axes
    then the destination axes.  Contraction over the middle axes equals a
    matrix product of the lexicographically flattened matrices.
    """
    if m1.shape[d:] != m2.shape[:e]:
        raise ShapeError(
            f"middle axes mismatch: {m1.shape[d:]} vs {m2.shape[:e]}"
        )
    return np.tensordot(m1, m2, axes=e)


@dataclass(frozen=True)
class GroupChain:
    """Markov chain over three variable groups: X -> Y -> Z.

    ``source`` is the probability tensor of the X group; the conditional
    tensors are normalized over their destination axes for every source
    cell.
    """

    source: np.ndarray
    cond_xy: np.ndarray
    cond_yz: np.ndarray
    x_axes: tuple[DiscreteSupport, ...]
    y_axes: tuple[DiscreteSupport, ...]
    z_axes: tuple[DiscreteSupport, ...]

    def __post_init__(self) -> None:
        d, e = len(self.x_axes), len(self.y_axes)
        if self.source.shape != self.cond_xy.shape[:d]:
            raise ShapeError("source tensor does not match cond_xy source axes")
        if self.cond_xy.shape[d:] != self.cond_yz.shape[:e]:
            raise ShapeError("cond_xy destination axes do not match cond_yz")

    def joint(self, endpoints: str) -> MultiTable:
        d, e = len(self.x_axes), len(self.y_axes)
        if endpoints == "xy":
            p = self.source[(...,) + (None,) * e] * self.cond_xy
            return MultiTable(p, self.x_axes, self.y_axes)
        if endpoints == "yz":
            py = np.tensordot(self.source, self.cond_xy, axes=d)
            g = len(self.z_axes)
            p = py[(...,) + (None,) * g] * self.cond_yz
            return MultiTable(p, self.y_axes, self.z_axes)
        if endpoints == "xz":
            cond_xz = compose_mv(self.cond_xy, d, self.cond_yz, e)
            g = len(self.z_axes)
            p = self.source[(...,) + (None,) * g] * cond_xz
            return MultiTable(p, self.x_axes, self.z_axes)
        raise ShapeError(f"unknown endpoints {endpoints!r}")


def check_dpi_mv(chain: GroupChain, phi: ConvexPhi):
    """Multivariate DPI check; same report type as the bivariate harness."""
    from .markov import DPI_TOL, DpiReport

    t_xy = chain.joint("xy")
    t_yz = chain.joint("yz")
    t_xz = chain.joint("xz")

    def swap(t: MultiTable) -> MultiTable:
        axes = tuple(range(t.d, t.d + t.e)) + tuple(range(t.d))
        return MultiTable(np.transpose(t.p, axes).copy(), t.y_axes, t.x_axes)

    tau_xz = phi_mv(t_xz, phi)
    tau_yz = phi_mv(t_yz, phi)
    tau_zx = phi_mv(swap(t_xz), phi)
    tau_yx = phi_mv(swap(t_xy), phi)
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
