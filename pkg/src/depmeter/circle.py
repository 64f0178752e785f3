"""Deterministic circle fixture: X = cos(2 pi Y), Z = sin(2 pi Y).

Y is uniform on the 4n-4 grid points i/(4n) with the four degenerate angles
(1/4, 1/2, 3/4, 1) removed, so X and Z are each uniform on 2n-2 values and
(X, Z) is uniform on 4n-4 pairs on the unit circle.  Closed-form values of
every measure on every pair are known, which makes this the package's
primary exactness fixture: X and Z are strongly but never functionally
related, a case where mutual information misleads and the nonsymmetric
measures do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bivariate import MeasureReport, sparse_tau_squared
from .errors import InvalidN, ValidationError
from .model import DiscreteSupport, JointTable, from_counts

# Pairs are named source-target: "xy" measures dependence of Y on X.
PAIRS = ("xy", "yx", "yz", "zy", "xz", "zx")


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise InvalidN(f"circle size must be an integer >= 2, got {n!r}")


def _trig_label(v: float) -> str:
    """Trig value rounded to 15 significant digits; '-0' collapses to '0'."""
    s = format(v, ".15g")
    return "0" if s in ("-0", "-0.0") else s


def _trig_values(i: int, n: int) -> tuple[float, float]:
    """cos and sin of 2 pi i/(4n), evaluated through canonical representatives.

    Grid points that share a cosine (i and 4n-i) or a sine (i and 2n-i, or
    i and 6n-i) must get bit-identical floats, otherwise rounding noise in
    the 16th digit splits one support value into two.
    """
    x = math.cos(2.0 * math.pi * (min(i, 4 * n - i) / (4 * n)))
    if i < 2 * n:
        z = math.sin(2.0 * math.pi * (min(i, 2 * n - i) / (4 * n)))
    else:
        ii = 4 * n - i
        z = -math.sin(2.0 * math.pi * (min(ii, 2 * n - ii) / (4 * n)))
    return x, z


def _points(n: int) -> list[tuple[float, str, str, str]]:
    """(y, y_label, x_label, z_label) for each of the 4n-4 grid points."""
    pts = []
    for i in range(1, 4 * n):
        if i in (n, 2 * n, 3 * n):
            continue
        y = i / (4 * n)
        x, z = _trig_values(i, n)
        pts.append((y, repr(y), _trig_label(x), _trig_label(z)))
    return pts


@dataclass(frozen=True)
class CircleInstance:
    """Generated supports and joint tables for one circle size n."""

    n: int
    y_support: DiscreteSupport
    x_support: DiscreteSupport
    z_support: DiscreteSupport
    tables: dict[str, JointTable]

    def table(self, pair: str) -> JointTable:
        if pair not in PAIRS:
            raise ValidationError(f"unknown pair {pair!r}")
        return self.tables[pair]


def generate(n: int) -> CircleInstance:
    """Build all six pairwise joint tables for size n (dense)."""
    _check_n(n)
    pts = _points(n)
    y_support = DiscreteSupport.from_labels([p[1] for p in pts], "numeric")
    x_support = DiscreteSupport.from_labels([p[2] for p in pts], "numeric")
    z_support = DiscreteSupport.from_labels([p[3] for p in pts], "numeric")
    if x_support.size != 2 * n - 2 or z_support.size != 2 * n - 2:
        raise ValidationError(
            "label collision: distinct trig values did not stay distinct "
            "after rounding"
        )

    supports = {"x": x_support, "y": y_support, "z": z_support}
    idx = {
        axis: {lbl: i for i, lbl in enumerate(sup.labels)}
        for axis, sup in supports.items()
    }

    tables = {}
    for pair in PAIRS:
        a, b = pair[0], pair[1]
        counts = np.zeros((supports[a].size, supports[b].size))
        col = {"y": 1, "x": 2, "z": 3}
        for p in pts:
            counts[idx[a][p[col[a]]], idx[b][p[col[b]]]] += 1
        tables[pair] = from_counts(counts, supports[a], supports[b])
    return CircleInstance(n, y_support, x_support, z_support, tables)


def sparse_pair_cells(
    n: int, pair: str
) -> tuple[int, int, list[tuple[int, int, float]]]:
    """Sparse COO cells of one pairwise table, feasible for very large n."""
    _check_n(n)
    if pair not in PAIRS:
        raise ValidationError(f"unknown pair {pair!r}")
    pts = _points(n)
    col = {"y": 1, "x": 2, "z": 3}
    a_labels = sorted({p[col[pair[0]]] for p in pts}, key=float)
    b_labels = sorted({p[col[pair[1]]] for p in pts}, key=float)
    ai = {lbl: i for i, lbl in enumerate(a_labels)}
    bi = {lbl: j for j, lbl in enumerate(b_labels)}
    w = 1.0 / len(pts)
    acc: dict[tuple[int, int], float] = {}
    for p in pts:
        key = (ai[p[col[pair[0]]]], bi[p[col[pair[1]]]])
        acc[key] = acc.get(key, 0.0) + w
    cells = [(i, j, v) for (i, j), v in acc.items()]
    return len(a_labels), len(b_labels), cells


def computed_tau_squared(n: int, pair: str) -> MeasureReport:
    """tau^2 for one pair via the sparse path; works at n = 10^4 and beyond."""
    m, ncols, cells = sparse_pair_cells(n, pair)
    return sparse_tau_squared(m, ncols, cells)


@dataclass(frozen=True)
class CircleOracle:
    """Closed-form measure values for size n."""

    n: int
    mi_xy: float
    mi_xz: float
    bhm_xy: float
    bhm_xz: float
    tau2_yx: float
    tau2_xy: float
    tau2_xz: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mi_xy": self.mi_xy,
            "mi_xz": self.mi_xz,
            "bhm_xy": self.bhm_xy,
            "bhm_xz": self.bhm_xz,
            "tau2_yx": self.tau2_yx,
            "tau2_xy": self.tau2_xy,
            "tau2_xz": self.tau2_xz,
        }


def oracle(n: int) -> CircleOracle:
    """Closed forms: MI of the pairs, BHM distances, and the three tau^2."""
    _check_n(n)
    tau2_yx = (2 * n - 1) * (2 * n - 3) / (2 * n - 2) ** 2
    return CircleOracle(
        n=n,
        mi_xy=math.log2(2 * n - 2),
        mi_xz=math.log2(2 * n - 2) - 1.0,
        bhm_xy=1.0 - 1.0 / math.sqrt(2 * n - 2),
        bhm_xz=1.0 - 1.0 / math.sqrt(n - 1),
        tau2_yx=tau2_yx,
        tau2_xy=tau2_yx / 4.0,
        tau2_xz=n * (n - 2) / (4.0 * (n - 1) ** 2),
    )
