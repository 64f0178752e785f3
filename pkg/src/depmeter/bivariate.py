"""Bivariate dependence measures.

The nonsymmetric measures quantify how strongly the column variable Y depends
on the row variable X.  They are zero exactly at independence and attain a
distribution-dependent upper bound exactly when Y is a function of X.  The
symmetric baselines (mutual information, Linfoot coefficient,
Bhattacharya-Hellinger-Matusita distance) are included for comparison.

Log conventions: mutual information is reported in bits; the Renyi, Tsallis
and their common limit form use natural logs, which is what makes the
alpha -> 1 limit algebra and the continuous-case anchors come out right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AlphaOutOfRange,
    InvalidPhi,
    NeedsSamples,
    ValidationError,
)
from .model import JointTable, compensated_cumsum, conditional_cdf, from_samples

MEASURE_IDS = ("mi", "linfoot", "tau2", "phi", "renyi", "tsallis", "limit", "bhm")

FLAG_DEGENERATE_TARGET = "degenerate-target"


@dataclass(frozen=True)
class MeasureReport:
    """A computed measure value with its attainable upper bound.

    ``normalized`` is ``value / upper_bound`` in the measure's own scale and
    is present only when the bound is present and positive.  The bound is
    distribution-dependent in the discrete case, which is why it is reported
    alongside the raw value rather than folded into it.
    """

    measure_id: str
    value: float
    upper_bound: float | None = None
    normalized: float | None = None
    alpha: float | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.value < -1e-9:
            raise ValidationError(
                f"measure {self.measure_id} produced negative value {self.value}"
            )
        if self.upper_bound is not None and self.value > self.upper_bound + 1e-9:
            raise ValidationError(
                f"measure {self.measure_id} value {self.value} exceeds "
                f"bound {self.upper_bound}"
            )

    @classmethod
    def bounded(
        cls,
        measure_id: str,
        value: float,
        upper_bound: float,
        alpha: float | None = None,
        flags: tuple[str, ...] = (),
    ) -> "MeasureReport":
        normalized = value / upper_bound if upper_bound > 0 else None
        return cls(measure_id, value, upper_bound, normalized, alpha, flags)

    def to_dict(self) -> dict:
        out: dict = {"measure": self.measure_id}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        out["value"] = self.value
        if self.upper_bound is not None:
            out["upper_bound"] = self.upper_bound
        if self.normalized is not None:
            out["normalized"] = self.normalized
        return out


class ConvexPhi:
    """A convex function on [-1, 1] used by the generic measure form.

    Convexity is checked at construction by a seeded randomized midpoint
    test; functions that fail are rejected.
    """

    def __init__(
        self,
        fn: Callable[[np.ndarray], np.ndarray],
        phi_id: str,
        check: bool = True,
    ) -> None:
        self.fn = fn
        self.phi_id = phi_id
        if check:
            self._check_convexity()

    def _check_convexity(self, trials: int = 256) -> None:
        rng = np.random.default_rng(0xC0FFEE)
        a = rng.uniform(-1.0, 1.0, size=trials)
        b = rng.uniform(-1.0, 1.0, size=trials)
        mid = self.fn((a + b) / 2.0)
        chord = (self.fn(a) + self.fn(b)) / 2.0
        if np.any(mid > chord + 1e-12):
            raise InvalidPhi(f"{self.phi_id} failed the midpoint convexity test")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(t, dtype=float))

    @classmethod
    def square(cls) -> "ConvexPhi":
        return cls(lambda t: 6.0 * t * t, "square", check=False)

    @classmethod
    def absolute(cls) -> "ConvexPhi":
        return cls(np.abs, "abs", check=False)

    @classmethod
    def power(cls, p: float) -> "ConvexPhi":
        if p < 1:
            raise InvalidPhi(f"power exponent must be >= 1, got {p}")
        return cls(lambda t: np.abs(t) ** p, f"power-{p:g}", check=False)

    @classmethod
    def parse(cls, spec: str) -> "ConvexPhi":
        """Parse 'square', 'abs', or 'power-<p>'."""
        if spec == "square":
            return cls.square()
        if spec == "abs":
            return cls.absolute()
        if spec.startswith("power-"):
            try:
                p = float(spec[len("power-") :])
            except ValueError:
                raise InvalidPhi(f"bad power spec {spec!r}")
            return cls.power(p)
        raise InvalidPhi(f"unknown phi spec {spec!r}")


def _weights(t: JointTable) -> tuple[np.ndarray, np.ndarray]:
    return t.x_marginal(), t.y_marginal()


def mutual_information(t: JointTable) -> float:
    """Shannon mutual information in bits; zero joint cells contribute 0."""
    px, py = _weights(t)
    p = t.p
    mask = p > 0
    outer = np.outer(px, py)
    terms = p[mask] * np.log2(p[mask] / outer[mask])
    return float(terms.sum())


def linfoot_coefficient(t: JointTable) -> float:
    """Linfoot's information coefficient of correlation, in [0, 1)."""
    i_nats = mutual_information(t) * math.log(2.0)
    # guard against a tiny negative from float cancellation at independence
    return math.sqrt(max(0.0, 1.0 - math.exp(-2.0 * i_nats)))


def _tau_max(py: np.ndarray) -> tuple[float, tuple[str, ...]]:
    fy = compensated_cumsum(py)
    bound = 6.0 * float(np.sum(fy * (1.0 - fy) * py))
    flags: tuple[str, ...] = ()
    if bound <= 0:
        bound = 0.0
        flags = (FLAG_DEGENERATE_TARGET,)
    return bound, flags


def tau_max_squared(t: JointTable) -> float:
    """Attainable upper bound of tau^2; depends only on the Y-marginal."""
    bound, _ = _tau_max(t.y_marginal())
    return bound


def tau_squared(t: JointTable) -> MeasureReport:
    """Distance-form nonsymmetric measure of the dependence of Y on X."""
    cc = conditional_cdf(t)
    px, py = _weights(t)
    diff = cc.f - cc.marginal_cdf[None, :]
    value = 6.0 * float(np.einsum("ij,i,j->", diff * diff, px, py))
    bound, flags = _tau_max(py)
    return MeasureReport.bounded("tau2", value, bound, flags=flags)


def phi_measure(t: JointTable, phi: ConvexPhi) -> float:
    """Generic convex-phi form; with the built-in square phi it equals tau^2."""
    cc = conditional_cdf(t)
    px, py = _weights(t)
    diff = cc.f - cc.marginal_cdf[None, :]
    return float(np.einsum("ij,i,j->", phi(diff), px, py))


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 2.0):
        raise AlphaOutOfRange(
            f"alpha must lie in (0, 2), got {alpha}; the measure may be "
            "unbounded for alpha >= 2"
        )


def _ratio_power_sum(t: JointTable, alpha: float) -> float:
    """sum over cells of (F(j|i)/F(j))^alpha * P(i) * P(j).

    Cells with F(j|i) = 0 contribute 0; cells with P(j) = 0 carry no weight.
    F(j) > 0 wherever P(j) > 0 since F is cumulative with F(j) >= P(j).
    """
    cc = conditional_cdf(t)
    px, py = _weights(t)
    ratio = np.zeros_like(cc.f)
    cols = py > 0
    ratio[:, cols] = cc.f[:, cols] / cc.marginal_cdf[None, cols]
    return float(np.einsum("ij,i,j->", ratio**alpha, px, py))


def renyi_upper(t: JointTable, alpha: float) -> float:
    """Upper bound of the Renyi form, attained when Y is a function of X."""
    _check_alpha(alpha)
    if alpha == 1.0:
        return limit_upper(t)
    py = t.y_marginal()
    fy = compensated_cumsum(py)
    mask = py > 0
    s = float(np.sum(fy[mask] ** (1.0 - alpha) * py[mask]))
    return math.log(s) / (alpha - 1.0)


def renyi_alpha(t: JointTable, alpha: float) -> MeasureReport:
    """Renyi entropy form; dispatches to the common limit form at alpha = 1."""
    _check_alpha(alpha)
    if alpha == 1.0:
        return limit_measure(t)
    s = _ratio_power_sum(t, alpha)
    value = math.log(s) / (alpha - 1.0)
    value = max(value, 0.0) if value > -1e-12 else value
    return MeasureReport.bounded("renyi", value, renyi_upper(t, alpha), alpha=alpha)


def tsallis_alpha(t: JointTable, alpha: float) -> MeasureReport:
    """Tsallis entropy form; dispatches to the common limit form at alpha = 1."""
    _check_alpha(alpha)
    if alpha == 1.0:
        return limit_measure(t)
    s = _ratio_power_sum(t, alpha)
    value = (s - 1.0) / (alpha - 1.0)
    value = max(value, 0.0) if value > -1e-12 else value
    py = t.y_marginal()
    fy = compensated_cumsum(py)
    mask = py > 0
    s_max = float(np.sum(fy[mask] ** (1.0 - alpha) * py[mask]))
    bound = (s_max - 1.0) / (alpha - 1.0)
    return MeasureReport.bounded("tsallis", value, bound, alpha=alpha)


def limit_upper(t: JointTable) -> float:
    py = t.y_marginal()
    fy = compensated_cumsum(py)
    mask = py > 0
    return -float(np.sum(np.log(fy[mask]) * py[mask]))


def limit_measure(t: JointTable) -> MeasureReport:
    """Common alpha -> 1 limit of the Renyi and Tsallis forms."""
    cc = conditional_cdf(t)
    px, py = _weights(t)
    cols = py > 0
    ratio = np.zeros_like(cc.f)
    ratio[:, cols] = cc.f[:, cols] / cc.marginal_cdf[None, cols]
    terms = np.zeros_like(ratio)
    pos = ratio > 0
    terms[pos] = ratio[pos] * np.log(ratio[pos])
    value = float(np.einsum("ij,i,j->", terms, px, py))
    value = max(value, 0.0) if value > -1e-12 else value
    return MeasureReport.bounded("limit", value, limit_upper(t))


def bhm_distance(t: JointTable) -> float:
    """Discrete Bhattacharya-Hellinger-Matusita distance from independence."""
    px, py = _weights(t)
    outer = np.outer(px, py)
    return 1.0 - float(np.sum(np.sqrt(outer * t.p)))


def sparse_tau_squared(
    m: int, n: int, cells: Sequence[tuple[int, int, float]]
) -> MeasureReport:
    """tau^2 from a sparse cell list, in O(nnz) time and memory.

    Uses the expansion 6*sum F(j|i)^2 P(i) P(j) - 6*sum F(j)^2 P(j): within
    each row, F(j|i) is a step function that only changes at the row's
    nonzero columns, so the inner sum over j collapses to one term per
    segment between consecutive nonzeros, weighted by marginal-cdf
    increments.  Agrees with :func:`tau_squared` on dense tables and stays
    feasible when m*n is far beyond memory.
    """
    px = np.zeros(m)
    py = np.zeros(n)
    rows: dict[int, list[tuple[int, float]]] = {}
    for i, j, p in cells:
        px[i] += p
        py[j] += p
        rows.setdefault(i, []).append((j, p))
    fy = compensated_cumsum(py)
    # prefix sums of F(j)^2 P(j) for segment lookups
    g = compensated_cumsum(fy * fy * py)
    sum_f2 = float(g[-1])

    def seg(lo: int, hi: int) -> float:
        # sum of F(j)^0... actually sum of P(j)-weighted 1 over [lo, hi]
        if hi < lo:
            return 0.0
        return float(fy[hi] - (fy[lo - 1] if lo > 0 else 0.0))

    term1 = 0.0
    for i, entries in rows.items():
        entries.sort()
        cum = 0.0
        acc = 0.0
        for t_idx, (j, p) in enumerate(entries):
            cum += p
            c = cum / px[i]
            hi = entries[t_idx + 1][0] - 1 if t_idx + 1 < len(entries) else n - 1
            acc += c * c * seg(j, hi)
        term1 += px[i] * acc
    value = 6.0 * (term1 - sum_f2)
    if -1e-9 < value < 0.0:
        value = 0.0
    bound = 6.0 * float(np.sum(fy * (1.0 - fy) * py))
    flags = (FLAG_DEGENERATE_TARGET,) if bound <= 0 else ()
    return MeasureReport.bounded("tau2", value, max(bound, 0.0), flags=flags)


def compute(
    t: JointTable,
    measure_id: str,
    alpha: float | None = None,
    phi: ConvexPhi | None = None,
) -> MeasureReport:
    """Dispatch a measure by its stable identifier."""
    if measure_id == "mi":
        return MeasureReport("mi", max(mutual_information(t), 0.0))
    if measure_id == "linfoot":
        return MeasureReport("linfoot", linfoot_coefficient(t))
    if measure_id == "tau2":
        return tau_squared(t)
    if measure_id == "phi":
        if phi is None:
            phi = ConvexPhi.square()
        return MeasureReport("phi", phi_measure(t, phi))
    if measure_id == "renyi":
        if alpha is None:
            raise ValidationError("renyi requires an alpha value")
        return renyi_alpha(t, alpha)
    if measure_id == "tsallis":
        if alpha is None:
            raise ValidationError("tsallis requires an alpha value")
        return tsallis_alpha(t, alpha)
    if measure_id == "limit":
        return limit_measure(t)
    if measure_id == "bhm":
        return MeasureReport("bhm", bhm_distance(t))
    raise ValidationError(f"unknown measure {measure_id!r}")


def permutation_pvalue(
    records: Sequence[tuple[object, object]],
    measure_id: str,
    num_permutations: int,
    seed: int,
    alpha: float | None = None,
    phi: ConvexPhi | None = None,
) -> float:
    """Permutation p-value for a measure on raw (x, y) samples.

    Permutes the Y column; p = (1 + #{permuted >= observed}) / (N + 1),
    deterministic for a fixed seed.
    """
    if not isinstance(records, (list, tuple)):
        records = list(records)
    if records and not isinstance(records[0], (list, tuple)):
        raise NeedsSamples("permutation test requires raw (x, y) sample pairs")
    if num_permutations < 1:
        raise ValidationError("need at least one permutation")
    xs = [r[0] for r in records]
    ys = [r[1] for r in records]
    observed = compute(from_samples(records), measure_id, alpha, phi).value
    rng = np.random.default_rng(np.uint64(seed))
    hits = 0
    for _ in range(num_permutations):
        perm = rng.permutation(len(ys))
        shuffled = [(xs[i], ys[perm[i]]) for i in range(len(ys))]
        v = compute(from_samples(shuffled), measure_id, alpha, phi).value
        if v >= observed - 1e-15:
            hits += 1
    return (hits + 1) / (num_permutations + 1)
