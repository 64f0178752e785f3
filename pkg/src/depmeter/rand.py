"""Seeded random generators for tables, chains, and tensors.

Used by the DPI harness, the CLI's randomized mode, and the test suites.
Rows and tables come from normalized independent positive draws, i.e. a
flat Dirichlet, which is the neutral choice over the simplex.  Everything
is driven by numpy's 64-bit seeded generator, so results are reproducible.
"""

from __future__ import annotations

import numpy as np

from .conditional import TripleTable
from .markov import MarkovChain3, TransitionMatrix
from .model import DiscreteSupport, JointTable, MultiTable, ProbVector
from .multivariate import GroupChain


def numeric_support(size: int) -> DiscreteSupport:
    return DiscreteSupport(tuple(str(i) for i in range(size)), "numeric")


def random_simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.random(size) + 1e-3
    return v / v.sum()


def random_joint_table(rng: np.random.Generator, m: int, n: int) -> JointTable:
    p = rng.random((m, n)) + 1e-3
    p /= p.sum()
    return JointTable(p, numeric_support(m), numeric_support(n))


def random_product_table(rng: np.random.Generator, m: int, n: int) -> JointTable:
    px = random_simplex(rng, m)
    py = random_simplex(rng, n)
    return JointTable(np.outer(px, py), numeric_support(m), numeric_support(n))


def random_functional_table(
    rng: np.random.Generator, m: int, n: int
) -> JointTable:
    """Table where Y = f(X) for a uniformly random map f."""
    f = rng.integers(0, n, size=m)
    px = random_simplex(rng, m)
    p = np.zeros((m, n))
    p[np.arange(m), f] = px
    return JointTable(p, numeric_support(m), numeric_support(n))


def random_transition(
    rng: np.random.Generator, m: int, n: int
) -> TransitionMatrix:
    rows = rng.random((m, n)) + 1e-3
    rows /= rows.sum(axis=1, keepdims=True)
    return TransitionMatrix(rows, numeric_support(m), numeric_support(n))


def random_chain(
    rng: np.random.Generator, m: int, n: int, l: int
) -> MarkovChain3:
    src = ProbVector(random_simplex(rng, m), numeric_support(m))
    return MarkovChain3(src, random_transition(rng, m, n), random_transition(rng, n, l))


def random_multitable(
    rng: np.random.Generator,
    x_shape: tuple[int, ...],
    y_shape: tuple[int, ...],
) -> MultiTable:
    p = rng.random(x_shape + y_shape) + 1e-3
    p /= p.sum()
    x_axes = tuple(numeric_support(s) for s in x_shape)
    y_axes = tuple(numeric_support(s) for s in y_shape)
    return MultiTable(p, x_axes, y_axes)


def random_cond_tensor(
    rng: np.random.Generator,
    src_shape: tuple[int, ...],
    dst_shape: tuple[int, ...],
) -> np.ndarray:
    """Conditional tensor P(dst | src): normalized over the dst axes."""
    t = rng.random(src_shape + dst_shape) + 1e-3
    dst_axes = tuple(range(len(src_shape), len(src_shape) + len(dst_shape)))
    t /= t.sum(axis=dst_axes, keepdims=True)
    return t


def random_group_chain(
    rng: np.random.Generator,
    x_shape: tuple[int, ...],
    y_shape: tuple[int, ...],
    z_shape: tuple[int, ...],
) -> GroupChain:
    source = rng.random(x_shape) + 1e-3
    source /= source.sum()
    return GroupChain(
        source=source,
        cond_xy=random_cond_tensor(rng, x_shape, y_shape),
        cond_yz=random_cond_tensor(rng, y_shape, z_shape),
        x_axes=tuple(numeric_support(s) for s in x_shape),
        y_axes=tuple(numeric_support(s) for s in y_shape),
        z_axes=tuple(numeric_support(s) for s in z_shape),
    )


def random_triple_table(
    rng: np.random.Generator, m: int, n: int, l: int
) -> TripleTable:
    p = rng.random((m, n, l)) + 1e-3
    p /= p.sum()
    return TripleTable(p, numeric_support(m), numeric_support(n), numeric_support(l))
