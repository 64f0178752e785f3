import numpy as np
import pytest

from conftest import sup, table
from depmeter.bivariate import tau_max_squared, tau_squared
from depmeter.conditional import (
    TripleTable,
    tau_conditional,
    tau_conditional_max,
    tau_conditional_squared,
)
from depmeter.model import compensated_cumsum
from depmeter.rand import random_triple_table


def triple(p) -> TripleTable:
    p = np.asarray(p, dtype=float)
    return TripleTable(p, sup(p.shape[0]), sup(p.shape[1]), sup(p.shape[2]))


def brute_conditional(p):
    """Independent oracle: exhaustive summation of the defining formula."""
    p = np.asarray(p, dtype=float)
    m, n, l = p.shape
    pz = p.sum(axis=(0, 1))
    value = 0.0
    bound = 0.0
    for k in range(l):
        if pz[k] == 0:
            continue
        slab = p[:, :, k] / pz[k]
        pik = slab.sum(axis=1)
        pjk = slab.sum(axis=0)
        fjk = np.cumsum(pjk)
        inner = 0.0
        for i in range(m):
            if pik[i] == 0:
                continue
            fji = np.cumsum(slab[i]) / pik[i]
            for j in range(n):
                inner += (fji[j] - fjk[j]) ** 2 * pik[i] * pjk[j]
        value += 6.0 * inner * pz[k]
        bound += 6.0 * float(np.sum(fjk * (1.0 - fjk) * pjk)) * pz[k]
    return value, bound


class TestTauConditional:
    def test_constant_z_reduces_to_bivariate(self, rng):
        p2 = rng.random((3, 4))
        p2 /= p2.sum()
        t3 = triple(p2[:, :, None])
        rep = tau_conditional_squared(t3)
        assert rep.value == pytest.approx(tau_squared(table(p2)).value, abs=1e-14)
        assert rep.upper_bound == pytest.approx(tau_max_squared(table(p2)), abs=1e-14)

    def test_conditional_independence_zero(self, rng):
        # X <- Z -> Y: product within each k-slice
        l = 3
        pz = rng.random(l)
        pz /= pz.sum()
        p = np.zeros((3, 4, l))
        for k in range(l):
            px = rng.random(3)
            px /= px.sum()
            py = rng.random(4)
            py /= py.sum()
            p[:, :, k] = pz[k] * np.outer(px, py)
        assert tau_conditional_squared(triple(p)).value < 1e-14

    def test_xor_attains_bound(self):
        # Y = X xor Z, X and Z independent fair bits
        p = np.zeros((2, 2, 2))
        for x in (0, 1):
            for z in (0, 1):
                p[x, x ^ z, z] = 0.25
        rep = tau_conditional_squared(triple(p))
        want_value, want_bound = brute_conditional(p)
        assert rep.value == pytest.approx(want_value, abs=1e-15)
        assert rep.upper_bound == pytest.approx(want_bound, abs=1e-15)
        assert rep.value == pytest.approx(rep.upper_bound, abs=1e-14)

    def test_matches_brute_force(self, rng):
        for _ in range(20):
            t = random_triple_table(rng, 3, 4, 3)
            rep = tau_conditional_squared(t)
            want_value, want_bound = brute_conditional(t.p)
            assert rep.value == pytest.approx(want_value, abs=1e-13)
            assert rep.upper_bound == pytest.approx(want_bound, abs=1e-13)

    def test_slice_decomposition(self, rng):
        t = random_triple_table(rng, 3, 3, 4)
        pz = t.z_marginal()
        want = sum(
            tau_squared(t.slice_table(k)).value * pz[k]
            for k in range(4)
            if pz[k] > 0
        )
        assert tau_conditional_squared(t).value == pytest.approx(want, abs=1e-12)

    def test_value_within_bound_random(self, rng):
        for _ in range(100):
            t = random_triple_table(rng, 3, 4, 3)
            rep = tau_conditional_squared(t)
            assert -1e-12 <= rep.value <= rep.upper_bound + 1e-10


class TestTauConditionalMax:
    def test_constant_z_uniform_y(self):
        p = np.full((2, 2, 1), 0.25)
        assert tau_conditional_max(triple(p)) == pytest.approx(0.75, abs=1e-15)

    def test_slice_weighted_average(self):
        # two equiprobable slices, Y uniform on 2 in each
        p = np.full((2, 2, 2), 0.125)
        assert tau_conditional_max(triple(p)) == pytest.approx(0.75, abs=1e-15)

    def test_degenerate_per_slice(self):
        p = np.zeros((2, 2, 2))
        p[0, 0, 0] = 0.25
        p[1, 0, 0] = 0.25
        p[0, 1, 1] = 0.25
        p[1, 1, 1] = 0.25
        rep = tau_conditional_squared(triple(p))
        assert rep.upper_bound == 0.0
        assert "degenerate-target" in rep.flags


def test_tau_conditional_is_sqrt(rng):
    t = random_triple_table(rng, 3, 3, 2)
    assert tau_conditional(t) == pytest.approx(
        np.sqrt(tau_conditional_squared(t).value), abs=1e-15
    )
