"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with its tolerance.  Run with ``pytest tests/test_acceptance.py -s``.
"""

import math
import time

import numpy as np
import pytest

from conftest import sup, table
from depmeter import circle
from depmeter.bivariate import (
    ConvexPhi,
    bhm_distance,
    limit_measure,
    mutual_information,
    phi_measure,
    renyi_alpha,
    tau_max_squared,
    tau_squared,
    tsallis_alpha,
)
from depmeter.conditional import TripleTable, tau_conditional_squared
from depmeter.markov import check_dpi, joint_from_chain
from depmeter.model import JointTable, MultiTable
from depmeter.multivariate import (
    check_dpi_mv,
    limit_mv,
    renyi_mv,
    tau_max_mv,
    tau_squared_mv,
    tsallis_mv,
)
from depmeter.rand import (
    numeric_support,
    random_chain,
    random_functional_table,
    random_group_chain,
    random_joint_table,
    random_multitable,
    random_product_table,
    random_triple_table,
)

PHIS = [ConvexPhi.square(), ConvexPhi.absolute(), ConvexPhi.power(1.5)]


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def rel_err(got: float, want: float) -> float:
    return abs(got - want) / (abs(want) if want != 0 else 1.0)


def test_criterion_1_circle_exactness():
    t0 = time.time()
    worst = 0.0
    for n in (2, 3, 5, 10, 100):
        o = circle.oracle(n)
        inst = circle.generate(n)
        checks = [
            (mutual_information(inst.table("xy")), o.mi_xy),
            (mutual_information(inst.table("xz")), o.mi_xz),
            (bhm_distance(inst.table("xy")), o.bhm_xy),
            (bhm_distance(inst.table("xz")), o.bhm_xz),
            (tau_squared(inst.table("yx")).value, o.tau2_yx),
            (tau_squared(inst.table("xy")).value, o.tau2_xy),
            (tau_squared(inst.table("xz")).value, o.tau2_xz),
        ]
        worst = max(worst, max(rel_err(g, w) for g, w in checks))
    elapsed = time.time() - t0
    report(
        "1 circle exactness (n in {2,3,5,10,100}, tol 1e-12)",
        worst < 1e-12 and elapsed < 5.0,
        f"worst rel err {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_limit_behavior():
    t0 = time.time()
    n = 10**4
    tau_yx = math.sqrt(circle.computed_tau_squared(n, "yx").value)
    tau_xy = math.sqrt(circle.computed_tau_squared(n, "xy").value)
    tau_xz = math.sqrt(circle.computed_tau_squared(n, "xz").value)
    elapsed = time.time() - t0
    ok = (
        1.0 - 1e-3 <= tau_yx <= 1.0
        and 0.5 - 1e-3 <= tau_xy <= 0.5
        and 0.5 - 1e-3 <= tau_xz <= 0.5
        and elapsed < 60.0
    )
    report(
        "2 limit behavior at n=10^4",
        ok,
        f"tau(Y,X)={tau_yx:.6f} tau(X,Y)={tau_xy:.6f} tau(X,Z)={tau_xz:.6f}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_3_independence_zero():
    rng = np.random.default_rng(3)
    worst = 0.0
    bounds_ok = True
    for _ in range(1000):
        m, n = (int(v) for v in rng.integers(2, 11, size=2))
        t = random_product_table(rng, m, n)
        vals = [
            mutual_information(t),
            tau_squared(t).value,
            renyi_alpha(t, 0.5).value,
            renyi_alpha(t, 1.5).value,
            tsallis_alpha(t, 0.5).value,
            tsallis_alpha(t, 1.5).value,
            limit_measure(t).value,
            bhm_distance(t),
            phi_measure(t, ConvexPhi.absolute()),
        ]
        worst = max(worst, max(abs(v) for v in vals))
        if not (0.0 < tau_max_squared(t) < 1.5):
            bounds_ok = False
    report(
        "3 independence zero (1000 product tables, tol 1e-10)",
        worst < 1e-10 and bounds_ok,
        f"worst |value| {worst:.2e}",
    )


def test_criterion_4_functional_attainment():
    rng = np.random.default_rng(4)
    worst = 0.0
    bounds_ok = True
    for _ in range(500):
        m, n = (int(v) for v in rng.integers(2, 21, size=2))
        t = random_functional_table(rng, m, n)
        rep = tau_squared(t)
        gaps = [abs(rep.value - rep.upper_bound)]
        for a in (0.5, 1.5):
            r = renyi_alpha(t, a)
            gaps.append(abs(r.value - r.upper_bound))
            d = tsallis_alpha(t, a)
            gaps.append(abs(d.value - d.upper_bound))
        lim = limit_measure(t)
        gaps.append(abs(lim.value - lim.upper_bound))
        worst = max(worst, max(gaps))
        if rep.upper_bound > 0 and not (0.0 < rep.upper_bound < 1.5):
            bounds_ok = False
    report(
        "4 functional attainment (500 tables, tol 1e-10)",
        worst < 1e-10 and bounds_ok,
        f"worst gap {worst:.2e}",
    )


def test_criterion_5_dpi_suite():
    rng = np.random.default_rng(5)
    min_slack = float("inf")
    violations = 0
    bounds_ok = True
    for _ in range(500):
        m, n, l = (int(v) for v in rng.integers(2, 9, size=3))
        chain = random_chain(rng, m, n, l)
        for phi in PHIS:
            rep = check_dpi(chain, phi)
            min_slack = min(min_slack, rep.slack, rep.reverse_slack)
            if not (rep.holds and rep.reverse_holds):
                violations += 1
        t_yz = joint_from_chain(chain, "yz")
        if not (0.0 < tau_max_squared(t_yz) < 1.5):
            bounds_ok = False
    rng_mv = np.random.default_rng(55)
    for _ in range(200):
        shapes = [
            tuple(int(v) for v in rng_mv.integers(2, 5, size=int(rng_mv.integers(1, 3))))
            for _ in range(3)
        ]
        gchain = random_group_chain(rng_mv, *shapes)
        for phi in PHIS:
            rep = check_dpi_mv(gchain, phi)
            min_slack = min(min_slack, rep.slack, rep.reverse_slack)
            if not (rep.holds and rep.reverse_holds):
                violations += 1
        if not (0.0 < tau_max_mv(gchain.joint("yz")) < 1.5):
            bounds_ok = False
    report(
        "5 DPI suite (500 bivariate + 200 group chains, 3 phis, slack tol 1e-10)",
        violations == 0 and min_slack >= -1e-10 and bounds_ok,
        f"violations {violations}, min slack {min_slack:.2e}",
    )


def test_criterion_6_bijection_invariance():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(200):
        m, n = (int(v) for v in rng.integers(2, 11, size=2))
        t = random_joint_table(rng, m, n)
        perm = rng.permutation(m)
        t2 = JointTable(t.p[perm], t.x_support, t.y_support)
        diffs = [
            abs(tau_squared(t2).value - tau_squared(t).value),
            abs(renyi_alpha(t2, 0.5).value - renyi_alpha(t, 0.5).value),
            abs(tsallis_alpha(t2, 1.5).value - tsallis_alpha(t, 1.5).value),
            abs(limit_measure(t2).value - limit_measure(t).value),
            abs(
                phi_measure(t2, ConvexPhi.absolute())
                - phi_measure(t, ConvexPhi.absolute())
            ),
        ]
        worst = max(worst, max(diffs))
    report(
        "6 bijection invariance (200 tables, tol 1e-13)",
        worst < 1e-13,
        f"worst drift {worst:.2e}",
    )


def test_criterion_7_alpha_limit():
    rng = np.random.default_rng(7)
    worst_limit = 0.0
    worst_identity = 0.0
    for _ in range(100):
        m, n = (int(v) for v in rng.integers(2, 9, size=2))
        t = random_joint_table(rng, m, n)
        base = limit_measure(t).value
        for a in (1 - 1e-4, 1 + 1e-4):
            worst_limit = max(worst_limit, abs(renyi_alpha(t, a).value - base))
        a = float(rng.uniform(0.2, 1.8))
        if abs(a - 1) > 1e-3:
            r = renyi_alpha(t, a).value
            d = tsallis_alpha(t, a).value
            worst_identity = max(
                worst_identity, abs((a - 1) * r - math.log(1 + (a - 1) * d))
            )
    report(
        "7 alpha limit (100 tables; sweep tol 1e-3, identity tol 1e-12)",
        worst_limit <= 1e-3 and worst_identity <= 1e-12,
        f"sweep {worst_limit:.2e}, identity {worst_identity:.2e}",
    )


def test_criterion_8_reductions():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(200):
        m, n = (int(v) for v in rng.integers(2, 9, size=2))
        t = random_joint_table(rng, m, n)
        mt = MultiTable(t.p, (t.x_support,), (t.y_support,))
        diffs = [
            abs(tau_squared_mv(mt).value - tau_squared(t).value),
            abs(tau_max_mv(mt) - tau_max_squared(t)),
            abs(renyi_mv(mt, 0.5).value - renyi_alpha(t, 0.5).value),
            abs(tsallis_mv(mt, 1.5).value - tsallis_alpha(t, 1.5).value),
            abs(limit_mv(mt).value - limit_measure(t).value),
        ]
        # conditional at l = 1
        tt = TripleTable(
            t.p[:, :, None], t.x_support, t.y_support, numeric_support(1)
        )
        rep = tau_conditional_squared(tt)
        diffs.append(abs(rep.value - tau_squared(t).value))
        diffs.append(abs(rep.upper_bound - tau_max_squared(t)))
        worst = max(worst, max(diffs))
    report(
        "8 reductions to bivariate (200 instances, tol 1e-13)",
        worst < 1e-13,
        f"worst gap {worst:.2e}",
    )


def test_criterion_9_conditional_independence_and_xor():
    rng = np.random.default_rng(9)
    worst_ci = 0.0
    for _ in range(100):
        l = int(rng.integers(2, 5))
        m, n = (int(v) for v in rng.integers(2, 6, size=2))
        pz = rng.random(l) + 1e-3
        pz /= pz.sum()
        p = np.zeros((m, n, l))
        for k in range(l):
            px = rng.random(m) + 1e-3
            px /= px.sum()
            py = rng.random(n) + 1e-3
            py /= py.sum()
            p[:, :, k] = pz[k] * np.outer(px, py)
        tt = TripleTable(p, numeric_support(m), numeric_support(n), numeric_support(l))
        worst_ci = max(worst_ci, tau_conditional_squared(tt).value)

    # XOR tensor: bound from exhaustive summation, attainment to 1e-12
    p = np.zeros((2, 2, 2))
    for x in (0, 1):
        for z in (0, 1):
            p[x, x ^ z, z] = 0.25
    tt = TripleTable(p, numeric_support(2), numeric_support(2), numeric_support(2))
    rep = tau_conditional_squared(tt)
    # independent oracle: direct summation of the conditional formula
    oracle_bound = 0.0
    for k in (0, 1):
        pk = p[:, :, k].sum()
        slab = p[:, :, k] / pk
        pjk = slab.sum(axis=0)
        fjk = np.cumsum(pjk)
        oracle_bound += 6.0 * float(np.sum((fjk - fjk**2) * pjk)) * pk
    xor_gap = abs(rep.value - oracle_bound)
    report(
        "9 conditional independence zero + XOR attainment (tol 1e-12)",
        worst_ci < 1e-12 and xor_gap < 1e-12,
        f"worst CI value {worst_ci:.2e}, XOR gap {xor_gap:.2e}",
    )


def test_criterion_10_range_claims():
    # bounds stay inside (0, 3/2) on fresh random tables and tensors
    rng = np.random.default_rng(10)
    ok = True
    lo, hi = float("inf"), 0.0
    for _ in range(500):
        m, n = (int(v) for v in rng.integers(2, 11, size=2))
        b = tau_max_squared(random_joint_table(rng, m, n))
        lo, hi = min(lo, b), max(hi, b)
        if not (0.0 < b < 1.5):
            ok = False
    for _ in range(200):
        mt = random_multitable(rng, (2, 3), (3, 2))
        b = tau_max_mv(mt)
        lo, hi = min(lo, b), max(hi, b)
        if not (0.0 < b < 1.5):
            ok = False
    report(
        "10 range claims: bounds in (0, 1.5)",
        ok,
        f"observed range [{lo:.4f}, {hi:.4f}]",
    )
