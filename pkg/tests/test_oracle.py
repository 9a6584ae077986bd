import json
import math
from fractions import Fraction

import numpy as np
import pytest

from sharp_ineq import oracle
from sharp_ineq.calculus import holder_lower_estimate, sup_norm
from sharp_ineq.modulus import PowerModulus, TableModulus
from sharp_ineq.space import continuum, lattice

RAMP = PowerModulus(1.0)
F = Fraction


# ----------------------------------------------------------------------
# exact rational verification


def test_exact_f_eh_values():
    f = oracle.exact_f_eh(RAMP, F(3, 2))
    assert f.support_radius == 1
    assert f.fn((0,)) == F(3, 2)
    assert f.fn((1,)) == F(1, 2)
    assert f.fn((2,)) == 0
    assert isinstance(f.fn((1,)), Fraction)


def test_exact_f_omega_values():
    f = oracle.exact_f_omega(RAMP, c=F(1, 3))
    assert f.support_radius is None
    assert f.fn((2, -3)) == F(1, 3) + 3
    down = oracle.exact_f_omega(RAMP, sign=-1)
    assert down.fn((2,)) == -2


def test_exact_holder_constant_of_bump():
    f = oracle.exact_f_eh(RAMP, F(5, 2))
    got = oracle.exact_holder_constant(f, lattice(1, 0), RAMP, window_radius=8)
    assert got == 1
    assert isinstance(got, Fraction)


def test_exact_holder_constant_table_modulus():
    om = TableModulus([(0, 0), (1, F(2, 3)), (2, 1)])
    f = oracle.exact_f_eh(om, F(3, 2))
    got = oracle.exact_holder_constant(f, lattice(2, 0), om, window_radius=4)
    assert got == 1


@pytest.mark.parametrize("tid", oracle.EXACT_THEOREMS)
@pytest.mark.parametrize("space", [lattice(1, 0), lattice(2, 0), lattice(2, 1)])
def test_exact_verify_equality_on_the_nose(tid, space):
    rep = oracle.exact_verify(tid, space, RAMP, F(3, 2))
    assert rep.verdict == "EqualityAttained"
    assert rep.exact["gap"] == 0
    assert isinstance(rep.exact["lhs"], Fraction)
    assert rep.tolerance == 0.0


def test_exact_verify_frozen_rationals():
    rep = oracle.exact_verify("nagy", lattice(1, 0), RAMP, F(3, 2))
    assert rep.exact["lhs"] == F(3, 2)
    assert rep.exact["rhs_term1"] == F(2, 3)
    assert rep.exact["rhs_term2"] == F(5, 6)
    rep2 = oracle.exact_verify("nagy", lattice(2, 0), RAMP, F(3, 2))
    assert rep2.exact["rhs_term1"] == F(8, 9)
    assert rep2.exact["rhs_term2"] == F(11, 18)
    rep3 = oracle.exact_verify("lemma1", lattice(1, 0), RAMP, F(3, 2))
    assert rep3.exact["lhs"] == F(2, 3) == rep3.exact["rhs_term1"]


def test_exact_verify_table_modulus():
    om = TableModulus([(0, 0), (1, F(2, 3)), (2, 1)])
    rep = oracle.exact_verify("nagy", lattice(1, 0), om, F(3, 2))
    assert rep.exact["gap"] == 0
    assert rep.verdict == "EqualityAttained"


def test_exact_verify_user_function_holds():
    # an asymmetric two-point witness: bound holds strictly
    def fn(pt):
        if pt == (0,):
            return F(2)
        if pt == (1,):
            return F(1)
        return F(0)

    f = oracle.ExactFunction(fn=fn, support_radius=1, label="two-point")
    rep = oracle.exact_verify("nagy", lattice(1, 0), RAMP, F(3, 2), f=f)
    assert rep.verdict in ("Holds", "EqualityAttained")
    assert rep.exact["gap"] >= 0


def test_exact_verify_guards():
    with pytest.raises(ValueError):
        oracle.exact_verify("hypersingular", lattice(1, 0), RAMP, F(3, 2))
    with pytest.raises(ValueError):
        oracle.exact_verify("nagy", continuum(1, 0), RAMP, F(3, 2))
    with pytest.raises(ValueError, match="irrational"):
        oracle.exact_verify("nagy", lattice(1, 0), PowerModulus(0.5), F(3, 2))
    unbounded = oracle.exact_f_omega(RAMP)
    with pytest.raises(ValueError, match="compactly supported"):
        oracle.exact_verify("nagy", lattice(1, 0), RAMP, F(3, 2), f=unbounded)


# ----------------------------------------------------------------------
# cone functions: randomized but certified witnesses


def test_cone_function_certificates():
    space = lattice(2, 1)
    spec = oracle.ConeFunctionSpec(centers=[[1, 0], [0, 2]], heights=[1.0, 0.5], lam=1.0)
    f = oracle.make_cone_function(space, RAMP, spec)
    assert f.certified_holder_bound == 1.0
    assert f.certified_sup_norm == 1.0
    assert f(np.array([1.0, 0.0])) == 1.0  # apex value
    # per-cone reach |p| + omega^{-1}(c/lam): max(1 + 1, 2 + 1/2)
    assert f.support_radius == 2.5
    # sweep never beats the certificates
    got_sup = sup_norm(f, space, math.ceil(f.support_radius) + 1)
    assert got_sup <= f.certified_sup_norm + 1e-12


def test_cone_function_support_radius():
    space = lattice(1, 0)
    spec = oracle.ConeFunctionSpec(centers=[[2]], heights=[1.0], lam=2.0)
    f = oracle.make_cone_function(space, RAMP, spec)
    # cone dies at distance 1/2 from the center at 2
    assert f.support_radius == 2.5
    assert f(np.array([3.0])) == 0.0


def test_cone_function_holder_pairs_property():
    space = lattice(2, 0)
    rng = np.random.default_rng(4)
    om = PowerModulus(0.6)
    spec = oracle.ConeFunctionSpec(centers=[[0, 1], [-2, 0]], heights=[0.8, 1.1], lam=1.3)
    f = oracle.make_cone_function(space, om, spec)
    pts = rng.integers(-5, 6, size=(4000, 2)).astype(np.float64)
    qts = rng.integers(-5, 6, size=(4000, 2)).astype(np.float64)
    keep = np.any(pts != qts, axis=1)
    est = holder_lower_estimate(f, space, om, (pts[keep], qts[keep]))
    assert est <= 1.3 + 1e-12


def test_cone_validation():
    space = lattice(1, 0)
    with pytest.raises(ValueError):
        oracle.make_cone_function(
            space, RAMP, oracle.ConeFunctionSpec(centers=[[0]], heights=[], lam=1.0)
        )
    with pytest.raises(ValueError):
        oracle.make_cone_function(
            space, RAMP, oracle.ConeFunctionSpec(centers=[[0]], heights=[-1.0], lam=1.0)
        )


# ----------------------------------------------------------------------
# randomized suites


@pytest.mark.parametrize(
    "tid",
    ["lemma1", "nagy", "nagy_l1", "sobolev", "charge", "hypersingular",
     "mixed_additive", "mixed_multiplicative"],
)
def test_random_suite_no_violations(tid):
    rep = oracle.random_suite(tid, trials=40, seed=3)
    assert rep.violations == 0, rep.worst_case
    assert rep.trials == 40
    assert rep.min_gap > -1e-9


def test_random_suite_deterministic():
    a = oracle.random_suite("nagy", trials=25, seed=9)
    b = oracle.random_suite("nagy", trials=25, seed=9)
    assert a.to_json() == b.to_json()
    c = oracle.random_suite("nagy", trials=25, seed=10)
    assert c.to_json() != a.to_json()


def test_suite_report_json_round_trip():
    rep = oracle.random_suite("mixed_additive", trials=10, seed=1)
    data = rep.to_json()
    assert json.loads(json.dumps(data)) == data  # plain JSON types only
    assert data["theorem_id"] == "mixed_additive"
    assert data["violations"] == 0
    assert set(data) >= {"theorem_id", "trials", "violations", "min_gap", "worst_case", "seed"}


def test_random_suite_unknown_id():
    with pytest.raises(ValueError):
        oracle.random_suite("goldbach", trials=5, seed=1)


# ----------------------------------------------------------------------
# Monte Carlo cross-checks of the closed forms


@pytest.mark.parametrize("name", oracle.MC_CHECKS)
def test_mc_cross_checks_within_4_sigma(name):
    out = oracle.mc_cross_check(name, seed=0, samples=60_000)
    assert out["ok"], out
    assert out["name"] == name
    assert "deterministic" in out and "monte_carlo" in out


def test_mc_cross_check_unknown_name():
    with pytest.raises(ValueError):
        oracle.mc_cross_check("nonexistent")


def test_mc_cross_check_seed_sensitivity():
    a = oracle.mc_cross_check("ball_integral", seed=1, samples=20_000)
    b = oracle.mc_cross_check("ball_integral", seed=2, samples=20_000)
    assert a["monte_carlo"] != b["monte_carlo"]
    assert a["deterministic"] == b["deterministic"]
