import math

import numpy as np
import pytest

from sharp_ineq.calculus import (
    CLOSED_FORM,
    LATTICE_EXACT,
    MONTE_CARLO,
    RADIAL1D,
    CertificationError,
    Estimate,
    QuadratureSpec,
    ball_integral_at,
    ball_integral_of_modulus,
    constant_model,
    continuum_grid,
    default_spec,
    holder_lower_estimate,
    l1_norm,
    seminorm_global,
    seminorm_local,
    sup_norm,
)
from sharp_ineq.extremals import make_f_eh, make_f_omega
from sharp_ineq.modulus import PowerModulus, TableModulus
from sharp_ineq.space import Space, continuum, lattice


def closed(d, m, alpha, h):
    return d * 2.0 ** (d - m) / (d + alpha) * h ** (d + alpha)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(method="gauss")
    spec = QuadratureSpec().with_method(MONTE_CARLO)
    assert spec.method == MONTE_CARLO and spec.abs_tol == 1e-10


def test_default_spec_dispatch():
    assert default_spec(lattice(2, 1), PowerModulus(1.0)).method == LATTICE_EXACT
    assert default_spec(continuum(2, 1), PowerModulus(0.5)).method == CLOSED_FORM
    table = TableModulus([(0, 0), (1, 1)])
    assert default_spec(continuum(1, 0), table).method == RADIAL1D


def test_estimate_floats():
    e = Estimate(2.5, CLOSED_FORM)
    assert float(e) == 2.5 and e.error_bound == 0.0


@pytest.mark.parametrize(
    "d,m,alpha,h",
    [(1, 0, 1.0, 1.0), (2, 0, 0.5, 1.5), (2, 1, 0.5, 1.3), (3, 2, 0.75, 0.7)],
)
def test_ball_integral_closed_form_matrix(d, m, alpha, h):
    space = continuum(d, m)
    om = PowerModulus(alpha)
    est = ball_integral_of_modulus(space, om, h)
    assert est.method == CLOSED_FORM
    assert math.isclose(est.value, closed(d, m, alpha, h), rel_tol=1e-14)


@pytest.mark.parametrize("d,m", [(1, 0), (2, 1), (3, 0)])
def test_radial_matches_closed_form(d, m):
    space = continuum(d, m)
    om = PowerModulus(0.6)
    spec = QuadratureSpec(method=RADIAL1D)
    est = ball_integral_of_modulus(space, om, 1.2, spec)
    assert math.isclose(est.value, closed(d, m, 0.6, 1.2), rel_tol=1e-9)
    assert est.error_bound < 1e-7


def test_radial_table_modulus():
    # I(h) = 2 * 1 * int_0^h omega(t) dt on the line; omega the unit ramp
    om = TableModulus([(0, 0), (1, 1)])
    space = continuum(1, 0)
    est = ball_integral_of_modulus(space, om, 2.0, QuadratureSpec(method=RADIAL1D))
    assert math.isclose(est.value, 2.0 * (0.5 + 1.0), rel_tol=1e-10)


def test_lattice_ball_integral_exact():
    # d=1 ball of radius 3/2 holds {-1, 0, 1}: I = 2 * omega(1)
    space = lattice(1, 0)
    est = ball_integral_of_modulus(space, PowerModulus(1.0), 1.5)
    assert est.method == LATTICE_EXACT and est.value == 2.0
    # d=2, m=0: 3x3 block, eight points at distance 1
    est2 = ball_integral_of_modulus(lattice(2, 0), PowerModulus(1.0), 1.5)
    assert est2.value == 8.0


def test_monte_carlo_ball_integral_within_4_sigma():
    space = continuum(2, 1)
    om = PowerModulus(0.7)
    spec = QuadratureSpec(method=MONTE_CARLO, mc_samples=100_000, seed=7)
    est = ball_integral_of_modulus(space, om, 1.3, spec)
    want = closed(2, 1, 0.7, 1.3)
    assert est.error_bound > 0
    assert abs(est.value - want) <= 4.0 * est.error_bound


def test_invalid_radius_rejected():
    with pytest.raises(ValueError):
        ball_integral_of_modulus(lattice(1, 0), PowerModulus(1.0), 1.0)
    with pytest.raises(ValueError):
        ball_integral_of_modulus(continuum(1, 0), PowerModulus(1.0), 0.0)


def test_continuum_grid_respects_half_lines():
    grid = continuum_grid(continuum(2, 1), 1.0, 0.5)
    assert grid.shape[1] == 2
    assert np.all(grid[:, 0] >= 0.0)
    assert grid[:, 1].min() == -1.0 and grid[:, 1].max() == 1.0
    with pytest.raises(ValueError):
        continuum_grid(continuum(1, 0), 1.0, 0.0)


def test_sup_norm_hits_certified_value():
    space = continuum(2, 0)
    f = make_f_eh(space, PowerModulus(0.5), 1.0)
    got = sup_norm(f, space, 2.0)
    assert math.isclose(got, f.certified_sup_norm, rel_tol=1e-12)


def test_sup_norm_window_too_small():
    space = continuum(1, 0)
    f = make_f_eh(space, PowerModulus(1.0), 2.0)
    with pytest.raises(ValueError):
        sup_norm(f, space, 1.0)


def test_certification_error_fires():
    space = continuum(1, 0)
    f = constant_model(space, 2.0)
    f.certified_sup_norm = 1.0  # deliberately wrong certificate
    with pytest.raises(CertificationError):
        sup_norm(f, space, 1.0)


def test_l1_norm_of_bump_matches_deficiency():
    # ||f_eh||_1 = omega(h) mu(B_h) - I(h); for alpha=1, h=1 on the line: 2 - 1
    space = continuum(1, 0)
    f = make_f_eh(space, PowerModulus(1.0), 1.0)
    got = l1_norm(f, space, 1.0)
    assert math.isclose(got, 1.0, rel_tol=1e-9)
    assert math.isclose(f.certified_l1, 1.0, rel_tol=1e-14)


def test_l1_norm_lattice_exact():
    space = lattice(2, 0)
    f = make_f_eh(space, PowerModulus(1.0), 1.5)
    # values: 1.5 at 0, 0.5 at the eight distance-1 points
    assert l1_norm(f, space, 2.0) == 1.5 + 8 * 0.5


def test_ball_integral_at_lattice_translation():
    space = lattice(1, 0)
    f = make_f_eh(space, PowerModulus(1.0), 2.5)
    # brute force against direct evaluation
    for x in ([0.0], [1.0], [-2.0]):
        want = sum(float(f(np.array([x[0] + u]))) for u in (-2, -1, 0, 1, 2))
        got = ball_integral_at(f, space, 2.5, np.array(x))
        assert math.isclose(got, want, rel_tol=1e-14)


def test_ball_integral_at_continuum_exact_mass():
    # translated-bump ball masses come from the exact box engine; check the
    # central one against the closed form omega(h) mu - I
    space = continuum(2, 1)
    om = PowerModulus(0.5)
    f = make_f_eh(space, om, 1.0)
    mu = space.ball_measure(1.0)
    want = om(1.0) * mu - closed(2, 1, 0.5, 1.0)
    got = ball_integral_at(f, space, 1.0, space.origin())
    assert math.isclose(got, want, rel_tol=1e-12)


def test_ball_integral_at_continuum_translated_mc():
    space = continuum(2, 0)
    om = PowerModulus(1.0)
    f = make_f_eh(space, om, 1.0)
    x = np.array([0.4, -0.3])
    got = ball_integral_at(f, space, 1.0, x)
    rng = np.random.default_rng(3)
    pts = x + rng.uniform(-1.0, 1.0, size=(400_000, 2))
    vals = f(pts)
    mc = 4.0 * float(np.mean(vals))
    stderr = 4.0 * float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    assert abs(got - mc) <= 4.0 * stderr


def test_seminorm_local_certified_and_sweep_agree():
    space = continuum(1, 0)
    om = PowerModulus(1.0)
    f = make_f_eh(space, om, 1.0)
    cert = seminorm_local(f, space, 1.0, 2.0)
    sweep = seminorm_local(f, space, 1.0, 2.0, use_certified=False)
    assert math.isclose(cert, 1.0, rel_tol=1e-14)  # the deficiency above
    assert sweep <= cert * (1 + 1e-12)
    assert sweep >= 0.99 * cert  # maximizer x=0 lies on the search grid


def test_seminorm_local_lattice_window_guard():
    space = lattice(1, 0)
    f = make_f_eh(space, PowerModulus(1.0), 1.5)
    with pytest.raises(ValueError):
        seminorm_local(f, space, 1.5, 1.0)
    val = seminorm_local(f, space, 1.5, 4.0)
    # ball sum at the origin: 1.5 + 2 * 0.5
    assert val == 2.5


def test_seminorm_global_takes_grid_max():
    space = lattice(1, 0)
    f = make_f_eh(space, PowerModulus(1.0), 1.5)
    got = seminorm_global(f, space, [1.5, 2.5], 6.0)
    at_25 = seminorm_local(f, space, 2.5, 6.0)
    assert got == max(2.5, at_25)
    with pytest.raises(ValueError):
        seminorm_global(f, space, [], 6.0)


def test_holder_lower_estimate_on_distance_witness():
    space = continuum(2, 1)
    om = PowerModulus(0.5)
    f = make_f_omega(space, om)
    rng = np.random.default_rng(11)
    xs = rng.uniform(-1, 1, size=(5000, 2))
    ys = rng.uniform(-1, 1, size=(5000, 2))
    xs[:, 0] = np.abs(xs[:, 0])
    ys[:, 0] = np.abs(ys[:, 0])
    est = holder_lower_estimate(f, space, om, (xs, ys))
    assert est <= 1.0 + 1e-12
    # neighbors along an axis attain the constant exactly
    x0 = np.array([[0.0, 0.0]])
    y0 = np.array([[0.0, 0.7]])
    assert math.isclose(holder_lower_estimate(f, space, om, (x0, y0)), 1.0, rel_tol=1e-12)


def test_holder_rejects_coincident_pairs():
    space = continuum(1, 0)
    f = make_f_omega(space, PowerModulus(1.0))
    pts = np.zeros((1, 1))
    with pytest.raises(ValueError):
        holder_lower_estimate(f, space, PowerModulus(1.0), (pts, pts))


def test_constant_model_and_uncertified_copy():
    space = continuum(2, 1)
    c = constant_model(space, -3.0)
    assert c(np.array([0.5, 0.5])) == -3.0
    assert c.certified_holder_bound == 0.0
    bare = c.without_certificates()
    assert bare.certified_sup_norm is None
    assert "radial_pieces" in bare.meta
    assert bare(np.array([1.0, 0.0])) == -3.0
