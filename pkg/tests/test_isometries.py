import cmath
import math

import numpy as np
import pytest

from etau.errors import UsageError
from etau.isometries import (
    NEGATIVE,
    LiftedIsometry,
    MobiusIsometry,
    apply_lift,
    arg_fprime,
    bounded_lift,
    compute_branch_sector,
    disk_rotation,
    hyperbolic_mobius,
    hyperbolic_translation,
    lift_jacobian,
    make_lift,
    mobius_apply,
    mobius_compose,
    mobius_derivative,
    mobius_identity,
    rotation_lift,
    sampled_sup_shift,
    t_shift,
    vertical_translation,
)
from etau.models import AmbientSpace, CylinderPoint, metric_cylinder, pullback_metric
from helpers import fd_jacobian

TWO_PI = 2.0 * math.pi


def random_isometry(rng):
    # |w1|^2 - |w2|^2 = 1 via cosh/sinh of a random rapidity
    r = rng.uniform(0.0, 3.0)
    a1 = rng.uniform(0.0, TWO_PI)
    a2 = rng.uniform(0.0, TWO_PI)
    return MobiusIsometry(cmath.rect(math.cosh(r), a1), cmath.rect(math.sinh(r), a2))


def test_normalization_enforced():
    with pytest.raises(UsageError):
        MobiusIsometry(2.0 + 0j, 0j)


def test_identity_and_rotation():
    assert mobius_apply(mobius_identity(), 0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)
    w = mobius_apply(disk_rotation(math.pi / 3.0), 0.5 + 0j)
    assert abs(w - 0.5 * cmath.exp(1j * math.pi / 3.0)) < 1e-14


def test_hyperbolic_origin_image_and_derivative():
    # f fixes -1 and +1, sends 0 to tanh(r), with f'(0) = 1/cosh(r)^2
    r = 0.8
    m = hyperbolic_mobius(r)
    assert abs(mobius_apply(m, 0j) - math.tanh(r)) < 1e-14
    assert m.origin_image_magnitude() == pytest.approx(math.tanh(r))
    assert abs(mobius_apply(m, 1.0 + 0j) - 1.0) < 1e-12
    assert abs(mobius_apply(m, -1.0 + 0j) + 1.0) < 1e-12
    assert abs(mobius_derivative(m, 0j) - 1.0 / math.cosh(r) ** 2) < 1e-14


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = random_isometry(rng)
        z = 0.6 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
        h = 1e-7
        fd = (mobius_apply(m, z + h) - mobius_apply(m, z - h)) / (2.0 * h)
        assert abs(mobius_derivative(m, z) - fd) < 1e-6


def test_composition_closure():
    rng = np.random.default_rng(9)
    for _ in range(30):
        a = random_isometry(rng)
        b = random_isometry(rng)
        c = mobius_compose(a, b)
        n = abs(c.w1) ** 2 - abs(c.w2) ** 2
        assert abs(n - 1.0) < 1e-9
        for z in (0j, 0.4 + 0.2j, -0.7j):
            assert abs(mobius_apply(c, z) - mobius_apply(a, mobius_apply(b, z))) < 1e-9


def test_disk_maps_into_disk():
    rng = np.random.default_rng(2)
    for _ in range(200):
        m = random_isometry(rng)
        z = math.sqrt(rng.uniform(0, 1)) * cmath.exp(1j * rng.uniform(0, TWO_PI))
        assert abs(mobius_apply(m, z)) < 1.0 + 1e-12


def test_sector_width_formula():
    rng = np.random.default_rng(4)
    for _ in range(30):
        m = random_isometry(rng)
        sector = compute_branch_sector(m)
        want = 4.0 * math.asin(m.origin_image_magnitude())
        assert abs(sector.width - want) < 1e-12


def test_sector_degenerates_for_rotations():
    sector = compute_branch_sector(disk_rotation(1.2))
    assert sector.width == 0.0


def test_arg_fprime_is_a_branch_of_the_argument():
    rng = np.random.default_rng(6)
    for _ in range(10):
        m = random_isometry(rng)
        sector = compute_branch_sector(m)
        for _ in range(20):
            z = 0.95 * math.sqrt(rng.uniform(0, 1)) * cmath.exp(1j * rng.uniform(0, TWO_PI))
            a = arg_fprime(m, z, sector)
            fp = mobius_derivative(m, z)
            assert abs(cmath.exp(1j * a) - fp / abs(fp)) < 1e-10
            assert sector.theta1 - 1e-12 <= a <= sector.theta2 + 1e-12


def test_arg_fprime_continuous_along_boundary_hugging_loop():
    # the principal value jumps on such a loop; the sector branch must not
    m = hyperbolic_mobius(2.5)
    sector = compute_branch_sector(m)
    ang = np.linspace(0.0, TWO_PI, 200_000)
    vals = arg_fprime(m, 0.999 * np.exp(1j * ang), sector)
    # a lost branch would jump by about 2 pi; smooth variation stays tiny
    assert np.abs(np.diff(vals)).max() < 0.01
    assert vals[0] == pytest.approx(vals[-1])


def test_vertical_translation_and_rotation_lift():
    amb = AmbientSpace(0.7)
    p = CylinderPoint(0.3, -0.2, 0.5)
    q = apply_lift(vertical_translation(amb, 1.25), p)
    assert (q.x, q.y) == (p.x, p.y) and abs(q.t - p.t - 1.25) < 1e-14
    q = apply_lift(rotation_lift(amb, 1.0), p)
    w = p.z * cmath.exp(1j)
    assert abs(q.z - w) < 1e-14
    assert abs(q.t - p.t) < 1e-14


def test_t_shift_requires_positive_lift():
    amb = AmbientSpace(0.5)
    lift = make_lift(amb, hyperbolic_mobius(1.0), 0.0, NEGATIVE)
    with pytest.raises(UsageError):
        t_shift(lift, 0j)


@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0])
def test_bounded_lift_strict_bound(tau):
    amb = AmbientSpace(tau)
    rng = np.random.default_rng(12)
    bound = 2.0 * tau * math.pi
    for _ in range(15):
        lift = bounded_lift(amb, random_isometry(rng))
        sup, _ = sampled_sup_shift(lift, n_random=2000, ring_samples=512)
        assert sup < bound


def test_bounded_lift_sharpness():
    amb = AmbientSpace(0.5)
    m = hyperbolic_mobius(2.0 * math.atanh(1.0 - 1e-6))
    sup, _ = sampled_sup_shift(bounded_lift(amb, m))
    assert sup > 0.99 * 2.0 * amb.tau * math.pi


def test_lift_jacobian_matches_finite_differences():
    amb = AmbientSpace(0.5)
    rng = np.random.default_rng(8)
    for orientation in ("positive", "negative"):
        for _ in range(5):
            m = random_isometry(rng)
            lift = make_lift(amb, m, 0.3, orientation)
            p = CylinderPoint(0.2, -0.4, 0.7)

            def fn(arr):
                q = apply_lift(lift, CylinderPoint(arr[0], arr[1], arr[2]))
                return q.as_array()

            j = lift_jacobian(lift, p)
            assert np.allclose(j, fd_jacobian(fn, p.as_array()), atol=1e-6)


@pytest.mark.parametrize("tau", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("orientation", ["positive", "negative"])
def test_lift_pullback_is_isometry(tau, orientation):
    amb = AmbientSpace(tau)
    rng = np.random.default_rng(21)
    for _ in range(10):
        lift = make_lift(amb, random_isometry(rng), rng.normal(), orientation)
        z = 0.9 * math.sqrt(rng.uniform(0, 1)) * cmath.exp(1j * rng.uniform(0, TWO_PI))
        p = CylinderPoint(z.real, z.imag, rng.normal())
        q = apply_lift(lift, p)
        j = lift_jacobian(lift, p)
        pulled = pullback_metric(metric_cylinder(amb, q), j)
        assert np.allclose(pulled, metric_cylinder(amb, p).matrix, atol=1e-7)


def test_sampled_sup_is_deterministic():
    lift = hyperbolic_translation(AmbientSpace(0.3), 1.7)
    a = sampled_sup_shift(lift)
    b = sampled_sup_shift(lift)
    assert a == b


def test_lifted_isometry_rejects_bad_orientation():
    amb = AmbientSpace(0.1)
    with pytest.raises(UsageError):
        LiftedIsometry(amb.tau, mobius_identity(), 0.0, "sideways", compute_branch_sector(mobius_identity()))
