import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccsl import (ValidationError, composite, cuboid, cylinder, form_factor_sq,
                  point_mass, sphere, total_mass)
from ccsl.geometry import (bessel_j1, circumradius, disc_kernel, sinc_kernel,
                           sphere_kernel, validate_distribution, volume,
                           with_measurement_axis)
from fixtures import CANTILEVER_SPHERE_MASS, J1_TABLE, LISA_CUBE_DENSITY, SPHERE_FF_AT_KR_PI


# --- masses -------------------------------------------------------------------

def test_cantilever_sphere_mass():
    d = sphere(15.5e-6, density=7.43e3)
    assert total_mass(d) == pytest.approx(CANTILEVER_SPHERE_MASS, rel=1e-14)
    # quoted device mass is 1.2e-10 kg; the geometric mass must land near it
    assert total_mass(d) == pytest.approx(1.2e-10, rel=0.05)


def test_lisa_cube_mass():
    d = cuboid(0.046, 0.046, 0.046, density=LISA_CUBE_DENSITY)
    assert total_mass(d) == pytest.approx(1.928, rel=1e-12)
    d2 = cuboid(0.046, 0.046, 0.046, mass=1.928)
    assert d2.density == pytest.approx(LISA_CUBE_DENSITY, rel=1e-12)


def test_point_mass_identity():
    assert total_mass(point_mass(3.25e-5)) == 3.25e-5


def test_composite_mass_sums_parts():
    d = composite([(point_mass(1.0), (0, 0, 0)), (sphere(0.1, density=2.0), (1, 0, 0))])
    assert total_mass(d) == pytest.approx(1.0 + 2.0 * volume(sphere(0.1, density=2.0).shape))


def test_mass_equals_density_times_volume():
    d = cylinder(0.17, 0.2, density=2200.0)
    assert total_mass(d) == pytest.approx(2200.0 * math.pi * 0.17**2 * 0.2, rel=1e-12)


# --- form factor values --------------------------------------------------------

def test_form_factor_at_zero_is_total_mass_squared():
    shapes = [
        sphere(0.01, density=100.0),
        cuboid(0.01, 0.02, 0.03, density=100.0),
        cylinder(0.01, 0.05, density=100.0),
        point_mass(0.5),
        composite([(point_mass(0.25), (0.1, 0, 0)), (point_mass(0.75), (-0.2, 0.3, 0))]),
    ]
    for d in shapes:
        m = total_mass(d)
        assert form_factor_sq(d, np.zeros(3)) == pytest.approx(m * m, rel=1e-13)


def test_sphere_form_factor_at_kr_pi():
    R = 0.37
    d = sphere(R, mass=1.0)
    k = np.array([math.pi / R, 0.0, 0.0])
    assert form_factor_sq(d, k) == pytest.approx(SPHERE_FF_AT_KR_PI, rel=1e-13)


def test_two_point_interference_closed_form():
    m, a = 0.4, 1.3
    d = composite([(point_mass(m), (a, 0, 0)), (point_mass(m), (-a, 0, 0))])
    for ka in (0.0, 0.3, 1.0, 2.2):
        k = np.array([ka, 0.0, 0.0]) / a  # along the pair axis
        got = form_factor_sq(d, k)
        assert got == pytest.approx(4 * m * m * math.cos(ka) ** 2, abs=4 * m * m * 1e-14)


def test_cuboid_factorizes():
    d = cuboid(0.1, 0.2, 0.3, mass=2.0)
    k = np.array([7.0, 11.0, 13.0])
    expect = (2.0 * sinc_kernel(0.5 * 7.0 * 0.1) * sinc_kernel(0.5 * 11.0 * 0.2)
              * sinc_kernel(0.5 * 13.0 * 0.3)) ** 2
    assert form_factor_sq(d, k) == pytest.approx(float(expect), rel=1e-13)


def test_cylinder_form_factor_split():
    d = cylinder(0.02, 0.1, axis=(0, 0, 1), mass=1.5)
    k = np.array([3.0, 4.0, 9.0])  # k_perp = 5, k_par = 9
    expect = (1.5 * disc_kernel(5.0 * 0.02) * sinc_kernel(0.5 * 9.0 * 0.1)) ** 2
    assert form_factor_sq(d, k) == pytest.approx(float(expect), rel=1e-13)


def test_form_factor_vectorized_shape():
    d = sphere(0.01, mass=1.0)
    k = np.zeros((4, 5, 3))
    out = form_factor_sq(d, k)
    assert out.shape == (4, 5)
    np.testing.assert_allclose(out, 1.0)


# --- invariants ----------------------------------------------------------------

@given(st.floats(min_value=-1e4, max_value=1e4), st.floats(min_value=-1e4, max_value=1e4),
       st.floats(min_value=-1e4, max_value=1e4))
@settings(max_examples=200, deadline=None)
def test_form_factor_bounded_by_mass_squared(kx, ky, kz):
    d = cylinder(0.03, 0.2, mass=2.5)
    v = form_factor_sq(d, np.array([kx, ky, kz]))
    assert 0.0 <= v <= 2.5**2 * (1 + 1e-12)


def test_rotation_invariance():
    rng = np.random.default_rng(42)
    base_axis = np.array([0.0, 0.0, 1.0])
    d = cylinder(0.05, 0.3, axis=tuple(base_axis), mass=1.0)
    pair = composite([(sphere(0.02, mass=0.5), (0.1, 0.05, -0.2)),
                      (point_mass(0.5), (-0.1, 0.0, 0.2))])
    for _ in range(12):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        k = rng.normal(size=3) * 30.0
        # cylinder: rotate the axis with the wave vector
        d_rot = cylinder(0.05, 0.3, axis=tuple(q @ base_axis), mass=1.0)
        np.testing.assert_allclose(form_factor_sq(d_rot, q @ k),
                                   form_factor_sq(d, k), rtol=1e-10)
        # composite: rotate offsets with the wave vector
        pair_rot = composite([(sphere(0.02, mass=0.5), tuple(q @ np.array([0.1, 0.05, -0.2]))),
                              (point_mass(0.5), tuple(q @ np.array([-0.1, 0.0, 0.2])))])
        np.testing.assert_allclose(form_factor_sq(pair_rot, q @ k),
                                   form_factor_sq(pair, k), rtol=1e-10)


def test_cuboid_axis_permutation_invariance():
    d = cuboid(0.1, 0.2, 0.3, mass=1.0)
    d_perm = cuboid(0.3, 0.1, 0.2, mass=1.0)
    k = np.array([5.0, 7.0, 11.0])
    k_perm = np.array([11.0, 5.0, 7.0])
    assert form_factor_sq(d, k) == pytest.approx(form_factor_sq(d_perm, k_perm), rel=1e-13)


def test_kernel_series_matches_direct_at_switch():
    # straddle each kernel's own series boundary so closely that the branch
    # change is the only difference; series and direct must agree to 1e-10
    for kern, cut in ((sinc_kernel, 1e-4), (sphere_kernel, 1e-2),
                      (disc_kernel, 1e-4)):
        below = float(kern(cut * (1.0 - 1e-13)))
        above = float(kern(cut * (1.0 + 1e-13)))
        assert below == pytest.approx(above, rel=1e-10)
        assert float(kern(0.0)) == 1.0


def test_cuboid_matches_equal_volume_sphere_at_small_k():
    # both reduce to m^2 (1 - k^2 Rg^2/3 + ...) with matching second moments
    L = 0.01
    R = (3.0 * L**3 / (4.0 * math.pi)) ** (1.0 / 3.0)
    dc = cuboid(L, L, L, mass=1.0)
    ds = sphere(R, mass=1.0)
    # gyration radii differ slightly; compare suppression at k L << 1
    k = np.array([1e-2 / L, 0.0, 0.0])
    fc = form_factor_sq(dc, k)
    fs = form_factor_sq(ds, k)
    assert fc == pytest.approx(1.0, abs=5e-5)
    assert fs == pytest.approx(1.0, abs=5e-5)
    # leading-order deficits match to the ratio of second moments along x:
    # cube <x^2> = L^2/12, sphere <x^2> = R^2/5
    deficit_ratio = (1.0 - fc) / (1.0 - fs)
    expect = (L**2 / 12.0) / (R**2 / 5.0)
    assert deficit_ratio == pytest.approx(expect, rel=1e-3)


def test_bessel_j1_against_fixtures():
    for x, ref in J1_TABLE:
        got = float(bessel_j1(x))
        assert got == pytest.approx(ref, abs=2e-15 + 1e-13 * abs(ref)), f"x={x}"


# --- validation ----------------------------------------------------------------

def test_negative_radius_rejected():
    with pytest.raises(ValidationError):
        sphere(-0.1, density=1.0)


def test_both_density_and_mass_rejected():
    with pytest.raises(ValidationError):
        sphere(0.1, density=1.0, mass=1.0)
    with pytest.raises(ValidationError):
        sphere(0.1)


def test_zero_axis_rejected():
    with pytest.raises(ValidationError):
        cylinder(0.1, 0.2, axis=(0, 0, 0), density=1.0)


def test_empty_composite_rejected():
    with pytest.raises(ValidationError):
        composite([])


def test_validate_distribution_passes_bundled_like_shapes():
    for d in (sphere(1.0, density=1.0), cuboid(1, 2, 3, density=1.0),
              cylinder(1.0, 2.0, density=1.0), point_mass(1.0)):
        assert validate_distribution(d) is d


def test_circumradius():
    assert circumradius(sphere(0.5, density=1)) == 0.5
    assert circumradius(cuboid(2, 2, 2, density=1)) == pytest.approx(math.sqrt(3))
    assert circumradius(cylinder(3, 8, density=1)) == pytest.approx(5.0)
    assert circumradius(point_mass(1.0)) == 0.0
    d = composite([(sphere(0.5, density=1), (2, 0, 0))])
    assert circumradius(d) == pytest.approx(2.5)


def test_with_measurement_axis_normalizes():
    d = with_measurement_axis(sphere(1.0, density=1.0), (0, 0, 2))
    assert d.measurement_axis == (0.0, 0.0, 1.0)
