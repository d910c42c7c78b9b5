import math

import pytest
from scipy.special import zeta as scipy_zeta

from packbounds import (
    BoundInputs,
    bound_table_csv,
    convex_planar_bound,
    counting_upper_bound,
    dominates_li_yau,
    general_dimension_floors,
    li_yau_bound,
    polya_bound,
    theorem1_bound,
    unit_ball_volume,
    weyl_constant,
)
from packbounds.bounds import gamma_fn, zeta_fn


def test_unit_ball_volumes():
    assert math.isclose(unit_ball_volume(1), 2.0, rel_tol=1e-12)
    assert math.isclose(unit_ball_volume(2), math.pi, rel_tol=1e-12)
    assert math.isclose(unit_ball_volume(3), 4.0 * math.pi / 3.0, rel_tol=1e-12)


def test_unit_ball_volume_rejects_nonpositive():
    with pytest.raises(ValueError):
        unit_ball_volume(0)


def test_weyl_constants():
    assert math.isclose(weyl_constant(2), 4.0 * math.pi, rel_tol=1e-12)
    assert math.isclose(weyl_constant(1), math.pi ** 2, rel_tol=1e-12)
    expect3 = (2.0 * math.pi) ** 2 / (4.0 * math.pi / 3.0) ** (2.0 / 3.0)
    assert math.isclose(weyl_constant(3), expect3, rel_tol=1e-12)


def test_gamma_matches_stdlib():
    """The local Lanczos evaluation must sit within 1e-12 of math.gamma."""
    for x in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.5, 6.0, 10.5, 20.0, 50.25, 101.0):
        assert math.isclose(gamma_fn(x), math.gamma(x), rel_tol=1e-12)


def test_zeta_matches_scipy():
    for s in (2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 20.0, 50.0):
        assert math.isclose(zeta_fn(s), float(scipy_zeta(s, 1)), rel_tol=1e-12)


def test_polya_square_values():
    one = BoundInputs(n=2, volume=1.0, delta=1.0, k=1)
    ten = BoundInputs(n=2, volume=1.0, delta=1.0, k=10)
    assert math.isclose(polya_bound(one).value, 4.0 * math.pi, rel_tol=1e-12)
    assert math.isclose(polya_bound(ten).value, 40.0 * math.pi, rel_tol=1e-12)


def test_polya_volume_scaling():
    t = 3.0
    base = polya_bound(BoundInputs(n=2, volume=1.0, delta=1.0, k=7)).value
    scaled = polya_bound(BoundInputs(n=2, volume=t * t, delta=1.0, k=7)).value
    assert math.isclose(scaled, base / t ** 2, rel_tol=1e-12)


def test_li_yau_values_and_ratio():
    assert math.isclose(
        li_yau_bound(BoundInputs(n=2, volume=1.0, delta=1.0, k=1)).value,
        2.0 * math.pi,
        rel_tol=1e-12,
    )
    for n in range(1, 8):
        for k in (1, 5, 200):
            b = BoundInputs(n=n, volume=2.7, delta=0.5, k=k)
            assert math.isclose(
                li_yau_bound(b).value / polya_bound(b).value, n / (n + 2.0),
                rel_tol=1e-14,
            )


def test_theorem1_tiling_delta_equals_polya():
    for k in (1, 3, 17, 240):
        b = BoundInputs(n=2, volume=1.8, delta=1.0, k=k)
        assert theorem1_bound(b).value == polya_bound(b).value


def test_theorem1_hexagonal_floor_value():
    b = BoundInputs(n=2, volume=1.0, delta=math.sqrt(3.0) / 2.0, k=1)
    assert math.isclose(theorem1_bound(b).value, 2.0 * math.sqrt(3.0) * math.pi, rel_tol=1e-12)


def test_theorem1_disc_value():
    b = BoundInputs(n=2, volume=math.pi, delta=math.pi / math.sqrt(12.0), k=1)
    assert math.isclose(theorem1_bound(b).value, 4.0 * math.pi / math.sqrt(12.0), rel_tol=1e-12)


def test_theorem1_monotonicity_and_homogeneity():
    base = BoundInputs(n=3, volume=1.0, delta=0.5, k=5)
    up_delta = BoundInputs(n=3, volume=1.0, delta=0.6, k=5)
    up_k = BoundInputs(n=3, volume=1.0, delta=0.5, k=6)
    up_v = BoundInputs(n=3, volume=2.0, delta=0.5, k=5)
    v0 = theorem1_bound(base).value
    assert theorem1_bound(up_delta).value > v0
    assert theorem1_bound(up_k).value > v0
    assert theorem1_bound(up_v).value < v0
    t = 1.7
    scaled = BoundInputs(n=3, volume=t ** 3 * 1.0, delta=0.5, k=5)
    assert math.isclose(theorem1_bound(scaled).value, v0 / t ** 2, rel_tol=1e-12)


def test_convex_planar_values():
    assert math.isclose(convex_planar_bound(1.0, 1).value, 2.0 * math.sqrt(3.0) * math.pi, rel_tol=1e-14)
    disc_val = convex_planar_bound(math.pi, 1).value
    assert math.isclose(disc_val, 2.0 * math.sqrt(3.0), rel_tol=1e-14)
    assert disc_val <= 5.783185962946785  # first eigenvalue of the unit disc


def test_convex_planar_is_theorem1_at_hexagonal_floor():
    for volume in (0.3, 1.0, 9.0):
        for k in (1, 2, 44):
            t1 = theorem1_bound(
                BoundInputs(n=2, volume=volume, delta=math.sqrt(3.0) / 2.0, k=k)
            ).value
            c3 = convex_planar_bound(volume, k).value
            assert math.isclose(c3, t1, rel_tol=1e-15)


def test_counting_round_trip_is_exact():
    for n in range(1, 11):
        for k in (1, 2, 10, 997, 10 ** 6):
            b = BoundInputs(n=n, volume=2.3, delta=0.7, k=k)
            x = theorem1_bound(b).value
            back = counting_upper_bound(n, 2.3, 0.7, x)
            assert math.isclose(back, k, rel_tol=1e-12)


def test_counting_known_value_and_zero():
    assert math.isclose(counting_upper_bound(2, 1.0, 1.0, 4.0 * math.pi), 1.0, rel_tol=1e-12)
    assert counting_upper_bound(2, 1.0, 1.0, 0.0) == 0.0


def test_counting_rejects_negative_x():
    with pytest.raises(ValueError):
        counting_upper_bound(2, 1.0, 1.0, -1.0)


def test_dominance_examples():
    assert dominates_li_yau(2, math.sqrt(3.0) / 2.0)
    assert not dominates_li_yau(2, 0.5)  # boundary case is strict
    assert dominates_li_yau(3, math.pi / math.sqrt(18.0))


def test_dominance_matches_closed_form_on_grid():
    for n in range(1, 11):
        for i in range(1, 11):
            delta = i / 10.0
            assert dominates_li_yau(n, delta) == (delta ** (2.0 / n) > n / (n + 2.0))


def test_bound_ordering_under_dominance():
    for n in (2, 3, 5):
        for delta in (0.3, 0.7, 0.95, 1.0):
            b = BoundInputs(n=n, volume=1.4, delta=delta, k=9)
            li = li_yau_bound(b).value
            t1 = theorem1_bound(b).value
            po = polya_bound(b).value
            assert t1 <= po + 1e-15
            if dominates_li_yau(n, delta):
                assert t1 > li
            else:
                assert t1 <= li + 1e-15


def test_floors_match_zeta_oracle():
    assert math.isclose(
        general_dimension_floors(2, "minkowski-hlawka"), math.pi ** 2 / 12.0, rel_tol=1e-12
    )
    assert math.isclose(
        general_dimension_floors(3, "minkowski-hlawka"),
        float(scipy_zeta(3.0, 1)) / 4.0,
        rel_tol=1e-12,
    )
    assert math.isclose(
        general_dimension_floors(3, "schmidt", c=1.0), 3.0 ** 1.5 / 64.0, rel_tol=1e-12
    )


def test_schmidt_requires_constant():
    with pytest.raises(ValueError):
        general_dimension_floors(3, "schmidt")


def test_floors_reject_low_dimension():
    with pytest.raises(ValueError):
        general_dimension_floors(1, "minkowski-hlawka")


def test_bound_inputs_validation():
    with pytest.raises(ValueError):
        BoundInputs(n=2, volume=-1.0, delta=0.5, k=1)
    with pytest.raises(ValueError):
        BoundInputs(n=2, volume=1.0, delta=0.0, k=1)
    with pytest.raises(ValueError):
        BoundInputs(n=2, volume=1.0, delta=1.2, k=1)
    with pytest.raises(ValueError):
        BoundInputs(n=2, volume=1.0, delta=0.5, k=0)


def test_bound_table_csv_shape():
    text = bound_table_csv(n=2, volume=1.0, delta=0.9, ks=range(1, 5))
    lines = text.strip().split("\n")
    assert lines[0] == "k,polya,li_yau,theorem1,corollary3,computed_lambda"
    assert len(lines) == 5
    row1 = lines[1].split(",")
    assert int(row1[0]) == 1
    assert math.isclose(float(row1[1]), 4.0 * math.pi, rel_tol=1e-12)
    assert math.isclose(float(row1[4]), 2.0 * math.sqrt(3.0) * math.pi, rel_tol=1e-12)
    assert row1[5] == ""


def test_bound_table_corollary_blank_outside_plane():
    text = bound_table_csv(n=3, volume=1.0, delta=0.7, ks=range(1, 3))
    for line in text.strip().split("\n")[1:]:
        assert line.split(",")[4] == ""
