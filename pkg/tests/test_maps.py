import cmath
import math

import numpy as np
import pytest

from cyldyn.errors import (AtEssentialSingularity, ExpOverflow, InvalidSpec,
                           ParamSingularity)
from cyldyn.kernel import INF, chordal
from cyldyn.maps import (END_CRITICAL_FIXED, END_ESSENTIAL, END_REGULAR,
                         ProjectableMap, arnold_standard, buff_ruckert,
                         double_standard, end_multiplier, exp_coord,
                         is_class_R, lift_eval, map_from_json, map_to_json,
                         mero_standard, project_derivative, project_eval,
                         pseudotrig, semiconjugacy_residual, sine_family,
                         singular_data)

PI = math.pi


def iterate_lift(m, z, n):
    for _ in range(n):
        z = lift_eval(m, z)
    return z


ALL_PRESETS = [
    pseudotrig(-3j * PI),
    pseudotrig(-1 - 2.9781881070693568j),
    buff_ruckert(2j / PI),
    mero_standard(0.5, 0.61783128, 0.25),
    sine_family(-PI / 2),
    double_standard(),
    arnold_standard(0.3, 0.8),
]


def test_preset_singular_parameters():
    with pytest.raises(ParamSingularity):
        pseudotrig(1j * PI)
    with pytest.raises(ParamSingularity):
        pseudotrig(-1j * PI)
    with pytest.raises(InvalidSpec):
        sine_family(0.0)
    with pytest.raises(InvalidSpec):
        mero_standard(1.5, 0.1, 0.25)  # |a| >= 1


def test_constant_deformation_rejected():
    from cyldyn.kernel import Polynomial, RationalMap
    with pytest.raises(InvalidSpec):
        ProjectableMap(1, RationalMap(Polynomial([2.0]), Polynomial([1.0])))


def test_project_eval_frozen_value():
    # frozen oracle: at lam = -3*pi*i the projection sends 4 to 4*e^(3/2)
    m = pseudotrig(-3j * PI)
    got = project_eval(m, 4.0).value
    assert abs(got - 4.0 * math.exp(1.5)) < 1e-9


def test_project_eval_essential_guard():
    m = pseudotrig(-3j * PI)  # essential singularity at w = 2
    assert [e.value for e in m.essential_points()] == [2.0 + 0j]
    with pytest.raises(AtEssentialSingularity):
        project_eval(m, 2.0)
    with pytest.raises(AtEssentialSingularity):
        project_eval(m, 2.0 + 1e-13)
    # just outside the guard radius evaluation works
    project_eval(m, 2.0 + 1e-9)


def class_r_cover(ell):
    """A class-R map of degree cover ell: Phi = 1/(w-2), finite at both ends."""
    from cyldyn.kernel import Polynomial, RationalMap
    return ProjectableMap(ell, RationalMap(Polynomial([1.0]), Polynomial([-2.0, 1.0])))


def test_project_eval_ends():
    m1 = pseudotrig(-3j * PI)          # ell = 1: ends fixed
    assert project_eval(m1, 0).value == 0
    assert project_eval(m1, INF).is_infinity
    m2 = class_r_cover(2)              # ell = 2: ends fixed
    assert project_eval(m2, 0).value == 0
    assert project_eval(m2, INF).is_infinity
    m3 = class_r_cover(-1)             # ell = -1: ends swap
    assert project_eval(m3, 0).is_infinity
    assert project_eval(m3, INF).value == 0
    # the double-standard sine term blows up at both ends
    for ms in (sine_family(1.0), double_standard()):
        with pytest.raises(AtEssentialSingularity):
            project_eval(ms, 0)
        with pytest.raises(AtEssentialSingularity):
            project_eval(ms, INF)


def test_lift_eval_frozen_values():
    # the sine member at beta = -pi/2 swaps the quarter points
    ms = sine_family(-PI / 2)
    assert abs(lift_eval(ms, 0.25) - (-0.25)) < 1e-12
    assert abs(lift_eval(ms, -0.25) - 0.25) < 1e-12
    # arnold matches its real closed form
    ma = arnold_standard(0.3, 0.8)
    th = 0.41
    want = th + 0.3 - (0.8 / (2 * PI)) * math.sin(2 * PI * th)
    assert abs(lift_eval(ma, th) - want) < 1e-12


def test_lift_eval_overflow():
    m = pseudotrig(-3j * PI)
    with pytest.raises(ExpOverflow):
        lift_eval(m, 200j)


def test_exp_coord_saturates():
    assert exp_coord(1e6j).value == 0
    assert exp_coord(-1e6j).is_infinity


def test_pseudoperiodic_translation_sweep():
    # f^n(z + k) = f^n(z) + ell^n * k
    rng = np.random.default_rng(101)
    for m in [pseudotrig(-3j * PI), double_standard(), sine_family(0.7),
              arnold_standard(0.3, 0.8)]:
        checked = 0
        while checked < 50:
            z = complex(rng.uniform(-2, 2), rng.uniform(-0.5, 0.5))
            k = int(rng.integers(-3, 4))
            n = int(rng.integers(1, 4))
            try:
                a = iterate_lift(m, z + k, n)
                b = iterate_lift(m, z, n)
            except (ExpOverflow, AtEssentialSingularity):
                continue
            assert abs(a - (b + (m.ell ** n) * k)) <= 1e-8 * (1 + abs(b))
            checked += 1


def test_projection_derivative_relation_sweep():
    # g'(e^(2 pi i z)) = e^(2 pi i (f(z)-z)) f'(z), both sides by central FD
    rng = np.random.default_rng(55)
    h = 1e-6
    for m in [pseudotrig(-3j * PI), double_standard(), sine_family(0.7)]:
        checked = 0
        while checked < 35:
            z = complex(rng.uniform(-1, 1), rng.uniform(-0.4, 0.4))
            w = cmath.exp(2j * PI * z)
            try:
                fz = lift_eval(m, z)
                fp = (lift_eval(m, z + h) - lift_eval(m, z - h)) / (2 * h)
                gp = (project_eval(m, w * cmath.exp(h)).value -
                      project_eval(m, w * cmath.exp(-h)).value) / (2 * w * math.sinh(h))
            except (ExpOverflow, AtEssentialSingularity):
                continue
            want = cmath.exp(2j * PI * (fz - z)) * fp
            if abs(want) > 1e4:
                continue
            assert abs(gp - want) <= 1e-4 * max(1.0, abs(want))
            checked += 1


def test_project_derivative_closed_form():
    m = pseudotrig(-3j * PI)
    h = 1e-7
    for w in (0.5 + 0.3j, 4.0, -1.2 + 0.1j):
        want = (project_eval(m, w + h).value - project_eval(m, w - h).value) / (2 * h)
        got = project_derivative(m, w).value
        assert abs(got - want) <= 1e-5 * max(1.0, abs(want))


def test_semiconjugacy_residual_sweep():
    rng = np.random.default_rng(77)
    for m in ALL_PRESETS:
        checked = 0
        while checked < 40:
            z = complex(rng.uniform(-2, 2), rng.uniform(-0.6, 0.6))
            try:
                r = semiconjugacy_residual(m, z)
            except (ExpOverflow, AtEssentialSingularity):
                continue
            assert r <= 1e-9
            checked += 1


def test_singular_data_pseudotrig():
    lam = -3j * PI
    m = pseudotrig(lam)
    sd = singular_data(m)
    B = (lam - 1j * PI) / (lam + 1j * PI)
    assert len(sd.essential_singularities) == 1
    assert abs(sd.essential_singularities[0].value - B) < 1e-10
    crit = sorted((c.value for c in sd.critical_points if not c.is_infinity),
                  key=lambda v: v.real)
    assert len(crit) == 2
    assert abs(crit[0] - 1.0) < 1e-9          # the root is critical
    assert abs(crit[1] - B * B) < 1e-9        # the free critical point B^2
    assert sd.end_status_zero == END_REGULAR
    assert sd.end_status_infinity == END_REGULAR
    assert sd.asymptotic_values[0].value == 0
    assert sd.asymptotic_values[1].is_infinity


def test_singular_data_sine_family():
    m = sine_family(-PI / 2)
    sd = singular_data(m)
    assert sd.end_status_zero == END_ESSENTIAL
    assert sd.end_status_infinity == END_ESSENTIAL
    crit = sorted((c.value for c in sd.critical_points), key=lambda v: v.imag)
    assert len(crit) == 2
    assert abs(crit[0] - (-1j)) < 1e-9 and abs(crit[1] - 1j) < 1e-9


def test_singular_data_end_criticality():
    # class-R cover of degree 2: both ends are critical fixed points
    sd = singular_data(class_r_cover(2))
    assert sd.end_status_zero == END_CRITICAL_FIXED
    assert sd.end_status_infinity == END_CRITICAL_FIXED
    # negative cover: ends swap in a critical 2-cycle
    from cyldyn.maps import END_CRITICAL_2CYCLE
    sd = singular_data(class_r_cover(-2))
    assert sd.end_status_zero == END_CRITICAL_2CYCLE
    assert sd.end_status_infinity == END_CRITICAL_2CYCLE
    # the double-standard sine term makes both ends essential
    sd = singular_data(double_standard())
    assert sd.end_status_zero == END_ESSENTIAL
    assert sd.end_status_infinity == END_ESSENTIAL


def test_end_multipliers():
    lam = -3j * PI
    m = pseudotrig(lam)
    # frozen oracles: e^(1/2) at the 0 end, e^(-1) at the infinity end
    assert abs(end_multiplier(m, "zero") - math.exp(0.5)) < 1e-12
    assert abs(end_multiplier(m, "infinity") - math.exp(-1.0)) < 1e-12
    b = buff_ruckert(2j / PI)
    assert abs(end_multiplier(b, "zero") - cmath.exp(2j * PI * (2j / PI))) < 1e-12
    assert abs(end_multiplier(b, "infinity") - 1.0) < 1e-12  # parabolic end
    assert end_multiplier(sine_family(1.0), "zero") is None


def test_is_class_r():
    ok, rep = is_class_R(pseudotrig(-3j * PI))
    assert ok and rep == []
    ok, rep = is_class_R(mero_standard(0.5, 0.61783128, 0.25))
    assert ok
    ok, rep = is_class_R(sine_family(1.0))
    assert not ok
    assert any("pole at 0" in r for r in rep)
    ok, rep = is_class_R(arnold_standard(0.3, 0.8))
    assert not ok


def test_mero_standard_pole_locations():
    m = mero_standard(0.5, 0.61783128, 0.25)
    poles = sorted(e.value.real for e in m.essential_points())
    assert abs(poles[0] - 0.5) < 1e-10
    assert abs(poles[1] - 2.0) < 1e-10


def test_circle_restriction_agrees_with_lift():
    for m in (mero_standard(0.5, 0.61783128, 0.25), arnold_standard(0.3, 0.8)):
        for th in (0.0, 0.21, 0.5, 0.9):
            fz = lift_eval(m, th)
            assert abs(fz.imag) < 1e-12
            assert abs(m.circle_map(th) - fz.real) < 1e-12


def test_json_round_trip_preset():
    m = pseudotrig(-3j * PI)
    d = map_to_json(m)
    assert d["preset"] == "pseudotrig"
    m2 = map_from_json(d)
    assert m2.ell == 1 and m2.phi == m.phi


def test_json_round_trip_explicit():
    m = mero_standard(0.5, 0.61783128, 0.25)
    d = map_to_json(m)
    d2 = {"ell": d["ell"], "phi": d["phi"]}
    m2 = map_from_json(d2)
    assert np.allclose(m2.phi.num.coeffs, m.phi.num.coeffs)
    assert np.allclose(m2.phi.den.coeffs, m.phi.den.coeffs)


def test_json_unknown_preset():
    with pytest.raises(InvalidSpec):
        map_from_json({"preset": "nope"})
    with pytest.raises(InvalidSpec):
        map_from_json({"ell": 1})
