import math

import numpy as np
import pytest

from cyldyn.errors import InvalidDegree
from cyldyn.kernel import (INF, Polynomial, RationalMap, SpherePoint, chordal,
                           poly_roots, rational_derivative, rational_eval)

PI = math.pi


def roots_as_pairs(p):
    return sorted(((r.value, m) for r, m in poly_roots(p)),
                  key=lambda t: (t[0].real, t[0].imag))


def test_sphere_point_rejects_nan():
    with pytest.raises(ValueError):
        SpherePoint(complex(float("nan"), 0.0))
    with pytest.raises(ValueError):
        SpherePoint.finite(0.0, float("nan"))


def test_sphere_point_basics():
    p = SpherePoint.finite(1.5, -2.0)
    assert p.value == 1.5 - 2.0j
    assert not p.is_infinity
    assert INF.is_infinity
    with pytest.raises(ValueError):
        INF.value
    assert SpherePoint(3.0) == SpherePoint(3.0 + 0j)


def test_chordal_metric():
    assert chordal(0, 0) == 0.0
    assert chordal(INF, INF) == 0.0
    assert abs(chordal(0, INF) - 1.0) < 1e-15
    # symmetric and scales like |dz| near the origin
    assert abs(chordal(1e-4, 2e-4) - 1e-4) < 1e-11
    assert chordal(2.0, INF) == chordal(INF, 2.0)


def test_polynomial_normalization():
    assert Polynomial([0, 0, 0]).is_zero
    assert Polynomial([]).degree == -1
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert list(p.coeffs) == [1, 2]


def test_polynomial_arithmetic():
    p = Polynomial([1, 1])       # 1 + w
    q = Polynomial([-1, 1])      # -1 + w
    assert (p * q).coeffs.tolist() == [(-1 + 0j), 0j, (1 + 0j)]
    assert (p + q).coeffs.tolist() == [0j, (2 + 0j)]
    assert p.derivative().coeffs.tolist() == [(1 + 0j)]
    assert Polynomial([2, -3, 1]).deflate(1.0).coeffs.tolist() == [(-2 + 0j), (1 + 0j)]


def test_poly_roots_quadratic():
    got = roots_as_pairs(Polynomial([2, -3, 1]))  # (w-1)(w-2)
    assert len(got) == 2
    assert abs(got[0][0] - 1.0) < 1e-12 and got[0][1] == 1
    assert abs(got[1][0] - 2.0) < 1e-12 and got[1][1] == 1


def test_poly_roots_mobius_denominator():
    # denominator of the deformation part at lam = -3*pi*i has its one root at 2
    lam = -3j * PI
    den = Polynomial([-(lam - 1j * PI), lam + 1j * PI])
    got = roots_as_pairs(den)
    assert len(got) == 1
    assert abs(got[0][0] - 2.0) < 1e-12


def test_poly_roots_triple_root():
    got = roots_as_pairs(Polynomial([-1, 3, -3, 1]))  # (w-1)^3
    assert len(got) == 1
    root, mult = got[0]
    assert mult == 3
    assert abs(root - 1.0) < 1e-8


def test_poly_roots_rejects_constants():
    with pytest.raises(InvalidDegree):
        poly_roots(Polynomial([5.0]))
    with pytest.raises(InvalidDegree):
        poly_roots(Polynomial([]))


def test_poly_roots_origin_multiplicity():
    # w^2 * (w - 3)
    got = roots_as_pairs(Polynomial([0, 0, -3, 1]))
    assert got[0] == (0j, 2)
    assert abs(got[1][0] - 3.0) < 1e-10


def test_poly_roots_reconstruction_sweep():
    # random coefficients, degree <= 8: leading * prod (w - r)^m must
    # reproduce the coefficients
    rng = np.random.default_rng(20260815)
    for _ in range(60):
        deg = int(rng.integers(1, 9))
        c = rng.uniform(-2, 2, deg + 1) + 1j * rng.uniform(-2, 2, deg + 1)
        p = Polynomial(c)
        if p.degree < 1:
            continue
        prod = Polynomial([p.coeffs[-1]])
        for r, m in poly_roots(p):
            for _ in range(m):
                prod = prod * Polynomial([-r.value, 1.0])
        assert prod.degree == p.degree
        err = np.max(np.abs(prod.coeffs - p.coeffs))
        assert err < 1e-7, f"coeffs {c} reconstruction error {err}"


def test_poly_roots_residual_bound():
    rng = np.random.default_rng(7)
    for _ in range(40):
        deg = int(rng.integers(1, 9))
        c = rng.uniform(-2, 2, deg + 1) + 1j * rng.uniform(-2, 2, deg + 1)
        p = Polynomial(c)
        if p.degree < 1:
            continue
        scale = float(np.max(np.abs(p.coeffs)))
        for r, m in poly_roots(p):
            if m == 1:
                assert abs(p(r.value)) <= 1e-9 * scale * 50


def mobius(lam):
    """Deformation part of the sine-type root finder: -(w-1)/((lam+pi i)w-(lam-pi i))."""
    return RationalMap(Polynomial([1, -1]),
                       Polynomial([-(lam - 1j * PI), lam + 1j * PI]))


def test_rational_eval_at_points():
    # frozen: value at i for the lam=0 member is -1/pi
    got = rational_eval(mobius(0j), 1j)
    assert abs(got.value - (-1 / PI)) < 1e-14
    # frozen: value at 0 is -1/(lam - pi i)
    lam = -3j * PI
    got = rational_eval(mobius(lam), 0)
    assert abs(got.value - (-1 / (lam - 1j * PI))) < 1e-14


def test_rational_eval_total_on_sphere():
    lam = -3j * PI
    r = mobius(lam)
    # value at infinity: ratio of leading coefficients = -1/(lam + pi i)
    vinf = rational_eval(r, INF)
    assert abs(vinf.value - (-1 / (lam + 1j * PI))) < 1e-14
    # the denominator root is a pole
    pole = (lam - 1j * PI) / (lam + 1j * PI)
    assert rational_eval(r, pole).is_infinity
    # degree mismatch cases
    up = RationalMap(Polynomial([0, 0, 1]), Polynomial([1, 1]))   # w^2/(1+w)
    assert rational_eval(up, INF).is_infinity
    down = RationalMap(Polynomial([1]), Polynomial([1, 0, 1]))    # 1/(1+w^2)
    assert rational_eval(down, INF).value == 0


def test_rational_eval_matches_large_argument_limit():
    # value at infinity agrees with evaluation at 1/eps
    rng = np.random.default_rng(11)
    eps = 1e-8
    for _ in range(25):
        nd = int(rng.integers(0, 4))
        dd = int(rng.integers(1, 4))
        num = Polynomial(rng.uniform(-2, 2, nd + 1) + 1j * rng.uniform(-2, 2, nd + 1))
        den = Polynomial(rng.uniform(-2, 2, dd + 1) + 1j * rng.uniform(-2, 2, dd + 1))
        if num.is_zero or den.is_zero:
            continue
        r = RationalMap(num, den)
        vinf = rational_eval(r, INF)
        vbig = rational_eval(r, 1.0 / eps)
        if vinf.is_infinity:
            assert chordal(vbig, INF) < 1e-4
        elif vinf.value == 0:
            assert abs(vbig.value) < 1e-4
        else:
            assert abs(vbig.value - vinf.value) <= 1e-4 * abs(vinf.value)


def test_rational_map_coprime_reduction():
    # (w-1)(w-2) / ((w-1)(w-3)) reduces to (w-2)/(w-3)
    r = RationalMap(Polynomial([2, -3, 1]), Polynomial([3, -4, 1]))
    assert r.num.degree == 1 and r.den.degree == 1
    assert abs(rational_eval(r, 0).value - 2.0 / 3.0) < 1e-10
    # coprime within 1e-10: no root pair of num/den closer than that
    for rn, _ in poly_roots(r.num):
        for rd, _ in poly_roots(r.den):
            assert chordal(rn, rd) > 1e-10


def test_rational_map_rejects_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RationalMap(Polynomial([1]), Polynomial([]))


def test_rational_derivative_closed_form():
    # derivative of the Mobius deformation: -2*pi*i / ((lam+pi i)w - (lam-pi i))^2
    lam = -3j * PI
    d = rational_derivative(mobius(lam))
    for w in (0.3 + 0.2j, 4.0, -1.0 + 1.5j):
        want = -2j * PI / ((lam + 1j * PI) * w - (lam - 1j * PI)) ** 2
        assert abs(rational_eval(d, w).value - want) < 1e-12 * abs(want)


def test_rational_derivative_fd_sweep():
    rng = np.random.default_rng(42)
    h = 1e-6
    checked = 0
    while checked < 100:
        nd = int(rng.integers(1, 4))
        dd = int(rng.integers(1, 4))
        num = Polynomial(rng.uniform(-2, 2, nd + 1) + 1j * rng.uniform(-2, 2, nd + 1))
        den = Polynomial(rng.uniform(-2, 2, dd + 1) + 1j * rng.uniform(-2, 2, dd + 1))
        if num.is_zero or den.is_zero or den.degree < 1:
            continue
        r = RationalMap(num, den)
        d = rational_derivative(r)
        w = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(r.den(w)) < 0.1:  # stay away from poles
            continue
        fd = (r(w + h) - r(w - h)) / (2 * h)
        dv = rational_eval(d, w)
        if dv.is_infinity:
            continue
        assert abs(dv.value - fd) <= 1e-5 * max(1.0, abs(fd))
        checked += 1
