"""Root-finder family: cylinder maps arising as Newton updates.

A Newton update for a function of the form

    F(z) = e^(Lambda z) * w^m0 * P(w) * e^(Q(w) + Qt(1/w)),   w = e^(2 pi i z)

is itself a cylinder map with ell = 1 and a rational deformation part

    R(w) = -P(w) / (Lambda P(w) + 2 pi i w (...)),

computed here in closed form.  The family parameter exposed to users is
lam = Lambda + pi*i*(2*m0 + deg P); the sine-type member has
P = w - 1, m0 = 0, Q = Qt = 0 and deformation part

    M(w) = -(w - 1) / ((lam + pi i) w - (lam - pi i)).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import InvalidSpec, NotSinglePole, ParamSingularity, ZeroSigma
from .kernel import (INF, Polynomial, RationalMap, SpherePoint, exp_clamped,
                     poly_roots, rational_eval)
from .maps import ProjectableMap, pseudotrig

PI = math.pi
TWO_PI_I = 2j * PI


class NewtonSpec:
    """Structural data of the exponential-periodic input function.

    Fields mirror the JSON interchange format: Lambda (complex), m0 (int),
    and the three polynomials P, Q, Qt (lowest-first coefficients).  P must
    not vanish at 0; it must have a root in the punctured plane unless
    allow_zero_free is set.
    """

    def __init__(self, Lambda, m0=0, P=(1.0,), Q=(), Qt=(), allow_zero_free=False):
        self.Lambda = complex(Lambda)
        self.m0 = int(m0)
        self.P = P if isinstance(P, Polynomial) else Polynomial(P)
        self.Q = Q if isinstance(Q, Polynomial) else Polynomial(Q)
        self.Qt = Qt if isinstance(Qt, Polynomial) else Polynomial(Qt)
        self.allow_zero_free = bool(allow_zero_free)

    @property
    def lam(self):
        """The exposed family parameter lam = Lambda + pi*i*(2*m0 + deg P)."""
        return self.Lambda + 1j * PI * (2 * self.m0 + max(self.P.degree, 0))

    def __repr__(self):
        return (f"NewtonSpec(Lambda={self.Lambda}, m0={self.m0}, "
                f"P={self.P.coeffs.tolist()}, Q={self.Q.coeffs.tolist()}, "
                f"Qt={self.Qt.coeffs.tolist()}, allow_zero_free={self.allow_zero_free})")


def validate_newton_spec(spec):
    """List of violated structural conditions (empty when the spec is good)."""
    v = []
    if spec.m0 < 0:
        v.append("m0 must be >= 0")
    if spec.P.is_zero:
        v.append("P must be a nonzero polynomial")
    elif spec.P(0) == 0:
        v.append("P must not vanish at 0 (absorb such factors into m0)")
    if (not spec.allow_zero_free) and spec.P.degree < 1:
        v.append("P needs a root in the punctured plane (or set allow_zero_free)")
    p = max(spec.P.degree, 0)
    if spec.Q.degree < 1 and spec.Lambda == -TWO_PI_I * (spec.m0 + p):
        v.append("Lambda = -2 pi i (m0 + deg P) degenerates the update (Q constant)")
    if spec.Qt.degree < 1 and spec.Lambda == -TWO_PI_I * spec.m0:
        v.append("Lambda = -2 pi i m0 degenerates the update (Qt constant)")
    if spec.Lambda == 0 and spec.m0 == 0 and p == 0 \
            and spec.Q.degree < 1 and spec.Qt.degree < 1:
        v.append("input function is constant")
    return v


def _radical_and_log_derivative(P):
    """Radical of P (monic, distinct roots) and S0 = (P'/P) * radical.

    S0 is the polynomial sum_i m_i prod_{j != i} (w - r_j); for constant P
    both are trivial.
    """
    if P.degree < 1:
        return Polynomial([1.0]), Polynomial()
    roots = poly_roots(P)
    radical = Polynomial([1.0])
    for r, _m in roots:
        radical = radical * Polynomial([-r.value, 1.0])
    s0 = Polynomial()
    for i, (ri, mi) in enumerate(roots):
        term = Polynomial([float(mi)])
        for j, (rj, _mj) in enumerate(roots):
            if j != i:
                term = term * Polynomial([-rj.value, 1.0])
        s0 = s0 + term
    return radical, s0


def build_newton_map(spec):
    """The Newton update of the spec's input function as a ProjectableMap.

    The deformation part is R = -w^qt * Prad / [(Lambda + 2 pi i m0) w^qt Prad
    + 2 pi i w^(qt+1) (S0 + Prad*Q') - 2 pi i Prad * T], with Prad the radical
    of P, S0 the log-derivative numerator, and T(w) = w^(qt-1) * Qt'(1/w).
    Total degree is (#distinct roots of P) + deg Q + deg Qt.
    """
    violations = validate_newton_spec(spec)
    if violations:
        raise InvalidSpec("; ".join(violations), violations=violations)

    qt = max(spec.Qt.degree, 0)
    radical, s0 = _radical_and_log_derivative(spec.P)

    w_pow_qt = Polynomial([0.0] * qt + [1.0])
    w_pow_qt1 = Polynomial([0.0] * (qt + 1) + [1.0])

    s = s0 + radical * spec.Q.derivative()

    # T(w) = w^(qt-1) Qt'(1/w): coefficient of w^(qt-j) is j * qt_j
    if qt >= 1:
        tc = np.zeros(qt, dtype=np.complex128)
        for j in range(1, qt + 1):
            tc[qt - j] = j * spec.Qt.coeffs[j]
        T = Polynomial(tc)
    else:
        T = Polynomial()

    num = -1.0 * (w_pow_qt * radical)
    den = ((spec.Lambda + TWO_PI_I * spec.m0) * (w_pow_qt * radical)
           + TWO_PI_I * (w_pow_qt1 * s)
           - TWO_PI_I * (radical * T))
    phi = RationalMap(num, den)

    # when the input vanishes at w = 1 the projection fixes 1 as a root basin
    distinguished = None
    if spec.P.degree >= 1:
        scale = float(np.max(np.abs(spec.P.coeffs)))
        if abs(spec.P(1.0)) <= 1e-12 * scale:
            distinguished = 1.0 + 0j
    return ProjectableMap(1, phi, label=f"newton({spec!r})",
                          distinguished_fixed=distinguished)


def boundary_values(spec):
    """Values of the deformation part at the two ends, in closed form.

    R(0) = 0 when deg Qt > 0, else -1/(Lambda + 2 pi i m0);
    R(inf) = 0 when deg Q > 0, else -1/(Lambda + 2 pi i (m0 + deg P)).
    """
    p = max(spec.P.degree, 0)
    if spec.Qt.degree >= 1:
        r0 = 0j
    else:
        r0 = -1.0 / (spec.Lambda + TWO_PI_I * spec.m0)
    if spec.Q.degree >= 1:
        ri = 0j
    else:
        ri = -1.0 / (spec.Lambda + TWO_PI_I * (spec.m0 + p))
    return r0, ri


def pseudotrig_spec(lam):
    """The sine-type member's NewtonSpec: Lambda = lam - pi i, P = w - 1."""
    lam = complex(lam)
    if abs(lam - 1j * PI) <= 1e-12 or abs(lam + 1j * PI) <= 1e-12:
        raise ParamSingularity(f"lam = {lam} is a singular parameter")
    return NewtonSpec(lam - 1j * PI, m0=0, P=Polynomial([-1.0, 1.0]))


def pseudotrig_map(lam):
    """Direct construction of the sine-type member (Mobius deformation part)."""
    return pseudotrig(lam)


def av_multipliers(lam):
    """Multipliers of the two asymptotic ends for the sine-type member.

    g'(0) = exp(2 pi i/(pi i - lam)), g'(inf) = exp(2 pi i/(pi i + lam)).
    """
    lam = complex(lam)
    if abs(lam - 1j * PI) <= 1e-12 or abs(lam + 1j * PI) <= 1e-12:
        raise ParamSingularity(f"lam = {lam} is a singular parameter")
    return (exp_clamped(TWO_PI_I / (1j * PI - lam)),
            exp_clamped(TWO_PI_I / (1j * PI + lam)))


def pseudo_fixed_point(lam, sigma):
    """Fixed point of translation type sigma for the sine-type member.

    Returns (w, multiplier) with w = (1 + (lam - pi i) sigma)/(1 + (lam + pi i) sigma)
    and multiplier 1 - (1 + (lam - pi i) sigma)(1 + (lam + pi i) sigma).  When
    the denominator vanishes the point is the infinity end and the multiplier
    is exactly 1.
    """
    lam = complex(lam)
    if abs(lam - 1j * PI) <= 1e-12 or abs(lam + 1j * PI) <= 1e-12:
        raise ParamSingularity(f"lam = {lam} is a singular parameter")
    a = 1.0 + (lam - 1j * PI) * sigma
    b = 1.0 + (lam + 1j * PI) * sigma
    rho = 1.0 - a * b
    if b == 0:
        return INF, 1.0 + 0j
    w = a / b
    if abs(w) > 1e140:
        return INF, rho
    return SpherePoint(w), rho


def superattracting_params(sigma):
    """Parameters where the type-sigma point swallows the free critical point.

    lam = -1/sigma +- i sqrt(pi^2 - 1/sigma^2); raises ZeroSigma at sigma = 0.
    """
    if sigma == 0:
        raise ZeroSigma("sigma = 0 has no superattracting deformation")
    s = complex(sigma)
    root = cmath.sqrt(PI * PI - 1.0 / (s * s))
    return (-1.0 / s + 1j * root, -1.0 / s - 1j * root)


def relaxed_newton(lam, m):
    """Damped update: deformation part M(w)/m, fixing the root with
    multiplier (m-1)/m."""
    if int(m) != m or m < 1:
        raise InvalidSpec("relaxation order m must be a positive integer")
    m = int(m)
    base = pseudotrig(lam)
    phi = RationalMap(base.phi.num * (1.0 / m), base.phi.den)
    return ProjectableMap(1, phi, label=f"relaxed-newton({lam}, m={m})",
                          distinguished_fixed=1.0 + 0j)


class TrigCase:
    """Single-pole normal form conjugate to a power of the sine-type input."""

    def __init__(self, alpha, m, a0):
        self.alpha = alpha
        self.m = m
        self.a0 = a0

    def __repr__(self):
        return f"TrigCase(alpha={self.alpha}, m={self.m}, a0={self.a0})"


class BRCase:
    """Single-pole normal form conjugate to the translation-type update."""

    def __init__(self, beta, a_shift):
        self.beta = beta
        self.a_shift = a_shift

    def __repr__(self):
        return f"BRCase(beta={self.beta}, a_shift={self.a_shift})"


def normalize_single_pole(spec):
    """Classify a spec whose deformation part has exactly one simple pole.

    Case (i): P = c (w - r)^m with Q, Qt constant -> TrigCase(alpha = lam/m,
    m, a0 = Log(r)/(2 pi i)).  Case (ii): P constant with deg Q = 1 (or
    deg Qt = 1) -> BRCase(beta = -1/lam).  Anything else raises NotSinglePole.
    """
    violations = validate_newton_spec(spec)
    if violations:
        raise InvalidSpec("; ".join(violations), violations=violations)
    roots = poly_roots(spec.P) if spec.P.degree >= 1 else []
    p_distinct = len(roots)
    q = max(spec.Q.degree, 0)
    qt = max(spec.Qt.degree, 0)
    pole_count = p_distinct + q + qt
    if pole_count != 1:
        raise NotSinglePole(
            f"deformation part has {pole_count} poles in the punctured plane")

    if p_distinct == 1:
        r, m = roots[0]
        lam = spec.Lambda + 1j * PI * (2 * spec.m0 + m)
        a0 = cmath.log(r.value) / TWO_PI_I
        return TrigCase(alpha=lam / m, m=int(m), a0=a0)

    # pure exponential deformation: P constant, one of Q/Qt linear
    lam = spec.Lambda + TWO_PI_I * spec.m0
    if lam == 0:
        raise NotSinglePole("lam = 0 admits no translation-type normal form")
    if q == 1:
        c1 = spec.Q.coeffs[1]
    else:
        c1 = spec.Qt.coeffs[1]
    a_shift = cmath.log(lam / (TWO_PI_I * c1)) / TWO_PI_I
    return BRCase(beta=-1.0 / lam, a_shift=a_shift)


def buff_ruckert_spec(lam):
    """The translation-type member as a NewtonSpec: P = 1, Q = w, zero-free."""
    return NewtonSpec(lam, m0=0, P=Polynomial([1.0]), Q=Polynomial([0.0, 1.0]),
                      allow_zero_free=True)


def newton_spec_to_json(spec):
    def pj(p):
        return [[c.real, c.imag] for c in p.coeffs.tolist()]
    return {
        "Lambda": [spec.Lambda.real, spec.Lambda.imag],
        "m0": spec.m0,
        "P": pj(spec.P),
        "Q": pj(spec.Q),
        "Qt": pj(spec.Qt),
        "allow_zero_free": spec.allow_zero_free,
    }


def newton_spec_from_json(d):
    def pp(v):
        return Polynomial([complex(re, im) for re, im in v])
    return NewtonSpec(complex(d["Lambda"][0], d["Lambda"][1]),
                      m0=d.get("m0", 0),
                      P=pp(d.get("P", [[1.0, 0.0]])),
                      Q=pp(d.get("Q", [])),
                      Qt=pp(d.get("Qt", [])),
                      allow_zero_free=d.get("allow_zero_free", False))
