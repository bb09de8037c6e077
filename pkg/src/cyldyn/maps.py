"""Maps of the cylinder and their projections to the punctured plane.

A map here is f(z) = ell*z + Phi(e^(2*pi*i*z)) with integer ell and a
nonconstant rational Phi.  Writing w = e^(2*pi*i*z), the same dynamics on
the punctured plane is g(w) = w^ell * e^(2*pi*i*Phi(w)), and the two are
intertwined by the exponential: g(e^(2*pi*i*z)) = e^(2*pi*i*f(z)).

All structure the engine needs downstream -- singular points of g, which
ends of the cylinder are essential, circle restrictions for rotation
numbers -- lives on the ProjectableMap object built here.
"""

from __future__ import annotations

import cmath
import math

from .errors import (AtEssentialSingularity, ExpOverflow, InvalidSpec,
                     ParamSingularity)
from .kernel import (INF, Polynomial, RationalMap, SpherePoint, as_sphere,
                     chordal, poly_roots, rational_derivative, rational_eval)

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi

# |Im z| beyond this makes e^(2*pi*i*z) overflow/underflow double precision
IM_LIMIT = 700.0 / TWO_PI

# proximity radius around essential singularities where evaluation refuses
ESSENTIAL_RADIUS = 1e-12


class ProjectableMap:
    """f(z) = ell*z + Phi(e^(2*pi*i*z)) together with its plane projection."""

    def __init__(self, ell, phi, label="", distinguished_fixed=None,
                 circle_map=None, preset=None):
        if int(ell) != ell:
            raise InvalidSpec("ell must be an integer")
        if not isinstance(phi, RationalMap):
            raise InvalidSpec("phi must be a RationalMap")
        if phi.num.is_zero or (phi.num.degree == 0 and phi.den.degree == 0):
            raise InvalidSpec("phi must be nonconstant")
        if phi.degree < 1:
            raise InvalidSpec("phi must be nonconstant")
        self.ell = int(ell)
        self.phi = phi
        self.label = label
        #: fixed point of the projection with distinguished meaning for the
        #: family (the root w=1 for the sine-type root finders); orbits
        #: converging here are classified FixedRoot
        self.distinguished_fixed = distinguished_fixed
        #: optional real circle restriction theta -> theta' (float in, float
        #: out) for maps preserving the unit circle; used by the rotation
        #: number machinery
        self.circle_map = circle_map
        #: preset descriptor for JSON round-trips, or None for custom maps
        self.preset = preset
        self._phi_prime = None
        self._essential = None

    # cached derived data -----------------------------------------------------

    @property
    def phi_prime(self):
        if self._phi_prime is None:
            self._phi_prime = rational_derivative(self.phi)
        return self._phi_prime

    def essential_points(self):
        """Essential singularities of the projection (may include the ends)."""
        if self._essential is None:
            pts = []
            if self.phi.den.degree >= 1:
                for r, _m in poly_roots(self.phi.den):
                    if not r.is_infinity:
                        pts.append(r)
            if rational_eval(self.phi, INF).is_infinity:
                pts.append(INF)
            # a denominator root at 0 already lands in pts via poly_roots
            self._essential = pts
        return self._essential

    def __repr__(self):
        return f"ProjectableMap(ell={self.ell}, label={self.label!r})"


def exp_coord(z):
    """The covering coordinate w = e^(2*pi*i*z) as a SpherePoint."""
    y = TWO_PI * z.imag
    if y > 700.0:
        return SpherePoint(0)
    if y < -700.0:
        return INF
    return SpherePoint(cmath.exp(TWO_PI_I * z))


def lift_eval(m, z):
    """Evaluate the cylinder map f(z) = ell*z + Phi(e^(2*pi*i*z)).

    Raises ExpOverflow when |Im z| is too large to exponentiate, and
    AtEssentialSingularity when z is a pole of f (e^(2*pi*i*z) hits a pole
    of Phi).
    """
    z = complex(z)
    if abs(z.imag) > IM_LIMIT:
        raise ExpOverflow(f"|Im z| = {abs(z.imag):.3f} exceeds {IM_LIMIT:.3f}")
    w = cmath.exp(TWO_PI_I * z)
    val = rational_eval(m.phi, w)
    if val.is_infinity:
        raise AtEssentialSingularity(f"z = {z} is a pole of the cylinder map")
    return m.ell * z + val.value


def project_eval(m, w):
    """Evaluate the plane projection g(w) = w^ell * e^(2*pi*i*Phi(w)).

    Total on the sphere away from essential singularities: the ends 0 and
    infinity map by the sign of ell (fixed for ell >= 1, swapped for
    ell <= -1, to e^(2*pi*i*Phi(end)) for ell = 0).  Within 1e-12 of an
    essential singularity the value does not exist and
    AtEssentialSingularity is raised.
    """
    w = as_sphere(w)
    ell = m.ell
    for e in m.essential_points():
        if e.is_infinity:
            if w.is_infinity:
                raise AtEssentialSingularity("infinity is essential for this map")
        elif w.is_infinity:
            continue
        elif abs(w.value - e.value) <= ESSENTIAL_RADIUS * (1.0 + abs(e.value)):
            raise AtEssentialSingularity(f"w = {w.value} is essentially singular")
    if w.is_infinity:
        if ell >= 1:
            return INF
        if ell <= -1:
            return SpherePoint(0)
        return SpherePoint(cmath.exp(TWO_PI_I * rational_eval(m.phi, INF).value))
    z = w.value
    if z == 0:
        phi0 = rational_eval(m.phi, 0)
        if phi0.is_infinity:
            raise AtEssentialSingularity("0 is essential for this map")
        if ell >= 1:
            return SpherePoint(0)
        if ell <= -1:
            return INF
        return SpherePoint(cmath.exp(TWO_PI_I * phi0.value))
    phi = rational_eval(m.phi, z)
    if phi.is_infinity:
        raise AtEssentialSingularity(f"w = {z} is a pole of the deformation part")
    p = phi.value
    # magnitude in log scale: ell*ln|w| - 2*pi*Im(Phi)
    logmag = ell * math.log(abs(z)) - TWO_PI * p.imag
    if logmag > 700.0:
        return INF
    if logmag < -740.0:
        return SpherePoint(0)
    return SpherePoint(cmath.exp(ell * cmath.log(z) + TWO_PI_I * p))


def project_derivative(m, w):
    """Derivative of the projection: w^(ell-1) e^(2 pi i Phi) (ell + 2 pi i w Phi')."""
    w = as_sphere(w)
    if w.is_infinity or w.value == 0:
        raise AtEssentialSingularity("derivative at an end; use end multipliers")
    z = w.value
    phi = rational_eval(m.phi, z)
    if phi.is_infinity:
        raise AtEssentialSingularity(f"w = {z} is a pole of the deformation part")
    dphi = rational_eval(m.phi_prime, z)
    if dphi.is_infinity:
        return INF
    p = phi.value
    factor = m.ell + TWO_PI_I * z * dphi.value
    logmag = (m.ell - 1) * math.log(abs(z)) - TWO_PI * p.imag
    if logmag > 690.0:
        return INF
    if logmag < -740.0 or factor == 0:
        return SpherePoint(0) if factor == 0 else SpherePoint(0)
    return SpherePoint(cmath.exp((m.ell - 1) * cmath.log(z) + TWO_PI_I * p) * factor)


def end_multiplier(m, which):
    """Multiplier of the end cycle at 0/infinity, or None when not periodic.

    For ell = 1 both ends are fixed with multipliers e^(2 pi i Phi(0)) and
    e^(-2 pi i Phi(inf)); for |ell| >= 2 the end cycle is superattracting;
    for ell = -1 the ends form a 2-cycle with multiplier
    e^(2 pi i (Phi(inf) - Phi(0))); for ell = 0 the ends are not periodic.
    """
    phi0 = rational_eval(m.phi, 0)
    phii = rational_eval(m.phi, INF)
    if which not in ("zero", "infinity"):
        raise ValueError("which must be 'zero' or 'infinity'")
    if (which == "zero" and phi0.is_infinity) or (which == "infinity" and phii.is_infinity):
        return None  # essential end
    if m.ell == 1:
        if which == "zero":
            return cmath.exp(TWO_PI_I * phi0.value)
        return cmath.exp(-TWO_PI_I * phii.value)
    if abs(m.ell) >= 2:
        return 0j
    if m.ell == -1:
        if phi0.is_infinity or phii.is_infinity:
            return None
        return cmath.exp(TWO_PI_I * (phii.value - phi0.value))
    return None  # ell == 0: ends are not fixed


# ---------------------------------------------------------------------------
# singular data
# ---------------------------------------------------------------------------

END_REGULAR = "regular"
END_ESSENTIAL = "essential"
END_CRITICAL_FIXED = "critical-fixed"
END_CRITICAL_2CYCLE = "critical-2-cycle"


class SingularData:
    """Singular points/values of the plane projection."""

    def __init__(self, essential_singularities, critical_points,
                 critical_values, asymptotic_values, end_status_zero,
                 end_status_infinity):
        self.essential_singularities = essential_singularities
        self.critical_points = critical_points
        self.critical_values = critical_values
        self.asymptotic_values = asymptotic_values
        self.end_status_zero = end_status_zero
        self.end_status_infinity = end_status_infinity

    def __repr__(self):
        return (f"SingularData(ess={self.essential_singularities}, "
                f"crit={self.critical_points}, ends=({self.end_status_zero}, "
                f"{self.end_status_infinity}))")


def _end_status(m, which):
    phi_end = rational_eval(m.phi, 0 if which == "zero" else INF)
    if phi_end.is_infinity:
        return END_ESSENTIAL
    if m.ell >= 2:
        return END_CRITICAL_FIXED
    if m.ell <= -2:
        return END_CRITICAL_2CYCLE
    return END_REGULAR


def singular_data(m):
    """Essential singularities, critical points/values and asymptotic values.

    Critical points in the punctured plane solve ell + 2 pi i w Phi'(w) = 0
    (excluding essential singularities); the ends are critical when
    |ell| >= 2, or when ell = 0 and Phi' vanishes there.
    """
    ess = list(m.essential_points())
    phi0 = rational_eval(m.phi, 0)
    if phi0.is_infinity and not any((not e.is_infinity) and e.value == 0 for e in ess):
        ess.append(SpherePoint(0))

    # critical equation as a polynomial: ell*B(w) + 2*pi*i*w*A(w) = 0 where
    # Phi' = A/B coprime
    dphi = m.phi_prime
    crit_poly = (m.ell * dphi.den) + (Polynomial([0, TWO_PI_I]) * dphi.num)
    crit = []
    if crit_poly.degree >= 1:
        for r, _mult in poly_roots(crit_poly):
            if r.is_infinity or r.value == 0:
                continue
            if any((not e.is_infinity) and
                   abs(r.value - e.value) <= 1e-9 * (1.0 + abs(e.value))
                   for e in ess):
                continue
            crit.append(r)
    # ends
    status0 = _end_status(m, "zero")
    statusi = _end_status(m, "infinity")
    if status0 in (END_CRITICAL_FIXED, END_CRITICAL_2CYCLE):
        crit.append(SpherePoint(0))
    if statusi in (END_CRITICAL_FIXED, END_CRITICAL_2CYCLE):
        crit.append(INF)
    if m.ell == 0:
        if status0 != END_ESSENTIAL and rational_eval(dphi, 0).value == 0:
            crit.append(SpherePoint(0))
        if statusi != END_ESSENTIAL:
            di = rational_eval(dphi, INF)
            if (not di.is_infinity) and di.value == 0:
                crit.append(INF)

    crit_values = []
    for c in crit:
        try:
            crit_values.append(project_eval(m, c))
        except AtEssentialSingularity:
            crit_values.append(None)

    # any nonconstant rational Phi has a pole somewhere on the sphere, so
    # the orbifold ends 0 and infinity are always the asymptotic values
    avs = [SpherePoint(0), INF]
    return SingularData(ess, crit, crit_values, avs, status0, statusi)


def is_class_R(m):
    """Check the finite-type normalization: Phi finite at both ends and a
    pole in the punctured plane.

    Returns (ok, report) where report lists the violated conditions.
    """
    report = []
    if rational_eval(m.phi, 0).is_infinity:
        report.append("deformation part has a pole at 0")
    if rational_eval(m.phi, INF).is_infinity:
        report.append("deformation part has a pole at infinity")
    has_star_pole = any(
        (not r.is_infinity) and r.value != 0
        for r, _mm in (poly_roots(m.phi.den) if m.phi.den.degree >= 1 else []))
    if not has_star_pole:
        report.append("no pole in the punctured plane")
    return (len(report) == 0, report)


def semiconjugacy_residual(m, z):
    """Chordal distance between g(e^(2 pi i z)) and e^(2 pi i f(z))."""
    w = exp_coord(complex(z))
    gw = project_eval(m, w)
    fz = lift_eval(m, z)
    return chordal(gw, exp_coord(fz))


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _rat_sub(a, b):
    return RationalMap(a.num * b.den - b.num * a.den, a.den * b.den)


def _rat_add_scalar(c, r):
    return RationalMap(Polynomial([c]) * r.den + r.num, r.den)


def _rat_scale(c, r):
    return RationalMap(r.num * c, r.den)


def pseudotrig(lam):
    """Sine-type root-finder member: ell = 1 with a Mobius deformation part.

    Raises ParamSingularity at lam = +-pi*i where the family degenerates.
    """
    lam = complex(lam)
    if abs(lam - 1j * math.pi) <= 1e-12 or abs(lam + 1j * math.pi) <= 1e-12:
        raise ParamSingularity(f"lam = {lam} is a singular parameter")
    phi = RationalMap(Polynomial([1, -1]),
                      Polynomial([-(lam - 1j * math.pi), lam + 1j * math.pi]))
    return ProjectableMap(1, phi, label=f"pseudotrig({lam})",
                          distinguished_fixed=1.0 + 0j,
                          preset={"preset": "pseudotrig",
                                  "lambda": [lam.real, lam.imag]})


def buff_ruckert(beta):
    """Translation-type map z + beta/(e^(2 pi i z) + 1): ell = 1, one pole at -1."""
    beta = complex(beta)
    if beta == 0:
        raise InvalidSpec("beta = 0 gives a constant deformation part")
    phi = RationalMap(Polynomial([beta]), Polynomial([1, 1]))
    return ProjectableMap(1, phi, label=f"buff-ruckert({beta})",
                          preset={"preset": "buff-ruckert",
                                  "beta": [beta.real, beta.imag]})


def mero_standard(a, alpha, beta):
    """Blaschke-deformed standard circle map.

    f(z) = z + alpha - (beta/(4 pi i)) (B_a(w) - 1/B_a(w)) with w = e^(2 pi i z)
    and B_a(w) = (w - a)/(1 - conj(a) w).  For 0 < |a| < 1 this preserves the
    unit circle and its deformation part has poles exactly at a and 1/conj(a).
    """
    a = complex(a)
    alpha = complex(alpha)
    beta = complex(beta)
    if abs(a) >= 1:
        raise InvalidSpec("need |a| < 1 for a circle-preserving deformation")
    if beta == 0:
        raise InvalidSpec("beta = 0 gives a constant deformation part")
    B = RationalMap(Polynomial([-a, 1]), Polynomial([1, -a.conjugate()]))
    invB = RationalMap(Polynomial([1, -a.conjugate()]), Polynomial([-a, 1]))
    phi = _rat_add_scalar(alpha, _rat_scale(-beta / (4j * math.pi), _rat_sub(B, invB)))

    circle = None
    if abs(alpha.imag) < 1e-15 and abs(beta.imag) < 1e-15 and abs(a.imag) < 1e-15:
        # real circle restriction: theta + alpha - (beta/2 pi) Im B_a(e^(2 pi i theta))
        al, be, ar = alpha.real, beta.real, a.real
        scale = be * (1.0 - ar * ar) / TWO_PI
        one_plus = 1.0 + ar * ar

        def circle(theta, _al=al, _sc=scale, _ar=ar, _op=one_plus):
            s = math.sin(TWO_PI * theta)
            c = math.cos(TWO_PI * theta)
            return theta + _al - _sc * s / (_op - 2.0 * _ar * c)

    return ProjectableMap(1, phi, label=f"mero-standard(a={a}, alpha={alpha}, beta={beta})",
                          circle_map=circle,
                          preset={"preset": "mero-standard",
                                  "a": [a.real, a.imag],
                                  "alpha": [alpha.real, alpha.imag],
                                  "beta": [beta.real, beta.imag]})


def sine_family(beta):
    """f(z) = (beta/2 pi) sin(2 pi z): ell = 0 with essential ends."""
    beta = complex(beta)
    if beta == 0:
        raise InvalidSpec("beta = 0 gives a constant map")
    c = beta / (4j * math.pi)
    phi = RationalMap(Polynomial([-c, 0, c]), Polynomial([0, 1]))
    return ProjectableMap(0, phi, label=f"sine-family({beta})",
                          preset={"preset": "sine-family",
                                  "beta": [beta.real, beta.imag]})


def double_standard():
    """f(z) = 2z + 1 - (1/pi) sin(2 pi z): degree-2 circle cover."""
    c = 1.0 / (2j * math.pi)
    phi = RationalMap(Polynomial([c, 1, -c]), Polynomial([0, 1]))
    return ProjectableMap(2, phi, label="double-standard",
                          preset={"preset": "double-standard"})


def arnold_standard(alpha, beta):
    """Classic standard circle family z + alpha - (beta/2 pi) sin(2 pi z)."""
    alpha = complex(alpha)
    beta = complex(beta)
    if beta == 0:
        raise InvalidSpec("beta = 0 gives a constant deformation part")
    c = beta / (4j * math.pi)
    phi = RationalMap(Polynomial([c, alpha, -c]), Polynomial([0, 1]))

    circle = None
    if abs(alpha.imag) < 1e-15 and abs(beta.imag) < 1e-15:
        al, sc = alpha.real, beta.real / TWO_PI

        def circle(theta, _al=al, _sc=sc):
            return theta + _al - _sc * math.sin(TWO_PI * theta)

    return ProjectableMap(1, phi, label=f"arnold-standard({alpha}, {beta})",
                          circle_map=circle,
                          preset={"preset": "arnold-standard",
                                  "alpha": [alpha.real, alpha.imag],
                                  "beta": [beta.real, beta.imag]})


PRESET_BUILDERS = {
    "pseudotrig": lambda d: pseudotrig(_c(d["lambda"])),
    "buff-ruckert": lambda d: buff_ruckert(_c(d["beta"])),
    "mero-standard": lambda d: mero_standard(_c(d["a"]), _c(d["alpha"]), _c(d["beta"])),
    "sine-family": lambda d: sine_family(_c(d["beta"])),
    "double-standard": lambda d: double_standard(),
    "arnold-standard": lambda d: arnold_standard(_c(d["alpha"]), _c(d["beta"])),
}


def _c(v):
    """Complex from a JSON value: [re, im], re, or 're,im' string."""
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    if isinstance(v, str):
        re, im = v.split(",")
        return complex(float(re), float(im))
    return complex(v)


def _poly_json(p):
    return [[c.real, c.imag] for c in p.coeffs.tolist()]


def map_to_json(m):
    """Serializable description: explicit coefficients plus any preset tag."""
    d = {
        "ell": m.ell,
        "phi": {"num": _poly_json(m.phi.num), "den": _poly_json(m.phi.den)},
    }
    if m.label:
        d["label"] = m.label
    if m.preset:
        d.update(m.preset)
    return d


def map_from_json(d):
    """Build a map from either a preset record or explicit coefficients."""
    if "preset" in d:
        name = d["preset"]
        if name not in PRESET_BUILDERS:
            raise InvalidSpec(f"unknown preset {name!r}")
        return PRESET_BUILDERS[name](d)
    if "ell" not in d or "phi" not in d:
        raise InvalidSpec("need 'ell' and 'phi' (or a 'preset')")
    num = Polynomial([complex(re, im) for re, im in d["phi"]["num"]])
    den = Polynomial([complex(re, im) for re, im in d["phi"]["den"]])
    return ProjectableMap(int(d["ell"]), RationalMap(num, den),
                          label=d.get("label", ""))
