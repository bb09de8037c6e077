"""Riemann-sphere points, polynomials, and rational maps over complex128.

Everything downstream (map evaluation, orbit iteration, parameter-plane
classification) funnels through the three types in this module, so the
conventions are fixed here once:

  * polynomial coefficients are stored lowest order first,
  * the zero polynomial is the empty coefficient list,
  * rational maps are kept coprime and are total as maps of the sphere.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidDegree, NoConvergence

_EPS = float(np.finfo(np.float64).eps)

# quantities larger than this are treated as the point at infinity in
# sphere arithmetic (well below overflow so squares stay finite)
_HUGE = 1e150


# ---------------------------------------------------------------------------
# points on the sphere
# ---------------------------------------------------------------------------

class SpherePoint:
    """A point of the Riemann sphere: a finite complex number or infinity.

    NaN components are rejected outright -- a NaN that sneaks into orbit
    arithmetic poisons every comparison afterwards, so construction is the
    one place where it can be stopped cheaply.
    """

    __slots__ = ("_z",)

    def __init__(self, z=None):
        if z is not None:
            z = complex(z)
            if math.isnan(z.real) or math.isnan(z.imag):
                raise ValueError("NaN is not a point of the sphere")
            if math.isinf(z.real) or math.isinf(z.imag) or abs(z) > _HUGE:
                z = None
        object.__setattr__(self, "_z", z)

    # construction helpers ---------------------------------------------------

    @classmethod
    def finite(cls, re, im=0.0):
        p = cls(complex(re, im))
        if p.is_infinity:
            raise ValueError("finite() given an overflowing value")
        return p

    @classmethod
    def infinity(cls):
        return cls(None)

    # queries ------------------------------------------------------------------

    @property
    def is_infinity(self):
        return self._z is None

    @property
    def value(self):
        """The finite complex value; raises for the point at infinity."""
        if self._z is None:
            raise ValueError("point at infinity has no finite value")
        return self._z

    def __eq__(self, other):
        if not isinstance(other, SpherePoint):
            try:
                other = as_sphere(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._z == other._z

    def __hash__(self):
        return hash(self._z)

    def __repr__(self):
        if self._z is None:
            return "SpherePoint(inf)"
        return f"SpherePoint({self._z!r})"


INF = SpherePoint.infinity()


def as_sphere(x):
    """Coerce a complex/float/SpherePoint into a SpherePoint."""
    if isinstance(x, SpherePoint):
        return x
    return SpherePoint(x)


def exp_clamped(e):
    """exp for exponents whose real part may exceed float range.

    Clamps the log-magnitude at +-700 (about 1e+-304), preserving the
    argument and the exact growth/decay side; exact whenever |Re e| <= 700.
    """
    e = complex(e)
    if e.real > 700.0:
        return cmath.exp(complex(700.0, e.imag))
    if e.real < -700.0:
        return cmath.exp(complex(-700.0, e.imag))
    return cmath.exp(e)


def chordal(a, b):
    """Chordal distance on the sphere, normalized to chordal(0, inf) = 1."""
    a = as_sphere(a)
    b = as_sphere(b)
    if a.is_infinity and b.is_infinity:
        return 0.0
    if a.is_infinity or b.is_infinity:
        z = b._z if a.is_infinity else a._z
        az = abs(z)
        if az > 1e12:
            return 1.0 / az
        return 1.0 / math.sqrt(1.0 + az * az)
    za, zb = a._z, b._z
    ra, rb = abs(za), abs(zb)
    if ra > 1e12 or rb > 1e12:
        # avoid overflow in the product of norms
        return abs(za - zb) / (math.hypot(1.0, ra) * math.hypot(1.0, rb))
    return abs(za - zb) / math.sqrt((1.0 + ra * ra) * (1.0 + rb * rb))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Dense complex polynomial, coefficients lowest order first.

    The zero polynomial is the empty coefficient array; after normalization
    the leading (highest-order) coefficient of any nonzero polynomial is
    nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        a = np.asarray(list(coeffs), dtype=np.complex128)
        if a.size and (np.isnan(a.real).any() or np.isnan(a.imag).any()):
            raise ValueError("NaN coefficient")
        # trim exactly-zero leading coefficients
        n = a.size
        while n > 0 and a[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "coeffs", a[:n].copy())

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return self.coeffs.size - 1

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    def __call__(self, w):
        if self.coeffs.size == 0:
            return 0j
        return complex(npoly.polyval(w, self.coeffs))

    def eval_many(self, w):
        if self.coeffs.size == 0:
            return np.zeros_like(np.asarray(w, dtype=np.complex128))
        return npoly.polyval(np.asarray(w, dtype=np.complex128), self.coeffs)

    def reversed_eval(self, u):
        """Evaluate w^deg * p(1/w) at u = 1/w (stable for |w| > 1)."""
        if self.coeffs.size == 0:
            return 0j
        return complex(npoly.polyval(u, self.coeffs[::-1]))

    def derivative(self):
        if self.coeffs.size <= 1:
            return Polynomial()
        return Polynomial(npoly.polyder(self.coeffs))

    def deflate(self, root):
        """Divide out (w - root) by synthetic division, dropping the remainder."""
        a = self.coeffs
        if a.size < 2:
            raise ValueError("cannot deflate a constant")
        out = np.empty(a.size - 1, dtype=np.complex128)
        acc = a[-1]
        for i in range(a.size - 2, -1, -1):
            out[i] = acc
            acc = a[i] + acc * root
        return Polynomial(out)

    # arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return Polynomial(-other.coeffs)
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            if other == 0 or self.is_zero:
                return Polynomial()
            return Polynomial(self.coeffs * other)
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        return Polynomial(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coeffs) if self.coeffs.size else Polynomial()

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs.size == other.coeffs.size and bool(
            np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()!r})"


def _as_poly(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, float, complex)):
        return Polynomial([x]) if x != 0 else Polynomial()
    return Polynomial(x)


# ---------------------------------------------------------------------------
# root finding (simultaneous-iteration scheme)
# ---------------------------------------------------------------------------

def _aberth_sweeps(a, max_sweeps=200):
    """Run Aberth-Ehrlich simultaneous iteration on coefficient array `a`.

    `a` is lowest-first with a[0] != 0 and a[-1] != 0.  Starting points sit
    on a circle of Cauchy-bound radius with a deterministic random
    perturbation so no two starts coincide and no start hits a symmetry axis.
    """
    n = a.size - 1
    da = npoly.polyder(a)
    radius = 1.0 + float(np.max(np.abs(a[:-1])) / abs(a[-1]))
    rng = np.random.default_rng(0xC11D)
    angles = 2.0 * np.pi * (np.arange(n) + 0.35) / n
    z = radius * np.exp(1j * (angles + 0.1 * (rng.random(n) - 0.5)))
    z = z * (1.0 + 0.05 * (rng.random(n) - 0.5))
    cap = 2.0 * radius
    for _ in range(max_sweeps):
        pz = npoly.polyval(z, a)
        dpz = npoly.polyval(z, da)
        dpz = np.where(dpz == 0, _EPS, dpz)
        w = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        diff = np.where(diff == 0, np.inf, diff)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, _EPS, denom)
        corr = w / denom
        mag = np.abs(corr)
        too_big = mag > cap
        if too_big.any():
            corr = np.where(too_big, corr * (cap / np.where(mag == 0, 1, mag)), corr)
        z = z - corr
        if np.max(np.abs(corr)) < 1e-14 * (1.0 + np.max(np.abs(z))):
            break
    return z


def _newton_polish(a, da, z, steps=12):
    for _ in range(steps):
        dp = complex(npoly.polyval(z, da))
        if dp == 0:
            break
        step = complex(npoly.polyval(z, a)) / dp
        if not (math.isfinite(step.real) and math.isfinite(step.imag)):
            break
        z = z - step
        if abs(step) < 1e-15 * (1.0 + abs(z)):
            break
    return z


def _greedy_cluster(points, tol):
    """Group points whose mutual distance is below tol*(1+|centroid|)."""
    clusters = []  # list of [centroid, count]
    for z in points:
        placed = False
        for c in clusters:
            if abs(z - c[0]) <= tol * (1.0 + abs(c[0])):
                c[0] = (c[0] * c[1] + z) / (c[1] + 1)
                c[1] += 1
                placed = True
                break
        if not placed:
            clusters.append([z, 1])
    return clusters


def _taylor_scales(a, c):
    """Reference magnitudes for |p^(j)(c)/j!| used to validate multiplicities."""
    n = a.size - 1
    amax = float(np.max(np.abs(a)))
    r = 1.0 + abs(c)
    return [amax * math.comb(n, j) * r ** (n - j) for j in range(n + 1)]


def _is_m_fold(a, c, m):
    """True when c looks like an m-fold root of the polynomial with coeffs a."""
    n = a.size - 1
    if m > n:
        return False
    scales = _taylor_scales(a, c)
    d = a
    for j in range(m):
        tj = complex(npoly.polyval(c, d))
        if abs(tj) > 1e-7 * math.factorial(j) * scales[j]:
            return False
        d = npoly.polyder(d)
    return True


def _refine_multiple(a, c, m):
    """Polish an m-fold root by Newton on the (m-1)-st derivative."""
    d = a
    for _ in range(m - 1):
        d = npoly.polyder(d)
    if d.size >= 2:
        c = _newton_polish(d, npoly.polyder(d), c)
    return c


def poly_roots(p, merge_tol=1e-6, max_sweeps=200):
    """All roots of `p` with multiplicities, as (SpherePoint, mult) pairs.

    Simultaneous (Aberth-Ehrlich) iteration from a randomly perturbed
    circle of starting points, followed by cluster merging: approximations
    within `merge_tol` of each other are merged and their multiplicities
    summed.  A genuine m-fold root stalls the iteration in a cluster wider
    than merge_tol (the attainable accuracy decays like eps^(1/m)), so the
    merge radius is escalated for groups that verifiably behave like a
    single multiple root.

    Raises InvalidDegree when deg p < 1.
    """
    p = _as_poly(p)
    if p.degree < 1:
        raise InvalidDegree(f"need degree >= 1, got degree {p.degree}")

    a = p.coeffs.copy()
    # exact roots at the origin come off first
    n0 = 0
    while a.size > 1 and a[0] == 0:
        a = a[1:]
        n0 += 1

    found = []  # (complex root, multiplicity)
    if n0:
        found.append((0j, n0))

    if a.size > 1:
        a = a / np.max(np.abs(a))
        da = npoly.polyder(a)
        z = _aberth_sweeps(a, max_sweeps=max_sweeps)
        clusters = _greedy_cluster(list(z), merge_tol)

        # escalate the merge radius for stalled multiple-root clumps, but
        # only accept an escalated merge that validates as a multiple root
        for tol in (1e-5, 1e-4, 1e-3):
            if len(clusters) <= 1:
                break
            merged = _greedy_cluster([c[0] for c in clusters], tol)
            if len(merged) == len(clusters):
                continue
            regroup = []
            used = [False] * len(clusters)
            changed = False
            for g, _cnt in merged:
                members = [i for i, c in enumerate(clusters)
                           if not used[i] and abs(c[0] - g) <= tol * (1.0 + abs(g)) * 1.5]
                if len(members) <= 1:
                    continue
                m = sum(clusters[i][1] for i in members)
                c_try = _refine_multiple(a, g, m)
                if _is_m_fold(a, c_try, m):
                    for i in members:
                        used[i] = True
                    regroup.append([c_try, m])
                    changed = True
            if changed:
                clusters = regroup + [c for i, c in enumerate(clusters) if not used[i]]

        for c, m in clusters:
            if m == 1:
                c = _newton_polish(a, da, c)
            else:
                c = _refine_multiple(a, c, m)
            found.append((complex(c), int(m)))

        # sanity: simple roots must actually annihilate the polynomial
        amax = float(np.max(np.abs(a)))
        for c, m in found:
            if m == 1 and c != 0:
                resid = abs(complex(npoly.polyval(c, a)))
                bound = 1e-9 * amax * max(1.0, (1.0 + abs(c)) ** max(p.degree - 6, 0))
                if resid > max(bound, 1e-9 * amax):
                    raise NoConvergence(
                        f"root {c} residual {resid:.3e} exceeds tolerance")

    found.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return [(SpherePoint(c), m) for c, m in found]


# ---------------------------------------------------------------------------
# rational maps
# ---------------------------------------------------------------------------

class RationalMap:
    """Quotient of two polynomials, reduced and normalized on construction.

    Shared roots of numerator and denominator (matched within 1e-8) are
    divided out, and both parts are rescaled by the denominator coefficient
    of largest magnitude so equal maps get equal coefficient arrays.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=True):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if reduce and not num.is_zero and num.degree >= 1 and den.degree >= 1:
            num, den = _reduce_fraction(num, den)
        s = den.coeffs[int(np.argmax(np.abs(den.coeffs)))]
        num = Polynomial(num.coeffs / s) if not num.is_zero else num
        den = Polynomial(den.coeffs / s)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def degree(self):
        """Degree as a map of the sphere: max of the two part degrees."""
        return max(self.num.degree, self.den.degree)

    def __call__(self, w):
        """Raw complex evaluation; may overflow at poles (use rational_eval
        for the total sphere version)."""
        return self.num(w) / self.den(w)

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalMap({self.num.coeffs.tolist()!r}, {self.den.coeffs.tolist()!r})"


def _reduce_fraction(num, den, tol=1e-8):
    """Divide out roots shared by num and den (matched within tol)."""
    try:
        nroots = poly_roots(num)
        droots = poly_roots(den)
    except NoConvergence:
        return num, den
    navail = [[r.value if not r.is_infinity else None, m] for r, m in nroots]
    for dr, dm in droots:
        if dr.is_infinity:
            continue
        dv = dr.value
        for item in navail:
            if item[0] is None or item[1] == 0:
                continue
            if abs(item[0] - dv) <= tol * (1.0 + abs(dv)):
                k = min(item[1], dm)
                mid = 0.5 * (item[0] + dv)
                for _ in range(k):
                    num = num.deflate(mid)
                    den = den.deflate(mid)
                item[1] -= k
                break
    return num, den


def rational_eval(r, w):
    """Evaluate a rational map as a total map of the sphere.

    Finite points with a vanishing denominator go to infinity; the value at
    infinity is decided by comparing degrees (ratio of leading coefficients
    when the degrees tie).
    """
    w = as_sphere(w)
    nd, dd = r.num.degree, r.den.degree
    if w.is_infinity:
        if r.num.is_zero:
            return SpherePoint(0)
        if nd > dd:
            return INF
        if nd < dd:
            return SpherePoint(0)
        return SpherePoint(r.num.coeffs[-1] / r.den.coeffs[-1])
    z = w.value
    if abs(z) <= 1.0:
        nv = r.num(z)
        dv = r.den(z)
    else:
        # rescale by the larger degree so both parts stay bounded
        u = 1.0 / z
        m = max(nd, dd) if not r.num.is_zero else dd
        nv = r.num.reversed_eval(u) * u ** (m - nd) if not r.num.is_zero else 0j
        dv = r.den.reversed_eval(u) * u ** (m - dd)
    if dv == 0:
        if nv == 0:
            # should not survive coprime reduction; treat as a pole
            return INF
        return INF
    val = nv / dv
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        return INF
    return SpherePoint(val)


def rational_derivative(r):
    """Derivative of a rational map by the quotient rule, coprime-reduced."""
    n, d = r.num, r.den
    if n.is_zero:
        return RationalMap(Polynomial(), Polynomial([1.0]))
    top = n.derivative() * d - n * d.derivative()
    return RationalMap(top, d * d)
