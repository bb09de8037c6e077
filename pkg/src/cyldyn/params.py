"""Parameter-plane analysis for the Moebius-deformation family.

The family member at parameter lam has projection
g(w) = w exp(2 pi i M(w)) with M(w) = -(w - 1)/((lam + pi i) w - (lam - pi i)).
Its pole B = (lam - pi i)/(lam + pi i) is the only essential singularity in
the punctured plane, w = 1 is a fixed critical point (the distinguished
root), and C = B^2 is the last remaining critical orbit, whose fate cuts
the parameter plane into the root-capture locus and its complement.

This module provides the tight per-parameter orbit classifier the tile
renderer runs per pixel, membership records for the complement locus,
internal-ray parametrizations of the end-attraction and pseudo-fixed
components, the Moebius compactification of the parameter plane, the two
family symmetries, and Newton searches for component roots and prepole
parameters.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import (NoConvergence, ParamSingularity, ZeroSigma)
from .kernel import INF, SpherePoint, as_sphere, chordal, exp_clamped
from .maps import project_eval, pseudotrig
from .newton import pseudo_fixed_point
from .orbits import (DEFAULT_CONFIG, KIND_CYCLE, KIND_ESCAPED,
                     KIND_FIXED_ROOT, KIND_INFINITY_AV, KIND_PREPOLE,
                     KIND_UNDETERMINED, KIND_ZERO_AV, OrbitClassification,
                     OrbitConfig, component_lift_diagnosis)

PI_I = 1j * math.pi
TWO_PI_I = 2j * math.pi


def _check_param(lam):
    lam = complex(lam)
    if min(abs(lam - PI_I), abs(lam + PI_I)) <= 1e-12 * (1.0 + abs(lam)):
        raise ParamSingularity(f"parameter {lam} degenerates the family",
                               lam=[lam.real, lam.imag])
    return lam


def family_pole(lam):
    """The essential singularity B of the family member at lam."""
    lam = _check_param(lam)
    return (lam - PI_I) / (lam + PI_I)


def family_free_critical(lam):
    """The free critical point C = B^2."""
    b_val = family_pole(lam)
    return b_val * b_val


def end_multipliers(lam):
    """(multiplier at the 0 end, multiplier at the infinity end).

    Near the degenerate parameters the multipliers are astronomically
    attracting or repelling; magnitudes are clamped to the representable
    float range with the attracting/repelling side kept exact.
    """
    lam = _check_param(lam)
    return (exp_clamped(TWO_PI_I / (PI_I - lam)),
            exp_clamped(TWO_PI_I / (PI_I + lam)))


def classify_family_orbit(lam, w0, cfg=DEFAULT_CONFIG):
    """Classify the g-orbit of w0 for the family member at lam.

    Semantically equivalent to classify_orbit on the built map, but
    specialized and loop-tight so the tile renderer can afford it per
    pixel: one inline iteration step, constant-time cycle detection via a
    periodically refreshed snapshot plus a short ring buffer for least-
    period reduction, and closed-form end multipliers.
    """
    lam = _check_param(lam)
    a = lam + PI_I
    b = lam - PI_I
    pole = b / a
    e0 = -TWO_PI_I / b
    einf = TWO_PI_I / a
    mult0 = exp_clamped(e0)
    multinf = exp_clamped(einf)
    att0 = e0.real < 0.0
    attinf = einf.real < 0.0
    sing_r = cfg.singularity_radius * (1.0 + abs(pole))
    tol = cfg.cycle_tol
    zero_r = cfg.zero_radius
    esc_r = cfg.escape_radius
    max_iter = cfg.max_iter
    cap = cfg.period_cap
    exp_f = cmath.exp

    w = complex(w0)
    # immediate root capture, mirroring the generic classifier's lead check
    if abs(w - 1.0) <= tol * math.sqrt(2.0 * (1.0 + abs(w) ** 2)):
        return OrbitClassification(KIND_FIXED_ROOT, 0, SpherePoint(w), period=1,
                                   representative=SpherePoint(1.0), multiplier=0j)

    at_inf = False
    m1 = m2 = -1.0          # previous two |w| samples for the monotone gate
    zero_streak = inf_streak = 0
    ring = [None] * (cap + 2)
    ring_n = cap + 2
    snap = None
    snap_isq = 0.0
    snap_n = 0
    cand_p = 0
    cand_ref = 0j
    cand_ref_isq = 0.0
    cand_start = 0
    cand_left = 0

    n = 0
    while n <= max_iter:
        mag = math.inf if at_inf else abs(w)

        if (not at_inf) and abs(w - pole) <= sing_r:
            return OrbitClassification(KIND_PREPOLE, n, SpherePoint(w),
                                       prepole_order=n)

        if mag <= zero_r:
            zero_streak += 1
            inf_streak = 0
        elif mag >= esc_r:
            inf_streak += 1
            zero_streak = 0
        else:
            zero_streak = inf_streak = 0

        if zero_streak >= 3 and (att0 or (m2 >= 0 and mag <= m1 <= m2)):
            return OrbitClassification(KIND_ZERO_AV, n,
                                       SpherePoint(0) if not at_inf else INF,
                                       multiplier=mult0,
                                       representative=SpherePoint(0))
        if inf_streak >= 3 and (attinf or (m2 >= 0 and mag >= m1 >= m2)):
            return OrbitClassification(KIND_INFINITY_AV, n,
                                       INF if at_inf else SpherePoint(w),
                                       multiplier=multinf, representative=INF)
        m2 = m1
        m1 = mag

        if (not at_inf) and 1e-8 < mag < 1e8:
            isq = 1.0 / math.sqrt(1.0 + mag * mag)
            ring[n % ring_n] = (w, isq)
            if cand_left > 0:
                dn = n - cand_start
                if dn % cand_p == 0:
                    if abs(w - cand_ref) * isq * cand_ref_isq <= tol:
                        cand_left -= 1
                        if cand_left == 0:
                            got = _finish_cycle(lam, a, b, ring, ring_n, n,
                                                cand_p, tol, cfg)
                            if got is not None:
                                return got
                            snap = w
                            snap_isq = isq
                            snap_n = n
                    else:
                        cand_left = 0
                        snap = w
                        snap_isq = isq
                        snap_n = n
            elif snap is not None:
                k = n - snap_n
                if 1 <= k <= cap and abs(w - snap) * isq * snap_isq <= tol:
                    cand_p = k
                    cand_ref = w
                    cand_ref_isq = isq
                    cand_start = n
                    cand_left = 2
                elif k >= 2 * cap:
                    snap = w
                    snap_isq = isq
                    snap_n = n
            else:
                snap = w
                snap_isq = isq
                snap_n = n
        else:
            snap = None
            cand_left = 0

        if n == max_iter:
            break
        n += 1
        if at_inf or w == 0:
            continue
        t = TWO_PI_I * (-(w - 1.0) / (a * w - b))
        newlog = math.log(mag) + t.real
        if newlog > 700.0:
            at_inf = True
        elif newlog < -745.0:
            w = 0j
        else:
            w = w * exp_f(t)

    final = INF if at_inf else SpherePoint(w)
    return OrbitClassification(KIND_UNDETERMINED, max_iter, final)


def _finish_cycle(lam, a, b, ring, ring_n, n, p, tol, cfg):
    """Reduce a confirmed return period to the least one and package it.

    Returns None when the candidate looks like a converging spiral whose
    rotation resonates with p (shorter lags within 50x the tolerance but
    not inside it): the caller then keeps iterating until the true period
    resolves.
    """
    # try proper divisors first, using the ring of recent iterates
    best = p
    for d in range(1, p):
        if p % d:
            continue
        ok = True
        for back in range(3):
            ia = ring[(n - back) % ring_n]
            ib = ring[(n - back - d) % ring_n]
            if ia is None or ib is None or \
                    abs(ia[0] - ib[0]) * ia[1] * ib[1] > tol:
                ok = False
                break
        if ok:
            best = d
            break
    if best > 1:
        cur = ring[n % ring_n]
        sep = math.inf
        for j in range(1, best):
            prev = ring[(n - j) % ring_n]
            if prev is None:
                continue
            sep = min(sep, abs(cur[0] - prev[0]) * cur[1] * prev[1])
        if sep <= 50.0 * tol:
            return None
    pts = [ring[(n - best + 1 + i) % ring_n][0] for i in range(best)]
    rep = pts[0]
    mult = 1.0 + 0j
    for w in pts:
        h = 1e-6 * max(1.0, abs(w))
        gp = (_family_step(a, b, w + h) - _family_step(a, b, w - h)) / (2 * h)
        mult *= gp
    if best == 1 and abs(rep - 1.0) <= 1e-5:
        return OrbitClassification(KIND_FIXED_ROOT, n, SpherePoint(rep), period=1,
                                   representative=SpherePoint(1.0), multiplier=mult)
    return OrbitClassification(KIND_CYCLE, n, SpherePoint(pts[-1]), period=best,
                               representative=SpherePoint(rep), multiplier=mult)


def _family_step(a, b, w):
    return w * cmath.exp(TWO_PI_I * (-(w - 1.0) / (a * w - b)))


# ---------------------------------------------------------------------------
# membership records
# ---------------------------------------------------------------------------

COLOR_ROOT = 0          # white: free critical orbit captured by the root
COLOR_END = 1           # gray: locked to the 0/infinity end
COLOR_PERIOD_BASE = 2   # 2..8: cycles of period 1..7
COLOR_DEEP = 9          # black: period >= 8, or a prepole parameter
COLOR_SENTINEL = 10     # undetermined within budget


def color_index(classification):
    """Legend slot for a classified free-critical orbit."""
    k = classification.kind
    if k == KIND_FIXED_ROOT:
        return COLOR_ROOT
    if k in (KIND_ZERO_AV, KIND_INFINITY_AV, KIND_ESCAPED):
        return COLOR_END
    if k == KIND_CYCLE:
        p = classification.period
        return COLOR_PERIOD_BASE + (p - 1) if p <= 7 else COLOR_DEEP
    if k == KIND_PREPOLE:
        return COLOR_DEEP
    return COLOR_SENTINEL


class MTildeRecord:
    """Membership verdict for one parameter."""

    def __init__(self, lam, classification):
        self.lam = complex(lam)
        self.classification = classification
        k = classification.kind
        if k == KIND_UNDETERMINED:
            self.member = None
        else:
            self.member = k != KIND_FIXED_ROOT
        self.color = color_index(classification)

    def to_json(self):
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "member": self.member,
            "color_index": self.color,
            "classification": self.classification.to_json(),
        }


def mtilde_classify(lam, cfg=DEFAULT_CONFIG):
    """Classify the free critical orbit and decide locus membership.

    The parameter belongs to the locus exactly when the free critical
    orbit is not captured by the distinguished root; a budget-exhausted
    orbit leaves membership undecided (member None).
    """
    lam = _check_param(lam)
    c = classify_family_orbit(lam, family_free_critical(lam), cfg)
    return MTildeRecord(lam, c)


def analysis_record(lam, cfg=DEFAULT_CONFIG):
    """Full analysis payload for one parameter, JSON-ready."""
    lam = _check_param(lam)
    rec = mtilde_classify(lam, cfg)
    m = pseudotrig(lam)
    diag = component_lift_diagnosis(m, rec.classification, cfg)
    mult0, multinf = end_multipliers(lam)
    pseudo = []
    for sigma in (1, 2, 3, -1, -2, -3):
        w_star, rho = pseudo_fixed_point(lam, sigma)
        pseudo.append({"sigma": sigma, "rho": [rho.real, rho.imag],
                       "w_star": _sphere_json(w_star)})
    b_val = family_pole(lam)
    c_val = b_val * b_val
    out = rec.to_json()
    out.update({
        "pole": [b_val.real, b_val.imag],
        "free_critical": [c_val.real, c_val.imag],
        "multipliers": {
            "zero": [mult0.real, mult0.imag],
            "infinity": [multinf.real, multinf.imag],
            "pseudo": pseudo,
        },
        "diagnosis": diag.to_json(),
        "mu": _sphere_json(mu_transform(lam)),
    })
    return out


def _sphere_json(p):
    p = as_sphere(p)
    return "inf" if p.is_infinity else [p.value.real, p.value.imag]


# ---------------------------------------------------------------------------
# internal rays
# ---------------------------------------------------------------------------

RAY_REGIONS = ("omega-minus", "omega-plus", "omega0-minus", "omega0-plus")


def internal_ray_point(region, theta, k, t):
    """Point of the internal ray (theta, k) of a parameter-plane component.

    omega-minus / omega-plus are the components where the infinity / zero
    end attracts: for t <= 0 the returned parameter satisfies
    end multiplier = exp(t + 2 pi i theta) on the corresponding end (the
    integer k picks the sheet), and any t in (0, 1] returns the ray's
    landing parameter on the component boundary.  The sheet theta + k = 0
    carries no landing point (DegenerateRay).

    omega0-minus / omega0-plus are the pseudo-fixed components indexed by
    the integer translation k != 0 (ZeroSigma otherwise): for t <= 0 the
    parameter satisfies rho(lam, k) = exp(t + 2 pi i theta); t > 0 is not
    defined for them.
    """
    from .errors import DegenerateRay  # local import to avoid cycle noise

    theta = float(theta)
    k = int(k)
    t = float(t)
    if region == "omega-minus" or region == "omega-plus":
        if t > 1.0:
            raise ValueError("ray parameter t must be at most 1")
        sheet = theta + k
        if t > 0.0:
            if sheet == 0.0:
                raise DegenerateRay("the sheet theta + k = 0 has no landing point")
            core = 1.0 / sheet
        else:
            denom = t + TWO_PI_I * sheet
            if denom == 0:
                raise DegenerateRay("ray origin of the zero sheet")
            core = TWO_PI_I / denom
        return core - PI_I if region == "omega-minus" else PI_I - core
    if region == "omega0-minus" or region == "omega0-plus":
        if k == 0:
            raise ZeroSigma("pseudo-fixed components need a nonzero integer index")
        if t > 0.0:
            raise ValueError("multiplier rays are defined for t <= 0")
        sigma = k
        s = cmath.sqrt(1.0 - (math.pi * sigma) ** 2 - cmath.exp(t + TWO_PI_I * theta))
        if region == "omega0-minus":
            s = -s
        return (-1.0 + s) / sigma
    raise ValueError(f"unknown ray region {region!r}")


def omega_multiplier(lam, which, k=None):
    """Attractor multiplier the internal rays are defined by.

    which = "zero" / "infinity" gives the end multipliers; "pseudo" with an
    integer k gives the multiplier rho of the pseudo-fixed point of
    translation type k (exactly 1 at the transcritical parameter
    lam = -pi i - 1/k, where that point escapes to infinity).
    """
    lam = _check_param(lam)
    if which == "zero":
        return end_multipliers(lam)[0]
    if which == "infinity":
        return end_multipliers(lam)[1]
    if which == "pseudo":
        if k is None or int(k) == 0:
            raise ZeroSigma("pseudo multiplier needs a nonzero integer k")
        return pseudo_fixed_point(lam, int(k))[1]
    raise ValueError(f"unknown multiplier selector {which!r}")


# ---------------------------------------------------------------------------
# Moebius view of the parameter plane
# ---------------------------------------------------------------------------

def mu_transform(lam):
    """mu = (lam + 2 pi i)/lam, total on the sphere.

    Sends the two ends of the parameter cylinder picture to 1 (lam infinite)
    and infinity (lam = 0) and the degenerate parameters -pi i / pi i to
    the reference points -1 and 3.
    """
    lam = as_sphere(lam)
    if lam.is_infinity:
        return SpherePoint(1.0)
    v = lam.value
    if v == 0:
        return INF
    return SpherePoint((v + TWO_PI_I) / v)


def mu_inverse(mu):
    """Inverse of mu_transform: lam = 2 pi i/(mu - 1)."""
    mu = as_sphere(mu)
    if mu.is_infinity:
        return SpherePoint(0.0)
    v = mu.value
    if v == 1.0:
        return INF
    return SpherePoint(TWO_PI_I / (v - 1.0))


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

def _invert(p):
    p = as_sphere(p)
    if p.is_infinity:
        return SpherePoint(0.0)
    if p.value == 0:
        return INF
    return SpherePoint(1.0 / p.value)


def _conj(p):
    p = as_sphere(p)
    if p.is_infinity:
        return INF
    return SpherePoint(p.value.conjugate())


def symmetry_residuals(lam, samples=50, seed=0):
    """Max chordal residuals of the two family symmetries over random w.

    r1: the member at -lam conjugated by w -> 1/w reproduces the member at
    lam; r2: the member at -conj(lam) conjugated by complex conjugation
    does.  Both should vanish identically.
    """
    lam = _check_param(lam)
    _check_param(-lam)
    g = pseudotrig(lam)
    g_neg = pseudotrig(-lam)
    g_conj = pseudotrig(-lam.conjugate())
    rng = np.random.default_rng(seed)
    r1 = 0.0
    r2 = 0.0
    pole = family_pole(lam)
    for _ in range(samples):
        w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(w) < 1e-3 or abs(w - pole) < 1e-6:
            continue
        gw = project_eval(g, w)
        lhs1 = project_eval(g_neg, _invert(w))
        r1 = max(r1, chordal(lhs1, _invert(gw)))
        lhs2 = project_eval(g_conj, _conj(w))
        r2 = max(r2, chordal(lhs2, _conj(gw)))
    return r1, r2


# ---------------------------------------------------------------------------
# parameter searches
# ---------------------------------------------------------------------------

def component_root_search(sigma, seed, max_steps=100):
    """Newton search for the parameter where rho(lam, sigma) = 1.

    rho - 1 factors through the two transcritical parameters
    -/+ pi i - 1/sigma; the search converges to the one nearer the seed.
    Residual target 1e-10 on |rho - 1|; NoConvergence otherwise.
    """
    sigma = int(sigma)
    if sigma == 0:
        raise ZeroSigma("sigma must be a nonzero integer")
    lam = complex(seed)
    for _ in range(max_steps):
        u = 1.0 + (lam - PI_I) * sigma
        v = 1.0 + (lam + PI_I) * sigma
        h = -u * v                     # rho - 1
        if abs(h) <= 1e-10:
            return lam
        hp = -sigma * (u + v)
        if hp == 0:
            break
        lam = lam - h / hp
    raise NoConvergence(f"no rho = 1 parameter within {max_steps} steps of {seed}")


def prepole_search(order, seed, max_steps=80):
    """Newton search for a parameter whose free critical orbit hits the pole.

    Solves g^order(C) = B for lam with a finite-difference derivative.
    Residual target 1e-10; NoConvergence otherwise.
    """
    order = int(order)
    if order < 1:
        raise ValueError("order must be at least 1")

    def h(lam):
        a = lam + PI_I
        b = lam - PI_I
        pole = b / a
        w = pole * pole
        for _ in range(order):
            w = _family_step(a, b, w)
        return w - pole

    lam = _check_param(complex(seed))
    fd = 1e-7
    for _ in range(max_steps):
        val = h(lam)
        if abs(val) <= 1e-10:
            return lam
        dv = (h(lam + fd) - h(lam - fd)) / (2 * fd)
        if dv == 0:
            break
        lam = _check_param(lam - val / dv)
    raise NoConvergence(f"no order-{order} prepole parameter near {seed}")
