"""Orbit iteration, attractor classification, and lifted-orbit analysis.

The classifier iterates the plane projection g on the sphere and stops on
one of: proximity to an essential singularity (Prepole), sustained
convergence into an asymptotic end (ZeroAV/InfinityAV -- or Escaped when
that end is essential), a detected cycle (Cycle, or FixedRoot when the
cycle is the distinguished root), or budget exhaustion (Undetermined).

Lifted analysis connects plane cycles back to the cylinder: a p-periodic
w* lifts to z* with f^p(z*) = z* + sigma for an integer sigma (the
translation type), which decides whether the component containing the
orbit is periodic (sigma = 0) or a wandering chain (sigma != 0).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import (AtEssentialSingularity, ExpOverflow, NoConvergence,
                     NonIntegerSigma, NonMonotoneBracket, NotCirclePreserving,
                     NotPeriodic)
from .kernel import INF, SpherePoint, as_sphere, chordal, rational_eval
from .maps import (end_multiplier, exp_coord, lift_eval, mero_standard,
                   project_derivative, project_eval)

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi

GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0


class OrbitConfig:
    """Iteration budget and detection radii for orbit classification."""

    def __init__(self, max_iter=5000, escape_radius=1e12, zero_radius=1e-12,
                 singularity_radius=1e-10, cycle_tol=1e-9, period_cap=64):
        if period_cap > max_iter:
            raise ValueError("period_cap must not exceed max_iter")
        if min(escape_radius, zero_radius, singularity_radius, cycle_tol) <= 0:
            raise ValueError("radii and tolerances must be positive")
        self.max_iter = int(max_iter)
        self.escape_radius = float(escape_radius)
        self.zero_radius = float(zero_radius)
        self.singularity_radius = float(singularity_radius)
        self.cycle_tol = float(cycle_tol)
        self.period_cap = int(period_cap)

    @classmethod
    def from_json(cls, d):
        base = cls()
        kw = {k: d.get(k, getattr(base, k)) for k in
              ("max_iter", "escape_radius", "zero_radius",
               "singularity_radius", "cycle_tol", "period_cap")}
        return cls(**kw)

    def to_json(self):
        return {k: getattr(self, k) for k in
                ("max_iter", "escape_radius", "zero_radius",
                 "singularity_radius", "cycle_tol", "period_cap")}


DEFAULT_CONFIG = OrbitConfig()

KIND_FIXED_ROOT = "fixed-root"
KIND_ZERO_AV = "zero-av"
KIND_INFINITY_AV = "infinity-av"
KIND_CYCLE = "cycle"
KIND_PREPOLE = "prepole"
KIND_ESCAPED = "escaped"
KIND_UNDETERMINED = "undetermined"


class OrbitClassification:
    """Outcome of classify_orbit."""

    def __init__(self, kind, iterations, final, period=None, representative=None,
                 multiplier=None, prepole_order=None, note=""):
        self.kind = kind
        self.iterations = int(iterations)
        self.final = final
        self.period = period
        self.representative = representative
        self.multiplier = multiplier
        self.prepole_order = prepole_order
        self.note = note

    def to_json(self):
        def pt(p):
            if p is None:
                return None
            p = as_sphere(p)
            return "inf" if p.is_infinity else [p.value.real, p.value.imag]
        d = {"kind": self.kind, "iters": self.iterations}
        if self.period is not None:
            d["period"] = self.period
        if self.representative is not None:
            d["rep"] = pt(self.representative)
        if self.multiplier is not None:
            d["multiplier"] = [self.multiplier.real, self.multiplier.imag]
        if self.prepole_order is not None:
            d["prepole_order"] = self.prepole_order
        if self.note:
            d["note"] = self.note
        return d

    def __repr__(self):
        bits = [self.kind, f"iters={self.iterations}"]
        if self.period is not None:
            bits.append(f"p={self.period}")
        return "OrbitClassification(" + ", ".join(bits) + ")"


def detect_cycle(window, cfg=DEFAULT_CONFIG):
    """Least period p <= period_cap sustained over the window tail.

    `window` is a sequence of consecutive orbit points (needs length at
    least 2*period_cap to see every admissible period).  A period counts
    only when the three most recent comparisons at lag p all fall within
    cycle_tol in the chordal metric.  Returns (p, representative) with the
    representative being the smallest-index window point inside the cycle,
    or None.

    A period above 1 is only reported once the candidate cycle is well
    separated from itself (shorter lags all exceed 50x cycle_tol): a slowly
    converging spiral whose rotation is near a p-th root of unity dips
    under the tolerance at lag p long before lag 1, and must keep
    iterating until the true period resolves.
    """
    n = len(window)
    for p in range(1, cfg.period_cap + 1):
        if n < p + 3:
            break
        ok = True
        for back in range(3):
            a = window[n - 1 - back]
            b = window[n - 1 - back - p]
            if chordal(a, b) > cfg.cycle_tol:
                ok = False
                break
        if ok:
            if p > 1:
                sep = min(chordal(window[n - 1], window[n - 1 - j])
                          for j in range(1, p))
                if sep <= 50.0 * cfg.cycle_tol:
                    return None
            return p, window[n - p]
    return None


def cycle_multiplier(m, points, h=1e-6):
    """Multiplier of a cycle: product of finite-difference derivative
    estimates of the projection along the cycle.

    Cycles through the ends (0/infinity) fall back to the closed-form end
    multiplier.
    """
    prod = 1.0 + 0j
    for w in points:
        w = as_sphere(w)
        if w.is_infinity or abs(w.value) < 1e-9:
            em = end_multiplier(m, "infinity" if w.is_infinity else "zero")
            if em is None:
                return None
            return em
        z = w.value
        step = h * max(1.0, abs(z))
        try:
            gp = (project_eval(m, z + step).value -
                  project_eval(m, z - step).value) / (2 * step)
        except AtEssentialSingularity:
            return None
        prod *= gp
    return prod


def _near_essential(m, w, cfg):
    for e in m.essential_points():
        if e.is_infinity:
            continue
        if (not w.is_infinity) and \
                abs(w.value - e.value) <= cfg.singularity_radius * (1.0 + abs(e.value)):
            return True
    return False


def _end_is_essential(m, which):
    if which == "zero":
        return rational_eval(m.phi, 0).is_infinity
    return rational_eval(m.phi, INF).is_infinity


def classify_orbit(m, w0, cfg=DEFAULT_CONFIG):
    """Iterate the projection from w0 and classify the attractor.

    Stop conditions, in the order they are checked each step: proximity to
    an essential singularity (Prepole with the number of steps taken as its
    order), three consecutive samples inside the 0/infinity detection radii
    with an attracting or monotone approach (ZeroAV/InfinityAV; Escaped when
    that end is essential), a sustained cycle (FixedRoot when it is the
    distinguished root fixed point), or budget exhaustion (Undetermined).
    """
    w = as_sphere(w0)
    zero_ess = _end_is_essential(m, "zero")
    inf_ess = _end_is_essential(m, "infinity")

    dist = m.distinguished_fixed
    if dist is not None and chordal(w, dist) <= cfg.cycle_tol:
        return OrbitClassification(KIND_FIXED_ROOT, 0, w, period=1,
                                   representative=SpherePoint(dist),
                                   multiplier=0j)

    window = []
    maxwin = 2 * cfg.period_cap + 4
    zero_streak = 0
    inf_streak = 0
    mags = []  # recent |w| values for the monotone trend check
    cand_p = None
    cand_count = 0

    for n in range(cfg.max_iter + 1):
        # Landing exactly on an essential end terminates the orbit there.
        if w.is_infinity and inf_ess:
            return OrbitClassification(KIND_ESCAPED, n, w,
                                       note="orbit reached the essential infinity end")
        if (not w.is_infinity) and w.value == 0 and zero_ess:
            return OrbitClassification(KIND_ESCAPED, n, w,
                                       note="orbit reached the essential 0 end")
        if _near_essential(m, w, cfg):
            return OrbitClassification(KIND_PREPOLE, n, w, prepole_order=n)

        mag = math.inf if w.is_infinity else abs(w.value)
        mags.append(mag)
        if len(mags) > 4:
            mags.pop(0)

        if mag <= cfg.zero_radius:
            zero_streak += 1
            inf_streak = 0
        elif mag >= cfg.escape_radius:
            inf_streak += 1
            zero_streak = 0
        else:
            zero_streak = inf_streak = 0

        if zero_streak >= 3:
            if zero_ess:
                return OrbitClassification(KIND_ESCAPED, n, w,
                                           note="approaches the essential 0 end")
            em = end_multiplier(m, "zero")
            monotone = len(mags) >= 3 and mags[-1] <= mags[-2] <= mags[-3]
            if (em is not None and abs(em) < 1.0) or monotone:
                return OrbitClassification(KIND_ZERO_AV, n, w, multiplier=em,
                                           representative=SpherePoint(0))
        if inf_streak >= 3:
            if inf_ess:
                return OrbitClassification(KIND_ESCAPED, n, w,
                                           note="approaches the essential infinity end")
            em = end_multiplier(m, "infinity")
            monotone = len(mags) >= 3 and mags[-1] >= mags[-2] >= mags[-3]
            if (em is not None and abs(em) < 1.0) or monotone:
                return OrbitClassification(KIND_INFINITY_AV, n, w, multiplier=em,
                                           representative=INF)

        window.append(w)
        if len(window) > maxwin:
            window.pop(0)

        # Cycle detection only fires in the moderate annulus: orbits sliding
        # into an end are chordally Cauchy long before the streak counters
        # trip, and would masquerade as period-1 cycles.
        moderate = (not w.is_infinity) and 1e-8 < mag < 1e8
        hit = detect_cycle(window, cfg) if (moderate and len(window) >= 4) else None
        if hit is not None:
            p, rep = hit
            if p == cand_p:
                cand_count += 1
            else:
                cand_p, cand_count = p, 1
            # three sustained detections of the same least period
            if cand_count >= 3:
                cycle_pts = window[-p:]
                mult = cycle_multiplier(m, cycle_pts)
                rep = window[len(window) - p]
                if p == 1 and dist is not None and chordal(rep, dist) <= 1e-5:
                    return OrbitClassification(
                        KIND_FIXED_ROOT, n, w, period=1,
                        representative=SpherePoint(dist), multiplier=mult)
                return OrbitClassification(KIND_CYCLE, n, w, period=p,
                                           representative=rep, multiplier=mult)
        else:
            cand_p, cand_count = None, 0

        if n == cfg.max_iter:
            break
        try:
            w = project_eval(m, w)
        except AtEssentialSingularity:
            return OrbitClassification(KIND_PREPOLE, n + 1, w, prepole_order=n + 1)

    return OrbitClassification(KIND_UNDETERMINED, cfg.max_iter, w)


def classify_lift_orbit(m, z0, cfg=DEFAULT_CONFIG):
    """Classify the cylinder orbit of z0 through its projection e^(2 pi i z0).

    Cylinder points too far up/down to exponentiate are already inside an
    end and classify immediately.
    """
    w0 = exp_coord(complex(z0))
    if w0.is_infinity or (not w0.is_infinity and w0.value == 0):
        which = "zero" if (not w0.is_infinity) else "infinity"
        if _end_is_essential(m, which):
            return OrbitClassification(KIND_ESCAPED, 0, w0,
                                       note=f"starts inside the essential {which} end")
        kind = KIND_ZERO_AV if which == "zero" else KIND_INFINITY_AV
        return OrbitClassification(kind, 0, w0, multiplier=end_multiplier(m, which))
    return classify_orbit(m, w0, cfg)


# ---------------------------------------------------------------------------
# periodic points and their lifts
# ---------------------------------------------------------------------------

class PeriodicPoint:
    """A periodic point of the projection with its exact period."""

    def __init__(self, w, period, multiplier):
        self.w = w
        self.period = period
        self.multiplier = multiplier

    def __repr__(self):
        return f"PeriodicPoint(w={self.w!r}, p={self.period})"


class PseudoPoint:
    """A cylinder point with f^p(z*) = z* + sigma (integer translation type)."""

    def __init__(self, z_star, p, sigma, w_star):
        self.z_star = z_star
        self.p = int(p)
        self.sigma = int(sigma)
        self.w_star = w_star

    def to_json(self):
        w = as_sphere(self.w_star)
        return {
            "z_star": [self.z_star.real, self.z_star.imag],
            "p": self.p,
            "sigma": self.sigma,
            "w_star": "inf" if w.is_infinity else [w.value.real, w.value.imag],
        }

    def __repr__(self):
        return f"PseudoPoint(z*={self.z_star}, p={self.p}, sigma={self.sigma})"


def _orbit_and_derivative(m, w, p):
    """g^p(w) and (g^p)'(w) via the chain rule along the orbit."""
    deriv = 1.0 + 0j
    cur = w
    for _ in range(p):
        d = project_derivative(m, cur)
        if d.is_infinity:
            return None, None
        deriv *= d.value
        nxt = project_eval(m, cur)
        if nxt.is_infinity or nxt.value == 0:
            return None, None
        cur = nxt.value
    return cur, deriv


def find_periodic_points(m, p, seeds, cfg=DEFAULT_CONFIG, max_steps=80):
    """Damped Newton solves of g^p(w) = w from the given seeds.

    `seeds` is an iterable of complex starting points or a grid spec
    {"center", "half_width", "half_height", "nx", "ny"}.  Converged
    solutions (chordal residual of g^p(w) vs w at most 1e-9) are
    deduplicated within 1e-7 and reported with their exact (least) period
    and that cycle's multiplier.
    """
    if isinstance(seeds, dict):
        c = complex(seeds["center"]) if not isinstance(seeds["center"], (list, tuple)) \
            else complex(seeds["center"][0], seeds["center"][1])
        hw = float(seeds["half_width"])
        hh = float(seeds.get("half_height", hw))
        nx = int(seeds.get("nx", 8))
        ny = int(seeds.get("ny", 8))
        seeds = [c + complex((2 * i / max(nx - 1, 1) - 1) * hw,
                             (2 * j / max(ny - 1, 1) - 1) * hh)
                 for i in range(nx) for j in range(ny)]

    hits = []
    for w0 in seeds:
        w = complex(w0)
        ok = False
        for _ in range(max_steps):
            try:
                gw, dg = _orbit_and_derivative(m, w, p)
            except AtEssentialSingularity:
                break
            if gw is None:
                break
            fval = gw - w
            if chordal(gw, w) <= 1e-9:
                ok = True
                break
            jac = dg - 1.0
            if jac == 0:
                break
            step = -fval / jac
            # damping: halve until the residual actually decreases
            lam_dmp = 1.0
            base = abs(fval)
            moved = False
            for _ in range(8):
                trial = w + lam_dmp * step
                try:
                    gt, _ = _orbit_and_derivative(m, trial, p)
                except AtEssentialSingularity:
                    gt = None
                if gt is not None and abs(gt - trial) < base:
                    w = trial
                    moved = True
                    break
                lam_dmp *= 0.5
            if not moved:
                break
            if abs(w) > 1e8:
                break
        if not ok:
            continue
        if any(chordal(w, h.w) <= 1e-7 for h in hits):
            continue
        # exact (least) period among divisors of p
        exact = p
        for d in range(1, p):
            if p % d == 0:
                try:
                    gd, _ = _orbit_and_derivative(m, w, d)
                except AtEssentialSingularity:
                    continue
                if gd is not None and chordal(gd, w) <= 1e-8:
                    exact = d
                    break
        _, mult = _orbit_and_derivative(m, w, exact)
        hits.append(PeriodicPoint(SpherePoint(w), exact, mult))
    hits.sort(key=lambda h: (h.w.value.real, h.w.value.imag))
    return hits


def principal_lift(w):
    """z = Log(w)/(2 pi i) with the branch cut on the negative reals.

    The imaginary part of w is normalized so a negative real w lands on
    Re z = +1/2 (signed zero would otherwise flip it to -1/2).
    """
    w = complex(w)
    if w == 0:
        raise ValueError("0 does not lift")
    if w.imag == 0.0:
        w = complex(w.real, 0.0)
    return cmath.log(w) / TWO_PI_I


def lift_periodic_point(m, w, p, cfg=DEFAULT_CONFIG):
    """Lift a p-periodic point of the projection to a PseudoPoint.

    Verifies periodicity (NotPeriodic otherwise), takes the principal
    logarithm for z*, and reads off the integer translation type sigma from
    f^p(z*) - z* (NonIntegerSigma if that is not close to an integer).
    """
    w = as_sphere(w)
    if w.is_infinity or w.value == 0:
        raise NotPeriodic("end points are lifted at infinity; no cylinder lift")
    cur = w
    for _ in range(p):
        cur = project_eval(m, cur)
    if chordal(cur, w) > 1e-8:
        raise NotPeriodic(
            f"residual {chordal(cur, w):.3e} after {p} steps exceeds 1e-8")
    z = principal_lift(w.value)
    fz = z
    for _ in range(p):
        fz = lift_eval(m, fz)
    shift = fz - z
    sigma = round(shift.real)
    if abs(shift - sigma) > 1e-6:
        raise NonIntegerSigma(f"translation {shift} is not an integer")
    return PseudoPoint(z, p, sigma, w)


class TranslatePrediction:
    """Predicted behavior of integer translates z* + k under f^p iteration."""

    def __init__(self, kind, offset, detail=""):
        self.kind = kind      # escaping | constant-offset | alternating | collapses
        self.offset = offset  # offset of f^(m p)(z*+k) from z*+k (callable of m)
        self.detail = detail

    def offset_at(self, m):
        return self.offset(m)

    def __repr__(self):
        return f"TranslatePrediction({self.kind}, {self.detail})"


def predict_translate_orbit(pp, ell, k):
    """Exact translate-orbit offsets f^(m p)(z* + k) - (z* + k).

    |ell| >= 2: offset (ell^(m p) - 1)(k - delta) with delta = sigma/(1 - ell^p)
    (escape unless k = delta is the integer fixed translate); ell^p = 1:
    constant drift m*sigma; ell^p = -1: alternating offset (sigma - 2k) for
    odd m, 0 for even m (2p-periodic unless k = sigma/2); ell = 0: every
    translate collapses onto the orbit of z* itself.
    """
    p, sigma = pp.p, pp.sigma
    if ell == 0:
        return TranslatePrediction(
            "collapses", lambda m: 0,
            detail=f"all integer translates collapse onto the type-({p},{sigma}) orbit")
    lp = ell ** p
    if abs(ell) >= 2:
        delta = sigma / (1 - lp)
        if k == delta:
            return TranslatePrediction(
                "constant-offset", lambda m: 0j,
                detail=f"k = delta = {delta} is itself pseudoperiodic")
        return TranslatePrediction(
            "escaping", lambda m, _d=delta: (ell ** (m * p) - 1) * (k - _d),
            detail=f"geometric escape, delta = {delta}")
    if lp == 1:
        return TranslatePrediction(
            "constant-offset", lambda m: m * sigma,
            detail=f"drift sigma = {sigma} per period block")
    # lp == -1 (ell = -1, p odd)
    tau = sigma - 2 * k
    if tau == 0:
        return TranslatePrediction(
            "constant-offset", lambda m: 0,
            detail=f"k = sigma/2 = {k} is itself pseudoperiodic")
    return TranslatePrediction(
        "alternating", lambda m, _t=tau: _t * (m % 2),
        detail=f"2p-periodic translate, alternating offset {tau}")


# ---------------------------------------------------------------------------
# component diagnosis
# ---------------------------------------------------------------------------

DIAG_BAKER_INVARIANT = "baker-invariant"
DIAG_BAKER_CHAIN = "baker-chain"
DIAG_WANDERING = "wandering-escaping"
DIAG_PERIODIC = "periodic-same-type"
DIAG_UNKNOWN = "unknown"


class Diagnosis:
    def __init__(self, kind, sigma=None, rationale="", text=""):
        self.kind = kind
        self.sigma = sigma
        self.rationale = rationale
        self.text = text

    def to_json(self):
        d = {"kind": self.kind, "text": self.text, "rationale": self.rationale}
        if self.sigma is not None:
            d["sigma"] = self.sigma
        return d

    def __repr__(self):
        return f"Diagnosis({self.kind}, {self.text!r})"


def component_lift_diagnosis(m, attractor, cfg=DEFAULT_CONFIG):
    """Lifted-component structure implied by a classified plane attractor.

    An attracting asymptotic end lifts to an invariant half-cylinder-end
    domain (BakerInvariant); a parabolic end whose deformation-part value
    vanishes there lifts to a chain of invariant escape domains
    (BakerChain); a cycle of translation type sigma != 0 lifts to wandering
    components drifting by sigma (WanderingEscaping); sigma = 0 lifts to
    periodic components of the same period.
    """
    kind = attractor.kind
    if kind in (KIND_ZERO_AV, KIND_INFINITY_AV):
        which = "zero" if kind == KIND_ZERO_AV else "infinity"
        em = end_multiplier(m, which)
        rend = rational_eval(m.phi, 0 if which == "zero" else INF)
        if em is not None and abs(em) < 1.0 - 1e-9:
            return Diagnosis(DIAG_BAKER_INVARIANT,
                             rationale=f"attracting {which} end, |multiplier| = {abs(em):.6g} < 1",
                             text="invariant Baker domain")
        if em is not None and abs(em - 1.0) <= 1e-6 and \
                (not rend.is_infinity) and abs(rend.value) <= 1e-10:
            return Diagnosis(DIAG_BAKER_CHAIN,
                             rationale=f"parabolic {which} end: multiplier 1 and "
                                       f"deformation value 0 there",
                             text="chain of Baker domains")
        return Diagnosis(DIAG_UNKNOWN,
                         rationale=f"{which} end with multiplier {em}: neither "
                                   f"attracting nor a vanishing parabolic end",
                         text="undetermined")
    if kind == KIND_FIXED_ROOT:
        return Diagnosis(DIAG_PERIODIC, sigma=0,
                         rationale="orbit captured by the distinguished root",
                         text="all components are root basins")
    if kind == KIND_CYCLE:
        rep = attractor.representative
        try:
            pp = lift_periodic_point(m, rep, attractor.period, cfg)
        except (NotPeriodic, NonIntegerSigma, AtEssentialSingularity,
                ExpOverflow, ValueError) as e:
            return Diagnosis(DIAG_UNKNOWN, rationale=f"cycle failed to lift: {e}",
                             text="undetermined")
        if pp.sigma != 0:
            return Diagnosis(DIAG_WANDERING, sigma=pp.sigma,
                             rationale=f"cycle of translation type ({pp.p}, {pp.sigma}): "
                                       f"components drift by {pp.sigma} per period block",
                             text=f"wandering (σ={pp.sigma})")
        return Diagnosis(DIAG_PERIODIC, sigma=0,
                         rationale=f"cycle of translation type ({pp.p}, 0)",
                         text="periodic (same type)")
    if kind == KIND_UNDETERMINED:
        return Diagnosis(DIAG_UNKNOWN,
                         rationale="orbit budget exhausted; unbounded: likely/unknown",
                         text="undetermined")
    return Diagnosis(DIAG_UNKNOWN, rationale=f"no lifted structure for {kind}",
                     text="undetermined")


def basin_surrounds_origin(m, attractor, radius, samples=16, cfg=DEFAULT_CONFIG):
    """True when every sample on |w| = radius classifies like `attractor`."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if samples < 16:
        raise ValueError("need at least 16 samples")
    for k in range(samples):
        w = radius * cmath.exp(TWO_PI_I * k / samples)
        try:
            got = classify_orbit(m, w, cfg)
        except AtEssentialSingularity:
            return False
        if got.kind != attractor.kind:
            return False
        if got.kind == KIND_CYCLE and got.period != attractor.period:
            return False
    return True


# ---------------------------------------------------------------------------
# rotation numbers on the invariant circle
# ---------------------------------------------------------------------------

def _check_circle_preserving(m):
    for j in range(32):
        th = j / 32.0
        w = cmath.exp(TWO_PI_I * th)
        try:
            g = project_eval(m, w)
        except AtEssentialSingularity:
            raise NotCirclePreserving(f"essential singularity on the circle (theta={th})")
        if g.is_infinity or abs(abs(g.value) - 1.0) > 1e-9:
            raise NotCirclePreserving(
                f"|g| = {0 if g.is_infinity else abs(g.value):.12f} at theta = {th}")


def _real_circle_step(m):
    if m.circle_map is not None:
        return m.circle_map

    def step(theta):
        fz = lift_eval(m, complex(theta, 0.0))
        if abs(fz.imag) > 1e-9:
            raise NotCirclePreserving("lift does not keep the circle real")
        return fz.real
    return step


def rotation_number(m, theta0=0.0, n=10000):
    """Birkhoff rotation number of the circle restriction: (theta_n - theta_0)/n.

    Requires the projection to preserve the unit circle (checked on 32
    samples) and n >= 10^4 for the O(1/n) average to be meaningful.
    """
    if n < 10000:
        raise ValueError("need n >= 10^4 iterations")
    _check_circle_preserving(m)
    step = _real_circle_step(m)
    th = float(theta0)
    start = th
    for _ in range(int(n)):
        th = step(th)
    return (th - start) / n


def tune_rotation_number(a, beta, target, tol=1e-6, n=1000000, theta0=0.0):
    """Bisection on the rotation offset alpha for the Blaschke-deformed
    circle family until the measured rotation number hits `target`.

    The rotation number is monotone in alpha and gains exactly 1 as alpha
    does, so [0, 1] brackets any target in [rho(0), rho(0) + 1];
    NonMonotoneBracket otherwise.  Returns the tuned alpha.
    """
    def measure(alpha):
        m = mero_standard(a, alpha, beta)
        step = m.circle_map
        if step is None:
            raise NotCirclePreserving("family parameters must be real to tune")
        th = theta0
        for _ in range(int(n)):
            th = step(th)
        return (th - theta0) / n

    lo, hi = 0.0, 1.0
    rho_lo = measure(lo)
    rho_hi = rho_lo + 1.0  # exact equivariance of the family in alpha
    if not (rho_lo - tol <= target <= rho_hi + tol):
        raise NonMonotoneBracket(
            f"target {target} outside [{rho_lo}, {rho_hi}]")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        rho = measure(mid)
        if abs(rho - target) <= tol:
            return mid
        if rho < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    raise NoConvergence("bisection exhausted without meeting the tolerance")
