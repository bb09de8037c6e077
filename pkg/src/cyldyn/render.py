"""Raster rendering of the parameter plane, its Moebius view, and
dynamical planes, plus the slippy-tile arithmetic the HTTP service uses.

Byte-identical stitching is a hard requirement: a pixel's sample point is
computed from its *global* integer pixel index against the plane's root
window, with one shared pixel-size float, so a tile render and a
monolithic render of the same region produce bit-equal sample parameters
and therefore bit-equal pixels.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import ParamSingularity
from .orbits import DEFAULT_CONFIG, OrbitConfig
from .params import (COLOR_DEEP, COLOR_END, COLOR_PERIOD_BASE, COLOR_ROOT,
                     COLOR_SENTINEL, classify_family_orbit, color_index,
                     mu_inverse)

PALETTE_VERSION = "1"

MAX_DIM = 16384

# root windows (x_min, y_max, width, height) for the three planes
PLANE_WINDOWS = {
    "param": (-3.75, 3.25, 7.5, 6.5),
    "dyn": (-1.5, 0.85, 3.0, 2.0),
    "mu": (-1.6, 1.5, 5.2, 3.0),
}

# legend base colors by color_index slot
_BASE_RGB = {
    COLOR_ROOT: (255, 255, 255),        # root capture
    COLOR_END: (128, 128, 128),         # 0/infinity end attraction
    COLOR_PERIOD_BASE + 0: (230, 40, 40),    # period 1: red
    COLOR_PERIOD_BASE + 1: (245, 140, 20),   # period 2: orange
    COLOR_PERIOD_BASE + 2: (235, 220, 40),   # period 3: yellow
    COLOR_PERIOD_BASE + 3: (60, 180, 75),    # period 4: green
    COLOR_PERIOD_BASE + 4: (100, 180, 240),  # period 5: light blue
    COLOR_PERIOD_BASE + 5: (30, 60, 180),    # period 6: dark blue
    COLOR_PERIOD_BASE + 6: (150, 60, 170),   # period 7: purple
    COLOR_DEEP: (0, 0, 0),              # deeper periods and prepoles
}
_SENTINEL_RGB = ((96, 96, 96), (160, 160, 160))  # undetermined checkerboard


class Viewport:
    """Pixel grid over a plane region, anchored to global pixel indices.

    x0/y0 are the root window's top-left corner in plane units, px/py the
    per-axis pixel sizes, and i0/j0 the global index of this viewport's
    top-left pixel inside the full pixel grid of the root window at this
    resolution.  Sample points depend only on (i0 + i, j0 + j) and the
    shared floats, which is what makes tile stitching byte-exact.
    """

    def __init__(self, x0, y0, px, py, width, height, i0=0, j0=0):
        width = int(width)
        height = int(height)
        if not (0 < width <= MAX_DIM and 0 < height <= MAX_DIM):
            raise ValueError(f"image dimensions must be in 1..{MAX_DIM}")
        self.x0 = float(x0)
        self.y0 = float(y0)
        self.px = float(px)
        self.py = float(py)
        self.width = width
        self.height = height
        self.i0 = int(i0)
        self.j0 = int(j0)

    @classmethod
    def window(cls, x_min, y_max, width_units, height_units, width, height):
        """Monolithic viewport covering the given rectangle."""
        return cls(x_min, y_max, width_units / int(width),
                   height_units / int(height), width, height)

    @classmethod
    def tile(cls, plane, zoom, x, y, tile_px=256):
        """Tile (zoom, x, y) of the plane's root window pyramid."""
        if plane not in PLANE_WINDOWS:
            raise KeyError(f"unknown plane {plane!r}")
        zoom = int(zoom)
        x = int(x)
        y = int(y)
        tile_px = int(tile_px)
        if zoom < 0 or zoom > 12:
            raise ValueError("zoom must be in 0..12")
        n = 1 << zoom
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"tile ({x}, {y}) outside zoom-{zoom} grid")
        x_min, y_max, w_units, h_units = PLANE_WINDOWS[plane]
        total = tile_px * n
        return cls(x_min, y_max, w_units / total, h_units / total,
                   tile_px, tile_px, i0=x * tile_px, j0=y * tile_px)

    def point(self, i, j):
        """Plane coordinate sampled at pixel (i, j) of this viewport."""
        return complex(self.x0 + (self.i0 + i + 0.5) * self.px,
                       self.y0 - (self.j0 + j + 0.5) * self.py)

    def to_json(self):
        return {"x0": self.x0, "y0": self.y0, "px": self.px, "py": self.py,
                "width": self.width, "height": self.height,
                "i0": self.i0, "j0": self.j0}


def _brightness(iterations, max_iter):
    s = 1.0 - math.log1p(max(iterations, 0)) / math.log1p(max_iter)
    return 0.4 + 0.6 * max(0.0, min(1.0, s))


def shade(slot, iterations, max_iter, parity=0):
    """RGB for a legend slot; chromatic slots carry escape-time shading."""
    if slot == COLOR_SENTINEL:
        return _SENTINEL_RGB[parity & 1]
    base = _BASE_RGB[slot]
    if slot in (COLOR_ROOT, COLOR_END, COLOR_DEEP):
        return base
    s = _brightness(iterations, max_iter)
    return (int(base[0] * s + 0.5), int(base[1] * s + 0.5),
            int(base[2] * s + 0.5))


def config_hash(plane, cfg, lam=None):
    """Stable identity of (plane, orbit config, parameter, palette)."""
    payload = {
        "plane": plane,
        "cfg": cfg.to_json(),
        "lambda": None if lam is None else [complex(lam).real, complex(lam).imag],
        "palette": PALETTE_VERSION,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _pixel_slot_param(lam, cfg):
    try:
        c = classify_family_orbit(lam, _free_crit(lam), cfg)
    except ParamSingularity:
        return COLOR_SENTINEL, 0
    return color_index(c), c.iterations


def _free_crit(lam):
    b_val = (lam - 1j * math.pi) / (lam + 1j * math.pi)
    return b_val * b_val


def _render_rows(vp, cfg, slot_fn, rows):
    out = np.empty((len(rows), vp.width, 3), dtype=np.uint8)
    max_iter = cfg.max_iter
    for r, j in enumerate(rows):
        for i in range(vp.width):
            z = vp.point(i, j)
            slot, iters = slot_fn(z, cfg)
            out[r, i] = shade(slot, iters, max_iter,
                              parity=(vp.i0 + i + vp.j0 + j))
    return out


def _worker_count():
    try:
        return max(1, int(os.environ.get("CYLDYN_THREADS", "1")))
    except ValueError:
        return 1


def _render(vp, cfg, slot_fn):
    t0 = time.perf_counter()
    workers = _worker_count()
    if workers == 1 or vp.height < 2 * workers:
        img = _render_rows(vp, cfg, slot_fn, range(vp.height))
    else:
        bands = []
        step = (vp.height + workers - 1) // workers
        for start in range(0, vp.height, step):
            bands.append(range(start, min(start + step, vp.height)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda rows: _render_rows(vp, cfg, slot_fn, rows), bands))
        img = np.concatenate(parts, axis=0)
    dt_ms = (time.perf_counter() - t0) * 1e3
    return img, dt_ms


def render_parameter(vp, cfg=DEFAULT_CONFIG):
    """Parameter-plane raster: each pixel classifies the free critical orbit."""
    img, dt = _render(vp, cfg, _pixel_slot_param)
    return img, _sidecar("param", vp, cfg, None, dt)


def render_mu(vp, cfg=DEFAULT_CONFIG):
    """Moebius-view raster: the pixel is mu, classified at lam = 2 pi i/(mu-1)."""
    def slot_fn(mu, cfg_):
        lam_pt = mu_inverse(mu)
        if lam_pt.is_infinity:
            return COLOR_ROOT, 0
        try:
            c = classify_family_orbit(lam_pt.value, _free_crit(lam_pt.value), cfg_)
        except (ParamSingularity, ZeroDivisionError):
            return COLOR_SENTINEL, 0
        return color_index(c), c.iterations
    img, dt = _render(vp, cfg, slot_fn)
    return img, _sidecar("mu", vp, cfg, None, dt)


def render_dynamical(vp, lam, cfg=DEFAULT_CONFIG, coords="w"):
    """Dynamical-plane raster for one family member.

    coords = "w" samples the projection plane directly; coords = "z"
    samples the cylinder and classifies through w = exp(2 pi i z), with
    points beyond floating-point reach of the ends classified as the end
    they are inside.
    """
    lam = complex(lam)
    if coords not in ("w", "z"):
        raise ValueError("coords must be 'w' or 'z'")

    def slot_w(w, cfg_):
        try:
            c = classify_family_orbit(lam, w, cfg_)
        except ParamSingularity:
            return COLOR_SENTINEL, 0
        return color_index(c), c.iterations

    def slot_z(z, cfg_):
        logmag = -2.0 * math.pi * z.imag
        if logmag < -700.0:
            w = 0j
        elif logmag > 690.0:
            w = cmath.rect(math.exp(690.0), 2.0 * math.pi * z.real)
        else:
            w = cmath.rect(math.exp(logmag), 2.0 * math.pi * z.real)
        return slot_w(w, cfg_)

    img, dt = _render(vp, cfg, slot_w if coords == "w" else slot_z)
    side = _sidecar("dyn", vp, cfg, lam, dt)
    side["coords"] = coords
    return img, side


def render_tile(plane, zoom, x, y, lam=None, cfg=DEFAULT_CONFIG, tile_px=256):
    """Render one tile of a plane pyramid; dyn tiles need lam."""
    vp = Viewport.tile(plane, zoom, x, y, tile_px)
    if plane == "param":
        return render_parameter(vp, cfg)
    if plane == "mu":
        return render_mu(vp, cfg)
    if plane == "dyn":
        if lam is None:
            raise ValueError("dynamical tiles need the family parameter")
        return render_dynamical(vp, lam, cfg)
    raise KeyError(f"unknown plane {plane!r}")


def _sidecar(plane, vp, cfg, lam, dt_ms):
    return {
        "plane": plane,
        "viewport": vp.to_json(),
        "cfg_hash": config_hash(plane, cfg, lam),
        "palette_version": PALETTE_VERSION,
        "lambda": None if lam is None else [complex(lam).real, complex(lam).imag],
        "timing_ms": round(dt_ms, 3),
    }


def save_png(img, path, sidecar=None):
    """Write the raster as an 8-bit RGB PNG (plus optional sidecar JSON)."""
    from PIL import Image

    Image.fromarray(img, mode="RGB").save(path, format="PNG")
    if sidecar is not None:
        side_path = os.fspath(path)
        side_path = side_path[:-4] if side_path.endswith(".png") else side_path
        with open(side_path + ".json", "w") as fh:
            json.dump(sidecar, fh, indent=1, sort_keys=True)


def png_bytes(img):
    """PNG-encode the raster in memory."""
    import io

    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
