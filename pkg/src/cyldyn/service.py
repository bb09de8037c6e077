"""HTTP tile/analysis service for the explorer UI.

Endpoints (all GET):
  /api/tile/{plane}/{z}/{x}/{y}?lambda=re,im[&max_iter=N]  PNG tile
  /api/analyze?lambda=re,im[&max_iter=N]                   analysis record
  /api/ray?region=&theta=&k=&t=[&samples=N]                ray polyline
  /api/meta                                                plane windows etc.
  /healthz                                                 :: "ok"

Responses carry a deterministic ETag (config hash plus request key); the
tile cache is a byte-capped LRU with request coalescing so concurrent
identical requests compute once and serve identical bytes.
"""

from __future__ import annotations

import math
import os
import threading
from collections import OrderedDict

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import CyldynError, DegenerateRay, ParamSingularity, ZeroSigma
from .kernel import as_sphere
from .orbits import OrbitConfig
from .params import analysis_record, internal_ray_point, mu_transform
from .render import PLANE_WINDOWS, PALETTE_VERSION, config_hash, png_bytes, render_tile

PI = math.pi
TILE_PX = 256
PLANES = ("param", "dyn", "mu")
DEGENERATE_RADIUS = 1e-6   # service-level guard, wider than the engine's
MAX_ZOOM = 12


class _OverCapacity(Exception):
    pass


def _parse_lambda(raw):
    if raw is None:
        return None
    parts = str(raw).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValueError(f"lambda must be 're,im', got {raw!r}")


def _near_degenerate(lam):
    return min(abs(lam - 1j * PI), abs(lam + 1j * PI)) <= DEGENERATE_RADIUS


def _sphere_json(p):
    p = as_sphere(p)
    return "inf" if p.is_infinity else [p.value.real, p.value.imag]


class TileCache:
    """Byte-capped LRU of encoded tiles with per-key render coalescing."""

    def __init__(self, max_bytes):
        self.max_bytes = int(max_bytes)
        self._lock = threading.Lock()
        self._data = OrderedDict()   # key -> bytes
        self._size = 0
        self._inflight = {}          # key -> threading.Event

    def get(self, key):
        with self._lock:
            blob = self._data.get(key)
            if blob is not None:
                self._data.move_to_end(key)
            return blob

    def put(self, key, blob):
        with self._lock:
            old = self._data.pop(key, None)
            if old is not None:
                self._size -= len(old)
            self._data[key] = blob
            self._size += len(blob)
            while self._size > self.max_bytes and len(self._data) > 1:
                _, evicted = self._data.popitem(last=False)
                self._size -= len(evicted)

    def render_coalesced(self, key, producer):
        """Return the cached bytes for key, computing via producer at most
        once across concurrent callers."""
        while True:
            with self._lock:
                blob = self._data.get(key)
                if blob is not None:
                    self._data.move_to_end(key)
                    return blob
                ev = self._inflight.get(key)
                if ev is None:
                    ev = threading.Event()
                    self._inflight[key] = ev
                    leader = True
                else:
                    leader = False
            if leader:
                try:
                    blob = producer()
                    self.put(key, blob)
                    return blob
                finally:
                    with self._lock:
                        self._inflight.pop(key, None)
                    ev.set()
            else:
                ev.wait()
                # leader finished (or failed); loop to re-check the cache
                with self._lock:
                    blob = self._data.get(key)
                if blob is not None:
                    return blob
                # leader failed: take over on the next loop iteration


def build_app(workers=None, cache_bytes=512 * 2 ** 20, max_iter=800,
              static_dir=None, queue_cap=None, tile_px=TILE_PX):
    """Assemble the FastAPI app.

    workers bounds the concurrency budget (default CYLDYN_THREADS or 1);
    the work queue is capped at 4x workers (503 beyond); max_iter is the
    default orbit budget for tiles and analyses, overridable per request
    within [100, 5000].
    """
    if workers is None:
        try:
            workers = max(1, int(os.environ.get("CYLDYN_THREADS", "1")))
        except ValueError:
            workers = 1
    if queue_cap is None:
        queue_cap = 4 * workers

    app = FastAPI(title="cyldyn tiles", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"],
        allow_headers=["*"])

    app.state.cache = TileCache(cache_bytes)
    app.state.queue_slots = threading.Semaphore(max(0, queue_cap))
    app.state.queue_cap = queue_cap
    app.state.default_max_iter = max_iter
    app.state.tile_px = int(tile_px)
    app.state.render_fn = render_tile   # overridable in tests

    def request_config(max_iter_q):
        n = app.state.default_max_iter if max_iter_q is None else int(max_iter_q)
        # floor keeps max_iter above the default cycle-period cap
        n = max(100, min(5000, n))
        return OrbitConfig(max_iter=n)

    @app.exception_handler(CyldynError)
    async def cyldyn_error(_req, exc):
        code = 422 if isinstance(
            exc, (ParamSingularity, DegenerateRay, ZeroSigma)) else 400
        return JSONResponse(exc.to_json(), status_code=code)

    @app.exception_handler(ValueError)
    async def value_error(_req, exc):
        return JSONResponse({"error": "bad-request", "message": str(exc)},
                            status_code=400)

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz():
        return "ok"

    @app.get("/api/meta")
    def meta():
        return {
            "planes": {name: {"x_min": w[0], "y_max": w[1],
                              "width": w[2], "height": w[3]}
                       for name, w in PLANE_WINDOWS.items()},
            "tile_px": app.state.tile_px,
            "max_zoom": MAX_ZOOM,
            "palette_version": PALETTE_VERSION,
            "default_max_iter": app.state.default_max_iter,
        }

    @app.get("/api/analyze")
    def analyze(request: Request, max_iter: int | None = None):
        raw = request.query_params.get("lambda")
        if raw is None:
            return JSONResponse({"error": "bad-request",
                                 "message": "missing lambda"}, status_code=400)
        lam = _parse_lambda(raw)
        if _near_degenerate(lam):
            raise ParamSingularity(
                f"parameter {lam} degenerates the family",
                lam=[lam.real, lam.imag])
        cfg = request_config(max_iter)
        rec = analysis_record(lam, cfg)
        etag = f'"{config_hash("analyze", cfg, lam)}"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304)
        return JSONResponse(rec, headers={"ETag": etag})

    @app.get("/api/tile/{plane}/{z}/{x}/{y}")
    def tile(plane: str, z: int, x: int, y: int, request: Request,
             max_iter: int | None = None):
        if plane not in PLANES:
            return JSONResponse({"error": "not-found",
                                 "message": f"unknown plane {plane!r}"},
                                status_code=404)
        lam = None
        if plane == "dyn":
            raw = request.query_params.get("lambda")
            if raw is None:
                return JSONResponse(
                    {"error": "bad-request",
                     "message": "dyn tiles need a lambda parameter"},
                    status_code=400)
            lam = _parse_lambda(raw)
            if _near_degenerate(lam):
                raise ParamSingularity(
                    f"parameter {lam} degenerates the family",
                    lam=[lam.real, lam.imag])
        n = 1 << max(0, min(MAX_ZOOM, z))
        if z < 0 or z > MAX_ZOOM or not (0 <= x < n and 0 <= y < n):
            return JSONResponse({"error": "not-found",
                                 "message": "tile outside pyramid"},
                                status_code=404)
        cfg = request_config(max_iter)
        px = app.state.tile_px
        lam_token = "" if lam is None else f"@{lam.real!r},{lam.imag!r}"
        key = (f"{config_hash(plane, cfg, lam)}-{plane}-{z}-{x}-{y}"
               f"-{px}px{lam_token}")
        etag = f'"{key}"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304)

        def produce():
            # only actual renders consume queue slots; coalesced waiters
            # idle on the leader's event without holding capacity
            if not app.state.queue_slots.acquire(blocking=False):
                raise _OverCapacity()
            try:
                img, _ = app.state.render_fn(plane, z, x, y, lam=lam, cfg=cfg,
                                             tile_px=px)
                return png_bytes(img)
            finally:
                app.state.queue_slots.release()

        try:
            blob = app.state.cache.render_coalesced(key, produce)
        except _OverCapacity:
            return JSONResponse({"error": "over-capacity",
                                 "message": "render queue is full"},
                                status_code=503,
                                headers={"Retry-After": "1"})
        return Response(blob, media_type="image/png",
                        headers={"ETag": etag,
                                 "Cache-Control": "public, max-age=31536000"})

    @app.get("/api/ray")
    def ray(region: str, theta: float, t: float, k: int = 0,
            samples: int = 1, request: Request = None):
        samples = max(1, min(512, int(samples)))
        ts = [t] if samples == 1 else \
            [t * (1.0 - i / (samples - 1)) for i in range(samples)]
        pts = []
        for t_i in ts:
            lam = internal_ray_point(region, theta, k, t_i)
            pts.append({"t": t_i, "lambda": [lam.real, lam.imag],
                        "mu": _sphere_json(mu_transform(lam))})
        out = {"region": region, "theta": theta, "k": k, "points": pts}
        if region in ("omega-minus", "omega-plus") and theta + k != 0:
            landing = internal_ray_point(region, theta, k, 1.0)
            out["landing"] = {"lambda": [landing.real, landing.imag],
                              "mu": _sphere_json(mu_transform(landing))}
        return out

    _mount_static(app, static_dir)
    return app


def _mount_static(app, static_dir):
    candidate = static_dir or os.environ.get("CYLDYN_STATIC")
    if candidate is None:
        here = os.path.dirname(os.path.abspath(__file__))
        for up in (os.path.join(here, "..", ".."),):
            probe = os.path.abspath(os.path.join(up, "frontend", "dist"))
            if os.path.isdir(probe):
                candidate = probe
                break
        if candidate is None and os.path.isdir(os.path.join("frontend", "dist")):
            candidate = os.path.join("frontend", "dist")
    if candidate and os.path.isdir(candidate):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=candidate, html=True),
                  name="explorer")
