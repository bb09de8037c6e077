"""Command-line interface.

Exit codes: 0 success, 2 usage errors (click), 3 computation errors, which
also emit the structured error JSON on stderr.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click

from .errors import CyldynError
from .kernel import as_sphere
from .maps import map_from_json
from .newton import pseudo_fixed_point, superattracting_params
from .orbits import DEFAULT_CONFIG, OrbitConfig, rotation_number, tune_rotation_number
from .params import (analysis_record, internal_ray_point, mtilde_classify,
                     mu_inverse, mu_transform, omega_multiplier,
                     prepole_search)
from .render import (PLANE_WINDOWS, Viewport, render_dynamical, render_mu,
                     render_parameter, save_png)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class ComplexParam(click.ParamType):
    """Accepts 're,im' pairs or a bare real part."""

    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            parts = str(value).split(",")
            if len(parts) == 1:
                return complex(float(parts[0]), 0.0)
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            pass
        self.fail(f"{value!r} is not 're,im' or a real number", param, ctx)


COMPLEX = ComplexParam()


def _emit(data, raw):
    if raw:
        click.echo(json.dumps(data, sort_keys=True, separators=(",", ":")))
    else:
        click.echo(json.dumps(data, indent=2, sort_keys=True))


def _config(config_json):
    if not config_json:
        return DEFAULT_CONFIG
    return OrbitConfig.from_json(json.loads(config_json))


def computation_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CyldynError as err:
            click.echo(json.dumps(err.to_json()), err=True)
            sys.exit(3)
    return wrapper


def _sphere_json(p):
    p = as_sphere(p)
    return "inf" if p.is_infinity else [p.value.real, p.value.imag]


@click.group()
@click.version_option(package_name="cyldyn")
def cli():
    """Cylinder-projectable dynamics: analysis, rendering, and serving."""


@cli.command()
@click.option("--lam", "--lambda", "lam", type=COMPLEX, required=True,
              help="family parameter as 're,im'")
@click.option("--config", "config_json", default=None,
              help="JSON overrides for the orbit configuration")
@click.option("--raw", is_flag=True, help="compact single-line JSON")
@computation_errors
def analyze(lam, config_json, raw):
    """Classify the free critical orbit and report the full analysis."""
    _emit(analysis_record(lam, _config(config_json)), raw)


def _window_option(fn):
    fn = click.option("--window", default=None,
                      help="view rectangle as 'x_min,x_max,y_min,y_max'")(fn)
    fn = click.option("--width", type=int, default=300, show_default=True)(fn)
    fn = click.option("--height", type=int, default=260, show_default=True)(fn)
    return fn


def _viewport(window, width, height, default_key):
    if window is None:
        x0, y0, w, h = PLANE_WINDOWS[default_key]
        return Viewport.window(x0, y0, w, h, width, height)
    try:
        x_min, x_max, y_min, y_max = (float(v) for v in window.split(","))
    except ValueError:
        raise click.UsageError("--window must be 'x_min,x_max,y_min,y_max'")
    if not (x_max > x_min and y_max > y_min):
        raise click.UsageError("--window must have positive extent")
    return Viewport.window(x_min, y_max, x_max - x_min, y_max - y_min,
                           width, height)


@cli.command("render-param")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_window_option
@click.option("--mu", "mu_plane", is_flag=True,
              help="render the Moebius view instead of the raw parameter plane")
@click.option("--max-iter", type=int, default=2000, show_default=True)
@click.option("--config", "config_json", default=None)
@click.option("--raw", is_flag=True)
@computation_errors
def render_param_cmd(out, window, width, height, mu_plane, max_iter,
                     config_json, raw):
    """Render the parameter plane (or its Moebius view) to a PNG."""
    cfg = _config(config_json)
    if config_json is None or "max_iter" not in json.loads(config_json or "{}"):
        cfg = OrbitConfig.from_json({**cfg.to_json(), "max_iter": max_iter})
    key = "mu" if mu_plane else "param"
    vp = _viewport(window, width, height, key)
    img, side = (render_mu if mu_plane else render_parameter)(vp, cfg)
    save_png(img, out, sidecar=side)
    _emit(side, raw)


@cli.command("render-dyn")
@click.option("--lam", "--lambda", "lam", type=COMPLEX, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_window_option
@click.option("--coords", type=click.Choice(["w", "z"]), default="w",
              show_default=True)
@click.option("--max-iter", type=int, default=2000, show_default=True)
@click.option("--config", "config_json", default=None)
@click.option("--raw", is_flag=True)
@computation_errors
def render_dyn_cmd(lam, out, window, width, height, coords, max_iter,
                   config_json, raw):
    """Render one family member's dynamical plane to a PNG."""
    cfg = _config(config_json)
    if config_json is None or "max_iter" not in json.loads(config_json or "{}"):
        cfg = OrbitConfig.from_json({**cfg.to_json(), "max_iter": max_iter})
    vp = _viewport(window, width, height, "dyn")
    img, side = render_dynamical(vp, lam, cfg, coords=coords)
    save_png(img, out, sidecar=side)
    _emit(side, raw)


@cli.command()
@click.option("--region", type=click.Choice(["omega-minus", "omega-plus",
                                             "omega0-minus", "omega0-plus"]),
              required=True)
@click.option("--theta", type=float, required=True)
@click.option("--k", type=int, default=0, show_default=True)
@click.option("--t", "t_param", type=float, required=True)
@click.option("--samples", type=int, default=1, show_default=True,
              help="with N > 1, sample the ray at N parameters from t to 0")
@click.option("--raw", is_flag=True)
@computation_errors
def ray(region, theta, k, t_param, samples, raw):
    """Evaluate an internal ray point (or a polyline of them)."""
    try:
        if samples <= 1:
            lam = internal_ray_point(region, theta, k, t_param)
            _emit({"region": region, "theta": theta, "k": k, "t": t_param,
                   "lambda": [lam.real, lam.imag]}, raw)
            return
        pts = []
        for idx in range(samples):
            t_i = t_param * (1.0 - idx / (samples - 1))
            lam = internal_ray_point(region, theta, k, t_i)
            pts.append({"t": t_i, "lambda": [lam.real, lam.imag]})
    except ValueError as err:
        raise click.UsageError(str(err))
    _emit({"region": region, "theta": theta, "k": k, "points": pts}, raw)


@cli.command()
@click.option("--lam", "--lambda", "lam", type=COMPLEX, required=True)
@click.option("--sigma", type=int, required=True)
@click.option("--raw", is_flag=True)
@computation_errors
def pseudo(lam, sigma, raw):
    """Pseudo-fixed point of translation type sigma and its multiplier."""
    w_star, rho = pseudo_fixed_point(lam, sigma)
    _emit({"lambda": [lam.real, lam.imag], "sigma": sigma,
           "w_star": _sphere_json(w_star), "rho": [rho.real, rho.imag]}, raw)


@cli.group()
def rotation():
    """Rotation numbers on the invariant circle."""


@rotation.command()
@click.option("--spec", "spec_json", required=True,
              help="map spec JSON (a preset or explicit coefficients)")
@click.option("--theta0", type=float, default=0.0, show_default=True)
@click.option("--n", type=int, default=100000, show_default=True)
@click.option("--raw", is_flag=True)
@computation_errors
def measure(spec_json, theta0, n, raw):
    """Birkhoff rotation number of a circle-preserving member."""
    m = map_from_json(json.loads(spec_json))
    rho = rotation_number(m, theta0, n)
    _emit({"rotation_number": rho, "n": n, "theta0": theta0}, raw)


@rotation.command()
@click.option("--a", type=float, required=True)
@click.option("--beta", type=float, required=True)
@click.option("--target", default="golden", show_default=True,
              help="target rotation number, or the word 'golden'")
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--n", type=int, default=1000000, show_default=True)
@click.option("--raw", is_flag=True)
@computation_errors
def tune(a, beta, target, tol, n, raw):
    """Bisect the rotation offset until the rotation number hits target."""
    goal = GOLDEN if target == "golden" else float(target)
    alpha = tune_rotation_number(a, beta, goal, tol=tol, n=n)
    _emit({"alpha": alpha, "target": goal, "tol": tol, "n": n}, raw)


@cli.command("prepole-search")
@click.option("--order", type=int, required=True)
@click.option("--seed", type=COMPLEX, required=True)
@click.option("--raw", is_flag=True)
@computation_errors
def prepole_cmd(order, seed, raw):
    """Newton search for a parameter whose free critical orbit hits the pole."""
    lam = prepole_search(order, seed)
    rec = mtilde_classify(lam)
    _emit({"order": order, "lambda": [lam.real, lam.imag],
           "classification": rec.classification.to_json()}, raw)


@cli.command()
@click.option("--lam", "--lambda", "lam", type=COMPLEX, required=True)
@click.option("--raw", is_flag=True)
@computation_errors
def mu(lam, raw):
    """Moebius view of a parameter and its inverse round trip."""
    fwd = mu_transform(lam)
    _emit({"lambda": [lam.real, lam.imag], "mu": _sphere_json(fwd)}, raw)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8023, show_default=True)
@click.option("--workers", type=int, default=None,
              help="render worker threads (defaults to CYLDYN_THREADS or 1)")
def serve(host, port, workers):
    """Serve the tile/analysis HTTP API (and the explorer UI if present)."""
    import uvicorn

    from .service import build_app

    uvicorn.run(build_app(workers=workers), host=host, port=port,
                log_level="warning")


def main():
    cli(prog_name="cyldyn")


if __name__ == "__main__":
    main()
