"""Batch front-end: spectrum, weyl-curve, symbol-check, frame-check.

Configuration is plain-text key=value (one per line, '#' comments); command
line flags override file values.  Every output embeds the resolved config and
library version as '#'-prefixed header lines.  Exit codes: 0 success, 1
usage/config error, 2 numerical certification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .domains import rectangle_domain
from .eigen import CertificationError, dense_spectrum, save_spectrum, spectrum_below
from .frames import FrameError, analytic_symbol, build_frame, forward
from .operators import assemble_euclidean, assemble_hyperbolic
from .weyl import (
    build_curve,
    euclidean_leading,
    exact_spectrum_box,
    exact_spectrum_interval,
    fit_remainder_exponent,
    hyperbolic_leading,
    save_curve,
)
from .windows import make_bump_window, make_cosine_window, scale


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    kind: str = "euclidean"
    dim: int = 1
    box: tuple = ((0.0, math.pi),)
    h: float = math.pi / 200.0
    source: str = "exact"  # exact | discrete
    lam_min: float = 100.0
    lam_max: float = 10000.0
    lam_count: int = 40
    lam_scale: str = "log"  # log | linear
    eps_alpha: float = 1.0 / 3.0
    window: str = "cosine"
    eps: float = 0.2
    frame_n: int = 128
    n_vectors: int = 100
    out: str | None = None
    seed: int = 0
    threads: int = 1

    def header_lines(self):
        lines = [f"weylcs_version={__version__}"]
        for f in fields(self):
            if f.name == "out":
                # self-evident from the file location; keeping it would break
                # byte-determinism across output paths
                continue
            v = getattr(self, f.name)
            if f.name == "box":
                v = ";".join("%.17g,%.17g" % (a, b) for a, b in v)
            lines.append(f"{f.name}={v}")
        return lines


def _parse_box(text):
    try:
        return tuple(tuple(float(u) for u in part.split(","))
                     for part in text.split(";"))
    except ValueError as exc:
        raise ConfigError(f"bad box spec {text!r}") from exc


def _apply_kv(cfg, key, value):
    if not hasattr(cfg, key):
        raise ConfigError(f"unknown config key {key!r}")
    cur = getattr(cfg, key)
    if key == "box":
        setattr(cfg, key, _parse_box(value))
    elif isinstance(cur, bool):
        setattr(cfg, key, value.lower() in ("1", "true", "yes"))
    elif isinstance(cur, int):
        setattr(cfg, key, int(value))
    elif isinstance(cur, float):
        setattr(cfg, key, float(value))
    else:
        setattr(cfg, key, value)


def load_config(path) -> ExperimentConfig:
    cfg = ExperimentConfig()
    try:
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"bad config line {line!r}")
                key, value = (t.strip() for t in line.split("=", 1))
                _apply_kv(cfg, key, value)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return cfg


def _validate(cfg):
    if cfg.kind not in ("euclidean", "hyperbolic"):
        raise ConfigError(f"unknown kind {cfg.kind!r}")
    if cfg.window not in ("cosine", "bump"):
        raise ConfigError(f"unknown window {cfg.window!r}")
    if cfg.dim < 1 or cfg.h <= 0 or cfg.eps <= 0 or cfg.lam_count < 1:
        raise ConfigError("numeric config fields must be positive")
    if len(cfg.box) != cfg.dim:
        raise ConfigError(f"box has {len(cfg.box)} axes, dim is {cfg.dim}")
    for a, b in cfg.box:
        if not b > a:
            raise ConfigError("degenerate box")
    if cfg.h >= min(b - a for a, b in cfg.box):
        raise ConfigError("h must be smaller than the shortest box side")
    if cfg.source == "discrete" and cfg.lam_max > 1.0 / cfg.h ** 2:
        print(f"warning: lambda_max {cfg.lam_max:g} exceeds the discretization "
              f"validity bound 1/h^2 = {1.0 / cfg.h ** 2:g}", file=sys.stderr)


def _window(cfg):
    make = make_cosine_window if cfg.window == "cosine" else make_bump_window
    return make(cfg.dim)


def _lambda_grid(cfg):
    if cfg.lam_scale == "log":
        return np.geomspace(cfg.lam_min, cfg.lam_max, cfg.lam_count)
    if cfg.lam_scale == "linear":
        return np.linspace(cfg.lam_min, cfg.lam_max, cfg.lam_count)
    raise ConfigError(f"unknown lam_scale {cfg.lam_scale!r}")


def _operator(cfg):
    dom = rectangle_domain(cfg.box, cfg.h)
    if cfg.kind == "euclidean":
        return dom, assemble_euclidean(dom)
    return dom, assemble_hyperbolic(dom)


def cmd_spectrum(cfg) -> int:
    _validate(cfg)
    if cfg.out is None:
        raise ConfigError("spectrum requires an output path")
    dom, op = _operator(cfg)
    if cfg.lam_max <= 0:
        spec = spectrum_below(op, 0.0)
    else:
        spec = spectrum_below(op, cfg.lam_max)
    save_spectrum(spec, cfg.out, kind=cfg.kind, h=cfg.h, extra=cfg.header_lines())
    return 0


def cmd_weyl_curve(cfg) -> int:
    _validate(cfg)
    if cfg.out is None:
        raise ConfigError("weyl-curve requires an output path")
    lambdas = _lambda_grid(cfg)
    window = _window(cfg)
    if cfg.source == "exact":
        if cfg.kind == "hyperbolic" and cfg.dim > 1:
            raise ConfigError("exact spectra are euclidean-only above one dimension")
        if cfg.dim == 1:
            spec = exact_spectrum_interval(cfg.box[0][1] - cfg.box[0][0], cfg.lam_max)
        else:
            spec = exact_spectrum_box([b - a for a, b in cfg.box], cfg.lam_max)
        dom = rectangle_domain(cfg.box, cfg.h)
    elif cfg.source == "discrete":
        dom, op = _operator(cfg)
        spec = dense_spectrum(op)
    else:
        raise ConfigError(f"unknown source {cfg.source!r}")

    if cfg.kind == "hyperbolic":
        leading_fn = lambda lam: hyperbolic_leading(dom, lam)
    else:
        vol = math.prod(b - a for a, b in cfg.box) if cfg.source == "exact" \
            else math.prod(b - a for a, b in dom.exact_box)
        leading_fn = lambda lam: euclidean_leading(vol, cfg.dim, lam)

    curve = build_curve(spec, lambdas, leading_fn, window=window,
                        eps_alpha=cfg.eps_alpha,
                        meta={"kind": cfg.kind, "source": cfg.source})
    try:
        fit = fit_remainder_exponent(curve)
        summary = ("remainder_fit slope=%.17g intercept=%.17g residual=%.17g"
                   % (fit.slope, fit.intercept, fit.residual))
    except ValueError:
        summary = "remainder_fit unavailable (all remainders zero)"
    save_curve(curve, cfg.out, comments=cfg.header_lines() + [summary])
    print(summary)
    return 0


def _symbol_report(cfg, h_values):
    window = scale(_window(cfg), cfg.eps)
    rng = np.random.default_rng(cfg.seed)
    span = [b - a for a, b in cfg.box]
    points = []
    for _ in range(5):
        xi = rng.uniform(-3.0, 3.0, size=cfg.dim)
        y = np.array([a + (0.35 + 0.3 * rng.random()) * s
                      for (a, _), s in zip(cfg.box, span)])
        points.append((xi, y))
    lines = []
    errors = {}
    for h in h_values:
        sub = ExperimentConfig(**{**cfg.__dict__, "h": h})
        dom, op = _operator(sub)
        errs = []
        for xi, y in points:
            exact = analytic_symbol(cfg.kind, window, xi, y)
            got = _restricted_symbol(op, window, xi, y)
            errs.append(abs(got - exact))
        errors[h] = errs
        lines.append("h=%.17g max_symbol_error=%.17g" % (h, max(errs)))
    ratios = [e1 / e2 if e2 > 0 else math.inf
              for e1, e2 in zip(errors[h_values[0]], errors[h_values[1]])]
    lines.append("error_ratios=" + " ".join("%.6g" % r for r in ratios))
    return lines, ratios


def _restricted_symbol(op, window, xi, y):
    coords = op.node_coords()
    e = np.exp(1j * coords @ np.asarray(xi)) * window(coords - np.asarray(y))
    nrm = np.vdot(e, e).real
    return float(np.vdot(e, op.matrix @ e).real / nrm)


def cmd_symbol_check(cfg) -> int:
    _validate(cfg)
    if cfg.out is None:
        raise ConfigError("symbol-check requires an output path")
    lines, _ = _symbol_report(cfg, [cfg.h, cfg.h / 2.0])
    with open(cfg.out, "w") as fh:
        for line in cfg.header_lines():
            fh.write(f"# {line}\n")
        for line in lines:
            fh.write(line + "\n")
    return 0


def cmd_frame_check(cfg) -> int:
    _validate(cfg)
    if cfg.out is None:
        raise ConfigError("frame-check requires an output path")
    window = scale(_window(cfg), cfg.eps)
    L = cfg.frame_n * cfg.h
    frame = build_frame(((0.0, L),) * cfg.dim, cfg.h, window)
    rng = np.random.default_rng(cfg.seed)
    defect = 0.0
    for _ in range(cfg.n_vectors):
        f = rng.standard_normal(frame.n) + 1j * rng.standard_normal(frame.n)
        nf = frame.grid_norm_sq(f)
        defect = max(defect, abs(forward(frame, f).norm_sq() - nf) / nf)
    from .frames import trace_via_frame

    diag = rng.random(frame.n)
    tr = trace_via_frame(frame, np.diag(diag))
    trace_defect = abs(tr - diag.sum()) / diag.sum()
    lines = [
        "parseval_defect=%.17g" % defect,
        "trace_defect=%.17g" % trace_defect,
    ]
    sym_lines, _ = _symbol_report(cfg, [cfg.h, cfg.h / 2.0])
    with open(cfg.out, "w") as fh:
        for line in cfg.header_lines():
            fh.write(f"# {line}\n")
        for line in lines + sym_lines:
            fh.write(line + "\n")
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "weyl-curve": cmd_weyl_curve,
    "symbol-check": cmd_symbol_check,
    "frame-check": cmd_frame_check,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="weylcs")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable; flags win)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"bad --set value {item!r}")
            key, value = item.split("=", 1)
            _apply_kv(cfg, key.strip(), value.strip())
        if args.out is not None:
            cfg.out = args.out
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CertificationError, FrameError) as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
