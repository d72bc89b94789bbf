"""Batch CLI: parse model specs, dispatch computations, emit reports and plots.

Every command reads a JSON model spec, writes a `<command>.json` report into
the output directory, and (unless --format json) CSV sidecars plus rendered
PNG figures next to them.  Runs are deterministic: identical config and seed
produce byte-identical JSON, independent of --workers (all randomness flows
through counter-based substreams keyed by seed and task label).

Exit codes: 0 success, 2 spec/validation failure, 3 computed but inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import figures
from .bounds import envelope_scan, resolvent_scan
from .dimensions import SpectrumSummary, dimension_report
from .errors import SemistableError
from .models import (
    DensityExampleModel,
    is_gaussian_full,
    model_from_dict,
)
from .output import model_hash, write_csv, write_json
from .probes import (
    INCONCLUSIVE,
    example36_suite,
    graph_dim_index,
    packing_via_W,
    range_dim_index,
    recurrence_integral,
)
from .simulate import (
    GAUSSIAN_SUBSTITUTE,
    box_dim_graph,
    box_dim_range,
    empirical_char_check,
    sample_path,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class RunConfig:
    command: str
    model_path: str | None
    output_dir: str
    seed: int
    workers: int
    epsilon: float
    r_min: float | None
    r_max: float | None
    r_points: int | None
    samples: int | None
    fmt: str
    no_timestamp: bool
    q_min: float
    q_max: float
    q_points: int
    alpha: float | None
    beta: float | None
    steps: int
    delta: float
    t_max: float
    paths: int
    policy: str


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="semistable-lab",
        description="Exponent scans, dimension formulas, and numerical probes "
        "for discretely scale-invariant models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", dest="model_path", help="model spec JSON path")
    common.add_argument("--out", dest="output_dir", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument(
        "--workers",
        type=int,
        default=int(os.environ.get("SEMISTABLE_LAB_WORKERS", "1")),
    )
    common.add_argument("--epsilon", type=float, default=0.2)
    common.add_argument("--r-min", type=float, default=None)
    common.add_argument("--r-max", type=float, default=None)
    common.add_argument("--r-points", type=int, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "both"], default="both")
    common.add_argument("--no-timestamp", action="store_true")
    common.add_argument("--q-min", type=float, default=1e-6)
    common.add_argument("--q-max", type=float, default=1e-1)
    common.add_argument("--q-points", type=int, default=11)
    common.add_argument("--alpha", type=float, default=None)
    common.add_argument("--beta", type=float, default=None)
    common.add_argument("--steps", type=int, default=100_000)
    common.add_argument("--delta", type=float, default=1e-3)
    common.add_argument("--t-max", type=float, default=1.0)
    common.add_argument("--paths", type=int, default=0)
    common.add_argument("--policy", default=GAUSSIAN_SUBSTITUTE)

    for name, helptext in [
        ("decompose", "spectral decomposition of the model exponent"),
        ("validate", "fullness/integrability/strictness diagnostics"),
        ("psi", "tabulate the exponent on a radial grid"),
        ("bounds", "envelope and resolvent scans"),
        ("dims", "closed-form dimension report"),
        ("probe-range", "range dimension from shell decay"),
        ("probe-graph", "graph dimension from shell decay"),
        ("probe-packing", "packing dimension from the profile W(r)"),
        ("probe-recurrence", "recurrence verdict from small-ball integrals"),
        ("example36", "two-regime density suite (needs --alpha/--beta)"),
        ("simulate", "sample a path (optionally check the char. function)"),
        ("boxdim", "box-counting dimensions of a simulated path"),
        ("report", "full bundle: everything above in one JSON"),
    ]:
        sub.add_parser(name, parents=[common], help=helptext)
    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        model_path=args.model_path,
        output_dir=args.output_dir,
        seed=args.seed,
        workers=max(1, args.workers),
        epsilon=args.epsilon,
        r_min=args.r_min,
        r_max=args.r_max,
        r_points=args.r_points,
        samples=args.samples,
        fmt=args.fmt,
        no_timestamp=args.no_timestamp,
        q_min=args.q_min,
        q_max=args.q_max,
        q_points=args.q_points,
        alpha=args.alpha,
        beta=args.beta,
        steps=args.steps,
        delta=args.delta,
        t_max=args.t_max,
        paths=args.paths,
        policy=args.policy,
    )


def load_model_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SemistableError(f"model spec not found: {path}")
    except json.JSONDecodeError as exc:
        raise SemistableError(
            f"model spec {path} is not valid JSON (line {exc.lineno}, col {exc.colno}): "
            f"{exc.msg}"
        )


class _Emitter:
    """Collects artifacts for one command and writes them consistently."""

    def __init__(self, config: RunConfig, model_dict=None):
        self.config = config
        self.out = Path(config.output_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.payload = {
            "command": config.command,
            "seed": config.seed,
            "format": config.fmt,
        }
        if model_dict is not None:
            self.payload["model"] = model_dict
            self.payload["model_hash"] = model_hash(model_dict)
        self.want_sidecars = config.fmt in ("csv", "both")
        self.want_json = config.fmt in ("json", "both")

    def add(self, key, value):
        self.payload[key] = value

    def csv(self, name, header, rows):
        if self.want_sidecars:
            write_csv(header, rows, self.out / f"{name}.csv")

    def figure(self, render, name, *args):
        if self.want_sidecars:
            render(*args, self.out / f"{name}.png")

    def finish(self):
        write_json(
            self.payload,
            self.out / f"{self.config.command}.json",
            no_timestamp=self.config.no_timestamp,
        )
        return self.out / f"{self.config.command}.json"


def _require_model(config) -> tuple:
    if not config.model_path:
        raise SemistableError(f"command {config.command!r} requires --model")
    spec = load_model_spec(config.model_path)
    model = model_from_dict(spec)
    return model, spec


def _gate_full(model):
    diag = model.validate()
    if not diag.full:
        raise SemistableError(
            "model is not full (supported on a proper subspace); refusing to proceed: "
            + "; ".join(diag.messages)
        )
    return diag


def _probe_r_grid(config, default=(10.0, 1e5, 40)):
    lo = config.r_min if config.r_min is not None else default[0]
    hi = config.r_max if config.r_max is not None else default[1]
    n = config.r_points if config.r_points is not None else default[2]
    return np.logspace(np.log10(lo), np.log10(hi), int(n))


def _q_list(config):
    return np.logspace(
        np.log10(config.q_max), np.log10(config.q_min), int(config.q_points)
    )


# -- probe task dispatch (top-level so it can cross process boundaries) -------------


def _probe_task(task):
    kind, model, kwargs = task
    if kind == "range":
        return kind, range_dim_index(model, **kwargs)
    if kind == "graph":
        return kind, graph_dim_index(model, **kwargs)
    if kind == "packing":
        return kind, packing_via_W(model, **kwargs)
    if kind == "recurrence":
        return kind, recurrence_integral(model, **kwargs)
    raise ValueError(kind)


def _run_probes(tasks, workers):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_probe_task, tasks))
    else:
        results = [_probe_task(t) for t in tasks]
    return dict(results)


# -- command implementations ----------------------------------------------------------


def _cmd_decompose(config):
    model, spec = _require_model(config)
    if model.decomposition is None:
        raise SemistableError("model has no exponent to decompose")
    em = _Emitter(config, spec)
    em.add("decomposition", model.decomposition.to_dict())
    em.add("basis_orthogonal", model.decomposition.basis_orthogonal)
    em.finish()
    return EXIT_OK


def _cmd_validate(config):
    model, spec = _require_model(config)
    diag = model.validate()
    em = _Emitter(config, spec)
    em.add("diagnostics", diag.to_dict())
    em.finish()
    return EXIT_OK if diag.full else EXIT_VALIDATION


def _cmd_psi(config):
    model, spec = _require_model(config)
    _gate_full(model)
    d = model.dim
    r = _probe_r_grid(config, default=(0.1, 100.0, 41))
    dirs = {}
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        dirs[f"axis{i + 1}"] = e
    if d > 1:
        dirs["diagonal"] = np.ones(d) / np.sqrt(d)
    rows = []
    re_profiles = {}
    for name, u in dirs.items():
        vals = model.psi(np.outer(r, u))
        re_profiles[name] = np.real(vals)
        for radius, v in zip(r, vals):
            rows.append([name, float(radius), float(v.real), float(v.imag)])
    em = _Emitter(config, spec)
    em.add("r_grid", [float(v) for v in r])
    em.add(
        "directions",
        {name: [float(v) for v in u] for name, u in dirs.items()},
    )
    em.add(
        "psi_re",
        {name: [float(v) for v in prof] for name, prof in re_profiles.items()},
    )
    em.csv("psi_table", ["direction", "r", "re_psi", "im_psi"], rows)
    em.figure(figures.psi_figure, "psi_profile", r, re_profiles)
    em.finish()
    return EXIT_OK


def _cmd_bounds(config):
    model, spec = _require_model(config)
    _gate_full(model)
    r_grid = _probe_r_grid(config, default=(10.0, 1e6, 40))
    samples = config.samples or 512
    env = envelope_scan(
        model,
        epsilon=config.epsilon,
        r_grid=r_grid,
        sphere_samples=samples,
        seed=config.seed,
    )
    res = resolvent_scan(
        model,
        epsilon=config.epsilon,
        r_grid=r_grid,
        sphere_samples=samples,
        seed=config.seed,
    )
    em = _Emitter(config, spec)
    em.add("envelope", env.to_dict())
    em.add("resolvent", res.to_dict())
    em.csv("envelope", *env.rows())
    em.csv("resolvent", *res.rows())
    em.figure(figures.envelope_figure, "envelope", env)
    em.figure(figures.resolvent_figure, "resolvent", res)
    em.finish()
    return EXIT_OK


def _cmd_dims(config):
    model, spec = _require_model(config)
    _gate_full(model)
    summary = model.spectrum_summary()
    if summary is None:
        raise SemistableError(
            "model has no spectral decomposition; dimension formulas need one"
        )
    report = dimension_report(
        summary,
        symmetric=getattr(model, "symmetric", False),
        is_gaussian_full=is_gaussian_full(model),
    )
    em = _Emitter(config, spec)
    em.add("spectrum", summary.to_dict())
    em.add("dimensions", report.to_dict())
    em.finish()
    return EXIT_OK


def _cmd_probe(config, kind):
    model, spec = _require_model(config)
    _gate_full(model)
    em = _Emitter(config, spec)
    status = EXIT_OK
    if kind == "range":
        est = range_dim_index(
            model,
            r_grid=_probe_r_grid(config),
            sphere_samples=config.samples or 4096,
            seed=config.seed,
        )
        em.add("probe", est.to_dict())
        em.csv("probe_range", *est.rows())
        em.figure(figures.probe_figure, "probe_range", est)
    elif kind == "graph":
        est = graph_dim_index(
            model,
            r_grid=_probe_r_grid(config),
            sphere_samples=config.samples or 4096,
            seed=config.seed,
        )
        em.add("probe", est.to_dict())
        em.csv("probe_graph", *est.rows())
        em.figure(figures.probe_figure, "probe_graph", est)
    elif kind == "packing":
        r_grid = _probe_r_grid(config, default=(1e-4, 1e-1, 20))
        est = packing_via_W(
            model,
            r_grid=r_grid,
            mc_samples=config.samples or 100_000,
            seed=config.seed,
        )
        em.add("probe", est.to_dict())
        em.csv("probe_packing", *est.rows())
        em.figure(figures.probe_figure, "probe_packing", est)
    else:
        probe = recurrence_integral(
            model,
            q_list=_q_list(config),
            cube_resolution=config.samples or 256,
            seed=config.seed,
        )
        em.add("probe", probe.to_dict())
        em.csv("probe_recurrence", *probe.rows())
        em.figure(figures.recurrence_figure, "probe_recurrence", probe)
        if probe.verdict == INCONCLUSIVE:
            status = EXIT_INCONCLUSIVE
    em.finish()
    return status


def _cmd_example36(config):
    if config.alpha is None or config.beta is None:
        raise SemistableError("example36 requires --alpha and --beta")
    report = example36_suite(
        config.alpha,
        config.beta,
        q_list=_q_list(config),
        seed=config.seed,
    )
    model_dict = {"kind": "density_example", "alpha": config.alpha, "beta": config.beta}
    em = _Emitter(config, model_dict)
    em.add("example36", report.to_dict())
    em.csv("example36_range", *report.range_probe.rows())
    em.csv("example36_recurrence", *report.recurrence.rows())
    em.figure(figures.probe_figure, "example36_range", report.range_probe)
    em.figure(figures.recurrence_figure, "example36_recurrence", report.recurrence)
    em.finish()
    return (
        EXIT_INCONCLUSIVE if report.recurrence.verdict == INCONCLUSIVE else EXIT_OK
    )


def _cmd_simulate(config):
    model, spec = _require_model(config)
    _gate_full(model)
    path = sample_path(
        model,
        T=config.t_max,
        n_steps=config.steps,
        delta=config.delta,
        policy=config.policy,
        seed=config.seed,
    )
    em = _Emitter(config, spec)
    em.add("simulation", {
        "n_steps": config.steps,
        "t_max": config.t_max,
        "delta": config.delta,
        "policy": config.policy,
        **path.meta,
    })
    if config.paths > 0:
        freqs = [0.5, 1.0, 2.0] if model.dim == 1 else [
            [0.5] + [0.0] * (model.dim - 1),
            [0.0] * (model.dim - 1) + [1.0],
        ]
        ecf = empirical_char_check(
            model,
            freqs,
            n_paths=config.paths,
            delta=config.delta,
            policy=config.policy,
            seed=config.seed,
        )
        em.add("char_function_check", ecf)
    em.csv("path", *path.rows())
    em.figure(figures.path_figure, "path", path)
    em.finish()
    return EXIT_OK


def _cmd_boxdim(config):
    model, spec = _require_model(config)
    _gate_full(model)
    path = sample_path(
        model,
        T=config.t_max,
        n_steps=config.steps,
        delta=config.delta,
        policy=config.policy,
        seed=config.seed,
    )
    rng_est = box_dim_range(path)
    gph_est = box_dim_graph(path)
    em = _Emitter(config, spec)
    em.add("range_box", rng_est.to_dict())
    em.add("graph_box", gph_est.to_dict())
    em.csv("boxdim_range", *rng_est.rows())
    em.csv("boxdim_graph", *gph_est.rows())
    em.figure(figures.probe_figure, "boxdim_range", rng_est)
    em.figure(figures.probe_figure, "boxdim_graph", gph_est)
    em.finish()
    return EXIT_OK


def _cmd_report(config):
    model, spec = _require_model(config)
    diag = model.validate()
    em = _Emitter(config, spec)
    em.add("diagnostics", diag.to_dict())
    if not diag.full:
        em.finish()
        print("model is not full; report aborted", file=sys.stderr)
        return EXIT_VALIDATION

    summary = model.spectrum_summary()
    closed = None
    if summary is not None:
        em.add("decomposition", model.decomposition.to_dict())
        closed = dimension_report(
            summary,
            symmetric=getattr(model, "symmetric", False),
            is_gaussian_full=is_gaussian_full(model),
        )
        em.add("spectrum", summary.to_dict())
        em.add("dimensions", closed.to_dict())

        r_grid = _probe_r_grid(config, default=(10.0, 1e5, 28))
        samples = config.samples or 512
        env = envelope_scan(
            model, epsilon=config.epsilon, r_grid=r_grid,
            sphere_samples=samples, seed=config.seed,
        )
        res = resolvent_scan(
            model, epsilon=config.epsilon, r_grid=r_grid,
            sphere_samples=samples, seed=config.seed,
        )
        em.add("envelope", env.to_dict())
        em.add("resolvent", res.to_dict())
        em.csv("report_envelope", *env.rows())
        em.csv("report_resolvent", *res.rows())
        em.figure(figures.envelope_figure, "report_envelope", env)
        em.figure(figures.resolvent_figure, "report_resolvent", res)

    probe_grid = _probe_r_grid(config, default=(10.0, 1e5, 28))
    probe_samples = config.samples or 2048
    packing_grid = np.logspace(-4, -1, 16)
    tasks = [
        ("range", model, {"r_grid": probe_grid, "sphere_samples": probe_samples, "seed": config.seed}),
        ("graph", model, {"r_grid": probe_grid, "sphere_samples": probe_samples, "seed": config.seed}),
        ("packing", model, {"r_grid": packing_grid, "mc_samples": 20_000, "seed": config.seed}),
        ("recurrence", model, {"q_list": _q_list(config), "cube_resolution": 128, "seed": config.seed}),
    ]
    results = _run_probes(tasks, config.workers)
    probes_payload = {}
    for kind in ("range", "graph", "packing"):
        est = results[kind]
        probes_payload[kind] = est.to_dict()
        em.csv(f"report_probe_{kind}", *est.rows())
        em.figure(figures.probe_figure, f"report_probe_{kind}", est)
    rec = results["recurrence"]
    probes_payload["recurrence"] = rec.to_dict()
    em.csv("report_probe_recurrence", *rec.rows())
    em.figure(figures.recurrence_figure, "report_probe_recurrence", rec)
    em.add("probes", probes_payload)

    status = EXIT_OK
    if closed is not None:
        agreement = {
            "range": {
                "closed_form": closed.range_hausdorff_unit,
                "probe": results["range"].value,
                "within_0.1": abs(closed.range_hausdorff_unit - results["range"].value) <= 0.1,
            },
            "graph": {
                "closed_form": closed.graph_hausdorff_unit,
                "probe": results["graph"].value,
                "within_0.1": abs(closed.graph_hausdorff_unit - results["graph"].value) <= 0.1,
            },
            "packing": {
                "closed_form": closed.range_packing_unit,
                "probe": results["packing"].value,
                "within_0.1": abs(closed.range_packing_unit - results["packing"].value) <= 0.1,
            },
            "recurrence": {
                "closed_form": closed.recurrence,
                "probe": rec.verdict,
                "agrees": rec.verdict == closed.recurrence,
            },
        }
        em.add("agreement", agreement)

    if rec.verdict == INCONCLUSIVE:
        status = EXIT_INCONCLUSIVE

    if isinstance(model, DensityExampleModel):
        em.finish()
        return status

    # light simulation closure: path, box dimensions, characteristic function
    sim_steps = min(config.steps, 200_000)
    path = sample_path(
        model, T=config.t_max, n_steps=sim_steps,
        delta=config.delta, policy=config.policy, seed=config.seed,
    )
    rng_est = box_dim_range(path)
    gph_est = box_dim_graph(path)
    em.add("simulation", {
        "n_steps": sim_steps,
        "delta": config.delta,
        "policy": config.policy,
        **path.meta,
        "range_box": rng_est.to_dict(),
        "graph_box": gph_est.to_dict(),
    })
    em.csv("report_boxdim_range", *rng_est.rows())
    em.csv("report_boxdim_graph", *gph_est.rows())
    em.figure(figures.path_figure, "report_path", path)
    em.figure(figures.probe_figure, "report_boxdim_graph", gph_est)
    em.finish()
    return status


_COMMANDS = {
    "decompose": _cmd_decompose,
    "validate": _cmd_validate,
    "psi": _cmd_psi,
    "bounds": _cmd_bounds,
    "dims": _cmd_dims,
    "probe-range": lambda cfg: _cmd_probe(cfg, "range"),
    "probe-graph": lambda cfg: _cmd_probe(cfg, "graph"),
    "probe-packing": lambda cfg: _cmd_probe(cfg, "packing"),
    "probe-recurrence": lambda cfg: _cmd_probe(cfg, "recurrence"),
    "example36": _cmd_example36,
    "simulate": _cmd_simulate,
    "boxdim": _cmd_boxdim,
    "report": _cmd_report,
}


def run(config: RunConfig) -> int:
    handler = _COMMANDS.get(config.command)
    if handler is None:
        print(f"unknown command {config.command!r}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return handler(config)
    except SemistableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
