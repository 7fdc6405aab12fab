"""Command-line entry points.

Subcommands: generate, run, baseline, sweep, pca, serve. Config files are
JSON mirroring RunConfig; flags override file values. Every report path
writes delimited tables plus a rendered PNG figure, and every output
embeds the config snapshot and seed. Exit codes: 0 success, 1 runtime
failure, 2 usage or config error.
"""

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import plots
from .baselines import even_odd_learning, passive_learning, unwise_active
from .config import RunConfig, load_config
from .ensemble import save_snapshot
from .evaluation import (accuracy, annotation_effort, decision_log_lines,
                         median_curve, sweep_batch_size, sweep_threshold)
from .fusion import ConfigError
from .loop import ScriptedOracle, run
from .service import RunService
from .streamio import (StreamFileError, load_projection, load_stream_file,
                       pca_apply_frames, pca_fit_frames, save_projection,
                       save_stream_file)
from .streams import assemble_batches
from .synthetic import build_scenario, scenario_spec

DEFAULT_Q = 85     # PCA target dimension for high-dimensional real features


def _build_config(args) -> RunConfig:
    overrides = {key: getattr(args, key, None)
                 for key in ("batch_size", "rule", "measure", "threshold",
                             "classifier", "decay_base", "seed", "horizon")}
    if getattr(args, "config", None):
        return load_config(args.config, overrides)
    clean = {k: v for k, v in overrides.items() if v is not None}
    return RunConfig(**clean)


def _load_dataset(path, batch_size):
    header, frames = load_stream_file(path)
    return assemble_batches(frames, batch_size), header, frames


def _write_report(outdir: Path, report, figure=True):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(report.to_json())
    header = json.dumps({"type": "header", "config": report.config,
                         "seed": report.seed}, sort_keys=True)
    (outdir / "decisions.jsonl").write_text(
        header + "\n" + decision_log_lines(report))
    if figure:
        plots.save_run_timeline(report, outdir / "run.png")
    print(f"accuracy={accuracy(report):.4f} effort={annotation_effort(report):.4f} "
          f"report={outdir / 'report.json'}")


def cmd_generate(args) -> int:
    frames = build_scenario(args.scenario, seed=args.seed, length=args.length)
    save_stream_file(args.out, frames)
    spec = scenario_spec(args.scenario, args.length)
    print(f"scenario {spec.scenario_id}: {len(spec.streams)} streams, "
          f"{len(frames)} frames -> {args.out}")
    if args.plot:
        dataset = assemble_batches(frames, 250)
        plots.save_scatter_snapshot(dataset, Path(args.out).with_suffix(".png"))
    return 0


def cmd_run(args) -> int:
    config = _build_config(args)
    dataset, header, _ = _load_dataset(args.data, config.batch_size)
    if args.oracle == "ground-truth":
        if not header.ground_truth:
            raise ConfigError("ground-truth oracle requires a labeled stream file")
        oracle = ScriptedOracle()
    else:
        raise ConfigError("interactive oracle runs through `driftlab serve`")
    report = run(dataset, oracle, config)
    outdir = Path(args.out)
    _write_report(outdir, report)
    if args.snapshot:
        save_snapshot(report.final_model, outdir / "model.json")
    return 0


def cmd_baseline(args) -> int:
    config = _build_config(args)
    dataset, _, _ = _load_dataset(args.data, config.batch_size)
    strategy = {"passive": passive_learning, "evenodd": even_odd_learning,
                "unwise": unwise_active}[args.strategy]
    if args.strategy == "unwise" and args.initiation_slot:
        report = strategy(dataset, config, initiation_slot=args.initiation_slot)
    else:
        report = strategy(dataset, config)
    _write_report(Path(args.out), report)
    return 0


def cmd_sweep_threshold(args) -> int:
    config = _build_config(args)
    dataset, _, _ = _load_dataset(args.data, config.batch_size)
    thresholds = [float(t) for t in args.grid.split(",")]
    seeds = [config.seed + i for i in range(args.seeds)]
    points = sweep_threshold(dataset, config, thresholds, seeds)
    curve = median_curve(points)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(outdir / "sweep_points.csv",
               ["threshold", "seed", "effort", "accuracy", "queries"], points)
    _write_csv(outdir / "sweep_curve.csv",
               ["threshold", "effort", "accuracy"], curve)
    _write_plot_data(outdir / "plotdata.csv", {_series_label(config): curve})
    plots.save_effort_accuracy_curve({_series_label(config): curve},
                                     outdir / "sweep.png")
    (outdir / "sweep_meta.json").write_text(json.dumps(
        {"config": config.snapshot(), "thresholds": thresholds,
         "seeds": list(seeds)}, sort_keys=True, indent=2))
    print(f"{len(points)} runs -> {outdir}")
    return 0


def cmd_sweep_batchsize(args) -> int:
    config = _build_config(args)
    _, header, frames = _load_dataset(args.data, config.batch_size)
    longest = max(_stream_lengths(frames).values())
    seeds = [config.seed + i for i in range(args.seeds)]
    result = sweep_batch_size(frames, longest, config, seeds, n_points=args.points)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(outdir / "batchsize.csv",
               ["batch_size", "accuracy", "effort", "score"], result["rows"])
    plots.save_batch_size_curve(result["rows"], outdir / "batchsize.png")
    (outdir / "batchsize_meta.json").write_text(json.dumps(
        {"config": config.snapshot(), "best_batch_size": result["best_batch_size"],
         "seeds": list(seeds)}, sort_keys=True, indent=2))
    print(f"best batch size {result['best_batch_size']} -> {outdir}")
    return 0


def cmd_pca(args) -> int:
    header, frames = load_stream_file(args.data)
    if args.action == "fit":
        q = args.q or min(DEFAULT_Q, header.dim)
        projection = pca_fit_frames(frames, q)
        save_projection(args.model, projection)
        print(f"fit q={q} explained={projection.explained_variance_ratio.sum():.4f} "
              f"-> {args.model}")
        return 0
    if not args.out:
        raise ConfigError("pca apply requires --out")
    projection = load_projection(args.model)
    save_stream_file(args.out, pca_apply_frames(projection, frames))
    print(f"projected {len(frames)} frames -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    config = _build_config(args)
    dataset, header, _ = _load_dataset(args.data, config.batch_size)
    port = args.port or int(os.environ.get("DRIFTLAB_PORT", "8765"))
    static = args.static or _default_static()
    service = RunService(dataset, config, static_dir=static)
    print(f"serving on http://127.0.0.1:{port} (api version 1)")
    try:
        service.serve_forever(port)
    except KeyboardInterrupt:
        pass
    return 0


def _default_static():
    for candidate in (Path(__file__).resolve().parents[2] / "frontend" / "dist",
                      Path.cwd() / "frontend" / "dist"):
        if candidate.is_dir():
            return candidate
    return None


def _stream_lengths(frames) -> dict:
    lengths: dict = {}
    for fr in frames:
        lengths[fr.stream_id] = lengths.get(fr.stream_id, 0) + 1
    return lengths


def _series_label(config: RunConfig) -> str:
    return f"{config.classifier}+{config.rule}+{config.measure}"


def _write_csv(path, fields, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


def _write_plot_data(path, curves) -> None:
    """x=effort, y=accuracy, series=configuration; consumable anywhere."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "effort", "accuracy"])
        for label, points in curves.items():
            for p in sorted(points, key=lambda q: q["effort"]):
                writer.writerow([label, p["effort"], p["accuracy"]])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftlab",
        description="Active-learning ensemble classification of drifting parallel streams")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic scenario stream file")
    p.add_argument("--scenario", required=True, choices=["I", "II", "III", "IV"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--length", type=int, help="frames per stream override")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true", help="also render a scatter PNG")
    p.set_defaults(func=cmd_generate)

    def add_run_options(p, need_seed=True):
        p.add_argument("--data", required=True, help="stream file")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--batch-size", dest="batch_size", type=int)
        p.add_argument("--rule", choices=["product", "sum"])
        p.add_argument("--measure", choices=["most_confident", "margin", "ratio",
                                             "modified_mc"])
        p.add_argument("--threshold", type=float)
        p.add_argument("--classifier", choices=["gaussian_nb", "gmm", "logistic"])
        p.add_argument("--decay-base", dest="decay_base", type=float)
        p.add_argument("--horizon", type=int)
        p.add_argument("--seed", type=int, required=need_seed)

    p = sub.add_parser("run", help="full run against a stream file")
    add_run_options(p)
    p.add_argument("--oracle", choices=["ground-truth", "interactive"],
                   default="ground-truth")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--snapshot", action="store_true", help="save the final model")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("baseline", help="comparison strategies")
    p.add_argument("--strategy", required=True, choices=["passive", "evenodd", "unwise"])
    add_run_options(p, need_seed=False)
    p.add_argument("--initiation-slot", dest="initiation_slot", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("sweep", help="parameter sweeps")
    sweep_sub = p.add_subparsers(dest="sweep_kind", required=True)

    q = sweep_sub.add_parser("threshold", help="accuracy-effort curve over thresholds")
    add_run_options(q)
    q.add_argument("--grid", default="0.5,0.7,0.9,0.99,0.999,1.0",
                   help="comma-separated threshold values")
    q.add_argument("--seeds", type=int, default=3, help="number of seeds")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sweep_threshold)

    q = sweep_sub.add_parser("batchsize", help="accuracy per batch size")
    add_run_options(q)
    q.add_argument("--points", type=int, default=50)
    q.add_argument("--seeds", type=int, default=3)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sweep_batchsize)

    p = sub.add_parser("pca", help="fit or apply a PCA projection")
    p.add_argument("action", choices=["fit", "apply"])
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True, help="projection JSON path")
    p.add_argument("--q", type=int, help=f"components (default {DEFAULT_Q} capped to dim)")
    p.add_argument("--out", help="projected stream file (apply)")
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("serve", help="interactive run behind the HTTP oracle")
    add_run_options(p)
    p.add_argument("--port", type=int, help="or DRIFTLAB_PORT env var")
    p.add_argument("--static", help="directory of console assets to serve")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, StreamFileError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
