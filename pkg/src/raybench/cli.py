"""Command-line entry point: render, animate, bench, metrics.

Exit status: 0 success, 1 usage error, 2 bad input (missing or malformed
scene/model), 3 runtime failure (for example an unwritable output path).
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from pathlib import Path

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    if not (1 <= w <= 65535 and 1 <= h <= 65535):
        raise argparse.ArgumentTypeError("image sides must lie in [1, 65535]")
    return w, h


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return value


def _counts(text: str) -> list[int]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma-separated list of object counts")
    return [_positive(t) for t in parts]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="raybench", description="Whitted ray tracer, timing harness and OO metrics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def render_flags(sp):
        sp.add_argument("--size", type=_size, help="override the camera resolution, e.g. 1024x768")
        sp.add_argument("--max-depth", type=_non_negative, help="override the scene's recursion limit")
        sp.add_argument("--parallel", action=argparse.BooleanOptionalAction, default=True,
                        help="trace rows on several threads (default: on)")
        sp.add_argument("--backend", choices=("numba", "numpy"), help="kernel implementation")

    r = sub.add_parser("render", help="render one frame to a TGA file")
    r.add_argument("scene")
    r.add_argument("output")
    render_flags(r)

    a = sub.add_parser("animate", help="render every step of the scene's paths")
    a.add_argument("scene")
    a.add_argument("output_dir")
    render_flags(a)

    b = sub.add_parser("bench", help="timing experiments (always single-threaded)")
    bsub = b.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    sw = bsub.add_parser("sweep", help="average frame time against object count")
    sw.add_argument("--counts", type=_counts, default=[5, 10, 20, 25, 50, 100, 200, 400])
    sw.add_argument("--frames", type=_positive, default=30, help="frames averaged per count")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--size", type=_size, default=(320, 240))
    sw.add_argument("--backend", choices=("numba", "numpy"))
    sw.add_argument("--out", help="CSV report path (default: stdout)")
    mi = bsub.add_parser("micro", help="set_position dispatch loop")
    mi.add_argument("--spheres", type=_positive, default=1024 * 768)
    mi.add_argument("--repeats", type=_positive, default=500)
    mi.add_argument("--backend", choices=("numba", "numpy"))
    mi.add_argument("--out", help="CSV report path (default: stdout)")
    bk = bsub.add_parser("backends", help="compare the numba and numpy kernels on the same workloads")
    bk.add_argument("--scene", help="scene to render (default: the bundled simple scene)")
    bk.add_argument("--out", help="CSV report path (default: stdout)")

    m = sub.add_parser("metrics", help="OO metrics for a class-model file")
    m.add_argument("model")
    m.add_argument("--csv", action="store_true", help="emit CSV instead of the text table")
    return p


def _load_scene(args):
    from .scene import SceneError, load_scene

    try:
        scene = load_scene(args.scene)
    except OSError as exc:
        raise InputError(f"cannot read scene {args.scene!r}: {exc.strerror or exc}") from None
    except SceneError as exc:
        raise InputError(f"{args.scene}: {exc}") from None
    if args.size:
        try:
            scene.camera = dataclasses.replace(scene.camera, width=args.size[0], height=args.size[1])
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return scene


def _settings(scene, args):
    from .renderer import RenderSettings

    overrides = {} if args.max_depth is None else {"max_depth": args.max_depth}
    return RenderSettings.for_scene(scene, **overrides)


def _emit_rows(header, rows, out=None):
    if out is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)


def cmd_render(args) -> int:
    from .bench import cpu_time_now
    from .renderer import compile_kernels, render_image

    scene = _load_scene(args)
    settings = _settings(scene, args)
    compile_kernels(parallel=args.parallel, backend=args.backend)
    t0 = cpu_time_now()
    image = render_image(scene, settings, parallel=args.parallel, backend=args.backend)
    elapsed = cpu_time_now() - t0
    image.save(args.output)
    _emit_rows(["frame_index", "cpu_millis"], [[0, repr(elapsed)]])
    return EXIT_OK


def cmd_animate(args) -> int:
    from .animation import FRAME_PATTERN, AnimationError, frame_count, iter_frames
    from .bench import FrameTiming, cpu_time_now, write_report
    from .renderer import compile_kernels

    scene = _load_scene(args)
    settings = _settings(scene, args)
    try:
        frame_count(scene)
    except AnimationError as exc:
        raise InputError(f"{args.scene}: {exc}") from None
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    compile_kernels(parallel=args.parallel, backend=args.backend)
    timings = []
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["frame_index", "cpu_millis"])
    for k, image, ms in iter_frames(scene, settings, parallel=args.parallel, backend=args.backend,
                                    clock=cpu_time_now):
        image.save(out / FRAME_PATTERN.format(k))
        timings.append(FrameTiming(k, ms))
        w.writerow([k, repr(ms)])
    write_report(timings, out / "timings.csv", FrameTiming)
    return EXIT_OK


def _write_or_print(results, record_type, out):
    from .bench import report_columns, write_report

    if out:
        write_report(results, out, record_type)
    else:
        cols = report_columns(record_type)
        _emit_rows(cols, [[getattr(r, c) for c in cols] for r in results])


def cmd_bench(args) -> int:
    from . import bench

    if args.bench_command == "sweep":
        w, h = args.size
        points = bench.sweep_objects(args.counts, args.frames, args.seed, width=w, height=h,
                                     backend=args.backend)
        _write_or_print(points, bench.SweepPoint, args.out)
    elif args.bench_command == "micro":
        result = bench.micro_set_position(args.spheres, args.repeats, backend=args.backend)
        _write_or_print([result], bench.MicroResult, args.out)
    else:
        scene = args.scene
        if scene is not None and not Path(scene).is_file():
            raise InputError(f"cannot read scene {scene!r}")
        rows = bench.backend_comparison(scene)
        _emit_rows(["task", "backend", "cpu_millis"],
                   [[r["task"], r["backend"], r["cpu_millis"]] for r in rows], args.out)
    return EXIT_OK


def cmd_metrics(args) -> int:
    from .metrics import ModelError, format_report, read_model, report_csv, summarize

    try:
        model = read_model(args.model)
    except OSError as exc:
        raise InputError(f"cannot read model {args.model!r}: {exc.strerror or exc}") from None
    except (ModelError, UnicodeDecodeError) as exc:
        raise InputError(f"{args.model}: {exc}") from None
    report = summarize(model)
    sys.stdout.write(report_csv(report) if args.csv else format_report(report))
    return EXIT_OK


_COMMANDS = {"render": cmd_render, "animate": cmd_animate, "bench": cmd_bench, "metrics": cmd_metrics}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"raybench: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"raybench: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
