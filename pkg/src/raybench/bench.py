"""CPU-time measurement harness.

Three experiments: per-frame timing of an animation, the object-count
sweep with the flat last-hit tracer, and the set_position dispatch loop.
All timed regions are single-threaded and exclude scene construction and
file I/O.
"""

from __future__ import annotations

import csv
import dataclasses
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import kernels
from ._accel import resolve_backend
from .animation import FRAME_PATTERN, iter_frames
from .geometry import SPHERE, Sphere
from .renderer import RenderSettings, compile_kernels, render_image, render_simplified_image
from .scene import Scene, generate_sweep_scene, load_scene
from .vecmath import Vec3

DEFAULT_SWEEP_COUNTS = (5, 10, 20, 25, 50, 100, 200, 400)
DEFAULT_MICRO_SPHERES = 1024 * 768
DEFAULT_MICRO_REPEATS = 500


def _check_cpu_clock() -> None:
    try:
        info = time.get_clock_info("process_time")
        time.process_time_ns()
    except (OSError, ValueError) as exc:  # pragma: no cover - platform specific
        raise RuntimeError(f"process CPU time is unavailable on this platform: {exc}") from exc
    if info.resolution > 1e-3:  # pragma: no cover - platform specific
        raise RuntimeError(f"process CPU clock resolution too coarse: {info.resolution} s")


_check_cpu_clock()


def cpu_time_now() -> float:
    """Process CPU time (user + system) in milliseconds."""
    return time.process_time_ns() / 1e6


@dataclass(frozen=True)
class FrameTiming:
    frame_index: int
    cpu_millis: float


@dataclass(frozen=True)
class SweepPoint:
    object_count: int
    avg_cpu_millis: float
    samples: tuple = field(default=(), compare=False, metadata={"csv": False})


@dataclass(frozen=True)
class MicroResult:
    num_spheres: int
    repeats: int
    call_count: int
    count_accumulator: float
    cpu_millis: float
    last_position: Optional[Vec3] = field(default=None, compare=False, metadata={"csv": False})


def time_animation(scene: Scene, settings: Optional[RenderSettings] = None, *,
                   output_dir=None, backend: Optional[str] = None) -> list[FrameTiming]:
    """CPU milliseconds to render each frame; frames are written (untimed) when ``output_dir`` is set."""
    out = Path(output_dir) if output_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    _warm_up(backend)
    timings = []
    for k, image, ms in iter_frames(scene, settings, parallel=False, backend=backend, clock=cpu_time_now):
        timings.append(FrameTiming(k, ms))
        if out is not None:
            image.save(out / FRAME_PATTERN.format(k))
    return timings


def _warm_up(backend: Optional[str]) -> None:
    compile_kernels(parallel=False, backend=backend)


def sweep_objects(counts: Sequence[int] = DEFAULT_SWEEP_COUNTS, frames_per_point: int = 30, seed: int = 0, *,
                  width: int = 320, height: int = 240, backend: Optional[str] = None) -> list[SweepPoint]:
    """Average CPU time of one flat-traced frame for each object count."""
    counts = list(counts)
    if not counts or any(int(c) < 1 for c in counts):
        raise ValueError("counts must be a non-empty list of integers >= 1")
    if frames_per_point < 1:
        raise ValueError("frames_per_point must be >= 1")
    _warm_up(backend)
    scenes = [generate_sweep_scene(int(c), seed, width=width, height=height) for c in counts]
    samples: list[list[float]] = [[] for _ in counts]
    # frames are taken round-robin over the counts so slow drift in machine
    # speed spreads evenly instead of biasing the larger (later) counts
    for _ in range(frames_per_point):
        for scene, bucket in zip(scenes, samples):
            t0 = cpu_time_now()
            render_simplified_image(scene, parallel=False, backend=backend)
            bucket.append(cpu_time_now() - t0)
    return [SweepPoint(int(c), statistics.fmean(b), tuple(b)) for c, b in zip(counts, samples)]


def _micro_python(num_spheres: int, repeats: int):
    shapes = [Sphere(Vec3(0.0, 0.0, 0.0), 1.0, "m") for _ in range(num_spheres)]
    calls = 0
    count = 0.0
    t0 = cpu_time_now()
    for _ in range(repeats):
        for n1, shape in enumerate(shapes, 1):
            count = count + 1.0
            calls += 1
            n = float(n1)
            shape.set_position(Vec3(n, n + 1.0, n + 2.0))
        count = count / 100.0
    elapsed = cpu_time_now() - t0
    return calls, count, elapsed, shapes[-1].get_position()


def _micro_jit(num_spheres: int, repeats: int):
    def tables(n):
        kinds = np.full(n, SPHERE, dtype=np.int64)
        return kinds, np.arange(n, dtype=np.int64), np.zeros((n, 3)), np.zeros((0, 3))

    kernels.set_position_loop(*tables(1), 1, 0.0)  # compile outside the timed region
    kinds, slots, centers, points = tables(num_spheres)
    t0 = cpu_time_now()
    calls, count = kernels.set_position_loop(kinds, slots, centers, points, repeats, 0.0)
    elapsed = cpu_time_now() - t0
    return int(calls), float(count), elapsed, Vec3(*map(float, centers[-1]))


def micro_set_position(num_spheres: int = DEFAULT_MICRO_SPHERES, repeats: int = DEFAULT_MICRO_REPEATS, *,
                       backend: Optional[str] = None) -> MicroResult:
    """Call set_position((n, n+1, n+2)) on every sphere ``repeats`` times through runtime dispatch.

    The numpy backend calls the Python ``Shape`` method on each object; the
    numba backend routes each call by the object's kind tag.
    """
    if num_spheres < 1 or repeats < 1:
        raise ValueError("num_spheres and repeats must be >= 1")
    run = _micro_jit if resolve_backend(backend) == "numba" else _micro_python
    calls, count, elapsed, last = run(int(num_spheres), int(repeats))
    return MicroResult(int(num_spheres), int(repeats), calls, count, elapsed, last)


def backend_comparison(scene_path=None, *, frames: int = 3, sweep_counts: Sequence[int] = (5, 50),
                       sweep_frames: int = 3, micro: tuple[int, int] = (20_000, 5)) -> list[dict]:
    """Time the same workloads on every available backend; rows of task/backend/cpu_millis."""
    from ._accel import JIT_ENABLED
    from .fixtures import fixture_path

    scene = load_scene(scene_path or fixture_path("simple.scene"))
    backends = ["numba", "numpy"] if JIT_ENABLED else ["numpy"]
    rows = []
    for backend in backends:
        _warm_up(backend)
        samples = []
        for _ in range(frames):
            t0 = cpu_time_now()
            render_image(scene, backend=backend)
            samples.append(cpu_time_now() - t0)
        rows.append({"task": "render", "backend": backend, "cpu_millis": statistics.fmean(samples)})
        for p in sweep_objects(sweep_counts, sweep_frames, backend=backend):
            rows.append({"task": f"sweep_{p.object_count}", "backend": backend, "cpu_millis": p.avg_cpu_millis})
        m = micro_set_position(*micro, backend=backend)
        rows.append({"task": f"micro_{m.num_spheres}x{m.repeats}", "backend": backend, "cpu_millis": m.cpu_millis})
    return rows


def report_columns(record_type) -> list[str]:
    return [f.name for f in dataclasses.fields(record_type) if f.metadata.get("csv", True)]


def write_report(results: Sequence, path, record_type=None) -> Path:
    """Write homogeneous result records as CSV with a fixed column order."""
    results = list(results)
    if record_type is None:
        if not results:
            raise ValueError("record_type is required for an empty report")
        record_type = type(results[0])
    columns = report_columns(record_type)
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for r in results:
            writer.writerow([_cell(getattr(r, c)) for c in columns])
    return path


def _cell(value):
    return repr(float(value)) if isinstance(value, float) else value


def read_report(path, record_type) -> list:
    columns = report_columns(record_type)
    types = {f.name: f.type for f in dataclasses.fields(record_type)}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != columns:
            raise ValueError(f"unexpected header {header}, expected {columns}")
        rows = []
        for raw in reader:
            values = {c: (int(v) if types[c] in (int, "int") else float(v)) for c, v in zip(columns, raw)}
            rows.append(record_type(**values))
    return rows
