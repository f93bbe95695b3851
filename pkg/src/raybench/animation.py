"""Elliptic-path animation: move path targets, render, write numbered frames."""

from __future__ import annotations

import math
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from .renderer import RenderSettings, render_image
from .scene import EllipticPath, Scene
from .vecmath import Vec3

FRAME_PATTERN = "frame_{:05d}.tga"


class AnimationError(ValueError):
    pass


def path_position(path: EllipticPath, k: int) -> Vec3:
    """center + a cos(2 pi k / N) u + b sin(2 pi k / N) v."""
    if k < 0:
        raise ValueError("step index must be >= 0")
    theta = 2.0 * math.pi * k / path.steps
    ca = path.semi_a * math.cos(theta)
    sb = path.semi_b * math.sin(theta)
    c, u, v = path.center, path.axis_u, path.axis_v
    return Vec3(c.x + ca * u.x + sb * v.x, c.y + ca * u.y + sb * v.y, c.z + ca * u.z + sb * v.z)


def frame_count(scene: Scene) -> int:
    if not scene.paths:
        raise AnimationError("nothing to animate")
    counts = {p.steps for p in scene.paths}
    if len(counts) != 1:
        raise AnimationError(f"mismatched step counts: {sorted(counts)}")
    return counts.pop()


@contextmanager
def positioned(scene: Scene, k: int):
    """Temporarily move every path target to its position at step ``k``."""
    saved = [(p, scene.object_by_id(p.target).get_position()) for p in scene.paths]
    try:
        for p in scene.paths:
            scene.object_by_id(p.target).set_position(path_position(p, k))
        yield scene
    finally:
        for p, pos in reversed(saved):
            scene.object_by_id(p.target).set_position(pos)


def iter_frames(scene: Scene, settings: Optional[RenderSettings] = None, *, parallel: bool = False,
                backend: Optional[str] = None, clock=None) -> Iterator[tuple[int, object, float]]:
    """Yield ``(k, image, elapsed)`` per frame; ``elapsed`` covers rendering only, in ``clock`` units."""
    n = frame_count(scene)
    settings = settings if settings is not None else RenderSettings.for_scene(scene)
    for k in range(n):
        with positioned(scene, k):
            t0 = clock() if clock else 0.0
            image = render_image(scene, settings, parallel=parallel, backend=backend)
            elapsed = clock() - t0 if clock else 0.0
        yield k, image, elapsed


def render_animation(scene: Scene, settings: Optional[RenderSettings], output_dir, *,
                     parallel: bool = False, backend: Optional[str] = None) -> list[Path]:
    """Render every step of the scene's paths to ``output_dir/frame_NNNNN.tga``."""
    frame_count(scene)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for k, image, _ in iter_frames(scene, settings, parallel=parallel, backend=backend):
        target = out / FRAME_PATTERN.format(k)
        image.save(target)
        written.append(target)
    return written
