"""Frame rendering: camera rays, the recursive tracer, and the flat-colour scan variant.

Whole frames run through one of two interchangeable tracers: the compiled
per-ray kernels (``backend="numba"``) or the batch numpy mirror
(``backend="numpy"``). Camera rays and quantization are shared numpy code,
so both backends see the same inputs and produce the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import kernels, vectorized
from ._accel import resolve_backend
from .geometry import INF, Shape
from .image import TGAImage
from .scene import Camera, Light, Material, Scene
from .vecmath import RGBColor, Ray, Vec3, sub


@dataclass(frozen=True)
class RenderSettings:
    max_depth: int = 5
    epsilon: float = 1e-4
    background: RGBColor = RGBColor(0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be > 0")

    @classmethod
    def for_scene(cls, scene: Scene, **overrides) -> RenderSettings:
        base = cls(max_depth=scene.max_depth, background=scene.background)
        return replace(base, **overrides) if overrides else base


def _settings(scene: Scene, settings: Optional[RenderSettings]) -> RenderSettings:
    return settings if settings is not None else RenderSettings.for_scene(scene)


def _pack(scene: Scene, settings: RenderSettings) -> kernels.SceneArrays:
    return kernels.pack_scene(scene, settings.background, settings.epsilon)


def _fvec(v) -> Vec3:
    return Vec3(float(v[0]), float(v[1]), float(v[2]))


def camera_frame(camera: Camera) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Eye position, stacked (u, v, w) basis rows and the half extents of the image plane at distance 1."""
    u, v, w = camera.basis()
    half_h = math.tan(math.radians(camera.vertical_fov) / 2.0)
    half_w = half_h * camera.width / camera.height
    return np.array(camera.eye, dtype=np.float64), np.array([u, v, w], dtype=np.float64), half_w, half_h


def primary_rays(camera: Camera) -> tuple[np.ndarray, np.ndarray]:
    """Origins and unit directions through every pixel centre, row 0 (top) first."""
    eye, (u, v, w), half_w, half_h = camera_frame(camera)
    sx = (2.0 * (np.arange(camera.width) + 0.5) / camera.width - 1.0) * half_w
    sy = (1.0 - 2.0 * (np.arange(camera.height) + 0.5) / camera.height) * half_h
    sx, sy = np.meshgrid(sx, sy)
    dx = (sx * u[0] + sy * v[0] - w[0]).ravel()
    dy = (sx * u[1] + sy * v[1] - w[1]).ravel()
    dz = (sx * u[2] + sy * v[2] - w[2]).ravel()
    n = np.sqrt(dx * dx + dy * dy + dz * dz)
    directions = np.stack([dx / n, dy / n, dz / n], axis=1)
    origins = np.empty_like(directions)
    origins[:] = eye
    return origins, directions


def quantize(colors: np.ndarray) -> np.ndarray:
    """floor(clamp(c, 0, 1) * 255 + 0.5) per channel, no gamma."""
    return np.floor(np.clip(colors, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def trace_batch(sa, origins, directions, depth, *, parallel=False, backend=None) -> np.ndarray:
    backend = resolve_backend(backend)
    if backend == "numpy":
        return vectorized.trace_rays(sa, origins, directions, depth)
    out = np.empty_like(directions)
    run = kernels.trace_rays_parallel if parallel else kernels.trace_rays_serial
    run(sa, origins, directions, depth, out)
    return out


def simplified_batch(sa, origins, directions, *, parallel=False, backend=None) -> np.ndarray:
    backend = resolve_backend(backend)
    if backend == "numpy":
        return vectorized.simplified_rays(sa, origins, directions)
    out = np.empty_like(directions)
    run = kernels.simplified_rays_parallel if parallel else kernels.simplified_rays_serial
    run(sa, origins, directions, out)
    return out


def _to_image(camera: Camera, colors: np.ndarray) -> TGAImage:
    image = TGAImage(24, 2, camera.height, camera.width)
    image.set_rgb_array(quantize(colors).reshape(camera.height, camera.width, 3))
    return image


def render_image_profiled(scene: Scene, settings: Optional[RenderSettings] = None, *,
                          parallel: bool = False, backend: Optional[str] = None,
                          clock=None) -> tuple[TGAImage, dict[str, float]]:
    """Render and report time spent in each phase (``rays``, ``trace``, ``image``) in ``clock`` units."""
    from .bench import cpu_time_now

    clock = clock or cpu_time_now
    settings = _settings(scene, settings)
    t0 = clock()
    sa = _pack(scene, settings)
    origins, directions = primary_rays(scene.camera)
    t1 = clock()
    colors = trace_batch(sa, origins, directions, settings.max_depth, parallel=parallel, backend=backend)
    t2 = clock()
    image = _to_image(scene.camera, colors)
    t3 = clock()
    return image, {"rays": t1 - t0, "trace": t2 - t1, "image": t3 - t2, "total": t3 - t0}


def render_image(scene: Scene, settings: Optional[RenderSettings] = None, *,
                 parallel: bool = False, backend: Optional[str] = None) -> TGAImage:
    """Trace one primary ray per pixel centre and quantize into a TGA frame."""
    settings = _settings(scene, settings)
    sa = _pack(scene, settings)
    origins, directions = primary_rays(scene.camera)
    colors = trace_batch(sa, origins, directions, settings.max_depth, parallel=parallel, backend=backend)
    return _to_image(scene.camera, colors)


def render_simplified_image(scene: Scene, settings: Optional[RenderSettings] = None, *,
                            parallel: bool = False, backend: Optional[str] = None) -> TGAImage:
    """Frame where each pixel takes the flat colour of the last object its ray hits."""
    settings = _settings(scene, settings)
    sa = _pack(scene, settings)
    if resolve_backend(backend) == "numba" and not parallel:
        # single pass: camera rays, scan and quantization without frame-sized temporaries
        image = TGAImage(24, 2, scene.camera.height, scene.camera.width)
        kernels.simplified_frame(sa, *camera_frame(scene.camera), image.pixels)
        return image
    origins, directions = primary_rays(scene.camera)
    colors = simplified_batch(sa, origins, directions, parallel=parallel, backend=backend)
    return _to_image(scene.camera, colors)


def compile_kernels(*, parallel: bool = False, backend: Optional[str] = None) -> None:
    """Trigger JIT compilation on a tiny scene so later timings exclude it."""
    if resolve_backend(backend) != "numba":
        return
    from .scene import generate_sweep_scene

    scene = generate_sweep_scene(2, 0, width=2, height=2)
    render_image(scene, parallel=parallel, backend="numba")
    render_simplified_image(scene, parallel=parallel, backend="numba")


def ray_trace(scene: Scene, ray: Ray, depth: int, settings: Optional[RenderSettings] = None) -> RGBColor:
    """Colour seen along ``ray`` with at most ``depth`` levels of reflection/refraction."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    settings = _settings(scene, settings)
    c = kernels.trace(_pack(scene, settings), _fvec(ray.origin), _fvec(ray.direction), int(depth))
    return RGBColor(float(c.x), float(c.y), float(c.z))


def local_shade(hit, view_dir: Vec3, scene: Scene, settings: Optional[RenderSettings] = None) -> RGBColor:
    """Ambient plus Phong diffuse/specular from every light not blocked from ``hit.point``."""
    settings = _settings(scene, settings)
    mat = list(scene.materials).index(hit.material_id)
    c = kernels.shade(_pack(scene, settings), _fvec(hit.point), _fvec(hit.normal), mat, _fvec(view_dir))
    return RGBColor(float(c.x), float(c.y), float(c.z))


def in_shadow(point: Vec3, light: Light, scene: Scene, epsilon: float = 1e-4) -> bool:
    to_light = sub(_fvec(light.position), _fvec(point))
    dist = math.sqrt(to_light.x * to_light.x + to_light.y * to_light.y + to_light.z * to_light.z)
    if dist == 0.0:
        return False
    ldir = Vec3(to_light.x / dist, to_light.y / dist, to_light.z / dist)
    sa = kernels.pack_scene(scene, epsilon=epsilon)
    return bool(kernels.occluded(sa, _fvec(point), ldir, dist))


def ray_trace_simplified(objects: Sequence[Shape], ray: Ray,
                         materials: dict[str, Material]) -> Optional[RGBColor]:
    """Flat colour of the last object (in list order) the ray hits, or None."""
    object_hit = None
    for obj in objects:
        if obj.hit(ray, 0.0, INF) is not None:
            object_hit = obj
    if object_hit is None:
        return None
    return materials[object_hit.material_id].diffuse
