"""Whitted-style ray tracer with a CPU-time benchmark harness and OO metrics.

The hot per-ray kernels are compiled with numba; set ``RAYBENCH_BACKEND=numpy``
before import to run the pure-numpy implementation instead.
"""

from ._accel import BACKENDS, DEFAULT_BACKEND, JIT_ENABLED
from .animation import AnimationError, frame_count, path_position, render_animation
from .bench import (FrameTiming, MicroResult, SweepPoint, cpu_time_now, micro_set_position, read_report,
                    sweep_objects, time_animation, write_report)
from .fixtures import fixture_path
from .geometry import HitRecord, Plane, Shape, Sphere, get_position, hit, set_position
from .image import TGAImage, encode_tga, new_image, write_tga
from .metrics import ClassModel, ClassRecord, MetricsReport, ModelError, load_model, summarize
from .renderer import RenderSettings, ray_trace, ray_trace_simplified, render_image, render_simplified_image
from .scene import (Camera, EllipticPath, Light, Material, Scene, SceneError, generate_sweep_scene, load_scene,
                    parse_scene, serialize_scene)
from .vecmath import RGBColor, Ray, Vec3

__version__ = "0.1.0"
