"""Scene data model and the line-oriented scene file format.

Grammar, one statement per line, ``#`` starts a comment::

    material <id> ar ag ab  dr dg db  sr sg sb  shininess kr kt ior
    sphere   <material-id> cx cy cz r
    plane    <material-id> px py pz nx ny nz
    light    x y z r g b
    camera   ex ey ez lx ly lz ux uy uz fov width height
    background r g b
    path     <object-id> cx cy cz ux uy uz vx vy vz a b N
    maxdepth d

Spheres and planes get ids ``o1, o2, ...`` in declaration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Plane, Shape, Sphere
from .vecmath import RGBColor, Vec3, cross, dot, length, normalize, scale, sub

MAX_IMAGE_SIDE = 65535
# keeps squared terms in the intersection math finite
MAX_MAGNITUDE = 1e15


class SceneError(ValueError):
    """Raised for malformed or inconsistent scene descriptions."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Material:
    ambient: RGBColor
    diffuse: RGBColor
    specular: RGBColor
    shininess: float = 1.0
    reflectivity: float = 0.0
    transparency: float = 0.0
    ior: float = 1.0

    def __post_init__(self):
        for name in ("ambient", "diffuse", "specular"):
            if any(c < 0.0 for c in getattr(self, name)):
                raise SceneError(f"material {name} components must be >= 0")
        if not self.shininess >= 1.0:
            raise SceneError("material shininess must be >= 1")
        if not (0.0 <= self.reflectivity <= 1.0 and 0.0 <= self.transparency <= 1.0):
            raise SceneError("reflectivity and transparency must lie in [0, 1]")
        if self.reflectivity + self.transparency > 1.0:
            raise SceneError("reflectivity + transparency must not exceed 1")
        if not self.ior > 0.0:
            raise SceneError("material ior must be > 0")


@dataclass(frozen=True)
class Light:
    position: Vec3
    color: RGBColor

    def __post_init__(self):
        if any(c < 0.0 for c in self.color):
            raise SceneError("light color components must be >= 0")


@dataclass(frozen=True)
class Camera:
    eye: Vec3
    look_at: Vec3
    up: Vec3
    vertical_fov: float
    width: int
    height: int

    def __post_init__(self):
        if not 0.0 < self.vertical_fov < 180.0:
            raise SceneError("camera fov must lie in (0, 180) degrees")
        for side in (self.width, self.height):
            if not 1 <= side <= MAX_IMAGE_SIDE:
                raise SceneError(f"image sides must lie in [1, {MAX_IMAGE_SIDE}]")
        forward = sub(self.look_at, self.eye)
        if length(forward) == 0.0:
            raise SceneError("camera eye and look_at coincide")
        if length(self.up) == 0.0 or length(cross(normalize(forward), normalize(self.up))) < 1e-9:
            raise SceneError("camera up vector is parallel to the view direction")
        object.__setattr__(self, "up", normalize(self.up))

    def basis(self) -> tuple[Vec3, Vec3, Vec3]:
        """Right-handed (u, v, w) basis; the camera looks along -w."""
        w = normalize(sub(self.eye, self.look_at))
        u = normalize(cross(self.up, w))
        v = cross(w, u)
        return u, v, w


@dataclass(frozen=True)
class EllipticPath:
    target: str
    center: Vec3
    axis_u: Vec3
    axis_v: Vec3
    semi_a: float
    semi_b: float
    steps: int

    def __post_init__(self):
        if not (self.semi_a > 0.0 and self.semi_b > 0.0):
            raise SceneError("path semi-axes must be > 0")
        if self.steps < 1:
            raise SceneError("path step count must be >= 1")

    @classmethod
    def orthonormalized(cls, target, center, u, v, a, b, steps) -> EllipticPath:
        """Normalize ``u`` and Gram-Schmidt ``v`` against it."""
        try:
            u_hat = normalize(u)
            v_hat = normalize(v)
        except ValueError:
            raise SceneError("path axes must be non-zero") from None
        if abs(dot(u_hat, v_hat)) > 0.99:
            raise SceneError("path axes are nearly parallel")
        v_perp = normalize(sub(v_hat, scale(u_hat, dot(v_hat, u_hat))))
        return cls(target, center, u_hat, v_perp, a, b, steps)


@dataclass
class Scene:
    camera: Camera
    objects: list[Shape] = field(default_factory=list)
    lights: list[Light] = field(default_factory=list)
    materials: dict[str, Material] = field(default_factory=dict)
    paths: list[EllipticPath] = field(default_factory=list)
    background: RGBColor = RGBColor(0.0, 0.0, 0.0)
    max_depth: int = 5

    @property
    def spheres(self) -> list[Sphere]:
        return [o for o in self.objects if isinstance(o, Sphere)]

    @property
    def planes(self) -> list[Plane]:
        return [o for o in self.objects if isinstance(o, Plane)]

    def object_ids(self) -> list[str]:
        return [f"o{i + 1}" for i in range(len(self.objects))]

    def object_by_id(self, object_id: str) -> Shape:
        if object_id.startswith("o") and object_id[1:].isdigit():
            i = int(object_id[1:]) - 1
            if 0 <= i < len(self.objects):
                return self.objects[i]
        raise KeyError(object_id)

    def validate(self) -> None:
        for i, obj in enumerate(self.objects):
            if obj.material_id not in self.materials:
                raise SceneError(f"object o{i + 1} references undefined material {obj.material_id!r}")
        ids = set(self.object_ids())
        for p in self.paths:
            if p.target not in ids:
                raise SceneError(f"path targets nonexistent object {p.target!r}")
        if self.max_depth < 0:
            raise SceneError("maxdepth must be >= 0")


def scene_object_count(scene: Scene) -> int:
    return len(scene.spheres) + len(scene.planes)


# name -> (argument count, whether the first argument is an identifier)
_ARITY = {
    "material": (14, True),
    "sphere": (5, True),
    "plane": (7, True),
    "light": (6, False),
    "camera": (12, False),
    "background": (3, False),
    "path": (13, True),
    "maxdepth": (1, False),
}


def _number(tok: str, lineno: int) -> float:
    try:
        value = float(tok)
    except ValueError:
        raise SceneError(f"expected a number, got {tok!r}", lineno) from None
    if not math.isfinite(value):
        raise SceneError(f"non-finite number {tok!r}", lineno)
    if abs(value) > MAX_MAGNITUDE:
        raise SceneError(f"number {tok!r} exceeds magnitude limit {MAX_MAGNITUDE:g}", lineno)
    return value


def _integer(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SceneError(f"expected an integer, got {tok!r}", lineno) from None


def _vec(nums: list[float]) -> Vec3:
    return Vec3(nums[0], nums[1], nums[2])


def _rgb(nums: list[float]) -> RGBColor:
    return RGBColor(nums[0], nums[1], nums[2])


def parse_scene(text: str | bytes) -> Scene:
    """Parse scene-file contents into a validated :class:`Scene`."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SceneError(f"scene file is not valid UTF-8: {exc.reason}") from None

    materials: dict[str, Material] = {}
    objects: list[Shape] = []
    lights: list[Light] = []
    paths: list[EllipticPath] = []
    camera = None
    background = RGBColor(0.0, 0.0, 0.0)
    max_depth = 5

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        keyword, args = tokens[0].lower(), tokens[1:]
        if keyword not in _ARITY:
            raise SceneError(f"unknown keyword {tokens[0]!r}", lineno)
        arity, named = _ARITY[keyword]
        if len(args) != arity:
            raise SceneError(f"{keyword} takes {arity} arguments, got {len(args)}", lineno)
        name = args[0] if named else None
        if keyword == "path":
            nums = [_number(t, lineno) for t in args[1:-1]]
            steps = _integer(args[-1], lineno)
        elif keyword == "camera":
            nums = [_number(t, lineno) for t in args[:10]]
            width, height = _integer(args[10], lineno), _integer(args[11], lineno)
        elif keyword == "maxdepth":
            nums = []
            depth = _integer(args[0], lineno)
        else:
            nums = [_number(t, lineno) for t in args[1 if named else 0:]]

        try:
            if keyword == "material":
                if name in materials:
                    raise SceneError(f"duplicate material id {name!r}", lineno)
                materials[name] = Material(_rgb(nums[0:3]), _rgb(nums[3:6]), _rgb(nums[6:9]), *nums[9:13])
            elif keyword == "sphere":
                objects.append(Sphere(_vec(nums[0:3]), nums[3], name))
            elif keyword == "plane":
                objects.append(Plane(_vec(nums[0:3]), _vec(nums[3:6]), name))
            elif keyword == "light":
                lights.append(Light(_vec(nums[0:3]), _rgb(nums[3:6])))
            elif keyword == "camera":
                camera = Camera(_vec(nums[0:3]), _vec(nums[3:6]), _vec(nums[6:9]), nums[9], width, height)
            elif keyword == "background":
                background = _rgb(nums)
                if any(c < 0.0 for c in background):
                    raise SceneError("background components must be >= 0")
            elif keyword == "path":
                paths.append(EllipticPath.orthonormalized(
                    name, _vec(nums[0:3]), _vec(nums[3:6]), _vec(nums[6:9]), nums[9], nums[10], steps))
            elif keyword == "maxdepth":
                if depth < 0:
                    raise SceneError("maxdepth must be >= 0")
                max_depth = depth
        except SceneError as exc:
            if exc.line is None:
                raise SceneError(str(exc), lineno) from None
            raise
        except ValueError as exc:
            raise SceneError(str(exc), lineno) from None

    if camera is None:
        raise SceneError("scene declares no camera")
    scene = Scene(camera, objects, lights, materials, paths, background, max_depth)
    scene.validate()
    return scene


def load_scene(path) -> Scene:
    with open(path, "rb") as fh:
        return parse_scene(fh.read())


def _fmt(*values) -> str:
    return " ".join(repr(float(v)) if not isinstance(v, (int, str)) else str(v) for v in values)


def serialize_scene(scene: Scene) -> str:
    """Render a scene back to file syntax; floats are written with ``repr`` so they round-trip."""
    c = scene.camera
    lines = [
        "camera " + _fmt(*c.eye, *c.look_at, *c.up, c.vertical_fov, c.width, c.height),
        "background " + _fmt(*scene.background),
        f"maxdepth {scene.max_depth}",
    ]
    for mid, m in scene.materials.items():
        lines.append(f"material {mid} " + _fmt(*m.ambient, *m.diffuse, *m.specular, m.shininess,
                                               m.reflectivity, m.transparency, m.ior))
    for light in scene.lights:
        lines.append("light " + _fmt(*light.position, *light.color))
    for obj in scene.objects:
        if isinstance(obj, Sphere):
            lines.append(f"sphere {obj.material_id} " + _fmt(*obj.center, obj.radius))
        else:
            lines.append(f"plane {obj.material_id} " + _fmt(*obj.point, *obj.normal))
    for p in scene.paths:
        lines.append(f"path {p.target} " + _fmt(*p.center, *p.axis_u, *p.axis_v, p.semi_a, p.semi_b, p.steps))
    return "\n".join(lines) + "\n"


def generate_sweep_scene(object_count: int, seed: int, width: int = 320, height: int = 240) -> Scene:
    """Seeded scene of ``object_count`` spheres scattered inside the view frustum."""
    if object_count < 1:
        raise ValueError("object_count must be >= 1")
    rng = np.random.default_rng(seed)
    fov = 60.0
    camera = Camera(Vec3(0.0, 0.0, 0.0), Vec3(0.0, 0.0, 1.0), Vec3(0.0, 1.0, 0.0), fov, width, height)
    half_h = math.tan(math.radians(fov) / 2.0)
    half_w = half_h * width / height
    depth = rng.uniform(6.0, 40.0, object_count)
    xs = rng.uniform(-0.85, 0.85, object_count) * half_w * depth
    ys = rng.uniform(-0.85, 0.85, object_count) * half_h * depth
    radii = rng.uniform(0.15, 0.6, object_count)
    objects: list[Shape] = [
        Sphere(Vec3(float(x), float(y), float(z)), float(r), "m0")
        for x, y, z, r in zip(xs, ys, depth, radii)
    ]
    material = Material(RGBColor(0.1, 0.1, 0.1), RGBColor(0.7, 0.5, 0.3), RGBColor(0.3, 0.3, 0.3), 20.0)
    light = Light(Vec3(-10.0, 20.0, -10.0), RGBColor(1.0, 1.0, 1.0))
    scene = Scene(camera, objects, [light], {"m0": material})
    scene.validate()
    return scene
