"""Shapes: an abstract contract with sphere and plane implementations.

The intersection math lives in small compiled functions (``sphere_t``,
``plane_t`` and friends) that the Python classes and the whole-frame
kernels share, so there is one copy of every formula.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple, Optional

from ._accel import njit
from .vecmath import Ray, Vec3, along, normalize

SPHERE = 0
PLANE = 1

INF = math.inf


class HitRecord(NamedTuple):
    t: float
    point: Vec3
    normal: Vec3
    material_id: str
    front_face: bool


@njit
def sphere_t(center, radius, origin, direction, t_min, t_max):
    """Smallest root of |o + t d - c|^2 = r^2 in (t_min, t_max], else inf."""
    ocx = origin.x - center.x
    ocy = origin.y - center.y
    ocz = origin.z - center.z
    a = direction.x * direction.x + direction.y * direction.y + direction.z * direction.z
    half_b = ocx * direction.x + ocy * direction.y + ocz * direction.z
    c = (ocx * ocx + ocy * ocy + ocz * ocz) - radius * radius
    disc = half_b * half_b - a * c
    if disc < 0.0:
        return INF
    sq = math.sqrt(disc)
    if half_b >= 0.0:
        q = -(half_b + sq)
    else:
        q = -(half_b - sq)
    if q == 0.0:
        t0 = 0.0
        t1 = 0.0
    else:
        t0 = q / a
        t1 = c / q
    if t1 < t0:
        t0, t1 = t1, t0
    if t0 > t_min and t0 <= t_max:
        return t0
    if t1 > t_min and t1 <= t_max:
        return t1
    return INF


@njit
def plane_t(point, normal, origin, direction, t_min, t_max):
    """Parameter where the ray meets the plane in (t_min, t_max], else inf."""
    denom = direction.x * normal.x + direction.y * normal.y + direction.z * normal.z
    if denom == 0.0:
        return INF
    t = ((point.x - origin.x) * normal.x + (point.y - origin.y) * normal.y
         + (point.z - origin.z) * normal.z) / denom
    if t > t_min and t <= t_max:
        return t
    return INF


@njit
def sphere_normal(center, radius, hit_point, direction):
    """Unit normal at ``hit_point`` turned to face the ray, plus front-face flag."""
    n = Vec3((hit_point.x - center.x) / radius, (hit_point.y - center.y) / radius,
             (hit_point.z - center.z) / radius)
    if n.x * direction.x + n.y * direction.y + n.z * direction.z > 0.0:
        return Vec3(-n.x, -n.y, -n.z), False
    return n, True


@njit
def plane_normal(normal, direction):
    if normal.x * direction.x + normal.y * direction.y + normal.z * direction.z > 0.0:
        return Vec3(-normal.x, -normal.y, -normal.z), False
    return normal, True


class Shape(ABC):
    """Anything a ray can hit. Subclasses bind the three operations."""

    material_id: str

    @abstractmethod
    def set_position(self, p: Vec3) -> None: ...

    @abstractmethod
    def get_position(self) -> Vec3: ...

    @abstractmethod
    def hit(self, ray: Ray, t_min: float, t_max: float) -> Optional[HitRecord]: ...


@dataclass(eq=True)
class Sphere(Shape):
    center: Vec3
    radius: float
    material_id: str

    kind = SPHERE

    def __post_init__(self):
        self.center = Vec3(*map(float, self.center))
        self.radius = float(self.radius)
        if not self.radius > 0.0 or not math.isfinite(self.radius):
            raise ValueError(f"sphere radius must be positive, got {self.radius}")

    def set_position(self, p: Vec3) -> None:
        self.center = p

    def get_position(self) -> Vec3:
        return self.center

    def hit(self, ray: Ray, t_min: float, t_max: float) -> Optional[HitRecord]:
        t = sphere_t(self.center, self.radius, ray.origin, ray.direction, t_min, t_max)
        if t == INF:
            return None
        p = along(ray.origin, ray.direction, t)
        n, front = sphere_normal(self.center, self.radius, p, ray.direction)
        return HitRecord(t, p, n, self.material_id, front)


@dataclass(eq=True)
class Plane(Shape):
    point: Vec3
    normal: Vec3
    material_id: str

    kind = PLANE

    def __post_init__(self):
        self.point = Vec3(*map(float, self.point))
        self.normal = normalize(Vec3(*map(float, self.normal)))

    def set_position(self, p: Vec3) -> None:
        self.point = p

    def get_position(self) -> Vec3:
        return self.point

    def hit(self, ray: Ray, t_min: float, t_max: float) -> Optional[HitRecord]:
        t = plane_t(self.point, self.normal, ray.origin, ray.direction, t_min, t_max)
        if t == INF:
            return None
        p = along(ray.origin, ray.direction, t)
        n, front = plane_normal(self.normal, ray.direction)
        return HitRecord(t, p, n, self.material_id, front)


def set_position(shape: Shape, p) -> Shape:
    shape.set_position(Vec3(*map(float, p)))
    return shape


def get_position(shape: Shape) -> Vec3:
    return shape.get_position()


def hit(shape: Shape, ray: Ray, t_min: float = 0.0, t_max: float = INF) -> Optional[HitRecord]:
    if t_min < 0.0 or not t_max > t_min:
        raise ValueError("hit requires 0 <= t_min < t_max")
    return shape.hit(ray, t_min, t_max)

