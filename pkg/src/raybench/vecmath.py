"""Vector and color primitives.

Vectors are immutable named tuples so the same values flow unchanged
through plain Python and through the compiled kernels. All arithmetic goes
through the functions below (``+`` on a tuple concatenates, it does not add).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ._accel import njit


class Vec3(NamedTuple):
    x: float
    y: float
    z: float


class Ray(NamedTuple):
    origin: Vec3
    direction: Vec3


class RGBColor(NamedTuple):
    r: float
    g: float
    b: float


@njit
def add(a, b):
    return Vec3(a.x + b.x, a.y + b.y, a.z + b.z)


@njit
def sub(a, b):
    return Vec3(a.x - b.x, a.y - b.y, a.z - b.z)


@njit
def scale(v, s):
    return Vec3(v.x * s, v.y * s, v.z * s)


@njit
def neg(v):
    return Vec3(-v.x, -v.y, -v.z)


@njit
def along(origin, direction, t):
    """Point ``origin + t * direction``."""
    return Vec3(origin.x + t * direction.x, origin.y + t * direction.y, origin.z + t * direction.z)


@njit
def dot(a, b):
    return a.x * b.x + a.y * b.y + a.z * b.z


@njit
def cross(a, b):
    return Vec3(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)


@njit
def length(v):
    return math.sqrt(v.x * v.x + v.y * v.y + v.z * v.z)


@njit
def normalize(v):
    n = math.sqrt(v.x * v.x + v.y * v.y + v.z * v.z)
    if not n > 0.0:
        raise ValueError("degenerate vector")
    return Vec3(v.x / n, v.y / n, v.z / n)


@njit
def reflect(d, n):
    """Mirror ``d`` about the unit normal ``n``: d - 2(d.n)n."""
    k = 2.0 * (d.x * n.x + d.y * n.y + d.z * n.z)
    return Vec3(d.x - k * n.x, d.y - k * n.y, d.z - k * n.z)


@njit
def refract(d, n, eta):
    """Transmitted direction by Snell's law, or None on total internal reflection.

    ``n`` must face the incoming ray (d.n < 0) and ``eta`` is n1/n2.
    """
    c = -(d.x * n.x + d.y * n.y + d.z * n.z)
    sin2_t = eta * eta * (1.0 - c * c)
    if sin2_t > 1.0:
        return None
    k = eta * c - math.sqrt(1.0 - sin2_t)
    return Vec3(eta * d.x + k * n.x, eta * d.y + k * n.y, eta * d.z + k * n.z)


def make_ray(origin, direction) -> Ray:
    """Build a Ray with a normalized direction."""
    return Ray(Vec3(*map(float, origin)), normalize(Vec3(*map(float, direction))))
