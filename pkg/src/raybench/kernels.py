"""Per-ray kernels over a packed, array-based copy of a scene.

Every function here is scalar (one ray at a time) and is compiled with
numba when the JIT backend is active. :mod:`raybench.vectorized` mirrors
these operation for operation over whole ray batches; keep the two in
step, the backends are expected to agree bit for bit.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._accel import njit, prange
from .geometry import INF, PLANE, SPHERE, Plane, plane_normal, plane_t, sphere_normal, sphere_t
from .vecmath import Vec3, reflect, refract

# material table columns
AMB, DIF, SPE = 0, 3, 6
SHININESS, KR, KT, IOR = 9, 10, 11, 12
MATERIAL_COLUMNS = 13


class SceneArrays(NamedTuple):
    kinds: np.ndarray        # (N,) int64, SPHERE or PLANE
    anchors: np.ndarray      # (N, 3) sphere center / plane point
    normals: np.ndarray      # (N, 3) plane normal, zero for spheres
    radii: np.ndarray        # (N,) sphere radius, zero for planes
    materials: np.ndarray    # (N,) int64 row into material_table
    material_table: np.ndarray  # (M, MATERIAL_COLUMNS)
    light_positions: np.ndarray  # (L, 3)
    light_colors: np.ndarray     # (L, 3)
    background: np.ndarray   # (3,)
    epsilon: float


def pack_scene(scene, background=None, epsilon: float = 1e-4) -> SceneArrays:
    """Flatten a :class:`~raybench.scene.Scene` into contiguous arrays, keeping object order."""
    index = {mid: i for i, mid in enumerate(scene.materials)}
    n = len(scene.objects)
    kinds = np.zeros(n, dtype=np.int64)
    anchors = np.zeros((n, 3))
    normals = np.zeros((n, 3))
    radii = np.zeros(n)
    mats = np.zeros(n, dtype=np.int64)
    for i, obj in enumerate(scene.objects):
        mats[i] = index[obj.material_id]
        anchors[i] = obj.get_position()
        if isinstance(obj, Plane):
            kinds[i] = PLANE
            normals[i] = obj.normal
        else:
            kinds[i] = SPHERE
            radii[i] = obj.radius
    table = np.zeros((max(len(index), 1), MATERIAL_COLUMNS))
    for mid, row in index.items():
        m = scene.materials[mid]
        table[row] = (*m.ambient, *m.diffuse, *m.specular, m.shininess,
                      m.reflectivity, m.transparency, m.ior)
    lights = scene.lights
    light_pos = np.array([l.position for l in lights], dtype=np.float64).reshape(len(lights), 3)
    light_col = np.array([l.color for l in lights], dtype=np.float64).reshape(len(lights), 3)
    bg = np.array(scene.background if background is None else background, dtype=np.float64)
    return SceneArrays(kinds, anchors, normals, radii, mats, table, light_pos, light_col, bg, float(epsilon))


@njit
def _row_vec(a, i):
    return Vec3(a[i, 0], a[i, 1], a[i, 2])


@njit
def shape_t(kinds, anchors, normals, radii, i, origin, direction, t_min, t_max):
    """Dispatch on the object's kind tag to the matching intersection routine."""
    if kinds[i] == SPHERE:
        return sphere_t(_row_vec(anchors, i), radii[i], origin, direction, t_min, t_max)
    return plane_t(_row_vec(anchors, i), _row_vec(normals, i), origin, direction, t_min, t_max)


@njit
def object_t(sa, i, origin, direction, t_min, t_max):
    return shape_t(sa.kinds, sa.anchors, sa.normals, sa.radii, i, origin, direction, t_min, t_max)


@njit
def object_normal(sa, i, point, direction):
    if sa.kinds[i] == SPHERE:
        return sphere_normal(_row_vec(sa.anchors, i), sa.radii[i], point, direction)
    return plane_normal(_row_vec(sa.normals, i), direction)


@njit
def nearest_hit(sa, origin, direction):
    """Index and parameter of the closest hit; earliest-declared object wins ties."""
    kinds, anchors, normals, radii = sa.kinds, sa.anchors, sa.normals, sa.radii
    best_i = -1
    best_t = INF
    for i in range(kinds.shape[0]):
        t = shape_t(kinds, anchors, normals, radii, i, origin, direction, 0.0, INF)
        if t < best_t:
            best_t = t
            best_i = i
    return best_i, best_t


@njit
def occluded(sa, point, to_light, distance):
    """True when something lies strictly between ``point`` and the light."""
    eps = sa.epsilon
    origin = Vec3(point.x + eps * to_light.x, point.y + eps * to_light.y, point.z + eps * to_light.z)
    kinds, anchors, normals, radii = sa.kinds, sa.anchors, sa.normals, sa.radii
    for i in range(kinds.shape[0]):
        t = shape_t(kinds, anchors, normals, radii, i, origin, to_light, 0.0, distance)
        if t < distance:
            return True
    return False


@njit
def shade(sa, point, normal, mat, view):
    """Phong shading at a surface point: ambient plus unshadowed diffuse and specular terms."""
    m = sa.material_table
    r = m[mat, AMB]
    g = m[mat, AMB + 1]
    b = m[mat, AMB + 2]
    for li in range(sa.light_positions.shape[0]):
        lx = sa.light_positions[li, 0] - point.x
        ly = sa.light_positions[li, 1] - point.y
        lz = sa.light_positions[li, 2] - point.z
        dist = math.sqrt(lx * lx + ly * ly + lz * lz)
        if dist == 0.0:
            continue
        ldir = Vec3(lx / dist, ly / dist, lz / dist)
        if occluded(sa, point, ldir, dist):
            continue
        ndotl = normal.x * ldir.x + normal.y * ldir.y + normal.z * ldir.z
        diff = ndotl if ndotl > 0.0 else 0.0
        refl = reflect(Vec3(-ldir.x, -ldir.y, -ldir.z), normal)
        rdotv = refl.x * view.x + refl.y * view.y + refl.z * view.z
        spec = math.pow(rdotv, m[mat, SHININESS]) if rdotv > 0.0 else 0.0
        lc_r = sa.light_colors[li, 0]
        lc_g = sa.light_colors[li, 1]
        lc_b = sa.light_colors[li, 2]
        r = r + m[mat, DIF] * lc_r * diff
        g = g + m[mat, DIF + 1] * lc_g * diff
        b = b + m[mat, DIF + 2] * lc_b * diff
        r = r + m[mat, SPE] * lc_r * spec
        g = g + m[mat, SPE + 1] * lc_g * spec
        b = b + m[mat, SPE + 2] * lc_b * spec
    return Vec3(r, g, b)


# Recursive functions must not be cached: numba segfaults when reloading them
# (and anything that inlines them) from the on-disk cache.
@njit(cache=False)
def trace(sa, origin, direction, depth):
    """Recursive Whitted trace of one ray; returns linear RGB as a Vec3."""
    i, t = nearest_hit(sa, origin, direction)
    if i < 0:
        return Vec3(sa.background[0], sa.background[1], sa.background[2])
    point = Vec3(origin.x + t * direction.x, origin.y + t * direction.y, origin.z + t * direction.z)
    normal, front = object_normal(sa, i, point, direction)
    mat = sa.materials[i]
    c = shade(sa, point, normal, mat, Vec3(-direction.x, -direction.y, -direction.z))
    if depth <= 0:
        return c
    kr = sa.material_table[mat, KR]
    kt = sa.material_table[mat, KT]
    eps = sa.epsilon
    w_reflect = kr
    transmit = False
    tc = Vec3(0.0, 0.0, 0.0)
    if kt > 0.0:
        eta = 1.0 / sa.material_table[mat, IOR] if front else sa.material_table[mat, IOR]
        tdir = refract(direction, normal, eta)
        if tdir is None:
            # total internal reflection: transmitted weight joins the mirror term
            w_reflect = kr + kt
        else:
            to = Vec3(point.x + eps * tdir.x, point.y + eps * tdir.y, point.z + eps * tdir.z)
            tc = trace(sa, to, tdir, depth - 1)
            transmit = True
    if w_reflect > 0.0:
        rdir = reflect(direction, normal)
        ro = Vec3(point.x + eps * rdir.x, point.y + eps * rdir.y, point.z + eps * rdir.z)
        rc = trace(sa, ro, rdir, depth - 1)
        c = Vec3(c.x + w_reflect * rc.x, c.y + w_reflect * rc.y, c.z + w_reflect * rc.z)
    if transmit:
        c = Vec3(c.x + kt * tc.x, c.y + kt * tc.y, c.z + kt * tc.z)
    return c


@njit(cache=False)
def _trace_one(sa, origins, directions, depth, out, k):
    c = trace(sa, _row_vec(origins, k), _row_vec(directions, k), depth)
    out[k, 0] = c.x
    out[k, 1] = c.y
    out[k, 2] = c.z


@njit(cache=False)
def trace_rays_serial(sa, origins, directions, depth, out):
    for k in range(origins.shape[0]):
        _trace_one(sa, origins, directions, depth, out, k)


@njit(parallel=True, cache=False)
def trace_rays_parallel(sa, origins, directions, depth, out):
    for k in prange(origins.shape[0]):
        _trace_one(sa, origins, directions, depth, out, k)


@njit
def simplified_hit(kinds, anchors, normals, radii, origin, direction):
    """Scan every object in order; the last one hit wins (no nearest-t test)."""
    object_hit = -1
    for i in range(kinds.shape[0]):
        if shape_t(kinds, anchors, normals, radii, i, origin, direction, 0.0, INF) < INF:
            object_hit = i
    return object_hit


@njit
def simplified_rays_serial(sa, origins, directions, out):
    # fields are unpacked once: handing the whole tuple to a per-ray call costs
    # more than the intersection tests themselves in small scenes
    kinds, anchors, normals, radii = sa.kinds, sa.anchors, sa.normals, sa.radii
    for k in range(origins.shape[0]):
        i = simplified_hit(kinds, anchors, normals, radii, _row_vec(origins, k), _row_vec(directions, k))
        _flat_color(sa.materials, sa.material_table, sa.background, i, out, k)


@njit
def _flat_color(materials, material_table, background, i, out, k):
    if i < 0:
        out[k, 0] = background[0]
        out[k, 1] = background[1]
        out[k, 2] = background[2]
    else:
        m = materials[i]
        out[k, 0] = material_table[m, DIF]
        out[k, 1] = material_table[m, DIF + 1]
        out[k, 2] = material_table[m, DIF + 2]


@njit(parallel=True)
def simplified_rays_parallel(sa, origins, directions, out):
    kinds, anchors, normals, radii = sa.kinds, sa.anchors, sa.normals, sa.radii
    for k in prange(origins.shape[0]):
        i = simplified_hit(kinds, anchors, normals, radii, _row_vec(origins, k), _row_vec(directions, k))
        _flat_color(sa.materials, sa.material_table, sa.background, i, out, k)


@njit
def camera_ray(eye, basis, half_w, half_h, width, height, i, j):
    """Unit direction through the centre of pixel (column i, row j); same arithmetic as renderer.primary_rays."""
    sx = (2.0 * (i + 0.5) / width - 1.0) * half_w
    sy = (1.0 - 2.0 * (j + 0.5) / height) * half_h
    dx = sx * basis[0, 0] + sy * basis[1, 0] - basis[2, 0]
    dy = sx * basis[0, 1] + sy * basis[1, 1] - basis[2, 1]
    dz = sx * basis[0, 2] + sy * basis[1, 2] - basis[2, 2]
    n = math.sqrt(dx * dx + dy * dy + dz * dz)
    return Vec3(dx / n, dy / n, dz / n)


@njit
def quantize_channel(c):
    if c < 0.0:
        c = 0.0
    elif c > 1.0:
        c = 1.0
    return np.uint8(math.floor(c * 255.0 + 0.5))


@njit
def simplified_frame(sa, eye, basis, half_w, half_h, bgr):
    """Whole flat-shaded frame in one pass, written straight into a (rows, cols, 3) BGR buffer."""
    kinds, anchors, normals, radii = sa.kinds, sa.anchors, sa.normals, sa.radii
    materials, table, background = sa.materials, sa.material_table, sa.background
    height, width = bgr.shape[0], bgr.shape[1]
    origin = Vec3(eye[0], eye[1], eye[2])
    for j in range(height):
        for i in range(width):
            d = camera_ray(eye, basis, half_w, half_h, width, height, i, j)
            k = simplified_hit(kinds, anchors, normals, radii, origin, d)
            if k < 0:
                r, g, b = background[0], background[1], background[2]
            else:
                m = materials[k]
                r, g, b = table[m, DIF], table[m, DIF + 1], table[m, DIF + 2]
            bgr[j, i, 0] = quantize_channel(b)
            bgr[j, i, 1] = quantize_channel(g)
            bgr[j, i, 2] = quantize_channel(r)


# --- set_position dispatch micro-benchmark -------------------------------------------

@njit
def _sphere_set_position(sphere_centers, slot, x, y, z):
    sphere_centers[slot, 0] = x
    sphere_centers[slot, 1] = y
    sphere_centers[slot, 2] = z


@njit
def _plane_set_position(plane_points, slot, x, y, z):
    plane_points[slot, 0] = x
    plane_points[slot, 1] = y
    plane_points[slot, 2] = z


@njit
def set_position_dispatch(kinds, slots, sphere_centers, plane_points, i, x, y, z):
    """Route a set_position call by the object's runtime kind tag."""
    if kinds[i] == SPHERE:
        _sphere_set_position(sphere_centers, slots[i], x, y, z)
    else:
        _plane_set_position(plane_points, slots[i], x, y, z)


@njit
def set_position_loop(kinds, slots, sphere_centers, plane_points, repeats, count):
    """The timed loop: per call bump the call counter and COUNT, then dispatch."""
    calls = 0
    for _ in range(repeats):
        for n1 in range(kinds.shape[0]):
            count = count + 1.0
            calls += 1
            n = float(n1 + 1)
            set_position_dispatch(kinds, slots, sphere_centers, plane_points, n1, n, n + 1.0, n + 2.0)
        count = count / 100.0
    return calls, count
