"""Pure-numpy batch versions of the ray kernels.

Each function mirrors its scalar twin in :mod:`raybench.kernels` with the
same floating-point operations in the same order, applied to a batch of
rays at once. The recursive tracer recurses on the subset of rays that
spawn reflected or transmitted children.

numpy's SIMD ``power`` is not correctly rounded the way libm ``pow`` is, so
the specular exponent goes through :func:`math.pow` element by element.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import SPHERE
from .kernels import AMB, DIF, IOR, KR, KT, SHININESS, SPE, SceneArrays


def sphere_t(center, radius, ox, oy, oz, dx, dy, dz, t_min, t_max):
    ocx = ox - center[0]
    ocy = oy - center[1]
    ocz = oz - center[2]
    a = dx * dx + dy * dy + dz * dz
    half_b = ocx * dx + ocy * dy + ocz * dz
    c = (ocx * ocx + ocy * ocy + ocz * ocz) - radius * radius
    disc = half_b * half_b - a * c
    ok = disc >= 0.0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    q = np.where(half_b >= 0.0, -(half_b + sq), -(half_b - sq))
    qz = q == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        t0 = np.where(qz, 0.0, q / a)
        t1 = np.where(qz, 0.0, c / np.where(qz, 1.0, q))
    lo = np.minimum(t0, t1)
    hi = np.maximum(t0, t1)
    t = np.where((lo > t_min) & (lo <= t_max), lo,
                 np.where((hi > t_min) & (hi <= t_max), hi, np.inf))
    return np.where(ok, t, np.inf)


def plane_t(point, normal, ox, oy, oz, dx, dy, dz, t_min, t_max):
    denom = dx * normal[0] + dy * normal[1] + dz * normal[2]
    num = (point[0] - ox) * normal[0] + (point[1] - oy) * normal[1] + (point[2] - oz) * normal[2]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = num / denom
    inside = (denom != 0.0) & (t > t_min) & (t <= t_max)
    return np.where(inside, t, np.inf)


def object_t(sa: SceneArrays, i, ox, oy, oz, dx, dy, dz, t_min, t_max):
    if sa.kinds[i] == SPHERE:
        return sphere_t(sa.anchors[i], sa.radii[i], ox, oy, oz, dx, dy, dz, t_min, t_max)
    return plane_t(sa.anchors[i], sa.normals[i], ox, oy, oz, dx, dy, dz, t_min, t_max)


def nearest_hit(sa: SceneArrays, ox, oy, oz, dx, dy, dz):
    best_t = np.full(ox.shape, np.inf)
    best_i = np.full(ox.shape, -1, dtype=np.int64)
    for i in range(sa.kinds.shape[0]):
        t = object_t(sa, i, ox, oy, oz, dx, dy, dz, 0.0, np.inf)
        closer = t < best_t
        best_t = np.where(closer, t, best_t)
        best_i = np.where(closer, i, best_i)
    return best_i, best_t


def object_normals(sa: SceneArrays, idx, px, py, pz, dx, dy, dz):
    is_sphere = sa.kinds[idx] == SPHERE
    anchors = sa.anchors[idx]
    radius = np.where(is_sphere, sa.radii[idx], 1.0)
    nx = np.where(is_sphere, (px - anchors[:, 0]) / radius, sa.normals[idx, 0])
    ny = np.where(is_sphere, (py - anchors[:, 1]) / radius, sa.normals[idx, 1])
    nz = np.where(is_sphere, (pz - anchors[:, 2]) / radius, sa.normals[idx, 2])
    back = nx * dx + ny * dy + nz * dz > 0.0
    return np.where(back, -nx, nx), np.where(back, -ny, ny), np.where(back, -nz, nz), ~back


def occluded(sa: SceneArrays, px, py, pz, lx, ly, lz, dist):
    eps = sa.epsilon
    ox = px + eps * lx
    oy = py + eps * ly
    oz = pz + eps * lz
    blocked = np.zeros(px.shape, dtype=bool)
    for i in range(sa.kinds.shape[0]):
        t = object_t(sa, i, ox, oy, oz, lx, ly, lz, 0.0, dist)
        blocked |= t < dist
    return blocked


def _libm_pow(base, exponent):
    return np.fromiter(map(math.pow, base.tolist(), exponent.tolist()), dtype=np.float64, count=base.size)


def shade(sa: SceneArrays, px, py, pz, nx, ny, nz, mats, vx, vy, vz):
    m = sa.material_table[mats]
    r = m[:, AMB].copy()
    g = m[:, AMB + 1].copy()
    b = m[:, AMB + 2].copy()
    for li in range(sa.light_positions.shape[0]):
        lx = sa.light_positions[li, 0] - px
        ly = sa.light_positions[li, 1] - py
        lz = sa.light_positions[li, 2] - pz
        dist = np.sqrt(lx * lx + ly * ly + lz * lz)
        valid = dist != 0.0
        safe = np.where(valid, dist, 1.0)
        ldx = lx / safe
        ldy = ly / safe
        ldz = lz / safe
        active = valid & ~occluded(sa, px, py, pz, ldx, ldy, ldz, dist)
        ndotl = nx * ldx + ny * ldy + nz * ldz
        diff = np.where(ndotl > 0.0, ndotl, 0.0)
        # reflect(-l, n)
        k = 2.0 * (-ldx * nx + -ldy * ny + -ldz * nz)
        rx = -ldx - k * nx
        ry = -ldy - k * ny
        rz = -ldz - k * nz
        rdotv = rx * vx + ry * vy + rz * vz
        spec = np.zeros(px.shape)
        lit = rdotv > 0.0
        if lit.any():
            spec[lit] = _libm_pow(rdotv[lit], m[lit, SHININESS])
        lc_r, lc_g, lc_b = sa.light_colors[li]
        r = np.where(active, r + m[:, DIF] * lc_r * diff, r)
        g = np.where(active, g + m[:, DIF + 1] * lc_g * diff, g)
        b = np.where(active, b + m[:, DIF + 2] * lc_b * diff, b)
        r = np.where(active, r + m[:, SPE] * lc_r * spec, r)
        g = np.where(active, g + m[:, SPE + 1] * lc_g * spec, g)
        b = np.where(active, b + m[:, SPE + 2] * lc_b * spec, b)
    return r, g, b


def _trace(sa: SceneArrays, ox, oy, oz, dx, dy, dz, depth):
    n = ox.shape[0]
    out = np.empty((n, 3))
    out[:] = sa.background
    if n == 0:
        return out
    idx, t = nearest_hit(sa, ox, oy, oz, dx, dy, dz)
    h = np.flatnonzero(idx >= 0)
    if h.size == 0:
        return out
    ox, oy, oz, dx, dy, dz, t, idx = ox[h], oy[h], oz[h], dx[h], dy[h], dz[h], t[h], idx[h]
    px = ox + t * dx
    py = oy + t * dy
    pz = oz + t * dz
    nx, ny, nz, front = object_normals(sa, idx, px, py, pz, dx, dy, dz)
    mats = sa.materials[idx]
    r, g, b = shade(sa, px, py, pz, nx, ny, nz, mats, -dx, -dy, -dz)
    if depth > 0:
        eps = sa.epsilon
        kr = sa.material_table[mats, KR]
        kt = sa.material_table[mats, KT]
        ior = sa.material_table[mats, IOR]
        w_reflect = kr.copy()

        tm = np.flatnonzero(kt > 0.0)
        transmit = np.zeros(0, dtype=np.int64)
        if tm.size:
            eta = np.where(front[tm], 1.0 / ior[tm], ior[tm])
            tdx, tdy, tdz = dx[tm], dy[tm], dz[tm]
            tnx, tny, tnz = nx[tm], ny[tm], nz[tm]
            c = -(tdx * tnx + tdy * tny + tdz * tnz)
            sin2_t = eta * eta * (1.0 - c * c)
            tir = sin2_t > 1.0
            w_reflect[tm[tir]] = kr[tm[tir]] + kt[tm[tir]]
            ok = ~tir
            transmit = tm[ok]
            eta, c, sin2_t = eta[ok], c[ok], sin2_t[ok]
            k = eta * c - np.sqrt(1.0 - sin2_t)
            rdx = eta * tdx[ok] + k * tnx[ok]
            rdy = eta * tdy[ok] + k * tny[ok]
            rdz = eta * tdz[ok] + k * tnz[ok]
            tc = _trace(sa, px[transmit] + eps * rdx, py[transmit] + eps * rdy,
                        pz[transmit] + eps * rdz, rdx, rdy, rdz, depth - 1)

        rm = np.flatnonzero(w_reflect > 0.0)
        if rm.size:
            sdx, sdy, sdz = dx[rm], dy[rm], dz[rm]
            snx, sny, snz = nx[rm], ny[rm], nz[rm]
            k = 2.0 * (sdx * snx + sdy * sny + sdz * snz)
            qx = sdx - k * snx
            qy = sdy - k * sny
            qz = sdz - k * snz
            rc = _trace(sa, px[rm] + eps * qx, py[rm] + eps * qy, pz[rm] + eps * qz, qx, qy, qz, depth - 1)
            w = w_reflect[rm]
            r[rm] = r[rm] + w * rc[:, 0]
            g[rm] = g[rm] + w * rc[:, 1]
            b[rm] = b[rm] + w * rc[:, 2]
        if transmit.size:
            w = kt[transmit]
            r[transmit] = r[transmit] + w * tc[:, 0]
            g[transmit] = g[transmit] + w * tc[:, 1]
            b[transmit] = b[transmit] + w * tc[:, 2]
    out[h, 0] = r
    out[h, 1] = g
    out[h, 2] = b
    return out


def trace_rays(sa: SceneArrays, origins: np.ndarray, directions: np.ndarray, depth: int) -> np.ndarray:
    """Trace a batch of rays; returns an (n, 3) array of linear RGB."""
    o = np.ascontiguousarray(origins, dtype=np.float64)
    d = np.ascontiguousarray(directions, dtype=np.float64)
    return _trace(sa, o[:, 0], o[:, 1], o[:, 2], d[:, 0], d[:, 1], d[:, 2], depth)


def simplified_rays(sa: SceneArrays, origins: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Last-hit-wins flat colouring for a batch of rays."""
    ox, oy, oz = origins[:, 0], origins[:, 1], origins[:, 2]
    dx, dy, dz = directions[:, 0], directions[:, 1], directions[:, 2]
    object_hit = np.full(ox.shape, -1, dtype=np.int64)
    for i in range(sa.kinds.shape[0]):
        t = object_t(sa, i, ox, oy, oz, dx, dy, dz, 0.0, np.inf)
        object_hit = np.where(t < np.inf, i, object_hit)
    out = np.empty((ox.shape[0], 3))
    out[:] = sa.background
    hit = object_hit >= 0
    out[hit] = sa.material_table[sa.materials[object_hit[hit]], DIF:DIF + 3]
    return out
