import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from raybench import kernels
from raybench.geometry import HitRecord, Plane, Sphere
from raybench.renderer import (RenderSettings, in_shadow, local_shade, primary_rays, quantize, ray_trace,
                               ray_trace_simplified, render_image, render_image_profiled, render_simplified_image)
from raybench.scene import Camera, Light, Material, Scene, generate_sweep_scene
from raybench.vecmath import RGBColor, Ray, Vec3

import reference_tracer

GOLDEN = Path(__file__).resolve().parent / "golden" / "simple_320x240.tga"
BLACK = RGBColor(0.0, 0.0, 0.0)
WHITE = RGBColor(1.0, 1.0, 1.0)


def camera(w=1, h=1):
    return Camera(Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(0, 1, 0), 60.0, w, h)


def red_sphere_scene(**mat):
    m = Material(RGBColor(0.1, 0.1, 0.1), RGBColor(0.8, 0.0, 0.0), mat.pop("specular", BLACK), **mat)
    return Scene(camera(), [Sphere(Vec3(0, 0, 5), 1.0, "m")], [Light(Vec3(0, 0, 0), WHITE)], {"m": m})


AXIS = Ray(Vec3(0.0, 0.0, 0.0), Vec3(0.0, 0.0, 1.0))


def test_miss_returns_background():
    s = Scene(camera(), background=RGBColor(0.2, 0.4, 0.6))
    assert ray_trace(s, AXIS, 5) == (0.2, 0.4, 0.6)


def test_diffuse_pole_value():
    s = red_sphere_scene()
    assert ray_trace(s, AXIS, 5) == pytest.approx((0.9, 0.1, 0.1), abs=1e-12)
    assert render_image(s).get_pixel(0, 0) == (230, 26, 26)


def test_depth_zero_skips_recursion():
    mirror = Material(RGBColor(0.0, 0.0, 0.0), RGBColor(0.5, 0.5, 0.5), BLACK, reflectivity=1.0)
    wall = Material(RGBColor(1.0, 1.0, 1.0), BLACK, BLACK)
    s = Scene(camera(), [Sphere(Vec3(0, 0, 5), 1.0, "mirror"), Plane(Vec3(0, 0, -3), Vec3(0, 0, 1), "wall")],
              [Light(Vec3(0, 0, 1), WHITE)], {"mirror": mirror, "wall": wall})
    local = ray_trace(s, AXIS, 0)
    assert local == pytest.approx((0.5, 0.5, 0.5), abs=1e-12)
    # one bounce: the mirror sends the ray back to the fully ambient wall
    assert ray_trace(s, AXIS, 1) == pytest.approx((1.5, 1.5, 1.5), abs=1e-12)
    with pytest.raises(ValueError):
        ray_trace(s, AXIS, -1)


def _pole_hit():
    return HitRecord(4.0, Vec3(0.0, 0.0, 4.0), Vec3(0.0, 0.0, -1.0), "m", True)


def test_local_shade_all_lights_blocked():
    s = red_sphere_scene()
    s.objects.append(Sphere(Vec3(0, 0, 2), 0.5, "m"))
    assert local_shade(_pole_hit(), Vec3(0, 0, -1), s) == pytest.approx((0.1, 0.1, 0.1))


def test_local_shade_grazing_light_has_no_diffuse():
    s = red_sphere_scene()
    s.lights = [Light(Vec3(5.0, 0.0, 4.0), WHITE)]
    assert local_shade(_pole_hit(), Vec3(0, 0, -1), s) == pytest.approx((0.1, 0.1, 0.1))


def test_local_shade_specular_at_normal_incidence():
    s = red_sphere_scene(specular=RGBColor(0.3, 0.2, 0.1), shininess=50.0)
    s.lights = [Light(Vec3(0, 0, 0), RGBColor(1.0, 0.5, 0.25))]
    c = local_shade(_pole_hit(), Vec3(0, 0, -1), s)
    # ambient + diffuse * light + specular * light * 1^shininess
    assert c == pytest.approx((0.1 + 0.8 + 0.3, 0.1 + 0.0 + 0.1, 0.1 + 0.0 + 0.025), abs=1e-12)


def test_in_shadow():
    light = Light(Vec3(0, 10, 0), WHITE)
    empty = Scene(camera())
    assert not in_shadow(Vec3(0, 0, 0), light, empty)
    m = {"m": Material(BLACK, WHITE, BLACK)}
    middle = Scene(camera(), [Sphere(Vec3(0, 5, 0), 2.0, "m")], [light], m)
    assert in_shadow(Vec3(0, 0, 0), light, middle)
    behind = Scene(camera(), [Sphere(Vec3(0, 15, 0), 2.0, "m")], [light], m)
    assert not in_shadow(Vec3(0, 0, 0), light, behind)


def test_background_pixel_quantization():
    s = Scene(camera(), background=RGBColor(1.0, 0.0, 0.0))
    assert render_image(s).get_pixel(0, 0) == (255, 0, 0)
    assert quantize(np.array([-0.5, 0.0, 0.5, 1.0, 7.0, 0.998])).tolist() == [0, 0, 128, 255, 255, 254]


def test_large_frame_dimensions():
    s = Scene(Camera(Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(0, 1, 0), 60.0, 1024, 768))
    im = render_image(s)
    assert (im.width, im.height) == (1024, 768)


def test_primary_rays_are_unit_and_centred():
    o, d = primary_rays(Camera(Vec3(1, 2, 3), Vec3(1, 2, 4), Vec3(0, 1, 0), 90.0, 3, 3))
    assert np.allclose(np.linalg.norm(d, axis=1), 1.0, atol=1e-12)
    assert np.allclose(o, [1, 2, 3])
    assert np.allclose(d[4], [0, 0, 1])
    # row 0 is the top of the image
    assert d[1, 1] > 0 and d[7, 1] < 0


def test_simple_frame_matches_golden(simple_scene):
    assert render_image(simple_scene, parallel=False).encode() == GOLDEN.read_bytes()


def test_backends_and_parallelism_agree(simple_scene, complex_scene):
    for scene in (simple_scene, complex_scene):
        scene.camera = Camera(scene.camera.eye, scene.camera.look_at, scene.camera.up,
                              scene.camera.vertical_fov, 96, 72)
        ref = render_image(scene, backend="numba", parallel=False)
        assert render_image(scene, backend="numba", parallel=True) == ref
        assert render_image(scene, backend="numpy") == ref


def test_numpy_backend_runs_without_numba(tmp_path):
    code = ("import sys; from raybench.fixtures import fixture_path; from raybench.scene import load_scene;"
            "from raybench.renderer import render_image;"
            f"render_image(load_scene(fixture_path('simple.scene'))).save(r'{tmp_path / 'np.tga'}');"
            "print('numba' in sys.modules)")
    env = dict(os.environ, RAYBENCH_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    assert (tmp_path / "np.tga").read_bytes() == GOLDEN.read_bytes()


@pytest.mark.parametrize("name", ["simple_scene", "complex_scene"])
def test_kernel_matches_reference_tracer(name, request):
    scene = request.getfixturevalue(name)
    sa = kernels.pack_scene(scene)
    rng = np.random.default_rng(9)
    cam = scene.camera
    for _ in range(150):
        i, j = int(rng.integers(cam.width)), int(rng.integers(cam.height))
        o, d = reference_tracer.pixel_ray(cam, i, j)
        expect = reference_tracer.trace(scene, o, d, scene.max_depth)
        got = kernels.trace(sa, Vec3(*o), Vec3(*d), scene.max_depth)
        assert tuple(got) == pytest.approx(tuple(expect), abs=1e-9), (i, j)


def test_camera_rays_match_reference(simple_scene):
    _, d = primary_rays(simple_scene.camera)
    w = simple_scene.camera.width
    for i, j in [(0, 0), (319, 0), (160, 120), (7, 201)]:
        assert d[j * w + i] == pytest.approx(reference_tracer.pixel_ray(simple_scene.camera, i, j)[1], abs=1e-12)


def test_total_internal_reflection_folds_weights():
    glass = Material(RGBColor(0.2, 0.2, 0.2), BLACK, BLACK, reflectivity=0.1, transparency=0.9, ior=1.5)
    s = Scene(camera(), [Sphere(Vec3(0, 0, 0), 1.0, "g")], [], {"g": glass},
              background=RGBColor(0.5, 0.5, 0.5))
    sa = kernels.pack_scene(s)
    # radial exit: local 0.2 + 0.1 * (far wall, local only) + 0.9 * background
    radial = kernels.trace(sa, Vec3(0.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0), 1)
    assert tuple(radial) == pytest.approx((0.2 + 0.1 * 0.2 + 0.9 * 0.5,) * 3, abs=1e-12)
    # chord at height sin 60: the wall is met 60 degrees off the normal and 1.5 sin 60 > 1,
    # so the reflected ray carries the full 0.1 + 0.9 weight and nothing is transmitted
    h = 3 ** 0.5 / 2
    tir = kernels.trace(sa, Vec3(0.0, h, 0.0), Vec3(1.0, 0.0, 0.0), 1)
    assert tuple(tir) == pytest.approx((0.2 + 1.0 * 0.2,) * 3, abs=1e-12)
    assert tuple(tir) == pytest.approx(tuple(reference_tracer.trace(s, (0.0, h, 0.0), (1.0, 0.0, 0.0), 1)), abs=1e-12)


def test_settings_override_depth(simple_scene):
    shallow = render_image(simple_scene, RenderSettings.for_scene(simple_scene, max_depth=0))
    assert shallow != render_image(simple_scene)
    with pytest.raises(ValueError):
        RenderSettings(max_depth=-1)
    with pytest.raises(ValueError):
        RenderSettings(epsilon=0.0)


def test_simplified_tracer_last_hit_wins():
    mats = {"red": Material(BLACK, RGBColor(1, 0, 0), BLACK), "blue": Material(BLACK, RGBColor(0, 0, 1), BLACK)}
    assert ray_trace_simplified([], AXIS, mats) is None
    assert ray_trace_simplified([Sphere(Vec3(0, 0, 5), 1.0, "red")], AXIS, mats) == (1, 0, 0)
    both = [Sphere(Vec3(0, 0, 5), 2.0, "red"), Sphere(Vec3(0, 0, 5), 1.0, "blue")]
    assert ray_trace_simplified(both, AXIS, mats) == (0, 0, 1)
    # order, not distance, decides
    assert ray_trace_simplified(both[::-1], AXIS, mats) == (1, 0, 0)


def test_simplified_frame_agrees_with_shape_loop():
    scene = generate_sweep_scene(30, seed=4, width=24, height=18)
    im = render_simplified_image(scene)
    assert render_simplified_image(scene, backend="numpy") == im
    assert render_simplified_image(scene, parallel=True) == im
    origins, dirs = primary_rays(scene.camera)
    for k in range(0, len(dirs), 7):
        c = ray_trace_simplified(scene.objects, Ray(Vec3(*origins[k]), Vec3(*dirs[k])), scene.materials)
        c = scene.background if c is None else c
        expect = tuple(int(v) for v in quantize(np.array(c)))
        assert im.get_pixel(k % 24, k // 24) == expect


def test_profiled_render_phases(simple_scene):
    image, phases = render_image_profiled(simple_scene)
    assert image.encode() == GOLDEN.read_bytes()
    assert set(phases) == {"rays", "trace", "image", "total"}
    assert all(v >= 0 for v in phases.values())
    assert phases["total"] >= phases["trace"]
