import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raybench.fixtures import fixture_path
from raybench.geometry import Plane, Sphere
from raybench.scene import (Camera, EllipticPath, Material, SceneError, generate_sweep_scene, load_scene,
                            parse_scene, scene_object_count, serialize_scene)
from raybench.vecmath import RGBColor, Vec3, dot, length

CAMERA = "camera 0 0 0  0 0 1  0 1 0  60 32 24\n"


def test_minimal_scene():
    s = parse_scene(CAMERA + "background 0.2 0.3 0.4\n")
    assert scene_object_count(s) == 0
    assert s.lights == []
    assert s.background == (0.2, 0.3, 0.4)
    assert s.max_depth == 5


def test_fixture_object_counts(simple_scene, complex_scene):
    assert scene_object_count(simple_scene) == 5
    assert (len(simple_scene.spheres), len(simple_scene.planes)) == (4, 1)
    assert scene_object_count(complex_scene) == 56


def test_object_ids_follow_declaration_order(simple_scene):
    assert simple_scene.object_ids() == ["o1", "o2", "o3", "o4", "o5"]
    assert simple_scene.object_by_id("o5") is simple_scene.objects[4]
    with pytest.raises(KeyError):
        simple_scene.object_by_id("o6")


def test_undefined_material_is_named():
    with pytest.raises(SceneError, match="steel"):
        parse_scene(CAMERA + "sphere steel 0 0 5 1\n")


@pytest.mark.parametrize("body, line, fragment", [
    ("bogus 1 2 3\n", 2, "unknown keyword"),
    ("sphere m 0 0\n", 2, "takes 5 arguments"),
    ("light 0 0 x 1 1 1\n", 2, "expected a number"),
    ("light 0 0 nan 1 1 1\n", 2, "non-finite"),
    ("light 0 0 1e300 1 1 1\n", 2, "magnitude"),
    ("\n\nmaterial m 0 0 0 1 1 1 0 0 0 0.5 0 0 1\n", 4, "shininess"),
    ("material m 0 0 0 1 1 1 0 0 0 1 0.7 0.7 1\n", 2, "exceed 1"),
    ("material m 0 0 0 1 1 1 0 0 0 1 0 0 1\nmaterial m 0 0 0 1 1 1 0 0 0 1 0 0 1\n", 3, "duplicate"),
    ("maxdepth -1\n", 2, "maxdepth"),
    ("background -1 0 0\n", 2, "background"),
    ("material m 0 0 0 1 1 1 0 0 0 1 0 0 1\nsphere m 0 0 5 0\n", 3, "radius"),
])
def test_errors_carry_line_numbers(body, line, fragment):
    with pytest.raises(SceneError, match=fragment) as info:
        parse_scene(CAMERA + body)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_camera_validation():
    with pytest.raises(SceneError, match="no camera"):
        parse_scene("background 0 0 0\n")
    with pytest.raises(SceneError, match="coincide"):
        parse_scene("camera 1 1 1  1 1 1  0 1 0  60 4 4\n")
    with pytest.raises(SceneError, match="parallel"):
        parse_scene("camera 0 0 0  0 1 0  0 1 0  60 4 4\n")
    with pytest.raises(SceneError, match="fov"):
        parse_scene("camera 0 0 0  0 0 1  0 1 0  180 4 4\n")
    with pytest.raises(SceneError, match="sides"):
        parse_scene("camera 0 0 0  0 0 1  0 1 0  60 0 4\n")


def test_path_validation_and_orthonormal_axes():
    base = CAMERA + "material m 0 0 0 1 1 1 0 0 0 1 0 0 1\nsphere m 0 0 5 1\n"
    with pytest.raises(SceneError, match="o2"):
        parse_scene(base + "path o2 0 0 5  1 0 0  0 1 0  1 1 8\n")
    with pytest.raises(SceneError, match="parallel"):
        parse_scene(base + "path o1 0 0 5  1 0 0  2 0.01 0  1 1 8\n")
    s = parse_scene(base + "path o1 0 0 5  2 0 0  1 3 0  1 1 8\n")
    p = s.paths[0]
    assert abs(dot(p.axis_u, p.axis_v)) < 1e-9
    assert abs(length(p.axis_u) - 1) < 1e-12 and abs(length(p.axis_v) - 1) < 1e-12


def test_comments_blank_lines_and_case():
    s = parse_scene("# header\n\n" + CAMERA.upper().replace("CAMERA", "Camera") + "  # trailing\n")
    assert s.camera.width == 32


def test_parse_bytes_rejects_bad_utf8():
    with pytest.raises(SceneError, match="UTF-8"):
        parse_scene(b"\xff\xfe camera")


def test_serialize_round_trip(simple_scene, complex_scene):
    for scene in (simple_scene, complex_scene):
        text = serialize_scene(scene)
        again = parse_scene(text)
        assert serialize_scene(again) == text
        assert again.objects == scene.objects
        assert again.materials == scene.materials
        assert again.camera == scene.camera


def test_generated_scenes():
    a = serialize_scene(generate_sweep_scene(5, seed=42))
    assert a == serialize_scene(generate_sweep_scene(5, seed=42))
    assert serialize_scene(generate_sweep_scene(5, seed=1)) != serialize_scene(generate_sweep_scene(5, seed=2))
    s = generate_sweep_scene(400, seed=42)
    assert scene_object_count(s) == 400
    assert all(isinstance(o, Sphere) for o in s.objects)
    with pytest.raises(ValueError):
        generate_sweep_scene(0, seed=0)


def test_generated_spheres_are_in_front_of_camera():
    s = generate_sweep_scene(200, seed=3, width=64, height=48)
    half_h = math.tan(math.radians(s.camera.vertical_fov) / 2)
    for o in s.spheres:
        assert o.center.z >= 6.0
        assert abs(o.center.y) <= half_h * o.center.z


def test_dataclass_validation():
    with pytest.raises(SceneError):
        Material(RGBColor(-1, 0, 0), RGBColor(0, 0, 0), RGBColor(0, 0, 0))
    with pytest.raises(SceneError):
        Material(RGBColor(0, 0, 0), RGBColor(0, 0, 0), RGBColor(0, 0, 0), ior=0.0)
    with pytest.raises(SceneError):
        EllipticPath("o1", Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), 0.0, 1.0, 4)
    cam = Camera(Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(0, 2, 0), 60.0, 4, 3)
    assert cam.up == (0.0, 1.0, 0.0)
    u, v, w = cam.basis()
    assert w == (0.0, 0.0, -1.0)
    assert abs(dot(u, v)) < 1e-15 and abs(dot(u, w)) < 1e-15


def test_load_scene_from_disk(tmp_path):
    p = tmp_path / "s.scene"
    p.write_text(CAMERA)
    assert load_scene(p).camera.height == 24
    with pytest.raises(FileNotFoundError):
        load_scene(tmp_path / "missing.scene")
    assert load_scene(fixture_path("orbit4.scene")).paths[0].steps == 4


keywords = st.sampled_from(["camera", "sphere", "plane", "light", "material", "path", "maxdepth",
                            "background", "bogus", "#"])
tokens = st.one_of(st.floats(allow_nan=True, allow_infinity=True).map(repr), st.integers().map(str),
                   st.text(alphabet="abcxyz0123456789.-+e", max_size=6))


@settings(max_examples=300)
@given(st.lists(st.tuples(keywords, st.lists(tokens, max_size=15)), max_size=8))
def test_parser_is_total(lines):
    text = "\n".join(" ".join([k, *args]) for k, args in lines)
    try:
        parse_scene(text)
    except SceneError:
        pass
