import csv
import io
import json
import math
import xml.etree.ElementTree as ET

import pytest

from zdeform.config import builtin
from zdeform.grid import GridSpec, default_spec, generate, reference_grid
from zdeform.serialize import CSV_COLUMNS, dumps, fmt_float, grid_to_csv, grid_to_dict
from zdeform.svg import HEIGHT, MARGIN, WIDTH, grid_to_svg, nice_ticks

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def grid():
    return generate(default_spec(builtin("real_damping")))


def test_fmt_float():
    assert fmt_float(1.0) == "1.0"
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(1e-20) == "9.9999999999999995e-21"
    assert float(fmt_float(1e-20)) == 1e-20
    assert fmt_float(math.nan) == "null"
    assert fmt_float(math.inf) == "null"


def test_dumps_valid_json():
    obj = {"a": [1.5, 2, None, True], "b": {"c": complex(1, -2)}, "d": [], "e": [[1.0]]}
    back = json.loads(dumps(obj))
    assert back == {"a": [1.5, 2, None, True], "b": {"c": [1.0, -2.0]}, "d": [], "e": [[1.0]]}
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_dumps_float_roundtrip():
    vals = [0.1, 1 / 3, 2.5e-300, -7.0, 123456789.123456789]
    assert json.loads(dumps(vals)) == vals


def test_grid_json(grid):
    doc = json.loads(dumps(grid_to_dict(grid)))
    assert doc["format"] == "zdeform.grid/1"
    assert doc["form"]["name"] == "real_damping"
    assert doc["form"]["variant"] == "reconstructed"
    assert len(doc["iso_k"]) == 12 and len(doc["iso_b"]) == 11
    assert len(doc["nodes"]) == 132
    assert doc["landmarks"]["boundary_B0_crossing"]["K"] == pytest.approx(0.5, abs=1e-9)
    assert doc["boundary"]["vertex_fields"] == ["K", "B", "theta"]
    node = doc["nodes"][0]
    assert set(node) == {"k", "b", "K", "B", "stable", "representable", "metrics", "error"}


def test_grid_csv(grid):
    text = grid_to_csv(grid)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(CSV_COLUMNS)
    assert ",".join(rows[0]) == "k,b,K,B,stable,representable,identity_deviation,orthogonality_angle_deg"
    assert len(rows) == 133
    for r in rows[1:]:
        assert r[4] in ("true", "false")
        float(r[6])


def test_csv_failed_node():
    spec = GridSpec(builtin("no_delay"), (9.6,), (0.0,), samples_per_curve=4)
    rows = grid_to_csv(generate(spec)).splitlines()
    assert rows[1] == "9.6,0,nan,nan,,false,nan,nan"


def test_outputs_deterministic():
    spec = default_spec(builtin("unit_delay"))
    a, b = generate(spec), generate(spec)
    assert dumps(grid_to_dict(a)) == dumps(grid_to_dict(b))
    assert grid_to_csv(a) == grid_to_csv(b)
    assert grid_to_svg(a) == grid_to_svg(b)


def test_nice_ticks():
    assert nice_ticks(0, 1) == pytest.approx([0, 0.2, 0.4, 0.6, 0.8, 1.0])
    assert nice_ticks(-2.3, 0.4) == pytest.approx([-2.0, -1.5, -1.0, -0.5, 0.0])
    assert nice_ticks(1, 1) == [1]


def test_svg_structure(grid):
    ref = reference_grid(grid.spec)
    root = ET.fromstring(grid_to_svg(grid, reference=ref))
    assert root.get("width") == str(WIDTH) and root.get("height") == str(HEIGHT)
    assert root.get("viewBox") == f"0 0 {WIDTH} {HEIGHT}"
    classes = [e.get("class") for e in root.iter()]
    assert classes.count("iso-k") >= 12
    assert classes.count("iso-b") >= 11
    assert classes.count("boundary") == 1
    assert classes.count("reference") == 23
    style = root.find(f"{SVG}style").text
    for cls in ("iso-k", "iso-b", "boundary", "reference"):
        assert f".{cls} " in style
    # every curve vertex sits at 3 decimals
    for pl in root.iter(f"{SVG}polyline"):
        for pair in pl.get("points").split():
            for v in pair.split(","):
                assert len(v.split(".")[1]) == 3


def test_svg_without_reference(grid):
    root = ET.fromstring(grid_to_svg(grid))
    assert not [e for e in root.iter() if e.get("class") == "reference"]


def test_svg_total_axis_shift(grid):
    virt = ET.fromstring(grid_to_svg(grid, b_axis="virtual"))
    tot = ET.fromstring(grid_to_svg(grid, b_axis="total"))
    texts = [t.text for t in tot.iter(f"{SVG}text")]
    assert any("B + b0" in (t or "") for t in texts)
    assert ET.tostring(virt) != ET.tostring(tot)


def test_svg_curves_in_frame(grid):
    root = ET.fromstring(grid_to_svg(grid))
    for pl in root.iter(f"{SVG}polyline"):
        if pl.get("class") in ("iso-k", "iso-b"):
            for pair in pl.get("points").split():
                x, y = map(float, pair.split(","))
                assert MARGIN - 1e-9 <= x <= WIDTH - MARGIN + 1e-9
                assert MARGIN - 1e-9 <= y <= HEIGHT - MARGIN + 1e-9


def test_png_render(tmp_path, grid):
    from zdeform.deformation import stability_boundary
    from zdeform.plotting import plot_boundaries, plot_grid

    p = tmp_path / "g.png"
    plot_grid(grid, p, reference=reference_grid(grid.spec), b_axis="total")
    assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    q = tmp_path / "b.png"
    plot_boundaries({n: stability_boundary(builtin(n))[0] for n in ("unit_delay", "real_damping")}, q)
    assert q.stat().st_size > 1000
