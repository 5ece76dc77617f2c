import xml.etree.ElementTree as ET

import pytest

from gridscan.data import SyntheticSpec, generate
from gridscan.errors import IoError
from gridscan.geometry import Dataset
from gridscan.manifold import build_chain, build_manifold
from gridscan.plot import emit_plot, render_svg
from gridscan.scan import AbsoluteDensity, Found, ScanConfig, scan

NS = "{http://www.w3.org/2000/svg}"


def count(svg, tag):
    return sum(1 for _ in ET.fromstring(svg.encode()).iter(NS + tag))


def test_diagonal_found_structure():
    ds = generate(SyntheticSpec("diagonal", 100, 2))
    out = scan(ds, ScanConfig(volume_limit=0.5, density=AbsoluteDensity(1)))
    assert isinstance(out, Found)
    m = build_manifold(build_chain(out.kept), 1)
    svg = render_svg(ds, out.kept, m)
    assert count(svg, "rect") == out.kept.K
    assert count(svg, "line") == out.kept.K - 1
    assert count(svg, "circle") == 100
    assert svg == render_svg(ds, out.kept, m)


def test_points_only():
    ds = generate(SyntheticSpec("uniform", 50, 2, seed=1))
    svg = render_svg(ds)
    assert count(svg, "rect") == 0 and count(svg, "line") == 0
    assert count(svg, "circle") == 50


@pytest.mark.parametrize("N", [1, 3, 5])
def test_other_dimensions(tmp_path, N):
    ds = generate(SyntheticSpec("sine-curve", 400, N, 0.05, seed=2))
    out = scan(ds, ScanConfig(volume_limit=0.5, coverage_fraction=0.8))
    assert isinstance(out, Found)
    emit_plot(ds, out.kept, build_chain(out.kept), tmp_path / "p.svg", title="<3d & more>")
    svg = (tmp_path / "p.svg").read_text()
    assert count(svg, "circle") == 400
    assert count(svg, "rect") == out.kept.K
    assert count(svg, "line") == out.kept.K - 1


def test_unwritable(tmp_path):
    with pytest.raises(IoError):
        emit_plot(generate(SyntheticSpec("uniform", 3, 2)), None, None, tmp_path / "x" / "p.svg")


def test_coincident_points_in_3d():
    svg = render_svg(Dataset([[0.5, 0.5, 0.5]] * 3))
    assert count(svg, "circle") == 3
