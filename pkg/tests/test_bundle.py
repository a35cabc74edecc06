import numpy as np
import pytest

from kgl import bundle as bd
from kgl.errors import DimMismatch, UnknownPoint


def two_point_bundle():
    return bd.HilbertBundle(points=("x1", "x2"), dim={"x1": 1, "x2": 2})


def test_bundle_validation():
    with pytest.raises(ValueError):
        bd.HilbertBundle(points=("x",), dim={"x": 0})
    with pytest.raises(UnknownPoint):
        bd.HilbertBundle(points=("x", "y"), dim={"x": 1})


def test_delta_section():
    b = two_point_bundle()
    f = bd.delta_section(b, "x1", [1.0, 0.0][:1])
    assert set(f.support) == {"x1"}
    assert np.allclose(f.at("x1"), [1.0])
    zero = bd.delta_section(b, "x1", [0.0])
    assert set(zero.support) == set()
    g = bd.delta_section(b, "x2", [1j, 0.0])
    assert np.allclose(g.at("x2"), [1j, 0.0])
    with pytest.raises(UnknownPoint):
        bd.delta_section(b, "nope", [1.0])
    with pytest.raises(DimMismatch):
        bd.delta_section(b, "x2", [1.0])


def test_inner0_frozen():
    b = bd.HilbertBundle(points=("x1", "x2"), dim={"x1": 2, "x2": 1})
    f = bd.delta_section(b, "x1", [1.0, 0.0])
    g = bd.delta_section(b, "x1", [0.0, 1.0])
    assert bd.inner0(f, g) == 0
    h = bd.HilbertBundle(points=("x1",), dim={"x1": 1})
    f3 = bd.delta_section(h, "x1", [3.0])
    assert bd.inner0(f3, f3) == pytest.approx(9.0)
    k = bd.delta_section(b, "x2", [2.0])
    assert bd.inner0(f, k) == 0  # disjoint support


def test_inner0_conjugates_second_argument():
    b = bd.HilbertBundle(points=("x",), dim={"x": 1})
    f = bd.delta_section(b, "x", [1j])
    g = bd.delta_section(b, "x", [1.0])
    # <f, g> pairs f against conjugated g
    assert bd.inner0(f, g) == pytest.approx(1j)


def test_stack_unstack_frozen():
    b = two_point_bundle()
    idx = bd.part_index(b, ("x1", "x2"))
    f = bd.delta_section(b, "x2", [5.0, 6.0])
    v = bd.stack(f, idx)
    assert np.allclose(v, [0.0, 5.0, 6.0])
    empty = bd.unstack(np.zeros(3, dtype=complex), idx)
    assert set(empty.support) == set()


def test_stack_unstack_roundtrip():
    b = two_point_bundle()
    idx = bd.part_index(b, ("x1", "x2"))
    rng = np.random.Generator(np.random.Philox(5))
    for _ in range(10):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        w = bd.stack(bd.unstack(v, idx), idx)
        assert np.allclose(v, w)


def test_part_index_subset():
    b = two_point_bundle()
    idx = bd.part_index(b, ("x2",))
    assert idx.total_dim == 2
    assert idx.slice_of("x2") == slice(0, 2)
    with pytest.raises(KeyError):
        idx.slice_of("x1")


def test_section_from_dict():
    b = two_point_bundle()
    f = bd.section_from_dict(b, {"x1": [2.0], "x2": [0.0, 1.0]})
    assert np.allclose(f.at("x1"), [2.0])
    assert np.allclose(f.at("x2"), [0.0, 1.0])
    with pytest.raises(DimMismatch):
        bd.section_from_dict(b, {"x2": [1.0]})
