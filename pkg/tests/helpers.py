"""Hand-built instances shared across test modules."""

import numpy as np

from kgl.bundle import HilbertBundle
from kgl.kernel import OpKernel
from kgl.sgpd import LeftAction, StarSemigroupoid


def z2_group():
    """Two-element group as a one-symbol star-semigroupoid."""
    return StarSemigroupoid(
        symbols=("s",),
        elements=("e", "g"),
        d={"e": "s", "g": "s"},
        c={"e": "s", "g": "s"},
        compose={("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"},
        star={"e": "e", "g": "g"},
        units={"s": "e"},
    )


def z2_swap(points=("x1", "x2")):
    """The swap action of the two-element group on two points."""
    sg = z2_group()
    a, b = points
    act = LeftAction(
        sg,
        base=points,
        anchor={a: "s", b: "s"},
        act={("e", a): a, ("e", b): b, ("g", a): b, ("g", b): a},
    )
    return sg, act


def scalar_bundle(points):
    return HilbertBundle(points=tuple(points), dim={x: 1 for x in points})


def scalar_kernel(points, entries):
    """Kernel with 1x1 blocks; entries maps (x, y) to a scalar."""
    bundle = scalar_bundle(points)
    blocks = {
        xy: np.array([[v]], dtype=np.complex128) for xy, v in entries.items()
    }
    return OpKernel(bundle, blocks)


def circulant_kernel(a, b, points=("x1", "x2")):
    """Scalar kernel on two points with part Gram [[a, b], [b, a]]."""
    p, q = points
    return scalar_kernel(points, {(p, p): a, (q, q): a, (p, q): b, (q, p): b})


def swap_gram_kernel(points=("x1", "x2")):
    """Scalar kernel whose single part Gram is [[0, 1], [1, 0]]."""
    return circulant_kernel(0.0, 1.0, points)


def merge_monoid():
    """Idempotent monoid {e, t} with t collapsing x1 onto x0."""
    sg = StarSemigroupoid(
        symbols=("s",),
        elements=("e", "t"),
        d={"e": "s", "t": "s"},
        c={"e": "s", "t": "s"},
        compose={("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "t"},
        star={"e": "e", "t": "t"},
        units={"s": "e"},
    )
    act = LeftAction(
        sg,
        base=("x0", "x1"),
        anchor={"x0": "s", "x1": "s"},
        act={("e", "x0"): "x0", ("e", "x1"): "x1", ("t", "x0"): "x0", ("t", "x1"): "x0"},
    )
    return sg, act


def trivial_group():
    sg = StarSemigroupoid(
        symbols=("s",),
        elements=("e",),
        d={"e": "s"},
        c={"e": "s"},
        compose={("e", "e"): "e"},
        star={"e": "e"},
        units={"s": "e"},
    )
    return sg
