"""Finite base sets with finite-dimensional fibers, and their sections.

A bundle assigns to every point of a finite base set a coordinate fiber of
fixed dimension. Sections are stored sparsely: points outside the support
map are semantically zero. A fixed total order on points (their input
order) determines all stacked block layouts downstream, which is what
makes factorizations reproducible.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BundleMismatch,
    DimMismatch,
    SupportOutsidePart,
    UnknownPoint,
)

__all__ = [
    "HilbertBundle",
    "Section",
    "PartIndex",
    "part_index",
    "delta_section",
    "section_from_dict",
    "inner0",
    "stack",
    "unstack",
]


@dataclass(frozen=True)
class HilbertBundle:
    """Ordered point labels with a positive fiber dimension per point."""

    points: tuple
    dim: dict

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise ValueError("point labels must be unique")
        dims = {x: int(d) for x, d in dict(self.dim).items()}
        object.__setattr__(self, "dim", dims)
        for x in pts:
            if x not in dims:
                raise UnknownPoint(f"no fiber dimension declared for point {x!r}")
            if dims[x] < 1:
                raise ValueError(f"fiber dimension at {x!r} must be >= 1")
        extra = set(dims) - set(pts)
        if extra:
            raise UnknownPoint(f"dims declared for unknown points {sorted(map(repr, extra))}")

    def require(self, x):
        if x not in self.dim:
            raise UnknownPoint(f"unknown point {x!r}")
        return x


def _as_fiber_vector(v) -> np.ndarray:
    return np.asarray(v, dtype=np.complex128).reshape(-1)


@dataclass(eq=False)
class Section:
    """Finitely supported assignment of a fiber vector to each point."""

    bundle: HilbertBundle
    support: dict = field(default_factory=dict)

    def at(self, x) -> np.ndarray:
        """Fiber value at x; zero vector if unsupported."""
        self.bundle.require(x)
        if x in self.support:
            return self.support[x]
        return np.zeros(self.bundle.dim[x], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class PartIndex:
    """Block layout of one part: point order, offsets, total dimension."""

    bundle: HilbertBundle
    part: tuple
    offsets: dict
    total_dim: int

    def slice_of(self, x):
        off = self.offsets[x]
        return slice(off, off + self.bundle.dim[x])


def part_index(bundle: HilbertBundle, points) -> PartIndex:
    """Build the stacked-coordinate index of a part, in bundle point order."""
    pts = set(bundle.require(x) for x in points)
    order = [x for x in bundle.points if x in pts]
    offsets = {}
    off = 0
    for x in order:
        offsets[x] = off
        off += bundle.dim[x]
    return PartIndex(bundle=bundle, part=tuple(order), offsets=offsets, total_dim=off)


def delta_section(bundle: HilbertBundle, x, h) -> Section:
    """Section supported on the single point x with value h (empty if h = 0)."""
    bundle.require(x)
    v = _as_fiber_vector(h)
    if v.size != bundle.dim[x]:
        raise DimMismatch(f"vector of length {v.size} into fiber of dim {bundle.dim[x]} at {x!r}")
    if not v.any():
        return Section(bundle, {})
    return Section(bundle, {x: v.copy()})


def section_from_dict(bundle: HilbertBundle, values: dict) -> Section:
    """Assemble a section from a point -> vector mapping, dropping zeros."""
    out = {}
    for x, h in values.items():
        bundle.require(x)
        v = _as_fiber_vector(h)
        if v.size != bundle.dim[x]:
            raise DimMismatch(f"vector of length {v.size} into fiber of dim {bundle.dim[x]} at {x!r}")
        if v.any():
            out[x] = v.copy()
    return Section(bundle, out)


def inner0(f: Section, g: Section) -> complex:
    """Pointwise sum of fiber inner products, second argument conjugated."""
    if f.bundle != g.bundle:
        raise BundleMismatch("sections live over different bundles")
    acc = 0.0 + 0.0j
    for x in f.support:
        if x in g.support:
            acc += complex(np.vdot(g.support[x], f.support[x]))
    return acc


def stack(f: Section, idx: PartIndex) -> np.ndarray:
    """Stacked coordinate vector of a section supported inside the part."""
    outside = [x for x in f.support if x not in idx.offsets]
    if outside:
        raise SupportOutsidePart(f"section supported at {outside[0]!r} outside the part")
    v = np.zeros(idx.total_dim, dtype=np.complex128)
    for x, h in f.support.items():
        v[idx.slice_of(x)] = h
    return v


def unstack(v, idx: PartIndex) -> Section:
    """Inverse of stack; all-zero blocks become unsupported points."""
    a = np.asarray(v, dtype=np.complex128).reshape(-1)
    if a.size != idx.total_dim:
        raise DimMismatch(f"vector of length {a.size} against part of total dim {idx.total_dim}")
    out = {}
    for x in idx.part:
        block = a[idx.slice_of(x)]
        if block.any():
            out[x] = block.copy()
    return Section(idx.bundle, out)
