"""Operator-valued kernels over a bundle, and their partition calculus.

A kernel stores one complex block per (row point, column point) pair; the
block at (x, y) is the operator from the fiber at y to the fiber at x.
Absent blocks are zero. All definiteness and symmetry notions are partial:
they read only the within-part blocks of a partition of the base set
(usually the one induced by an action's anchor map). Cross-part blocks may
be stored but are ignored by every partition-relative operation.
"""

from dataclasses import dataclass, field

import numpy as np

from . import numlin
from .bundle import HilbertBundle, PartIndex, Section, part_index, stack
from .errors import (
    BundleMismatch,
    CrossPartSupport,
    NotHermitian,
    NotPSD,
    OrbitBundleNotTrivial,
    ShapeMismatch,
    UnknownPoint,
)
from .numlin import DEFAULT_TOL, Tolerances, frob, herm_eig, opnorm, psd_root_factor
from .sgpd import LeftAction, orbit_trivial_bundle

__all__ = [
    "OpKernel",
    "Partition",
    "ConvBlocks",
    "partition_from_anchor",
    "partition_from_action",
    "single_partition",
    "zero_kernel",
    "identity_kernel",
    "kernel_lincomb",
    "kernel_from_part_grams",
    "adjoint_kernel",
    "re_im",
    "conv_blocks",
    "is_partially_hermitian",
    "is_partially_psd",
    "kernel_inner",
    "dominates",
    "shift_map",
    "shift_maps",
    "is_invariant",
    "bounded_shift_constant",
]


@dataclass(eq=False)
class OpKernel:
    """Sparse block kernel; block (x, y) has shape (dim x, dim y)."""

    bundle: HilbertBundle
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        checked = {}
        for (x, y), m in self.blocks.items():
            self.bundle.require(x)
            self.bundle.require(y)
            a = numlin.as_cmatrix(m)
            want = (self.bundle.dim[x], self.bundle.dim[y])
            if a.shape != want:
                raise ShapeMismatch(f"block ({x!r},{y!r}) has shape {a.shape}, expected {want}")
            checked[(x, y)] = a
        self.blocks = checked

    def block(self, x, y) -> np.ndarray:
        self.bundle.require(x)
        self.bundle.require(y)
        if (x, y) in self.blocks:
            return self.blocks[(x, y)]
        return np.zeros((self.bundle.dim[x], self.bundle.dim[y]), dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint cover of the base by labelled parts, each with a block layout."""

    bundle: HilbertBundle
    parts: dict  # label -> PartIndex
    part_of: dict  # point -> label

    def index(self, label) -> PartIndex:
        return self.parts[label]


@dataclass(eq=False)
class ConvBlocks:
    """Per part, the big Gram block matrix carrying the kernel's form."""

    partition: Partition
    gram: dict  # label -> ndarray of shape (total_dim, total_dim)


def partition_from_anchor(bundle: HilbertBundle, anchor: dict) -> Partition:
    missing = [x for x in bundle.points if x not in anchor]
    if missing:
        raise UnknownPoint(f"anchor does not cover point {missing[0]!r}")
    labels = []
    for x in bundle.points:  # label order follows first appearance
        if anchor[x] not in labels:
            labels.append(anchor[x])
    parts = {
        s: part_index(bundle, [x for x in bundle.points if anchor[x] == s]) for s in labels
    }
    return Partition(bundle=bundle, parts=parts, part_of={x: anchor[x] for x in bundle.points})


def partition_from_action(bundle: HilbertBundle, act: LeftAction) -> Partition:
    if set(act.base) != set(bundle.points):
        raise BundleMismatch("action base and bundle points differ")
    p = partition_from_anchor(bundle, act.anchor)
    # symbols with no anchored points get empty parts so every element
    # of the semigroupoid has well-defined (possibly empty) shift data
    missing = [s for s in act.sg.symbols if s not in p.parts]
    if not missing:
        return p
    parts = dict(p.parts)
    for s in missing:
        parts[s] = part_index(bundle, ())
    return Partition(bundle=bundle, parts=parts, part_of=dict(p.part_of))


def single_partition(bundle: HilbertBundle, label="all") -> Partition:
    parts = {label: part_index(bundle, bundle.points)}
    return Partition(bundle=bundle, parts=parts, part_of={x: label for x in bundle.points})


# ------------------------------------------------------------------
# kernel construction helpers


def zero_kernel(bundle: HilbertBundle) -> OpKernel:
    return OpKernel(bundle, {})


def identity_kernel(bundle: HilbertBundle, scale=1.0) -> OpKernel:
    """Diagonal kernel with scale times the identity on every fiber."""
    blocks = {
        (x, x): scale * np.eye(bundle.dim[x], dtype=np.complex128) for x in bundle.points
    }
    return OpKernel(bundle, blocks)


def kernel_lincomb(coeffs, kernels) -> OpKernel:
    """Linear combination of kernels over one bundle, block by block."""
    ks = list(kernels)
    if not ks:
        raise ValueError("need at least one kernel")
    bundle = ks[0].bundle
    for k in ks[1:]:
        if k.bundle != bundle:
            raise BundleMismatch("kernels live over different bundles")
    keys = set()
    for k in ks:
        keys.update(k.blocks)
    out = {}
    for x, y in keys:
        acc = sum(co * k.block(x, y) for co, k in zip(coeffs, ks))
        if np.asarray(acc).any():
            out[(x, y)] = acc
    return OpKernel(bundle, out)


def adjoint_kernel(k: OpKernel) -> OpKernel:
    out = {(y, x): m.conj().T for (x, y), m in k.blocks.items()}
    return OpKernel(k.bundle, out)


def re_im(k: OpKernel):
    """Hermitian and skew parts: K = Re + i Im with both kernels Hermitian."""
    ks = adjoint_kernel(k)
    re = kernel_lincomb([0.5, 0.5], [k, ks])
    im = kernel_lincomb([-0.5j, 0.5j], [k, ks])
    return re, im


def kernel_from_part_grams(p: Partition, grams: dict) -> OpKernel:
    """Rebuild a kernel whose within-part blocks are slices of given matrices."""
    blocks = {}
    for label, g in grams.items():
        idx = p.index(label)
        m = numlin.as_cmatrix(g)
        if m.shape != (idx.total_dim, idx.total_dim):
            raise ShapeMismatch(f"part {label!r}: matrix {m.shape} vs total dim {idx.total_dim}")
        for x in idx.part:
            for y in idx.part:
                b = m[idx.slice_of(x), idx.slice_of(y)]
                if b.any():
                    blocks[(x, y)] = b.copy()
    return OpKernel(p.bundle, blocks)


def conv_blocks(k: OpKernel, p: Partition) -> ConvBlocks:
    """Assemble the per-part Gram block matrices in the fixed point order."""
    if k.bundle != p.bundle:
        raise BundleMismatch("kernel and partition bundles differ")
    gram = {}
    for label, idx in p.parts.items():
        g = np.zeros((idx.total_dim, idx.total_dim), dtype=np.complex128)
        for x in idx.part:
            for y in idx.part:
                if (x, y) in k.blocks:
                    g[idx.slice_of(x), idx.slice_of(y)] = k.blocks[(x, y)]
        gram[label] = g
    return ConvBlocks(partition=p, gram=gram)


def is_partially_hermitian(k: OpKernel, p: Partition, tol: Tolerances = DEFAULT_TOL) -> bool:
    conv = conv_blocks(k, p)
    for g in conv.gram.values():
        if frob(g - g.conj().T) > tol.atol * max(1.0, frob(g)):
            return False
    return True


def is_partially_psd(k: OpKernel, p: Partition, tol: Tolerances = DEFAULT_TOL) -> bool:
    conv = conv_blocks(k, p)
    for g in conv.gram.values():
        if frob(g - g.conj().T) > tol.atol * max(1.0, frob(g)):
            return False
        if not numlin.psd_check(g, tol):
            return False
    return True


def _support_part(f: Section, p: Partition):
    labels = {p.part_of[x] for x in f.support}
    if len(labels) > 1:
        raise CrossPartSupport(f"section spans parts {sorted(map(repr, labels))}")
    return labels.pop() if labels else None


def kernel_inner(k: OpKernel, f: Section, g: Section, p: Partition = None) -> complex:
    """The kernel form between two sections supported in one common part.

    With no partition the whole base counts as one part.
    """
    if f.bundle != k.bundle or g.bundle != k.bundle:
        raise BundleMismatch("sections and kernel live over different bundles")
    if p is None:
        p = single_partition(k.bundle)
    sf, sg = _support_part(f, p), _support_part(g, p)
    if sf is None or sg is None:
        return 0.0 + 0.0j
    if sf != sg:
        raise CrossPartSupport(f"sections live in parts {sf!r} and {sg!r}")
    idx = p.index(sf)
    gm = conv_blocks(k, p).gram[sf]
    return complex(stack(g, idx).conj() @ gm @ stack(f, idx))


def dominates(l: OpKernel, k: OpKernel, p: Partition, tol: Tolerances = DEFAULT_TOL,
              two_sided: bool = False) -> bool:
    """Partial order test: K <= L on every part; two_sided checks -L <= K <= L."""
    if not is_partially_hermitian(l, p, tol) or not is_partially_hermitian(k, p, tol):
        raise NotHermitian("dominance compares partially Hermitian kernels only")
    diff = kernel_lincomb([1.0, -1.0], [l, k])
    if not is_partially_psd(diff, p, tol):
        return False
    if two_sided:
        both = kernel_lincomb([1.0, 1.0], [l, k])
        return is_partially_psd(both, p, tol)
    return True


# ------------------------------------------------------------------
# shifts and invariance


def _require_orbit_trivial(act: LeftAction, bundle: HilbertBundle):
    if not orbit_trivial_bundle(act, bundle):
        raise OrbitBundleNotTrivial("fiber dimension is not constant on some orbit")


def shift_map(act: LeftAction, bundle: HilbertBundle, alpha, p: Partition = None) -> np.ndarray:
    """Stacked matrix of the shift "delta_x h -> delta_{alpha.x} h".

    Maps the part at the element's domain symbol into the part at its
    codomain symbol. Columns are identity blocks placed at the image
    point's offset; a non-injective action makes several columns share a
    row block.
    """
    _require_orbit_trivial(act, bundle)
    if p is None:
        p = partition_from_action(bundle, act)
    sg = act.sg
    idx_d = p.index(sg.d[alpha])
    idx_c = p.index(sg.c[alpha])
    out = np.zeros((idx_c.total_dim, idx_d.total_dim), dtype=np.complex128)
    for x in idx_d.part:
        y = act.apply(alpha, x)
        m = bundle.dim[x]
        out[idx_c.slice_of(y), idx_d.slice_of(x)] = np.eye(m)
    return out


def shift_maps(act: LeftAction, bundle: HilbertBundle, p: Partition = None) -> dict:
    """All shift matrices, keyed by element."""
    if p is None:
        p = partition_from_action(bundle, act)
    return {g: shift_map(act, bundle, g, p) for g in act.sg.elements}


def is_invariant(k: OpKernel, act: LeftAction, tol: Tolerances = DEFAULT_TOL):
    """Exhaustive invariance check of the kernel under the action.

    Compares the block at (alpha.x, y) with the block at (x, alpha*.y)
    for every element alpha, every x anchored at its domain and every y
    anchored at its codomain. Returns (True, None) or (False, witness)
    with witness = (alpha, x, y).
    """
    _require_orbit_trivial(act, k.bundle)
    p = partition_from_action(k.bundle, act)
    conv = conv_blocks(k, p)
    sg = act.sg
    scale = {s: max(1.0, frob(g)) for s, g in conv.gram.items()}
    for alpha in sg.elements:
        sd, sc = sg.d[alpha], sg.c[alpha]
        astar = sg.star[alpha]
        bound = tol.atol * max(scale[sd], scale[sc])
        for x in p.index(sd).part:
            ax = act.apply(alpha, x)
            for y in p.index(sc).part:
                ay = act.apply(astar, y)
                if frob(k.block(ax, y) - k.block(x, ay)) > bound:
                    return False, (alpha, x, y)
    return True, None


def _kernel_basis(g, tol: Tolerances) -> np.ndarray:
    """Orthonormal basis of the numerical kernel of a Hermitian PSD matrix."""
    eig = herm_eig(g, tol)
    w = eig.eigenvalues
    cut = tol.rank_rel * float(np.max(np.abs(w), initial=0.0))
    return eig.basis[:, np.abs(w) <= cut]


def bounded_shift_constant(l: OpKernel, act: LeftAction, alpha,
                           tol: Tolerances = DEFAULT_TOL):
    """Least constant bounding the shifted form by the original form.

    For a partially PSD kernel, this is the squared norm of the quotient
    shift operator: the largest eigenvalue of the compression of the
    shifted Gram matrix onto the quotient coordinates. Returns None
    (undefined) when the shift does not map the form kernel at the domain
    part into the form kernel at the codomain part, so no finite constant
    exists relative to the quotient.
    """
    _require_orbit_trivial(act, l.bundle)
    p = partition_from_action(l.bundle, act)
    if not is_partially_psd(l, p, tol):
        raise NotPSD("bounded-shift constants are relative to a partially PSD kernel")
    sg = act.sg
    conv = conv_blocks(l, p)
    g_d = conv.gram[sg.d[alpha]]
    g_c = conv.gram[sg.c[alpha]]
    psi = shift_map(act, l.bundle, alpha, p)

    nd = _kernel_basis(g_d, tol)
    if nd.shape[1]:
        lead = psi @ nd
        resid = opnorm(lead.conj().T @ g_c @ lead)
        if resid > tol.atol * max(1.0, opnorm(g_c)):
            return None

    b_d, r_d = psd_root_factor(g_d, tol)
    if r_d == 0:
        return 0.0
    comp = psi @ numlin.pinv(b_d, tol)
    m = comp.conj().T @ g_c @ comp
    w = herm_eig(m, tol).eigenvalues
    return max(float(w[-1]), 0.0) if w.size else 0.0
