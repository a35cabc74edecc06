"""Indefinite (Krein) linearisation pipeline for partially Hermitian kernels.

A Hermitian kernel need not be PSD on its parts, but it always splits as a
difference of PSD kernels, is dominated by a PSD kernel, and factors
through a finite-dimensional Krein space: K(x, y) = V_x* J V_y. Two
construction routes are kept side by side. The direct route applies the
induced-space construction to each part Gram matrix. The dominant route
factors through a dominating PSD kernel L: the kernel's form becomes a
Hermitian contraction (the Gram operator) on the L-quotient, whose induced
space composed with the L-factor gives the same linearisation up to a
J-unitary. The dominant route is the one that supports the distinguished
fundamental symmetries used by the reducibility check.
"""

from dataclasses import dataclass, field

import numpy as np

from . import numlin
from .bundle import Section, unstack
from .errors import (
    KernelNotDominated,
    NotHermitian,
    NotInvariant,
    NotPSD,
    PairingViolated,
    RankMismatch,
)
from .kernel import (
    OpKernel,
    Partition,
    _kernel_basis,
    conv_blocks,
    is_invariant,
    is_partially_hermitian,
    kernel_from_part_grams,
    shift_map,
)
from .krein_core import KreinSpace, gap_uniqueness, induced_krein, krein_adjoint
from .numlin import DEFAULT_TOL, Tolerances, frob, opnorm
from .reports import Record
from .sgpd import LeftAction

__all__ = [
    "GramData",
    "KreinLinearisation",
    "RkKreinView",
    "KreinRepresentation",
    "canonical_dominant",
    "gram_operator",
    "jordan_split",
    "krein_linearisation",
    "verify_krein_factorization",
    "rk_krein_space",
    "uniqueness_report",
    "j_unitary_equivalence",
    "invariant_krein_representation",
    "krein_representation_laws",
    "fundamental_reducibility_check",
]


def canonical_dominant(k: OpKernel, p: Partition, tol: Tolerances = DEFAULT_TOL,
                       act: LeftAction = None):
    """The dominating PSD kernel whose part Gram matrices are |G_s|.

    Satisfies -L <= K <= L partwise. With an action supplied, returns
    (L, flag) where the flag tells whether L is itself invariant; taking
    spectral absolute values does not always preserve invariance, so the
    flag is decided per instance rather than assumed.
    """
    if not is_partially_hermitian(k, p, tol):
        raise NotHermitian("canonical dominant needs a partially Hermitian kernel")
    conv = conv_blocks(k, p)
    grams = {label: numlin.herm_fn(g, "abs", tol) for label, g in conv.gram.items()}
    l = kernel_from_part_grams(p, grams)
    if act is None:
        return l
    ok, _ = is_invariant(l, act, tol)
    return l, ok


@dataclass(eq=False)
class GramData:
    """Per part: the dominant's factor, the kernel's Gram operator on the
    quotient, its gaps at zero and contraction norm."""

    partition: Partition
    dominant_factor: dict  # label -> B_L, shape (r_L, total_dim)
    dominant_rank: dict  # label -> r_L
    ghat: dict  # label -> Hermitian contraction, shape (r_L, r_L)
    gaps: dict  # label -> (gap_neg or None, gap_pos or None)
    contraction: dict  # label -> operator norm of ghat
    identity_residual: dict  # label -> reconstruction residual of B* ghat B


def gram_operator(k: OpKernel, l: OpKernel, p: Partition,
                  tol: Tolerances = DEFAULT_TOL) -> GramData:
    """Compress the kernel's form onto the quotient coordinates of a dominant.

    The result per part is the unique Hermitian matrix with
    B_L* Ghat B_L = G_K; it is a contraction exactly when -L <= K <= L.
    Raises KernelNotDominated when L's form kernel is not contained in K's
    (the quotient is then undefined) or the contraction bound fails.
    """
    if not is_partially_hermitian(k, p, tol):
        raise NotHermitian("Gram operator needs a partially Hermitian kernel")
    conv_k = conv_blocks(k, p)
    conv_l = conv_blocks(l, p)
    factor, ranks, ghat, gaps, contraction, ident = {}, {}, {}, {}, {}, {}
    for label, g_l in conv_l.gram.items():
        g_k = conv_k.gram[label]
        try:
            b_l, r_l = numlin.psd_root_factor(g_l, tol)
        except NotPSD:
            raise KernelNotDominated(f"part {label!r}: the dominant is not PSD")
        nl = _kernel_basis(g_l, tol)
        if nl.shape[1]:
            resid = frob(g_k @ nl)
            if resid > tol.atol * max(1.0, frob(g_k)):
                raise KernelNotDominated(
                    f"part {label!r}: kernel form does not vanish on the dominant's "
                    f"form kernel (residual {resid:.3e})")
        bp = numlin.pinv(b_l, tol)
        gh = bp.conj().T @ g_k @ bp
        gh = 0.5 * (gh + gh.conj().T)
        norm = opnorm(gh)
        if norm > 1.0 + tol.atol:
            raise KernelNotDominated(
                f"part {label!r}: Gram operator norm {norm:.12f} exceeds 1, "
                "so the dominance inequality fails")
        resid = frob(b_l.conj().T @ gh @ b_l - g_k)
        if resid > tol.atol * max(1.0, frob(g_k)):
            raise KernelNotDominated(
                f"part {label!r}: quotient compression loses the form "
                f"(residual {resid:.3e})")
        factor[label] = b_l
        ranks[label] = r_l
        ghat[label] = gh
        gaps[label] = numlin.gap_at_zero(gh, tol)
        contraction[label] = norm
        ident[label] = resid
    return GramData(p, factor, ranks, ghat, gaps, contraction, ident)


def jordan_split(k: OpKernel, p: Partition, tol: Tolerances = DEFAULT_TOL):
    """Split K = K_plus - K_minus with both parts PSD and range-disjoint.

    The split is spectral per part. The certificate records, per part, the
    ranks of the two sides and of their sum; additivity of ranks means the
    ranges intersect trivially, which is the finite-dimensional form of
    disjointness of the decomposition.
    """
    if not is_partially_hermitian(k, p, tol):
        raise NotHermitian("Jordan split needs a partially Hermitian kernel")
    conv = conv_blocks(k, p)
    plus, minus, cert = {}, {}, {}
    for label, g in conv.gram.items():
        eig = numlin.herm_eig(g, tol)
        w, u = eig.eigenvalues, eig.basis
        g_plus = (u * np.clip(w, 0.0, None)) @ u.conj().T
        g_minus = (u * np.clip(-w, 0.0, None)) @ u.conj().T
        plus[label] = g_plus
        minus[label] = g_minus
        # ranks counted at the scale of the whole Gram matrix; a side that
        # is pure rounding noise must count as zero, not as its own scale
        cut = tol.rank_rel * float(np.max(np.abs(w), initial=0.0))
        r_plus = int(np.count_nonzero(w > cut))
        r_minus = int(np.count_nonzero(w < -cut))
        r_sum = numlin.rank_tol(g_plus + g_minus, tol)
        cert[label] = {
            "rank_plus": r_plus,
            "rank_minus": r_minus,
            "rank_sum": r_sum,
            "disjoint": r_plus + r_minus == r_sum,
        }
    return kernel_from_part_grams(p, plus), kernel_from_part_grams(p, minus), cert


@dataclass(eq=False)
class KreinLinearisation:
    """Per part: a Krein space and the stacked feature map W with W*JW = G.

    features[x] is the column slice of W at x, so K(x, y) = V_x* J V_y
    within each part. provenance records which construction route built
    the object; the dominant kernel is kept when that route was used.
    """

    partition: Partition
    gram: dict  # label -> G_K
    spaces: dict  # label -> KreinSpace
    wmap: dict  # label -> W, shape (space.dim, total_dim)
    features: dict  # point -> V_x
    provenance: str  # "direct" or "dominant"
    dominant: OpKernel = None
    tie_break: str = "first"

    def part_label(self, x):
        return self.partition.part_of[x]


def krein_linearisation(k: OpKernel, p: Partition, tol: Tolerances = DEFAULT_TOL,
                        via: str = "direct", dominant: OpKernel = None,
                        tie_break: str = "first") -> KreinLinearisation:
    """Build a minimal indefinite linearisation of a Hermitian kernel.

    via "direct" applies the induced-space construction to each part Gram
    matrix. via "dominant" goes through the Gram operator of a dominating
    PSD kernel (the canonical dominant when none is supplied); the two
    routes agree up to a J-unitary map.
    """
    if not is_partially_hermitian(k, p, tol):
        raise NotHermitian("linearisation needs a partially Hermitian kernel")
    conv = conv_blocks(k, p)
    spaces, wmap, features = {}, {}, {}
    used_dominant = None
    if via == "direct":
        for label, g in conv.gram.items():
            ik = induced_krein(g, tol, tie_break=tie_break)
            spaces[label] = ik.space
            wmap[label] = ik.pi
    elif via == "dominant":
        used_dominant = dominant if dominant is not None else canonical_dominant(k, p, tol)
        gd = gram_operator(k, used_dominant, p, tol)
        for label in conv.gram:
            ik = induced_krein(gd.ghat[label], tol, tie_break=tie_break)
            spaces[label] = ik.space
            wmap[label] = ik.pi @ gd.dominant_factor[label]
    else:
        raise ValueError(f"unknown construction route {via!r}")
    for label, idx in p.parts.items():
        for x in idx.part:
            features[x] = wmap[label][:, idx.slice_of(x)]
    return KreinLinearisation(p, dict(conv.gram), spaces, wmap, features,
                              provenance=via, dominant=used_dominant, tie_break=tie_break)


def verify_krein_factorization(lin: KreinLinearisation, tol: Tolerances = DEFAULT_TOL):
    """Records certifying reconstruction and minimality of a linearisation."""
    records = []
    for label, idx in lin.partition.parts.items():
        w = lin.wmap[label]
        g = lin.gram[label]
        j = lin.spaces[label].matrix
        scale = max(1.0, frob(g))
        resid = frob(w.conj().T @ j @ w - g)
        records.append(Record("indefinite factorization reconstructs the kernel",
                              "krein/factorization", resid, tol.atol * scale,
                              resid <= tol.atol * scale, witness=label))
        dim = lin.spaces[label].dim
        if w.size:
            s = np.linalg.svd(w, compute_uv=False)
            span = int(np.count_nonzero(s > tol.rank_rel * s[0]))
        else:
            span = 0
        records.append(Record("feature columns span the whole space",
                              "krein/factorization", float(abs(span - dim)), 0.5,
                              span == dim, witness=label))
    return records


@dataclass(eq=False)
class RkKreinView:
    """Sections x -> (J V_x)* f for f in a part's Krein space.

    The kernel column at (x, h) is the member represented by V_x h; the
    reproducing identity pairs evaluation against kernel columns in the
    indefinite inner product.
    """

    kernel: OpKernel
    lin: KreinLinearisation

    def member(self, label, f) -> Section:
        w = self.lin.wmap[label]
        j = self.lin.spaces[label].matrix
        vec = w.conj().T @ (j @ np.asarray(f, dtype=np.complex128).reshape(-1))
        return unstack(vec, self.lin.partition.index(label))

    def kernel_column(self, x, h) -> Section:
        label = self.lin.part_label(x)
        idx = self.lin.partition.index(label)
        col = self.lin.gram[label][:, idx.slice_of(x)] @ np.asarray(
            h, dtype=np.complex128).reshape(-1)
        return unstack(col, idx)

    def column_vector(self, x, h) -> np.ndarray:
        return self.lin.features[x] @ np.asarray(h, dtype=np.complex128).reshape(-1)


def rk_krein_space(k: OpKernel, p: Partition, lin: KreinLinearisation,
                   tol: Tolerances = DEFAULT_TOL):
    """The reproducing-kernel view of a linearisation, plus its certificates.

    Returns (view, records). The records certify that kernel columns are
    members, that the indefinite reproducing identity holds on a
    deterministic batch of members, and minimality of the column span.
    """
    view = RkKreinView(kernel=k, lin=lin)
    rng = np.random.Generator(np.random.Philox(67890))
    records = []
    for label, idx in p.parts.items():
        w = lin.wmap[label]
        g = lin.gram[label]
        j = lin.spaces[label].matrix
        scale = max(1.0, frob(g))
        col_resid = 0.0
        for x in idx.part:
            # the member represented by V_x h stacks to the Gram column at x
            block = w.conj().T @ j @ w[:, idx.slice_of(x)] - g[:, idx.slice_of(x)]
            col_resid = max(col_resid, frob(block))
        records.append(Record("kernel columns are members", "krein/rk-space",
                              col_resid, tol.atol * scale,
                              col_resid <= tol.atol * scale, witness=label))

        rep_resid = 0.0
        m = lin.spaces[label].dim
        jdiag = np.asarray(lin.spaces[label].jdiag, dtype=np.float64)
        trials = [rng.standard_normal(m) + 1j * rng.standard_normal(m) for _ in range(3)] if m else []
        for f in trials:
            sec = view.member(label, f)
            for x in idx.part:
                for i in range(k.bundle.dim[x]):
                    h = np.zeros(k.bundle.dim[x], dtype=np.complex128)
                    h[i] = 1.0
                    lhs = complex(np.vdot(h, sec.at(x)))
                    kxh = lin.features[x] @ h
                    rhs = complex(np.vdot(kxh, jdiag * f))
                    rep_resid = max(rep_resid, abs(lhs - rhs))
        records.append(Record("indefinite reproducing identity", "krein/rk-space",
                              rep_resid, tol.atol * scale,
                              rep_resid <= tol.atol * scale, witness=label))
    records.extend(verify_krein_factorization(lin, tol))
    return view, records


def uniqueness_report(k: OpKernel, l: OpKernel, p: Partition,
                      tol: Tolerances = DEFAULT_TOL):
    """Per-part gap data for the Gram operator and the uniqueness verdict.

    In finite dimensions every Hermitian contraction has spectrum free of
    an interval on at least one side of zero, so the induced space (hence
    the linearisation through L) is unique up to J-unitary equivalence;
    each record carries the witnessing half-gap. Non-uniqueness needs
    infinite-dimensional spectral accumulation at zero from both sides.
    """
    gd = gram_operator(k, l, p, tol)
    records = []
    for label, gh in gd.ghat.items():
        unique, gap_neg, gap_pos = gap_uniqueness(gh, tol)
        finite_gaps = [g for g in (gap_neg, gap_pos) if g is not None]
        eps = min(finite_gaps) if finite_gaps else 1.0
        note = ("finite-dimensional collapse: the Gram operator has finitely many "
                "eigenvalues, so a one-sided spectral gap at zero always exists; "
                "the non-uniqueness alternative needs spectral accumulation at "
                "zero from both sides and is unreachable in finite dimensions")
        records.append(Record("induced space unique up to J-unitary equivalence",
                              "krein/gap-uniqueness",
                              0.0 if unique else 1.0, 0.5, unique,
                              witness={"part": label, "gap_neg": gap_neg,
                                       "gap_pos": gap_pos, "eps": eps, "note": note}))
    return records


@dataclass(eq=False)
class KreinEquivalenceResult:
    maps: dict  # part label -> J-unitary U with U W_a = W_b
    records: list

    @property
    def ok(self):
        return all(r.passed for r in self.records)


def j_unitary_equivalence(lin_a: KreinLinearisation, lin_b: KreinLinearisation,
                          tol: Tolerances = DEFAULT_TOL) -> KreinEquivalenceResult:
    """Certify the canonical J-unitary between two minimal linearisations.

    U = W_b W_a+ is pinned on the feature columns by minimality; the
    records certify the J-isometry law (the Krein adjoint of U inverts it)
    and that U matches the feature maps. Raises RankMismatch when the part
    dimensions or signatures disagree.
    """
    p = lin_a.partition
    maps, records = {}, []
    for label in p.parts:
        sa, sb = lin_a.spaces[label], lin_b.spaces[label]
        if sa.dim != sb.dim:
            raise RankMismatch(f"part {label!r}: dims {sa.dim} vs {sb.dim}")
        if sa.signature != sb.signature:
            raise RankMismatch(
                f"part {label!r}: signatures {sa.signature} vs {sb.signature}")
        wa, wb = lin_a.wmap[label], lin_b.wmap[label]
        u = wb @ numlin.pinv(wa, tol)
        maps[label] = u
        scale = max(1.0, frob(lin_a.gram[label]))
        usharp = krein_adjoint(u, sa, sb)
        resid_iso = frob(usharp @ u - np.eye(sa.dim)) if sa.dim else 0.0
        resid_v = 0.0
        for x in p.index(label).part:
            resid_v = max(resid_v, frob(u @ lin_a.features[x] - lin_b.features[x]))
        records.append(Record("canonical map is J-unitary", "krein/gap-uniqueness",
                              resid_iso, tol.atol * scale, resid_iso <= tol.atol * scale,
                              witness=label))
        records.append(Record("canonical map matches features", "krein/gap-uniqueness",
                              resid_v, tol.atol * scale, resid_v <= tol.atol * scale,
                              witness=label))
    return KreinEquivalenceResult(maps, records)


@dataclass(eq=False)
class KreinRepresentation:
    """Represented shifts between part Krein spaces, with law certificates."""

    action: LeftAction
    lin: KreinLinearisation
    psi: dict  # element -> matrix space_d -> space_c
    records: list = field(default_factory=list)


def invariant_krein_representation(k: OpKernel, act: LeftAction, p: Partition,
                                   tol: Tolerances = DEFAULT_TOL,
                                   dominant: OpKernel = None):
    """Linearise an invariant Hermitian kernel and represent the shifts.

    Returns (lin, rep). With a dominant supplied the linearisation goes
    through its Gram operator (required for the reducibility check);
    otherwise the direct route is used, so a non-invariant canonical
    dominant never blocks construction. Each represented shift is
    W_c Psi W_d+; invariance makes the shift respect the form kernels, so
    the compression satisfies W_c Psi = Psi_rep W_d, which is verified and
    raised as PairingViolated on failure.
    """
    if not is_partially_hermitian(k, p, tol):
        raise NotHermitian("invariant linearisation needs a Hermitian kernel")
    ok, witness = is_invariant(k, act, tol)
    if not ok:
        raise NotInvariant(f"kernel is not invariant; witness {witness!r}")
    via = "dominant" if dominant is not None else "direct"
    lin = krein_linearisation(k, p, tol, via=via, dominant=dominant)
    sg = act.sg
    psi = {}
    for alpha in sg.elements:
        sd, sc = sg.d[alpha], sg.c[alpha]
        shift = shift_map(act, k.bundle, alpha, p)
        w_c, w_d = lin.wmap[sc], lin.wmap[sd]
        t = w_c @ shift @ numlin.pinv(w_d, tol)
        scale = max(1.0, opnorm(w_c) * opnorm(shift))
        resid = frob(t @ w_d - w_c @ shift)
        if resid > tol.atol * scale:
            raise PairingViolated(
                f"shift of {alpha!r} does not descend to the quotient "
                f"(residual {resid:.3e})")
        psi[alpha] = t
    rep = KreinRepresentation(action=act, lin=lin, psi=psi)
    rep.records = krein_representation_laws(rep, tol)
    return lin, rep


def krein_representation_laws(rep: KreinRepresentation, tol: Tolerances = DEFAULT_TOL):
    """Records for multiplicativity, indefinite-adjoint compatibility and
    intertwining of a Krein representation."""
    sg = rep.action.sg
    psi = rep.psi
    lin = rep.lin
    records = []
    scale = max([1.0] + [opnorm(m) ** 2 for m in psi.values()])

    resid_mul, wit_mul = 0.0, None
    for (a, b), ab in sg.compose.items():
        r = frob(psi[ab] - psi[a] @ psi[b])
        if r > resid_mul:
            resid_mul, wit_mul = r, (a, b)
    records.append(Record("multiplicative on composable pairs", "krein/representation",
                          resid_mul, tol.atol * scale, resid_mul <= tol.atol * scale,
                          witness=wit_mul))

    resid_sharp, wit_sharp = 0.0, None
    for a in sg.elements:
        sd, sc = sg.d[a], sg.c[a]
        sharp = krein_adjoint(psi[a], lin.spaces[sd], lin.spaces[sc])
        r = frob(psi[sg.star[a]] - sharp)
        if r > resid_sharp:
            resid_sharp, wit_sharp = r, (a,)
    records.append(Record("star maps to the indefinite adjoint", "krein/representation",
                          resid_sharp, tol.atol * scale, resid_sharp <= tol.atol * scale,
                          witness=wit_sharp))

    resid_int, wit_int = 0.0, None
    p = lin.partition
    for a in sg.elements:
        for x in p.index(sg.d[a]).part:
            ax = rep.action.apply(a, x)
            r = frob(psi[a] @ lin.features[x] - lin.features[ax])
            if r > resid_int:
                resid_int, wit_int = r, (a, x)
    records.append(Record("intertwines the feature maps", "krein/representation",
                          resid_int, tol.atol * scale, resid_int <= tol.atol * scale,
                          witness=wit_int))
    return records


def fundamental_reducibility_check(rep: KreinRepresentation, l: OpKernel,
                                   act: LeftAction, tol: Tolerances = DEFAULT_TOL):
    """Check that the represented shifts commute with the part symmetries.

    The distinguished fundamental symmetries exist when the linearisation
    was built through a dominant kernel that is itself invariant; then the
    diagonal J of each part space realizes the sign of the Gram operator
    in induced coordinates, and every represented shift must commute with
    the J bundle. When the hypothesis fails (direct route, or dominant not
    invariant) the report says not-applicable instead of testing a law
    that is not guaranteed.
    """
    if rep.lin.provenance != "dominant":
        return [Record("not applicable: linearisation was not built through a dominant",
                       "krein/reducibility", 0.0, 0.5, True,
                       witness={"provenance": rep.lin.provenance})]
    dom = l if l is not None else rep.lin.dominant
    ok, witness = is_invariant(dom, act, tol)
    if not ok:
        return [Record("not applicable: the dominant kernel is not invariant",
                       "krein/reducibility", 0.0, 0.5, True,
                       witness={"invariance_witness": witness})]
    records = []
    sg = act.sg
    for a, m in rep.psi.items():
        j_d = rep.lin.spaces[sg.d[a]].matrix
        j_c = rep.lin.spaces[sg.c[a]].matrix
        scale = max(1.0, opnorm(m))
        resid = frob(j_c @ m - m @ j_d)
        records.append(Record("represented shift commutes with the symmetry bundle",
                              "krein/reducibility", resid, tol.atol * scale,
                              resid <= tol.atol * scale, witness=(a,)))
    return records
