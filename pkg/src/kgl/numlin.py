"""Deterministic dense complex linear algebra.

All matrices are numpy arrays with dtype complex128. Hermitian
eigendecompositions are post-processed into a canonical form: eigenvalues
ascending, every eigenvector phase pinned (a designated pivot coordinate is
made real positive) and exact eigenvalue ties ordered lexicographically by
the normalized eigenvector coordinates. Two invocations on bit-identical
input therefore produce bit-identical output.

A single relative cutoff ``rank_rel * max|eigenvalue|`` classifies
eigenvalues as zero everywhere (rank, sign, spectral projections, PSD
factor), so every module of the package agrees on kernels and ranges.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NegativeForSqrt, NonFinite, NotHermitian, NotPSD

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "HermEig",
    "as_cmatrix",
    "frob",
    "opnorm",
    "herm_eig",
    "herm_fn",
    "spectral_projections",
    "pinv",
    "rank_tol",
    "psd_check",
    "gap_at_zero",
    "psd_root_factor",
]

# pivot entries below this modulus never define an eigenvector phase;
# a unit vector always has a coordinate of modulus >= 1/sqrt(n) >> this
_PHASE_FLOOR = 1e-12


@dataclass(frozen=True)
class Tolerances:
    """Residual acceptance threshold and relative rank cutoff.

    atol bounds accepted residuals, usually scaled by max(1, norm of the
    data). rank_rel is the relative eigenvalue cutoff below which spectrum
    is treated as zero.
    """

    atol: float = 1e-9
    rank_rel: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.atol < 1.0:
            raise ValueError("atol must lie strictly between 0 and 1")
        if self.rank_rel <= 0.0:
            raise ValueError("rank_rel must be positive")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; basis is unitary with eigenvectors
    as columns, in canonical phase/tie order.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray


def as_cmatrix(a) -> np.ndarray:
    """Coerce to a fresh 2-d complex128 array, rejecting non-finite entries."""
    m = np.array(a, dtype=np.complex128, order="C")
    if m.ndim != 2:
        raise NonFinite(f"expected a 2-d matrix, got ndim={m.ndim}")
    if not np.isfinite(m.view(np.float64)).all():
        raise NonFinite("matrix has NaN or Inf entries")
    return m


def frob(a) -> float:
    return float(np.linalg.norm(a, "fro"))


def opnorm(a) -> float:
    """Operator (spectral) norm; 0.0 for empty matrices."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _require_hermitian(a, tol: Tolerances) -> np.ndarray:
    """Validate Hermitian-ness and return the symmetrized matrix."""
    m = as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
    resid = frob(m - m.conj().T)
    if resid > tol.atol * max(1.0, frob(m)):
        raise NotHermitian(f"Hermitian residual {resid:.3e} above tolerance")
    return 0.5 * (m + m.conj().T)


def _normalize_phases(u: np.ndarray, pivot: str) -> np.ndarray:
    """Pin each column's phase by making a pivot coordinate real positive.

    pivot "first" uses the first coordinate of modulus above the floor,
    pivot "last" the last one. Zero columns (cannot happen for unitary
    input) are left alone.
    """
    u = u.copy()
    n = u.shape[0]
    for j in range(u.shape[1]):
        col = u[:, j]
        idx = range(n) if pivot == "first" else range(n - 1, -1, -1)
        for i in idx:
            z = col[i]
            r = abs(z)
            if r > _PHASE_FLOOR:
                u[:, j] = col * (z.conjugate() / r)
                break
    return u


def _lex_key(col: np.ndarray):
    out = []
    for z in col:
        out.append(z.real)
        out.append(z.imag)
    return tuple(out)


def _order_ties(w: np.ndarray, u: np.ndarray, reverse: bool):
    """Reorder columns inside groups of exactly equal eigenvalues.

    Within a tie group, columns are sorted lexicographically by their
    (already phase-normalized) coordinates; reverse flips that order.
    This never changes the ascending eigenvalue sequence.
    """
    n = w.size
    i = 0
    order = np.arange(n)
    while i < n:
        j = i + 1
        while j < n and w[j] == w[i]:
            j += 1
        if j - i > 1:
            block = sorted(range(i, j), key=lambda k: _lex_key(u[:, k]), reverse=reverse)
            order[i:j] = block
        i = j
    return w, u[:, order]


def herm_eig(a, tol: Tolerances = DEFAULT_TOL, tie_break: str = "first") -> HermEig:
    """Canonical eigendecomposition of a Hermitian matrix.

    tie_break selects one of two deterministic conventions ("first" or
    "last"): which coordinate pins the eigenvector phases and in which
    direction exact eigenvalue ties are ordered. Both produce valid
    decompositions; having two lets callers exercise uniqueness-up-to-
    unitary statements.
    """
    if tie_break not in ("first", "last"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    m = _require_hermitian(a, tol)
    if m.shape[0] == 0:
        return HermEig(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    w, u = np.linalg.eigh(m)
    u = u.astype(np.complex128, copy=False)
    u = _normalize_phases(u, pivot=tie_break)
    # descending lex order for "first" keeps identity input fixed
    w, u = _order_ties(w, u, reverse=(tie_break == "first"))
    return HermEig(w, u)


def _zero_cutoff(w: np.ndarray, tol: Tolerances) -> float:
    if w.size == 0:
        return 0.0
    return tol.rank_rel * float(np.max(np.abs(w)))


def herm_fn(a, f, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Apply a spectral function to a Hermitian matrix: U f(diag) U*.

    f is "abs", "sqrt_psd", "sign", or a callable mapping an eigenvalue
    array to an array. sign sends eigenvalues inside the rank cutoff to 0;
    sqrt_psd clamps tiny negative eigenvalues to 0 and rejects genuinely
    negative ones.
    """
    eig = herm_eig(a, tol)
    w = eig.eigenvalues
    if callable(f):
        fw = np.asarray(f(w), dtype=np.float64)
    elif f == "abs":
        fw = np.abs(w)
    elif f == "sqrt_psd":
        floor = -tol.atol * max(1.0, float(np.max(np.abs(w), initial=0.0)))
        if w.size and float(np.min(w)) < floor:
            raise NegativeForSqrt(f"eigenvalue {np.min(w):.3e} below {floor:.3e}")
        fw = np.sqrt(np.clip(w, 0.0, None))
    elif f == "sign":
        cut = _zero_cutoff(w, tol)
        fw = np.where(w > cut, 1.0, np.where(w < -cut, -1.0, 0.0))
    else:
        raise ValueError(f"unknown spectral function {f!r}")
    return (eig.basis * fw) @ eig.basis.conj().T


def spectral_projections(a, tol: Tolerances = DEFAULT_TOL):
    """Orthogonal projections onto the negative/zero/positive spectral parts.

    Returns (E_minus, E_zero, E_plus) with E_zero = I - E_minus - E_plus,
    so the three sum to the identity exactly as constructed. Eigenvalues
    inside the rank cutoff count as zero.
    """
    eig = herm_eig(a, tol)
    w, u = eig.eigenvalues, eig.basis
    cut = _zero_cutoff(w, tol)
    un = u[:, w < -cut]
    up = u[:, w > cut]
    e_minus = un @ un.conj().T
    e_plus = up @ up.conj().T
    e_zero = np.eye(w.size, dtype=np.complex128) - e_minus - e_plus
    return e_minus, e_zero, e_plus


def pinv(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the package-wide rank cutoff."""
    m = as_cmatrix(a)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    return np.linalg.pinv(m, rcond=tol.rank_rel)


def rank_tol(a, tol: Tolerances = DEFAULT_TOL) -> int:
    """Rank of a Hermitian matrix: eigenvalues above the relative cutoff."""
    w = herm_eig(a, tol).eigenvalues
    cut = _zero_cutoff(w, tol)
    return int(np.count_nonzero(np.abs(w) > cut))


def psd_check(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the Hermitian matrix has min eigenvalue >= -atol*max(1, max|eig|)."""
    w = herm_eig(a, tol).eigenvalues
    if w.size == 0:
        return True
    return float(np.min(w)) >= -tol.atol * max(1.0, float(np.max(np.abs(w))))


def gap_at_zero(a, tol: Tolerances = DEFAULT_TOL):
    """Distances from 0 to the nearest negative / positive eigenvalue.

    Eigenvalues inside the rank cutoff count as zero. A side with no
    eigenvalues is reported as None (the gap is infinite).
    """
    w = herm_eig(a, tol).eigenvalues
    cut = _zero_cutoff(w, tol)
    neg = w[w < -cut]
    pos = w[w > cut]
    gap_neg = float(-np.max(neg)) if neg.size else None
    gap_pos = float(np.min(pos)) if pos.size else None
    return gap_neg, gap_pos


def psd_root_factor(a, tol: Tolerances = DEFAULT_TOL, tie_break: str = "first"):
    """Factor a PSD matrix as G = B* B with B of full row rank.

    Returns (B, r) where r = rank_tol(G) and B has shape (r, n), built as
    sqrt(retained eigenvalues) times the adjoint eigenvector block. Tiny
    negative eigenvalues inside the PSD tolerance are treated as zero.
    """
    eig = herm_eig(a, tol, tie_break=tie_break)
    w, u = eig.eigenvalues, eig.basis
    if w.size and float(np.min(w)) < -tol.atol * max(1.0, float(np.max(np.abs(w)))):
        raise NotPSD(f"min eigenvalue {np.min(w):.3e} is negative beyond tolerance")
    cut = _zero_cutoff(w, tol)
    keep = w > cut
    b = (np.sqrt(w[keep])[:, None]) * u[:, keep].conj().T
    return b, int(np.count_nonzero(keep))
