"""Invariant subspaces, real structures, and detection of invariant totally geodesic submanifolds.

Everything runs in a complex working representation:

* SU / U ambient: the generators themselves, with the form ``I_{n,1}``.
* Sp ambient: the block form ``[[Z, W], [-conj W, conj Z]]`` acting on the
  coordinates ``(X, -conj Y)`` of ``X + Y j``.  The form there is
  ``I_{n,1} ⊕ I_{n,1}`` and right multiplication by j is the antilinear map
  ``J u = Ω conj(u)`` with ``Ω = [[0, I], [-I, 0]]``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import HMatrix, Quaternion, direct_sum, expm, max_abs, opnorm
from .groups import (GeneratorSet, GroupSpec, block_embed, form_inverse, group_membership,
                     lie_algebra_element, random_element, so, sp, su, u)
from .traces import DEFAULT_WORD_LENGTH, realness_report

RANK_TOL = 1e-8          # relative singular-value threshold for all rank decisions
DETECT_TOL = 1e-7


# --------------------------------------------------------------------------
# small linear-algebra helpers


def _orth(m: np.ndarray, rel: float = RANK_TOL) -> np.ndarray:
    if m.size == 0:
        return m.reshape(m.shape[0], 0)
    q, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return q[:, :0]
    return q[:, : int(np.sum(s > rel * s[0]))]


def _null(m: np.ndarray, rel: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the (numerical) null space of ``m``."""
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n, dtype=m.dtype)
    _, s, vh = np.linalg.svd(m)
    top = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel * top)) if top > 0 else 0
    return vh[rank:].conj().T


def _omega(n_plus_one: int) -> np.ndarray:
    eye = np.eye(n_plus_one)
    zero = np.zeros_like(eye)
    return np.block([[zero, eye], [-eye, zero]])


def _form_orthonormalize(basis: np.ndarray, form: np.ndarray) -> tuple[np.ndarray, tuple[int, int]]:
    """Rescale ``basis`` so that ``B* F B = diag(1, ..., 1, -1, ..., -1)`` (negatives last)."""
    gram = basis.conj().T @ form @ basis
    w, v = np.linalg.eigh((gram + gram.conj().T) / 2)
    order = np.r_[np.nonzero(w > 0)[0][::-1], np.nonzero(w <= 0)[0]]
    w, v = w[order], v[:, order]
    if np.min(np.abs(w)) <= RANK_TOL * np.max(np.abs(w)):
        raise ArithmeticError("restricted form is degenerate")
    return basis @ (v / np.sqrt(np.abs(w))), (int(np.sum(w > 0)), int(np.sum(w < 0)))


def _signature(basis: np.ndarray, form: np.ndarray) -> tuple[int, int, int]:
    gram = basis.conj().T @ form @ basis
    w = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    scale = max(1e-300, float(np.max(np.abs(w))))
    thresh = 1e-7 * scale
    return int(np.sum(w > thresh)), int(np.sum(w < -thresh)), int(np.sum(np.abs(w) <= thresh))


# --------------------------------------------------------------------------
# working representation


@dataclass
class _Work:
    mats: list            # complex working matrices of the generators
    form: np.ndarray
    omega: np.ndarray | None   # J u = omega @ conj(u) for quaternionic ambients
    size: int             # quaternionic / complex size n+1

    @property
    def quaternionic(self) -> bool:
        return self.omega is not None


def _work(gens: GeneratorSet) -> _Work:
    n1 = gens.group.size
    if gens.group.quaternionic:
        mats = [g.complex_block() for g in gens.gens]
        s = np.r_[np.ones(n1 - 1), -1.0]
        return _Work(mats, np.diag(np.r_[s, s]), _omega(n1), n1)
    return _Work([np.asarray(g, dtype=complex) for g in gens.gens], gens.group.form, None, n1)


def _j_close(basis: np.ndarray, omega: np.ndarray) -> np.ndarray:
    return _orth(np.hstack([basis, omega @ basis.conj()]))


def _to_quaternion_columns(u_cols: np.ndarray, n1: int) -> HMatrix:
    return HMatrix(u_cols[:n1], -u_cols[n1:].conj())


# --------------------------------------------------------------------------
# algebra span and minimal invariant subspaces


def algebra_basis(mats: list, max_rounds: int | None = None) -> list[np.ndarray]:
    """Orthonormal (Frobenius) basis of the complex algebra generated by ``mats``.

    Each round multiplies the current basis by the generators and their
    inverses and re-extracts a basis by SVD, so rounding never accumulates
    across rounds.  The span stops growing after at most d^2 rounds and is
    then the span of all words.
    """
    d = mats[0].shape[0]
    letters = list(mats) + [np.linalg.inv(m) for m in mats]
    letters = [m / np.linalg.norm(m) for m in letters]
    rows = np.stack([np.eye(d, dtype=complex).ravel() / np.sqrt(d)] + [m.ravel() for m in letters])
    current = _row_basis(rows)
    for _ in range(max_rounds or d * d):
        cand = [(b.reshape(d, d) @ m).ravel() for b in current for m in letters]
        grown = _row_basis(np.vstack([current, np.stack(cand)]))
        if grown.shape[0] == current.shape[0]:
            break
        current = grown
    return [b.reshape(d, d) for b in current]


def _row_basis(rows: np.ndarray) -> np.ndarray:
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    return vh[: int(np.sum(s > RANK_TOL * s[0]))]


def _spin(alg: list[np.ndarray], v: np.ndarray) -> np.ndarray:
    return _orth(np.stack([b @ v for b in alg], axis=1))


def _invariance_defect(mats: list, basis: np.ndarray) -> float:
    proj = basis @ basis.conj().T
    out = 0.0
    for m in mats:
        mb = m @ basis
        out = max(out, float(np.linalg.norm(mb - proj @ mb, 2)) / max(1.0, opnorm(m)))
    return out


def _minimal_invariant(mats: list, rng: np.random.Generator, tries: int = 4,
                       inv_tol: float = 1e-7) -> np.ndarray:
    """A minimal invariant subspace of a complex matrix group (orthonormal columns)."""
    d = mats[0].shape[0]
    alg = algebra_basis(mats)
    if len(alg) == d * d:
        return np.eye(d, dtype=complex)
    best = np.eye(d, dtype=complex)
    for _ in range(tries):
        coeff = rng.standard_normal(len(alg)) + 1j * rng.standard_normal(len(alg))
        a = sum(c * b for c, b in zip(coeff, alg))
        _, vecs = np.linalg.eig(a)
        cands = sorted((_spin(alg, vecs[:, t]) for t in range(d)), key=lambda w: w.shape[1])
        for w in cands:
            if w.shape[1] >= best.shape[1]:
                break
            if _invariance_defect(mats, w) <= inv_tol:
                best = w
                break
        if best.shape[1] == 1:
            break
    return best


def _antilinear_intertwiners(mats: list, rel: float = RANK_TOL) -> list[np.ndarray]:
    """Basis of solutions S of ``γ S = S conj(γ)`` for every γ in ``mats``."""
    d = mats[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(eye, m) - np.kron(m.conj().T, eye) for m in mats]
    # vec(γ S) = (I ⊗ γ) vec S and vec(S conj γ) = (conj(γ)^T ⊗ I) vec S, column-major
    null = _null(np.vstack(rows), rel)
    return [null[:, t].reshape(d, d, order="F") for t in range(null.shape[1])]


def _schur_type(mats: list) -> str:
    """Type of an irreducible complex representation: real, complex or quaternion.

    Complex type has no antilinear self-intertwiner; otherwise ``S conj(S)``
    is a real scalar whose sign separates real (+) from quaternion (-).
    """
    sols = _antilinear_intertwiners(mats)
    if not sols:
        return "complex"
    s = sols[0]
    mu = np.trace(s @ s.conj()).real / s.shape[0]
    return "real" if mu > 0 else "quaternion"


# --------------------------------------------------------------------------
# scan


@dataclass(frozen=True)
class InvariantSubspace:
    """One summand of the splitting.

    ``basis`` lives in the ambient coordinates: complex columns for SU/U,
    quaternion columns (an HMatrix) for Sp.  ``dim`` and ``signature`` count
    dimensions over the ambient scalar field.
    """

    basis: object
    dim: int
    signature: tuple[int, int, int]
    schur_type: str
    defect: float
    degenerate: bool = False
    work_basis: np.ndarray = field(default=None, repr=False, compare=False)
    minimal_basis: np.ndarray = field(default=None, repr=False, compare=False)


def _scan_work(work: _Work, seed=0) -> list[InvariantSubspace]:
    rng = np.random.default_rng(seed)
    total = work.mats[0].shape[0]
    remaining = np.eye(total, dtype=complex)
    pieces: list[InvariantSubspace] = []
    div = 2 if work.quaternionic else 1
    while remaining.shape[1]:
        compressed = [remaining.conj().T @ m @ remaining for m in work.mats]
        w_c = _minimal_invariant(compressed, rng)
        w_min = remaining @ w_c
        schur = _schur_type([w_c.conj().T @ m @ w_c for m in compressed])
        w_full = _j_close(w_min, work.omega) if work.quaternionic else w_min
        p, q, z = _signature(w_full, work.form)
        degenerate = z > 0
        if degenerate:
            w_full = remaining
            p, q, z = _signature(w_full, work.form)
        basis = _to_quaternion_columns(w_full, work.size) if work.quaternionic else w_full
        pieces.append(InvariantSubspace(
            basis=basis, dim=w_full.shape[1] // div, signature=(p // div, q // div, z // div),
            schur_type=schur, defect=_invariance_defect(work.mats, w_full),
            degenerate=degenerate, work_basis=w_full, minimal_basis=w_min))
        if degenerate:
            break
        # form-orthogonal complement of the piece inside the remaining space
        remaining = remaining @ _null(w_full.conj().T @ work.form @ remaining)
    return pieces


def invariant_subspace_scan(gens: GeneratorSet, L: int = DEFAULT_WORD_LENGTH, tol: float = DETECT_TOL,
                            seed=0) -> list[InvariantSubspace]:
    """Split the ambient space into minimal invariant pieces.

    Pieces are found one at a time by spinning eigenvectors of a random
    element of the generated algebra, and each nondegenerate piece is split
    off with its form-orthogonal complement.  For quaternionic groups each
    piece is the quaternionic span of a minimal complex piece.  A single
    piece covering the whole space means no proper invariant subspace was
    found.  ``L`` is accepted for interface symmetry; the algebra span is
    computed to closure, which covers every word length.
    """
    pieces = _scan_work(_work(gens), seed)
    for piece in pieces:
        if piece.defect > tol:
            raise ArithmeticError(f"invariance check failed (defect {piece.defect:.2e})")
    return pieces


# --------------------------------------------------------------------------
# real structures


@dataclass(frozen=True)
class RealStructure:
    """``S`` with ``S conj(S) = I`` and ``γ S = S conj(γ)``; ``T`` makes every ``T^-1 γ T`` real.

    ``T`` lies in SU(p,1) for the standard form of the generators' size.
    """

    S: np.ndarray
    T: np.ndarray
    residual: float


def _real_form_gate(mats, tol) -> float:
    return max(float(np.abs(m.imag).max()) / max(1.0, opnorm(m)) for m in mats)


def real_structure_solve(gens, tol: float = DETECT_TOL, seed=0,
                         form: np.ndarray | None = None) -> RealStructure | None:
    """Find a form-compatible real structure for complex generators in U(p,1).

    Solves ``γ_k S = S conj(γ_k)`` for all k at once, normalizes a solution to
    ``S conj(S) = I``, builds ``T = e^{-iα/2} I + e^{iα/2} S`` (so that
    ``S = T conj(T)^{-1}``) and finally moves T into the group by making its
    Gram matrix standard.  Returns None when no such structure exists.
    """
    mats = [np.asarray(g, dtype=complex) for g in (gens.gens if isinstance(gens, GeneratorSet) else gens)]
    d = mats[0].shape[0]
    form = np.diag(np.r_[np.ones(d - 1), -1.0]) if form is None else np.asarray(form)
    if _real_form_gate(mats, tol) <= tol:
        eye = np.eye(d, dtype=complex)
        return RealStructure(eye, eye.copy(), _real_form_gate(mats, tol))
    sols = _antilinear_intertwiners(mats)
    if not sols:
        return None
    rng = np.random.default_rng(seed)
    for attempt in range(16):
        if len(sols) == 1 and attempt:
            break
        coeff = rng.standard_normal(len(sols)) + 1j * rng.standard_normal(len(sols))
        s = sum(c * x for c, x in zip(coeff, sols))
        result = _structure_from(s, mats, form, tol, rng)
        if result is not None:
            return result
    return None


def _structure_from(s, mats, form, tol, rng) -> RealStructure | None:
    d = s.shape[0]
    m = s @ s.conj()
    vals, vecs = np.linalg.eig(m)
    scale = max(1e-300, float(np.max(np.abs(vals))))
    if np.any(np.abs(vals.imag) > 1e-6 * scale) or np.any(vals.real <= 1e-6 * scale):
        return None
    try:
        inv_sqrt = vecs @ np.diag(vals.real ** -0.5) @ np.linalg.inv(vecs)
    except np.linalg.LinAlgError:
        return None
    s = inv_sqrt @ s
    eye = np.eye(d)
    best_t, best_sv = None, 0.0
    for alpha in np.r_[0.0, rng.uniform(0, 2 * np.pi, 7)]:
        t = np.exp(-0.5j * alpha) * eye + np.exp(0.5j * alpha) * s
        sv = np.linalg.svd(t, compute_uv=False)
        if sv[-1] / sv[0] > best_sv:
            best_t, best_sv = t, sv[-1] / sv[0]
    if best_sv < 1e-8:
        return None
    t = best_t / np.linalg.norm(best_t, 2)
    gram = t.conj().T @ form @ t
    gscale = float(np.abs(gram).max())
    if float(np.abs(gram.imag).max()) > 1e-6 * gscale:
        return None
    w, v = np.linalg.eigh(gram.real)
    if np.min(np.abs(w)) <= 1e-9 * gscale or int(np.sum(w < 0)) != int(np.sum(form.diagonal() < 0)):
        return None
    order = np.r_[np.nonzero(w > 0)[0], np.nonzero(w < 0)[0]]
    w, v = w[order], v[:, order]
    t = t @ (v / np.sqrt(np.abs(w)))
    t = t * np.exp(-1j * np.angle(np.linalg.det(t)) / d)
    t_inv = np.linalg.inv(t)
    conj = [t_inv @ g @ t for g in mats]
    residual = _real_form_gate(conj, tol)
    if residual > tol:
        return None
    return RealStructure(s, t, residual)


# --------------------------------------------------------------------------
# detection


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of :func:`detect`.

    ``kind`` is ``"real_form"`` (with ``m``), ``"complex_line"`` or
    ``"none"``.  ``conjugator`` C puts every generator into block form
    ``C^-1 g C = compact ⊕ noncompact``, compact block first; ``blocks``
    gives the two sizes.
    """

    kind: str
    m: int | None
    conjugator: object
    residual: float
    conjugator_residual: float
    blocks: tuple[int, int]
    schur_types: tuple[str, ...]
    subspaces: tuple
    realness: object
    conjugated: tuple = ()
    warnings: tuple = ()

    @property
    def label(self) -> str:
        return f"real_form({self.m})" if self.kind == "real_form" else self.kind


def _none_result(pieces, realness, notes, ambient_size) -> DetectionResult:
    return DetectionResult("none", None, None, float("inf"), float("inf"), (ambient_size, 0),
                           tuple(p.schur_type for p in pieces), tuple(pieces), realness, (),
                           tuple(notes))


def _commutant_complex_structure(work: _Work, q_basis: np.ndarray, rng) -> np.ndarray | None:
    """Complex structure on a J-invariant piece, from its quaternion-linear commutant.

    Returns the i-eigenspace U (full coordinates) of a form-skew-adjoint
    commutant element L with L^2 = -I; U is form-orthogonal to J U.
    """
    k2 = q_basis.shape[1]
    gam = [q_basis.conj().T @ m @ q_basis for m in work.mats]
    fc = q_basis.conj().T @ work.form @ q_basis
    jc = q_basis.conj().T @ work.omega @ q_basis.conj()
    fc_inv = np.linalg.inv(fc)

    # real-linear system for X: γX - Xγ = 0 and X jc - jc conj(X) = 0
    cols = []
    units = []
    for a in range(k2):
        for b in range(k2):
            for phase in (1.0, 1j):
                e = np.zeros((k2, k2), dtype=complex)
                e[a, b] = phase
                units.append(e)
                eqs = [g @ e - e @ g for g in gam] + [e @ jc - jc @ e.conj()]
                flat = np.concatenate([x.ravel() for x in eqs])
                cols.append(np.r_[flat.real, flat.imag])
    system = np.array(cols).T
    null = _null(system)
    if null.shape[1] == 0:
        return None
    skews = []
    for t in range(null.shape[1]):
        x = sum(c * e for c, e in zip(null[:, t], units))
        skews.append((x - fc_inv @ x.conj().T @ fc) / 2)
    if max(float(np.abs(s).max()) for s in skews) <= 1e-8:
        return None
    for _ in range(16):
        coeff = rng.standard_normal(len(skews))
        lop = sum(c * s for c, s in zip(coeff, skews))
        sq = lop @ lop
        c = -np.trace(sq).real / k2
        if c <= 0 or float(np.abs(sq + c * np.eye(k2)).max()) > 1e-6 * c:
            continue
        lop = lop / np.sqrt(c)
        u_c = _null(lop - 1j * np.eye(k2), 1e-6)
        if u_c.shape[1] * 2 == k2:
            return q_basis @ u_c
    return None


def _pair_gram_schmidt(vectors: np.ndarray, form: np.ndarray, omega: np.ndarray, count: int) -> np.ndarray:
    """Quaternionic orthonormal basis (as block columns e_t) of a positive J-invariant space."""
    out: list[np.ndarray] = []
    for t in range(vectors.shape[1]):
        if len(out) == count:
            break
        v = vectors[:, t].copy()
        for _ in range(2):
            for e in out:
                for f in (e, omega @ e.conj()):
                    v = v - (f.conj() @ form @ v) * f
        nrm2 = (v.conj() @ form @ v).real
        if nrm2 <= 1e-8 * max(1.0, np.linalg.norm(vectors[:, t]) ** 2):
            continue
        out.append(v / np.sqrt(nrm2))
    if len(out) != count:
        raise ArithmeticError("could not complete a quaternionic basis of the compact part")
    return np.stack(out, axis=1) if out else np.zeros((vectors.shape[0], 0), dtype=complex)


def _block_residual(conj_gens, c: int, kind: str, quaternionic: bool) -> float:
    worst = 0.0
    for g in conj_gens:
        scale = max(1.0, opnorm(g))
        if quaternionic:
            off = max(max_abs(g[:c, c:]), max_abs(g[c:, :c])) if c else 0.0
            nc = g[c:, c:]
            extra = float(np.abs(nc.w).max())
            if kind == "real_form":
                extra = max(extra, float(np.abs(nc.z.imag).max()))
        else:
            off = max(float(np.abs(g[:c, c:]).max()), float(np.abs(g[c:, :c]).max())) if c else 0.0
            extra = float(np.abs(g[c:, c:].imag).max()) if kind == "real_form" else 0.0
        worst = max(worst, max(off, extra) / scale)
    return worst


def detect(gens: GeneratorSet, L: int = DEFAULT_WORD_LENGTH, tol: float = DETECT_TOL, seed=0,
           realness_tol: float = 1e-9) -> DetectionResult:
    """Find the invariant totally geodesic submanifold and a conjugator into block form.

    Steps: split into invariant pieces; take the piece carrying the negative
    direction; if it has dimension 2 over the complex structure it is a
    complex line, if larger look for a compatible real structure (real form
    of dimension m = dim - 1).  Anything else is reported as ``none``.
    """
    notes = []
    realness = realness_report(gens, L, realness_tol)
    if not realness.real:
        msg = f"traces are not real (max |Im tr| = {realness.max_im:.3e}); detection is diagnostic only"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    work = _work(gens)
    pieces = _scan_work(work, seed)
    n1 = work.size
    negative = [p for p in pieces if p.signature[1] > 0 and not p.degenerate]
    if not negative:
        notes.append("no nondegenerate invariant piece carries the negative direction")
        return _none_result(pieces, realness, notes, n1)
    neg = min(negative, key=lambda p: p.dim)
    rng = np.random.default_rng(seed)

    if work.quaternionic:
        u_basis = _commutant_complex_structure(work, neg.work_basis, rng)
        if u_basis is None:
            notes.append("negative piece has no compatible complex structure (quaternionic type)")
            return _none_result(pieces, realness, notes, n1)
    else:
        u_basis = neg.work_basis
    k = u_basis.shape[1]
    try:
        b, sig = _form_orthonormalize(u_basis, work.form)
    except ArithmeticError:
        notes.append("negative piece is degenerate")
        return _none_result(pieces, realness, notes, n1)
    std = np.diag(np.r_[np.ones(k - 1), -1.0])
    restricted = [std @ b.conj().T @ work.form @ m @ b for m in work.mats]

    if k == 2:
        kind, m_dim = "complex_line", None
    elif k >= 3:
        rs = real_structure_solve(restricted, tol, seed)
        if rs is None:
            notes.append("negative piece admits no compatible real structure")
            return _none_result(pieces, realness, notes, n1)
        b = b @ rs.T
        kind, m_dim = "real_form", k - 1
    else:
        notes.append("negative piece is a single point (the group fixes a point of the space)")
        return _none_result(pieces, realness, notes, n1)

    # compact complement
    c = n1 - k
    comp = _null(neg.work_basis.conj().T @ work.form) if c else np.zeros((b.shape[0], 0))
    if work.quaternionic:
        e = _pair_gram_schmidt(comp, work.form, work.omega, c)
        cols = np.hstack([e, b])
        conjugator = _to_quaternion_columns(cols, n1)
        ambient = sp(n1 - 1)
    else:
        e, _ = _form_orthonormalize(comp, work.form) if c else (comp, None)
        cols = np.hstack([e, b])
        cols = cols * np.exp(-1j * np.angle(np.linalg.det(cols)) / n1)
        conjugator = cols
        ambient = su(n1 - 1)
    cinv = form_inverse(conjugator)
    conj_gens = tuple(cinv @ g @ conjugator for g in gens.gens)
    residual = _block_residual(conj_gens, c, kind, work.quaternionic)
    membership = group_membership(conjugator, ambient).residual
    return DetectionResult(kind, m_dim, conjugator, residual, membership, (c, k),
                           tuple(p.schur_type for p in pieces), tuple(pieces), realness,
                           conj_gens, tuple(notes))


# --------------------------------------------------------------------------
# synthesis


@dataclass(frozen=True)
class SynthesisRecipe:
    """Planted structure: ``ambient`` in {"SU", "Sp"}, size n, ``kind`` and ``m``.

    ``block_seed`` drives the block contents, ``hide_seed`` the hidden conjugator.
    ``count`` is the number of generators (2 or 3); a third generator carries
    a reflection in the noncompact block compensated by a sign in the compact
    block, when there is a compact block to absorb it.
    """

    ambient: str
    n: int
    kind: str
    m: int | None = None
    block_seed: int = 0
    hide_seed: int = 1
    count: int = 3

    def __post_init__(self):
        if self.ambient not in ("SU", "Sp"):
            raise ValueError("ambient must be SU or Sp")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.kind == "real_form":
            if self.m is None or not 2 <= self.m <= self.n:
                raise ValueError(f"real_form needs 2 <= m <= n, got m={self.m}, n={self.n}")
        elif self.kind == "complex_line":
            if self.m not in (None, 1):
                raise ValueError("complex_line takes no m")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.count not in (2, 3):
            raise ValueError("count must be 2 or 3")

    @property
    def noncompact_size(self) -> int:
        return self.m + 1 if self.kind == "real_form" else 2

    @property
    def spec(self) -> GroupSpec:
        return su(self.n) if self.ambient == "SU" else sp(self.n)


def _compact_sample(c: int, rng, real: bool = False) -> np.ndarray:
    """Compact block with real traces: SU(2) ⊕ SO(c-2), or SO(c) when c < 2 or ``real``."""
    if c == 0:
        return np.zeros((0, 0), dtype=complex)
    if real:
        return random_element(so(c, 0), rng)
    if c >= 2:
        head = random_element(su(2, 0), rng)
        if c == 2:
            return head
        return direct_sum(head, random_element(so(c - 2, 0), rng))
    return np.eye(1, dtype=complex)


def _compensating_compact(c: int, rng) -> np.ndarray:
    """Compact block of determinant -1 with real trace (pairs with a reflection)."""

    if c == 1:
        return -np.eye(1, dtype=complex)
    if c == 2:
        return np.diag([1.0, -1.0]).astype(complex) @ random_element(so(2, 0), rng)
    flip = np.eye(c - 2)
    flip[0, 0] = -1.0
    return direct_sum(random_element(su(2, 0), rng), flip @ random_element(so(c - 2, 0), rng))


def _noncompact_sample(recipe: SynthesisRecipe, rng) -> np.ndarray:
    spec = so(recipe.m) if recipe.kind == "real_form" else su(1)
    for _ in range(50):
        x = lie_algebra_element(spec, rng)
        x = x * (1.5 / max(1e-12, float(np.linalg.norm(x))))
        g = expm(x)
        if spec.family == "SO":
            g = g.real.astype(complex)
        if np.max(np.abs(np.linalg.eigvals(g))) > 1.05:
            return g
    return g


def synthesize_with_witness(recipe: SynthesisRecipe):
    """Generators plus the hidden conjugator H and the block generators (``g = H b H^-1``)."""

    rng = np.random.default_rng(recipe.block_seed)
    n1 = recipe.n + 1
    k = recipe.noncompact_size
    c = n1 - k
    compensate = recipe.kind == "real_form" and recipe.count == 3 and c >= 1
    # next to a det -1 block, SU(2) would produce non-real traces, so c = 2 stays real
    real_compact = compensate and c == 2
    blocks = []
    for t in range(recipe.count):
        comp = _compact_sample(c, rng, real_compact)
        nc = _noncompact_sample(recipe, rng)
        if t == 2 and compensate:
            refl = np.eye(k)
            refl[0, 0] = -1.0
            nc = refl @ nc
            comp = _compensating_compact(c, rng)
        blocks.append(direct_sum(comp, nc) if c else nc)

    hrng = np.random.default_rng(recipe.hide_seed)
    if recipe.ambient == "SU":
        hidden = random_element(su(recipe.n), hrng, max_norm=1.0)
        gens = [hidden @ b @ np.linalg.inv(hidden) for b in blocks]
    else:
        unit = hrng.standard_normal(4)
        unit = Quaternion(*(unit / np.linalg.norm(unit)))
        base = random_element(u(recipe.n), hrng, max_norm=1.0)
        hidden = HMatrix.scalar(unit, n1) @ HMatrix.from_complex(base)
        hinv = form_inverse(hidden)
        gens = [hidden @ HMatrix.from_complex(b) @ hinv for b in blocks]
    return GeneratorSet(recipe.spec, gens), hidden, blocks


def synthesize(recipe: SynthesisRecipe) -> GeneratorSet:
    """Generators of a group with the planted invariant submanifold, hidden by conjugation."""
    return synthesize_with_witness(recipe)[0]


# --------------------------------------------------------------------------
# the ρ1 ⊕ ρ2 example


def rho_sum_fixture(seed: int = 0) -> GeneratorSet:
    """SU(2) ⊕ SU(1,1) in SU(3,1) with real traces but no compatible real form.

    The SU(1,1) factor is the punctured-torus pair [[1,1],[1,2]], [[1,-1],[-1,2]]
    moved into SU(1,1) by the Cayley transform; the SU(2) factor is a random pair.
    """

    cay = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
    cay_inv = np.linalg.inv(cay)
    torus = [cay @ np.array(m, dtype=complex) @ cay_inv for m in ([[1, 1], [1, 2]], [[1, -1], [-1, 2]])]
    rng = np.random.default_rng(seed)
    compact = [random_element(su(2, 0), rng) for _ in torus]
    gens = [block_embed(direct_sum(a, b), su(3)) for a, b in zip(compact, torus)]
    return GeneratorSet(su(3), gens, ("a", "b"))
