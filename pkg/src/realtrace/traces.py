"""Word balls, trace realness, and the realness criteria for Sp(n,1)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import (DEFAULT_TOL, HMatrix, Quaternion, embed_mat_c2r, opnorm, qconj,
                      qmul)
from .groups import (GeneratorSet, GroupSpec, MembershipError, coerce_matrix, group_membership,
                     random_batch, require_member, sp, special_element, sp_inverse, u)

Word = tuple  # tuple of (generator index, exponent ±1)

DEFAULT_WORD_LENGTH = 6
MAX_WORDS = 100_000

_QI = np.array([0.0, 1.0, 0.0, 0.0])


# --------------------------------------------------------------------------
# word balls
#
# Matrices are multiplied in a complex representation: the matrix itself for
# complex groups, the block form [[Z, W], [-conj W, conj Z]] for quaternionic
# ones.  Letters are numbered 2*i (generator i) and 2*i + 1 (its inverse), and
# lexicographic order of words is lexicographic order of letter numbers.


def _letters(gens: GeneratorSet) -> np.ndarray:
    mats = []
    for g in gens.gens:
        c = g.complex_block() if isinstance(g, HMatrix) else np.asarray(g, dtype=complex)
        mats.append(c)
        mats.append(np.linalg.inv(c))
    return np.stack(mats)


def _to_word(letters) -> Word:
    return tuple((int(t) >> 1, -1 if t & 1 else 1) for t in letters)


def _from_block(gens: GeneratorSet, c: np.ndarray):
    return HMatrix.from_complex_block(c) if gens.group.quaternionic else c


@dataclass
class _Layer:
    letters: np.ndarray   # (count, length) letter numbers
    mats: np.ndarray      # (count, N, N) complex representations


def _layers(gens: GeneratorSet, L: int, max_words: int | None) -> Iterator[tuple[_Layer, bool]]:
    """Yield the layers of lengths 1..L and whether the cap truncated them."""
    if L < 1:
        raise ValueError("word length must be at least 1")
    cap = MAX_WORDS if max_words is None else int(max_words)
    letter_mats = _letters(gens)
    n_letters = len(letter_mats)
    layer = _Layer(np.arange(n_letters)[:, None], letter_mats)
    total = 0
    for length in range(1, L + 1):
        room = cap - total
        if length > 1:
            last = layer.letters[:, -1]
            allowed = np.arange(n_letters)[None, :] != (last ^ 1)[:, None]
            parent, letter = np.nonzero(allowed)
            truncated = len(parent) > room
            parent, letter = parent[:room], letter[:room]
            layer = _Layer(np.hstack([layer.letters[parent], letter[:, None]]),
                           layer.mats[parent] @ letter_mats[letter])
        else:
            truncated = n_letters > room
            layer = _Layer(layer.letters[:room], layer.mats[:room])
        total += len(layer.letters)
        # a full ball with longer words still to come also counts as truncated
        stop = truncated or (length < L and total >= cap)
        if len(layer.letters):
            yield layer, stop
        if stop:
            return


def word_ball(gens: GeneratorSet, L: int = DEFAULT_WORD_LENGTH,
              max_words: int | None = None) -> Iterator[tuple[Word, object]]:
    """Freely reduced nonempty words of length <= L with their matrices.

    Ordered by length, then lexicographically with letters ordered
    g1, g1^-1, g2, g2^-1, ...  At most ``max_words`` (default 10^5) are produced.
    """
    for layer, _ in _layers(gens, L, max_words):
        for letters, c in zip(layer.letters, layer.mats):
            yield _to_word(letters), _from_block(gens, c)


def evaluate_word(gens: GeneratorSet, word: Word):
    """Matrix of a word (reduced or not)."""
    g0 = gens.gens[0]
    out = HMatrix.identity(g0.shape[0]) if isinstance(g0, HMatrix) else np.eye(g0.shape[0], dtype=complex)
    for index, exp in word:
        g = gens.gens[index]
        out = out @ (g if exp == 1 else (g.inv() if isinstance(g, HMatrix) else np.linalg.inv(g)))
    return out


def format_word(word: Word, labels=None) -> str:
    if not word:
        return "1"
    names = []
    for index, exp in word:
        name = labels[index] if labels else f"g{index + 1}"
        names.append(name if exp == 1 else f"{name}^-1")
    return " ".join(names)


def _batch_trace_imag(mats: np.ndarray, quaternionic: bool) -> np.ndarray:
    if quaternionic:
        n = mats.shape[-1] // 2
        tz = np.einsum("kii->k", mats[:, :n, :n])
        tw = np.einsum("kii->k", mats[:, :n, n:])
        return np.sqrt(tz.imag ** 2 + np.abs(tw) ** 2)
    return np.abs(np.einsum("kii->k", mats).imag)


# --------------------------------------------------------------------------
# realness


@dataclass(frozen=True)
class RealnessReport:
    max_im: float
    offender: Word
    words_checked: int
    verdict: str          # "real" or "non-real"
    tol: float
    tol_effective: float
    truncated: bool

    @property
    def real(self) -> bool:
        return self.verdict == "real"


def realness_report(gens: GeneratorSet, L: int = DEFAULT_WORD_LENGTH, tol: float = DEFAULT_TOL,
                    max_words: int | None = None) -> RealnessReport:
    """Largest imaginary part of a trace over the word ball.

    The verdict uses ``tol * L * max(1, largest generator norm)`` so that
    rounding in long products does not register as non-realness.
    """
    quaternionic = gens.group.quaternionic
    scale = max([1.0] + [opnorm(g) for g in gens.gens])
    tol_eff = tol * L * scale
    best, offender, count, truncated = -1.0, (), 0, False
    for layer, trunc in _layers(gens, L, max_words):
        im = _batch_trace_imag(layer.mats, quaternionic)
        k = int(np.argmax(im))
        if im[k] > best:
            best, offender = float(im[k]), _to_word(layer.letters[k])
        count += len(im)
        truncated = truncated or trunc
    verdict = "real" if best <= tol_eff else "non-real"
    return RealnessReport(best, offender, count, verdict, tol, tol_eff, truncated)


def im_trace_consistency(g) -> tuple[float, float]:
    """``Im tr g`` next to the sum of the ``b`` entries of the real 2x2-block form.

    The second number reads each diagonal block ``[[a, -b], [b, a]]`` of the
    real embedding; the two agree for every complex matrix.
    """
    g = np.asarray(g, dtype=complex)
    r = embed_mat_c2r(g)
    n = g.shape[0]
    b_sum = float(sum(r[2 * t + 1, 2 * t] for t in range(n)))
    return float(np.trace(g).imag), b_sum


# --------------------------------------------------------------------------
# criteria for Sp(n,1)


def _require_sp(g) -> HMatrix:
    g = coerce_matrix(g, True)
    if g.shape[0] != g.shape[1] or g.shape[0] < 2:
        raise MembershipError("expected a square quaternion matrix of size at least 2")
    require_member(g, sp(g.shape[0] - 1))
    return g


def criterion_I(g) -> Quaternion:
    """Imaginary part of ``tr(g d_n g^-1)``; never zero for g in Sp(n,1)."""
    g = _require_sp(g)
    n = g.shape[0] - 1
    d = HMatrix.from_complex(special_element("d_n", n))
    return (g @ d @ sp_inverse(g)).trace().imag


def _lambda_components(comps: np.ndarray) -> np.ndarray:
    """λ for a column given as a (..., N, 4) array of quaternion coefficients."""
    terms = qmul(qmul(comps, _QI), qconj(comps))
    signs = np.ones(comps.shape[-2])
    signs[-1] = -1.0
    return np.einsum("...ra,r->...a", terms, signs)


def lambda_column(g, m: int) -> Quaternion:
    """``λ_m = Σ_{r<=n} a_rm i conj(a_rm) - a_{n+1,m} i conj(a_{n+1,m})`` (m is 1-based)."""
    g = coerce_matrix(g, True)
    size = g.shape[0]
    if not 1 <= m <= size:
        raise IndexError(f"column index {m} outside 1..{size}")
    comps = g.components()[:, m - 1, :]
    return Quaternion(*_lambda_components(comps))


def criterion_II(g) -> tuple[Quaternion, Quaternion, Quaternion]:
    """``(λ_{n-1}+λ_{n+1}, λ_n+λ_{n+1}, λ_{n-1}+λ_n)`` for g in Sp(n,1), n >= 2.

    Conjugates of the three c-elements all have real trace exactly when the
    three entries vanish; they never vanish together.
    """
    g = _require_sp(g)
    n = g.shape[0] - 1
    if n < 2:
        raise ValueError("criterion II needs n >= 2")
    lam_a, lam_b, lam_c = (lambda_column(g, m) for m in (n - 1, n, n + 1))
    return ((lam_a + lam_c).imag, (lam_b + lam_c).imag, (lam_a + lam_b).imag)


def criterion_I_batch(blocks: np.ndarray) -> np.ndarray:
    """Witness norms |criterion_I| for stacked complex-block Sp(n,1) samples.

    Uses ``Im tr(g d_n g^-1) = -λ_{n+1}(g)``.
    """
    comps = _column_components(blocks, -1)
    return np.linalg.norm(_lambda_components(comps), axis=-1)


def criterion_II_batch(blocks: np.ndarray) -> np.ndarray:
    """Largest component norm of :func:`criterion_II` for stacked block samples."""
    lam = [_lambda_components(_column_components(blocks, c)) for c in (-3, -2, -1)]
    parts = [lam[0] + lam[2], lam[1] + lam[2], lam[0] + lam[1]]
    return np.max([np.linalg.norm(p, axis=-1) for p in parts], axis=0)


def _column_components(blocks: np.ndarray, col: int) -> np.ndarray:
    n = blocks.shape[-1] // 2
    z = blocks[:, :n, :n][:, :, col]
    w = blocks[:, :n, n:][:, :, col]
    return np.stack([z.real, z.imag, w.real, w.imag], axis=-1)


# --------------------------------------------------------------------------
# equation systems


def _as_components(x) -> np.ndarray:
    if isinstance(x, HMatrix):
        return x.components().reshape(-1, 4)
    if isinstance(x, (list, tuple)) and x and isinstance(x[0], (Quaternion, complex, int, float)):
        return np.array([Quaternion.coerce(v).as_array() for v in x])
    return np.asarray(x, dtype=float)


def eqnsys_residual(x) -> tuple:
    """Residuals of ``Σ x_r i conj x_r - x_{n+1} i conj x_{n+1} = 0`` and
    ``|x_1|^2 + ... + |x_n|^2 - |x_{n+1}|^2 = -1``, plus the certificate.

    ``x`` is a quaternion vector, or an array of shape (..., n+1, 4).  The
    certificate ``2 Σ_m (t_{m,j}^2 + t_{m,k}^2)`` with
    ``t_m = conj(x_{n+1}) x_m / |x_{n+1}|^2`` is a sum of squares; if both
    equations held it would have to be negative.  Batched input gives arrays.
    """
    comps = _as_components(x)
    first = np.linalg.norm(_lambda_components(comps), axis=-1)
    sq = np.sum(comps ** 2, axis=-1)
    second = np.sum(sq[..., :-1], axis=-1) - sq[..., -1] + 1.0
    last = comps[..., -1:, :]
    last_sq = sq[..., -1]
    if np.any(last_sq == 0.0):
        raise ZeroDivisionError("certificate needs a nonzero last coordinate")
    t = qmul(qconj(last), comps[..., :-1, :]) / last_sq[..., None, None]
    cert = 2.0 * np.sum(t[..., 2] ** 2 + t[..., 3] ** 2, axis=-1)
    if comps.ndim == 2:
        return float(first), float(second), float(cert)
    return first, second, cert


def constraint_surface_points(n: int, count: int, seed=None) -> np.ndarray:
    """Random x in H^{n+1} with ``|x_1|^2+...+|x_n|^2 - |x_{n+1}|^2 = -1``."""
    rng = np.random.default_rng(seed)
    head = rng.standard_normal((count, n, 4)) * rng.exponential(1.0, (count, 1, 1))
    tail_dir = rng.standard_normal((count, 1, 4))
    tail_dir /= np.linalg.norm(tail_dir, axis=-1, keepdims=True)
    radius = np.sqrt(np.sum(head ** 2, axis=(1, 2)) + 1.0)
    return np.concatenate([head, tail_dir * radius[:, None, None]], axis=1)


_MINKOWSKI_21 = np.diag([1.0, 1.0, -1.0])


def alleqns_residual(x, y, z) -> tuple[float, float]:
    """Gram residual for four pairwise orthogonal vectors of square norm 1/4 in R^{2,1}.

    ``v_t = (x_t, y_t, z_t)`` uses the t-th quaternion coefficients.  Returns
    the largest entry of ``G - I/4`` and its spectral norm; the latter is at
    least 1/4 because a 4x4 Gram matrix in a 3-dimensional space is singular.
    """
    v = np.stack([Quaternion.coerce(s).as_array() for s in (x, y, z)], axis=1)  # (4, 3)
    gram = v @ _MINKOWSKI_21 @ v.T
    defect = gram - np.eye(4) / 4.0
    return float(np.abs(defect).max()), float(np.linalg.norm(defect, 2))


# --------------------------------------------------------------------------
# odd power sums


def odd_power_sums_vanish(a, tol: float = DEFAULT_TOL) -> bool:
    """All of ``Σ a_t^{2s+1}``, s = 0..r-1, vanish (entries scaled by max |a_t|)."""
    a = np.asarray(a, dtype=float).ravel()
    scale = float(np.abs(a).max()) if a.size else 0.0
    if scale == 0.0:
        return True
    b = a / scale
    r = b.size
    sums = [np.sum(b ** (2 * s + 1)) for s in range(r)]
    return bool(max(abs(v) for v in sums) <= tol * r)


def odd_power_sums_pairing(a, tol: float = DEFAULT_TOL) -> bool:
    """The nonzero entries split into pairs (c, -c), up to ``tol * max |a_t|``."""
    a = np.asarray(a, dtype=float).ravel()
    scale = float(np.abs(a).max()) if a.size else 0.0
    if scale == 0.0:
        return True
    b = a / scale
    pos = np.sort(b[b > tol])
    neg = np.sort(-b[b < -tol])
    if pos.size != neg.size:
        return False
    return bool(np.all(np.abs(pos - neg) <= tol))


def odd_power_sums_check(a, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``a_1^{2s+1} + ... + a_r^{2s+1} = 0`` for every s = 0..r-1.

    Computed from the power sums; :func:`odd_power_sums_pairing` gives the
    same answer from the shape of the solutions.
    """
    return odd_power_sums_vanish(a, tol)


# --------------------------------------------------------------------------
# Sp(1)·SU(1,1)


def sp1_su11_membership(g, tol: float = DEFAULT_TOL) -> tuple[bool, Quaternion]:
    """Decide whether ``g`` in Sp(1,1) is a unit quaternion times an SU(1,1) element.

    With ``h = conj(a)/|a|`` for the corner entry a, g qualifies exactly when
    ``h g`` is a complex matrix in U(1,1).  On success the returned normalizer
    also removes the determinant phase, so ``h' g`` lies in SU(1,1).
    """
    g = coerce_matrix(g, True)
    if g.shape != (2, 2):
        raise MembershipError("sp1_su11_membership needs a 2x2 matrix")
    require_member(g, sp(1))
    a = g[0, 0]
    h = a.conj() / a.norm()
    hg = h * g
    scale = max(1.0, opnorm(g))
    if float(np.abs(hg.w).max()) > tol * scale:
        return False, h
    c = np.array(hg.z)
    if not group_membership(c, u(1), tol).ok:
        return False, h
    phase = np.angle(np.linalg.det(c))
    return True, Quaternion.coerce(np.exp(-0.5j * phase)) * h


def conjugated_trace_scan(g, subgroup: GroupSpec, samples: int = 1000, seed=None,
                          scale: float = 1.0) -> float:
    """Max over sampled A in ``subgroup`` of |Im tr(g A g^-1)|.

    A smaller subgroup sits in the bottom-right corner (identity elsewhere).
    """
    quaternionic = isinstance(g, HMatrix)
    gc = g.complex_block() if quaternionic else np.asarray(g, dtype=complex)
    n = gc.shape[0] // (2 if quaternionic else 1)
    k = subgroup.size
    if k > n:
        raise ValueError(f"{subgroup} does not fit in a {n}x{n} matrix")
    batch = random_batch(subgroup, samples, seed, scale=scale)
    if subgroup.quaternionic:
        kb = batch.shape[-1] // 2
        zs, ws = batch[:, :kb, :kb], batch[:, :kb, kb:]
    else:
        zs, ws = batch, np.zeros_like(batch)
    z_full = np.broadcast_to(np.eye(n, dtype=complex), (samples, n, n)).copy()
    w_full = np.zeros((samples, n, n), dtype=complex)
    z_full[:, n - k:, n - k:] = zs
    w_full[:, n - k:, n - k:] = ws
    if quaternionic:
        a_blocks = np.block([[z_full, w_full], [-w_full.conj(), z_full.conj()]])
    else:
        if subgroup.quaternionic:
            raise ValueError("a quaternionic subgroup needs a quaternion matrix g")
        a_blocks = z_full
    conj = gc @ a_blocks @ np.linalg.inv(gc)
    return float(_batch_trace_imag(conj, quaternionic).max())
