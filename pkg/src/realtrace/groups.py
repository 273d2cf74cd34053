"""Matrix groups preserving ``I_{p,q}``: membership, special elements, sampling."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .algebra import (DEFAULT_TOL, HMatrix, direct_sum, expm, max_abs, opnorm)
from .geometry import form_matrix

FAMILIES = ("SU", "U", "Sp", "SO", "O", "I", "block")
_COMPLEX_FAMILIES = ("SU", "U", "SO", "O", "I")


class MembershipError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """A classical group of signature ``(p, q)``, or a block-diagonal product.

    Block specs list their summands in order along the diagonal; the compact
    summands come first so the negative direction sits in the last block.
    ``ambient`` names the family of the whole matrix (``"SU"``, ``"U"`` or
    ``"Sp"``) and fixes both the scalar field and the determinant rule.
    """

    family: str
    p: int = 0
    q: int = 0
    blocks: tuple["GroupSpec", ...] = ()
    ambient: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown group family {self.family!r}")
        if self.family == "block":
            if not self.blocks or self.ambient not in ("SU", "U", "Sp"):
                raise ValueError("block specs need summands and an SU/U/Sp ambient")
            if any(b.q for b in self.blocks[:-1]):
                raise ValueError("only the last summand may carry the negative direction")
        elif self.p + self.q < 1 or self.q not in (0, 1):
            raise ValueError(f"bad signature ({self.p}, {self.q})")

    @property
    def size(self) -> int:
        if self.family == "block":
            return sum(b.size for b in self.blocks)
        return self.p + self.q

    @property
    def signature(self) -> tuple[int, int]:
        if self.family == "block":
            return (sum(b.p for b in self.blocks), sum(b.q for b in self.blocks))
        return (self.p, self.q)

    @property
    def quaternionic(self) -> bool:
        return self.family == "Sp" or self.ambient == "Sp"

    @property
    def form(self) -> np.ndarray:
        return form_matrix(*self.signature)

    def __str__(self):
        if self.family == "block":
            return " ⊕ ".join(str(b) for b in self.blocks) + f" in {self.ambient}"
        if self.family == "I":
            return f"I_{self.p}"
        sig = f"{self.p},{self.q}" if self.q else f"{self.p}"
        return f"{self.family}({sig})"


def su(n: int, q: int = 1) -> GroupSpec:
    return GroupSpec("SU", n, q)


def u(n: int, q: int = 1) -> GroupSpec:
    return GroupSpec("U", n, q)


def sp(n: int, q: int = 1) -> GroupSpec:
    return GroupSpec("Sp", n, q)


def so(n: int, q: int = 1) -> GroupSpec:
    return GroupSpec("SO", n, q)


def o(n: int, q: int = 1) -> GroupSpec:
    return GroupSpec("O", n, q)


def trivial(k: int) -> GroupSpec:
    return GroupSpec("I", k, 0)


def block(ambient: str, *summands: GroupSpec) -> GroupSpec:
    return GroupSpec("block", blocks=tuple(summands), ambient=ambient)


SU11 = su(1)
SU2 = su(2, 0)
SP1 = sp(1, 0)


def coerce_matrix(g, quaternionic: bool):
    """Return ``g`` as an HMatrix (quaternionic) or a complex ndarray."""
    if quaternionic:
        return g if isinstance(g, HMatrix) else HMatrix.from_complex(g)
    if isinstance(g, HMatrix):
        # genuinely quaternionic input is kept so membership can report it
        return np.array(g.z) if g.is_complex(0.0) else g
    return np.asarray(g, dtype=complex)


# --------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    residual: float
    parts: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _form_residual(g, form) -> float:
    if isinstance(g, HMatrix):
        gf = HMatrix(form @ g.z, form @ g.w)
        lhs = g.H @ gf
        defect = lhs - np.asarray(form, dtype=complex)
    else:
        defect = g.conj().T @ form @ g - form
    return max_abs(defect) / max(1.0, opnorm(g)) ** 2


def _membership_parts(g, spec: GroupSpec) -> dict:
    n = spec.size
    if g.shape != (n, n):
        raise MembershipError(f"expected a {n}x{n} matrix for {spec}, got {g.shape}")
    parts = {}
    scale = max(1.0, opnorm(g))
    fam = spec.family
    if fam == "block":
        idx = np.cumsum([0] + [b.size for b in spec.blocks])
        mask = np.ones((n, n), dtype=bool)
        for t, b in enumerate(spec.blocks):
            sl = slice(idx[t], idx[t + 1])
            mask[sl, sl] = False
            sub = _membership_parts(g[sl, sl] if isinstance(g, HMatrix) else g[sl, sl], b)
            for key, val in sub.items():
                parts[f"block{t}.{key}"] = val
        if isinstance(g, HMatrix):
            off = np.sqrt(np.abs(g.z) ** 2 + np.abs(g.w) ** 2)[mask]
        else:
            off = np.abs(g)[mask]
        parts["off_block"] = float(off.max()) / scale if off.size else 0.0
        parts["form"] = _form_residual(g, spec.form)
        if spec.ambient == "SU":
            parts["det"] = abs(np.linalg.det(_complex_part(g, parts, "ambient")) - 1.0)
        return parts

    if fam in _COMPLEX_FAMILIES and isinstance(g, HMatrix):
        g = _complex_part(g, parts, fam)
    if fam == "I":
        parts["identity"] = max_abs(g - np.eye(n)) / scale
        return parts
    parts["form"] = _form_residual(g, spec.form)
    if fam in ("SO", "O"):
        parts["real"] = float(np.abs(np.asarray(g).imag).max()) / scale
    if fam in ("SU", "SO"):
        parts["det"] = abs(np.linalg.det(g) - 1.0)
    return parts


def _complex_part(g, parts: dict, tag: str):
    if isinstance(g, HMatrix):
        parts[f"{tag}.complex"] = float(np.abs(g.w).max()) / max(1.0, opnorm(g)) if g.w.size else 0.0
        return np.array(g.z)
    return g


def group_membership(g, spec: GroupSpec, tol: float = DEFAULT_TOL) -> MembershipReport:
    """Check ``g`` against ``spec``.

    The residual is the largest of the form defect ``|g* I g - I|`` (scaled by
    ``max(1, |g|)^2``), the determinant defect, realness / complexness
    defects and the off-block defect, whichever apply.
    """
    g = coerce_matrix(g, spec.quaternionic)
    parts = _membership_parts(g, spec)
    residual = max(parts.values()) if parts else 0.0
    return MembershipReport(bool(residual <= tol), float(residual), parts)


def require_member(g, spec: GroupSpec, tol: float = 1e-8):
    report = group_membership(g, spec, tol)
    if not report.ok:
        raise MembershipError(f"matrix is not in {spec} (residual {report.residual:.3e})")
    return report


# --------------------------------------------------------------------------
# explicit formulas


def sp_inverse(g: HMatrix, tol: float = 1e-8) -> HMatrix:
    """Inverse of an element of Sp(n,1) read off its entries.

    Entry (i, j) of the inverse is conj(g_{j,i}), negated in the last row and
    column except at the corner.
    """
    g = coerce_matrix(g, True)
    n = g.shape[0] - 1
    require_member(g, sp(n), tol)
    return _form_conj(g)


def _form_conj(g: HMatrix) -> HMatrix:
    s = np.ones(g.shape[0])
    s[-1] = -1.0
    sign = np.outer(s, s)
    h = g.H
    return HMatrix(sign * h.z, sign * h.w)


def form_inverse(g):
    """``I g* I``: the inverse of any form-preserving matrix, complex or quaternion."""
    if isinstance(g, HMatrix):
        return _form_conj(g)
    s = np.ones(g.shape[0])
    s[-1] = -1.0
    return np.outer(s, s) * g.conj().T


def special_element(name: str, n: int | None = None, theta: float | None = None) -> np.ndarray:
    """The fixed matrices used by the realness criteria.

    ``"d_n"``: diag(1, ..., 1, i) of size n+1.  ``"c1"``, ``"c2"``, ``"c3"``:
    the 3x3 diagonal elements of SU(2,1).  ``"R"``: diag(e^{iθ}, e^{-iθ}).
    ``"K"``: [[i, i], [1, -1]], which conjugates R(θ) to the rotation by θ.
    """
    if name == "d_n":
        if n is None or n < 1:
            raise ValueError("d_n needs n >= 1")
        d = np.ones(n + 1, dtype=complex)
        d[-1] = 1j
        return np.diag(d)
    if name == "c1":
        return np.diag([1, 1j, -1j])
    if name == "c2":
        return np.diag([1j, 1, -1j])
    if name == "c3":
        return np.diag([1j, -1j, 1])
    if name == "R":
        if theta is None:
            raise ValueError("R needs theta")
        return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    if name == "K":
        return np.array([[1j, 1j], [1, -1]])
    raise ValueError(f"unknown special element {name!r}")


def su11_element(z: complex, w: complex, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``[[z, w], [conj w, conj z]]`` with ``|z|^2 - |w|^2 = 1``."""
    z, w = complex(z), complex(w)
    if abs(abs(z) ** 2 - abs(w) ** 2 - 1.0) > tol * max(1.0, abs(z) ** 2):
        raise ValueError("su11_element needs |z|^2 - |w|^2 = 1")
    return np.array([[z, w], [w.conjugate(), z.conjugate()]])


def block_embed(h, ambient: GroupSpec, tol: float = 1e-8):
    """``I_{N-k} ⊕ h`` inside the ambient group (h goes in the bottom-right)."""
    k = h.shape[0]
    n_total = ambient.size
    if k > n_total:
        raise MembershipError(f"block of size {k} does not fit in {ambient}")
    h = coerce_matrix(h, ambient.quaternionic)
    if k == n_total:
        out = h
    else:
        eye = np.eye(n_total - k, dtype=complex)
        out = direct_sum(HMatrix.from_complex(eye) if isinstance(h, HMatrix) else eye, h)
    require_member(out, ambient, tol)
    return out


# --------------------------------------------------------------------------
# sampling


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def lie_algebra_element(spec: GroupSpec, seed=None):
    """Random X with ``X* I + I X = 0`` (plus the family's extra constraints).

    X = I A with A skew-adjoint; coefficients are standard normal.
    """
    rng = _rng(seed)
    if spec.family == "block":
        parts = [lie_algebra_element(b, rng) for b in spec.blocks]
        if spec.quaternionic:
            return direct_sum(*[HMatrix.from_complex(x) for x in parts])
        x = direct_sum(*parts)
        if spec.ambient == "SU":
            x = x - np.trace(x) / x.shape[0] * np.eye(x.shape[0])
        return x
    n = spec.size
    form = spec.form
    if spec.family == "I":
        return np.zeros((n, n), dtype=complex)
    if spec.family in ("SO", "O"):
        g = rng.standard_normal((n, n))
        return (form @ (g - g.T) / 2).astype(complex)
    if spec.family in ("SU", "U"):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        x = form @ (g - g.conj().T) / 2
        if spec.family == "SU":
            x = x - np.trace(x) / n * np.eye(n)
        return x
    # Sp: A = Z + W j skew-adjoint means Z skew-Hermitian and W symmetric
    gz = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    gw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HMatrix(form @ (gz - gz.conj().T) / 2, form @ (gw + gw.T) / 2)


def random_element(spec: GroupSpec, seed=None, scale: float = 1.0, max_norm: float | None = None):
    """Seeded sample ``exp(X)`` with X from :func:`lie_algebra_element`.

    ``scale`` multiplies X; ``max_norm`` caps its Frobenius norm.
    """
    x = lie_algebra_element(spec, seed)
    nrm = x.norm() if isinstance(x, HMatrix) else float(np.linalg.norm(x))
    factor = scale
    if max_norm is not None and nrm * factor > max_norm:
        factor = max_norm / nrm
    if isinstance(x, HMatrix):
        return expm(HMatrix(x.z * factor, x.w * factor))
    g = expm(x * factor)
    if spec.family in ("SO", "O"):
        return g.real.astype(complex)
    return g


# --------------------------------------------------------------------------
# generator sets


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generators of a subgroup of ``group`` with labels."""

    group: GroupSpec
    gens: tuple
    labels: tuple = ()
    tol: float = field(default=1e-8, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(coerce_matrix(g, self.group.quaternionic) for g in self.gens)
        if not gens:
            raise ValueError("a generator set needs at least one generator")
        labels = tuple(self.labels) or tuple(f"g{t + 1}" for t in range(len(gens)))
        if len(labels) != len(gens):
            raise ValueError("one label per generator")
        for label, g in zip(labels, gens):
            report = group_membership(g, self.group, self.tol)
            if not report.ok:
                raise MembershipError(
                    f"generator {label} is not in {self.group} (residual {report.residual:.3e})")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)


def _lie_algebra_batch(spec: GroupSpec, count: int, rng) -> np.ndarray:
    """Vectorized :func:`lie_algebra_element`; quaternionic output in block form."""
    if spec.family == "block":
        xs = [lie_algebra_element(spec, rng) for _ in range(count)]
        return np.stack([x.complex_block() if isinstance(x, HMatrix) else np.asarray(x, dtype=complex)
                         for x in xs])
    n = spec.size
    diag = np.diag(spec.form)[None, :, None]
    if spec.family == "I":
        return np.zeros((count, n, n), dtype=complex)
    if spec.family in ("SO", "O"):
        g = rng.standard_normal((count, n, n))
        return (diag * (g - g.transpose(0, 2, 1)) / 2).astype(complex)
    g = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    x = diag * (g - g.conj().transpose(0, 2, 1)) / 2
    if spec.family == "SU":
        x = x - (np.trace(x, axis1=1, axis2=2) / n)[:, None, None] * np.eye(n)
    if spec.family in ("SU", "U"):
        return x
    gw = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    w = diag * (gw + gw.transpose(0, 2, 1)) / 2
    return np.block([[x, w], [-w.conj(), x.conj()]])


def random_batch(spec: GroupSpec, count: int, seed=None, scale: float = 1.0,
                 max_norm: float | None = None) -> np.ndarray:
    """``count`` samples stacked as complex arrays of shape (count, N, N).

    Quaternionic samples are returned in their complex block form
    ``[[Z, W], [-conj W, conj Z]]`` (see :meth:`HMatrix.complex_block`).
    """
    rng = _rng(seed)
    x = _lie_algebra_batch(spec, count, rng) * scale
    if max_norm is not None:
        # Frobenius norm of the quaternion matrix is the block norm over sqrt 2
        nrm = np.linalg.norm(x, axis=(1, 2)) / (np.sqrt(2.0) if spec.quaternionic else 1.0)
        x = x * np.minimum(1.0, max_norm / np.maximum(nrm, 1e-300))[:, None, None]
    out = scipy.linalg.expm(x)
    if spec.family in ("SO", "O"):
        out = out.real.astype(complex)
    return out
