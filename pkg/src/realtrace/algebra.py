"""Scalars and matrices over C and H, plus the real/complex embeddings.

Complex matrices are plain ``numpy`` arrays.  Quaternion matrices are
:class:`HMatrix` objects storing the pair ``(Z, W)`` of complex arrays with
``A = Z + W j``.  Matrices act on column vectors from the left and vector
scalars multiply on the right, so ``A @ (v * q) == (A @ v) * q``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-9


class EigenError(ArithmeticError):
    """Raised when the eigenvalue iteration does not converge."""


# --------------------------------------------------------------------------
# quaternion scalars


def qmul(p, q):
    """Hamilton product of quaternion arrays with trailing axis ``(a, b, c, d)``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=-1)


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class Quaternion:
    """The quaternion ``a + b i + c j + d k``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def coerce(cls, x) -> "Quaternion":
        if isinstance(x, Quaternion):
            return x
        if isinstance(x, (complex, np.complexfloating)):
            return cls(x.real, x.imag)
        if isinstance(x, Number):
            return cls(float(x))
        raise TypeError(f"cannot interpret {x!r} as a quaternion")

    @classmethod
    def from_pair(cls, z: complex, w: complex) -> "Quaternion":
        """Build ``z + w j`` from two complex numbers."""
        return cls(z.real, z.imag, w.real, w.imag)

    @property
    def pair(self) -> tuple[complex, complex]:
        return complex(self.a, self.b), complex(self.c, self.d)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def real(self) -> float:
        return self.a

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.b, self.c, self.d)

    def imag_norm(self) -> float:
        return math.sqrt(self.b ** 2 + self.c ** 2 + self.d ** 2)

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> float:
        return math.sqrt(self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2)

    def inverse(self) -> "Quaternion":
        n2 = self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion inverse of zero")
        return Quaternion(self.a / n2, -self.b / n2, -self.c / n2, -self.d / n2)

    def is_complex(self, tol: float = DEFAULT_TOL) -> bool:
        return math.hypot(self.c, self.d) <= tol

    def isclose(self, other, tol: float = DEFAULT_TOL) -> bool:
        return (self - Quaternion.coerce(other)).norm() <= tol

    def __add__(self, other):
        try:
            o = Quaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        try:
            return self + (-Quaternion.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, HMatrix):
            return NotImplemented
        try:
            o = Quaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return Quaternion(*qmul(self.as_array(), o.as_array()))

    def __rmul__(self, other):
        return Quaternion.coerce(other) * self

    def __truediv__(self, other):
        return self * Quaternion.coerce(other).inverse()

    def __repr__(self):
        return f"Quaternion({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


QI = Quaternion(0, 1, 0, 0)
QJ = Quaternion(0, 0, 1, 0)
QK = Quaternion(0, 0, 0, 1)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q`` (order matters)."""
    return Quaternion.coerce(p) * Quaternion.coerce(q)


# --------------------------------------------------------------------------
# quaternion matrices


def _pair_matmul(z1, w1, z2, w2):
    # (Z1 + W1 j)(Z2 + W2 j) = (Z1 Z2 - W1 conj(W2)) + (Z1 W2 + W1 conj(Z2)) j
    return z1 @ z2 - w1 @ w2.conj(), z1 @ w2 + w1 @ z2.conj()


class HMatrix:
    """Matrix with quaternion entries, stored as ``Z + W j``.

    Rectangular shapes are allowed so that column vectors are ``(N, 1)``
    matrices.  Instances are treated as immutable.
    """

    __slots__ = ("z", "w")
    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, z, w=None):
        z = np.array(z, dtype=complex)
        w = np.zeros_like(z) if w is None else np.array(w, dtype=complex)
        if z.ndim == 1:
            z = z[:, None]
            w = w[:, None]
        if z.shape != w.shape or z.ndim != 2:
            raise ValueError(f"inconsistent component shapes {z.shape} and {w.shape}")
        z.flags.writeable = False
        w.flags.writeable = False
        self.z = z
        self.w = w

    # construction -------------------------------------------------------

    @classmethod
    def from_components(cls, arr) -> "HMatrix":
        """From a real array of shape ``(rows, cols, 4)`` (or ``(rows, 4)`` for a vector)."""
        arr = np.asarray(arr, dtype=float)
        if arr.shape[-1] != 4:
            raise ValueError("last axis must hold the four quaternion coefficients")
        if arr.ndim == 2:
            arr = arr[:, None, :]
        return cls(arr[..., 0] + 1j * arr[..., 1], arr[..., 2] + 1j * arr[..., 3])

    @classmethod
    def from_entries(cls, rows) -> "HMatrix":
        """From nested lists of scalars (real, complex or :class:`Quaternion`)."""
        comps = [[Quaternion.coerce(x).as_array() for x in row] for row in rows]
        return cls.from_components(np.array(comps, dtype=float).reshape(len(rows), -1, 4))

    @classmethod
    def from_complex(cls, m) -> "HMatrix":
        if isinstance(m, HMatrix):
            return m
        return cls(np.atleast_2d(np.asarray(m, dtype=complex)))

    @classmethod
    def identity(cls, n: int) -> "HMatrix":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def scalar(cls, q, n: int) -> "HMatrix":
        z, w = Quaternion.coerce(q).pair
        return cls(z * np.eye(n), w * np.eye(n))

    @classmethod
    def from_complex_block(cls, m) -> "HMatrix":
        """Inverse of :meth:`complex_block`."""
        m = np.asarray(m)
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[:n, n:])

    # views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.z.shape

    def components(self) -> np.ndarray:
        return np.stack([self.z.real, self.z.imag, self.w.real, self.w.imag], axis=-1)

    def complex_block(self) -> np.ndarray:
        """The complex matrix ``[[Z, W], [-conj W, conj Z]]``.

        It is the matrix of ``x -> A x`` in the coordinates ``(X, -conj Y)`` of
        ``x = X + Y j``; those coordinates are complex-linear for right
        multiplication by complex scalars.
        """
        return np.block([[self.z, self.w], [-self.w.conj(), self.z.conj()]])

    def is_complex(self, tol: float = DEFAULT_TOL) -> bool:
        return self.w.size == 0 or float(np.abs(self.w).max()) <= tol

    def to_complex(self, tol: float | None = None) -> np.ndarray:
        if tol is not None and not self.is_complex(tol):
            raise ValueError("matrix has non-complex entries")
        return np.array(self.z)

    def __getitem__(self, key):
        if isinstance(key, tuple) and all(isinstance(k, (int, np.integer)) for k in key):
            return Quaternion.from_pair(complex(self.z[key]), complex(self.w[key]))
        z = self.z[key]
        w = self.w[key]
        if z.ndim == 1:
            z, w = z[:, None], w[:, None]
        return HMatrix(z, w)

    @property
    def H(self) -> "HMatrix":
        """Conjugate transpose.  conj(Z + W j) = conj(Z) - W j entrywise."""
        return HMatrix(self.z.conj().T, -self.w.T)

    @property
    def T(self) -> "HMatrix":
        return HMatrix(self.z.T, self.w.T)

    def conj(self) -> "HMatrix":
        return HMatrix(self.z.conj(), -self.w)

    def trace(self) -> Quaternion:
        return Quaternion.from_pair(complex(np.trace(self.z)), complex(np.trace(self.w)))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.z) ** 2 + np.abs(self.w) ** 2)))

    def inv(self) -> "HMatrix":
        return HMatrix.from_complex_block(np.linalg.inv(self.complex_block()))

    # arithmetic ---------------------------------------------------------

    def __matmul__(self, other):
        if isinstance(other, HMatrix):
            return HMatrix(*_pair_matmul(self.z, self.w, other.z, other.w))
        if isinstance(other, np.ndarray):
            other = np.asarray(other, dtype=complex)
            if other.ndim == 1:
                other = other[:, None]
            return HMatrix(self.z @ other, self.w @ other.conj())
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray):
            return HMatrix.from_complex(other) @ self
        return NotImplemented

    def __add__(self, other):
        other = _as_hmatrix(other)
        return HMatrix(self.z + other.z, self.w + other.w)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_hmatrix(other)
        return HMatrix(self.z - other.z, self.w - other.w)

    def __rsub__(self, other):
        return _as_hmatrix(other) - self

    def __neg__(self):
        return HMatrix(-self.z, -self.w)

    def __mul__(self, q):
        """Right scalar multiplication ``A q``."""
        if isinstance(q, HMatrix):
            return NotImplemented
        z2, w2 = Quaternion.coerce(q).pair
        # (Z + W j)(z2 + w2 j) = (Z z2 - W conj w2) + (Z w2 + W conj z2) j
        return HMatrix(self.z * z2 - self.w * w2.conjugate(), self.z * w2 + self.w * z2.conjugate())

    def __rmul__(self, q):
        """Left scalar multiplication ``q A``."""
        z1, w1 = Quaternion.coerce(q).pair
        return HMatrix(z1 * self.z - w1 * self.w.conj(), z1 * self.w + w1 * self.z.conj())

    def __truediv__(self, x):
        if not isinstance(x, (int, float, np.floating)):
            raise TypeError("HMatrix may only be divided by a real scalar")
        return HMatrix(self.z / x, self.w / x)

    def allclose(self, other, tol: float = DEFAULT_TOL) -> bool:
        other = _as_hmatrix(other)
        return self.shape == other.shape and max_abs(self - other) <= tol

    def __repr__(self):
        return f"HMatrix(shape={self.shape},\n z={self.z!r},\n w={self.w!r})"


def _as_hmatrix(x) -> HMatrix:
    if isinstance(x, HMatrix):
        return x
    if isinstance(x, np.ndarray):
        return HMatrix.from_complex(x)
    raise TypeError(f"cannot use {type(x).__name__} as a quaternion matrix")


# --------------------------------------------------------------------------
# generic matrix operations (ndarray or HMatrix)


def is_quaternionic(m) -> bool:
    return isinstance(m, HMatrix)


def multiply(a, b):
    if isinstance(a, HMatrix) or isinstance(b, HMatrix):
        return _as_hmatrix(a) @ _as_hmatrix(b)
    return np.asarray(a) @ np.asarray(b)


def add(a, b):
    if isinstance(a, HMatrix) or isinstance(b, HMatrix):
        return _as_hmatrix(a) + _as_hmatrix(b)
    return np.asarray(a) + np.asarray(b)


def scalar_multiply(q, a):
    """Left scalar multiple ``q a``."""
    if isinstance(a, HMatrix) or isinstance(q, Quaternion):
        return Quaternion.coerce(q) * _as_hmatrix(a)
    return q * np.asarray(a)


def conjugate_transpose(m):
    if isinstance(m, HMatrix):
        return m.H
    return np.asarray(m).conj().T


def trace(m):
    """Sum of the diagonal; a :class:`Quaternion` for quaternion matrices."""
    if isinstance(m, HMatrix):
        return m.trace()
    return complex(np.trace(m))


def complex_determinant(m) -> complex:
    if isinstance(m, HMatrix):
        raise TypeError("complex_determinant is defined for complex matrices only")
    return complex(np.linalg.det(np.asarray(m, dtype=complex)))


def direct_sum(*blocks):
    """Block-diagonal matrix ``A ⊕ B ⊕ ...``."""
    if not blocks:
        raise ValueError("direct_sum needs at least one block")
    if any(isinstance(b, HMatrix) for b in blocks):
        hs = [_as_hmatrix(b) for b in blocks]
        return HMatrix(scipy.linalg.block_diag(*[h.z for h in hs]),
                       scipy.linalg.block_diag(*[h.w for h in hs]))
    return scipy.linalg.block_diag(*[np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks])


def identity_like(m):
    n = m.shape[0]
    return HMatrix.identity(n) if isinstance(m, HMatrix) else np.eye(n, dtype=complex)


def inverse(m):
    if isinstance(m, HMatrix):
        return m.inv()
    return np.linalg.inv(m)


def max_abs(m) -> float:
    if isinstance(m, HMatrix):
        if m.z.size == 0:
            return 0.0
        return float(np.sqrt(np.abs(m.z) ** 2 + np.abs(m.w) ** 2).max())
    m = np.asarray(m)
    return float(np.abs(m).max()) if m.size else 0.0


def opnorm(m) -> float:
    """Operator 2-norm (via the complex embedding for quaternion matrices)."""
    if isinstance(m, HMatrix):
        return float(np.linalg.norm(m.complex_block(), 2))
    return float(np.linalg.norm(np.asarray(m), 2))


def imag_norm(x) -> float:
    """Size of the imaginary part of a complex or quaternion scalar."""
    if isinstance(x, Quaternion):
        return x.imag_norm()
    return abs(complex(x).imag)


def complexify(m) -> np.ndarray:
    """Complex matrix carrying the same eigen-data (block form for HMatrix)."""
    if isinstance(m, HMatrix):
        return m.complex_block()
    return np.asarray(m, dtype=complex)


# --------------------------------------------------------------------------
# embeddings

_C2R_ONE = np.eye(2)
_C2R_I = np.array([[0.0, -1.0], [1.0, 0.0]])

_Q2R_BASIS = (
    np.eye(4),
    np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float),
    np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=float),
    np.array([[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float),
)


def embed_c2r(z: complex) -> np.ndarray:
    """``a + ib`` -> ``[[a, -b], [b, a]]``."""
    z = complex(z)
    return z.real * _C2R_ONE + z.imag * _C2R_I


def embed_mat_c2r(g) -> np.ndarray:
    """Entrywise :func:`embed_c2r`; a (2N x 2N) real matrix."""
    g = np.asarray(g, dtype=complex)
    return np.kron(g.real, _C2R_ONE) + np.kron(g.imag, _C2R_I)


def embed_q2r(q) -> np.ndarray:
    """4x4 real matrix with first row ``(a, b, c, d)``; multiplicative."""
    a, b, c, d = Quaternion.coerce(q).as_array()
    return a * _Q2R_BASIS[0] + b * _Q2R_BASIS[1] + c * _Q2R_BASIS[2] + d * _Q2R_BASIS[3]


def embed_mat_q2r(g) -> np.ndarray:
    comps = _as_hmatrix(g).components()
    return sum(np.kron(comps[..., t], _Q2R_BASIS[t]) for t in range(4))


def embed_q2c(q) -> np.ndarray:
    """``z + w j`` -> ``[[z, w], [-conj w, conj z]]``."""
    z, w = Quaternion.coerce(q).pair
    return np.array([[z, w], [-w.conjugate(), z.conjugate()]])


def embed_mat_q2c(g) -> np.ndarray:
    """Entrywise :func:`embed_q2c`; each entry becomes a 2x2 block."""
    h = _as_hmatrix(g)
    return (np.kron(h.z, [[1, 0], [0, 0]]) + np.kron(h.w, [[0, 1], [0, 0]])
            + np.kron(-h.w.conj(), [[0, 0], [1, 0]]) + np.kron(h.z.conj(), [[0, 0], [0, 1]]))


# --------------------------------------------------------------------------
# eigen-solver


def eigen_complex(m) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs of a complex matrix (quaternion input goes through the block embedding).

    Eigenvectors are unit length.  For quaternion matrices right-eigenvalue
    classes show up as conjugate pairs.
    """
    c = complexify(m)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("eigen_complex needs a square matrix")
    if not np.all(np.isfinite(c)):
        raise EigenError("matrix has non-finite entries")
    try:
        vals, vecs = np.linalg.eig(c)
    except np.linalg.LinAlgError as exc:
        raise EigenError(str(exc)) from exc
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    return [(complex(vals[t]), vecs[:, t]) for t in range(len(vals))]


def expm(x):
    """Matrix exponential for complex arrays or quaternion matrices."""
    if isinstance(x, HMatrix):
        return HMatrix.from_complex_block(scipy.linalg.expm(x.complex_block()))
    return scipy.linalg.expm(np.asarray(x, dtype=complex))
