"""Hermitian spaces of signature (n, 1) and the projective ball model."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import DEFAULT_TOL, HMatrix, Quaternion


class VectorClass(str, Enum):
    NEGATIVE = "negative"
    NULL = "null"
    POSITIVE = "positive"


def form_matrix(p: int, q: int = 1) -> np.ndarray:
    """``I_{p,q} = diag(1, ..., 1, -1, ..., -1)``."""
    return np.diag(np.r_[np.ones(p), -np.ones(q)])


@dataclass(frozen=True)
class HermitianSpace:
    """``F^{n,1}`` with the form ``<z, w> = w* I_{n,1} z`` (F = C or H)."""

    n: int
    scalar_field: str = "complex"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.scalar_field not in ("complex", "quaternion"):
            raise ValueError(f"unknown scalar field {self.scalar_field!r}")

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def form(self) -> np.ndarray:
        return form_matrix(self.n)

    @property
    def quaternionic(self) -> bool:
        return self.scalar_field == "quaternion"

    def vector(self, entries):
        """Coerce ``entries`` to a vector of this space."""
        if self.quaternionic:
            v = entries if isinstance(entries, HMatrix) else HMatrix.from_entries([[x] for x in entries])
            size = v.shape[0]
        else:
            v = np.asarray(entries, dtype=complex).reshape(-1)
            size = v.shape[0]
        if size != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}, got {size}")
        return v


def _signs(n_plus_one: int) -> np.ndarray:
    s = np.ones(n_plus_one)
    s[-1] = -1.0
    return s


def form_eval(space: HermitianSpace, z, w):
    """``<z, w> = w* I_{n,1} z``; a complex number or a :class:`Quaternion`."""
    z = space.vector(z)
    w = space.vector(w)
    if space.quaternionic:
        s = _signs(space.dim)[:, None]
        iz = HMatrix(s * z.z, s * z.w)
        return (w.H @ iz)[0, 0]
    return complex(np.vdot(w, _signs(space.dim) * z))


def _norm2(space: HermitianSpace, z) -> float:
    if space.quaternionic:
        return float(np.sum(np.abs(z.z) ** 2 + np.abs(z.w) ** 2))
    return float(np.sum(np.abs(z) ** 2))


def classify_vector(space: HermitianSpace, z, tol: float = DEFAULT_TOL) -> VectorClass:
    """Negative, null or positive, with a band ``|<z,z>| <= tol |z|^2`` mapped to null."""
    z = space.vector(z)
    size = _norm2(space, z)
    if size == 0.0:
        raise ValueError("the zero vector has no class")
    value = form_eval(space, z, z)
    value = value.real if isinstance(value, Quaternion) else value.real
    if abs(value) <= tol * size:
        return VectorClass.NULL
    return VectorClass.NEGATIVE if value < 0 else VectorClass.POSITIVE


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of projective space, given by a nonzero representative."""

    space: HermitianSpace
    representative: object

    def __post_init__(self):
        v = self.space.vector(self.representative)
        if _norm2(self.space, v) == 0.0:
            raise ValueError("representative must be nonzero")
        object.__setattr__(self, "representative", v)

    def kind(self, tol: float = DEFAULT_TOL) -> VectorClass:
        return classify_vector(self.space, self.representative, tol)

    def moved_by(self, g) -> "ProjectivePoint":
        return ProjectivePoint(self.space, g @ self.representative)

    def ball_coordinates(self) -> np.ndarray:
        """Affine chart ``v v_{n+1}^{-1}`` dropped to the first n coordinates, as reals.

        Negative and null points land in the closed unit ball; this is the
        chart used for chordal distances between boundary points.
        """
        v = self.representative
        if self.space.quaternionic:
            last = v[self.space.n, 0]
            if last.norm() == 0.0:
                raise ValueError("point at infinity of the affine chart")
            u = v * last.inverse()
            return u.components()[: self.space.n, 0, :].reshape(-1)
        last = v[-1]
        if last == 0:
            raise ValueError("point at infinity of the affine chart")
        u = v[:-1] / last
        return np.concatenate([u.real, u.imag])


def chordal_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    return float(np.linalg.norm(p.ball_coordinates() - q.ball_coordinates()))


def bergman_distance(space: HermitianSpace, p, q, tol: float = DEFAULT_TOL) -> float:
    """Distance between two points of the hyperbolic space.

    ``cosh^2(rho/2) = <p,q><q,p> (<p,p><q,q>)^{-1}``, evaluated in that
    order for quaternion representatives.
    """
    pv = p.representative if isinstance(p, ProjectivePoint) else space.vector(p)
    qv = q.representative if isinstance(q, ProjectivePoint) else space.vector(q)
    for v in (pv, qv):
        if classify_vector(space, v, tol) is not VectorClass.NEGATIVE:
            raise ValueError("bergman_distance needs negative (interior) points")
    pq = Quaternion.coerce(form_eval(space, pv, qv))
    qp = Quaternion.coerce(form_eval(space, qv, pv))
    pp = form_eval(space, pv, pv).real
    qq = form_eval(space, qv, qv).real
    ratio = (pq * qp) * (1.0 / (pp * qq))
    scale = pq.norm() * qp.norm() / abs(pp * qq)
    if ratio.imag_norm() > 1e3 * np.finfo(float).eps * max(1.0, scale):
        raise ArithmeticError(f"distance ratio is not real: {ratio!r}")
    return 2.0 * math.acosh(math.sqrt(max(ratio.real, 1.0)))
