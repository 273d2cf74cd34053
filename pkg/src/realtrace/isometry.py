"""Loxodromic / parabolic / elliptic classification and a nonelementarity heuristic."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import HMatrix, complexify, eigen_complex
from .geometry import HermitianSpace, ProjectivePoint, chordal_distance
from .groups import GeneratorSet, GroupSpec, coerce_matrix, require_member, sp, u

CLASSIFY_TOL = 1e-6
# eigenvalues closer than this are treated as one (split) eigenvalue
CLUSTER_TOL = 1e-4


class IsometryKind(str, Enum):
    LOXODROMIC = "loxodromic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class IsometryClass:
    """Result of :func:`classify`.

    ``fixed_points`` holds the two boundary points (attracting first) of a
    loxodromic element or an interior fixed point of an elliptic one; for a
    parabolic element it holds a boundary fixed point.  ``margin`` is the
    distance of the deciding quantity from its threshold.
    """

    kind: IsometryKind
    fixed_points: tuple
    margin: float
    spectral_radius: float
    eigenvalues: np.ndarray = field(repr=False)


def _block_form(n: int, quaternionic: bool) -> np.ndarray:
    s = np.r_[np.ones(n), -1.0]
    return np.diag(np.r_[s, s] if quaternionic else s)


def _to_point(space: HermitianSpace, v: np.ndarray) -> ProjectivePoint:
    if space.quaternionic:
        size = space.dim
        # block coordinates are (X, -conj Y) for X + Y j
        return ProjectivePoint(space, HMatrix(v[:size], -v[size:].conj()))
    return ProjectivePoint(space, v)


def _clusters(vals: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.argsort(-np.abs(vals), kind="stable")
    groups: list[list[int]] = []
    for t in order:
        for grp in groups:
            if np.min(np.abs(vals[grp] - vals[t])) < tol:
                grp.append(t)
                break
        else:
            groups.append([t])
    return [np.array(g) for g in groups]


def _kernel(c: np.ndarray, mu: complex, dim_hint: int) -> np.ndarray:
    shifted = c - mu * np.eye(c.shape[0])
    _, s, vh = np.linalg.svd(shifted)
    thresh = 1e-7 * max(1.0, s[0])
    k = max(1, int(np.sum(s < thresh)))
    k = min(k, dim_hint)
    return vh[-k:].conj().T


def classify(g, spec: GroupSpec | None = None, tol: float = CLASSIFY_TOL,
             member_tol: float = 1e-8) -> IsometryClass:
    """Classify an element of SU(n,1), U(n,1) or Sp(n,1).

    Spectral radius above ``1 + tol`` means loxodromic.  Otherwise an
    eigenspace on which the form has a direction more negative than
    ``-tol`` (unit vectors) means elliptic, and anything else parabolic.
    Eigenvalues of a non-semisimple element drift off the unit circle by
    about eps^(1/k) for a Jordan block of size k, so eigenvalues within
    ``CLUSTER_TOL`` are averaged before the modulus test.
    """
    quaternionic = isinstance(g, HMatrix) or (spec is not None and spec.quaternionic)
    g = coerce_matrix(g, quaternionic)
    n = g.shape[0] - 1
    if spec is None:
        spec = sp(n) if quaternionic else u(n)
    require_member(g, spec, member_tol)
    space = HermitianSpace(n, "quaternion" if quaternionic else "complex")
    c = complexify(g)
    pairs = eigen_complex(c)
    vals = np.array([p[0] for p in pairs])
    clusters = _clusters(vals, CLUSTER_TOL)
    means = [complex(vals[idx].mean()) for idx in clusters]
    radii = np.abs(means)
    rho = float(radii.max())

    if rho > 1.0 + tol:
        top = int(np.argmax(radii))
        bottom = int(np.argmin(radii))
        v_out = pairs[int(clusters[top][0])][1]
        v_in = pairs[int(clusters[bottom][0])][1]
        points = (_to_point(space, v_out), _to_point(space, v_in))
        return IsometryClass(IsometryKind.LOXODROMIC, points, rho - 1.0 - tol, rho, vals)

    form = _block_form(n, quaternionic)
    most_negative, witness, null_point = np.inf, None, None
    for idx, mu in zip(clusters, means):
        basis = _kernel(c, mu, len(idx))
        restricted = basis.conj().T @ form @ basis
        w, vecs = np.linalg.eigh((restricted + restricted.conj().T) / 2)
        if w[0] < most_negative:
            most_negative, witness = float(w[0]), basis @ vecs[:, 0]
        if null_point is None and abs(w[0]) <= tol:
            null_point = basis @ vecs[:, 0]
    spectral_margin = 1.0 + tol - rho
    if most_negative < -tol:
        return IsometryClass(IsometryKind.ELLIPTIC, (_to_point(space, witness),),
                             min(-most_negative - tol, spectral_margin), rho, vals)
    points = (_to_point(space, null_point),) if null_point is not None else ()
    return IsometryClass(IsometryKind.PARABOLIC, points,
                         min(most_negative + tol, spectral_margin), rho, vals)


# --------------------------------------------------------------------------
# nonelementarity


@dataclass(frozen=True)
class NonelementaryResult:
    verdict: str                  # "nonelementary" or "inconclusive"
    witnesses: tuple = ()         # two words with disjoint fixed-point pairs
    separation: float = 0.0       # smallest of the four chordal distances
    loxodromics_seen: int = 0


def _fixed_pair_separation(a: tuple, b: tuple) -> float:
    return min(chordal_distance(p, q) for p in a for q in b)


def nonelementary_heuristic(gens: GeneratorSet, word_len: int = 3, tol: float = 1e-6,
                            max_axes: int = 64) -> NonelementaryResult:
    """Look for two loxodromic words whose fixed-point pairs are disjoint.

    Every chordal distance between a fixed point of one and a fixed point of
    the other must exceed ``tol``.  Success proves nothing rigorous but is
    strong evidence; failure is reported as inconclusive, never as elementary.
    """
    from .traces import word_ball

    axes: list[tuple] = []
    seen = 0
    for word, m in word_ball(gens, word_len):
        try:
            cls = classify(m, gens.group)
        except (ArithmeticError, ValueError):
            continue
        if cls.kind is not IsometryKind.LOXODROMIC:
            continue
        seen += 1
        pair = cls.fixed_points
        same_axis = False
        for other_word, other in axes:
            sep = _fixed_pair_separation(pair, other)
            if sep > tol:
                return NonelementaryResult("nonelementary", (other_word, word), sep, seen)
            if max(min(chordal_distance(p, q) for q in other) for p in pair) <= tol:
                same_axis = True
        if not same_axis and len(axes) < max_axes:
            axes.append((word, pair))
    return NonelementaryResult("inconclusive", (), 0.0, seen)
