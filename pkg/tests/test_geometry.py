import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realtrace.algebra import HMatrix, Quaternion
from realtrace.geometry import (HermitianSpace, ProjectivePoint, VectorClass, bergman_distance,
                                chordal_distance, classify_vector, form_eval, form_matrix)
from realtrace.groups import random_element, sp, su

C11 = HermitianSpace(1)


def negative_point(rng, n, quaternionic=False):
    """Random negative vector: unit last coordinate, head inside the unit ball."""
    if quaternionic:
        head = rng.standard_normal((n, 4))
        head *= rng.uniform(0, 0.95) / np.linalg.norm(head)
        comps = np.vstack([head, rng.standard_normal((1, 4))])
        comps[-1] /= np.linalg.norm(comps[-1])
        return HMatrix.from_components(comps[:, None, :])
    head = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    head *= rng.uniform(0, 0.95) / np.linalg.norm(head)
    return np.r_[head, np.exp(1j * rng.uniform(0, 2 * np.pi))]


def geodesic_distance_oracle(s):
    """Distance from P(0,1) to P(sinh s, cosh s) by integrating the metric along the curve.

    In the disc chart u = tanh(t) the metric is 2|du| / (1 - |u|^2), so the length of
    t in [0, s] is 2 s.  Integrated numerically here rather than assumed.
    """
    t = np.linspace(0.0, s, 20001)
    u = np.tanh(t)
    du = 1.0 - u ** 2
    integrand = 2.0 * du / (1.0 - u ** 2)
    return float(np.trapezoid(integrand, t) if hasattr(np, "trapezoid") else np.trapz(integrand, t))


def test_form_examples():
    assert np.array_equal(form_matrix(2), np.diag([1.0, 1.0, -1.0]))
    space = HermitianSpace(3)
    e = np.eye(4)
    assert form_eval(space, e[3], e[3]) == -1
    assert form_eval(space, e[0], e[1]) == 0
    s = 0.7
    assert abs(form_eval(C11, [math.sinh(s), math.cosh(s)], [0, 1]) + math.cosh(s)) < 1e-15


def test_classify_examples():
    space = HermitianSpace(2)
    assert classify_vector(space, [0, 0, 1]) is VectorClass.NEGATIVE
    assert classify_vector(space, [1, 0, 1]) is VectorClass.NULL
    assert classify_vector(space, [1, 0, 0]) is VectorClass.POSITIVE
    with pytest.raises(ValueError):
        classify_vector(space, [0, 0, 0])
    with pytest.raises(ValueError):
        classify_vector(space, [1, 0])


def test_bergman_geodesic_fixture():
    p = ProjectivePoint(C11, [0, 1])
    q = ProjectivePoint(C11, [math.sinh(1), math.cosh(1)])
    assert abs(bergman_distance(C11, p, q) - 2.0) < 1e-9
    assert abs(geodesic_distance_oracle(1.0) - 2.0) < 1e-9
    assert bergman_distance(C11, p, p) == 0.0
    for s in (0.1, 0.5, 2.0):
        q = ProjectivePoint(C11, [math.sinh(s), math.cosh(s)])
        assert abs(bergman_distance(C11, p, q) - geodesic_distance_oracle(s)) < 1e-8


def test_bergman_rejects_non_negative_points():
    with pytest.raises(ValueError):
        bergman_distance(C11, [1, 0], [0, 1])


def test_form_conjugate_symmetry_and_quaternion_right_linearity():
    rng = np.random.default_rng(0)
    space = HermitianSpace(2, "quaternion")
    z = HMatrix.from_components(rng.standard_normal((3, 1, 4)))
    w = HMatrix.from_components(rng.standard_normal((3, 1, 4)))
    lam = Quaternion(*rng.standard_normal(4))
    assert (form_eval(space, z, w) - form_eval(space, w, z).conj()).norm() < 1e-12
    assert (form_eval(space, z * lam, w) - form_eval(space, z, w) * lam).norm() < 1e-12


@pytest.mark.parametrize("quaternionic", [False, True])
def test_form_invariance_under_group(quaternionic):
    rng = np.random.default_rng(1)
    n = 2
    spec = sp(n) if quaternionic else su(n)
    space = HermitianSpace(n, "quaternion" if quaternionic else "complex")
    for seed in range(100):
        g = random_element(spec, seed)
        if quaternionic:
            z = HMatrix.from_components(rng.standard_normal((3, 1, 4)))
            w = HMatrix.from_components(rng.standard_normal((3, 1, 4)))
            diff = (form_eval(space, g @ z, g @ w) - form_eval(space, z, w)).norm()
        else:
            z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            diff = abs(form_eval(space, g @ z, g @ w) - form_eval(space, z, w))
        assert diff < 1e-9


@pytest.mark.parametrize("quaternionic", [False, True])
def test_distance_properties(quaternionic):
    rng = np.random.default_rng(2)
    n = 2
    space = HermitianSpace(n, "quaternion" if quaternionic else "complex")
    spec = sp(n) if quaternionic else su(n)
    for seed in range(30):
        p, q, r = (negative_point(rng, n, quaternionic) for _ in range(3))
        d_pq = bergman_distance(space, p, q)
        assert abs(d_pq - bergman_distance(space, q, p)) < 1e-9
        assert d_pq <= bergman_distance(space, p, r) + bergman_distance(space, r, q) + 1e-7
        g = random_element(spec, seed)
        assert abs(bergman_distance(space, g @ p, g @ q) - d_pq) < 1e-7 * max(1.0, d_pq)
        lam = Quaternion(*rng.standard_normal(4)) if quaternionic else complex(*rng.standard_normal(2))
        p2 = p * lam if quaternionic else p * lam
        assert abs(bergman_distance(space, p2, q) - d_pq) < 1e-9 * max(1.0, d_pq)


def test_ball_chart_and_chordal_distance():
    a = ProjectivePoint(C11, [1, 1])
    b = ProjectivePoint(C11, [-2, 2])
    assert np.allclose(a.ball_coordinates(), [1, 0])
    assert abs(chordal_distance(a, b) - 2.0) < 1e-15
    assert a.kind() is VectorClass.NULL
    with pytest.raises(ValueError):
        ProjectivePoint(C11, [1, 0]).ball_coordinates()


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_distance_along_real_geodesic_is_additive(s, t):
    p = ProjectivePoint(C11, [math.sinh(s), math.cosh(s)])
    q = ProjectivePoint(C11, [math.sinh(t), math.cosh(t)])
    assert abs(bergman_distance(C11, p, q) - 2 * abs(s - t)) < 1e-6
