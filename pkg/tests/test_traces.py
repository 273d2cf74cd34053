import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realtrace.algebra import QI, QJ, QK, HMatrix, Quaternion, embed_mat_q2r
from realtrace.groups import (SU11, GeneratorSet, MembershipError, block_embed, random_batch,
                              random_element, so, sp, special_element, su, su11_element)
from realtrace.traces import (alleqns_residual, conjugated_trace_scan, constraint_surface_points,
                              criterion_I, criterion_I_batch, criterion_II, criterion_II_batch,
                              eqnsys_residual, evaluate_word, format_word, im_trace_consistency,
                              lambda_column, odd_power_sums_check, odd_power_sums_pairing,
                              realness_report, sp1_su11_membership, word_ball)

S2 = 1 / math.sqrt(2)
WORKED = HMatrix.from_entries([[Quaternion(S2, S2, 0, 0), 0], [0, Quaternion(0, 0, S2, S2)]])
DIAG_IJ = HMatrix.from_entries([[QI, 0], [0, QJ]])


def lox(t=1.0):
    return su11_element(math.cosh(t), math.sinh(t))


def two_gens():
    rot = special_element("R", theta=0.4)
    a = lox()
    return GeneratorSet(su(1), [a, rot @ a @ np.linalg.inv(rot)])


def test_word_ball_counts_and_order():
    gens = two_gens()
    assert len(list(word_ball(gens, 1))) == 4
    words = list(word_ball(gens, 2))
    assert len(words) == 16
    for L in range(1, 6):
        assert len(list(word_ball(gens, L))) == sum(4 * 3 ** (k - 1) for k in range(1, L + 1))
    lengths = [len(w) for w, _ in words]
    assert lengths == sorted(lengths)
    for w, _ in words:
        assert all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w, w[1:]))
    with pytest.raises(ValueError):
        list(word_ball(gens, 0))


def test_word_evaluation_is_multiplicative():
    gens = two_gens()
    a, b = gens.gens
    ainv = np.linalg.inv(a)
    for w, m in word_ball(gens, 3):
        assert np.abs(m - evaluate_word(gens, w)).max() < 1e-12
    want = a @ b @ ainv
    assert np.abs(evaluate_word(gens, ((0, 1), (1, 1), (0, -1))) - want).max() < 1e-12
    assert format_word(((0, 1), (1, -1)), ("a", "b")) == "a b^-1"


def test_realness_examples():
    so21 = [block_embed(random_element(so(2), s, scale=1.0), su(3)) for s in (1, 2)]
    rep = realness_report(GeneratorSet(su(3), so21), 4)
    assert rep.verdict == "real" and rep.max_im < 1e-12
    rep = realness_report(GeneratorSet(sp(1), [DIAG_IJ]), 3)
    assert rep.verdict == "non-real"
    assert abs(rep.max_im - math.sqrt(2)) < 1e-12
    assert rep.words_checked == 6


def test_realness_truncation_flag():
    gens = two_gens()
    rep = realness_report(gens, 6, max_words=50)
    assert rep.truncated and rep.words_checked == 50
    assert not realness_report(gens, 2).truncated


def test_im_trace_consistency():
    assert im_trace_consistency(np.eye(3)) == (0.0, 0.0)
    assert im_trace_consistency(special_element("d_n", 2)) == (1.0, 1.0)
    for seed in range(500):
        a, b = im_trace_consistency(random_element(su(2), seed))
        assert abs(a - b) < 1e-14 * 10


def test_worked_example_traces_are_2z():
    ginv = WORKED.H  # g is unitary diagonal
    rng = np.random.default_rng(0)
    for _ in range(50):
        z = complex(*rng.standard_normal(2)) * 2
        w = math.sqrt(abs(z) ** 2 - 1) * np.exp(1j * rng.uniform(0, 2 * np.pi)) if abs(z) >= 1 else None
        if w is None:
            continue
        u = HMatrix.from_complex(su11_element(z, w))
        conj = WORKED @ u @ ginv
        # cross-check the real part through the real 4N embedding
        t = conj.trace()
        assert abs(t.real - 2 * z.real) < 1e-12 * max(1, abs(z))
        assert abs(t.b - 2 * z.imag) < 1e-12 * max(1, abs(z))
        assert abs(np.trace(embed_mat_q2r(conj)) - 8 * z.real) < 1e-11 * max(1, abs(z))


def test_criterion_I_examples():
    assert (criterion_I(HMatrix.identity(3)) - QI).norm() == 0
    for seed in range(5):
        g = HMatrix.from_complex(block_embed(random_element(so(2), seed), su(2)).real.astype(complex))
        assert (criterion_I(g) - QI).norm() < 1e-12
    with pytest.raises(MembershipError):
        criterion_I(HMatrix.scalar(Quaternion(2.0), 2))


def test_lambda_examples():
    eye = HMatrix.identity(3)
    assert (lambda_column(eye, 1) - QI).norm() == 0
    assert (lambda_column(eye, 3) + QI).norm() == 0
    with pytest.raises(IndexError):
        lambda_column(eye, 4)


def test_criterion_II_examples():
    a, b, c = criterion_II(HMatrix.identity(3))
    assert a.norm() == 0 and b.norm() == 0 and (c - 2 * QI).norm() == 0
    with pytest.raises(ValueError):
        criterion_II(HMatrix.identity(2))


def test_batch_criteria_match_scalar_versions():
    for n in (2, 3):
        batch = random_batch(sp(n), 40, seed=n)
        w1 = criterion_I_batch(batch)
        w2 = criterion_II_batch(batch)
        for t, blk in enumerate(batch):
            g = HMatrix.from_complex_block(blk)
            assert abs(criterion_I(g).norm() - w1[t]) < 1e-9
            assert abs(max(x.norm() for x in criterion_II(g)) - w2[t]) < 1e-9


def test_criteria_norms_invariant_under_unit_scalars():
    rng = np.random.default_rng(1)
    for seed in range(20):
        g = random_element(sp(2), seed)
        h = Quaternion(*rng.standard_normal(4))
        h = h / h.norm()
        hg = HMatrix.scalar(h, 3) @ g
        assert abs(criterion_I(hg).norm() - criterion_I(g).norm()) < 1e-9
        for x, y in zip(criterion_II(hg), criterion_II(g)):
            assert abs(x.norm() - y.norm()) < 1e-9


def test_criteria_conjugated_traces():
    """Criterion values match the imaginary parts of conjugated special-element traces."""
    from realtrace.groups import sp_inverse
    for seed in range(10):
        g = random_element(sp(2), seed)
        gi = sp_inverse(g)
        d = HMatrix.from_complex(special_element("d_n", 2))
        assert ((g @ d @ gi).trace().imag - criterion_I(g)).norm() < 1e-9
        # lambda_{n+1} carries the criterion: Im tr(g d g^-1) = -lambda_{n+1}
        assert (criterion_I(g) + lambda_column(g, 3)).norm() < 1e-9


def test_eqnsys_examples():
    x = [0, 0, 1]
    first, second, cert = eqnsys_residual(x)
    assert first == 1 and second == 0 and cert == 0
    first, second, _ = eqnsys_residual([1, 0, math.sqrt(2)])
    assert abs(first - 1) < 1e-15 and abs(second) < 1e-15
    with pytest.raises(ZeroDivisionError):
        eqnsys_residual([1, 0, 0])


def test_eqnsys_on_constraint_surface():
    pts = constraint_surface_points(2, 10000, seed=0)
    first, second, cert = eqnsys_residual(pts)
    assert np.abs(second).max() < 1e-9
    assert first.min() > 0 and cert.min() >= 0


def test_alleqns_gram_residual():
    _, spectral = alleqns_residual(Quaternion(0.5, 0, 0, 0), Quaternion(0, 0.5, 0, 0), Quaternion(0, 0, 0.5, 0))
    assert spectral >= 0.25 - 1e-12
    rng = np.random.default_rng(0)
    for _ in range(200):
        x, y, z = (Quaternion(*rng.standard_normal(4)) for _ in range(3))
        assert alleqns_residual(x, y, z)[1] >= 0.25 - 1e-12


def test_odd_power_sum_examples():
    assert odd_power_sums_check([1, -1, 2, -2, 0])
    assert not odd_power_sums_check([1, 2, -3])
    assert odd_power_sums_check([0, 0])
    assert odd_power_sums_pairing([1, -1, 2, -2, 0])
    assert not odd_power_sums_pairing([1, 2, -3])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=6),
       st.booleans(), st.floats(-1e-3, 1e-3))
def test_odd_power_characterizations_agree(values, symmetric, nudge):
    a = np.array(values)
    if symmetric:
        a = np.r_[a, -a][:6]
        a[0] += nudge
    assert odd_power_sums_check(a) == odd_power_sums_pairing(a)


def test_sp1_su11_examples():
    u = lox(0.7)
    ok, h = sp1_su11_membership(HMatrix.from_complex(u))
    assert ok and abs(abs(h.a) - 1) < 1e-12
    ok, h = sp1_su11_membership(HMatrix.scalar(QJ, 2) @ HMatrix.from_complex(u))
    assert ok
    normalized = HMatrix.scalar(h, 2) @ HMatrix.scalar(QJ, 2) @ HMatrix.from_complex(u)
    assert normalized.is_complex(1e-12)
    ok, h = sp1_su11_membership(WORKED)
    assert not ok
    assert ((h * WORKED[1, 1]) - QJ).norm() < 1e-12


def test_conjugated_trace_scan_examples():
    assert conjugated_trace_scan(np.eye(2, dtype=complex), SU11, 100, seed=0) < 1e-12
    assert conjugated_trace_scan(WORKED, SU11, 100, seed=0) > 1e-3
    g = random_element(sp(3), 1)
    assert conjugated_trace_scan(g, sp(2), 200, seed=0) > 1e-3


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**31))
def test_lambda_is_pure_imaginary(n, seed):
    g = random_element(sp(n), seed)
    for m in range(1, n + 2):
        assert abs(lambda_column(g, m).real) < 1e-9 * max(1.0, g.norm() ** 2)


def test_unit_quaternion_k_relation_in_lambda():
    # conjugating i by j gives -i, which is what flips the sign of the last row
    assert ((QJ * QI * QJ.conj()) + QI).norm() == 0
    assert ((QK * QI * QK.conj()) + QI).norm() == 0


def test_printed_c_elements_against_lambda_sums():
    """c1, c2 conjugate to the first two criterion-II sums; the printed c3 gives a difference."""
    from realtrace.groups import sp_inverse
    for seed in range(10):
        g = random_element(sp(2), seed)
        gi = sp_inverse(g)
        lam = [lambda_column(g, m) for m in (1, 2, 3)]
        im = {name: (g @ HMatrix.from_complex(special_element(name)) @ gi).trace().imag
              for name in ("c1", "c2", "c3")}
        assert (im["c1"] - (lam[1] + lam[2])).norm() < 1e-9
        assert (im["c2"] - (lam[0] + lam[2])).norm() < 1e-9
        assert (im["c3"] - (lam[0] - lam[1])).norm() < 1e-9
    # at g = I the three printed elements all have real trace
    for name in ("c1", "c2", "c3"):
        assert np.trace(special_element(name)).imag == 0
