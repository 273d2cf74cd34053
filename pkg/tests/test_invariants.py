import warnings

import numpy as np
import pytest

from realtrace.algebra import QI, QJ, HMatrix
from realtrace.groups import (GeneratorSet, block_embed, form_inverse, group_membership,
                              random_element, so, sp, su)
from realtrace.invariants import (SynthesisRecipe, detect, invariant_subspace_scan,
                                  real_structure_solve, rho_sum_fixture, synthesize,
                                  synthesize_with_witness)
from realtrace.traces import realness_report


def test_block_split_of_real_form_in_su31():
    gens = GeneratorSet(su(3), [block_embed(random_element(so(2), s, scale=2.0), su(3)) for s in (1, 2)])
    pieces = invariant_subspace_scan(gens)
    dims = sorted(p.dim for p in pieces)
    assert dims == [1, 3]
    for p in pieces:
        assert p.defect < 1e-9


def test_rho_sum_fixture():
    gens = rho_sum_fixture()
    assert realness_report(gens, 6).verdict == "real"
    pieces = invariant_subspace_scan(gens)
    sigs = sorted((p.dim, p.signature) for p in pieces)
    assert sigs == [(2, (1, 1, 0)), (2, (2, 0, 0))]
    assert real_structure_solve(gens) is None
    res = detect(gens)
    assert res.kind != "real_form"


def test_real_structure_recovers_hidden_real_group():
    hidden = random_element(su(3), 9, max_norm=1.0)
    real = [random_element(so(3), s, scale=1.5) for s in (3, 4)]
    gens = [hidden @ g @ np.linalg.inv(hidden) for g in real]
    rs = real_structure_solve(gens)
    assert rs is not None
    assert group_membership(rs.T, su(3), 1e-8).ok
    for g in gens:
        moved = np.linalg.inv(rs.T) @ g @ rs.T
        assert np.abs(moved.imag).max() < 1e-8
        assert np.abs(g @ rs.S - rs.S @ g.conj()).max() < 1e-8
    assert np.abs(rs.S @ rs.S.conj() - np.eye(4)).max() < 1e-8


def test_real_structure_absent_for_generic_su():
    gens = [random_element(su(2), s) for s in (1, 2)]
    assert real_structure_solve(gens) is None


@pytest.mark.parametrize("ambient", ["SU", "Sp"])
@pytest.mark.parametrize("kind,m", [("real_form", 2), ("real_form", 3), ("complex_line", None)])
def test_round_trip_small(ambient, kind, m):
    for seed in range(5):
        recipe = SynthesisRecipe(ambient, 3, kind, m, block_seed=seed, hide_seed=100 + seed)
        gens, hidden, blocks = synthesize_with_witness(recipe)
        assert realness_report(gens, 4).verdict == "real"
        res = detect(gens)
        want = kind if kind == "complex_line" else f"real_form({m})"
        assert res.label == want
        assert res.residual < 1e-6 and res.conjugator_residual < 1e-8
        c, k = res.blocks
        for g in res.conjugated:
            mat = g.complex_block()[: c + k, : c + k] if isinstance(g, HMatrix) else g
            assert np.abs(mat[:c, c:]).max(initial=0) < 1e-6


def test_synthesized_generators_hide_the_block_form():
    gens, hidden, blocks = synthesize_with_witness(SynthesisRecipe("SU", 3, "real_form", 2, 0, 1))
    for g, b in zip(gens.gens, blocks):
        assert np.abs(g - hidden @ b @ form_inverse(hidden)).max() < 1e-10
        assert np.abs(g[:1, 1:]).max() > 1e-3


def test_recipe_validation():
    with pytest.raises(ValueError):
        SynthesisRecipe("SU", 2, "real_form", 5)
    with pytest.raises(ValueError):
        SynthesisRecipe("SU", 2, "complex_line", 3)
    with pytest.raises(ValueError):
        SynthesisRecipe("SO", 2, "real_form", 2)
    with pytest.raises(ValueError):
        SynthesisRecipe("SU", 2, "bogus")


def test_detect_warns_and_reports_none_for_nonreal_traces():
    gens = GeneratorSet(sp(1), [HMatrix.from_entries([[QI, 0], [0, QJ]])])
    with pytest.warns(RuntimeWarning):
        res = detect(gens)
    assert res.kind == "none"
    assert res.warnings


def test_detect_on_random_sp_conjugation_is_diagnostic():
    """A random Sp conjugator usually makes traces non-real, but the geometry is still found."""
    gens = synthesize(SynthesisRecipe("SU", 3, "real_form", 2, 4, 5))
    cplx = [HMatrix.from_complex(g) for g in gens.gens]
    h = random_element(sp(3), 77, max_norm=1.0)
    hinv = form_inverse(h)
    moved = GeneratorSet(sp(3), [h @ g @ hinv for g in cplx])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = detect(moved)
    assert res.label == "real_form(2)"
    assert res.residual < 1e-6


def test_irreducible_full_real_form():
    gens = synthesize(SynthesisRecipe("SU", 2, "real_form", 2, 3, 4))
    pieces = invariant_subspace_scan(gens)
    assert len(pieces) == 1 and pieces[0].dim == 3
    assert detect(gens).label == "real_form(2)"


def test_detection_is_deterministic():
    gens = synthesize(SynthesisRecipe("Sp", 2, "complex_line", None, 8, 9))
    a, b = detect(gens, seed=3), detect(gens, seed=3)
    assert a.label == b.label
    assert a.conjugator.allclose(b.conjugator, 0)


def test_detect_complex_line_under_random_sp_conjugation():
    gens = synthesize(SynthesisRecipe("SU", 2, "complex_line", None, 6, 7))
    h = random_element(sp(2), 78, max_norm=1.0)
    hinv = form_inverse(h)
    moved = GeneratorSet(sp(2), [h @ HMatrix.from_complex(g) @ hinv for g in gens.gens])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = detect(moved)
    assert res.label == "complex_line" and res.residual < 1e-6


def test_real_structure_makes_every_short_word_real():
    from realtrace.traces import word_ball
    hidden = random_element(su(3), 21, max_norm=1.0)
    real = [random_element(so(3), s, scale=1.5) for s in (5, 6)]
    gens = GeneratorSet(su(3), [hidden @ g @ np.linalg.inv(hidden) for g in real])
    rs = real_structure_solve(gens)
    tinv = np.linalg.inv(rs.T)
    moved = GeneratorSet(su(3), [tinv @ g @ rs.T for g in gens.gens])
    L = 4
    bound = 1e-9 * L * max(np.linalg.norm(g, 2) for g in moved.gens) ** L
    for _, m in word_ball(moved, L):
        assert np.abs(m.imag).max() < bound
