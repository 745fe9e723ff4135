import json

import numpy as np
import pytest
from numpy.testing import assert_allclose
from oracles import orthogonal_product_search, pyramid_reference

from upbw import upb
from upbw.upb import InvalidUpbError, ProductState, Upb, Verdict


def test_pyramid_geometry(pyramid):
    v = upb.pyramid_vectors()
    assert abs(v[0] @ v[2]) <= 1e-12
    assert 0.5 * np.sqrt(1 + np.sqrt(5)) == pytest.approx(0.89945371, abs=1e-8)
    assert 2 / np.sqrt(5 + np.sqrt(5)) == pytest.approx(0.74349607, abs=1e-8)
    a, b = pyramid_reference()
    assert_allclose(pyramid.alphas, a, atol=1e-15)
    assert_allclose(pyramid.betas, b, atol=1e-15)


def test_pyramid_validates(pyramid):
    rep = pyramid.validation
    assert rep.verdict is Verdict.VALID
    assert rep.epsilon_lower == pytest.approx(1.7631e-3, abs=1e-7)
    assert rep.orthonormality_defect <= 1e-12


def test_pyramid_has_no_orthogonal_product(pyramid):
    assert orthogonal_product_search(pyramid.alphas, pyramid.betas) is None


def test_four_pyramid_states_are_extendible(pyramid):
    sub = Upb(pyramid.states[:4], pyramid.idx, "pyramid[:4]")
    a, b = orthogonal_product_search(sub.alphas, sub.betas)
    assert np.max(np.abs(sub.vectors.conj() @ np.kron(a, b))) <= 1e-9
    rep = upb.validate(sub)
    assert rep.verdict in (Verdict.INVALID, Verdict.UNVERIFIED)
    assert rep.epsilon_lower == 0.0


def test_repeated_state_is_invalid(pyramid):
    rep = upb.validate(Upb((pyramid.states[0], *pyramid.states), pyramid.idx))
    assert rep.verdict is Verdict.INVALID
    assert rep.orthonormality_defect == pytest.approx(1.0, abs=1e-12)


def test_gentiles_small_cases(gentiles):
    g4 = gentiles[4]
    assert len(g4) == 7
    assert g4.validation.orthonormality_defect <= 1e-12
    omega = np.exp(2j * np.pi / 2)
    assert abs(1 + sum(omega ** m for m in range(1, 2))) <= 1e-15
    g5 = gentiles[5]
    assert len(g5) == 10 and g5.validation.verdict is Verdict.VALID


@pytest.mark.parametrize("n", range(4, 13))
def test_gentiles_count_and_orthonormality(n):
    s = upb.build_gentiles3n(n, validate_now=False)
    assert len(s) == 3 * n - 5
    assert upb.gram_defect(s.vectors) <= 1e-10


def test_gentiles_needs_n_at_least_4():
    with pytest.raises(ValueError):
        upb.build_gentiles3n(3)


def test_builtins_span_locally(pyramid, gentiles):
    for s in (pyramid, *gentiles.values()):
        assert s.is_valid
        assert upb.local_rank(s.alphas, 1e-8) == s.idx.dA
        assert upb.local_rank(s.betas, 1e-8) == s.idx.dB


def test_tensor_pyramid_pyramid(pyramid):
    t = upb.tensor_upb(pyramid, pyramid)
    assert len(t) == 25 and (t.idx.dA, t.idx.dB) == (9, 9)
    assert t.validation.orthonormality_defect <= 1e-10
    assert t.validation.verdict is Verdict.UNVERIFIED


def test_tensor_pyramid_gentiles(pyramid, gentiles):
    t = upb.tensor_upb(pyramid, gentiles[4])
    assert len(t) == 35 and (t.idx.dA, t.idx.dB) == (9, 12)
    assert t.validation.spans_A and t.validation.spans_B


def test_tensor_preserves_orthonormality(pyramid, gentiles):
    for s2 in gentiles.values():
        t = upb.tensor_upb(pyramid, s2, validate_now=False)
        bound = upb.gram_defect(pyramid.vectors) + upb.gram_defect(s2.vectors) + 1e-12
        assert upb.gram_defect(t.vectors) <= bound


def test_tensor_with_trivial_factor(pyramid):
    t = upb.tensor_upb(pyramid, upb.trivial_upb(), require_valid=False, validate_now=False)
    assert t.idx == pyramid.idx
    assert_allclose(t.vectors, pyramid.vectors)


def test_tensor_requires_validated_factors(pyramid):
    with pytest.raises(InvalidUpbError):
        upb.tensor_upb(pyramid, upb.build_pyramid(validate_now=False))


def test_regroup_permutation(pyramid, gentiles):
    s2 = gentiles[4]
    perm = upb.regroup_permutation(pyramid.idx, s2.idx)
    t = upb.tensor_upb(pyramid, s2, validate_now=False)
    for i, p in enumerate(pyramid.states):
        for j, q in enumerate(s2.states):
            naive = np.kron(p.vector, q.vector)
            assert_allclose(naive[perm], t.states[i * len(s2) + j].vector, atol=1e-15)


def test_product_state_requires_unit_factors():
    with pytest.raises(ValueError):
        ProductState([1.0, 1.0], [1.0])


def test_json_round_trip(tmp_path, gentiles):
    s = gentiles[5]
    path = tmp_path / "g5.json"
    path.write_text(json.dumps(s.to_json()))
    back = upb.load_upb(path)
    assert back.label == s.label and back.idx == s.idx
    assert_allclose(back.vectors, s.vectors, atol=0)


def test_malformed_json_is_rejected():
    with pytest.raises(ValueError):
        Upb.from_json({"dims": [2, 2]})


def test_relabel_keeps_states(pyramid):
    r = pyramid.relabel([4, 3, 2, 1, 0])
    assert_allclose(r.vectors, pyramid.vectors[::-1])
    assert r.validation is None


def test_complete_basis_is_not_a_upb():
    rep = upb.validate(upb.standard_product_basis(2, 2))
    assert rep.verdict is Verdict.INVALID and not rep.proper_subspace
