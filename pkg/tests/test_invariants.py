import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from hadpair import cmatrix as cm
from hadpair.biunitary import depth2_report, w2_codec
from hadpair.exceptions import NotDistinctError
from hadpair.hadamard import PhasePair, build_uv, omega
from hadpair.invariants import (
    CS_MARKER,
    LN3,
    check_commuting_cube,
    check_commuting_square,
    circulant_residual,
    commuting_square_pairs,
    conjugacy_witness,
    entropy_forms,
    entropy_h,
    eta,
    expectation_constants,
    full_report,
    gamma_coeffs,
    interior_angle,
    is_commuting_square_pair,
    relative_commutant,
    s0_build,
    sw_angle,
    sw_check,
    zeta,
)
from hadpair.tower import masa_of, q_split
from hadpair.verify import random_distinct_pairs

SPOT = PhasePair("1/1", "1/1", 0, 0)
TRIVIAL = PhasePair(0, 0, 0, 0)
WW = PhasePair("4/3", "4/3", 0, 0)
SPOT_H = 2 * math.log(3) - 16 / 9 * math.log(2)


def _angles(p):
    return (p.alpha1, p.alpha2, p.beta1, p.beta2)


def test_ww_realizes_omega():
    z1, z2 = WW.z
    assert abs(z1 - omega(3)) <= 1e-12 and abs(z2 - omega(3)) <= 1e-12


def test_zeta_examples():
    assert zeta(TRIVIAL) == pytest.approx(1)
    assert zeta(SPOT) == pytest.approx(-1 / 3)
    assert abs(zeta(WW)) <= 1e-12


def test_zeta_matches_term_by_term(rng):
    for _ in range(20):
        p = PhasePair.random(rng)
        assert abs(zeta(p) - oracles.zeta(*_angles(p))) <= 1e-12
        assert abs(zeta(p)) <= 1 + 1e-12


def test_gamma_examples():
    g = gamma_coeffs(TRIVIAL)
    assert np.allclose(g.as_tuple(), (1, 0, 0))
    g = gamma_coeffs(SPOT)
    assert g.gamma0 == pytest.approx(-1 / 3)
    assert g.norm_sq() == pytest.approx(1)


def test_gamma_reconstruction(rng):
    for _ in range(20):
        p = PhasePair.random(rng)
        g = gamma_coeffs(p)
        assert abs(g.norm_sq() - 1) <= 1e-10
        assert cm.max_norm(g.reconstruct() - p.d1.conj().T @ p.d2) <= 1e-10


def test_interior_angle_examples():
    assert interior_angle(SPOT).cos_closed == pytest.approx(1 / 9)
    assert abs(interior_angle(WW).cos_closed) <= 1e-12
    with pytest.raises(NotDistinctError):
        interior_angle(TRIVIAL)


def test_interior_angle_forms(rng):
    for p in random_distinct_pairs(rng, 50):
        ang = interior_angle(p)
        assert ang.residual <= 1e-9
        assert abs(ang.cos_closed - abs(zeta(p)) ** 2) <= 1e-9


def test_s0_examples(rng):
    assert cm.max_norm(s0_build(WW).matrix) <= 1e-9
    s0 = s0_build(SPOT).matrix
    assert cm.max_norm(s0) > 0.01
    assert cm.max_norm(s0 @ s0 - s0 / 9) <= 1e-9
    for _ in range(5):
        x = oracles.random_matrix(rng, 3)
        assert cm.max_norm(s0_build(SPOT)(q_split(x)[0])) <= 1e-12
    with pytest.raises(NotDistinctError):
        s0_build(TRIVIAL)


def test_s0_positive_hermitian(rng):
    for p in random_distinct_pairs(rng, 20):
        s0 = s0_build(p).matrix
        assert cm.max_norm(s0 - s0.conj().T) <= 1e-12
        assert cm.eig_hermitian(s0)[0] >= -1e-9
        assert cm.max_norm(s0 - oracles.s0(*_angles(p))) <= 1e-12


def test_s0_spectrum_is_rank_two():
    check = sw_check(SPOT)
    assert np.allclose(check.spectrum[:7], 0, atol=1e-12)
    assert np.allclose(check.spectrum[7:], 1 / 9, atol=1e-12)


def test_sw_angle_examples():
    assert sw_angle(SPOT) == pytest.approx(1.230959417, abs=1e-9)
    assert sw_angle(WW) == CS_MARKER
    with pytest.raises(NotDistinctError):
        sw_angle(TRIVIAL)


def test_eta():
    assert eta(0.0) == 0.0
    assert eta(1.0) == 0.0
    assert eta(0.5) == pytest.approx(0.5 * math.log(2))
    assert eta(1 + 1e-15) == 0.0


def test_entropy_examples():
    assert abs(entropy_h(TRIVIAL)) <= 1e-12
    assert entropy_h(SPOT) == pytest.approx(SPOT_H, abs=1e-9)
    assert entropy_h(SPOT) == pytest.approx(0.96496, abs=1e-5)
    assert entropy_h(WW) == pytest.approx(LN3, abs=1e-12)


def test_entropy_spot_entries():
    # |entries|^2 of F3^* diag(1,-1,-1) F3 are 1/9 on the diagonal and 4/9 off it
    u, v = oracles.uv(math.pi, math.pi, 0, 0)
    m = np.abs(u.conj().T @ v) ** 2
    assert np.allclose(np.diag(m), 1 / 9)
    assert np.allclose(m[~np.eye(3, dtype=bool)], 4 / 9)


def test_entropy_properties(rng):
    for _ in range(200):
        p = PhasePair.random(rng)
        forms = entropy_forms(p)
        assert forms.residual <= 1e-9
        assert abs(forms.matrix - oracles.entropy_entries(*_angles(p))) <= 1e-9
        assert 0 <= forms.matrix <= LN3 + 1e-12
        assert abs(entropy_h(p.swapped()) - forms.matrix) <= 1e-12


def test_commuting_square_pairs_exact():
    w = omega(3)
    targets = {(w, w), (w * w, w * w), (1, w), (1, w * w), (w, 1), (w * w, 1)}
    pairs = commuting_square_pairs()
    assert len(pairs) == 6
    for p in pairs:
        z = p.z
        assert any(abs(z[0] - a) <= 1e-12 and abs(z[1] - b) <= 1e-12 for a, b in targets)
        assert is_commuting_square_pair(p)
        rep = full_report(p)
        assert rep.distinct
        assert rep.angle_sw == CS_MARKER
        assert rep.pp_lambda == Fraction(1, 3)


def test_commuting_square_pair_membership(rng):
    assert not is_commuting_square_pair(SPOT)
    assert sum(is_commuting_square_pair(PhasePair.random(rng)) for _ in range(1000)) == 0


def test_check_commuting_square_examples():
    u, _, _ = build_uv(SPOT)
    assert check_commuting_square(cm.scalars(3), cm.diagonal_masa(3), masa_of(u), 3)
    uw, vw, _ = build_uv(WW)
    assert check_commuting_square(cm.scalars(3), masa_of(uw), masa_of(vw), 3)
    us, vs, _ = build_uv(SPOT)
    assert not check_commuting_square(cm.scalars(3), masa_of(us), masa_of(vs), 3)


def test_check_commuting_square_requires_containment():
    with pytest.raises(ValueError):
        check_commuting_square(cm.diagonal_masa(3), cm.scalars(3), cm.full_matrix_algebra(3), 3)
    with pytest.raises(ValueError):
        check_commuting_square(cm.scalars(3), cm.diagonal_masa(3), cm.full_matrix_algebra(3), 9)


def test_commuting_cube(rng):
    spot = check_commuting_cube(SPOT)
    assert spot.adjacent_faces and spot.slice and not spot.floor
    ww = check_commuting_cube(WW)
    assert ww.adjacent_faces and ww.slice and ww.floor
    for p in random_distinct_pairs(rng, 5):
        cube = check_commuting_cube(p)
        assert cube.adjacent_faces and cube.slice
    assert set(spot.to_dict()) == {"adjacent_faces", "slice", "floor"}


def test_relative_commutant_spot():
    rc = relative_commutant(SPOT)
    assert rc.dim == 3
    assert cm.same_span(rc, cm.diagonal_masa(3)) <= 1e-8
    assert circulant_residual(SPOT, rc) <= 1e-9
    with pytest.raises(NotDistinctError):
        relative_commutant(TRIVIAL)


def test_relative_commutant_random(rng):
    for p in random_distinct_pairs(rng, 10):
        rc = relative_commutant(p)
        assert rc.dim == 3 and cm.same_span(rc, cm.diagonal_masa(3)) <= 1e-8
        assert circulant_residual(p, rc) <= 1e-9


def test_principal_graph_matches_commutant():
    graph = depth2_report(w2_codec())
    assert len(graph.lower) == relative_commutant(SPOT).dim
    assert len(graph.edges) == 9


def test_conjugacy_witness():
    wit = conjugacy_witness(SPOT)
    assert np.allclose(wit.w, np.diag([1, -1, -1]))
    assert max(wit.span_residuals) <= 1e-8 and wit.commutant_residual <= 1e-8
    same = PhasePair(0.7, 1.9, 0.7, 1.9)
    with pytest.raises(NotDistinctError):
        conjugacy_witness(same)


def test_conjugacy_witness_identity_when_equal_phases():
    # beta = alpha makes u = v, which is the degenerate case; w is still I
    p = PhasePair(0.7, 1.9, 0.7, 1.9)
    assert np.allclose(p.d1 @ p.d2.conj().T, np.eye(3))


def test_expectation_constants(rng):
    for p in [SPOT] + list(random_distinct_pairs(rng, 20)):
        k = expectation_constants(p)
        z = zeta(p)
        assert abs(k.k2 - z) <= 1e-9
        assert abs(k.k3 - z.conjugate()) <= 1e-9
        assert k.residual <= 1e-9
        assert abs(k.k2 * k.k3 - abs(z) ** 2) <= 1e-9


def test_full_report_spot():
    rep = full_report(SPOT)
    assert rep.pp_lambda == Fraction(1, 3)
    assert rep.cos_interior == pytest.approx(1 / 9)
    assert rep.angle_sw == pytest.approx(math.acos(1 / 3))
    assert rep.entropy_h == pytest.approx(SPOT_H)
    assert rep.commuting_square is False
    assert rep.rel_commutant_dim == 3
    assert rep.all_passed
    d = rep.to_dict()
    assert d["pp_lambda"] == "1/3"
    assert d["H_bounds"] == [pytest.approx(SPOT_H), pytest.approx(LN3)]
    assert d["entropy_h_log3"] == pytest.approx(SPOT_H / LN3)
    assert all(set(v) == {"name", "pass", "residual"} for v in d["verdicts"])


def test_full_report_commuting_square():
    rep = full_report(WW)
    assert rep.cos_interior == pytest.approx(0, abs=1e-12)
    assert rep.angle_sw == CS_MARKER
    assert rep.entropy_h == pytest.approx(LN3)
    assert rep.commuting_square and rep.rel_commutant_dim == 3 and rep.all_passed


def test_full_report_degenerate():
    d = full_report(TRIVIAL).to_dict()
    assert d["distinct"] is False
    assert d["pp_lambda"] == "1"
    assert d["angle_sw"] is None and d["rel_commutant_dim"] is None
    assert d["verdicts"] == []
