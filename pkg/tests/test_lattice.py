import numpy as np
import pytest

from rydchain.errors import GeometryError
from rydchain.lattice import (
    DISORDER_PRESETS,
    DisorderSpec,
    LatticeSpec,
    coupling_matrix,
    disorder_preset,
    from_two_pi_mhz,
    ideal_configuration,
    realization_seed,
    sample_configuration,
    truncate_couplings,
)


class TestIdealConfiguration:
    def test_reference_spacing(self):
        pos = ideal_configuration(LatticeSpec(2, 4.1, 1.0))
        assert np.allclose(pos, [[0, 0, 4.1], [0, 0, 8.2]])

    def test_single_atom(self):
        pos = ideal_configuration(LatticeSpec(1, 2.0, 1.0))
        assert pos.shape == (1, 3)

    def test_unit_spacing_distances(self):
        pos = ideal_configuration(LatticeSpec(5, 1.0, 1.0))
        for k in range(5):
            for m in range(5):
                assert np.linalg.norm(pos[k] - pos[m]) == pytest.approx(abs(k - m))


class TestLatticeSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            LatticeSpec(0, 1.0, 1.0)
        with pytest.raises(ValueError):
            LatticeSpec(2, -1.0, 1.0)
        with pytest.raises(ValueError):
            LatticeSpec(2, 1.0, -1.0)

    def test_c6_consistency(self):
        spec = LatticeSpec(2, 4.1, from_two_pi_mhz(8.4))
        assert spec.c6 == pytest.approx(spec.v0 * 4.1**6)


class TestDisorder:
    def test_preset_kinds(self):
        assert DISORDER_PRESETS["none"].kind == "none"
        assert DISORDER_PRESETS["iso"].kind == "iso"
        assert DISORDER_PRESETS["aniso"].kind == "aniso"
        assert DisorderSpec((0.3, 0.1, 0.2)).kind == "custom"
        assert disorder_preset("aniso").sigma == (1.0, 0.12, 0.12)

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            disorder_preset("weak")

    def test_negative_width_rejected(self):
        with pytest.raises(ValueError):
            DisorderSpec((-0.1, 0, 0))

    def test_zero_width_is_ideal(self):
        spec = LatticeSpec(4, 4.1, 1.0)
        pos = sample_configuration(spec, DisorderSpec((0, 0, 0)), seed=3)
        assert np.array_equal(pos, ideal_configuration(spec))

    def test_same_seed_bit_identical(self):
        spec = LatticeSpec(5, 4.1, 1.0)
        dis = DISORDER_PRESETS["iso"]
        a = sample_configuration(spec, dis, realization_seed(7, 1, 2, 3))
        b = sample_configuration(spec, dis, realization_seed(7, 1, 2, 3))
        assert np.array_equal(a, b)
        c = sample_configuration(spec, dis, realization_seed(7, 1, 2, 4))
        assert not np.array_equal(a, c)

    def test_sampled_variance_matches_widths(self):
        spec = LatticeSpec(50, 4.1, 1.0)
        dis = DisorderSpec((0.12, 0.12, 0.12))
        ideal = ideal_configuration(spec)
        disp = np.concatenate([
            sample_configuration(spec, dis, realization_seed(11, i)) - ideal
            for i in range(2000)
        ])
        var = disp.var(axis=0)  # 1e5 draws per axis
        assert np.all(np.abs(var - 0.12**2) < 0.02 * 0.12**2)

    def test_anisotropic_widths_land_on_their_axes(self):
        spec = LatticeSpec(50, 4.1, 1.0)
        dis = DISORDER_PRESETS["aniso"]
        ideal = ideal_configuration(spec)
        disp = np.concatenate([
            sample_configuration(spec, dis, realization_seed(13, i)) - ideal
            for i in range(400)
        ])
        std = disp.std(axis=0)
        assert std[0] == pytest.approx(1.0, rel=0.05)
        assert std[1] == pytest.approx(0.12, rel=0.05)
        assert std[2] == pytest.approx(0.12, rel=0.05)


class TestCouplingMatrix:
    def test_neighbor_value(self):
        pos = ideal_configuration(LatticeSpec(3, 4.1, 1.0))
        V = coupling_matrix(pos, 5.0, 4.1)
        assert V[0, 1] == pytest.approx(5.0, rel=1e-12)
        assert V[1, 2] == pytest.approx(5.0, rel=1e-12)

    def test_next_nearest_suppressed_64(self):
        pos = ideal_configuration(LatticeSpec(3, 4.1, 1.0))
        V = coupling_matrix(pos, 5.0, 4.1)
        assert V[0, 2] == pytest.approx(5.0 / 64, rel=1e-12)

    def test_transverse_offset(self):
        r0 = 4.1
        pos = np.array([[0, 0, 0], [r0, 0, r0]])  # distance sqrt(2) r0
        V = coupling_matrix(pos, 1.0, r0)
        assert V[0, 1] == pytest.approx(1.0 / 8, rel=1e-12)

    def test_symmetric_zero_diagonal_nonnegative(self):
        spec = LatticeSpec(5, 4.1, 2.0)
        pos = sample_configuration(spec, DISORDER_PRESETS["iso"], seed=5)
        V = coupling_matrix(pos, 2.0, 4.1)
        assert np.array_equal(V, V.T)
        assert np.all(np.diag(V) == 0)
        assert np.all(V >= 0)

    def test_rigid_motion_invariance(self, rng):
        spec = LatticeSpec(5, 4.1, 2.0)
        pos = sample_configuration(spec, DISORDER_PRESETS["iso"], seed=8)
        V = coupling_matrix(pos, 2.0, 4.1)
        for _ in range(5):
            q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            moved = pos @ q.T + rng.normal(size=3)
            V2 = coupling_matrix(moved, 2.0, 4.1)
            assert np.allclose(V2, V, rtol=1e-10, atol=0)

    def test_monotone_in_distance(self):
        base = np.array([[0, 0, 0], [0, 0, 4.1], [0, 0, 8.2]])
        V = coupling_matrix(base, 1.0, 4.1)
        stretched = base.copy()
        stretched[2, 2] += 0.5
        V2 = coupling_matrix(stretched, 1.0, 4.1)
        assert V2[1, 2] < V[1, 2]
        assert V2[0, 2] < V[0, 2]
        assert V2[0, 1] == V[0, 1]

    def test_coincident_atoms_rejected(self):
        with pytest.raises(GeometryError):
            coupling_matrix(np.zeros((2, 3)), 1.0, 4.1)

    def test_nonfinite_rejected(self):
        pos = np.array([[0, 0, 0], [0, 0, np.inf]])
        with pytest.raises(GeometryError):
            coupling_matrix(pos, 1.0, 4.1)


def test_truncate_couplings():
    V = np.arange(16.0).reshape(4, 4)
    out = truncate_couplings(V, 1)
    sep = np.abs(np.subtract.outer(np.arange(4), np.arange(4)))
    assert np.all(out[sep > 1] == 0)
    assert np.all(out[sep <= 1] == V[sep <= 1])
