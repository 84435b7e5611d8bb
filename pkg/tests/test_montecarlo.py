import numpy as np
import pytest

from rydchain.analytics import ghz_fidelity_two_atoms
from rydchain.lattice import DisorderSpec, disorder_preset
from rydchain.montecarlo import SweepSpec, realization_fidelity, run_sweep
from rydchain.protocols import ProtocolKind


def make_spec(**kw):
    base = dict(
        protocol=ProtocolKind.GHZ2,
        n_list=(2,),
        grid=(6.9,),
        disorder=disorder_preset("none"),
        realizations=10,
        master_seed=7,
    )
    base.update(kw)
    return SweepSpec(**base)


class TestRealizationFidelity:
    def test_deterministic(self):
        spec = make_spec(disorder=disorder_preset("iso"))
        a = realization_fidelity(spec, 2, 0, 5)
        b = realization_fidelity(spec, 2, 0, 5)
        assert a == b
        assert a != realization_fidelity(spec, 2, 0, 6)

    def test_no_disorder_equals_protocol_fidelity(self):
        spec = make_spec()
        f = realization_fidelity(spec, 2, 0, 0)
        assert f == pytest.approx(ghz_fidelity_two_atoms(6.9, 1.0), abs=1e-10)

    def test_vanishing_disorder_continuity(self):
        tiny = make_spec(disorder=DisorderSpec((1e-9, 1e-9, 1e-9)))
        none = make_spec()
        f_tiny = realization_fidelity(tiny, 2, 0, 0)
        f_none = realization_fidelity(none, 2, 0, 0)
        assert abs(f_tiny - f_none) < 1e-6


class TestRunSweep:
    def test_no_disorder_realization_count_irrelevant(self):
        r1 = run_sweep(make_spec(realizations=1))
        r100 = run_sweep(make_spec(realizations=100))
        assert r1[0].mean_fidelity == r100[0].mean_fidelity
        assert r100[0].std_error == 0.0

    def test_ghz2_mean_matches_closed_form(self):
        recs = run_sweep(make_spec(grid=(3.0, 6.9, 15.5)))
        for rec in recs:
            assert rec.mean_fidelity == pytest.approx(
                ghz_fidelity_two_atoms(rec.v0_over_omega, 1.0), abs=1e-10
            )

    def test_record_bounds(self):
        spec = make_spec(
            protocol=ProtocolKind.TRANSPORT,
            n_list=(3,),
            grid=(5.0, 10.0),
            disorder=disorder_preset("iso"),
            realizations=50,
        )
        for rec in run_sweep(spec):
            assert 0 <= rec.fid_min <= rec.mean_fidelity <= rec.fid_max <= 1
            assert rec.std_error >= 0

    def test_deterministic_across_worker_counts(self):
        spec = make_spec(
            protocol=ProtocolKind.TRANSPORT,
            n_list=(2, 3),
            grid=(5.0, 12.0),
            disorder=disorder_preset("aniso"),
            realizations=20,
        )
        serial = run_sweep(spec, workers=1)
        four = run_sweep(spec, workers=4)
        assert serial == four

    def test_capacity_failure_surfaces_as_nan_row(self):
        spec = make_spec(
            protocol=ProtocolKind.TRANSPORT,
            n_list=(2, 25),
            grid=(6.9,),
            realizations=1,
        )
        recs = run_sweep(spec)
        assert np.isfinite(recs[0].mean_fidelity)
        assert np.isnan(recs[1].mean_fidelity)

    def test_strictly_increasing_grid_enforced(self):
        with pytest.raises(ValueError):
            make_spec(grid=(5.0, 5.0))


class TestDisorderPhysics:
    def test_transport_large_ratio_immune(self):
        common = dict(
            protocol=ProtocolKind.TRANSPORT,
            n_list=(4,),
            grid=(6.9, 50.0),
            realizations=200,
            master_seed=11,
        )
        none = run_sweep(make_spec(**common))
        iso = run_sweep(make_spec(disorder=disorder_preset("iso"), **common))
        # strong blockade: disorder barely matters
        assert abs(iso[1].mean_fidelity - none[1].mean_fidelity) < 0.02
        # fast-operation point: disorder hurts
        assert iso[0].mean_fidelity < none[0].mean_fidelity

    @pytest.mark.parametrize("protocol,ratio,z", [
        (ProtocolKind.GHZ2, 6.9, 1.0),
        (ProtocolKind.TRANSPORT, 6.9, 1.0),
        (ProtocolKind.DIMER_MPS, 15.5, 1.0),
    ])
    @pytest.mark.parametrize("n", [4, 6])
    def test_disorder_ordering_near_operating_points(self, protocol, ratio, z, n):
        reals = 200
        means, errs = {}, {}
        for name in ("none", "iso", "aniso"):
            spec = make_spec(
                protocol=protocol, n_list=(n,), grid=(ratio,),
                disorder=disorder_preset(name), realizations=reals, master_seed=23, z=z,
            )
            rec = run_sweep(spec)[0]
            means[name], errs[name] = rec.mean_fidelity, rec.std_error
        assert means["none"] >= means["iso"] >= means["aniso"]
        sep = means["none"] - means["aniso"]
        assert sep > 2 * np.sqrt(errs["none"] ** 2 + errs["aniso"] ** 2)

    def test_fidelity_decays_with_chain_length_under_disorder(self):
        spec = make_spec(
            protocol=ProtocolKind.TRANSPORT,
            n_list=(2, 4, 6),
            grid=(6.9,),
            disorder=disorder_preset("aniso"),
            realizations=200,
            master_seed=31,
        )
        recs = run_sweep(spec)
        fids = [r.mean_fidelity for r in recs]
        assert fids[0] > fids[1] > fids[2]
