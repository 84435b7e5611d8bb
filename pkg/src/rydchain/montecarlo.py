"""Disorder-averaged fidelity sweeps over interaction-strength grids.

Each sweep cell (chain length, V0/Omega point) draws quenched atom
configurations: one position sample per protocol run, held fixed for the
whole pulse sequence.  Omega is set to 1 rad/us and V0 to the grid ratio;
fidelities depend on the ratio only.  Seeding is positional, so results
are independent of worker count and identical across reruns.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import HamiltonianSpec, InteractionRange
from .errors import CapacityError
from .lattice import (
    R0_DEFAULT,
    DisorderSpec,
    LatticeSpec,
    coupling_matrix,
    disorder_preset,
    ideal_configuration,
    realization_seed,
    sample_configuration,
)
from .protocols import (
    ProtocolKind,
    ProtocolPlan,
    RealisticBackend,
    execute,
    plan_dimer_mps,
    plan_ghz,
    plan_transport,
)
from .statekit import LevelScheme, StateVector, reduce_to_site
from .targets import dimer_target_direct, fidelity_mixed_single_qubit, fidelity_pure, ghz_target

WORKERS_ENV = "RYDCHAIN_WORKERS"


@dataclass(frozen=True)
class SweepSpec:
    protocol: ProtocolKind
    n_list: tuple[int, ...]
    grid: tuple[float, ...]
    disorder: DisorderSpec
    realizations: int
    master_seed: int
    interaction_range: InteractionRange = InteractionRange.FULL
    z: float = 1.0
    blockade_range: int = 1
    alpha: complex = 2**-0.5
    beta: complex = 2**-0.5
    spacing_r0: float = R0_DEFAULT

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        if isinstance(self.disorder, str):
            object.__setattr__(self, "disorder", disorder_preset(self.disorder))


@dataclass(frozen=True)
class SweepRecord:
    protocol: str
    n: int
    v0_over_omega: float
    disorder: str
    realizations: int
    mean_fidelity: float
    std_error: float
    fid_min: float
    fid_max: float


def _plan_for(spec: SweepSpec, n: int) -> ProtocolPlan:
    if spec.protocol is ProtocolKind.GHZ2:
        return plan_ghz(n, LevelScheme.TWO_LEVEL)
    if spec.protocol is ProtocolKind.GHZ3:
        return plan_ghz(n, LevelScheme.THREE_LEVEL)
    if spec.protocol is ProtocolKind.DIMER_MPS:
        return plan_dimer_mps(n, spec.z, spec.blockade_range)
    if spec.protocol is ProtocolKind.TRANSPORT:
        return plan_transport(n, spec.alpha, spec.beta)
    raise ValueError(f"unknown protocol {spec.protocol}")


def _target_state(spec: SweepSpec, plan: ProtocolPlan) -> StateVector | None:
    if spec.protocol is ProtocolKind.TRANSPORT:
        return None  # compared through the reduced final-site state
    if spec.protocol is ProtocolKind.DIMER_MPS:
        return dimer_target_direct(plan.n_sites, spec.z, spec.blockade_range)
    return ghz_target(plan.n_sites, plan.scheme)


def _one_realization(
    spec: SweepSpec,
    n: int,
    grid_index: int,
    realization_index: int,
    plan: ProtocolPlan,
    target: StateVector | None,
) -> float:
    ratio = spec.grid[grid_index]
    lattice = LatticeSpec(n, spec.spacing_r0, ratio)
    if spec.disorder.is_none:
        config = ideal_configuration(lattice)
    else:
        seed = realization_seed(spec.master_seed, n, grid_index, realization_index)
        config = sample_configuration(lattice, spec.disorder, seed)
    couplings = coupling_matrix(config, ratio, spec.spacing_r0)
    ham = HamiltonianSpec(couplings, interaction_range=spec.interaction_range)
    final = execute(plan, RealisticBackend(ham, omega=1.0))
    if target is None:
        rho = reduce_to_site(final, plan.n_sites)
        return fidelity_mixed_single_qubit(np.array([spec.alpha, spec.beta]), rho)
    return fidelity_pure(target, final)


def realization_fidelity(
    spec: SweepSpec, n: int, grid_index: int, realization_index: int
) -> float:
    """Fidelity of one quenched disorder realization (deterministic in its indices)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # odd-length GHZ targets warn per call
        plan = _plan_for(spec, n)
        target = _target_state(spec, plan)
        return _one_realization(spec, n, grid_index, realization_index, plan, target)


def _cell(spec: SweepSpec, n: int, grid_index: int) -> SweepRecord:
    reps = 1 if spec.disorder.is_none else spec.realizations
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # odd-length GHZ targets warn per call
        plan = _plan_for(spec, n)
        target = _target_state(spec, plan)
        values = np.array(
            [_one_realization(spec, n, grid_index, i, plan, target) for i in range(reps)]
        )
    if spec.disorder.is_none:
        values = np.repeat(values, spec.realizations)
    std_err = 0.0
    if spec.realizations > 1:
        std_err = float(values.std(ddof=1) / np.sqrt(spec.realizations))
    return SweepRecord(
        protocol=spec.protocol.value,
        n=n,
        v0_over_omega=spec.grid[grid_index],
        disorder=spec.disorder.kind,
        realizations=spec.realizations,
        mean_fidelity=float(values.mean()),
        std_error=std_err,
        fid_min=float(values.min()),
        fid_max=float(values.max()),
    )


def _cell_by_key(args) -> tuple[tuple[int, int], SweepRecord | None, str | None]:
    spec, n, gi = args
    try:
        return (n, gi), _cell(spec, n, gi), None
    except CapacityError as exc:
        return (n, gi), None, str(exc)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """All (n, grid) cells in canonical order; capacity failures are recorded
    as NaN rows rather than aborting the sweep."""
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    cells = [(spec, n, gi) for n in spec.n_list for gi in range(len(spec.grid))]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict()
            for key, rec, err in pool.map(_cell_by_key, cells):
                results[key] = (rec, err)
    else:
        results = {}
        for args in cells:
            key, rec, err = _cell_by_key(args)
            results[key] = (rec, err)
    records = []
    for n in spec.n_list:
        for gi in range(len(spec.grid)):
            rec, err = results[(n, gi)]
            if rec is None:
                rec = SweepRecord(
                    spec.protocol.value, n, spec.grid[gi], spec.disorder.kind,
                    spec.realizations, float("nan"), float("nan"), float("nan"), float("nan"),
                )
            records.append(rec)
    return records


def with_disorder(spec: SweepSpec, preset: str) -> SweepSpec:
    """Copy of ``spec`` with the named disorder preset."""
    return replace(spec, disorder=disorder_preset(preset))
