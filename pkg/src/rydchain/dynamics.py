"""Gate backends: constrained ideal rotations and exact pulsed evolution.

Rotation convention
-------------------
Every pulse is a rotation exp(-i theta sigma_y) on the addressed transition,
with sigma_y oriented so that

    |0>  ->  cos(theta)|0>  + sin(theta)|1>      (transition 0 <-> 1)
    |1~> ->  cos(theta)|1~> + sin(theta)|1>      (transition 1 <-> 1~)

so a named "pi pulse" inverts population and corresponds to theta = pi/2,
a named "pi/2 pulse" to theta = pi/4.  The hyperfine orientation makes a
full transfer send |1> to -|1~>, which fixes the signs of the alternating
entangled states the sequences produce.

The ideal backend applies 1 - P_left P_right + P_left P_right exp(-i theta
sigma_y), where the projectors require every neighbor within the blockade
radius to be outside the Rydberg level; chain ends count as empty.

The realistic backend evolves exactly under

    H = 2 Omega sigma_y^(site) + sum_{k<m} V_km n_k n_m

for a time t = theta / (2 Omega), resonant drive, by splitting the
Hamiltonian into closed 2x2 blocks: the two driven levels of the addressed
atom against each frozen configuration of the others, whose interaction
energy enters the block diagonal.  Undriven levels only accumulate their
interaction phase.  The matrix element 2 Omega together with t = theta /
(2 Omega) is the unique pairing that makes a free pulse a theta rotation
and reproduces the closed-form two-atom amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import CapacityError, NumericalError
from .statekit import (
    GROUND,
    HYPERFINE,
    RYDBERG,
    LevelScheme,
    StateVector,
    basis_digits,
    check_norm,
)

PI_HALF = np.pi / 2
PI_QUARTER = np.pi / 4


class Transition(Enum):
    GROUND_RYDBERG = "01"
    RYDBERG_HYPERFINE = "1h"

    @property
    def levels(self) -> tuple[int, int]:
        """(low, high) level indices in the rotation convention above."""
        if self is Transition.GROUND_RYDBERG:
            return (GROUND, RYDBERG)
        return (HYPERFINE, RYDBERG)

    def requires(self) -> LevelScheme | None:
        return LevelScheme.THREE_LEVEL if self is Transition.RYDBERG_HYPERFINE else None


class PulseLabel(Enum):
    PI = "pi"
    HALF_PI = "half_pi"
    LITERAL = "literal"


@dataclass(frozen=True)
class PulseStep:
    site: int
    transition: Transition
    theta: float
    label: PulseLabel = PulseLabel.LITERAL

    def __post_init__(self):
        if self.site < 1:
            raise ValueError("site indices are 1-based")
        if self.label is PulseLabel.PI and self.theta != PI_HALF:
            raise ValueError("a named pi pulse has theta = pi/2")
        if self.label is PulseLabel.HALF_PI and self.theta != PI_QUARTER:
            raise ValueError("a named pi/2 pulse has theta = pi/4")
        if not -np.pi <= self.theta <= np.pi:
            raise ValueError("theta out of range [-pi, pi]")


def pi_pulse(site: int, transition: Transition = Transition.GROUND_RYDBERG) -> PulseStep:
    return PulseStep(site, transition, PI_HALF, PulseLabel.PI)


def half_pi_pulse(site: int, transition: Transition = Transition.GROUND_RYDBERG) -> PulseStep:
    return PulseStep(site, transition, PI_QUARTER, PulseLabel.HALF_PI)


class InteractionRange(Enum):
    FULL = "full"
    NEAREST_NEIGHBOR = "nn"


@dataclass(frozen=True)
class HamiltonianSpec:
    """Couplings, per-site detunings and the interaction-range toggle."""

    couplings: np.ndarray
    detuning: np.ndarray = field(default=None)  # defaults to zeros
    interaction_range: InteractionRange = InteractionRange.FULL

    def __post_init__(self):
        V = np.asarray(self.couplings, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise ValueError("couplings must be a square matrix")
        object.__setattr__(self, "couplings", V)
        det = self.detuning
        det = np.zeros(len(V)) if det is None else np.asarray(det, dtype=float)
        if det.shape != (len(V),):
            raise ValueError("detuning array length must match the chain")
        object.__setattr__(self, "detuning", det)

    @property
    def n_sites(self) -> int:
        return len(self.couplings)

    def effective_couplings(self) -> np.ndarray:
        if self.interaction_range is InteractionRange.FULL:
            return self.couplings
        n = self.n_sites
        sep = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
        return np.where(sep == 1, self.couplings, 0.0)


# ---------------------------------------------------------------------------
# index plumbing (cached per chain shape)

@lru_cache(maxsize=256)
def _pair_indices(n_sites: int, local_dim: int, site: int, lo: int, hi: int):
    dig = basis_digits(n_sites, local_dim)
    k = site - 1
    stride = local_dim ** (n_sites - 1 - k)
    sel_lo = np.where(dig[:, k] == lo)[0]
    sel_hi = sel_lo + (hi - lo) * stride
    for a in (sel_lo, sel_hi):
        a.setflags(write=False)
    return sel_lo, sel_hi


@lru_cache(maxsize=256)
def _free_mask(n_sites: int, local_dim: int, site: int, lo: int, hi: int, radius: int):
    """Mask over the lo-index set: True where no neighbor within ``radius`` is Rydberg."""
    dig = basis_digits(n_sites, local_dim)
    sel_lo, _ = _pair_indices(n_sites, local_dim, site, lo, hi)
    k = site - 1
    blocked = np.zeros(len(sel_lo), dtype=bool)
    for d in range(1, radius + 1):
        for kk in (k - d, k + d):
            if 0 <= kk < n_sites:
                blocked |= dig[sel_lo, kk] == RYDBERG
    free = ~blocked
    free.setflags(write=False)
    return free


def interaction_diagonal(n_sites: int, local_dim: int, couplings: np.ndarray) -> np.ndarray:
    """Total pairwise interaction energy of every basis configuration."""
    dig = basis_digits(n_sites, local_dim)
    occ = (dig == RYDBERG).astype(float)
    return 0.5 * np.einsum("ij,jk,ik->i", occ, couplings, occ)


def _require_scheme(state: StateVector, transition: Transition) -> None:
    needed = transition.requires()
    if needed is not None and state.scheme is not needed:
        raise ValueError(f"transition {transition.value} needs the {needed.name} scheme")


# ---------------------------------------------------------------------------
# ideal constrained gate

def apply_ideal_gate(state: StateVector, step: PulseStep, blockade_radius: int = 1) -> StateVector:
    """Perfect-blockade rotation: acts only where the neighborhood is Rydberg-free."""
    _require_scheme(state, step.transition)
    new = _ideal_on_array(
        state.amplitudes, state.n_sites, state.scheme.local_dim, step, blockade_radius
    )
    return check_norm(StateVector(state.n_sites, state.scheme, new))


def _ideal_on_array(amp, n_sites, local_dim, step: PulseStep, radius: int):
    lo, hi = step.transition.levels
    sel_lo, sel_hi = _pair_indices(n_sites, local_dim, step.site, lo, hi)
    free = _free_mask(n_sites, local_dim, step.site, lo, hi, radius)
    new = amp.copy()
    c, s = np.cos(step.theta), np.sin(step.theta)
    a_lo, a_hi = amp[sel_lo[free]], amp[sel_hi[free]]
    new[sel_lo[free]] = c * a_lo - s * a_hi
    new[sel_hi[free]] = s * a_lo + c * a_hi
    return new


# ---------------------------------------------------------------------------
# realistic pulsed evolution

def apply_realistic_pulse(
    state: StateVector, step: PulseStep, hamiltonian: HamiltonianSpec, omega: float
) -> StateVector:
    """Exact evolution under drive + interactions for t = theta / (2 omega)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    _require_scheme(state, step.transition)
    if hamiltonian.n_sites != state.n_sites:
        raise ValueError("Hamiltonian chain length does not match the state")
    e_tot = interaction_diagonal(
        state.n_sites, state.scheme.local_dim, hamiltonian.effective_couplings()
    )
    new = _pulse_on_array(
        state.amplitudes, state.n_sites, state.scheme.local_dim, step, e_tot, omega
    )
    return check_norm(StateVector(state.n_sites, state.scheme, new))


def _pulse_on_array(amp, n_sites, local_dim, step: PulseStep, e_tot, omega):
    lo, hi = step.transition.levels
    t = abs(step.theta) / (2.0 * omega)
    drive = 2.0 * omega * np.sign(step.theta) if step.theta else 2.0 * omega
    sel_lo, sel_hi = _pair_indices(n_sites, local_dim, step.site, lo, hi)
    # undriven levels of the addressed atom keep their interaction phase
    new = amp * np.exp(-1j * e_tot * t)
    d_lo, d_hi = e_tot[sel_lo], e_tot[sel_hi]
    avg = 0.5 * (d_lo + d_hi)
    w = 0.5 * (d_hi - d_lo)
    b = np.hypot(drive, w)
    phase = np.exp(-1j * avg * t)
    c = np.cos(b * t)
    s = np.sin(b * t) / b
    a_lo, a_hi = amp[sel_lo], amp[sel_hi]
    new[sel_lo] = phase * ((c + 1j * w * s) * a_lo - drive * s * a_hi)
    new[sel_hi] = phase * (drive * s * a_lo + (c - 1j * w * s) * a_hi)
    return new


# ---------------------------------------------------------------------------
# dense Hamiltonians

MAX_DENSE_SITES = 12
MAX_DENSE_DIM = 4096


def build_full_hamiltonian(hamiltonian: HamiltonianSpec, omega_per_site) -> np.ndarray:
    """Dense two-level Hamiltonian: drives 2*omega_k sigma_y plus diagonal terms.

    The sigma_y coefficient is 2*omega_k, matching the pulse backend; pass
    half the desired coefficient when a bare omega*sigma_y drive is wanted.
    """
    n = hamiltonian.n_sites
    if n > MAX_DENSE_SITES:
        raise CapacityError(f"dense Hamiltonian limited to {MAX_DENSE_SITES} sites")
    omegas = np.broadcast_to(np.asarray(omega_per_site, dtype=float), (n,))
    dig = basis_digits(n, 2)
    occ = (dig == RYDBERG).astype(float)
    diag = interaction_diagonal(n, 2, hamiltonian.effective_couplings())
    diag = diag + occ @ hamiltonian.detuning
    H = np.diag(diag).astype(np.complex128)
    for k in range(n):
        stride = 2 ** (n - 1 - k)
        sel = np.where(dig[:, k] == GROUND)[0]
        H[sel + stride, sel] += 2j * omegas[k]
        H[sel, sel + stride] += -2j * omegas[k]
    return H


def build_effective_hamiltonian(
    n_sites: int, omega_per_site, include_nnn: bool = False, v0: float = 0.0
) -> np.ndarray:
    """Blockade-constrained drive sum_k omega_k P_{k-1} sigma_y^(k) P_{k+1}.

    With ``include_nnn`` the next-nearest-neighbor tail (v0/64) sum n_k n_{k+2}
    is kept on the diagonal.  Here the sigma_y coefficient is omega_k itself,
    so exp(-i t H) on a single driven site is a rotation by theta = omega*t.
    """
    if n_sites > MAX_DENSE_SITES:
        raise CapacityError(f"dense Hamiltonian limited to {MAX_DENSE_SITES} sites")
    omegas = np.broadcast_to(np.asarray(omega_per_site, dtype=float), (n_sites,))
    dig = basis_digits(n_sites, 2)
    dim = 2**n_sites
    H = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(n_sites):
        stride = 2 ** (n_sites - 1 - k)
        sel = np.where(dig[:, k] == GROUND)[0]
        free = np.ones(len(sel), dtype=bool)
        for kk in (k - 1, k + 1):
            if 0 <= kk < n_sites:
                free &= dig[sel, kk] != RYDBERG
        sel = sel[free]
        H[sel + stride, sel] += 1j * omegas[k]
        H[sel, sel + stride] += -1j * omegas[k]
    if include_nnn:
        occ = dig == RYDBERG
        pairs = (occ[:, :-2] & occ[:, 2:]).sum(axis=1)
        H[np.diag_indices(dim)] += (v0 / 64.0) * pairs
    return H


def ground_state_dense(H: np.ndarray) -> tuple[float, StateVector]:
    """Lowest eigenpair of a Hermitian matrix over a 2- or 3-level chain basis."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("H must be square")
    dim = H.shape[0]
    if dim > MAX_DENSE_DIM:
        raise CapacityError(f"dense diagonalization limited to dimension {MAX_DENSE_DIM}")
    scale = max(np.abs(H).max(), 1.0)
    if np.abs(H - H.conj().T).max() > 1e-10 * scale:
        raise ValueError("H is not Hermitian")
    evals, evecs = np.linalg.eigh(H)
    energy = float(evals[0])
    vec = evecs[:, 0]
    residual = np.linalg.norm(H @ vec - energy * vec)
    if residual > 1e-8 * scale:
        raise NumericalError(f"eigenpair residual {residual:.2e}")
    n_sites, scheme = _infer_chain(dim)
    return energy, StateVector(n_sites, scheme, vec.astype(np.complex128))


def _infer_chain(dim: int) -> tuple[int, LevelScheme]:
    for base, scheme in ((2, LevelScheme.TWO_LEVEL), (3, LevelScheme.THREE_LEVEL)):
        n = round(np.log(dim) / np.log(base))
        if base**n == dim:
            return n, scheme
    raise ValueError(f"dimension {dim} is not a 2- or 3-level chain")
