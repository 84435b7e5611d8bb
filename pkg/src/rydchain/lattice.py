"""Chain geometry, Gaussian positional disorder and van der Waals couplings.

Units: lengths in micrometers, energies and Rabi frequencies as angular
frequencies in rad/us.  Values quoted as "2 pi x MHz" convert via
:func:`from_two_pi_mhz` on input so no 2 pi floats around the core.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError

#: Trap separation used for the shipped disorder scenarios (um).
R0_DEFAULT = 4.1

#: Interaction strength of the reference experiment, 2 pi x 8.4 MHz in rad/us.
V0_REFERENCE = 2 * np.pi * 8.4


def from_two_pi_mhz(f_mhz: float) -> float:
    """Convert a '2 pi x f MHz' quote to rad/us."""
    return 2 * np.pi * f_mhz


@dataclass(frozen=True)
class LatticeSpec:
    n_sites: int
    spacing_r0: float
    v0: float

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.spacing_r0 <= 0:
            raise ValueError("spacing_r0 must be positive")
        if self.v0 < 0:
            raise ValueError("v0 must be nonnegative")

    @property
    def c6(self) -> float:
        """Dispersion coefficient implied by v0 and the spacing (rad/us * um^6)."""
        return self.v0 * self.spacing_r0**6


@dataclass(frozen=True)
class DisorderSpec:
    """Per-axis Gaussian widths (sigma_1, sigma_2, sigma_3) in um.

    The chain lies along axis 3; axes 1 and 2 are transverse.
    """

    sigma: tuple[float, float, float]

    def __post_init__(self):
        if len(self.sigma) != 3 or any(s < 0 for s in self.sigma):
            raise ValueError("sigma must be three nonnegative widths")

    @property
    def kind(self) -> str:
        s1, s2, s3 = self.sigma
        if s1 == s2 == s3 == 0:
            return "none"
        if s1 == s2 == s3:
            return "iso"
        if s2 == s3 != s1:
            return "aniso"
        return "custom"

    @property
    def is_none(self) -> bool:
        return self.kind == "none"


#: Disorder scenarios of the reference experiment (sigma in um).
DISORDER_PRESETS = {
    "none": DisorderSpec((0.0, 0.0, 0.0)),
    "iso": DisorderSpec((0.12, 0.12, 0.12)),
    "aniso": DisorderSpec((1.0, 0.12, 0.12)),
}


def disorder_preset(name: str) -> DisorderSpec:
    try:
        return DISORDER_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown disorder preset {name!r}; use none|iso|aniso") from None


def ideal_configuration(spec: LatticeSpec) -> np.ndarray:
    """(n, 3) positions (0, 0, k*r0), k = 1..n."""
    pos = np.zeros((spec.n_sites, 3))
    pos[:, 2] = spec.spacing_r0 * np.arange(1, spec.n_sites + 1)
    return pos


def sample_configuration(spec: LatticeSpec, disorder: DisorderSpec, seed) -> np.ndarray:
    """Ideal positions plus independent per-axis Gaussian displacements.

    ``seed`` is anything ``numpy.random.SeedSequence`` accepts, or a
    SeedSequence itself.  The stream is a Philox counter generator, so a
    given seed reproduces the same configuration on any machine.
    """
    rng = rng_from_seed(seed)
    pos = ideal_configuration(spec)
    sigma = np.asarray(disorder.sigma)
    if np.any(sigma > 0):
        pos = pos + rng.normal(size=pos.shape) * sigma
    return pos


def rng_from_seed(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        seq = seed
    else:
        seq = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seq))


def realization_seed(master_seed: int, *path: int) -> np.random.SeedSequence:
    """Stable per-realization seed: master entropy plus an index path."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))


def coupling_matrix(config: np.ndarray, v0: float, r0: float) -> np.ndarray:
    """Pairwise interaction energies v0 * (r0 / |r_k - r_m|)^6, zero diagonal."""
    pos = np.asarray(config, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 3:
        raise ValueError("configuration must be an (n, 3) array")
    if not np.all(np.isfinite(pos)):
        raise GeometryError("non-finite atom position")
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    n = len(pos)
    off = ~np.eye(n, dtype=bool)
    if np.any(dist[off] < 1e-9):
        raise GeometryError("coincident atoms in configuration")
    with np.errstate(divide="ignore"):
        V = np.where(off, v0 * (r0 / np.where(off, dist, 1.0)) ** 6, 0.0)
    return V


def truncate_couplings(V: np.ndarray, max_neighbor_distance: int) -> np.ndarray:
    """Zero all couplings between sites more than ``max_neighbor_distance`` apart."""
    n = len(V)
    sep = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return np.where(sep <= max_neighbor_distance, V, 0.0)
