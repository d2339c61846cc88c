"""Mode labels and the relativistic dispersion relation.

Natural units throughout (hbar = c = 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateModeError

TWO_PI = 2.0 * math.pi


class Species(str, enum.Enum):
    SCALAR = "scalar-boson"
    VECTOR = "vector-boson"
    FERMION = "spinor-fermion"

    @property
    def is_fermion(self) -> bool:
        return self is Species.FERMION

    @property
    def statistics_sign(self) -> int:
        """+1 for commuting (Bose) statistics, -1 for anticommuting (Fermi)."""
        return -1 if self is Species.FERMION else 1

    @property
    def has_antiparticles(self) -> bool:
        # photons are their own antiparticles: b is identified with a
        return self is not Species.VECTOR


def dispersion(k: Sequence[float], mass: float = 0.0) -> float:
    """Return the mode energy ``sqrt(|k|^2 + mass^2)``.

    Raises DegenerateModeError for a massless mode at rest.
    """
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise ValueError(f"wavevector must have 3 components, got shape {k.shape}")
    if mass < 0:
        raise ValueError("mass must be non-negative")
    eps = math.sqrt(float(k @ k) + mass * mass)
    if eps == 0.0:
        raise DegenerateModeError("zero-energy mode (k = 0 and mass = 0)")
    return eps


_VALID_INDEX = {
    Species.SCALAR: (None,),
    Species.VECTOR: (1, 2),
    Species.FERMION: (-0.5, 0.5),
}


@dataclass(frozen=True)
class ModeLabel:
    """One plane-wave field mode.

    Parameters
    ----------
    id : str
        Unique token within a field.
    species : Species or str
    k : 3-sequence of float
        Wavevector.
    mass : float
        Non-negative; must be 0 for the vector boson.
    phase : float
        Mode phase, reduced to [0, 2*pi).
    index : int, float or None
        Polarization (1 or 2) for photons, spin (-1/2 or +1/2) for fermions,
        None for the scalar boson.
    """

    id: str
    species: Species
    k: tuple = (0.0, 0.0, 1.0)
    mass: float = 0.0
    phase: float = 0.0
    index: Optional[float] = None

    def __post_init__(self):
        species = Species(self.species)
        object.__setattr__(self, "species", species)
        k = tuple(float(x) for x in self.k)
        if len(k) != 3:
            raise ValueError(f"mode {self.id!r}: wavevector must have 3 components")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)
        if species is Species.VECTOR and self.mass != 0.0:
            raise ValueError(f"mode {self.id!r}: vector bosons are massless")
        index = self.index
        if species is Species.SCALAR:
            index = None
        elif index is None:
            index = _VALID_INDEX[species][-1]
        if index not in _VALID_INDEX[species]:
            raise ValueError(
                f"mode {self.id!r}: index {index!r} invalid for {species.value}, "
                f"expected one of {_VALID_INDEX[species]}"
            )
        object.__setattr__(self, "index", index)
        # validates the (k, mass) pair
        dispersion(k, self.mass)

    @property
    def energy(self) -> float:
        return dispersion(self.k, self.mass)

    @property
    def kvec(self) -> np.ndarray:
        return np.array(self.k)

    def with_phase(self, phase: float) -> "ModeLabel":
        return replace(self, phase=phase)

    def with_k(self, k) -> "ModeLabel":
        return replace(self, k=tuple(k))
