"""Diagonal and cross-mode operator assembly for the three field species.

Every observable (energy, momentum component, particle number, charge) is
built by the same bilinear recipe

    prefactor * [ w_p  a†_n a_m  O_nm  +  s * w_a  b_n b†_m  conj(O_nm) ]

where ``O_nm`` is the box overlap of the two modes (1 on the diagonal),
``s`` is the statistics sign (-1 for fermions) and ``w_p``/``w_a`` are the
per-channel weights of the observable.  Photons identify ``b`` with ``a``
and carry a prefactor of 1/2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    CROSS_UNIT, AlgebraPolicy, Channel, OperatorExpr, annihilate, create, normal_order,
)
from .errors import SpeciesMismatchError
from .fields import UNIT_BOX, BoxDomain, FieldExpansion, mode_overlap
from .modes import ModeLabel, Species

#: Multiplier of each ordered cross pair, per species, as the pair terms are
#: printed for each field (the photon expression carries an extra 1/2).
CROSS_CONVENTION = {
    Species.SCALAR: 1.0,
    Species.VECTOR: 0.5,
    Species.FERMION: 1.0,
}

# photons: (1/2)(a†a + a a†) gives the N + 1/2 diagonal
_DIAGONAL_PREFACTOR = {
    Species.SCALAR: 1.0,
    Species.VECTOR: 0.5,
    Species.FERMION: 1.0,
}


class Quantity(str, enum.Enum):
    ENERGY = "energy"
    MOMENTUM = "momentum"
    NUMBER = "number"
    CHARGE = "charge"


def _mode_weights(quantity: Quantity, mode: ModeLabel, component: int) -> Tuple[float, float]:
    if quantity is Quantity.ENERGY:
        return mode.energy, mode.energy
    if quantity is Quantity.MOMENTUM:
        return mode.k[component], mode.k[component]
    if quantity is Quantity.NUMBER:
        return 1.0, 1.0
    return 1.0, -1.0


def _pair_weights(quantity: Quantity, n: ModeLabel, m: ModeLabel,
                  component: int) -> Tuple[float, float]:
    if quantity is Quantity.ENERGY:
        w = math.sqrt(n.energy * m.energy)
        return w, w
    if quantity is Quantity.MOMENTUM:
        # arithmetic mean: k components may be negative
        w = 0.5 * (n.k[component] + m.k[component])
        return w, w
    if quantity is Quantity.NUMBER:
        return 1.0, 1.0
    return 1.0, -1.0


def _bilinear(n: ModeLabel, m: ModeLabel, w_particle: float, w_anti: float,
              overlap: complex, prefactor: float) -> OperatorExpr:
    species = n.species
    anti = Channel.ANTIPARTICLE if species.has_antiparticles else Channel.PARTICLE
    s = species.statistics_sign
    return OperatorExpr.from_terms([
        (prefactor * w_particle * overlap, (create(n), annihilate(m))),
        (prefactor * s * w_anti * overlap.conjugate(),
         (annihilate(n, anti), create(m, anti))),
    ])


def _without_constant(expr: OperatorExpr) -> OperatorExpr:
    return OperatorExpr(expr.terms, 0.0)


def observable_diagonal(mode: ModeLabel, quantity: Quantity = Quantity.ENERGY,
                        component: int = 0, vacuum_terms: bool = True) -> OperatorExpr:
    if quantity is Quantity.CHARGE and mode.species is Species.VECTOR:
        return OperatorExpr()
    w_p, w_a = _mode_weights(quantity, mode, component)
    raw = _bilinear(mode, mode, w_p, w_a, 1.0 + 0j, _DIAGONAL_PREFACTOR[mode.species])
    out = normal_order(raw)
    return out if vacuum_terms else _without_constant(out)


def observable_cross(mode_n: ModeLabel, mode_m: ModeLabel, box: BoxDomain,
                     policy: AlgebraPolicy, quantity: Quantity = Quantity.ENERGY,
                     component: int = 0, convention: Optional[float] = None) -> OperatorExpr:
    if mode_n.species is not mode_m.species:
        raise SpeciesMismatchError("cross term between different species")
    if mode_n.id == mode_m.id:
        raise ValueError("cross term needs two distinct modes")
    if mode_n.index != mode_m.index:
        return OperatorExpr()
    if quantity is Quantity.CHARGE and mode_n.species is Species.VECTOR:
        return OperatorExpr()
    overlap = mode_overlap(mode_n, mode_m, box)
    if overlap == 0:
        return OperatorExpr()
    if convention is None:
        convention = CROSS_CONVENTION[mode_n.species]
    w_p, w_a = _pair_weights(quantity, mode_n, mode_m, component)
    return normal_order(_bilinear(mode_n, mode_m, w_p, w_a, overlap, convention), policy)


def diagonal_term(mode: ModeLabel, vacuum_terms: bool = True) -> OperatorExpr:
    """Single-mode energy operator: eps(N + Nbar + 1), eps(N + 1/2) or eps(N + Nbar - 1)."""
    return observable_diagonal(mode, Quantity.ENERGY, vacuum_terms=vacuum_terms)


def cross_term(mode_n: ModeLabel, mode_m: ModeLabel, box: BoxDomain = UNIT_BOX,
               policy: AlgebraPolicy = CROSS_UNIT,
               convention: Optional[float] = None) -> OperatorExpr:
    """Normal-ordered energy coupling of the ordered pair (n, m), n != m.

    Modes with different polarization or spin index do not couple and give
    the zero expression.
    """
    return observable_cross(mode_n, mode_m, box, policy, Quantity.ENERGY,
                            convention=convention)


@dataclass(frozen=True)
class HamiltonianSpec:
    field: FieldExpansion
    box: BoxDomain = UNIT_BOX
    policy: AlgebraPolicy = CROSS_UNIT
    vacuum_terms: bool = True
    cross_convention: Optional[float] = None

    @property
    def species(self) -> Species:
        return self.field.species

    @property
    def modes(self) -> Tuple[ModeLabel, ...]:
        return self.field.modes

    @property
    def convention(self) -> float:
        if self.cross_convention is not None:
            return self.cross_convention
        return CROSS_CONVENTION[self.species]

    def with_phases(self, phases: Sequence[float]) -> "HamiltonianSpec":
        return replace(self, field=self.field.with_phases(phases))

    def with_modes(self, modes: Sequence[ModeLabel]) -> "HamiltonianSpec":
        return replace(self, field=self.field.with_modes(modes))


def ordered_pairs(modes: Sequence[ModeLabel]) -> Iterator[Tuple[ModeLabel, ModeLabel]]:
    for n in modes:
        for m in modes:
            if n.id != m.id:
                yield n, m


def pair_operators(spec: HamiltonianSpec, quantity: Quantity = Quantity.ENERGY,
                   component: int = 0) -> Dict[Tuple[str, str], OperatorExpr]:
    """Cross operator of every ordered pair, keyed by (id_n, id_m)."""
    out = {}
    for n, m in ordered_pairs(spec.modes):
        term = observable_cross(n, m, spec.box, spec.policy, quantity, component,
                                spec.convention)
        out[(n.id, m.id)] = term if spec.vacuum_terms else _without_constant(term)
    return out


def build_observable(spec: HamiltonianSpec, quantity: Quantity = Quantity.ENERGY,
                     component: int = 0) -> OperatorExpr:
    """Sum of all diagonal terms and all ordered cross pairs."""
    total = OperatorExpr()
    for mode in spec.modes:
        total = total + observable_diagonal(mode, quantity, component, spec.vacuum_terms)
    for term in pair_operators(spec, quantity, component).values():
        total = total + term
    return total


def build_hamiltonian(spec: HamiltonianSpec) -> OperatorExpr:
    return build_observable(spec, Quantity.ENERGY)


def classical_energy(amplitudes: Sequence[complex], modes: Sequence[ModeLabel],
                     box: BoxDomain = UNIT_BOX) -> float:
    """Energy functional of a classical scalar field built from plane waves.

    The field is ``sum_n (2 eps_n)^(-1/2) A_n exp(i(k_n.r + phase_n) - i eps_n t)``;
    time and gradient terms are integrated over the box in closed form.
    """
    if len(amplitudes) != len(modes):
        raise ValueError("one amplitude per mode required")
    if any(m.species is not Species.SCALAR for m in modes):
        raise SpeciesMismatchError("classical energy is defined for the scalar field")
    masses = {m.mass for m in modes}
    if len(masses) > 1:
        raise ValueError("all modes of one scalar field share its mass")
    mass2 = masses.pop() ** 2 if masses else 0.0
    amps = np.asarray(amplitudes, dtype=complex)
    total = 0j
    for i, n in enumerate(modes):
        for j, m in enumerate(modes):
            # psi_n^* psi_m integrand weights: eps_n eps_m + k_n.k_m + m^2
            kernel = n.energy * m.energy + float(np.dot(n.k, m.k)) + mass2
            norm = 0.5 / math.sqrt(n.energy * m.energy)
            total += (amps[i].conjugate() * amps[j] * kernel * norm
                      * mode_overlap(n, m, box))
    return float(total.real)
