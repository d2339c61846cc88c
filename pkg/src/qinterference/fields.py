"""Finite-box overlap integrals and multimode field-operator expansions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .algebra import Channel, LadderOp, OperatorExpr, annihilate, create
from .errors import RegistryError, SpeciesMismatchError
from .modes import ModeLabel, Species, dispersion  # noqa: F401  (re-export)

# |x/(2 pi) - round| below this counts as an exact node of the sinc factor
_NODE_TOL = 1e-12


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned quantization box centered at the origin."""

    lengths: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        if len(lengths) != 3 or any(not (x > 0 and math.isfinite(x)) for x in lengths):
            raise ValueError(f"box side lengths must be 3 positive numbers, got {self.lengths}")
        object.__setattr__(self, "lengths", lengths)

    @property
    def volume(self) -> float:
        lx, ly, lz = self.lengths
        return lx * ly * lz


UNIT_BOX = BoxDomain()


def _box_factor(dk: float, length: float) -> float:
    """integral of exp(i dk x) over [-L/2, L/2]."""
    if dk == 0.0:
        return length
    half = 0.5 * dk * length
    turns = half / math.pi
    if turns != 0 and abs(turns - round(turns)) < _NODE_TOL:
        return 0.0
    return 2.0 * math.sin(half) / dk


def overlap_integral(k_n, k_m, phase_n: float, phase_m: float,
                     box: BoxDomain = UNIT_BOX) -> complex:
    """Box integral of exp(-i k_n.r - i phase_n) exp(i k_m.r + i phase_m).

    For a centered box this factorizes into a phase times a product of
    ``2 sin(dk_j L_j / 2) / dk_j`` with ``dk = k_m - k_n``.
    """
    dk = np.asarray(k_m, dtype=float) - np.asarray(k_n, dtype=float)
    magnitude = 1.0
    for dkj, lj in zip(dk, box.lengths):
        magnitude *= _box_factor(float(dkj), lj)
        if magnitude == 0.0:
            return 0j
    return magnitude * cmath.exp(1j * (phase_m - phase_n))


def mode_overlap(mode_n: ModeLabel, mode_m: ModeLabel, box: BoxDomain = UNIT_BOX) -> complex:
    return overlap_integral(mode_n.k, mode_m.k, mode_n.phase, mode_m.phase, box)


@dataclass(frozen=True)
class FieldTerm:
    """One term ``amplitude * op * exp(sign * i (k.r + phase))``."""

    op: LadderOp
    amplitude: float
    sign: int

    def factor_at(self, r) -> complex:
        m = self.op.mode
        return self.amplitude * cmath.exp(
            self.sign * 1j * (float(np.dot(m.k, r)) + m.phase))


@dataclass(frozen=True)
class FieldExpansion:
    """Field operator and its conjugate as explicit term lists."""

    species: Species
    modes: Tuple[ModeLabel, ...]
    psi: Tuple[FieldTerm, ...]
    psi_dagger: Tuple[FieldTerm, ...]

    def amplitude(self, mode: ModeLabel) -> float:
        return (2.0 * mode.energy) ** -0.5

    def mode(self, mode_id: str) -> ModeLabel:
        for m in self.modes:
            if m.id == mode_id:
                return m
        raise RegistryError(f"unknown mode id {mode_id!r}")

    def at(self, r) -> Tuple[OperatorExpr, OperatorExpr]:
        """The pair (psi(r), psi_dagger(r)) as linear operator expressions."""
        psi = OperatorExpr.from_terms((t.factor_at(r), (t.op,)) for t in self.psi)
        psi_dag = OperatorExpr.from_terms((t.factor_at(r), (t.op,)) for t in self.psi_dagger)
        return psi, psi_dag

    def with_phases(self, phases: Sequence[float]) -> "FieldExpansion":
        if len(phases) != len(self.modes):
            raise ValueError("one phase per mode required")
        return build_field(self.species, [m.with_phase(p) for m, p in zip(self.modes, phases)])

    def with_modes(self, modes: Sequence[ModeLabel]) -> "FieldExpansion":
        return build_field(self.species, modes)


def check_modes(species, modes: Sequence[ModeLabel]) -> Species:
    species = Species(species)
    seen = set()
    for m in modes:
        if m.species is not species:
            raise SpeciesMismatchError(
                f"mode {m.id!r} is {m.species.value}, field is {species.value}")
        if m.id in seen:
            raise RegistryError(f"duplicate mode id {m.id!r}")
        seen.add(m.id)
    return species


def build_field(species, modes: Sequence[ModeLabel]) -> FieldExpansion:
    """Expand the field over ``modes``.

    Each mode contributes an annihilate-particle term with
    ``exp(-i(k.r + phase))`` and a create-antiparticle term with
    ``exp(+i(k.r + phase))``; for photons the antiparticle operators are the
    particle ones.
    """
    species = check_modes(species, modes)
    anti = Channel.ANTIPARTICLE if species.has_antiparticles else Channel.PARTICLE
    psi: List[FieldTerm] = []
    psi_dag: List[FieldTerm] = []
    for m in modes:
        amp = (2.0 * m.energy) ** -0.5
        psi.append(FieldTerm(annihilate(m), amp, -1))
        psi.append(FieldTerm(create(m, anti), amp, +1))
        psi_dag.append(FieldTerm(create(m), amp, +1))
        psi_dag.append(FieldTerm(annihilate(m, anti), amp, -1))
    return FieldExpansion(species, tuple(modes), tuple(psi), tuple(psi_dag))
