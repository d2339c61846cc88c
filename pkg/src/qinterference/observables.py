"""Expectation values of normal-ordered quadratic operators on Fock states."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algebra import CANONICAL, AlgebraPolicy, Channel, LadderOp, OperatorExpr, bracket
from .errors import OrderingError, PauliViolationError
from .hamiltonian import (
    HamiltonianSpec, Quantity, observable_cross, observable_diagonal, ordered_pairs,
    pair_operators,
)
from .modes import ModeLabel, Species

IMAG_TOL = 1e-9


class Contraction(str, enum.Enum):
    """Rule for cross-mode expectations <a†_n a_m>, n != m, on a Fock state.

    ORTHODOX gives 0, and in reports also discards the scalar left behind
    when a cross pair was normal ordered. COHERENT gives sqrt(n_n n_m)
    whenever the algebra policy assigns the pair a unit-magnitude bracket,
    and 0 otherwise.
    """

    ORTHODOX = "orthodox"
    COHERENT = "coherent"


@dataclass(frozen=True)
class FockState:
    """Occupation numbers per mode id: (particles, antiparticles)."""

    occupations: Mapping[str, Tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        occ = {}
        for mode_id, pair in self.occupations.items():
            if isinstance(pair, (int, np.integer)):
                pair = (pair, 0)
            n, nbar = (int(x) for x in pair)
            if n < 0 or nbar < 0 or (n, nbar) != tuple(pair):
                raise ValueError(f"occupations of {mode_id!r} must be non-negative integers")
            occ[mode_id] = (n, nbar)
        object.__setattr__(self, "occupations", occ)

    @classmethod
    def uniform(cls, modes: Sequence[ModeLabel], n: int, nbar: int = 0) -> "FockState":
        return cls({m.id: (n, nbar) for m in modes})

    @classmethod
    def vacuum(cls) -> "FockState":
        return cls({})

    def count(self, mode_id: str, channel: Channel = Channel.PARTICLE) -> int:
        n, nbar = self.occupations.get(mode_id, (0, 0))
        return n if channel is Channel.PARTICLE else nbar

    def validate(self, modes: Sequence[ModeLabel]) -> None:
        for m in modes:
            n, nbar = self.occupations.get(m.id, (0, 0))
            if m.species is Species.FERMION and (n > 1 or nbar > 1):
                raise PauliViolationError(
                    f"fermion mode {m.id!r} has occupations ({n}, {nbar})")
            if m.species is Species.VECTOR and nbar != 0:
                raise ValueError(f"photon mode {m.id!r} cannot carry antiparticles")


def _modes_of(expr: OperatorExpr):
    seen = {}
    for factors in expr.terms:
        for op in factors:
            seen[(op.mode.id, op.mode.phase, op.mode.k)] = op.mode
    return list(seen.values())


def _pair_value(x: LadderOp, y: LadderOp, state: FockState, contraction: Contraction,
                policy: AlgebraPolicy) -> float:
    """<x y> for a creator x followed by an annihilator y."""
    if not x.is_create or y.is_create or x.channel is not y.channel:
        return 0.0
    if x.mode == y.mode:
        return float(state.count(x.mode.id, x.channel))
    if contraction is Contraction.ORTHODOX:
        return 0.0
    if abs(abs(bracket(y, x, policy)) - 1.0) > 1e-12:
        return 0.0
    return math.sqrt(state.count(x.mode.id, x.channel) * state.count(y.mode.id, y.channel))


def expectation(expr: OperatorExpr, state: FockState,
                contraction: Contraction = Contraction.ORTHODOX,
                policy: AlgebraPolicy = CANONICAL, vacuum_terms: bool = True) -> complex:
    """Complex <state| expr |state> for a normal-ordered expression."""
    contraction = Contraction(contraction)
    if not expr.is_normal_ordered():
        raise OrderingError("expectation requires a normal-ordered expression")
    state.validate(_modes_of(expr))
    total = expr.constant if vacuum_terms else 0j
    for factors, coef in expr.terms.items():
        if len(factors) == 2:
            total += coef * _pair_value(factors[0], factors[1], state, contraction, policy)
        elif len(factors) > 2:
            raise OrderingError("expectation supports degree <= 2")
    return complex(total)


def expect(expr: OperatorExpr, state: FockState,
           contraction: Contraction = Contraction.ORTHODOX,
           policy: AlgebraPolicy = CANONICAL, vacuum_terms: bool = True) -> float:
    """Real expectation value; raises if the result has an imaginary part."""
    value = expectation(expr, state, contraction, policy, vacuum_terms)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ValueError(f"expectation is not real ({value}); is the operator Hermitian?")
    return float(value.real)


@dataclass
class ObservableReport:
    energy: float
    momentum: Tuple[float, float, float]
    particle_number: float
    charge: float
    vacuum_terms: bool = True
    algebra: str = ""
    contraction: str = ""
    pair_energy: Dict[Tuple[str, str], float] = field(default_factory=dict)
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def cross_energy(self) -> float:
        return float(sum(self.pair_energy.values()))

    def values(self) -> Dict[str, float]:
        px, py, pz = self.momentum
        return {"E": self.energy, "Px": px, "Py": py, "Pz": pz,
                "Ntot": self.particle_number, "Q": self.charge}

    def as_dict(self) -> dict:
        return {
            "energy": self.energy,
            "momentum": list(self.momentum),
            "particle_number": self.particle_number,
            "charge": self.charge,
            "cross_energy": self.cross_energy,
            "vacuum_terms": self.vacuum_terms,
            "algebra": self.algebra,
            "contraction": self.contraction,
            "pair_energy": [{"n": n, "m": m, "energy": e}
                            for (n, m), e in self.pair_energy.items()],
            "metadata": dict(self.metadata),
        }


def _expect_for(spec: HamiltonianSpec, state: FockState, contraction, expr):
    return expect(expr, state, contraction, spec.policy, spec.vacuum_terms)


def pair_expectation(op: OperatorExpr, state: FockState, contraction: Contraction,
                     policy: AlgebraPolicy, vacuum_terms: bool = True) -> float:
    """Real part of the expectation of one ordered cross pair.

    The scalar part of a cross-pair operator comes only from brackets of two
    distinct modes, so the orthodox rule (no inter-mode contractions) drops it.
    """
    if Contraction(contraction) is Contraction.ORTHODOX:
        vacuum_terms = False
    # one ordered pair is not Hermitian by itself; (n, m) + (m, n) is
    return expectation(op, state, contraction, policy, vacuum_terms).real


def report(spec: HamiltonianSpec, state: FockState,
           contraction: Contraction = Contraction.COHERENT) -> ObservableReport:
    """Energy, momentum, particle number and charge of ``state``.

    Each observable is the sum of its diagonal terms and its ordered cross
    pairs; ``pair_energy`` keeps the per-pair energy contributions.
    """
    contraction = Contraction(contraction)
    state.validate(spec.modes)

    def pairs(quantity, component=0):
        return {key: pair_expectation(op, state, contraction, spec.policy, spec.vacuum_terms)
                for key, op in pair_operators(spec, quantity, component).items()}

    def value(quantity, component=0):
        diag = sum(_expect_for(spec, state, contraction,
                               observable_diagonal(m, quantity, component, spec.vacuum_terms))
                   for m in spec.modes)
        return float(diag + sum(pairs(quantity, component).values()))

    charge = 0.0 if spec.species is Species.VECTOR else value(Quantity.CHARGE)
    return ObservableReport(
        energy=value(Quantity.ENERGY),
        momentum=tuple(value(Quantity.MOMENTUM, j) for j in range(3)),
        particle_number=value(Quantity.NUMBER),
        charge=charge,
        vacuum_terms=spec.vacuum_terms,
        algebra=spec.policy.describe(),
        contraction=contraction.value,
        pair_energy=pairs(Quantity.ENERGY),
        metadata={"species": spec.species.value, "n_modes": len(spec.modes)},
    )


# (quantity, component, column name); the phase response tracks all of them
_CHANNELS = (
    (Quantity.ENERGY, 0, "E"),
    (Quantity.MOMENTUM, 0, "Px"),
    (Quantity.MOMENTUM, 1, "Py"),
    (Quantity.MOMENTUM, 2, "Pz"),
    (Quantity.NUMBER, 0, "Ntot"),
    (Quantity.CHARGE, 0, "Q"),
)
_HARMONICS = np.arange(-2, 3)


class PhaseResponse:
    """All observables as explicit trigonometric polynomials of the phases.

    Each ordered pair (n, m) contributes a function of phase_m - phase_n
    alone, with harmonics of order at most 2 (one from the overlap, one from
    a phase-valued bracket), so five equispaced evaluations of the pair
    operator determine it exactly. Diagonal terms are phase independent.
    The result evaluates many phase tuples at once.
    """

    def __init__(self, spec: HamiltonianSpec, state: FockState,
                 contraction: Contraction = Contraction.COHERENT):
        self.spec = spec
        self.state = state
        self.contraction = Contraction(contraction)
        state.validate(spec.modes)
        modes = list(spec.modes)
        index = {m.id: i for i, m in enumerate(modes)}
        self.n_modes = len(modes)
        self.base = {}
        self.pairs = []  # (i, j) index pairs
        coeffs = []
        samples = 2 * np.pi * np.arange(5) / 5
        for quantity, comp, name in _CHANNELS:
            if quantity is Quantity.CHARGE and spec.species is Species.VECTOR:
                self.base[name] = 0.0
                continue
            self.base[name] = sum(
                _expect_for(spec, state, self.contraction,
                            observable_diagonal(m, quantity, comp, spec.vacuum_terms))
                for m in modes)
        pair_list = list(ordered_pairs(modes))
        for n, m in pair_list:
            self.pairs.append((index[n.id], index[m.id]))
            per_channel = []
            for quantity, comp, name in _CHANNELS:
                vals = np.array([
                    self._pair_expect(n.with_phase(0.0), m.with_phase(d), quantity, comp)
                    for d in samples])
                # vals[t] = sum_h c_h exp(i h d_t) -> c_h from the inverse DFT
                c = np.fft.fft(vals) / 5
                per_channel.append(c[_HARMONICS % 5])
            coeffs.append(per_channel)
        # shape (pairs, channels, harmonics)
        self.coeffs = np.array(coeffs, dtype=complex).reshape(
            len(pair_list), len(_CHANNELS), len(_HARMONICS))

    def _pair_expect(self, n, m, quantity, comp):
        spec = self.spec
        if quantity is Quantity.CHARGE and spec.species is Species.VECTOR:
            return 0.0
        op = observable_cross(n, m, spec.box, spec.policy, quantity, comp, spec.convention)
        return pair_expectation(op, self.state, self.contraction, spec.policy,
                                spec.vacuum_terms)

    def evaluate(self, phases) -> Dict[str, np.ndarray]:
        """Observables for each row of ``phases`` (shape (samples, n_modes))."""
        phases = np.atleast_2d(np.asarray(phases, dtype=float))
        if phases.shape[1] != self.n_modes:
            raise ValueError(f"expected {self.n_modes} phases per row")
        out = {name: np.full(len(phases), float(self.base[name])) for _, _, name in _CHANNELS}
        cross = np.zeros(len(phases))
        for p, (i, j) in enumerate(self.pairs):
            delta = phases[:, j] - phases[:, i]
            basis = np.exp(1j * np.outer(delta, _HARMONICS))
            contrib = (basis @ self.coeffs[p].T).real  # (samples, channels)
            for c, (_, _, name) in enumerate(_CHANNELS):
                out[name] += contrib[:, c]
            cross += contrib[:, 0]
        out["cross_E"] = cross
        return out


@dataclass
class SweepResult:
    phases: np.ndarray
    table: Dict[str, np.ndarray]
    vacuum_terms: bool
    algebra: str
    contraction: str

    @property
    def argmax(self) -> Tuple[float, ...]:
        return tuple(self.phases[int(np.argmax(self.table["E"]))])

    @property
    def argmin(self) -> Tuple[float, ...]:
        return tuple(self.phases[int(np.argmin(self.table["E"]))])

    def __len__(self):
        return len(self.phases)

    def report(self, i: int) -> ObservableReport:
        t = self.table
        return ObservableReport(
            energy=float(t["E"][i]),
            momentum=(float(t["Px"][i]), float(t["Py"][i]), float(t["Pz"][i])),
            particle_number=float(t["Ntot"][i]),
            charge=float(t["Q"][i]),
            vacuum_terms=self.vacuum_terms,
            algebra=self.algebra,
            contraction=self.contraction,
            metadata={"phases": tuple(float(x) for x in self.phases[i]),
                      "cross_energy": float(t["cross_E"][i])},
        )

    @property
    def reports(self):
        return [self.report(i) for i in range(len(self))]


def phase_sweep(spec: HamiltonianSpec, state: FockState,
                contraction: Contraction = Contraction.COHERENT,
                grid: Optional[Sequence[Sequence[float]]] = None) -> SweepResult:
    """Evaluate all observables on the Cartesian product of per-mode phase grids."""
    if grid is None or len(grid) != len(spec.modes):
        raise ValueError("need one phase grid per mode")
    grid = [np.asarray(g, dtype=float).ravel() for g in grid]
    if any(g.size == 0 for g in grid):
        raise ValueError("empty phase grid")
    phases = np.array(list(itertools.product(*grid)), dtype=float)
    response = PhaseResponse(spec, state, contraction)
    return SweepResult(phases, response.evaluate(phases), spec.vacuum_terms,
                       spec.policy.describe(), Contraction(contraction).value)
