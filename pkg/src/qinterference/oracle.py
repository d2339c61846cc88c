"""Brute-force reference evaluators used to cross-check the observables module.

Two independent routes:

* ``TruncatedFockSpace`` represents canonical ladder operators as sparse
  matrices on an enumerated occupation basis (Jordan-Wigner strings for
  fermions) and evaluates expectation values by direct multiplication.
* ``merged_energy`` collapses equal-wavevector boson modes into a single
  collective amplitude, as a classical coherent superposition would.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .algebra import Channel, LadderOp, OperatorExpr
from .errors import SpeciesMismatchError, TruncationError
from .modes import ModeLabel, Species
from .observables import FockState


def _boson_lowering(dim: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, format="csr")


_FERMION_LOWERING = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_PARITY = sp.diags([1.0, -1.0], format="csr")


class TruncatedFockSpace:
    """Product basis over every (mode, channel) site.

    Boson sites hold 0..n_max quanta, fermion sites 0 or 1.
    """

    def __init__(self, modes: Sequence[ModeLabel], n_max: int = 4):
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        self.modes = list(modes)
        self.n_max = n_max
        self.sites: List[Tuple[str, Channel, Species]] = []
        for m in self.modes:
            channels = [Channel.PARTICLE]
            if m.species.has_antiparticles:
                channels.append(Channel.ANTIPARTICLE)
            for ch in channels:
                self.sites.append((m.id, ch, m.species))
        self.dims = [2 if s is Species.FERMION else n_max + 1 for _, _, s in self.sites]
        self.dim = int(np.prod(self.dims))
        self._lowering: Dict[Tuple[str, Channel], sp.csr_matrix] = {}
        for j, (mode_id, ch, species) in enumerate(self.sites):
            self._lowering[(mode_id, ch)] = self._site_operator(j, species)

    def _site_operator(self, j: int, species: Species) -> sp.csr_matrix:
        factors = []
        for i, d in enumerate(self.dims):
            if i == j:
                factors.append(_FERMION_LOWERING if species is Species.FERMION
                               else _boson_lowering(d))
            elif i < j and species is Species.FERMION and self.sites[i][2] is Species.FERMION:
                factors.append(_PARITY)
            else:
                factors.append(sp.identity(d, format="csr"))
        out = factors[0]
        for f in factors[1:]:
            out = sp.kron(out, f, format="csr")
        return out.tocsr()

    def operator(self, op: LadderOp) -> sp.csr_matrix:
        low = self._lowering[(op.mode.id, op.channel)]
        return low.conj().T.tocsr() if op.is_create else low

    def matrix(self, expr: OperatorExpr) -> sp.csr_matrix:
        out = expr.constant * sp.identity(self.dim, dtype=complex, format="csr")
        for factors, coef in expr.terms.items():
            term = sp.identity(self.dim, dtype=complex, format="csr")
            for op in factors:
                term = term @ self.operator(op)
            out = out + coef * term
        return out.tocsr()

    def basis_index(self, state: FockState) -> int:
        index = 0
        for (mode_id, ch, species), d in zip(self.sites, self.dims):
            n = state.count(mode_id, ch)
            limit = 1 if species is Species.FERMION else self.n_max - 1
            if n > limit:
                raise TruncationError(
                    f"occupation {n} of {mode_id}/{ch.value} needs n_max > {n}")
            index = index * d + n
        return index

    def state_vector(self, state: FockState) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.basis_index(state)] = 1.0
        return v


def matrix_expectation(expr: OperatorExpr, state: FockState,
                       space: TruncatedFockSpace) -> complex:
    """<state| expr |state> with every operator as an explicit matrix."""
    v = space.state_vector(state)
    return complex(np.vdot(v, space.matrix(expr) @ v))


@dataclass(frozen=True)
class MergedMode:
    """Equal-wavevector modes seen as one collective mode."""

    k: Tuple[float, float, float]
    energy: float
    weight: Union[complex, np.ndarray]

    @classmethod
    def from_modes(cls, modes: Sequence[ModeLabel], occupations: Sequence[float],
                   phases: Sequence[float]) -> "MergedMode":
        """``phases`` may be one phase per mode or a stack of shape (points, modes)."""
        _check_equal_k(modes)
        phases = np.asarray(phases, dtype=float)
        if phases.shape[-1] != len(modes) or len(occupations) != len(modes):
            raise ValueError("one phase and one occupation per mode required")
        w = np.exp(1j * phases) @ np.sqrt(np.asarray(occupations, dtype=float))
        return cls(modes[0].k, modes[0].energy, complex(w) if w.ndim == 0 else w)

    @property
    def intensity(self):
        return np.abs(self.weight) ** 2 if isinstance(self.weight, np.ndarray) \
            else abs(self.weight) ** 2


def _check_equal_k(modes: Sequence[ModeLabel]) -> None:
    if not modes:
        raise ValueError("at least one mode required")
    ref = modes[0]
    for m in modes:
        if m.species is Species.FERMION:
            raise SpeciesMismatchError("merged-mode oracle covers bosons only")
        if m.species is not ref.species:
            raise SpeciesMismatchError("modes of different species")
        if not np.allclose(m.k, ref.k, rtol=0, atol=1e-14) or m.energy != ref.energy:
            raise ValueError("merged-mode oracle needs equal wavevectors")
        if m.index != ref.index:
            raise ValueError("merged-mode oracle needs a common polarization index")


def merged_energy(modes: Sequence[ModeLabel], occupations: Sequence[Tuple[int, int]],
                  phases, vacuum_terms: bool = True):
    """Energy of coherent equal-k boson modes from their collective amplitudes.

    A 2D ``phases`` array of shape (points, modes) gives one energy per row.

    Particles and antiparticles interfere separately; the zero-point field of
    every mode is treated as one extra coherent quantum for the scalar field
    and half a quantum for photons.
    """
    _check_equal_k(modes)
    eps = modes[0].energy
    particles = MergedMode.from_modes(modes, [o[0] for o in occupations], phases)
    energy = eps * particles.intensity
    if modes[0].species is Species.SCALAR:
        anti = MergedMode.from_modes(modes, [o[1] for o in occupations], phases)
        energy += eps * anti.intensity
        zero_point = 1.0
    else:
        zero_point = 0.5
    if vacuum_terms:
        vac = MergedMode.from_modes(modes, [1.0] * len(modes), phases)
        energy += zero_point * eps * vac.intensity
    return energy
