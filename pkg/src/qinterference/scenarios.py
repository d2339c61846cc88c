"""Ready-made experiment configurations: Young double slit, Dicke ensemble,
incoherent baseline, Aharonov-Bohm fermion variant, conservation audit."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import CROSS_UNIT, AlgebraPolicy
from .config import ScenarioConfig
from .errors import ConfigError
from .fields import BoxDomain, build_field, mode_overlap
from .hamiltonian import HamiltonianSpec, ordered_pairs
from .modes import ModeLabel, Species
from .observables import (
    Contraction, FockState, ObservableReport, PhaseResponse, report,
)

OBSERVABLES = ("E", "Px", "Py", "Pz", "Ntot", "Q")


def pattern_phases(pattern: str, n_modes: int,
                   explicit: Optional[Sequence[float]] = None) -> np.ndarray:
    if pattern == "equal":
        return np.zeros(n_modes)
    if pattern == "pi-alternating":
        if n_modes % 2:
            raise ConfigError("pi-alternating pairs need an even number of modes",
                              "phase_pattern")
        return np.pi * (np.arange(n_modes) % 2)
    if pattern == "explicit":
        if explicit is None or len(explicit) != n_modes:
            raise ConfigError(f"explicit pattern needs {n_modes} phases", "phases")
        return np.asarray(explicit, dtype=float)
    raise ConfigError(f"pattern {pattern!r} has no fixed phases", "phase_pattern")


def young_wavevectors(config: ScenarioConfig) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Two beams split symmetrically along x around the common axis z.

    In the conventional regime the split defaults to the sinc node
    2 pi round(slit/wavelength) / L_x, so the overlap vanishes exactly.
    """
    kz = config.default_k[2]
    dk = config.delta_k
    if dk is None:
        if config.kind == "young-conventional":
            turns = max(1, round(config.slit_separation / config.wavelength))
            dk = 2.0 * math.pi * turns / config.box[0]
        else:
            dk = 0.0
    return (-0.5 * dk, 0.0, kz), (0.5 * dk, 0.0, kz)


def scenario_modes(config: ScenarioConfig,
                   phases: Optional[Sequence[float]] = None) -> List[ModeLabel]:
    if config.modes is not None:
        modes = list(config.modes)
    else:
        if config.kind.startswith("young"):
            ks = young_wavevectors(config)
        else:
            ks = [config.default_k] * config.n_modes
        mass = 0.0 if config.species is Species.VECTOR else config.mass
        modes = [ModeLabel(f"m{i + 1}", config.species, k, mass, 0.0, config.index)
                 for i, k in enumerate(ks)]
        if phases is None and config.phase_pattern != "random":
            phases = pattern_phases(config.phase_pattern, config.n_modes, config.phases)
    if phases is not None:
        modes = [m.with_phase(p) for m, p in zip(modes, phases)]
    return modes


def scenario_spec(config: ScenarioConfig, phases: Optional[Sequence[float]] = None,
                  vacuum: Optional[bool] = None) -> Tuple[HamiltonianSpec, FockState]:
    modes = scenario_modes(config, phases)
    spec = HamiltonianSpec(
        build_field(config.species, modes), BoxDomain(config.box), config.algebra,
        config.vacuum if vacuum is None else vacuum)
    state = FockState({m.id: occ for m, occ in zip(modes, config.occupations)})
    return spec, state


def _tag(rep: ObservableReport, config: ScenarioConfig, **extra) -> ObservableReport:
    rep.metadata.update({"scenario": config.kind, "phase_pattern": config.phase_pattern,
                         "seed": config.seed}, **extra)
    return rep


def run_young(config: ScenarioConfig) -> Tuple[ObservableReport, ObservableReport]:
    """(reference, interfering) reports for a two-slit configuration.

    The reference uses orthodox contraction, i.e. no inter-mode interference;
    the second report uses the configured contraction rule.
    """
    if not config.kind.startswith("young"):
        raise ConfigError("not a Young configuration", "kind")
    config.validate()
    spec, state = scenario_spec(config)
    dk = spec.modes[1].k[0] - spec.modes[0].k[0]
    extra = {"delta_k": dk, "overlap": abs(mode_overlap(*spec.modes[:2], spec.box))}
    reference = _tag(report(spec, state, Contraction.ORTHODOX), config, **extra)
    interfering = _tag(report(spec, state, config.contraction), config, **extra)
    return reference, interfering


def dicke_config(n_modes: int, pattern="equal", photons_per_mode: int = 1,
                 wavevector=(0.0, 0.0, 1.0), vacuum: bool = True,
                 algebra: AlgebraPolicy = CROSS_UNIT,
                 contraction: Contraction = Contraction.COHERENT) -> ScenarioConfig:
    explicit = None
    if not isinstance(pattern, str):
        pattern, explicit = "explicit", list(pattern)
    cfg = ScenarioConfig(kind="dicke", species=Species.VECTOR, n_modes=n_modes,
                         occupations=[(photons_per_mode, 0)] * n_modes,
                         phase_pattern=pattern, phases=explicit,
                         wavevector=tuple(wavevector), vacuum=vacuum, algebra=algebra,
                         contraction=Contraction(contraction), index=1)
    cfg.validate()
    return cfg


def run_dicke(n_modes: int, pattern="equal", **kwargs) -> ObservableReport:
    """Photon emission of ``n_modes`` equal-k emitters.

    ``pattern`` is "equal", "pi-alternating" or an explicit phase list.
    """
    if n_modes < 1:
        raise ConfigError("need at least one emitter", "n_modes")
    config = dicke_config(n_modes, pattern, **kwargs)
    spec, state = scenario_spec(config)
    single_spec, single_state = scenario_spec(replace(
        config, n_modes=1, occupations=config.occupations[:1], phase_pattern="equal"))
    single = report(single_spec, single_state, config.contraction).energy
    rep = report(spec, state, config.contraction)
    return _tag(rep, config, single_mode_energy=single, energy_ratio=rep.energy / single)


@dataclass
class IncoherentResult:
    mean: ObservableReport
    stderr: Dict[str, float]
    samples: int
    seed: int


def random_phases(seed: int, samples: int, n_modes: int) -> np.ndarray:
    """Seeded i.i.d. uniform phases, one row per sample."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(0.0, 2.0 * math.pi, size=(samples, n_modes))


def run_incoherent(n_modes: Optional[int] = None, samples: int = 100_000, seed: int = 0,
                   config: Optional[ScenarioConfig] = None, **kwargs) -> IncoherentResult:
    """Monte Carlo average over independent uniform mode phases."""
    if config is None:
        occ = tuple(kwargs.pop("occupations", (1, 1)))
        config = ScenarioConfig(kind="incoherent", n_modes=n_modes,
                                occupations=[occ] * n_modes, phase_pattern="random",
                                samples=samples, seed=seed, wavevector=(0.0, 0.0, 1.0),
                                **kwargs)
        config.validate()
    if config.samples < 1:
        raise ConfigError("samples must be >= 1", "samples")
    spec, state = scenario_spec(config, phases=np.zeros(config.n_modes))
    table = PhaseResponse(spec, state, config.contraction).evaluate(
        random_phases(config.seed, config.samples, config.n_modes))
    s = config.samples
    means = {k: float(np.mean(v)) for k, v in table.items()}
    stderr = {k: (float(np.std(v, ddof=1) / math.sqrt(s)) if s > 1 else 0.0)
              for k, v in table.items()}
    mean = ObservableReport(
        energy=means["E"], momentum=(means["Px"], means["Py"], means["Pz"]),
        particle_number=means["Ntot"], charge=means["Q"], vacuum_terms=spec.vacuum_terms,
        algebra=spec.policy.describe(), contraction=config.contraction.value,
        metadata={"species": spec.species.value, "n_modes": len(spec.modes),
                  "cross_energy": means["cross_E"], "samples": s})
    _tag(mean, config)
    return IncoherentResult(mean, stderr, s, config.seed)


def run_aharonov_bohm(flux: float, occupations=(1, 0), vacuum: bool = False,
                      wavevector=(0.0, 0.0, 1.0), algebra: AlgebraPolicy = CROSS_UNIT,
                      contraction: Contraction = Contraction.COHERENT) -> ObservableReport:
    """Two-slit electron experiment with a solenoid setting the phase difference."""
    config = ScenarioConfig(kind="aharonov-bohm", species=Species.FERMION, n_modes=2,
                            occupations=[tuple(occupations)] * 2, phase_pattern="explicit",
                            phases=[0.0, float(flux)], wavevector=tuple(wavevector),
                            vacuum=vacuum, algebra=algebra,
                            contraction=Contraction(contraction))
    config.validate()
    spec, state = scenario_spec(config)
    return _tag(report(spec, state, config.contraction), config, flux=float(flux))


@dataclass
class AuditEntry:
    shifts: Tuple[float, ...]
    drift: Dict[str, float]
    conservation_expected: bool
    passed: Optional[bool]


@dataclass
class ConservationAudit:
    entries: List[AuditEntry] = field(default_factory=list)
    tolerance: float = 1e-12
    max_overlap: float = 0.0

    @property
    def passed(self) -> bool:
        return all(e.passed is not False for e in self.entries)

    def max_drift(self, name: str = "E") -> float:
        return max((abs(e.drift[name]) for e in self.entries), default=0.0)


def _values(rep: ObservableReport) -> Dict[str, float]:
    return rep.values()


def audit_conservation(config: ScenarioConfig, phase_deltas: Sequence[Sequence[float]],
                       tolerance: float = 1e-12,
                       overlap_threshold: float = 1e-15) -> ConservationAudit:
    """Shift mode phases and record how every observable moves.

    Conservation is asserted (``passed``) only where it is expected: orthodox
    contraction, or all pairwise overlaps below ``overlap_threshold``.
    Otherwise the drift is recorded and ``passed`` is None.
    """
    spec, state = scenario_spec(config)
    base_phases = [m.phase for m in spec.modes]
    max_overlap = max((abs(mode_overlap(n, m, spec.box))
                       for n, m in ordered_pairs(spec.modes)), default=0.0)
    expected = (config.contraction is Contraction.ORTHODOX
                or max_overlap < overlap_threshold)
    base = _values(report(spec, state, config.contraction))
    audit = ConservationAudit(tolerance=tolerance, max_overlap=max_overlap)
    for shifts in phase_deltas:
        shifts = tuple(float(s) for s in shifts)
        if len(shifts) != len(base_phases):
            raise ValueError("one phase shift per mode required")
        moved = spec.with_phases([p + s for p, s in zip(base_phases, shifts)])
        now = _values(report(moved, state, config.contraction))
        drift = {k: now[k] - base[k] for k in base}
        ok = max(abs(d) for d in drift.values()) <= tolerance if expected else None
        audit.entries.append(AuditEntry(shifts, drift, expected, ok))
    return audit


def run_scenario(config: ScenarioConfig) -> Tuple[ObservableReport, Dict[str, object]]:
    """Dispatch on ``config.kind``; returns the headline report and extras."""
    if config.phase_pattern == "random":
        result = run_incoherent(config=config)
        return result.mean, {"stderr": result.stderr}
    if config.kind.startswith("young"):
        reference, rep = run_young(config)
        return rep, {"reference": reference.as_dict()}
    spec, state = scenario_spec(config)
    rep = _tag(report(spec, state, config.contraction), config)
    extras: Dict[str, object] = {}
    if config.kind == "dicke":
        single_spec, single_state = scenario_spec(replace(
            config, n_modes=1, occupations=config.occupations[:1], phase_pattern="equal",
            phases=None))
        single = report(single_spec, single_state, config.contraction).energy
        extras = {"single_mode_energy": single, "energy_ratio": rep.energy / single}
    return rep, extras
