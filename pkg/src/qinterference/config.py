"""Scenario configuration: JSON schema, defaults and validation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import jsonschema

from .algebra import AlgebraPolicy, Variant
from .errors import ConfigError
from .modes import ModeLabel, Species
from .observables import Contraction

KINDS = ("young-conventional", "young-subwavelength", "dicke", "incoherent",
         "aharonov-bohm", "custom")
PATTERNS = ("equal", "pi-alternating", "explicit", "random")

_vec3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_occ = {"type": "array", "items": {"type": "integer", "minimum": 0},
        "minItems": 2, "maxItems": 2}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind"],
    "properties": {
        "kind": {"enum": list(KINDS)},
        "species": {"enum": [s.value for s in Species]},
        "n_modes": {"type": "integer", "minimum": 1},
        "occupations": {
            "oneOf": [_occ, {"type": "array", "items": _occ, "minItems": 1}],
        },
        "phase_pattern": {"enum": list(PATTERNS)},
        "phases": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "flux": {"type": "number"},
        "samples": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "slit_separation": {"type": "number", "exclusiveMinimum": 0},
        "wavelength": {"type": "number", "exclusiveMinimum": 0},
        "delta_k": {"type": "number", "minimum": 0},
        "wavevector": _vec3,
        "mass": {"type": "number", "minimum": 0},
        "index": {"type": ["number", "null"]},
        "box": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                "minItems": 3, "maxItems": 3},
        "algebra": {
            "oneOf": [
                {"enum": [v.value for v in Variant]},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["variant"],
                    "properties": {
                        "variant": {"enum": [v.value for v in Variant]},
                        "sign": {"enum": [1, -1]},
                    },
                },
            ],
        },
        "contraction": {"enum": [c.value for c in Contraction]},
        "vacuum": {"type": "boolean"},
        "modes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "k"],
                "properties": {
                    "id": {"type": "string"},
                    "k": _vec3,
                    "mass": {"type": "number", "minimum": 0},
                    "phase": {"type": "number"},
                    "index": {"type": ["number", "null"]},
                    "occupation": _occ,
                },
            },
        },
    },
}

_DEFAULT_SPECIES = {
    "young-conventional": Species.SCALAR,
    "young-subwavelength": Species.SCALAR,
    "dicke": Species.VECTOR,
    "incoherent": Species.SCALAR,
    "aharonov-bohm": Species.FERMION,
}


def _default_occupation(species: Species) -> Tuple[int, int]:
    return (1, 1) if species is Species.SCALAR else (1, 0)


@dataclass
class ScenarioConfig:
    kind: str
    species: Species = Species.SCALAR
    n_modes: int = 2
    occupations: List[Tuple[int, int]] = field(default_factory=list)
    phase_pattern: str = "equal"
    phases: Optional[List[float]] = None
    samples: int = 1
    seed: int = 0
    slit_separation: Optional[float] = None
    wavelength: float = 1.0
    delta_k: Optional[float] = None
    wavevector: Optional[Tuple[float, float, float]] = None
    mass: float = 0.0
    index: Optional[float] = None
    box: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    algebra: AlgebraPolicy = AlgebraPolicy(Variant.CROSS_UNIT)
    contraction: Contraction = Contraction.COHERENT
    vacuum: bool = True
    modes: Optional[List[ModeLabel]] = None

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        """Validate a JSON-like mapping and fill in per-kind defaults."""
        validator = jsonschema.Draft202012Validator(SCHEMA)
        errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            path = ".".join(str(p) for p in err.absolute_path) or "<root>"
            raise ConfigError(err.message, path)
        kind = data["kind"]
        if kind == "custom" and "species" not in data:
            raise ConfigError("custom scenarios must name a species", "species")
        species = Species(data.get("species", _DEFAULT_SPECIES.get(kind, Species.SCALAR)))

        algebra = data.get("algebra", Variant.CROSS_UNIT.value)
        if isinstance(algebra, str):
            algebra = AlgebraPolicy(Variant(algebra))
        else:
            algebra = AlgebraPolicy(Variant(algebra["variant"]), algebra.get("sign", 1))

        modes = None
        if kind == "custom":
            if "modes" not in data:
                raise ConfigError("custom scenarios need an explicit mode list", "modes")
            modes, occs = [], []
            for i, m in enumerate(data["modes"]):
                try:
                    modes.append(ModeLabel(m["id"], species, tuple(m["k"]), m.get("mass", 0.0),
                                           m.get("phase", 0.0), m.get("index")))
                except ValueError as exc:
                    raise ConfigError(str(exc), f"modes.{i}") from exc
                occs.append(tuple(m.get("occupation", _default_occupation(species))))
            n_modes = len(modes)
        else:
            n_modes = data.get("n_modes", 2 if kind.startswith("young") or
                               kind == "aharonov-bohm" else None)
            if n_modes is None:
                raise ConfigError(f"{kind} scenarios need n_modes", "n_modes")
            occs = data.get("occupations", list(_default_occupation(species)))
            if occs and isinstance(occs[0], int):
                occs = [tuple(occs)] * n_modes
            occs = [tuple(o) for o in occs]
            if len(occs) != n_modes:
                raise ConfigError(f"expected {n_modes} occupation pairs, got {len(occs)}",
                                  "occupations")

        cfg = cls(
            kind=kind,
            species=species,
            n_modes=n_modes,
            occupations=occs,
            phase_pattern=data.get("phase_pattern", "explicit" if "phases" in data else "equal"),
            phases=data.get("phases"),
            samples=data.get("samples", 1),
            seed=data.get("seed", 0),
            slit_separation=data.get("slit_separation"),
            wavelength=data.get("wavelength", 1.0),
            delta_k=data.get("delta_k"),
            wavevector=tuple(data["wavevector"]) if "wavevector" in data else None,
            mass=data.get("mass", 0.0),
            index=data.get("index"),
            box=tuple(data.get("box", (1.0, 1.0, 1.0))),
            algebra=algebra,
            contraction=Contraction(data.get("contraction", Contraction.COHERENT.value)),
            vacuum=data.get("vacuum", True),
            modes=modes,
        )
        if kind == "aharonov-bohm" and "flux" in data:
            if "phases" in data:
                raise ConfigError("give either flux or phases, not both", "flux")
            cfg.phase_pattern = "explicit"
            cfg.phases = [0.0, float(data["flux"])]
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.kind.startswith("young"):
            if self.n_modes != 2:
                raise ConfigError("Young scenarios have exactly 2 modes", "n_modes")
            if self.slit_separation is None:
                raise ConfigError("Young scenarios need slit_separation", "slit_separation")
            ratio = self.slit_separation / self.wavelength
            if self.kind == "young-conventional" and ratio <= 1:
                raise ConfigError("conventional regime needs slit_separation > wavelength",
                                  "slit_separation")
            if self.kind == "young-subwavelength" and ratio >= 1:
                raise ConfigError("subwavelength regime needs slit_separation < wavelength",
                                  "slit_separation")
        if self.kind == "dicke" and self.species is not Species.VECTOR:
            raise ConfigError("Dicke scenarios use the photon field", "species")
        if self.kind == "aharonov-bohm":
            if self.species is not Species.FERMION:
                raise ConfigError("Aharonov-Bohm scenarios need spinor fermions", "species")
            if self.n_modes != 2:
                raise ConfigError("Aharonov-Bohm scenarios have exactly 2 modes", "n_modes")
        if self.phase_pattern == "explicit":
            if self.phases is None or len(self.phases) != self.n_modes:
                raise ConfigError(f"explicit pattern needs {self.n_modes} phases", "phases")
        if self.phase_pattern == "pi-alternating" and self.n_modes % 2:
            raise ConfigError("pi-alternating pairs need an even number of modes",
                              "phase_pattern")
        for i, (n, nbar) in enumerate(self.occupations):
            if self.species is Species.VECTOR and nbar:
                raise ConfigError("photons have no antiparticle occupation", f"occupations.{i}")
            if self.species is Species.FERMION and (n > 1 or nbar > 1):
                raise ConfigError("fermion occupations are 0 or 1", f"occupations.{i}")
        if self.kind != "custom" and self.species is Species.VECTOR and self.mass:
            raise ConfigError("photons are massless", "mass")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["species"] = self.species.value
        d["algebra"] = {"variant": self.algebra.variant.value, "sign": self.algebra.sign}
        d["contraction"] = self.contraction.value
        d["occupations"] = [list(o) for o in self.occupations]
        if self.modes is not None:
            d["modes"] = [{"id": m.id, "k": list(m.k), "mass": m.mass, "phase": m.phase,
                           "index": m.index} for m in self.modes]
        return d

    @property
    def default_k(self) -> Tuple[float, float, float]:
        if self.wavevector is not None:
            return self.wavevector
        return (0.0, 0.0, 2.0 * math.pi / self.wavelength)
