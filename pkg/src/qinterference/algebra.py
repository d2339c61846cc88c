"""Ladder operators, (anti)commutation policies and quadratic normal ordering."""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import SpeciesMismatchError, UnsupportedDegreeError
from .modes import ModeLabel, Species

ATOL = 1e-12


class Kind(str, enum.Enum):
    CREATE = "create"
    ANNIHILATE = "annihilate"


class Channel(str, enum.Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"


@dataclass(frozen=True)
class LadderOp:
    mode: ModeLabel
    kind: Kind
    channel: Channel = Channel.PARTICLE

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "channel", Channel(self.channel))
        if self.mode.species is Species.VECTOR and self.channel is Channel.ANTIPARTICLE:
            raise ValueError("photon modes have no separate antiparticle channel")

    @property
    def species(self) -> Species:
        return self.mode.species

    @property
    def is_create(self) -> bool:
        return self.kind is Kind.CREATE

    def dagger(self) -> "LadderOp":
        kind = Kind.ANNIHILATE if self.is_create else Kind.CREATE
        return LadderOp(self.mode, kind, self.channel)

    def sort_key(self):
        m = self.mode
        return (m.id, self.channel.value, self.kind.value, m.k, m.phase, str(m.index))

    def __repr__(self):
        letter = {
            (Species.FERMION, Channel.PARTICLE): "c",
            (Species.FERMION, Channel.ANTIPARTICLE): "d",
            (Species.SCALAR, Channel.ANTIPARTICLE): "b",
        }.get((self.species, self.channel), "a")
        return f"{letter}{'†' if self.is_create else ''}[{self.mode.id}]"


def create(mode: ModeLabel, channel: Channel = Channel.PARTICLE) -> LadderOp:
    return LadderOp(mode, Kind.CREATE, channel)


def annihilate(mode: ModeLabel, channel: Channel = Channel.PARTICLE) -> LadderOp:
    return LadderOp(mode, Kind.ANNIHILATE, channel)


class Variant(str, enum.Enum):
    CANONICAL = "canonical"
    CROSS_UNIT = "cross-unit"
    CROSS_PHASE = "cross-phase"


@dataclass(frozen=True)
class AlgebraPolicy:
    """Which bracket table governs pairs of *different* modes.

    Same-mode brackets are canonical under every variant. ``sign`` only
    matters for the cross-phase variant.
    """

    variant: Variant = Variant.CANONICAL
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def describe(self) -> str:
        if self.variant is Variant.CROSS_PHASE:
            return f"{self.variant.value}({'+' if self.sign > 0 else '-'})"
        return self.variant.value


CANONICAL = AlgebraPolicy(Variant.CANONICAL)
CROSS_UNIT = AlgebraPolicy(Variant.CROSS_UNIT)


def cross_phase(sign: int = 1) -> AlgebraPolicy:
    return AlgebraPolicy(Variant.CROSS_PHASE, sign)


def _same_mode(m1: ModeLabel, m2: ModeLabel) -> bool:
    return m1 == m2


def _annihilate_create(ann: LadderOp, cre: LadderOp, policy: AlgebraPolicy) -> complex:
    """Bracket value for the ordered pair (annihilate_n, create_m)."""
    if ann.channel is not cre.channel or ann.mode.index != cre.mode.index:
        return 0.0
    if _same_mode(ann.mode, cre.mode):
        return 1.0
    if policy.variant is Variant.CANONICAL:
        return 0.0
    if policy.variant is Variant.CROSS_UNIT:
        return 1.0
    return policy.sign * cmath.exp(1j * (ann.mode.phase - cre.mode.phase))


def bracket(op1: LadderOp, op2: LadderOp, policy: AlgebraPolicy = CANONICAL) -> complex:
    """Commutator (bosons) or anticommutator (fermions) of two ladder operators."""
    if op1.species is not op2.species:
        raise SpeciesMismatchError(
            f"cannot bracket {op1.species.value} with {op2.species.value}"
        )
    if op1.kind is op2.kind:
        return 0.0
    if not op1.is_create:
        return _annihilate_create(op1, op2, policy)
    value = _annihilate_create(op2, op1, policy)
    return value if op1.species.is_fermion else -value


Monomial = Tuple[LadderOp, ...]
Number = Union[int, float, complex]


@dataclass(frozen=True)
class OperatorExpr:
    """Polynomial in ladder operators with complex coefficients.

    ``terms`` maps an ordered operator product to its coefficient; the empty
    product is never a key, scalars live in ``constant``.
    """

    terms: Mapping[Monomial, complex] = field(default_factory=dict)
    constant: complex = 0.0

    @classmethod
    def scalar(cls, value: Number) -> "OperatorExpr":
        return cls({}, complex(value))

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Number, Iterable[LadderOp]]],
                   constant: Number = 0.0) -> "OperatorExpr":
        terms: Dict[Monomial, complex] = {}
        const = complex(constant)
        for coef, factors in items:
            factors = tuple(factors)
            if not factors:
                const += coef
                continue
            terms[factors] = terms.get(factors, 0.0) + complex(coef)
        return cls(_prune(terms), const)

    @classmethod
    def of(cls, *factors: LadderOp, coef: Number = 1.0) -> "OperatorExpr":
        return cls.from_terms([(coef, factors)])

    @property
    def degree(self) -> int:
        return max((len(f) for f in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.constant == 0

    def items(self):
        return self.terms.items()

    def __add__(self, other):
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.scalar(other)
        terms = dict(self.terms)
        for f, c in other.terms.items():
            terms[f] = terms.get(f, 0.0) + c
        return OperatorExpr(_prune(terms), self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other if isinstance(other, OperatorExpr) else -complex(other))

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            items = [(c1 * c2, f1 + f2) for f1, c1 in self._with_constant()
                     for f2, c2 in other._with_constant()]
            return OperatorExpr.from_terms(items)
        other = complex(other)
        return OperatorExpr(
            _prune({f: c * other for f, c in self.terms.items()}),
            self.constant * other,
        )

    def __rmul__(self, other):
        return self * other

    def _with_constant(self):
        yield from self.terms.items()
        if self.constant != 0:
            yield (), self.constant

    def dagger(self) -> "OperatorExpr":
        """Hermitian conjugate: reversed factor order, conjugated coefficients."""
        items = [(c.conjugate(), tuple(op.dagger() for op in reversed(f)))
                 for f, c in self.terms.items()]
        return OperatorExpr.from_terms(items, self.constant.conjugate())

    def is_normal_ordered(self) -> bool:
        for factors in self.terms:
            seen_annihilator = False
            for op in factors:
                if op.is_create and seen_annihilator:
                    return False
                seen_annihilator |= not op.is_create
        return True

    def approx_equal(self, other: "OperatorExpr", atol: float = ATOL) -> bool:
        if abs(self.constant - other.constant) > atol:
            return False
        for f in set(self.terms) | set(other.terms):
            if abs(self.terms.get(f, 0.0) - other.terms.get(f, 0.0)) > atol:
                return False
        return True

    def __repr__(self):
        parts = [f"({c:.6g})*{'·'.join(map(repr, f))}" for f, c in self.terms.items()]
        if self.constant != 0 or not parts:
            parts.append(f"({self.constant:.6g})")
        return " + ".join(parts)


def _prune(terms: Dict[Monomial, complex]) -> Dict[Monomial, complex]:
    return {f: complex(c) for f, c in terms.items() if c != 0}


def normal_order(expr: OperatorExpr, policy: AlgebraPolicy = CANONICAL) -> OperatorExpr:
    """Move creators left of annihilators, collecting bracket constants.

    Quadratic monomials only. Same-kind pairs are also put in a canonical
    order (their bracket is zero in every variant) so that equal operators
    compare equal term by term.
    """
    terms: Dict[Monomial, complex] = {}
    constant = expr.constant

    def add(coef, factors):
        terms[factors] = terms.get(factors, 0.0) + coef

    for factors, coef in expr.terms.items():
        if len(factors) > 2:
            raise UnsupportedDegreeError(
                f"normal ordering supports degree <= 2, got degree {len(factors)}"
            )
        if len(factors) < 2:
            add(coef, factors)
            continue
        x, y = factors
        if x.species is not y.species:
            raise SpeciesMismatchError("mixed-species monomial")
        stat = x.species.statistics_sign
        if not x.is_create and y.is_create:
            constant += coef * bracket(x, y, policy)
            coef, (x, y) = stat * coef, (y, x)
        elif x.kind is y.kind and x.sort_key() > y.sort_key():
            coef, (x, y) = stat * coef, (y, x)
        if stat < 0 and x == y:
            continue  # fermion operator squared
        add(coef, (x, y))
    return OperatorExpr(_prune(terms), constant)
