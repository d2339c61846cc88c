import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qinterference import (
    CANONICAL, CROSS_UNIT, Channel, ModeLabel, OperatorExpr, annihilate, bracket, create,
    cross_phase, normal_order,
)
from qinterference.errors import SpeciesMismatchError, UnsupportedDegreeError

from conftest import fermion_modes, photon_modes, scalar_modes

POLICIES = [CANONICAL, CROSS_UNIT, cross_phase(1), cross_phase(-1)]


def test_canonical_same_mode_is_one():
    (m,) = scalar_modes(1)
    assert bracket(annihilate(m), create(m), CANONICAL) == 1


def test_canonical_cross_mode_is_zero():
    m1 = ModeLabel("a", "scalar-boson", (1, 0, 0))
    m2 = ModeLabel("b", "scalar-boson", (2, 0, 0))
    assert bracket(annihilate(m1), create(m2), CANONICAL) == 0


def test_cross_phase_minus_at_pi():
    n, m = scalar_modes(2, phases=[math.pi, 0.0])
    value = bracket(annihilate(n), create(m), cross_phase(-1))
    assert value == pytest.approx(1.0, abs=1e-12)


def test_same_mode_canonical_under_every_variant():
    (m,) = scalar_modes(1, phases=[1.234])
    for policy in POLICIES:
        assert bracket(annihilate(m), create(m), policy) == 1


def test_cross_unit_needs_same_channel_and_index():
    n, m = scalar_modes(2)
    assert bracket(annihilate(n), create(m, Channel.ANTIPARTICLE), CROSS_UNIT) == 0
    p1 = ModeLabel("p1", "vector-boson", (0, 0, 1), index=1)
    p2 = ModeLabel("p2", "vector-boson", (0, 0, 1), index=2)
    assert bracket(annihilate(p1), create(p2), CROSS_UNIT) == 0


def test_creators_and_annihilators_among_themselves():
    n, m = scalar_modes(2)
    for policy in POLICIES:
        assert bracket(create(n), create(m), policy) == 0
        assert bracket(annihilate(n), annihilate(m), policy) == 0


def test_species_mismatch():
    (s,) = scalar_modes(1)
    (f,) = fermion_modes(1)
    with pytest.raises(SpeciesMismatchError):
        bracket(annihilate(s), create(f))


def test_photon_has_no_antiparticle_channel():
    (p,) = photon_modes(1)
    with pytest.raises(ValueError):
        create(p, Channel.ANTIPARTICLE)


def test_normal_order_single_mode():
    (m,) = scalar_modes(1)
    out = normal_order(OperatorExpr.of(annihilate(m), create(m)))
    expected = OperatorExpr.of(create(m), annihilate(m)) + 1
    assert out.approx_equal(expected)


def test_normal_order_cross_unit_boson():
    n, m = scalar_modes(2)
    b_n, bd_m = annihilate(n, Channel.ANTIPARTICLE), create(m, Channel.ANTIPARTICLE)
    out = normal_order(OperatorExpr.of(b_n, bd_m), CROSS_UNIT)
    assert out.approx_equal(OperatorExpr.of(bd_m, b_n) + 1)


def test_normal_order_cross_unit_fermion():
    n, m = fermion_modes(2)
    d_n, dd_m = annihilate(n, Channel.ANTIPARTICLE), create(m, Channel.ANTIPARTICLE)
    out = normal_order(OperatorExpr.of(d_n, dd_m), CROSS_UNIT)
    assert out.approx_equal(OperatorExpr.of(dd_m, d_n, coef=-1) + 1)


def test_fermion_square_vanishes():
    (f,) = fermion_modes(1)
    out = normal_order(OperatorExpr.of(create(f), create(f)))
    assert out.is_zero


def test_degree_cap():
    (m,) = scalar_modes(1)
    with pytest.raises(UnsupportedDegreeError):
        normal_order(OperatorExpr.of(create(m), create(m), annihilate(m)))


def test_dagger_reverses_and_conjugates():
    n, m = scalar_modes(2)
    e = OperatorExpr.of(create(n), annihilate(m), coef=2 + 3j) + (1 - 1j)
    d = e.dagger()
    assert d.terms[(create(m), annihilate(n))] == 2 - 3j
    assert d.constant == 1 + 1j


# ---- properties over random mode tables -------------------------------------

phases = st.floats(0, 2 * math.pi, allow_nan=False)
species = st.sampled_from(["scalar-boson", "spinor-fermion", "vector-boson"])
policies = st.sampled_from(POLICIES)


@st.composite
def ladder_ops(draw, species_value):
    k = draw(st.sampled_from([(0, 0, 1), (0, 0, 1), (1, 0, 1)]))
    mode = ModeLabel(draw(st.sampled_from(["x", "y", "z"])), species_value, k,
                     phase=draw(phases),
                     index=None if species_value == "scalar-boson" else
                     (1 if species_value == "vector-boson" else 0.5))
    channels = [Channel.PARTICLE]
    if species_value != "vector-boson":
        channels.append(Channel.ANTIPARTICLE)
    ch = draw(st.sampled_from(channels))
    return draw(st.sampled_from([create(mode, ch), annihilate(mode, ch)]))


def _consistent(ops):
    # one phase/k per mode id
    seen = {}
    for op in ops:
        if seen.setdefault(op.mode.id, op.mode) != op.mode:
            return False
    return True


@st.composite
def op_pairs(draw):
    sp = draw(species)
    x, y = draw(ladder_ops(sp)), draw(ladder_ops(sp))
    return x, y


@settings(max_examples=200, deadline=None)
@given(op_pairs(), policies)
def test_bracket_symmetry(pair, policy):
    x, y = pair
    if not _consistent([x, y]):
        return
    sign = 1 if x.species.is_fermion else -1
    assert abs(bracket(x, y, policy) - sign * bracket(y, x, policy)) < 1e-12


@st.composite
def quadratic_exprs(draw):
    sp = draw(species)
    ops = [draw(ladder_ops(sp)) for _ in range(6)]
    items = []
    for i in range(draw(st.integers(1, 4))):
        deg = draw(st.integers(0, 2))
        factors = tuple(draw(st.sampled_from(ops)) for _ in range(deg))
        coef = complex(draw(st.floats(-2, 2)), draw(st.floats(-2, 2)))
        items.append((coef, factors))
    return ops, OperatorExpr.from_terms(items)


@settings(max_examples=200, deadline=None)
@given(quadratic_exprs(), policies)
def test_normal_order_idempotent(data, policy):
    ops, expr = data
    if not _consistent(ops):
        return
    once = normal_order(expr, policy)
    assert once.is_normal_ordered()
    assert normal_order(once, policy).approx_equal(once)


@settings(max_examples=100, deadline=None)
@given(st.lists(phases, min_size=2, max_size=2), st.sampled_from([1, -1]))
def test_cross_phase_with_equal_phases_is_signed_unit(ph, sign):
    n, m = scalar_modes(2, phases=[ph[0], ph[0]])
    a, b = annihilate(n), create(m)
    assert abs(bracket(a, b, cross_phase(sign)) - sign * bracket(a, b, CROSS_UNIT)) < 1e-12
    if sign == 1:
        e = OperatorExpr.of(a, b) + OperatorExpr.of(annihilate(m), create(n), coef=0.5j)
        assert normal_order(e, cross_phase(1)).approx_equal(normal_order(e, CROSS_UNIT))


def test_cross_phase_value():
    n, m = scalar_modes(2, phases=[0.3, 1.1])
    got = bracket(annihilate(n), create(m), cross_phase(-1))
    assert abs(got + cmath.exp(1j * (0.3 - 1.1))) < 1e-12
