import math

import numpy as np
import pytest
from scipy.integrate import cubature

from qinterference import (
    CANONICAL, CROSS_UNIT, BoxDomain, Channel, HamiltonianSpec, ModeLabel, OperatorExpr,
    annihilate, build_field, build_hamiltonian, classical_energy, create, cross_phase,
    cross_term, diagonal_term, normal_order,
)
from qinterference.errors import SpeciesMismatchError
from qinterference.hamiltonian import CROSS_CONVENTION, Quantity, _bilinear, build_observable
from qinterference.modes import Species

from conftest import fermion_modes, photon_modes, scalar_modes

A, B = Channel.PARTICLE, Channel.ANTIPARTICLE


def number(m, ch=A):
    return OperatorExpr.of(create(m, ch), annihilate(m, ch))


def test_diagonal_scalar():
    (m,) = scalar_modes(1, k=(0.6, 0, 0.8), mass=1.0)
    eps = m.energy
    expected = eps * (number(m) + number(m, B)) + eps
    assert diagonal_term(m).approx_equal(expected)


def test_diagonal_photon():
    (p,) = photon_modes(1, k=(0, 0, 2.0))
    assert diagonal_term(p).approx_equal(2.0 * number(p) + 1.0)


def test_diagonal_fermion_without_vacuum():
    (f,) = fermion_modes(1, k=(0, 3, 0))
    assert diagonal_term(f, vacuum_terms=False).approx_equal(3.0 * (number(f) + number(f, B)))
    assert diagonal_term(f).constant == -3.0


def test_cross_scalar_equal_k():
    n, m = scalar_modes(2, k=(0, 0, 1.5))
    got = cross_term(n, m, policy=CROSS_UNIT)
    eps = 1.5
    expected = eps * (OperatorExpr.of(create(n), annihilate(m))
                      + OperatorExpr.of(create(m, B), annihilate(n, B))) + eps
    assert got.approx_equal(expected)


def test_cross_fermion_equal_k_sign():
    n, m = fermion_modes(2, k=(0, 0, 1.5))
    got = cross_term(n, m, policy=CROSS_UNIT)
    eps = 1.5
    expected = eps * (OperatorExpr.of(create(n), annihilate(m))
                      + OperatorExpr.of(create(m, B), annihilate(n, B))) - eps
    assert got.approx_equal(expected)
    # before ordering: + c†_n c_m  - d_n d†_m
    raw = _bilinear(n, m, eps, eps, 1.0 + 0j, 1.0)
    assert raw.terms[(annihilate(n, B), create(m, B))] == -eps
    assert raw.terms[(create(n), annihilate(m))] == eps


def test_cross_zero_at_sinc_node():
    n = ModeLabel("n", "scalar-boson", (0, 0, 1))
    m = ModeLabel("m", "scalar-boson", (2 * math.pi, 0, 1))
    assert cross_term(n, m).is_zero


def test_cross_index_mismatch_is_zero():
    p = ModeLabel("p", "vector-boson", (0, 0, 1), index=1)
    q = ModeLabel("q", "vector-boson", (0, 0, 1), index=2)
    assert cross_term(p, q).is_zero


def test_cross_species_mismatch():
    with pytest.raises(SpeciesMismatchError):
        cross_term(scalar_modes(1)[0], fermion_modes(1)[0])


def test_photon_cross_carries_half():
    n, m = photon_modes(2, k=(0, 0, 2.0))
    assert CROSS_CONVENTION[Species.VECTOR] == 0.5
    got = cross_term(n, m)
    expected = (OperatorExpr.of(create(n), annihilate(m))
                + OperatorExpr.of(create(m), annihilate(n))) + 1.0
    assert got.approx_equal(expected)


def test_single_mode_hamiltonian_is_conventional():
    (m,) = scalar_modes(1)
    H = build_hamiltonian(HamiltonianSpec(build_field("scalar-boson", [m])))
    assert H.approx_equal(diagonal_term(m))


def test_far_separated_modes_diagonal_only():
    m1 = ModeLabel("a", "scalar-boson", (-math.pi, 0, 5))
    m2 = ModeLabel("b", "scalar-boson", (math.pi, 0, 5))
    H = build_hamiltonian(HamiltonianSpec(build_field("scalar-boson", [m1, m2])))
    assert H.approx_equal(diagonal_term(m1) + diagonal_term(m2))


def test_equal_k_has_cross_terms():
    m1, m2 = scalar_modes(2)
    H = build_hamiltonian(HamiltonianSpec(build_field("scalar-boson", [m1, m2])))
    expected = diagonal_term(m1) + diagonal_term(m2) + cross_term(m1, m2) + cross_term(m2, m1)
    assert H.approx_equal(expected)
    assert (create(m1), annihilate(m2)) in H.terms


@pytest.mark.parametrize("species", list(Species))
@pytest.mark.parametrize("policy", [CANONICAL, CROSS_UNIT, cross_phase(1), cross_phase(-1)])
def test_hamiltonian_is_hermitian(rng, species, policy):
    for _ in range(5):
        modes = [ModeLabel(f"m{i}", species, tuple(rng.uniform(-3, 3, 3)),
                           0.0 if species is Species.VECTOR else rng.uniform(0, 1),
                           rng.uniform(0, 6.3), None if species is Species.SCALAR else
                           (1 if species is Species.VECTOR else 0.5)) for i in range(3)]
        spec = HamiltonianSpec(build_field(species, modes), BoxDomain((0.7, 1.2, 0.9)), policy)
        for quantity in Quantity:
            H = build_observable(spec, quantity, 2)
            assert normal_order(H.dagger(), policy).approx_equal(H)


def test_vacuum_constant_cancels_for_cross_phase_minus():
    for dphi in (0.0, math.pi):
        modes = scalar_modes(2, phases=[0.0, dphi])
        spec = HamiltonianSpec(build_field("scalar-boson", modes), policy=cross_phase(-1))
        assert abs(build_hamiltonian(spec).constant) < 1e-12
    modes = scalar_modes(2)
    spec = HamiltonianSpec(build_field("scalar-boson", modes), policy=CROSS_UNIT)
    assert build_hamiltonian(spec).constant == pytest.approx(4.0)


def test_vacuum_exclude_drops_all_constants():
    modes = fermion_modes(2)
    spec = HamiltonianSpec(build_field("spinor-fermion", modes), vacuum_terms=False)
    assert build_hamiltonian(spec).constant == 0


# ---- classical energy --------------------------------------------------------

def classical_quadrature(amps, modes, lengths=(1.0, 1.0, 1.0)):
    """Direct 3D quadrature of |dpsi/dt|^2 + |grad psi|^2 + m^2 |psi|^2."""
    ks = np.array([m.k for m in modes])
    eps = np.array([m.energy for m in modes])
    ph = np.array([m.phase for m in modes])
    c = np.asarray(amps, dtype=complex) * (2 * eps) ** -0.5 * np.exp(1j * ph)
    mass2 = modes[0].mass ** 2

    def f(x):
        waves = np.exp(1j * x @ ks.T) * c                    # (..., modes)
        psi = waves.sum(-1)
        dt = (-1j * eps * waves).sum(-1)
        grad = 1j * waves @ ks                                # (..., 3)
        val = abs(dt) ** 2 + (abs(grad) ** 2).sum(-1) + mass2 * abs(psi) ** 2
        return val[..., None]

    half = 0.5 * np.asarray(lengths)
    return float(cubature(f, -half, half, rtol=1e-12, atol=1e-12).estimate[0])


def test_classical_single_mode():
    (m,) = scalar_modes(1, k=(0.3, 0.4, 1.2), mass=0.5)
    assert classical_energy([math.sqrt(7)], [m]) == pytest.approx(7 * m.energy, rel=1e-13)


def test_classical_destructive_pair():
    modes = scalar_modes(2, phases=[0.0, math.pi])
    assert abs(classical_energy([1.3, 1.3], modes)) < 1e-12


def test_classical_constructive_pair_matches_quadrature():
    modes = scalar_modes(2, k=(0.5, 0, 1.0), mass=0.3)
    a = 1.7
    expected = 4 * modes[0].energy * a * a
    assert classical_quadrature([a, a], modes) == pytest.approx(expected, rel=1e-9)
    assert classical_energy([a, a], modes) == pytest.approx(expected, rel=1e-13)


def test_classical_unequal_k_matches_quadrature(rng):
    for _ in range(3):
        modes = [ModeLabel(f"m{i}", "scalar-boson", tuple(rng.uniform(-4, 4, 3)), 0.7,
                           rng.uniform(0, 6)) for i in range(3)]
        amps = rng.normal(size=3) + 1j * rng.normal(size=3)
        box = BoxDomain((1.0, 0.8, 1.1))
        got = classical_energy(amps, modes, box)
        assert got == pytest.approx(classical_quadrature(amps, modes, box.lengths), rel=1e-8)
