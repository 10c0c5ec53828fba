"""Finitely presented graded modules: kernels, Hom, tensor, minimality."""

import pytest

from semidual.polyring import PolyRing, PrimeField
from semidual.groebner import GradedRing
from semidual.fpmod import (
    FPModule,
    HomModule,
    ModuleHom,
    RingMatrix,
    annihilator,
    cokernel,
    free_module,
    homology_at,
    homology_is_zero,
    identity_hom,
    is_injective,
    is_isomorphic,
    is_nzd_on,
    is_surjective,
    kernel,
    kernel_of_scalar,
    power_with_twists,
    quotient_by_element,
    residue_field_module,
    summand_analysis,
    tensor_product,
)

F = PrimeField(101)


@pytest.fixture(scope="module")
def plane():
    S = PolyRing(F, ("x", "y"))
    return S, GradedRing(S, [], name="R")


def test_koszul_kernel(plane):
    S, R = plane
    x, y = S.variable(0), S.variable(1)
    phi = ModuleHom.from_entries(
        free_module(R, (1, 1)), free_module(R, (0,)), [[x, y]])
    K, incl = kernel(phi)
    assert K.gen_degrees == (2,) and K.relations.ncols == 0
    col = [str(f) for f in incl.matrix.column(0)]
    assert col in (["y", "100*x"], ["100*y", "x"])
    assert is_injective(incl)
    assert not is_surjective(phi.compose(incl))  # composite is zero


def test_residue_field(plane):
    S, R = plane
    k = residue_field_module(R)
    assert sorted(str(g) for g in annihilator(k).gens) == ["x", "y"]
    assert k.graded_piece_dim(0) == 1
    assert k.graded_piece_dim(1) == 0


def test_minimal_prunes_unit_entries(plane):
    S, R = plane
    x = S.variable(0)
    rel = RingMatrix.from_columns(R, [(x, S.constant(100))], (0, 1), [1])
    M = FPModule(R, (0, 1), rel)
    Mm, proj, inj = M.minimal()
    assert Mm.gen_degrees == (0,) and Mm.relations.ncols == 0
    assert proj.well_defined() and inj.well_defined()
    assert proj.compose(inj).equals(identity_hom(Mm))


def test_hom_and_tensor_of_residue_field(plane):
    S, R = plane
    k = residue_field_module(R)
    H = HomModule(k, k)
    assert H.module.minimal()[0].gen_degrees == (0,)
    coords = H.coordinates_of(identity_hom(k))
    assert len(coords) == H.module.ngens
    assert H.generator_hom(0).well_defined()
    T = tensor_product(k, k)
    assert T.minimal()[0].gen_degrees == (0,)
    assert T.graded_piece_dim(0) == 1 and T.graded_piece_dim(1) == 0


def test_isomorphism_detection(plane):
    S, R = plane
    k = residue_field_module(R)
    ok, wit = is_isomorphic(k, k)
    assert ok and wit.well_defined()
    assert not is_isomorphic(free_module(R, (0,)), k)[0]
    assert is_isomorphic(free_module(R, (0, 1)), free_module(R, (1, 0)))[0]


def test_koszul_complex_exactness(plane):
    S, R = plane
    x, y = S.variable(0), S.variable(1)
    F1 = free_module(R, (1, 1))
    d1 = ModuleHom.from_entries(F1, free_module(R, (0,)), [[x, y]])
    d2 = ModuleHom.from_entries(free_module(R, (2,)), F1, [[y], [-x]])
    assert homology_is_zero(d2, d1)
    assert homology_at(d2, d1).is_zero_module()
    okk, _ = is_isomorphic(cokernel(d1), residue_field_module(R))
    assert okk


@pytest.fixture(scope="module")
def omega():
    S = PolyRing(F, ("x", "y", "z"), weights=(3, 4, 5))
    x, y, z = (S.variable(i) for i in range(3))
    I = [y * y - x * z, x**3 - y * z, x * x * y - z * z]
    R = GradedRing(S, I, name="R")
    wrel = RingMatrix.from_columns(
        R, [(z, x * x), (y, z), (-x, -y)], (1, 0), [6, 5, 4])
    return S, R, FPModule(R, (1, 0), wrel)


def test_omega_graded_pieces(omega):
    S, R, W = omega
    # frozen from an independent Hilbert series expansion
    assert [W.graded_piece_dim(d) for d in range(9)] == \
        [1, 1, 0, 1, 1, 1, 1, 1, 1]
    assert W.minimal()[0].gen_degrees in ((1, 0), (0, 1))


def test_omega_is_faithful(omega):
    S, R, W = omega
    annW = annihilator(W)
    assert all(R.ideal.contains(g) for g in annW.gens)


def test_omega_endomorphisms_are_scalars(omega):
    S, R, W = omega
    E = HomModule(W, W)
    Em = E.module.minimal()[0]
    assert Em.gen_degrees == (0,)
    okE, _ = is_isomorphic(E.module, free_module(R, (0,)))
    assert okE


def test_omega_scalar_action(omega):
    S, R, W = omega
    x, y = S.variable(0), S.variable(1)
    assert is_nzd_on(W, x)
    K0, _ = kernel_of_scalar(W, x)
    assert K0.is_zero_module()
    W1 = quotient_by_element(W, x)
    assert not W1.is_zero_module()
    assert not is_nzd_on(W1, y)     # maximal ideal is nilpotent there


def test_power_with_twists(omega):
    S, R, W = omega
    W2 = power_with_twists(W, [0, -3])
    assert W2.gen_degrees == (1, 0, 4, 3)
    assert W2.graded_piece_dim(0) == 1


def test_summand_analysis_idempotent(plane):
    S, R = plane
    # e = diag(1, 0) on R^2 splits off one free summand
    Ffree = free_module(R, (0, 0))
    e = ModuleHom.from_entries(
        Ffree, Ffree, [[S.one(), S.zero()], [S.zero(), S.zero()]])
    rank, corank, wit = summand_analysis(e)
    assert (rank, corank) == (1, 1)
