"""Shared fixtures: the four reference rings and their standard modules.

Session scope so the cached resolutions on the module objects carry
across tests; everything here is deterministic.
"""

from types import SimpleNamespace

import pytest

from semidual.polyring import PrimeField, PolyRing
from semidual.groebner import GradedRing
from semidual.fpmod import (
    FPModule,
    RingMatrix,
    free_module,
    quotient_by_element,
    residue_field_module,
)

F101 = PrimeField(101)


def make_poly_x():
    S = PolyRing(F101, ("x",))
    R = GradedRing(S, [], name="R")
    return SimpleNamespace(
        name="poly-x", ring=R, amb=S, C=free_module(R, (0,)),
        k=residue_field_module(R), nzd=S.variable(0))


def make_poly_xy():
    S = PolyRing(F101, ("x", "y"))
    R = GradedRing(S, [], name="R")
    return SimpleNamespace(
        name="poly-xy", ring=R, amb=S, C=free_module(R, (0,)),
        k=residue_field_module(R), nzd=S.variable(0))


def make_hypersurface():
    S = PolyRing(F101, ("x", "y"))
    x = S.variable(0)
    R = GradedRing(S, [x * x], name="R")
    # x is nilpotent here, so the reduction element is y.
    return SimpleNamespace(
        name="hypersurface-x2", ring=R, amb=S, C=free_module(R, (0,)),
        k=residue_field_module(R), nzd=S.variable(1))


def make_semigroup():
    S = PolyRing(F101, ("x", "y", "z"), weights=(3, 4, 5))
    x, y, z = (S.variable(i) for i in range(3))
    I = [y * y - x * z, x**3 - y * z, x * x * y - z * z]
    R = GradedRing(S, I, name="R")
    wrel = RingMatrix.from_columns(
        R, [(z, x * x), (y, z), (-x, -y)], (1, 0), [6, 5, 4])
    omega = FPModule(R, (1, 0), wrel)
    return SimpleNamespace(
        name="semigroup-345", ring=R, amb=S, C=omega,
        k=residue_field_module(R), nzd=x)


@pytest.fixture(scope="session")
def poly_x():
    return make_poly_x()


@pytest.fixture(scope="session")
def poly_xy():
    return make_poly_xy()


@pytest.fixture(scope="session")
def hypersurface():
    return make_hypersurface()


@pytest.fixture(scope="session")
def semigroup():
    return make_semigroup()


@pytest.fixture(scope="session")
def all_corpus(poly_x, poly_xy, hypersurface, semigroup):
    return [poly_x, poly_xy, hypersurface, semigroup]


@pytest.fixture(scope="session")
def omega_mod_x(semigroup):
    """The standard length-one test module over the semigroup ring."""
    return quotient_by_element(semigroup.C, semigroup.nzd)
