import random

import pytest

from poishom import (
    FlatnessError,
    ModuleChainElement,
    MultiVector,
    PoissonFieldError,
    PoissonModule,
    Poly,
    VolumeForm,
    check_flat,
    elw_connection,
    flatness_defect,
    module_bracket,
    twist,
    verify_flat,
)
from poishom.pmodule import bracket_vector

from catalog import (
    generic2,
    p2,
    p3,
    quadratic2,
    quadratic_rank2,
    rand_poly,
    so3,
    so3_rank2,
    symplectic2,
    symplectic_rank2,
    zero2,
)


def rank1(structure, *texts):
    n = structure.nvars
    parse = p2 if n == 2 else p3
    return PoissonModule(n, 1, tuple(((parse(t),),) for t in texts))


def w_element(*polys):
    from poishom import Form

    return ModuleChainElement([Form.from_function(q) for q in polys], degree=0)


# ----------------------------------------------------------------------
# module bracket


def test_trivial_module_bracket_is_scalar_bracket():
    P = symplectic2()
    W = PoissonModule.trivial(2, 1)
    assert module_bracket(W, P, w_element(p2("x")), p2("y")) == w_element(p2("1"))


def test_bracket_with_constant_vanishes():
    P = quadratic2()
    W = quadratic_rank2(P)
    w = w_element(p2("x+y"), p2("x*y"))
    assert module_bracket(W, P, w, p2("7")).is_zero()


def test_bracket_leibniz_in_function_slot():
    # rank-1, B_x = (x), B_y = (0): {e, x^2} = 2x * (x e) = 2x^2 e
    # (module_bracket itself needs no flatness; only the differentials do)
    P = symplectic2()
    W = rank1(P, "x", "0")
    e = w_element(p2("1"))
    assert module_bracket(W, P, e, p2("x^2")) == w_element(p2("2*x^2"))


def test_bracket_axioms_random():
    rng = random.Random(1)
    P = quadratic2()
    W = quadratic_rank2(P)
    for _ in range(60):
        g = tuple(rand_poly(rng, 2, 3, 2) for _ in range(2))
        a, b = rand_poly(rng, 2, 3, 2), rand_poly(rng, 2, 3, 2)
        # axiom (2): {wa, b} = {w,b}a + w{a,b}
        lhs = bracket_vector(W, P, tuple(x * a for x in g), b)
        scalar = P.bracket(a, b)
        rhs = tuple(
            u * a + x * scalar for u, x in zip(bracket_vector(W, P, g, b), g)
        )
        assert lhs == rhs
        # axiom (3): {w, ab} = {w,a}b + {w,b}a
        lhs = bracket_vector(W, P, g, a * b)
        ra = bracket_vector(W, P, g, a)
        rb = bracket_vector(W, P, g, b)
        assert lhs == tuple(u * b + v * a for u, v in zip(ra, rb))


def test_right_lie_module_axiom_random_when_flat():
    rng = random.Random(3)
    for P, W in [
        (quadratic2(), quadratic_rank2(quadratic2())),
        (so3(), so3_rank2(so3())),
        (symplectic2(), symplectic_rank2(symplectic2())),
    ]:
        for _ in range(40):
            g = tuple(rand_poly(rng, P.nvars, 3, 2) for _ in range(W.rank))
            a, b = rand_poly(rng, P.nvars, 3, 2), rand_poly(rng, P.nvars, 3, 2)
            lhs = bracket_vector(W, P, bracket_vector(W, P, g, a), b)
            rhs = bracket_vector(W, P, bracket_vector(W, P, g, b), a)
            target = bracket_vector(W, P, g, P.bracket(a, b))
            assert tuple(u - v for u, v in zip(lhs, rhs)) == target


# ----------------------------------------------------------------------
# flatness


def test_trivial_module_flat_for_constant_bracket():
    assert check_flat(PoissonModule.trivial(2, 1), symplectic2())


def test_flat_example_b_x_equals_y():
    P = symplectic2()
    assert check_flat(rank1(P, "y", "0"), P)


def test_non_flat_example_with_witness():
    P = symplectic2()
    W = rank1(P, "x", "0")
    assert not check_flat(W, P)
    a, i, j, disc = flatness_defect(W, P)
    assert (a, i, j) == (0, 0, 1)
    assert disc == (p2("-1"),)  # {e,{x,y}} - {{e,x},y} + {{e,y},x} = -e


def test_verify_flat_raises_with_witness():
    P = symplectic2()
    with pytest.raises(FlatnessError):
        verify_flat(rank1(P, "x", "0"), P)


def test_catalog_modules_are_flat():
    for P, W in [
        (symplectic2(), symplectic_rank2(symplectic2())),
        (quadratic2(), quadratic_rank2(quadratic2())),
        (so3(), so3_rank2(so3())),
    ]:
        assert W.flat_verified and check_flat(W, P)


def test_zero_structure_flat_iff_matrices_commute():
    P = zero2()
    commuting = PoissonModule(
        2, 2, (
            ((p2("0"), p2("1")), (p2("0"), p2("0"))),
            ((p2("0"), p2("1")), (p2("0"), p2("0"))),
        )
    )
    assert check_flat(commuting, P)
    noncommuting = PoissonModule(
        2, 2, (
            ((p2("0"), p2("1")), (p2("0"), p2("0"))),
            ((p2("0"), p2("0")), (p2("1"), p2("0"))),
        )
    )
    assert not check_flat(noncommuting, P)


# ----------------------------------------------------------------------
# connection dictionary


def test_connection_round_trip_and_sign():
    rng = random.Random(5)
    for _ in range(20):
        gammas = tuple(
            tuple(tuple(rand_poly(rng, 2, 2, 2) for _ in range(2)) for _ in range(2))
            for _ in range(2)
        )
        W = PoissonModule.from_connection(2, 2, gammas)
        assert W.to_connection() == gammas
    W = PoissonModule.from_connection(2, 1, (((p2("x"),),), ((p2("0"),),)))
    assert W.brackets[0][0][0] == p2("-x")


def test_zero_connection_is_trivial_module():
    zero = (((p2("0"),),), ((p2("0"),),))
    assert PoissonModule.from_connection(2, 1, zero) == PoissonModule.trivial(2, 1)


# ----------------------------------------------------------------------
# twisting


def test_twist_by_zero_field_is_identity():
    P = quadratic2()
    W = quadratic_rank2(P)
    assert twist(W, P, MultiVector.zero(2, 1)) == W


def test_twist_of_trivial_by_modular_quadratic():
    P = quadratic2()
    phi = P.modular_vector_field(VolumeForm())
    T = twist(PoissonModule.trivial(2, 1), P, phi)
    assert T.brackets[0][0][0] == p2("-x")
    assert T.brackets[1][0][0] == p2("y")


def test_double_twist_is_identity():
    P = quadratic2()
    phi = P.modular_vector_field(VolumeForm())
    for W in (PoissonModule.trivial(2, 1), quadratic_rank2(P)):
        assert twist(twist(W, P, phi), P, -phi) == W


def test_twist_requires_poisson_field():
    P = symplectic2()
    euler = MultiVector(2, 1, {(0,): p2("x")})
    with pytest.raises(PoissonFieldError):
        twist(PoissonModule.trivial(2, 1), P, euler)
    # escape hatch leaves the result unverified
    unchecked = twist(PoissonModule.trivial(2, 1), P, euler, unchecked=True)
    assert not unchecked.flat_verified


def test_twist_requires_flat_module():
    P = symplectic2()
    W = rank1(P, "x", "0")  # not flat
    with pytest.raises(FlatnessError):
        twist(W, P, MultiVector.zero(2, 1))


def test_twist_preserves_flatness_random():
    rng = random.Random(7)
    for P, W in [
        (quadratic2(), quadratic_rank2(quadratic2())),
        (so3(), so3_rank2(so3())),
        (generic2(), PoissonModule.trivial(2, 2)),
    ]:
        for _ in range(10):
            f = rand_poly(rng, P.nvars, 3, 2)
            phi = P.hamiltonian(f)
            twisted = twist(W, P, phi)
            assert check_flat(twisted, P)


# ----------------------------------------------------------------------
# the canonical top-form connection


def test_elw_symplectic_is_trivial():
    P = symplectic2()
    E = elw_connection(P, VolumeForm())
    assert E == PoissonModule.trivial(2, 1)


def test_elw_zero_structure_is_trivial():
    P = zero2()
    assert elw_connection(P, VolumeForm()) == PoissonModule.trivial(2, 1)


def test_elw_quadratic_matrices():
    E = elw_connection(quadratic2(), VolumeForm())
    assert E.to_connection()[0][0][0] == p2("x")
    assert E.brackets[0][0][0] == p2("-x")
    assert E.brackets[1][0][0] == p2("y")


def test_elw_equals_twist_of_trivial_by_modular():
    for make in (symplectic2, quadratic2, so3, generic2):
        P = make()
        mu = VolumeForm(2)
        phi = P.modular_vector_field(mu)
        assert elw_connection(P, mu) == twist(
            PoissonModule.trivial(P.nvars, 1), P, phi
        )
