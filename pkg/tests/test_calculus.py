import random

import pytest

from poishom import (
    DimensionError,
    Form,
    ModuleChainElement,
    ModuleCochainElement,
    MultiVector,
    Poly,
    interior_product,
)

from catalog import (
    decomposable,
    p2,
    rand_chain_element,
    rand_cochain_element,
    rand_form,
    rand_multivector,
    rand_poly,
    shuffle_interior_oracle,
)


def dx(i, n=2):
    return Form(n, 1, {(i,): Poly.constant(n, 1)})


def Dx(i, n=2):
    return MultiVector(n, 1, {(i,): Poly.constant(n, 1)})


# ----------------------------------------------------------------------
# wedge


def test_wedge_basis():
    assert dx(0).wedge(dx(1)) == Form(2, 2, {(0, 1): Poly.constant(2, 1)})


def test_wedge_alternation():
    assert dx(0).wedge(dx(0)).is_zero()


def test_wedge_transposition_sign():
    # (x dy) ^ (y dx) = -xy dx^dy
    a = dx(1).scale(p2("x"))
    b = dx(0).scale(p2("y"))
    assert a.wedge(b) == Form(2, 2, {(0, 1): p2("-x*y")})


def test_wedge_graded_commutative_and_associative():
    rng = random.Random(3)
    for _ in range(60):
        qa, qb, qc = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        a, b, c = (rand_form(rng, 3, q) for q in (qa, qb, qc))
        assert a.wedge(b) == b.wedge(a).scale((-1) ** (qa * qb))
        assert a.wedge(b.wedge(c)) == a.wedge(b).wedge(c)


def test_wedge_beyond_top_degree_is_zero():
    a = rand_form(random.Random(1), 2, 1)
    assert a.wedge(a.wedge(a)).is_zero()


def test_wedge_nvars_mismatch():
    with pytest.raises(DimensionError):
        dx(0, 2).wedge(dx(0, 3))


# ----------------------------------------------------------------------
# exterior derivative


def test_d_product_rule_on_function():
    f = Form.from_function(p2("x*y"))
    assert f.d() == Form(2, 1, {(0,): p2("y"), (1,): p2("x")})


def test_d_with_sign_fix():
    # d(y dx) = dy^dx = -dx^dy
    assert dx(0).scale(p2("y")).d() == Form(2, 2, {(0, 1): p2("-1")})


def test_d_of_constant_coefficient_form():
    assert dx(0).d().is_zero()


def test_d_squared_zero_random():
    rng = random.Random(5)
    for _ in range(100):
        q = rng.randint(0, 3)
        omega = rand_form(rng, 3, q)
        assert omega.d().d().is_zero()


def test_d_top_degree_returns_clamped_zero():
    top = Form(2, 2, {(0, 1): p2("x")})
    result = top.d()
    assert result.is_zero() and result.degree == 2


def test_d_graded_leibniz_random():
    rng = random.Random(7)
    for _ in range(100):
        qa, qb = rng.randint(0, 2), rng.randint(0, 2)
        a, b = rand_form(rng, 3, qa), rand_form(rng, 3, qb)
        lhs = a.wedge(b).d()
        rhs = a.d().wedge(b) + a.wedge(b.d()).scale((-1) ** qa)
        assert lhs == rhs


# ----------------------------------------------------------------------
# interior product


def test_interior_basis_contractions():
    omega = dx(0).wedge(dx(1))
    assert interior_product(Dx(0), omega) == dx(1)
    assert interior_product(Dx(1), omega) == -dx(0)  # shuffle sign
    assert interior_product(MultiVector(2, 2, {(0, 1): Poly.constant(2, 1)}), omega) == (
        Form.from_function(Poly.constant(2, 1))
    )


def test_interior_degree_zero_is_multiplication():
    field = MultiVector(2, 0, {(): p2("x")})
    omega = dx(1).scale(p2("y"))
    assert interior_product(field, omega) == dx(1).scale(p2("x*y"))


def test_interior_undershoot_is_zero_degree_zero():
    field = MultiVector(2, 2, {(0, 1): Poly.constant(2, 1)})
    result = interior_product(field, dx(0))
    assert result.is_zero() and result.degree == 0


def test_interior_matches_shuffle_oracle_on_decomposables():
    # pins the index-tuple algorithm to the defining shuffle formula
    rng = random.Random(9)
    for _ in range(120):
        n = rng.choice([2, 3])
        q = rng.randint(0, n)
        k = rng.randint(0, n)
        f0 = rand_poly(rng, n, 2, 2)
        fs = [rand_poly(rng, n, 2, 2) for _ in range(q)]
        field = rand_multivector(rng, n, k, max_degree=2, terms=2)
        got = interior_product(field, decomposable(f0, fs))
        want = shuffle_interior_oracle(field, f0, fs)
        assert got == want


def test_interior_module_valued_matches_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = 2
        q = rng.randint(0, 2)
        k = rng.randint(0, 2)
        f0 = rand_poly(rng, n, 2, 2)
        fs = [rand_poly(rng, n, 2, 2) for _ in range(q)]
        field = rand_cochain_element(rng, n, k, 2, max_degree=2, terms=2)
        got = interior_product(field, decomposable(f0, fs))
        want = shuffle_interior_oracle(field, f0, fs)
        assert got == want


def test_interior_is_derivation_for_vector_fields():
    rng = random.Random(13)
    for _ in range(80):
        qa, qb = rng.randint(0, 2), rng.randint(0, 2)
        a, b = rand_form(rng, 3, qa), rand_form(rng, 3, qb)
        v = rand_multivector(rng, 3, 1)
        lhs = interior_product(v, a.wedge(b))
        rhs = interior_product(v, a).wedge(b) + a.wedge(interior_product(v, b)).scale(
            (-1) ** qa
        )
        assert lhs == rhs


def test_interior_graded_commutation_with_scalar_field():
    # iota_X iota_Y = (-1)^{k l} (id (x) iota_Y) iota_X for module-valued X
    rng = random.Random(15)
    for _ in range(80):
        n = 3
        k, l, q = rng.randint(0, n), rng.randint(0, n), rng.randint(0, n)
        X = rand_cochain_element(rng, n, k, 2, max_degree=2, terms=2)
        Y = rand_multivector(rng, n, l, max_degree=2, terms=2)
        omega = rand_form(rng, n, q, max_degree=2, terms=2)
        lhs = interior_product(X, interior_product(Y, omega))
        inner = interior_product(X, omega)
        rhs = ModuleChainElement(
            [interior_product(Y, c) for c in inner.components],
            degree=min(max(q - k - l, 0), n),
        ).scale((-1) ** (k * l))
        assert lhs == rhs


# ----------------------------------------------------------------------
# evaluation


def test_evaluate_basis_and_antisymmetry():
    field = MultiVector(2, 2, {(0, 1): Poly.constant(2, 1)})
    assert field.evaluate(p2("x"), p2("y")) == p2("1")
    assert field.evaluate(p2("y"), p2("x")) == p2("-1")


def test_evaluate_with_coefficient():
    field = MultiVector(2, 2, {(0, 1): p2("x")})
    assert field.evaluate(p2("x^2"), p2("y")) == p2("2*x^2")


def test_evaluate_arity_mismatch():
    with pytest.raises(DimensionError):
        Dx(0).evaluate(p2("x"), p2("y"))


def test_evaluate_skew_and_derivation_in_each_slot():
    rng = random.Random(17)
    for _ in range(60):
        X = rand_multivector(rng, 3, 2, max_degree=2, terms=2)
        f, g, h = (rand_poly(rng, 3, 2, 2) for _ in range(3))
        assert X.evaluate(f, g) == -X.evaluate(g, f)
        assert X.evaluate(f * g, h) == f * X.evaluate(g, h) + g * X.evaluate(f, h)


def test_evaluate_agrees_with_full_interior_contraction():
    rng = random.Random(19)
    for _ in range(60):
        n = rng.choice([2, 3])
        k = rng.randint(1, n)
        X = rand_multivector(rng, n, k, max_degree=2, terms=2)
        fs = [rand_poly(rng, n, 2, 2) for _ in range(k)]
        full = interior_product(X, decomposable(Poly.constant(n, 1), fs))
        assert full.degree == 0 or full.is_zero()
        assert full.coefficient(()) == X.evaluate(*fs)


# ----------------------------------------------------------------------
# module elements


def test_module_element_mixed_degree_rejected():
    with pytest.raises(DimensionError):
        ModuleChainElement([dx(0), dx(0).wedge(dx(1))])


def test_module_element_zero_components_adopt_degree():
    element = ModuleChainElement([Form.zero(2, 0), dx(0)])
    assert element.degree == 1 and element.components[0].degree == 1


def test_module_element_algebra():
    rng = random.Random(21)
    a = rand_chain_element(rng, 2, 1, 2)
    b = rand_chain_element(rng, 2, 1, 2)
    assert (a + b) - b == a
    assert (a - a).is_zero()
    assert a.scale(p2("x")).components[0] == a.components[0].scale(p2("x"))


def test_cochain_element_evaluate_componentwise():
    element = ModuleCochainElement([Dx(0), Dx(1)])
    values = element.evaluate(p2("x*y"))
    assert values == (p2("y"), p2("x"))
