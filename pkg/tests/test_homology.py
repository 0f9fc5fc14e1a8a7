import math
import random
from fractions import Fraction

import pytest

from poishom import (
    Form,
    ModuleChainElement,
    PoissonModule,
    Poly,
    VolumeForm,
    assemble_slice,
    betti,
    betti_table,
    blacktriangle,
    chain_differential,
    cochain_differential,
    elw_connection,
    graded_weight_shift,
    matrix_rank,
    slice_basis,
    star,
    twist,
    verify_duality,
)
from poishom.calculus import ModuleCochainElement, MultiVector

from catalog import (
    p2,
    quadratic2,
    quadratic_rank2,
    rank_oracle,
    so3,
    symplectic2,
    zero2,
)


# ----------------------------------------------------------------------
# exact rank


def test_rank_trivial_cases():
    assert matrix_rank([[0, 0, 0, 0]] * 3) == 0
    identity = [[Fraction(i == j) for j in range(5)] for i in range(5)]
    assert matrix_rank(identity) == 5
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([]) == 0


def test_rank_with_rational_entries():
    assert matrix_rank([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]) == 1


def test_rank_transpose_invariance_and_oracle():
    rng = random.Random(23)
    for _ in range(60):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = [
            [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
            for _ in range(rows)
        ]
        transpose = [[m[i][j] for i in range(rows)] for j in range(cols)]
        expected = rank_oracle(m)
        assert matrix_rank(m) == expected
        assert matrix_rank(transpose) == expected


# ----------------------------------------------------------------------
# Betti numbers


def test_zero_structure_betti_equals_slice_dimension():
    # r * C(n,k) * C(p+n-1, n-1), p the coefficient degree
    P = zero2()
    W = PoissonModule.trivial(2, 2)
    for k in range(3):
        for p in range(4):
            weight = p - k
            dim = 2 * math.comb(2, k) * math.comb(p + 1, 1)
            assert betti(P, W, "cochain", k, weight) == dim
            assert len(slice_basis(W, "cochain", k, weight)) == dim


def test_symplectic_cohomology_is_acyclic_in_positive_degrees():
    P = symplectic2()
    W = PoissonModule.trivial(2, 1)
    table = betti_table(P, W, "cohomology", 8)
    assert table.dimension(0, 0) == 1  # constants
    assert table.total(0) == 1
    assert table.total(1) == 0
    assert table.total(2) == 0


def test_symplectic_homology_matches_shifted_cohomology():
    # unimodular case: dim HP_k at weight w+2 equals dim HP^{2-k} at weight w
    P = symplectic2()
    W = PoissonModule.trivial(2, 1)
    cache = {}
    for k in range(3):
        for w in range(-2, 7):
            lhs = betti(P, W, "chain", 2 - k, w + 2, _cache=cache)
            rhs = betti(P, W, "cochain", k, w, _cache=cache)
            assert lhs == rhs


def test_so3_casimir_dimensions():
    # Casimirs of so(3)* are polynomials in the quadratic x^2+y^2+z^2
    P = so3()
    W = PoissonModule.trivial(3, 1)
    assert betti(P, W, "cochain", 0, 0) == 1
    assert betti(P, W, "cochain", 0, 1) == 0
    assert betti(P, W, "cochain", 0, 2) == 1
    assert betti(P, W, "cochain", 0, 3) == 0
    assert betti(P, W, "cochain", 0, 4) == 1


def test_betti_independent_of_basis_order():
    # permuting rows and columns of the slice matrices leaves ranks alone
    P = quadratic2()
    W = quadratic_rank2(P)
    rng = random.Random(29)
    shift = graded_weight_shift(P, W)
    for kind, degree, weight in [("cochain", 1, 2), ("chain", 1, 3)]:
        outgoing = assemble_slice(P, W, kind, degree, weight)
        incoming_degree = degree - 1 if kind == "cochain" else degree + 1
        incoming = assemble_slice(P, W, kind, incoming_degree, weight - shift)

        def permuted_rank(piece):
            rows = [list(r) for r in piece.matrix]
            rng.shuffle(rows)
            cols = list(range(len(rows[0]) if rows else 0))
            rng.shuffle(cols)
            shuffled = [[row[c] for c in cols] for row in rows]
            return matrix_rank(shuffled)

        direct = betti(P, W, kind, degree, weight)
        if outgoing.matrix and incoming.matrix:
            recomputed = (
                outgoing.domain_dimension
                - permuted_rank(outgoing)
                - permuted_rank(incoming)
            )
            assert direct == recomputed


def test_euler_characteristic_per_weight_line():
    # alternating sums of slice dimensions and of Betti numbers agree along
    # each weight line (slices connected by the differential)
    for P, W, cap in [
        (symplectic2(), PoissonModule.trivial(2, 1), 6),
        (quadratic2(), quadratic_rank2(quadratic2()), 6),
        (so3(), PoissonModule.trivial(3, 1), 5),
    ]:
        n = P.nvars
        shift = graded_weight_shift(P, W)
        cache = {}
        for w0 in range(-n, cap):
            dims = 0
            bettis = 0
            for k in range(n + 1):
                w = w0 + k * shift
                dims += (-1) ** k * len(slice_basis(W, "cochain", k, w))
                bettis += (-1) ** k * betti(P, W, "cochain", k, w, _cache=cache)
            assert dims == bettis


def test_betti_table_metadata_and_totals():
    P = symplectic2()
    W = PoissonModule.trivial(2, 1)
    table = betti_table(P, W, "cohomology", 5)
    assert table.metadata["max_weight"] == 5
    assert table.metadata["weight_shift"] == -2
    assert all(dim >= 0 for dim in table.entries.values())
    payload = table.to_dict()
    assert payload["kind"] == "cohomology"
    assert all(set(e) == {"degree", "weight", "dim"} for e in payload["entries"])


# ----------------------------------------------------------------------
# duality verification


def test_verify_duality_symplectic_trivial():
    P = symplectic2()
    report = verify_duality(P, PoissonModule.trivial(2, 1), VolumeForm(), 6, 10, 3)
    assert report.ok()
    assert all(p.is_zero() for p in report.modular_field)
    assert report.graded and report.weight_shift == -2
    assert report.diagram_total > 0 and report.random_total == 10
    assert report.betti_pairs


def test_verify_duality_quadratic_chain_witness():
    # hand-checked instance: k=0, X = x e: both routes give -xy dx (x) e
    P = quadratic2()
    W = PoissonModule.trivial(2, 1)
    mu = VolumeForm()
    phi = P.modular_vector_field(mu)
    twisted = twist(W, P, -phi)
    X = ModuleCochainElement([MultiVector(2, 0, {(): p2("x")})])
    lhs = chain_differential(P, twisted, blacktriangle(mu, X))
    rhs = blacktriangle(mu, cochain_differential(P, W, X))
    expected = ModuleChainElement([Form(2, 1, {(0,): p2("-x*y")})])
    assert lhs == expected and rhs == expected


def test_verify_duality_quadratic_report():
    P = quadratic2()
    report = verify_duality(P, PoissonModule.trivial(2, 1), VolumeForm(), 6, 25, 11)
    assert report.ok()
    assert [p.text(["x", "y"]) for p in report.modular_field] == ["-x", "y"]


def test_verify_duality_elw_gives_untwisted_homology():
    # the twisted coefficients of the ELW module are the trivial ones, so the
    # report's chain side computes plain homology (the corollary's content)
    P = quadratic2()
    mu = VolumeForm()
    E = elw_connection(P, mu)
    phi = P.modular_vector_field(mu)
    assert twist(E, P, -phi) == PoissonModule.trivial(2, 1)
    report = verify_duality(P, E, mu, 6, 10, 5)
    assert report.ok()
    trivial = PoissonModule.trivial(2, 1)
    cache = {}
    for pair in report.betti_pairs:
        direct = betti(
            P, trivial, "chain", pair["homology_degree"], pair["homology_weight"],
            _cache=cache,
        )
        assert pair["homology_dim"] == direct
        assert pair["cohomology_dim"] == direct


def test_verify_duality_nongraded_skips_betti():
    from catalog import generic2

    P = generic2()
    report = verify_duality(P, PoissonModule.trivial(2, 1), VolumeForm(), 4, 5, 1)
    assert report.diagram_ok
    assert not report.graded and report.betti_pairs == []
    assert "skipped" in report.graded_note
    assert report.ok()  # nothing computed failed


def test_diagram_pass_implies_betti_pass():
    # no report may combine a commuting diagram with unequal Betti numbers
    for P, W in [
        (symplectic2(), PoissonModule.trivial(2, 1)),
        (quadratic2(), quadratic_rank2(quadratic2())),
    ]:
        report = verify_duality(P, W, VolumeForm(), 5, 5, 2)
        if report.diagram_ok and report.graded:
            assert report.betti_ok


def test_report_serialization_is_json_friendly():
    import json

    P = quadratic2()
    report = verify_duality(P, PoissonModule.trivial(2, 1), VolumeForm(), 3, 2, 1)
    payload = report.to_dict(["x", "y"])
    text = json.dumps(payload, sort_keys=True)
    assert json.loads(text)["ok"] is True
