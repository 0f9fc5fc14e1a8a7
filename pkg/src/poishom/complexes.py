"""The chain and cochain complexes with module coefficients.

Chain side: elements of W (x) Omega^q with the degree -1 differential that
decomposes, on each basis section, as

    e_a (x) omega  |->  e_a (x) bnd(omega) + iota_{X_a}(omega),

where bnd is the scalar Koszul differential and X_a = {e_a,-}_W is the
W-valued vector field read off the bracket matrices. The decomposition is
equivalent to the two-sum formula on decomposables (the test suite checks
this against an independent oracle).

Cochain side: W-valued multiderivations of degree k with the degree +1
differential

    (dX)(f_1..f_{k+1}) = sum_i (-1)^i {X(.. ^f_i ..), f_i}_W
                       + sum_{i<j} (-1)^{i+j} X({f_i,f_j}, .. ^f_i .. ^f_j ..).

A multiderivation is determined by its values on coordinate tuples, so the
implementation evaluates the formula there and reassembles the result.

Weight grading: weight(x_i) = weight(dx_i) = +1, weight(d/dx_i) = -1. When
the bivector is homogeneous of coefficient degree d and every bracket entry
is homogeneous of degree d-1, both differentials shift weight by exactly
d-2 and every weight slice is finite dimensional; ``assemble_slice`` builds
the matrices of these restrictions over deterministic monomial bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .calculus import (
    Form,
    ModuleChainElement,
    ModuleCochainElement,
    MultiVector,
    interior_product,
)
from .errors import DimensionError, GradedModeError, PoishomError
from .pmodule import PoissonModule, bracket_vector
from .poisson import PoissonStructure, VolumeForm
from .poly import Poly, monomials_of_degree


def _check_pair(structure: PoissonStructure, module: PoissonModule, element):
    structure._require_jacobi()
    if not module.flat_verified:
        raise PoishomError("module is not flat-verified; run verify_flat first")
    if module.nvars != structure.nvars or element.nvars != module.nvars:
        raise DimensionError("mismatched variable counts")
    if element.rank != module.rank:
        raise DimensionError("rank mismatch")


def chain_differential(structure: PoissonStructure, module: PoissonModule,
                       element: ModuleChainElement) -> ModuleChainElement:
    """Degree -1 differential of the chain complex with coefficients."""
    _check_pair(structure, module, element)
    n, r, q = element.nvars, element.rank, element.degree
    if q == 0 or element.is_zero():
        return ModuleChainElement.zero(r, n, max(q - 1, 0))
    fields = module.module_fields()
    out = ModuleChainElement.zero(r, n, q - 1)
    for a, omega in enumerate(element.components):
        if omega.is_zero():
            continue
        scalar = structure.koszul_differential(omega)
        pieces = []
        for b in range(r):
            piece = interior_product(fields[a][b], omega)
            if b == a:
                piece = piece + scalar
            pieces.append(piece)
        out = out + ModuleChainElement(pieces, degree=q - 1)
    return out


def cochain_differential(structure: PoissonStructure, module: PoissonModule,
                         element: ModuleCochainElement) -> ModuleCochainElement:
    """Degree +1 differential of the cochain complex with coefficients."""
    _check_pair(structure, module, element)
    n, r, k = element.nvars, element.rank, element.degree
    if k >= n:
        return ModuleCochainElement.zero(r, n, n)
    coords = [structure.coordinate(i) for i in range(n)]
    out_terms: list[dict] = [{} for _ in range(r)]
    for tup in combinations(range(n), k + 1):
        value = [Poly.zero(n) for _ in range(r)]
        for t, i in enumerate(tup):
            rest = [coords[j] for j in tup if j != i]
            evaluated = element.evaluate(*rest)
            bracketed = bracket_vector(module, structure, evaluated, coords[i])
            sign = -1 if t % 2 == 0 else 1  # (-1)**(t+1) for 0-based t
            for b in range(r):
                value[b] = value[b] + bracketed[b].scale(sign)
        for s in range(k + 1):
            for t in range(s + 1, k + 1):
                first = structure.bracket(coords[tup[s]], coords[tup[t]])
                rest = [coords[tup[u]] for u in range(k + 1) if u not in (s, t)]
                evaluated = element.evaluate(first, *rest)
                sign = 1 if (s + t) % 2 == 0 else -1  # (-1)**((s+1)+(t+1))
                for b in range(r):
                    value[b] = value[b] + evaluated[b].scale(sign)
        for b in range(r):
            if not value[b].is_zero():
                out_terms[b][tup] = value[b]
    return ModuleCochainElement(
        [MultiVector(n, k + 1, terms) for terms in out_terms], degree=k + 1
    )


# ----------------------------------------------------------------------
# duality maps


def star(mu: VolumeForm, element: ModuleCochainElement) -> ModuleChainElement:
    """Contraction against the volume form, X |-> iota_X(mu), componentwise."""
    n = element.nvars
    mu_form = mu.form(n)
    return ModuleChainElement(
        [interior_product(c, mu_form) for c in element.components],
        degree=n - element.degree,
    )


def star_inverse(mu: VolumeForm, element: ModuleChainElement) -> ModuleCochainElement:
    """Inverse of ``star``; defined since the volume coefficient is a unit."""
    n = element.nvars
    k = n - element.degree
    out = []
    for comp in element.components:
        terms = {}
        for idx, poly in comp.terms.items():
            complement = tuple(i for i in range(n) if i not in idx)
            sign = 1 if sum(j - t for t, j in enumerate(complement)) % 2 == 0 else -1
            terms[complement] = poly.scale(Fraction(sign, 1) / mu.coefficient)
        out.append(MultiVector(n, k, terms))
    return ModuleCochainElement(out, degree=k)


def _triangle_sign(k: int) -> int:
    return -1 if (k * (k + 1) // 2) % 2 else 1


def blacktriangle(mu: VolumeForm, element: ModuleCochainElement) -> ModuleChainElement:
    """(-1)^(k(k+1)/2) star; the sign makes the duality square commute."""
    return star(mu, element).scale(_triangle_sign(element.degree))


def blacktriangle_inverse(mu: VolumeForm, element: ModuleChainElement) -> ModuleCochainElement:
    k = element.nvars - element.degree
    return star_inverse(mu, element).scale(_triangle_sign(k))


# ----------------------------------------------------------------------
# weight-graded slices


class BasisElement(NamedTuple):
    """One monomial basis vector: section e_a, index tuple, coefficient exponents."""

    section: int
    indices: tuple
    exponents: tuple


def graded_weight_shift(structure: PoissonStructure, module: PoissonModule) -> int:
    """Weight shift of the differentials in graded mode.

    Graded mode requires the bivector homogeneous of some coefficient degree
    d and every bracket entry homogeneous of degree d-1 (zero entries are
    fine); the shift is then d-2. If the bivector vanishes the bracket
    degree m alone fixes the shift m-1, and with no data at all the shift
    is 0 (both differentials vanish identically).
    """
    try:
        pi_degree = structure.homogeneous_degree()
    except ValueError as exc:
        raise GradedModeError(str(exc)) from exc
    try:
        bracket_degree = module.homogeneous_bracket_degree()
    except ValueError as exc:
        raise GradedModeError(str(exc)) from exc
    if pi_degree is None and bracket_degree is None:
        return 0
    if pi_degree is None:
        return bracket_degree - 1
    if bracket_degree is not None and bracket_degree != pi_degree - 1:
        raise GradedModeError(
            f"bracket entries have degree {bracket_degree}, expected "
            f"{pi_degree - 1} for a bivector of degree {pi_degree}"
        )
    return pi_degree - 2


def slice_basis(module: PoissonModule, kind: str, degree: int, weight: int):
    """Ordered monomial basis of one weight slice.

    Cochain slice (k, w): sections e_a (x) x^alpha Dx_I with |I| = k and
    |alpha| = w + k. Chain slice (q, w): e_a (x) x^alpha dx_I with |alpha| =
    w - q. Order: section, then index tuple (lex), then exponents
    (lex-descending), matching the printing order of polynomials.
    """
    if kind not in ("chain", "cochain"):
        raise ValueError(f"unknown kind {kind!r}")
    n = module.nvars
    k = degree
    coeff_degree = weight + k if kind == "cochain" else weight - k
    if k < 0 or k > n or coeff_degree < 0:
        return []
    return [
        BasisElement(a, idx, exps)
        for a in range(module.rank)
        for idx in combinations(range(n), k)
        for exps in monomials_of_degree(n, coeff_degree)
    ]


def element_from_basis(module: PoissonModule, kind: str, degree: int,
                       entry: BasisElement):
    n = module.nvars
    poly = Poly.monomial(n, entry.exponents)
    if kind == "cochain":
        comp = MultiVector(n, degree, {entry.indices: poly})
        return ModuleCochainElement.single(module.rank, entry.section, comp)
    comp = Form(n, degree, {entry.indices: poly})
    return ModuleChainElement.single(module.rank, entry.section, comp)


@dataclass(frozen=True)
class ComplexSlice:
    """The matrix of one differential restricted to a weight slice.

    ``matrix`` has one row per codomain basis vector and one column per
    domain basis vector; entry (row, col) is the coefficient of the row
    basis vector in the image of the column basis vector.
    """

    kind: str
    degree: int
    weight: int
    domain_basis: tuple
    codomain_basis: tuple
    matrix: tuple  # rows of Fractions

    @property
    def domain_dimension(self) -> int:
        return len(self.domain_basis)

    @property
    def codomain_dimension(self) -> int:
        return len(self.codomain_basis)

    def to_text(self) -> str:
        """Dense rational grid with the ordered bases, for golden files."""
        lines = [f"{self.kind} slice degree={self.degree} weight={self.weight}"]
        lines.append("domain:")
        for e in self.domain_basis:
            lines.append(f"  e{e.section + 1} {e.indices} x^{e.exponents}")
        lines.append("codomain:")
        for e in self.codomain_basis:
            lines.append(f"  e{e.section + 1} {e.indices} x^{e.exponents}")
        lines.append("matrix:")
        for row in self.matrix:
            lines.append("  " + " ".join(str(c) for c in row))
        return "\n".join(lines)


def assemble_slice(structure: PoissonStructure, module: PoissonModule,
                   kind: str, degree: int, weight: int) -> ComplexSlice:
    """Matrix of the differential leaving slice (degree, weight)."""
    shift = graded_weight_shift(structure, module)
    domain = slice_basis(module, kind, degree, weight)
    codomain_degree = degree + 1 if kind == "cochain" else degree - 1
    codomain = slice_basis(module, kind, codomain_degree, weight + shift)
    index = {entry: row for row, entry in enumerate(codomain)}
    matrix = [[Fraction(0)] * len(domain) for _ in codomain]
    differential = cochain_differential if kind == "cochain" else chain_differential
    for col, entry in enumerate(domain):
        element = element_from_basis(module, kind, degree, entry)
        image = differential(structure, module, element)
        for a, comp in enumerate(image.components):
            for idx, poly in comp.terms.items():
                for exps, coeff in poly.terms.items():
                    key = BasisElement(a, idx, exps)
                    row = index.get(key)
                    if row is None:
                        raise GradedModeError(
                            f"image of {entry} leaves the expected slice at {key}"
                        )
                    matrix[row][col] += coeff
    return ComplexSlice(
        kind, degree, weight, tuple(domain), tuple(codomain),
        tuple(tuple(row) for row in matrix),
    )
