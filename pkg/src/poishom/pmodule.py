"""Free Poisson modules of finite rank over the polynomial ring.

A module W of rank r is determined by its coordinate bracket data: n
matrices B_1..B_n of polynomials with

    {e_a, x_i}_W = sum_b B_i[a][b] e_b.

The bracket extends to arbitrary elements and functions by the two Leibniz
axioms; the remaining axiom (W is a right Lie module over the bracket) is
the flatness condition, checked on coordinate pairs.

The same data read with opposite sign is a flat contravariant connection:
nabla_{dx_i}(e_a) = sum_b Gamma_i[a][b] e_b with Gamma_i = -B_i.
"""

from __future__ import annotations

from .calculus import Form, ModuleChainElement, MultiVector, interior_product
from .errors import DimensionError, FlatnessError, PoissonFieldError
from .poisson import PoissonStructure, VolumeForm
from .poly import Poly


def _check_matrices(nvars, rank, matrices):
    matrices = tuple(tuple(tuple(row) for row in m) for m in matrices)
    if len(matrices) != nvars:
        raise DimensionError(f"expected {nvars} bracket matrices, got {len(matrices)}")
    for m in matrices:
        if len(m) != rank or any(len(row) != rank for row in m):
            raise DimensionError(f"bracket matrices must be {rank}x{rank}")
        for row in m:
            for entry in row:
                if not isinstance(entry, Poly) or entry.nvars != nvars:
                    raise DimensionError("bracket entries must be Poly over the same variables")
    return matrices


class PoissonModule:
    """A free rank-r module with coordinate bracket matrices.

    ``flat_verified`` records whether the right-Lie-module condition has
    been established for this data (either checked against a structure, or
    guaranteed by construction as for trivial modules and twists of
    verified modules). Operations that rely on flatness refuse unverified
    modules.
    """

    __slots__ = ("nvars", "rank", "brackets", "flat_verified")

    def __init__(self, nvars: int, rank: int, brackets, *, structure=None,
                 flat_verified: bool = False):
        if rank < 1:
            raise DimensionError("rank must be >= 1")
        brackets = _check_matrices(nvars, rank, brackets)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "brackets", brackets)
        if structure is not None:
            witness = flatness_defect_unverified(self, structure)
            if witness is not None:
                raise FlatnessError(witness)
            flat_verified = True
        object.__setattr__(self, "flat_verified", flat_verified)

    def __setattr__(self, name, value):
        raise AttributeError("PoissonModule is immutable")

    # ------------------------------------------------------------------

    @classmethod
    def trivial(cls, nvars: int, rank: int = 1) -> "PoissonModule":
        """All bracket matrices zero; flat for every Poisson structure."""
        zero = Poly.zero(nvars)
        m = tuple(tuple(tuple(zero for _ in range(rank)) for _ in range(rank)) for _ in range(nvars))
        return cls(nvars, rank, m, flat_verified=True)

    def section(self, a: int) -> ModuleChainElement:
        """The basis section e_a as a degree-0 chain element."""
        one = Form.from_function(Poly.constant(self.nvars, 1))
        return ModuleChainElement.single(self.rank, a, one)

    def section_bracket(self, a: int, i: int) -> tuple:
        """{e_a, x_i}_W as a coefficient vector."""
        return tuple(self.brackets[i][a][b] for b in range(self.rank))

    def module_fields(self):
        """The W-valued vector fields {e_a,-}_W, as vectors v[a][b] of fields.

        Component (a, b) is sum_i B_i[a][b] d/dx_i; contracting forms with
        these implements the module correction of the chain differential.
        """
        fields = []
        for a in range(self.rank):
            row = []
            for b in range(self.rank):
                terms = {}
                for i in range(self.nvars):
                    entry = self.brackets[i][a][b]
                    if not entry.is_zero():
                        terms[(i,)] = entry
                row.append(MultiVector(self.nvars, 1, terms))
            fields.append(tuple(row))
        return tuple(fields)

    # ------------------------------------------------------------------
    # connection dictionary: B_i = -Gamma_i

    @classmethod
    def from_connection(cls, nvars: int, rank: int, gammas) -> "PoissonModule":
        gammas = _check_matrices(nvars, rank, gammas)
        negated = tuple(
            tuple(tuple(-entry for entry in row) for row in m) for m in gammas
        )
        return cls(nvars, rank, negated)

    def to_connection(self):
        return tuple(
            tuple(tuple(-entry for entry in row) for row in m) for m in self.brackets
        )

    # ------------------------------------------------------------------

    def homogeneous_bracket_degree(self):
        """Common homogeneous degree of all nonzero bracket entries.

        Returns None when every matrix is zero; raises ValueError on mixed
        or non-homogeneous entries (graded mode unavailable).
        """
        degrees = set()
        for m in self.brackets:
            for row in m:
                for entry in row:
                    d = entry.homogeneous_degree()
                    if d is not None:
                        degrees.add(d)
        if not degrees:
            return None
        if len(degrees) > 1:
            raise ValueError("bracket entries have mixed homogeneous degrees")
        return degrees.pop()

    def __eq__(self, other):
        # equality is on the bracket data; verification status is bookkeeping
        if not isinstance(other, PoissonModule):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.rank == other.rank
            and self.brackets == other.brackets
        )

    def __hash__(self):
        return hash(("PoissonModule", self.nvars, self.rank, self.brackets))

    def __repr__(self):
        return f"PoissonModule(nvars={self.nvars}, rank={self.rank})"


# ----------------------------------------------------------------------
# bracket and flatness


def _vector_of(w: ModuleChainElement) -> tuple:
    if w.degree != 0:
        raise DimensionError("module bracket acts on degree-0 elements")
    return tuple(c.as_poly() for c in w.components)


def bracket_vector(module: PoissonModule, structure: PoissonStructure, vec, f: Poly):
    """{w, f}_W on a plain coefficient vector; the Leibniz extension of B.

    Component b of the result is {g_b, f} + sum_a g_a sum_i df/dx_i B_i[a][b].
    """
    out = [structure.bracket(g, f) for g in vec]
    for i in range(module.nvars):
        df_i = f.partial(i)
        if df_i.is_zero():
            continue
        matrix = module.brackets[i]
        for a, g_a in enumerate(vec):
            if g_a.is_zero():
                continue
            scale = g_a * df_i
            for b in range(module.rank):
                entry = matrix[a][b]
                if not entry.is_zero():
                    out[b] = out[b] + scale * entry
    return tuple(out)


def module_bracket(module: PoissonModule, structure: PoissonStructure,
                   w: ModuleChainElement, f: Poly) -> ModuleChainElement:
    """The Poisson module bracket {w, f}_W."""
    structure._require_jacobi()
    if module.nvars != structure.nvars or w.nvars != module.nvars:
        raise DimensionError("mismatched variable counts")
    if w.rank != module.rank:
        raise DimensionError("rank mismatch")
    result = bracket_vector(module, structure, _vector_of(w), f)
    return ModuleChainElement([Form.from_function(p) for p in result], degree=0)


def flatness_defect_unverified(module: PoissonModule, structure: PoissonStructure):
    """Flatness witness (a, i, j, discrepancy) or None; ignores flags.

    The discrepancy is oriented as
        {e_a,{x_i,x_j}}_W - {{e_a,x_i}_W,x_j}_W + {{e_a,x_j}_W,x_i}_W,
    each side expanded with the same Leibniz extension used everywhere else.
    Coordinate pairs suffice by the Leibniz axioms.
    """
    if module.nvars != structure.nvars:
        raise DimensionError("mismatched variable counts")
    n, r = module.nvars, module.rank
    zero = Poly.zero(n)
    for a in range(r):
        basis = tuple(Poly.constant(n, 1) if b == a else zero for b in range(r))
        for i in range(n):
            x_i = structure.coordinate(i)
            for j in range(i + 1, n):
                x_j = structure.coordinate(j)
                lhs_ij = bracket_vector(
                    module, structure, bracket_vector(module, structure, basis, x_i), x_j
                )
                lhs_ji = bracket_vector(
                    module, structure, bracket_vector(module, structure, basis, x_j), x_i
                )
                rhs = bracket_vector(module, structure, basis, structure.bracket(x_i, x_j))
                disc = tuple(
                    r_b - l_ij + l_ji for r_b, l_ij, l_ji in zip(rhs, lhs_ij, lhs_ji)
                )
                if any(not p.is_zero() for p in disc):
                    return (a, i, j, disc)
    return None


def flatness_defect(module: PoissonModule, structure: PoissonStructure):
    structure._require_jacobi()
    return flatness_defect_unverified(module, structure)


def check_flat(module: PoissonModule, structure: PoissonStructure) -> bool:
    return flatness_defect(module, structure) is None


def verify_flat(module: PoissonModule, structure: PoissonStructure) -> PoissonModule:
    """Return a flat-verified copy, or raise FlatnessError with a witness."""
    witness = flatness_defect(module, structure)
    if witness is not None:
        raise FlatnessError(witness)
    return PoissonModule(module.nvars, module.rank, module.brackets, flat_verified=True)


# ----------------------------------------------------------------------
# twisting


def twist(module: PoissonModule, structure: PoissonStructure, phi: MultiVector,
          *, unchecked: bool = False) -> PoissonModule:
    """Twist the bracket by a Poisson vector field: {w,f} + w phi(f).

    On bracket matrices this is B_i -> B_i + phi(x_i) I. The preconditions
    (phi Poisson, module flat) are enforced eagerly; ``unchecked=True`` is
    the experimental escape hatch and leaves the result unverified.
    """
    if phi.nvars != module.nvars:
        raise DimensionError("mismatched variable counts")
    if not unchecked:
        structure.require_poisson_field(phi)
        if not module.flat_verified:
            witness = flatness_defect(module, structure)
            if witness is not None:
                raise FlatnessError(witness)
    n, r = module.nvars, module.rank
    new = []
    for i in range(n):
        value = phi.evaluate(structure.coordinate(i))
        matrix = [list(row) for row in module.brackets[i]]
        for a in range(r):
            matrix[a][a] = matrix[a][a] + value
        new.append(tuple(tuple(row) for row in matrix))
    return PoissonModule(n, r, tuple(new), flat_verified=not unchecked)


def elw_connection(structure: PoissonStructure, mu: VolumeForm) -> PoissonModule:
    """The canonical flat connection on top forms, built from its formula.

    The rank-1 module models Omega^n in the mu-trivialization. The
    connection is nabla_omega(s) = omega ^ d(iota_pi s); reading
    nabla_{dx_i}(mu) = Gamma_i mu off that formula gives the bracket entry
    B_i = -Gamma_i. Constructed independently of twisting so the identity
    with twist(trivial, modular field) stays a theorem, not a tautology;
    flatness is still verified eagerly here.
    """
    structure._require_jacobi()
    n = structure.nvars
    mu_form = mu.form(n)
    top = tuple(range(n))
    contracted = interior_product(structure.bivector, mu_form)
    gammas = []
    for i in range(n):
        dx_i = Form(n, 1, {(i,): Poly.constant(n, 1)})
        nabla = dx_i.wedge(contracted.d())
        gamma = nabla.coefficient(top).scale(1 / mu.coefficient)
        gammas.append(((gamma,),))
    module = PoissonModule.from_connection(n, 1, tuple(gammas))
    return verify_flat(module, structure)
