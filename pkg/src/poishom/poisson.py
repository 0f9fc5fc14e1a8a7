"""Poisson bivectors, brackets, Hamiltonian fields and modular vector fields.

Sign conventions, fixed once and pinned by tests because the duality
theorem depends on them:

* the bracket is {f,g} = pi(df,dg);
* the Hamiltonian field of f is X_f = -pi#(df), so X_f(g) = {g,f};
* the degree -1 differential on forms is bnd = iota_pi d - d iota_pi;
* the modular field solves bnd(mu) = iota_phi(mu).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .calculus import Form, MultiVector, interior_product, lie_derivative
from .errors import DimensionError, JacobiError, PoissonFieldError
from .poly import Poly


@dataclass(frozen=True)
class VolumeForm:
    """mu = coefficient * dx_1 ^ ... ^ dx_n with a nonzero rational constant.

    In the polynomial model the units of the coefficient ring are exactly
    the nonzero constants, so nothing more general qualifies as a volume.
    """

    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        value = self.coefficient
        if isinstance(value, int):
            object.__setattr__(self, "coefficient", Fraction(value))
        if not self.coefficient:
            raise ValueError("a volume form needs a nonzero coefficient")

    def form(self, nvars: int) -> Form:
        top = tuple(range(nvars))
        return Form(nvars, nvars, {top: Poly.constant(nvars, self.coefficient)})


class PoissonStructure:
    """A bivector field together with its Jacobi verification status.

    The Jacobi identity is checked on construction by expanding the
    jacobiator on all coordinate triples; this suffices because the
    jacobiator of a biderivation bracket is a triderivation, hence
    determined by its coordinate values. On failure the witness triple and
    its nonzero jacobiator are retained (and raised unless
    ``require_jacobi=False``).
    """

    __slots__ = ("bivector", "nvars", "jacobi_verified", "jacobi_witness")

    def __init__(self, bivector: MultiVector, *, require_jacobi: bool = True):
        if not isinstance(bivector, MultiVector):
            raise TypeError("expected a MultiVector")
        if bivector.degree != 2 and not bivector.is_zero():
            raise DimensionError("a Poisson structure is a bivector (degree 2)")
        if bivector.degree != 2:
            bivector = MultiVector.zero(bivector.nvars, 2)
        object.__setattr__(self, "bivector", bivector)
        object.__setattr__(self, "nvars", bivector.nvars)
        witness = self._jacobi_witness()
        object.__setattr__(self, "jacobi_witness", witness)
        object.__setattr__(self, "jacobi_verified", witness is None)
        if require_jacobi and witness is not None:
            raise JacobiError(witness)

    def __setattr__(self, name, value):
        raise AttributeError("PoissonStructure is immutable")

    @classmethod
    def from_components(cls, nvars: int, components: dict, **kwargs) -> "PoissonStructure":
        """Build from {(i, j): Poly} with i < j (0-based coordinates)."""
        terms = {}
        for (i, j), poly in components.items():
            if not 0 <= i < j < nvars:
                raise DimensionError(f"bad coordinate pair ({i}, {j})")
            terms[(i, j)] = poly
        return cls(MultiVector(nvars, 2, terms), **kwargs)

    # ------------------------------------------------------------------

    def coordinate(self, i: int) -> Poly:
        return Poly.variable(self.nvars, i)

    def bracket(self, f: Poly, g: Poly) -> Poly:
        """{f,g} = pi(df,dg) = sum over components p_ij (f_i g_j - f_j g_i)."""
        out = Poly._raw(self.nvars, {})
        for (i, j), p in self.bivector.terms.items():
            piece = f.partial(i) * g.partial(j) - f.partial(j) * g.partial(i)
            if not piece.is_zero():
                out = out + p * piece
        return out

    def jacobiator(self, f: Poly, g: Poly, h: Poly) -> Poly:
        """{{f,g},h} + {{g,h},f} + {{h,f},g}; zero iff Jacobi holds on (f,g,h)."""
        return (
            self.bracket(self.bracket(f, g), h)
            + self.bracket(self.bracket(g, h), f)
            + self.bracket(self.bracket(h, f), g)
        )

    def _jacobi_witness(self):
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                for k in range(j + 1, self.nvars):
                    jac = self.jacobiator(
                        self.coordinate(i), self.coordinate(j), self.coordinate(k)
                    )
                    if not jac.is_zero():
                        return (i, j, k, jac)
        return None

    def check_jacobi(self) -> bool:
        return self.jacobi_verified

    def _require_jacobi(self):
        if not self.jacobi_verified:
            raise JacobiError(self.jacobi_witness)

    # ------------------------------------------------------------------

    def sharp(self, alpha: Form) -> MultiVector:
        """The anchor pi#: 1-forms to vector fields, pi#(a)(dg) = pi(a,dg)."""
        if alpha.degree != 1 and not alpha.is_zero():
            raise DimensionError("sharp expects a 1-form")
        if alpha.nvars != self.nvars:
            raise DimensionError("mismatched variable counts")
        out = {}

        def add(index, poly):
            key = (index,)
            acc = out.get(key)
            acc = poly if acc is None else acc + poly
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc

        for (i, j), p in self.bivector.terms.items():
            a_i = alpha.coefficient((i,))
            a_j = alpha.coefficient((j,))
            if not a_i.is_zero():
                add(j, p * a_i)
            if not a_j.is_zero():
                add(i, -(p * a_j))
        return MultiVector(self.nvars, 1, out)

    def hamiltonian(self, f: Poly) -> MultiVector:
        """X_f = -pi#(df); as a derivation X_f(g) = {g,f}."""
        self._require_jacobi()
        df = Form(self.nvars, 1, {(i,): f.partial(i) for i in range(self.nvars)})
        return -self.sharp(df)

    # ------------------------------------------------------------------

    def koszul_differential(self, omega: Form) -> Form:
        """The degree -1 operator iota_pi d - d iota_pi on forms."""
        self._require_jacobi()
        if omega.nvars != self.nvars:
            raise DimensionError("mismatched variable counts")
        return interior_product(self.bivector, omega.d()) - interior_product(
            self.bivector, omega
        ).d()

    def modular_vector_field(self, mu: VolumeForm) -> MultiVector:
        """The unique vector field phi with bnd(mu) = iota_phi(mu).

        Solved by inverting the top-degree contraction: the coefficient of
        dx_{1..n drop i} in bnd(mu) equals (-1)^i u phi_i (0-based i).
        The result is cross-validated against the Lie-derivative
        characterization L_{X_{x_i}} mu = phi(x_i) mu on every coordinate.
        """
        self._require_jacobi()
        n = self.nvars
        mu_form = mu.form(n)
        boundary = self.koszul_differential(mu_form)
        out = {}
        full = tuple(range(n))
        for i in range(n):
            complement = tuple(j for j in full if j != i)
            c = boundary.coefficient(complement)
            if c.is_zero():
                continue
            sign = -1 if i % 2 else 1
            out[(i,)] = c.scale(Fraction(sign, 1) / mu.coefficient)
        phi = MultiVector(n, 1, out)
        for i in range(n):
            x_i = self.coordinate(i)
            lhs = lie_derivative(self.hamiltonian(x_i), mu_form)
            rhs = mu_form.scale(phi.evaluate(x_i))
            if lhs != rhs:
                raise RuntimeError(
                    "modular field cross-check failed on coordinate "
                    f"{i + 1}: Lie derivative gives {lhs}, expected {rhs}"
                )
        return phi

    # ------------------------------------------------------------------

    def poisson_field_defect(self, phi: MultiVector):
        """Witness that phi fails to be a Poisson vector field, or None.

        phi is Poisson iff phi({f,g}) = {phi f, g} + {f, phi g}; checking
        coordinate pairs suffices because the defect is a biderivation.
        """
        if phi.degree != 1 and not phi.is_zero():
            raise DimensionError("expected a vector field (degree 1)")
        if phi.nvars != self.nvars:
            raise DimensionError("mismatched variable counts")
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                x_i, x_j = self.coordinate(i), self.coordinate(j)
                defect = (
                    phi.evaluate(self.bracket(x_i, x_j))
                    - self.bracket(phi.evaluate(x_i), x_j)
                    - self.bracket(x_i, phi.evaluate(x_j))
                )
                if not defect.is_zero():
                    return (i, j, defect)
        return None

    def is_poisson_vector_field(self, phi: MultiVector) -> bool:
        self._require_jacobi()
        return self.poisson_field_defect(phi) is None

    def require_poisson_field(self, phi: MultiVector):
        self._require_jacobi()
        defect = self.poisson_field_defect(phi)
        if defect is not None:
            raise PoissonFieldError(defect)

    # ------------------------------------------------------------------

    def homogeneous_degree(self):
        """Common coefficient degree of the bivector (None when pi = 0).

        Raises ValueError when the coefficients are not all homogeneous of
        one degree; graded mode is then unavailable.
        """
        degrees = set()
        for poly in self.bivector.terms.values():
            degrees.add(poly.homogeneous_degree())
        if not degrees:
            return None
        if len(degrees) > 1:
            raise ValueError("bivector coefficients have mixed degrees")
        return degrees.pop()

    def __eq__(self, other):
        if not isinstance(other, PoissonStructure):
            return NotImplemented
        return self.bivector == other.bivector

    def __hash__(self):
        return hash(("PoissonStructure", self.bivector))

    def __repr__(self):
        return f"PoissonStructure({self.bivector.text()!r})"
