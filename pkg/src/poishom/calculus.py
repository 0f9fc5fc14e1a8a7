"""Coordinate exterior calculus on polynomial R^n.

Differential forms and multivector fields are stored as sparse maps from
strictly increasing tuples of 0-based variable indices to ``Poly``
coefficients: a form is sum of ``c_I dx_I`` and a multivector is a sum of
``c_I Dx_I`` (``Dx_i`` denoting the coordinate derivation d/dx_i).

Module-valued elements of rank r are plain r-tuples of forms (chain side,
elements of W (x) Omega^q) or of multivectors (cochain side, multiderivations
with values in the free module W); this componentwise representation is the
coordinate form of the isomorphism between W (x) X^k and multiderivations
with values in W.

Degree bookkeeping: operations that would land outside 0..n (contracting
more than is available, differentiating a top form) return a canonical zero
element whose ``degree`` is clamped into range. Addition treats a zero
element as compatible with any degree, so such results flow through sums
without special-casing by the caller.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError
from .poly import Poly


def wedge_indices(left: tuple, right: tuple):
    """Merge two increasing index tuples; returns (sign, merged) or None.

    None signals a repeated index (the wedge vanishes). The sign counts the
    transpositions needed to sort the concatenation.
    """
    if set(left) & set(right):
        return None
    merged = left + right
    inversions = 0
    for i, a in enumerate(merged):
        for b in merged[i + 1 :]:
            if a > b:
                inversions += 1
    return (-1 if inversions % 2 else 1, tuple(sorted(merged)))


def subset_sign(sub: tuple, full: tuple):
    """Sign of the shuffle moving ``sub`` to the front of ``full``.

    Both tuples are strictly increasing and ``sub`` must be contained in
    ``full``; returns None if it is not. The sign is (-1)**sum(p_t - t) over
    the positions p_t of the entries of ``sub`` inside ``full``.
    """
    positions = []
    cursor = 0
    for s in sub:
        while cursor < len(full) and full[cursor] != s:
            cursor += 1
        if cursor == len(full):
            return None
        positions.append(cursor)
        cursor += 1
    total = sum(p - t for t, p in enumerate(positions))
    return -1 if total % 2 else 1


class _Alternating:
    """Shared sparse storage for forms and multivectors."""

    __slots__ = ("nvars", "degree", "terms")
    _basis_symbol = "?"

    def __init__(self, nvars: int, degree: int, terms: Mapping | Iterable = ()):
        if nvars < 1:
            raise DimensionError("nvars must be a positive integer")
        if not 0 <= degree <= nvars:
            raise DimensionError(f"degree {degree} out of range 0..{nvars}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        canon = {}
        for idx, poly in items:
            idx = tuple(idx)
            if len(idx) != degree:
                raise DimensionError(f"index tuple {idx} does not have degree {degree}")
            if any(not 0 <= i < nvars for i in idx) or any(
                idx[t] >= idx[t + 1] for t in range(len(idx) - 1)
            ):
                raise DimensionError(f"index tuple {idx} not strictly increasing in range")
            if not isinstance(poly, Poly):
                raise TypeError("coefficients must be Poly values")
            if poly.nvars != nvars:
                raise DimensionError("coefficient variable count mismatch")
            if poly.is_zero():
                continue
            acc = canon.get(idx)
            canon[idx] = poly if acc is None else acc + poly
            if canon[idx].is_zero():
                del canon[idx]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def _raw(cls, nvars: int, degree: int, terms: dict):
        # internal fast path: ``terms`` must already be canonical
        self = object.__new__(cls)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", terms)
        return self

    @classmethod
    def zero(cls, nvars: int, degree: int):
        """Canonical zero element; the degree is clamped into 0..nvars."""
        return cls(nvars, min(max(degree, 0), nvars))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, idx: Sequence[int]) -> Poly:
        return self.terms.get(tuple(idx), Poly.zero(self.nvars))

    def _check_addable(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.nvars != other.nvars:
            raise DimensionError("mismatched variable counts")

    def __add__(self, other):
        self._check_addable(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise DimensionError(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self.terms)
        for idx, poly in other.terms.items():
            acc = out.get(idx)
            acc = poly if acc is None else acc + poly
            if acc.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = acc
        return type(self)._raw(self.nvars, self.degree, out)

    def __neg__(self):
        return type(self)._raw(
            self.nvars, self.degree, {i: -p for i, p in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        """Multiply every coefficient by a Poly or rational scalar."""
        if isinstance(value, (int, Fraction)):
            if not value:
                return type(self)._raw(self.nvars, self.degree, {})
            return type(self)._raw(
                self.nvars, self.degree,
                {i: p.scale(value) for i, p in self.terms.items()},
            )
        if value.is_zero():
            return type(self)._raw(self.nvars, self.degree, {})
        return type(self)._raw(
            self.nvars, self.degree, {i: p * value for i, p in self.terms.items()}
        )

    def wedge(self, other):
        """Exterior product with another element of the same kind."""
        self._check_addable(other)
        total = self.degree + other.degree
        if total > self.nvars:
            return type(self).zero(self.nvars, total)
        out = {}
        for i1, p1 in self.terms.items():
            for i2, p2 in other.terms.items():
                merged = wedge_indices(i1, i2)
                if merged is None:
                    continue
                sign, idx = merged
                piece = (p1 * p2).scale(sign)
                acc = out.get(idx)
                acc = piece if acc is None else acc + piece
                if acc.is_zero():
                    out.pop(idx, None)
                else:
                    out[idx] = acc
        return type(self)._raw(self.nvars, total, out)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.is_zero() and other.is_zero():
            return True  # clamped zeros of different degree are the same element
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if self.is_zero():
            return hash((type(self).__name__, self.nvars))
        return hash(
            (type(self).__name__, self.nvars, self.degree, frozenset(self.terms.items()))
        )

    def text(self) -> str:
        if not self.terms:
            return "0"
        sym = self._basis_symbol
        chunks = []
        for idx in sorted(self.terms):
            poly = self.terms[idx]
            basis = "^".join(f"{sym}{i + 1}" for i in idx)
            ptext = poly.text()
            if not basis:
                chunks.append(ptext)
            elif ptext == "1":
                chunks.append(basis)
            elif ptext == "-1":
                chunks.append(f"-{basis}")
            elif " " in ptext:
                chunks.append(f"({ptext})*{basis}")
            else:
                chunks.append(f"{ptext}*{basis}")
        return " + ".join(chunks)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"{type(self).__name__}({self.nvars}, deg={self.degree}, {self.text()!r})"


class Form(_Alternating):
    """A differential form with polynomial coefficients."""

    _basis_symbol = "dx"

    def d(self) -> "Form":
        """Exterior derivative; a top-degree input yields the clamped zero."""
        if self.degree >= self.nvars:
            return Form.zero(self.nvars, self.degree + 1)
        out = {}
        for idx, poly in self.terms.items():
            for i in range(self.nvars):
                dp = poly.partial(i)
                if dp.is_zero():
                    continue
                merged = wedge_indices((i,), idx)
                if merged is None:
                    continue
                sign, key = merged
                piece = dp.scale(sign)
                acc = out.get(key)
                acc = piece if acc is None else acc + piece
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        return Form._raw(self.nvars, self.degree + 1, out)

    @classmethod
    def from_function(cls, poly: Poly) -> "Form":
        return cls(poly.nvars, 0, {(): poly})

    def as_poly(self) -> Poly:
        if self.degree != 0:
            raise DimensionError("only a 0-form is a polynomial")
        return self.coefficient(())


class MultiVector(_Alternating):
    """An alternating multivector field with polynomial coefficients."""

    _basis_symbol = "Dx"

    def evaluate(self, *functions: Poly) -> Poly:
        """Apply the multiderivation to functions: X(df_1, ..., df_k).

        The value on each basis component Dx_J is the Jacobian determinant
        det(df_s/dx_{j_t}).
        """
        if len(functions) != self.degree:
            raise DimensionError(
                f"degree-{self.degree} multivector applied to {len(functions)} arguments"
            )
        k = self.degree
        result = Poly._raw(self.nvars, {})
        if k == 0:
            return result + self.coefficient(())
        if not self.terms:
            return result
        grads = [[f.partial(i) for i in range(self.nvars)] for f in functions]
        for idx, coeff in self.terms.items():
            det = Poly._raw(self.nvars, {})
            for perm in permutations(range(k)):
                prod = grads[0][idx[perm[0]]]
                for s in range(1, k):
                    if prod.is_zero():
                        break
                    prod = prod * grads[s][idx[perm[s]]]
                if prod.is_zero():
                    continue
                det = det + prod.scale(_permutation_sign(perm))
            result = result + det * coeff
        return result


def _permutation_sign(perm) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


class _ModuleElement:
    """An r-tuple of same-shape components over the module basis e_1..e_r."""

    __slots__ = ("components",)
    component_cls = _Alternating

    def __init__(self, components: Sequence, degree: int | None = None):
        components = tuple(components)
        if not components:
            raise DimensionError("module elements need rank >= 1")
        cls = type(self).component_cls
        nvars = components[0].nvars
        for c in components:
            if not isinstance(c, cls):
                raise TypeError(f"components must be {cls.__name__} values")
            if c.nvars != nvars:
                raise DimensionError("mismatched variable counts across components")
        if degree is None:
            degrees = {c.degree for c in components if not c.is_zero()}
            if len(degrees) > 1:
                raise DimensionError(f"components of mixed degrees {sorted(degrees)}")
            degree = degrees.pop() if degrees else components[0].degree
        normalized = []
        for c in components:
            if c.is_zero():
                # clamped zeros from vacuous contractions adopt the common degree
                normalized.append(c if c.degree == degree else cls.zero(nvars, degree))
            elif c.degree != degree:
                raise DimensionError(
                    f"component of degree {c.degree} does not match element degree {degree}"
                )
            else:
                normalized.append(c)
        object.__setattr__(self, "components", tuple(normalized))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, rank: int, nvars: int, degree: int):
        return cls([cls.component_cls.zero(nvars, degree)] * rank)

    @classmethod
    def single(cls, rank: int, section: int, component):
        """The element carrying ``component`` on basis section ``section``."""
        if not 0 <= section < rank:
            raise DimensionError(f"section {section} out of range for rank {rank}")
        zero = cls.component_cls.zero(component.nvars, component.degree)
        return cls([component if a == section else zero for a in range(rank)])

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def degree(self) -> int:
        return self.components[0].degree

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.rank != other.rank:
            raise DimensionError("mismatched ranks")
        return type(self)([a + b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return type(self)([-c for c in self.components])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        return type(self)([c.scale(value) for c in self.components], degree=self.degree)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return len(self.components) == len(other.components) and all(
            a == b for a, b in zip(self.components, other.components)
        )

    def __hash__(self):
        return hash((type(self).__name__, self.components))

    def text(self) -> str:
        return " | ".join(f"e{a + 1}: {c.text()}" for a, c in enumerate(self.components))

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"{type(self).__name__}({self.text()!r})"


class ModuleChainElement(_ModuleElement):
    """An element of W (x) Omega^q for the free rank-r module W."""

    component_cls = Form


class ModuleCochainElement(_ModuleElement):
    """A W-valued multiderivation of degree k, stored componentwise."""

    component_cls = MultiVector

    def evaluate(self, *functions: Poly) -> tuple:
        """Value in W on the given functions, as an r-tuple of Poly."""
        return tuple(c.evaluate(*functions) for c in self.components)


def interior_product(field, omega: Form):
    """Contraction of a form by a multivector (scalar or module-valued).

    For a scalar ``MultiVector`` of degree k the result is a ``Form`` of
    degree q-k; for a ``ModuleCochainElement`` it is the componentwise
    ``ModuleChainElement``. A degree-0 field acts by multiplication, and the
    result is zero when q < k.

    The implementation works directly on index tuples: contracting dx_I by
    Dx_J keeps the terms with J contained in I and multiplies by the shuffle
    sign of J inside I.
    """
    if isinstance(field, ModuleCochainElement):
        return ModuleChainElement(
            [interior_product(c, omega) for c in field.components],
            degree=min(max(omega.degree - field.degree, 0), omega.nvars),
        )
    if not isinstance(field, MultiVector):
        raise TypeError("expected a MultiVector or ModuleCochainElement")
    if not isinstance(omega, Form):
        raise TypeError("expected a Form")
    if field.nvars != omega.nvars:
        raise DimensionError("mismatched variable counts")
    k, q = field.degree, omega.degree
    if k == 0:
        return omega.scale(field.coefficient(()))
    if q < k:
        return Form.zero(omega.nvars, 0)
    out = {}
    for idx_j, a in field.terms.items():
        for idx_i, b in omega.terms.items():
            sign = subset_sign(idx_j, idx_i)
            if sign is None:
                continue
            key = tuple(i for i in idx_i if i not in idx_j)
            piece = (a * b).scale(sign)
            acc = out.get(key)
            acc = piece if acc is None else acc + piece
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    return Form._raw(omega.nvars, q - k, out)


def lie_derivative(vector: MultiVector, omega: Form) -> Form:
    """Lie derivative of a form along a vector field (Cartan's formula)."""
    if vector.degree != 1:
        raise DimensionError("lie_derivative expects a degree-1 field")
    return interior_product(vector, omega.d()) + interior_product(vector, omega).d()


def form_basis(nvars: int, degree: int):
    """Strictly increasing index tuples of the given degree."""
    return list(combinations(range(nvars), degree))
