"""Sparse multivariate polynomials over Q, monomial orders, and maps.

A monomial is a tuple of natural exponents, one per ring variable.  A
polynomial is a dict from monomial to nonzero Fraction; the dict is never
mutated after construction, so polynomials are hashable values that can be
shared freely.  Two orders are provided: LEX (plain lexicographic, first
variable most significant) and DEGLEX (total degree first, LEX tie-break).
DEGLEX is the working order for division and Groebner bases; LEX is used
by the chain-length combinatorics to pick extremal monomials of equal
degree.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch

Exponents = tuple[int, ...]


class Order(enum.Enum):
    """Monomial order selector."""

    LEX = "lex"
    DEGLEX = "deglex"


def monomial_degree(m: Exponents) -> int:
    return sum(m)


def monomial_key(m: Exponents, order: Order = Order.DEGLEX):
    """Sort key; larger key means larger monomial under the order."""
    if order is Order.LEX:
        return m
    return (sum(m), m)


def compare_monomials(m1: Exponents, m2: Exponents, order: Order = Order.DEGLEX) -> int:
    """Three-way comparison: -1 if m1 < m2, 0 if equal, 1 if m1 > m2."""
    if len(m1) != len(m2):
        raise DimensionMismatch(f"monomials of length {len(m1)} and {len(m2)}")
    k1, k2 = monomial_key(m1, order), monomial_key(m2, order)
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


def monomial_mul(m1: Exponents, m2: Exponents) -> Exponents:
    return tuple(a + b for a, b in zip(m1, m2))


def monomial_divides(m1: Exponents, m2: Exponents) -> bool:
    """True iff m1 divides m2 (componentwise <=)."""
    return all(a <= b for a, b in zip(m1, m2))


def monomial_div(m1: Exponents, m2: Exponents) -> Exponents:
    """m1 / m2; caller must ensure divisibility."""
    return tuple(a - b for a, b in zip(m1, m2))


def monomial_lcm(m1: Exponents, m2: Exponents) -> Exponents:
    return tuple(max(a, b) for a, b in zip(m1, m2))


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"coefficients must be exact rationals, got {type(value).__name__}")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("dimension", "terms", "degree", "_hash", "_sort_key")

    def __init__(self, dimension: int, terms: Mapping[Exponents, Fraction] | None = None):
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != dimension:
                    raise DimensionMismatch(
                        f"monomial of length {len(m)} in a {dimension}-variable ring")
                c = _coerce(c)
                if c != 0:
                    clean[m] = c
        self.dimension = dimension
        self.terms = clean
        self.degree = max((sum(m) for m in clean), default=-1)
        self._hash = None
        self._sort_key = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value) -> "Polynomial":
        return cls(dimension, {(0,) * dimension: _coerce(value)})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        exps = tuple(1 if i == index else 0 for i in range(dimension))
        return cls(dimension, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, dimension: int, exps: Exponents, coefficient=1) -> "Polynomial":
        return cls(dimension, {tuple(exps): _coerce(coefficient)})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def leading_monomial(self, order: Order = Order.DEGLEX) -> Exponents:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return max(self.terms, key=lambda m: monomial_key(m, order))

    def leading_coefficient(self, order: Order = Order.DEGLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dimension, Fraction(0))

    def monic(self, order: Order = Order.DEGLEX) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return Polynomial(self.dimension, {m: c / lc for m, c in self.terms.items()})

    def sort_key(self):
        """Total deterministic key: DEGLEX-descending term list with coefficients."""
        if self._sort_key is None:
            items = sorted(self.terms.items(),
                           key=lambda mc: monomial_key(mc[0], Order.DEGLEX),
                           reverse=True)
            self._sort_key = tuple(
                (monomial_key(m, Order.DEGLEX), c.numerator, c.denominator)
                for m, c in items)
        return self._sort_key

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.dimension != other.dimension:
            raise DimensionMismatch(
                f"polynomials in {self.dimension} and {other.dimension} variables")

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, 0) + c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Polynomial(self.dimension, res)

    def __sub__(self, other):
        other = self._lift(other)
        self._check(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, 0) - c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Polynomial(self.dimension, res)

    def __neg__(self):
        return Polynomial(self.dimension, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
            if other == 0:
                return Polynomial.zero(self.dimension)
            return Polynomial(self.dimension,
                              {m: c * other for m, c in self.terms.items()})
        self._check(other)
        res: dict[Exponents, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = res.get(m, 0) + c1 * c2
                if s:
                    res[m] = s
                else:
                    res.pop(m, None)
        return Polynomial(self.dimension, res)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative polynomial powers are not defined")
        result = Polynomial.constant(self.dimension, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def _lift(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dimension, other)
        return other

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.dimension:
            raise DimensionMismatch(
                f"point of length {len(point)} for a {self.dimension}-variable ring")
        coords = [_coerce(x) for x in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            v = coeff
            for x, e in zip(coords, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Polynomial)
                and self.dimension == other.dimension
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dimension, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- printing ----------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = default_variable_names(self.dimension)
        parts = []
        for m in sorted(self.terms, key=lambda m: monomial_key(m, Order.DEGLEX),
                        reverse=True):
            c = self.terms[m]
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.dimension}, {self.to_string()!r})"


def default_variable_names(dimension: int) -> list[str]:
    return [f"x{i + 1}" for i in range(dimension)]


class PolyMap:
    """A vector of d polynomials in d variables: a polynomial self-map of K^d."""

    __slots__ = ("dimension", "components")

    def __init__(self, components: Sequence[Polynomial]):
        components = tuple(components)
        if not components:
            raise ValueError("a polynomial map needs at least one component")
        d = components[0].dimension
        for p in components:
            if p.dimension != d:
                raise DimensionMismatch("map components live in different rings")
        if len(components) != d:
            raise DimensionMismatch(
                f"{len(components)} components for a {d}-variable ring")
        self.dimension = d
        self.components = components

    @classmethod
    def identity(cls, dimension: int) -> "PolyMap":
        return cls([Polynomial.variable(dimension, i) for i in range(dimension)])

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.components)

    def apply(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"PolyMap({[p.to_string() for p in self.components]})"


def compose(p: Polynomial, mapping: PolyMap) -> Polynomial:
    """Substitute mapping's components for the variables of p.

    evaluate(compose(p, A), v) == evaluate(p, A.apply(v)) for every point v.
    """
    if p.dimension != mapping.dimension:
        raise DimensionMismatch(
            f"polynomial in {p.dimension} variables, map in {mapping.dimension}")
    d = p.dimension
    # Powers of each component, computed once per needed exponent.
    pow_cache: list[dict[int, Polynomial]] = [dict() for _ in range(d)]

    def power(i: int, e: int) -> Polynomial:
        cache = pow_cache[i]
        got = cache.get(e)
        if got is None:
            if e == 1:
                got = mapping.components[i]
            else:
                half = power(i, e // 2)
                got = half * half
                if e & 1:
                    got = got * mapping.components[i]
            cache[e] = got
        return got

    total = Polynomial.zero(d)
    for exps, coeff in p.terms.items():
        term = Polynomial.constant(d, coeff)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


class PolySet:
    """A finite, duplicate-free, deterministically ordered set of polynomials.

    Used both as an ideal basis and as a generating set of an algebraic set.
    `is_reduced_groebner` marks sets produced (and verified) by the Groebner
    routine; for those `order` records the monomial order used.
    """

    __slots__ = ("polynomials", "dimension", "is_reduced_groebner", "order", "_set")

    def __init__(self, polynomials: Iterable[Polynomial],
                 is_reduced_groebner: bool = False,
                 order: Order | None = None,
                 dimension: int | None = None):
        unique: dict[Polynomial, None] = {}
        for p in polynomials:
            unique.setdefault(p, None)
        polys = sorted(unique, key=Polynomial.sort_key)
        if polys:
            d = polys[0].dimension
            if dimension is not None and dimension != d:
                raise DimensionMismatch("stated dimension disagrees with members")
        elif dimension is None:
            raise ValueError("an empty PolySet needs an explicit dimension")
        else:
            d = dimension
        for p in polys:
            if p.dimension != d:
                raise DimensionMismatch("set members live in different rings")
        self.polynomials = tuple(polys)
        self.dimension = d
        self.is_reduced_groebner = is_reduced_groebner
        self.order = order
        self._set = frozenset(polys)

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.polynomials), default=-1)

    def __iter__(self):
        return iter(self.polynomials)

    def __len__(self):
        return len(self.polynomials)

    def __contains__(self, p):
        return p in self._set

    def __eq__(self, other):
        return isinstance(other, PolySet) and self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def union(self, extra: Iterable[Polynomial]) -> "PolySet":
        return PolySet(list(self.polynomials) + list(extra), dimension=self.dimension)

    def vanishes_at(self, point: Sequence) -> bool:
        """True iff every member evaluates to zero at the point."""
        return all(p.evaluate(point) == 0 for p in self.polynomials)

    def to_strings(self, names: Sequence[str] | None = None) -> list[str]:
        return [p.to_string(names) for p in self.polynomials]

    def __repr__(self):
        flag = ", reduced" if self.is_reduced_groebner else ""
        return f"PolySet({self.to_strings()}{flag})"
