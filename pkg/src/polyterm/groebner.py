"""Multivariate division, Buchberger's algorithm, and ideal membership.

All computations run under DEGLEX.  Bases returned by `groebner` are
reduced and monic, hence canonical: equal ideals give equal PolySets,
which is what the fixpoint detection in the analysis engine relies on.

Radical membership (does f vanish on the complex zero set of P?) uses the
Rabinowitsch trick: adjoin a fresh variable y and test whether
1 lies in <P, 1 - y*f>.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ResourceLimitExceeded
from .polynomials import (
    Exponents,
    Order,
    PolySet,
    Polynomial,
    monomial_div,
    monomial_divides,
    monomial_key,
    monomial_lcm,
    monomial_mul,
)


@dataclass(frozen=True)
class Limits:
    """Resource caps turning runaway computations into explicit errors."""

    max_degree: int = 512
    max_terms: int = 200_000
    max_basis: int = 10_000
    max_product: int = 200_000


DEFAULT_LIMITS = Limits()


def _require_deglex(order: Order) -> None:
    # LEX is kept for equal-degree comparisons only; division and Buchberger
    # always run under the graded order.
    if order is not Order.DEGLEX:
        raise ValueError("division and Groebner bases are computed under DEGLEX only")


def _same_dimension(polys: Sequence[Polynomial]) -> int:
    d = polys[0].dimension
    for p in polys:
        if p.dimension != d:
            raise DimensionMismatch("polynomials live in different rings")
    return d


def reduce(f: Polynomial, divisors, order: Order = Order.DEGLEX,
           limits: Limits = DEFAULT_LIMITS) -> Polynomial:
    """Full normal form of f modulo a finite set of divisors.

    No monomial of the result is divisible by any divisor's leading
    monomial, and f minus the result lies in the ideal generated by the
    divisors.  Divisors are tried in a fixed deterministic order, so the
    result is a function of (f, set of divisors) only.
    """
    _require_deglex(order)
    divs = [g for g in divisors if not g.is_zero]
    if not divs:
        raise ValueError("reduce needs at least one nonzero divisor")
    d = _same_dimension([f] + divs)
    if f.is_zero:
        return f
    divs.sort(key=lambda g: (monomial_key(g.leading_monomial(), Order.DEGLEX),
                             g.sort_key()))
    div_data = [(g.leading_monomial(), g.leading_coefficient(), g.terms) for g in divs]

    work = dict(f.terms)
    remainder: dict[Exponents, Fraction] = {}
    # Max-heap over monomials via negated DEGLEX keys; entries may be stale.
    heap = [(-sum(m), tuple(-e for e in m), m) for m in work]
    heapq.heapify(heap)

    def push(m: Exponents) -> None:
        heapq.heappush(heap, (-sum(m), tuple(-e for e in m), m))

    while heap:
        m = heapq.heappop(heap)[2]
        c = work.pop(m, None)
        if c is None:
            continue  # stale entry
        for lm, lc, terms in div_data:
            if monomial_divides(lm, m):
                shift = monomial_div(m, lm)
                factor = c / lc
                for m2, c2 in terms.items():
                    if m2 == lm:
                        continue
                    mm = monomial_mul(m2, shift)
                    prev = work.get(mm)
                    if prev is None:
                        work[mm] = -factor * c2
                        push(mm)
                    else:
                        s = prev - factor * c2
                        if s:
                            work[mm] = s
                        else:
                            del work[mm]
                if len(work) + len(remainder) > limits.max_terms:
                    raise ResourceLimitExceeded(
                        f"more than {limits.max_terms} terms during reduction")
                break
        else:
            remainder[m] = c
    return Polynomial(d, remainder)


def s_polynomial(f: Polynomial, g: Polynomial, order: Order = Order.DEGLEX) -> Polynomial:
    """S-polynomial: the cancellation of the two leading terms at their lcm."""
    _require_deglex(order)
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = monomial_lcm(lf, lg)
    mf = Polynomial.monomial(f.dimension, monomial_div(lcm, lf),
                             Fraction(1) / f.leading_coefficient())
    mg = Polynomial.monomial(g.dimension, monomial_div(lcm, lg),
                             Fraction(1) / g.leading_coefficient())
    return mf * f - mg * g


def _interreduce(polys: list[Polynomial], limits: Limits) -> list[Polynomial]:
    """Performance pre-pass: reduce generators against each other, drop zeros.

    Accumulates in ascending order so large generators collapse against the
    small staircase quickly.  Passes are bounded; full canonical reduction
    happens in `_reduce_basis` at the end of Buchberger.
    """
    current = sorted({p.monic() for p in polys if not p.is_zero},
                     key=Polynomial.sort_key)
    for _ in range(8):
        out: list[Polynomial] = []
        changed = False
        for p in current:
            r = reduce(p, out, limits=limits) if out else p
            if r.is_zero:
                changed = True
                continue
            r = r.monic()
            if r != p:
                changed = True
            out.append(r)
        current = sorted(out, key=Polynomial.sort_key)
        if not changed:
            break
    return current


def groebner(polys: Iterable[Polynomial] | PolySet, order: Order = Order.DEGLEX,
             limits: Limits = DEFAULT_LIMITS) -> PolySet:
    """Reduced Groebner basis of the ideal generated by the input.

    Buchberger with the coprime and chain criteria and normal pair
    selection, followed by inter-reduction and monic normalisation.  The
    output is canonical: any basis of the same ideal yields the same
    PolySet (flagged `is_reduced_groebner`).
    """
    _require_deglex(order)
    if isinstance(polys, PolySet) and polys.is_reduced_groebner and polys.order is order:
        return polys
    items = [p for p in polys if not p.is_zero]
    if not items:
        raise ValueError("cannot take a Groebner basis of the zero set of generators")
    _same_dimension(items)

    basis = _interreduce(items, limits)

    lms = [g.leading_monomial() for g in basis]
    # Normal selection: smallest lcm first (by degree, then LEX, then indices).
    heap: list[tuple[int, Exponents, int, int]] = []
    for j in range(len(basis)):
        for i in range(j):
            lcm = monomial_lcm(lms[i], lms[j])
            heap.append((sum(lcm), lcm, i, j))
    heapq.heapify(heap)
    done: set[tuple[int, int]] = set()

    while heap:
        _, lcm, i, j = heapq.heappop(heap)
        ij = (i, j)
        if ij in done:
            continue
        done.add(ij)
        li, lj = lms[i], lms[j]
        # Coprime leading monomials: S-polynomial reduces to zero.
        if sum(lcm) == sum(li) + sum(lj):
            continue
        # Chain criterion: a third element divides the lcm and both of its
        # pairs with i and j were already handled.
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if monomial_divides(lms[k], lcm):
                p1 = (min(i, k), max(i, k))
                p2 = (min(j, k), max(j, k))
                if p1 in done and p2 in done:
                    skip = True
                    break
        if skip:
            continue
        r = reduce(s_polynomial(basis[i], basis[j]), basis, limits=limits)
        if r.is_zero:
            continue
        if r.degree > limits.max_degree:
            raise ResourceLimitExceeded(
                f"basis element of degree {r.degree} exceeds cap {limits.max_degree}")
        if len(basis) >= limits.max_basis:
            raise ResourceLimitExceeded(
                f"basis grew past {limits.max_basis} elements")
        r = r.monic()
        basis.append(r)
        new_lm = r.leading_monomial()
        lms.append(new_lm)
        new = len(basis) - 1
        for k in range(new):
            lcm_k = monomial_lcm(lms[k], new_lm)
            heapq.heappush(heap, (sum(lcm_k), lcm_k, k, new))

    return PolySet(_reduce_basis(basis, limits),
                   is_reduced_groebner=True, order=order)


def _reduce_basis(basis: list[Polynomial], limits: Limits) -> list[Polynomial]:
    """Minimalise (drop redundant leading monomials) then fully reduce."""
    basis = sorted(dict.fromkeys(basis), key=Polynomial.sort_key)
    lms = [g.leading_monomial() for g in basis]
    keep: list[int] = []
    for i, lm in enumerate(lms):
        redundant = False
        for j, other in enumerate(lms):
            if i == j:
                continue
            if monomial_divides(other, lm) and (other != lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    minimal = [basis[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        rest = minimal[:i] + minimal[i + 1:]
        r = reduce(g, rest, limits=limits) if rest else g
        reduced.append(r.monic())
    return reduced


def ideal_member(f: Polynomial, generators, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff f lies in the ideal generated by the given polynomials."""
    basis = groebner(generators, limits=limits)
    if f.dimension != basis.dimension:
        raise DimensionMismatch("membership test across different rings")
    if f.is_zero:
        return True
    return reduce(f, basis, limits=limits).is_zero


def _extend_ring(p: Polynomial, extra: int) -> Polynomial:
    """Reinterpret p inside a ring with `extra` fresh trailing variables."""
    pad = (0,) * extra
    return Polynomial(p.dimension + extra, {m + pad: c for m, c in p.terms.items()})


def radical_member(f: Polynomial, generators, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff f vanishes on the complex zero set of the generators.

    Decided over an algebraically closed field via the Nullstellensatz:
    f is in the radical iff 1 is in <generators, 1 - y*f> for a fresh y.
    """
    gens = [g for g in generators if not g.is_zero]
    if not gens:
        raise ValueError("radical membership needs at least one nonzero generator")
    d = _same_dimension(gens)
    if f.dimension != d:
        raise DimensionMismatch("membership test across different rings")
    if f.is_zero:
        return True
    # Cheap sufficient check first: plain membership implies radical membership.
    if reduce(f, groebner(gens, limits=limits), limits=limits).is_zero:
        return True
    extended = [_extend_ring(g, 1) for g in gens]
    y = Polynomial.variable(d + 1, d)
    saturator = Polynomial.constant(d + 1, 1) - y * _extend_ring(f, 1)
    return ideal_is_trivial(extended + [saturator], limits=limits)


def ideal_is_trivial(generators, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff 1 lies in the generated ideal (empty complex zero set)."""
    gens = [g for g in generators if not g.is_zero]
    if not gens:
        return False
    basis = groebner(gens, limits=limits)
    one = Polynomial.constant(basis.dimension, 1)
    return len(basis) == 1 and basis.polynomials[0] == one


def set_product(sets: Sequence[PolySet | Sequence[Polynomial]],
                limits: Limits = DEFAULT_LIMITS) -> PolySet:
    """All products choosing exactly one polynomial from each input set."""
    factor_lists = [sorted(dict.fromkeys(s), key=Polynomial.sort_key) for s in sets]
    if not factor_lists or any(not fl for fl in factor_lists):
        raise ValueError("set_product needs nonempty factor sets")
    size = 1
    for fl in factor_lists:
        size *= len(fl)
        if size > limits.max_product:
            raise ResourceLimitExceeded(
                f"product set of {size}+ polynomials exceeds cap {limits.max_product}")
    products = factor_lists[0]
    for fl in factor_lists[1:]:
        nxt = []
        seen = set()
        for p in products:
            for q in fl:
                pq = p * q
                if len(pq.terms) > limits.max_terms:
                    raise ResourceLimitExceeded(
                        f"product polynomial with more than {limits.max_terms} terms")
                if pq not in seen:
                    seen.add(pq)
                    nxt.append(pq)
        products = nxt
    return PolySet(products)
