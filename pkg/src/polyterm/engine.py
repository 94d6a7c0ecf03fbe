"""Fixpoint computation of the non-terminating input set.

The set of inputs on which a loop can run forever is the stable tail of
the descending chain D_0 ⊇ D_1 ⊇ ... of n-step-survivable input sets,
each of which is algebraic.  Two routes compute the fixpoint:

* `nti_groebner` maintains one generating set B and sweeps: every choice
  product of B composed through the branches is reduced against B; any
  nonzero remainder is adjoined and the basis re-reduced.  The returned
  index counts productive sweeps.  Ideal-level stabilisation implies
  variety stabilisation over any field, so the result is sound over both
  the reals and the complex numbers.

* `nti_variety` maintains the per-path constraint sets and detects
  stabilisation of the varieties themselves through complex radical
  membership, which can stop strictly earlier.  It requires complex
  semantics; exact vanishing-ideal tests over the reals would need real
  radicals, which this package deliberately does not approximate.

The theoretical ceiling on the fixpoint index is the chain-length bound
for the degree bound the program induces; it is usually astronomically
larger than the observed index, so the default sweep limit is
min(bound, 64).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .bounds import chain_bound
from .errors import (
    CapExceeded,
    DimensionMismatch,
    IterationLimitExceeded,
    ResourceLimitExceeded,
    UnsupportedSemantics,
    format_int,
)
from .groebner import (
    Limits,
    groebner,
    ideal_is_trivial,
    radical_member,
    reduce,
)
from .polynomials import PolyMap, PolySet, Polynomial, compose
from .programs import (
    Program,
    Semantics,
    degree_bound_fn,
    normalize_guard,
    set_product_lists,
)
from .simulate import Lasso, find_lasso

DEFAULT_SWEEP_CEILING = 64


@dataclass(frozen=True)
class AnalysisLimits:
    """Caps for one analysis run.

    max_iterations None means min(theoretical bound, 64).  The polynomial
    caps are forwarded to the algebra core; bound_cap limits the chain
    bound machine; wall_clock_seconds, when set, aborts long runs with
    ResourceLimitExceeded.
    """

    max_iterations: int | None = None
    max_degree: int = 512
    max_terms: int = 200_000
    max_basis: int = 10_000
    max_product: int = 200_000
    bound_cap: int = 10 ** 6
    wall_clock_seconds: float | None = None

    def poly_limits(self) -> Limits:
        return Limits(max_degree=self.max_degree, max_terms=self.max_terms,
                      max_basis=self.max_basis, max_product=self.max_product)


DEFAULT_ANALYSIS_LIMITS = AnalysisLimits()


@dataclass(frozen=True)
class BoundOutcome:
    """Chain-length bound: an exact value, or a cap marker with a lower bound."""

    value: int | None
    cap: int
    lower_bound: int

    @property
    def exceeded(self) -> bool:
        return self.value is None

    def __str__(self):
        if self.value is not None:
            return format_int(self.value)
        return f"> {format_int(self.lower_bound)} (cap {self.cap} exceeded)"


@dataclass(frozen=True)
class IterationRecord:
    """Size and degree snapshot after one chain step."""

    index: int
    basis_size: int
    max_degree: int


@dataclass(frozen=True)
class NtiResult:
    """Outcome of a fixpoint run.

    `basis` generates the non-terminating input set exactly; it is a
    reduced Groebner basis (an empty basis means every input diverges).
    `history` holds one record per chain step including step 0.
    """

    algorithm: str
    fixpoint_index: int
    basis: PolySet
    history: tuple[IterationRecord, ...]
    bound: BoundOutcome
    elapsed_seconds: float
    reductions: int


class IntersectionStatus(Enum):
    EMPTY = "empty"
    NONEMPTY = "nonempty"


class _Deadline:
    def __init__(self, seconds: float | None):
        self.expires = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self.expires is not None and time.monotonic() > self.expires:
            raise ResourceLimitExceeded("wall-clock budget exhausted")


def _branch_guard_sets(program: Program, limits: Limits) -> list[PolySet]:
    return [normalize_guard(program.branch_guard(a), program.semantics, limits)
            for a in range(1, program.branch_count + 1)]


def _initial_generators(program: Program, limits: Limits) -> list[Polynomial]:
    """Generators of D_0, the inputs that can take at least one step."""
    guard_sets = _branch_guard_sets(program, limits)
    if program.is_mpp:
        return list(guard_sets[0])
    return set_product_lists([list(s) for s in guard_sets], limits)


def _record(index: int, basis: Sequence[Polynomial]) -> IterationRecord:
    return IterationRecord(index, len(basis),
                           max((p.degree for p in basis), default=-1))


def iteration_bound(program: Program, cap: int = 10 ** 6) -> BoundOutcome:
    """Guaranteed ceiling on the fixpoint index, or a cap marker."""
    f = degree_bound_fn(program)
    try:
        value = chain_bound(program.dimension, f, cap)
        return BoundOutcome(value=value, cap=cap, lower_bound=value)
    except CapExceeded as exc:
        return BoundOutcome(value=None, cap=cap, lower_bound=exc.lower_bound)


def _resolve_max_iterations(program: Program, limits: AnalysisLimits) -> tuple[int, BoundOutcome]:
    bound = iteration_bound(program, cap=limits.bound_cap)
    if limits.max_iterations is not None:
        return limits.max_iterations, bound
    if bound.value is not None:
        return min(bound.value, DEFAULT_SWEEP_CEILING), bound
    return DEFAULT_SWEEP_CEILING, bound


def n_nti_basis(program: Program, n: int,
                limits: AnalysisLimits = DEFAULT_ANALYSIS_LIMITS) -> PolySet:
    """Generators of D_n by the plain recursion, returned Groebner-reduced.

    B_0 is the normalised guard data; B_{k+1} adjoins every choice product
    of B_k composed through the branches (together with the per-command
    guards for guarded loops).  No intermediate reduction is performed, so
    this is the direct, inefficient route used as a cross-check.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    pl = limits.poly_limits()
    guard_sets = _branch_guard_sets(program, pl)
    basis = list(dict.fromkeys(_initial_generators(program, pl)))
    branches = program.branches
    for _step in range(n):
        factor_lists = []
        for a, branch in enumerate(branches, start=1):
            composed = [compose(f, branch) for f in basis]
            if not program.is_mpp:
                composed = list(guard_sets[a - 1]) + composed
            factor_lists.append(list(dict.fromkeys(composed)))
        products = set_product_lists(factor_lists, pl)
        basis = list(dict.fromkeys(basis + products))
    nonzero = [p for p in basis if not p.is_zero]
    if not nonzero:
        return PolySet([], dimension=program.dimension)
    return groebner(nonzero, limits=pl)


def nti_groebner(program: Program,
                 limits: AnalysisLimits = DEFAULT_ANALYSIS_LIMITS) -> NtiResult:
    """Fixpoint of the basis chain; returns the count of productive sweeps.

    Each sweep enumerates the choice products of the current reduced basis
    composed through all branches, in deterministic lexicographic choice
    order, reducing each product against the basis as it stands and
    adjoining nonzero remainders eagerly.  A sweep that adjoins nothing
    ends the run.
    """
    start = time.monotonic()
    deadline = _Deadline(limits.wall_clock_seconds)
    pl = limits.poly_limits()
    max_iterations, bound = _resolve_max_iterations(program, limits)

    guard_sets = _branch_guard_sets(program, pl)
    initial = [p for p in _initial_generators(program, pl) if not p.is_zero]
    reductions = 0

    def finish(index: int, basis: PolySet, history: list[IterationRecord]) -> NtiResult:
        return NtiResult(algorithm="groebner-chain", fixpoint_index=index,
                         basis=basis, history=tuple(history), bound=bound,
                         elapsed_seconds=time.monotonic() - start,
                         reductions=reductions)

    if not initial:
        # Guard identically zero: every input loops forever.
        empty = PolySet([], dimension=program.dimension)
        return finish(0, empty, [_record(0, [])])

    basis_set = groebner(initial, limits=pl)
    basis = list(basis_set)
    history = [_record(0, basis)]
    branches = program.branches
    n = 0
    while True:
        deadline.check()
        if n >= max_iterations:
            raise IterationLimitExceeded(
                f"no fixpoint after {n} sweeps (limit {max_iterations}, "
                f"theoretical bound {bound})",
                partial=finish(n, basis_set, history))
        factor_lists = []
        for a, branch in enumerate(branches, start=1):
            composed = [compose(f, branch) for f in basis]
            if not program.is_mpp:
                composed = list(guard_sets[a - 1]) + composed
            factor_lists.append(
                sorted(dict.fromkeys(composed), key=Polynomial.sort_key))
        size = 1
        for fl in factor_lists:
            size *= len(fl)
        if size > limits.max_product:
            raise ResourceLimitExceeded(
                f"sweep would enumerate {size} products (cap {limits.max_product})")
        productive = False
        for choice in itertools.product(*factor_lists):
            deadline.check()
            f = choice[0]
            for q in choice[1:]:
                f = f * q
            r = reduce(f, basis, limits=pl) if basis else f
            reductions += 1
            if not r.is_zero:
                basis_set = groebner(basis + [r], limits=pl)
                basis = list(basis_set)
                productive = True
        if not productive:
            return finish(n, basis_set, history)
        n += 1
        history.append(_record(n, basis))


def nti_variety(program: Program,
                limits: AnalysisLimits = DEFAULT_ANALYSIS_LIMITS) -> NtiResult:
    """Fixpoint of the variety chain via complex radical membership.

    Maintains the family of per-path constraint sets level by level; the
    chain is stable at n once every product over the level-(n+1) family
    vanishes on every level-n zero set.  The family and its choice
    products grow doubly exponentially, so resource caps are expected to
    end runs whose fixpoint index is 3 or more.
    """
    if program.semantics is not Semantics.COMPLEX:
        raise UnsupportedSemantics(
            "variety-chain analysis needs complex semantics; vanishing ideals "
            "over the reals are not computed by this package")
    start = time.monotonic()
    deadline = _Deadline(limits.wall_clock_seconds)
    pl = limits.poly_limits()
    max_iterations, bound = _resolve_max_iterations(program, limits)

    guard_sets = _branch_guard_sets(program, pl)
    reductions = 0
    d = program.dimension
    branches = program.branches

    zero_guards = all(p.is_zero for s in guard_sets for p in s)
    if zero_guards:
        empty = PolySet([], dimension=d)
        return NtiResult(algorithm="variety-chain", fixpoint_index=0, basis=empty,
                         history=(_record(0, []),), bound=bound,
                         elapsed_seconds=time.monotonic() - start, reductions=0)

    # Level k holds (A_tau, constraint set) for every path tau of length k.
    def extend(level):
        nxt = []
        for prefix_map, constraint in level:
            for a, branch in enumerate(branches, start=1):
                step = [compose(g, prefix_map) for g in guard_sets[a - 1]]
                new_map = PolyMap([compose(p, prefix_map) for p in branch.components])
                nxt.append((new_map, constraint.union(step)))
        return nxt

    identity = PolyMap.identity(d)
    level = [(identity, PolySet([], dimension=d))]
    level = extend(level)  # paths of length 1

    n = 0
    history: list[IterationRecord] = []
    while True:
        deadline.check()
        distinct_lower = list(dict.fromkeys(cs for _, cs in level))
        history.append(IterationRecord(
            n, sum(len(cs) for cs in distinct_lower),
            max(cs.degree for cs in distinct_lower)))
        if n >= max_iterations:
            partial_gens = set_product_lists([list(cs) for cs in distinct_lower], pl)
            raise IterationLimitExceeded(
                f"no fixpoint after {n} levels (limit {max_iterations}, "
                f"theoretical bound {bound})",
                partial=NtiResult("variety-chain", n,
                                  groebner(partial_gens, limits=pl),
                                  tuple(history), bound,
                                  time.monotonic() - start, reductions))
        upper = extend(level)
        distinct_upper = list(dict.fromkeys(cs for _, cs in upper))
        products = set_product_lists([list(cs) for cs in distinct_upper], pl)
        stable = True
        for constraint in distinct_lower:
            for f in products:
                deadline.check()
                reductions += 1
                if not radical_member(f, constraint, limits=pl):
                    stable = False
                    break
            if not stable:
                break
        if stable:
            generators = set_product_lists([list(cs) for cs in distinct_lower], pl)
            basis = groebner(generators, limits=pl)
            return NtiResult(algorithm="variety-chain", fixpoint_index=n,
                             basis=basis, history=tuple(history), bound=bound,
                             elapsed_seconds=time.monotonic() - start,
                             reductions=reductions)
        level = upper
        n += 1


@dataclass(frozen=True)
class TerminationVerdict:
    """Answer for one concrete input, optionally with a diverging lasso."""

    terminating: bool
    witness: Lasso | None = None

    def __post_init__(self):
        if self.terminating and self.witness is not None:
            raise ValueError("terminating verdicts cannot carry a witness")


def point_terminates(program: Program, result: NtiResult,
                     point: Sequence, witness_steps: int = 256) -> TerminationVerdict:
    """Decide termination of one input against a computed fixpoint basis.

    The input diverges iff every basis polynomial vanishes at it.  For
    diverging inputs a concrete eventually-periodic run is searched for as
    a witness; absence of a witness does not weaken the verdict.
    """
    if len(point) != program.dimension:
        raise DimensionMismatch(
            f"point of length {len(point)} for dimension {program.dimension}")
    point = tuple(Fraction(x) for x in point)
    if not result.basis.vanishes_at(point):
        return TerminationVerdict(terminating=True)
    witness = find_lasso(program, point, max_steps=witness_steps)
    return TerminationVerdict(terminating=False, witness=witness)


def input_set_check(program: Program, result: NtiResult,
                    constraints: PolySet | Sequence[Polynomial],
                    limits: AnalysisLimits = DEFAULT_ANALYSIS_LIMITS) -> IntersectionStatus:
    """Does the algebraic input set Z(constraints) meet the diverging set?

    EMPTY certifies an empty intersection over the complex numbers, hence
    also over the reals.  NONEMPTY certifies a common complex zero; over
    the reals it is advisory.
    """
    pl = limits.poly_limits()
    gens = [p for p in list(result.basis) + list(constraints) if not p.is_zero]
    if not gens:
        return IntersectionStatus.NONEMPTY
    if ideal_is_trivial(gens, limits=pl):
        return IntersectionStatus.EMPTY
    return IntersectionStatus.NONEMPTY
