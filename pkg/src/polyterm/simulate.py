"""Concrete execution semantics: the brute-force oracle.

Everything here runs the loop for real, with exact rational arithmetic:
breadth-first execution trees, direct membership tests for the n-step
survivable sets by path enumeration, and a depth-first search for
eventually-periodic runs (lassos).  These routines are deliberately
independent of the algebraic engine so the two can check each other.

Coordinates can grow without bound under squaring assignments, so a
per-coordinate bit-length cap truncates exploration with an explicit
flag; a node cap turns exponential blow-ups into errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, ResourceLimitExceeded
from .programs import Program

NODE_CAP = 10 ** 6
COORD_BIT_CAP = 4096

Point = tuple[Fraction, ...]


def _as_point(program: Program, point: Sequence) -> Point:
    if len(point) != program.dimension:
        raise DimensionMismatch(
            f"point of length {len(point)} for dimension {program.dimension}")
    return tuple(Fraction(x) for x in point)


def _fits(point: Point, bit_cap: int) -> bool:
    return all(x.numerator.bit_length() <= bit_cap
               and x.denominator.bit_length() <= bit_cap for x in point)


def _enabled_branches(program: Program, state: Point) -> list[int]:
    """1-based indices of branches whose guard holds at the state."""
    if program.is_mpp:
        if program.body.guard.holds_at(state):
            return list(range(1, program.branch_count + 1))
        return []
    return [a for a in range(1, program.branch_count + 1)
            if program.branch_guard(a).holds_at(state)]


@dataclass(frozen=True)
class TreeSummary:
    """Shape of a bounded execution tree.

    alive_per_depth[k] counts depth-k nodes whose state still satisfies a
    guard (so they spawn children); truncated is set when exploration was
    cut short with such nodes remaining, either by the depth limit or by
    the coordinate bit cap.
    """

    depth: int
    node_count: int
    alive_per_depth: tuple[int, ...]
    truncated: bool


def simulate_tree(program: Program, point: Sequence, depth: int,
                  node_cap: int = NODE_CAP,
                  coord_bit_cap: int = COORD_BIT_CAP) -> TreeSummary:
    """Breadth-first expansion of the execution tree to the given depth."""
    if depth < 0:
        raise ValueError("depth must be a natural number")
    state = _as_point(program, point)
    level = [state]
    node_count = 1
    alive: list[int] = []
    truncated = False
    branches = program.branches
    for level_index in range(depth + 1):
        expandable = [(s, _enabled_branches(program, s)) for s in level]
        alive.append(sum(1 for _, en in expandable if en))
        if level_index == depth:
            truncated = truncated or alive[-1] > 0
            break
        nxt = []
        for s, enabled in expandable:
            for a in enabled:
                child = branches[a - 1].apply(s)
                if not _fits(child, coord_bit_cap):
                    truncated = True
                    continue
                nxt.append(child)
                node_count += 1
                if node_count > node_cap:
                    raise ResourceLimitExceeded(
                        f"execution tree exceeded {node_cap} nodes")
        if not nxt:
            # All paths died before the depth limit: complete exploration.
            return TreeSummary(level_index, node_count, tuple(alive), truncated)
        level = nxt
    return TreeSummary(depth, node_count, tuple(alive), truncated)


def dn_member_bruteforce(program: Program, point: Sequence, n: int,
                         node_cap: int = NODE_CAP,
                         coord_bit_cap: int = COORD_BIT_CAP) -> bool:
    """True iff some execution path of length n+1 survives from the point.

    Raises ResourceLimitExceeded when the answer would be negative but a
    state was dropped for exceeding the coordinate bit cap (a dropped
    branch could have survived).
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    state = _as_point(program, point)
    level = [state]
    nodes = 1
    dropped = False
    branches = program.branches
    for _step in range(n + 1):
        nxt = []
        for s in level:
            for a in _enabled_branches(program, s):
                child = branches[a - 1].apply(s)
                if not _fits(child, coord_bit_cap):
                    dropped = True
                    continue
                nxt.append(child)
                nodes += 1
                if nodes > node_cap:
                    raise ResourceLimitExceeded(
                        f"path enumeration exceeded {node_cap} nodes")
        if not nxt:
            if dropped:
                raise ResourceLimitExceeded(
                    "coordinate bit cap hid part of the execution tree")
            return False
        level = nxt
    return True


@dataclass(frozen=True)
class Lasso:
    """An eventually periodic run: stem, cycle, and the states along them.

    states[0] is the start; states[i] is the state after i steps along
    stem + cycle, so states[-1] == states[len(stem)] closes the cycle.
    """

    stem: tuple[int, ...]
    cycle: tuple[int, ...]
    states: tuple[Point, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("a lasso needs a nonempty cycle")
        if len(self.states) != len(self.stem) + len(self.cycle) + 1:
            raise ValueError("state list does not match stem + cycle length")
        if self.states[-1] != self.states[len(self.stem)]:
            raise ValueError("the recorded cycle does not close")


def replay_lasso(program: Program, lasso: Lasso, extra_cycles: int = 3) -> bool:
    """Re-run a lasso exactly; True iff every guard holds along the way."""
    state = lasso.states[0]
    symbols = list(lasso.stem) + list(lasso.cycle) * (1 + extra_cycles)
    branches = program.branches
    for a in symbols:
        if not program.branch_guard(a).holds_at(state):
            return False
        state = branches[a - 1].apply(state)
    return True


def find_lasso(program: Program, point: Sequence, max_steps: int = 10_000,
               coord_bit_cap: int = COORD_BIT_CAP) -> Lasso | None:
    """Depth-first search for a state-revisiting run from the point.

    Best-effort only: diverging orbits need not revisit a state, so None
    is never evidence of termination.  Branches are tried in index order,
    so the result is deterministic.
    """
    start = _as_point(program, point)
    branches = program.branches

    path_states: list[Point] = [start]
    index_of: dict[Point, int] = {start: 0}
    path_symbols: list[int] = []
    # Iterative DFS: stack of (state, iterator over enabled branches).
    stack = [(start, iter(_enabled_branches(program, start)))]
    budget = max_steps
    while stack:
        state, branch_iter = stack[-1]
        advanced = False
        for a in branch_iter:
            if budget <= 0:
                return None
            budget -= 1
            child = branches[a - 1].apply(state)
            if not _fits(child, coord_bit_cap):
                continue
            j = index_of.get(child)
            if j is not None:
                states = tuple(path_states) + (child,)
                return Lasso(stem=tuple(path_symbols[:j]),
                             cycle=tuple(path_symbols[j:]) + (a,),
                             states=states)
            path_symbols.append(a)
            path_states.append(child)
            index_of[child] = len(path_states) - 1
            stack.append((child, iter(_enabled_branches(program, child))))
            advanced = True
            break
        if not advanced:
            stack.pop()
            if path_symbols:
                path_symbols.pop()
                gone = path_states.pop()
                del index_of[gone]
    return None
