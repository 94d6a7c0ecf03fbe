"""Loop models, their textual format, and the path algebra.

Two program kinds are supported.  A multi-path loop (mpp) repeats while a
single equality guard holds, nondeterministically applying one of l
polynomial assignment maps per iteration.  A guarded-command loop (pgc)
carries one equality guard per command and repeats while any guard holds.
Guards are disjunctions of conjunctions of polynomial equalities.

Text format (extension .mpp, '#' line comments):

    vars: x, y;
    while (x + y == 0) {
      (x, y) := (y^2, 2*x + y);
      ||
      (x, y) := (2*x^2 + y - 1, x + 2*y + 1);
    }

    vars: x;
    do (x - 1)*(x - 2) == 0 -> x := 1 - x^2;
    || (x - 1)*(x - 2) == 0 -> x := x + 1;
    od

Division is permitted only by nonzero rational constants, so assignments
stay polynomial with exact rational coefficients.  A pgc whose guards all
coincide is recognised as an mpp.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bounds import DegreeBoundFn
from .errors import (
    ArityError,
    InvalidSymbol,
    ProgramSyntaxError,
    ResourceLimitExceeded,
    UnknownVariable,
)
from .groebner import DEFAULT_LIMITS, Limits
from .polynomials import PolyMap, PolySet, Polynomial, compose


class Semantics(enum.Enum):
    """Field over which zero sets are read."""

    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class Guard:
    """Disjunctive normal form over polynomial equalities.

    clauses[i] is a conjunction: all its polynomials must vanish; the guard
    holds when at least one clause does.
    """

    clauses: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self):
        if not self.clauses or any(not c for c in self.clauses):
            raise ValueError("a guard needs at least one nonempty clause")

    @property
    def dimension(self) -> int:
        return self.clauses[0][0].dimension

    def holds_at(self, point: Sequence) -> bool:
        return any(all(p.evaluate(point) == 0 for p in clause)
                   for clause in self.clauses)

    @classmethod
    def single(cls, p: Polynomial) -> "Guard":
        return cls(((p,),))


@dataclass(frozen=True)
class MppProgram:
    dimension: int
    variables: tuple[str, ...]
    guard: Guard
    branches: tuple[PolyMap, ...]

    def __post_init__(self):
        if not self.branches:
            raise ValueError("a loop needs at least one branch")
        if any(b.dimension != self.dimension for b in self.branches):
            raise ArityError("branch map dimension differs from the program's")


@dataclass(frozen=True)
class PgcProgram:
    dimension: int
    variables: tuple[str, ...]
    commands: tuple[tuple[Guard, PolyMap], ...]

    def __post_init__(self):
        if not self.commands:
            raise ValueError("a guarded-command loop needs at least one command")
        if any(m.dimension != self.dimension for _, m in self.commands):
            raise ArityError("command map dimension differs from the program's")


@dataclass(frozen=True)
class Program:
    """A parsed loop plus the field semantics its zero sets are read over."""

    body: MppProgram | PgcProgram
    semantics: Semantics = Semantics.COMPLEX

    @property
    def dimension(self) -> int:
        return self.body.dimension

    @property
    def variables(self) -> tuple[str, ...]:
        return self.body.variables

    @property
    def is_mpp(self) -> bool:
        return isinstance(self.body, MppProgram)

    @property
    def branch_count(self) -> int:
        if self.is_mpp:
            return len(self.body.branches)
        return len(self.body.commands)

    @property
    def branches(self) -> tuple[PolyMap, ...]:
        if self.is_mpp:
            return self.body.branches
        return tuple(m for _, m in self.body.commands)

    def branch_guard(self, a: int) -> Guard:
        """Guard checked before taking branch a (1-based)."""
        if not 1 <= a <= self.branch_count:
            raise InvalidSymbol(f"branch index {a} outside 1..{self.branch_count}")
        if self.is_mpp:
            return self.body.guard
        return self.body.commands[a - 1][0]

    def with_semantics(self, semantics: Semantics) -> "Program":
        return Program(self.body, semantics)


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_SYMBOLS = ("\\/", "/\\", ":=", "==", "->", "||",
            "(", ")", "{", "}", ",", ";", ":", "+", "-", "*", "^", "/")
_KEYWORDS = {"vars", "while", "do", "od"}


@dataclass(frozen=True)
class _Token:
    kind: str  # 'ident', 'int', 'symbol', 'eof'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        matched = None
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                matched = sym
                break
        if matched:
            tokens.append(_Token("symbol", matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ProgramSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables: tuple[str, ...] = ()

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ProgramSyntaxError(message, tok.line, tok.column)

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            self.error(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def expect_ident(self) -> _Token:
        tok = self.next()
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            self.error(f"expected an identifier, found {tok.text!r}", tok)
        return tok

    # -- grammar -----------------------------------------------------------

    def parse_program(self) -> MppProgram | PgcProgram:
        self.parse_header()
        tok = self.peek()
        if tok.text == "while":
            body = self.parse_mpp()
        elif tok.text == "do":
            body = self.parse_pgc()
        else:
            self.error("expected 'while' or 'do' after the variable header")
        if self.peek().kind != "eof":
            self.error("trailing input after the program body")
        return body

    def parse_header(self) -> None:
        tok = self.next()
        if tok.text != "vars":
            self.error("program must start with 'vars:'", tok)
        self.expect(":")
        names = [self.expect_ident().text]
        while self.peek().text == ",":
            self.next()
            names.append(self.expect_ident().text)
        self.expect(";")
        if len(set(names)) != len(names):
            self.error("duplicate variable name in header")
        self.variables = tuple(names)

    def parse_mpp(self) -> MppProgram:
        self.expect("while")
        self.expect("(")
        guard = self.parse_guard()
        self.expect(")")
        self.expect("{")
        branches = [self.parse_branch()]
        while self.peek().text == "||":
            self.next()
            branches.append(self.parse_branch())
        self.expect("}")
        return MppProgram(len(self.variables), self.variables, guard,
                          tuple(branches))

    def parse_pgc(self) -> MppProgram | PgcProgram:
        self.expect("do")
        commands = [self.parse_command()]
        while self.peek().text == "||":
            self.next()
            commands.append(self.parse_command())
        self.expect("od")
        d = len(self.variables)
        guards = [g for g, _ in commands]
        if all(g == guards[0] for g in guards):
            # Identical guards degenerate to a multi-path loop.
            return MppProgram(d, self.variables, guards[0],
                              tuple(m for _, m in commands))
        return PgcProgram(d, self.variables, tuple(commands))

    def parse_command(self) -> tuple[Guard, PolyMap]:
        guard = self.parse_guard()
        self.expect("->")
        return guard, self.parse_branch()

    def parse_guard(self) -> Guard:
        clauses = [self.parse_conjunction()]
        while self.peek().text == "\\/":
            self.next()
            clauses.append(self.parse_conjunction())
        return Guard(tuple(clauses))

    def parse_conjunction(self) -> tuple[Polynomial, ...]:
        eqs = [self.parse_equality()]
        while self.peek().text == "/\\":
            self.next()
            eqs.append(self.parse_equality())
        return tuple(eqs)

    def parse_equality(self) -> Polynomial:
        lhs = self.parse_poly()
        self.expect("==")
        rhs = self.parse_poly()
        return lhs - rhs

    def parse_branch(self) -> PolyMap:
        d = len(self.variables)
        tok = self.peek()
        if tok.text == "(":
            self.next()
            targets = [self.expect_ident()]
            while self.peek().text == ",":
                self.next()
                targets.append(self.expect_ident())
            self.expect(")")
            self.expect(":=")
            self.expect("(")
            polys = [self.parse_poly()]
            while self.peek().text == ",":
                self.next()
                polys.append(self.parse_poly())
            self.expect(")")
            self.expect(";")
        else:
            targets = [self.expect_ident()]
            self.expect(":=")
            polys = [self.parse_poly()]
            self.expect(";")
        names = [t.text for t in targets]
        for t in targets:
            if t.text not in self.variables:
                raise UnknownVariable(f"{t.line}:{t.column}: unknown variable {t.text!r}")
        if len(set(names)) != len(names):
            raise ArityError("a variable is assigned twice in one branch")
        if len(names) != d or len(polys) != len(names):
            raise ArityError(
                f"assignment covers {len(names)} variables / {len(polys)} values, "
                f"but the program declares {d} variables")
        by_name = dict(zip(names, polys))
        return PolyMap([by_name[v] for v in self.variables])

    # -- polynomial expressions ---------------------------------------------

    def parse_poly(self) -> Polynomial:
        p = self.parse_term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            q = self.parse_term()
            p = p + q if op == "+" else p - q
        return p

    def parse_term(self) -> Polynomial:
        p = self.parse_factor()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            tok = self.peek()
            q = self.parse_factor()
            if op == "*":
                p = p * q
            else:
                c = q.constant_term()
                if q.degree > 0 or c == 0:
                    self.error("division is only defined by nonzero rational "
                               "constants", tok)
                p = p * (Fraction(1) / c)
        return p

    def parse_factor(self) -> Polynomial:
        p = self.parse_atom()
        if self.peek().text == "^":
            self.next()
            tok = self.next()
            if tok.kind != "int":
                self.error("exponent must be a natural number literal", tok)
            p = p ** int(tok.text)
        return p

    def parse_atom(self) -> Polynomial:
        d = len(self.variables)
        tok = self.next()
        if tok.text == "(":
            p = self.parse_poly()
            self.expect(")")
            return p
        if tok.text == "-":
            return -self.parse_factor()
        if tok.text == "+":
            return self.parse_factor()
        if tok.kind == "int":
            return Polynomial.constant(d, int(tok.text))
        if tok.kind == "ident":
            if tok.text not in self.variables:
                raise UnknownVariable(
                    f"{tok.line}:{tok.column}: unknown variable {tok.text!r}")
            return Polynomial.variable(d, self.variables.index(tok.text))
        self.error(f"expected a polynomial, found {tok.text!r}", tok)


def parse_program(text: str, semantics: Semantics = Semantics.COMPLEX) -> Program:
    """Parse program text into a validated Program."""
    return Program(_Parser(text).parse_program(), semantics)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse a single polynomial expression over the given variables."""
    parser = _Parser("")
    parser.tokens = _tokenize(text)
    parser.pos = 0
    parser.variables = tuple(variables)
    p = parser.parse_poly()
    if parser.peek().kind != "eof":
        parser.error("trailing input after the polynomial")
    return p


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

def _guard_to_text(guard: Guard, names: Sequence[str]) -> str:
    return " \\/ ".join(
        " /\\ ".join(f"{p.to_string(names)} == 0" for p in clause)
        for clause in guard.clauses)


def _branch_to_text(mapping: PolyMap, names: Sequence[str]) -> str:
    if len(names) == 1:
        return f"{names[0]} := {mapping.components[0].to_string(names)};"
    lhs = ", ".join(names)
    rhs = ", ".join(p.to_string(names) for p in mapping.components)
    return f"({lhs}) := ({rhs});"


def program_to_text(program: Program) -> str:
    """Render a Program back to parseable text."""
    names = program.variables
    lines = [f"vars: {', '.join(names)};"]
    body = program.body
    if isinstance(body, MppProgram):
        lines.append(f"while ({_guard_to_text(body.guard, names)}) {{")
        for i, branch in enumerate(body.branches):
            if i:
                lines.append("  ||")
            lines.append(f"  {_branch_to_text(branch, names)}")
        lines.append("}")
    else:
        lines.append("do")
        for i, (guard, mapping) in enumerate(body.commands):
            prefix = "|| " if i else "   "
            lines.append(f"{prefix}{_guard_to_text(guard, names)} -> "
                         f"{_branch_to_text(mapping, names)}")
        lines.append("od")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Guard normalisation and path algebra
# ---------------------------------------------------------------------------

def normalize_guard(guard: Guard, semantics: Semantics,
                    limits: Limits = DEFAULT_LIMITS) -> PolySet:
    """A finite polynomial set whose zero set equals the guard's solutions.

    Over the reals each multi-equality clause collapses to a sum of
    squares and the clauses multiply out to one polynomial.  Over the
    complex numbers sums of squares are unsound, so the product is
    distributed across the union instead: one polynomial per choice of a
    conjunct from every clause (a single clause is kept as-is).
    """
    d = guard.dimension
    if semantics is Semantics.REAL:
        product = Polynomial.constant(d, 1)
        for clause in guard.clauses:
            if len(clause) == 1:
                factor = clause[0]
            else:
                factor = Polynomial.zero(d)
                for p in clause:
                    factor = factor + p * p
            product = product * factor
        return PolySet([product])
    if len(guard.clauses) == 1:
        return PolySet(guard.clauses[0])
    choices = [Polynomial.constant(d, 1)]
    for clause in guard.clauses:
        size = len(choices) * len(clause)
        if size > limits.max_product:
            raise ResourceLimitExceeded(
                f"guard normalisation would build {size}+ polynomials")
        choices = [c * p for c in choices for p in clause]
    return PolySet(choices)


def path_symbols(program: Program, path: str | Iterable[int]) -> tuple[int, ...]:
    """Validate a path given as '121' or as an iterable of 1-based indices."""
    if isinstance(path, str):
        symbols = tuple(int(ch) for ch in path if not ch.isspace())
    else:
        symbols = tuple(int(a) for a in path)
    l = program.branch_count
    for a in symbols:
        if not 1 <= a <= l:
            raise InvalidSymbol(f"branch index {a} outside 1..{l}")
    return symbols


def compose_path(program: Program, path: str | Iterable[int]) -> PolyMap:
    """The composed map A_sigma; the empty path gives the identity map."""
    symbols = path_symbols(program, path)
    branches = program.branches
    current = PolyMap.identity(program.dimension)
    for a in symbols:
        branch = branches[a - 1]
        current = PolyMap([compose(p, current) for p in branch.components])
    return current


def path_constraints(program: Program, path: str | Iterable[int],
                     limits: Limits = DEFAULT_LIMITS) -> tuple[PolySet, PolySet]:
    """The constraint sets (T_minus, T) a prefix path imposes on inputs.

    A point can execute the path iff every polynomial of T_minus vanishes
    there; it can additionally take one more step iff every polynomial of
    T vanishes.  T_minus is empty for the empty path.  For guarded
    commands the guard of the branch taken at each step is composed with
    the map of the preceding prefix, and the extension set multiplies the
    per-branch guards out across the nondeterministic choice.
    """
    symbols = path_symbols(program, path)
    prefix = PolyMap.identity(program.dimension)
    minus: list[Polynomial] = []
    for a in symbols:
        guard_set = normalize_guard(program.branch_guard(a), program.semantics,
                                    limits)
        minus.extend(compose(g, prefix) for g in guard_set)
        branch = program.branches[a - 1]
        prefix = PolyMap([compose(p, prefix) for p in branch.components])
    if program.is_mpp:
        final_guard = normalize_guard(program.body.guard, program.semantics, limits)
        extension = [compose(g, prefix) for g in final_guard]
    else:
        per_branch = []
        for a in range(1, program.branch_count + 1):
            guard_set = normalize_guard(program.branch_guard(a),
                                        program.semantics, limits)
            per_branch.append([compose(g, prefix) for g in guard_set])
        extension = list(set_product_lists(per_branch, limits))
    d = program.dimension
    return (PolySet(minus, dimension=d), PolySet(minus + extension, dimension=d))


def set_product_lists(lists: Sequence[Sequence[Polynomial]],
                      limits: Limits = DEFAULT_LIMITS) -> list[Polynomial]:
    """Choice products over plain lists (zero factors allowed, deduplicated)."""
    size = 1
    for fl in lists:
        size *= len(fl)
        if size > limits.max_product:
            raise ResourceLimitExceeded(
                f"product set of {size}+ polynomials exceeds cap {limits.max_product}")
    products = list(dict.fromkeys(lists[0]))
    for fl in lists[1:]:
        nxt = dict.fromkeys(p * q for p in products for q in fl)
        products = list(nxt)
    return products


def degree_bound_fn(program: Program, limits: Limits = DEFAULT_LIMITS) -> DegreeBoundFn:
    """Geometric degree bound a * b**i on the polynomials constraining step i.

    a is the degree of the normalised guard (the maximum over commands for
    guarded loops) and b the maximum branch-component degree; b = 1 gives
    a constant bound.  Degenerate degree-0 data is clamped to 1 so the
    bound stays a valid nondecreasing function.
    """
    if program.is_mpp:
        guard_degree = normalize_guard(program.body.guard, program.semantics,
                                       limits).degree
    else:
        guard_degree = max(
            normalize_guard(g, program.semantics, limits).degree
            for g, _ in program.body.commands)
    branch_degree = max(b.degree for b in program.branches)
    a = max(guard_degree, 1)
    b = max(branch_degree, 1)
    # f(i) = a * b**i written in first-value form a*b * b**(i-1).
    return DegreeBoundFn.geometric(a * b, b)
