"""polyterm: exact termination analysis for polynomial loops with equality guards.

The package decides termination of multi-path polynomial loops and
polynomial guarded commands whose tests are polynomial equalities.  It
computes the exact algebraic set of diverging inputs as the fixpoint of a
descending chain, bounds the chain length through Hilbert/Macaulay
combinatorics, and answers termination queries for concrete points and
algebraic input sets.  A brute-force simulator provides independent
ground truth for everything the algebraic engine claims.
"""

from .bounds import (
    DegreeBoundFn,
    HilbertTrace,
    MacaulayRep,
    MonomialIdealBasis,
    binom_count,
    chain_bound,
    hat_sequence,
    hilbert_machine,
    hilbert_trace,
    hilbert_value,
    inc,
    longest_generating_sequence,
    macaulay_decompose,
    monomials_of_degree,
    omega,
    omega_recursive,
)
from .engine import (
    AnalysisLimits,
    BoundOutcome,
    IntersectionStatus,
    IterationRecord,
    NtiResult,
    TerminationVerdict,
    input_set_check,
    iteration_bound,
    n_nti_basis,
    nti_groebner,
    nti_variety,
    point_terminates,
)
from .errors import (
    ArityError,
    CapExceeded,
    DimensionMismatch,
    InvalidSymbol,
    IterationLimitExceeded,
    PolytermError,
    ProgramError,
    ProgramSyntaxError,
    ResourceLimitExceeded,
    TargetUnreachable,
    UnknownVariable,
    UnsupportedSemantics,
)
from .groebner import (
    DEFAULT_LIMITS,
    Limits,
    groebner,
    ideal_is_trivial,
    ideal_member,
    radical_member,
    reduce,
    s_polynomial,
    set_product,
)
from .polynomials import (
    Exponents,
    Order,
    PolyMap,
    PolySet,
    Polynomial,
    compare_monomials,
    compose,
    monomial_degree,
    monomial_divides,
    monomial_key,
)
from .programs import (
    Guard,
    MppProgram,
    PgcProgram,
    Program,
    Semantics,
    compose_path,
    degree_bound_fn,
    normalize_guard,
    parse_polynomial,
    parse_program,
    path_constraints,
    program_to_text,
)
from .simulate import (
    Lasso,
    TreeSummary,
    dn_member_bruteforce,
    find_lasso,
    replay_lasso,
    simulate_tree,
)

__version__ = "0.1.0"
