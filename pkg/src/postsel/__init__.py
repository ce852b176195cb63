"""Post-selected classical query algorithms, positive rational approximation,
certificate complexity and approximate counting, in exact arithmetic."""

from .boolean import (
    BooleanFunction,
    Certificate,
    and_function,
    builtin,
    certificate_complexity,
    constant,
    gamma,
    is_nondeterministic_poly,
    majority,
    ndeg_symmetric,
    not_middle,
    or_function,
    parity,
)
from .counting import CountingParams, counting_verifier, strong_count, weak_count
from .degree import (
    FeasibilityInstance,
    lp_feasible,
    maj_lower_bound,
    rdeg_plus,
    symmetric_lower_bound,
)
from .errors import AttemptsExhausted, CapExceeded, FormatError, PostselError, PostselectionImpossible
from .poly import (
    LiteralPolynomial,
    Monomial,
    PosRationalFunction,
    approx_error,
    eval_poly,
    eval_rational,
    or_rational,
    symmetrize,
    symmetrize_brute,
    symmetrize_rational,
)
from .program import (
    BOT,
    Call,
    Chance,
    Leaf,
    NestedProgram,
    OutcomeDistribution,
    Program,
    Query,
    conditional_success,
    exact_distribution,
    mix,
    query_depth,
    run_postselected,
    sample,
)
from .transforms import (
    and_program,
    equality_program,
    maj_program,
    one_sided_program,
    or_program,
    program_to_rational,
    rational_to_program,
    zero_error_program,
)
from .univariate import UnivariatePolynomial

__version__ = "0.1.0"
