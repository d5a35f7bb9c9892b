"""Exact convex sets of probability distributions over finite metric spaces.

The library models finitely generated convex sets of finitely supported
distributions, the Hausdorff-Kantorovich metric on them, the equational
theory of convex semilattices with its canonical term forms, a proof
checker for quantitative deductions, and constructive derivations whose
bounds match the computed distances exactly.  All arithmetic is over
`fractions.Fraction`; floats never appear.
"""

from .convex import (
    ConvexSet,
    LawReport,
    check_monad_laws,
    functor_map,
    in_hull,
    monad_mult,
    monad_unit,
    nearest_point,
    oplus,
    plus_p,
    unique_base,
    wms,
)
from .core import (
    Coupling,
    Dist,
    FiniteMetricSpace,
    as_fraction,
    convex_combine,
    dirac,
    format_fraction,
    make_coupling,
    product_coupling,
    pushforward,
    validate_space,
)
from .deduction import (
    AXIOMS,
    RULES,
    CheckResult,
    Derivation,
    QuantEquation,
    check_derivation,
    derivation_from_json_dict,
    derivation_to_json_dict,
    equation_from_json_dict,
    equation_to_json_dict,
    metric_hypotheses,
)
from .errors import (
    AxiomViolation,
    BadProbability,
    DomainError,
    DuplicateLabel,
    EmptyInput,
    EmptySet,
    MarginalMismatch,
    OutOfRange,
    ParseError,
    SpaceMismatch,
    TooLarge,
    UnknownPoint,
    WeightsNotNormalized,
)
from .lifting import (
    MetrizedCollection,
    directed_hausdorff,
    hausdorff,
    hausdorff_metric,
    hk_directed,
    hk_distance,
    hk_sampled,
)
from .presentation import (
    EMAlgebra,
    FreeAlgebraCarrier,
    QuantConvexSemilattice,
    SpaceCarrier,
    corrupt_alpha,
    eval_canonical,
    free_em_algebra,
    functor_F,
    functor_G,
    roundtrip_FG,
    roundtrip_GF,
)
from .proofs import (
    canon_proof,
    derive_hk,
    derive_kantorovich,
    prove_dist,
    tightest_derivable,
)
from .terms import (
    Gen,
    Oplus,
    PlusP,
    Term,
    dist_term,
    normalize,
    nu,
    parse_term,
    print_term,
    substitute,
    term_distance,
    term_equal_mod_theory,
    term_labels,
)
from .transport import (
    TransportResult,
    kantorovich,
    kantorovich_bruteforce,
    kantorovich_metric,
    optimal_transport,
    solve_transport,
    transport_cost,
)

__all__ = [name for name in dir() if not name.startswith("_")]
