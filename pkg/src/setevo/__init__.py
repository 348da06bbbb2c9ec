"""Evolutions on sets: staged subset dynamics with verifiable structure.

The package models sequences of stages over a ground set, checks the four
structural conditions those sequences must satisfy, extracts and rebuilds
element chronologies, pulls evolutions back through maps and probes, runs
genealogy-driven generational constructions, and traces measures and stage
integrals -- all with deterministic, exactly reproducible outputs.
"""

from .core import (
    FAIL,
    NOT_FOUND_WITHIN_BOUNDS,
    PASS,
    REDUCIBLE,
    UNKNOWN,
    AxiomReport,
    Bijection,
    Chronology,
    ChronologyInfeasible,
    ChronologyReading,
    Evolution,
    EvolutionError,
    Ground,
    IsoReport,
    MapDescriptor,
    NotABijection,
    ReducibilityResult,
    SurjectivityGap,
    SurjectivityViolated,
    Violation,
    check_axioms,
    check_stage_list,
    chronology_of,
    element_key,
    example_square,
    find_reducing_subsequence,
    from_chronology,
    is_isoevolved,
    naturals,
    pullback,
    sort_elements,
)
from .intervals import (
    BadWindow,
    EmptySetError,
    IntervalSet,
    RealEvolution,
    check_real_axioms,
    shell_evolution,
    sliding_window_evolution,
)
from .probes import (
    RangeMismatch,
    ScalarProbe,
    ScalarPullbackEvolution,
    SpanEvolution,
    SupportVector,
    ZeroVectorRejected,
    determinant_probe,
    distance_to_point,
    distance_to_set,
    hyperplane_distance,
    inner_product_with,
    linear_functional,
    scalar_pullback_evolution,
    span_evolution,
)
from .genealogy import (
    AncestryReport,
    Couple,
    FoundersInvalid,
    GenealogyModel,
    GenerationTrace,
    ancestry_check,
    children_of,
    couples,
    founders,
    genealogy_model,
    generational_evolution,
    prime_counting,
    prime_model,
    toy_three_generation_model,
)
from .integrands import (
    CatalogUnsupported,
    Integrand,
    constant,
    identity_map,
    parse_integrand,
)
from .measure import (
    AtomFamily,
    AtomsOverlap,
    DecayReport,
    DiscreteMeasure,
    IntegralReport,
    InvertibleMap,
    LebesgueModel,
    NotInvertible,
    WeightMissing,
    ZeroWeightAtom,
    atom_augmented_evolution,
    decay_check,
    mu_trace,
    order_preserving_onto_naturals,
    stage_integral,
)
from .convergent import (
    ConvergenceReport,
    ConvergentConstruction,
    SignObstruction,
    construct_convergent_evolution,
)
from .models import (
    LoadedModel,
    SchemaError,
    UnknownKind,
    parse_model,
    parse_model_object,
)

__version__ = "0.1.0"
