"""Executable proof kernel and finite-model checker for refinement systems."""
from __future__ import annotations

from .fincat import (
    FinCategory,
    FinFunction,
    FinFunctor,
    FinSet,
    all_functions,
    check_functor,
    enumerate_functors,
    monoid_category,
    product_category,
    terminal_category,
)
from .kernel import (
    CapabilityError,
    Derivation,
    IllFormedError,
    Judgment,
    LawViolation,
    MismatchError,
    RefinementError,
    RefinementSystem,
    Status,
    VerticalIso,
    axiom,
    check_vertical_iso,
    classify,
    compose_derivations,
    conversion,
    derivable,
    derivations_equal,
    derivations_over,
    identity_derivation,
    well_formed,
)
from .monadrep import (
    AdjunctionDescriptor,
    FiberwiseMonad,
    build_continuation_adjunction,
    check_adjunction,
    check_comparison,
    check_monad_laws,
    check_reflected,
    check_retraction,
    check_section,
    check_theorem,
    check_universal,
    identity_adjunction,
    search_encodings,
)
from .monoidal import (
    check_monoidal_equations,
    check_residual_laws,
    check_star_wand,
    check_threeway_adjunction,
    double_negation_etype,
    residual_left,
    residual_right,
    star_etype,
    tensor_derivations,
    wand_left_etype,
    wand_right_etype,
)
from .presheaf_model import (
    FinPresheaf,
    PresheafSystem,
    build_presheaf_system,
    day_star,
    day_star_coend,
    enumerate_monoid_presheaves,
)
from .signature import Signature, SignatureError, load_signature
from .structures import (
    PullbackWitness,
    PushforwardWitness,
    check_beta_eta,
    composite_pullback_witness,
    composite_pushforward_witness,
    pull_compose_iso,
    pullback,
    push_compose_iso,
    pushforward,
    three_way,
    uniqueness_iso,
)
from .subset_model import (
    HoareProgram,
    Subset,
    SubsetSystem,
    build_classifier_system,
    build_subset_system,
    full_subset,
    subset,
)
from .trivial_model import TrivialSystem, build_trivial_system

__version__ = "0.1.0"

__all__ = [
    "AdjunctionDescriptor",
    "CapabilityError",
    "Derivation",
    "FiberwiseMonad",
    "FinCategory",
    "FinFunction",
    "FinFunctor",
    "FinPresheaf",
    "FinSet",
    "HoareProgram",
    "IllFormedError",
    "Judgment",
    "LawViolation",
    "MismatchError",
    "PresheafSystem",
    "PullbackWitness",
    "PushforwardWitness",
    "RefinementError",
    "RefinementSystem",
    "Signature",
    "SignatureError",
    "Status",
    "Subset",
    "SubsetSystem",
    "TrivialSystem",
    "VerticalIso",
    "all_functions",
    "axiom",
    "build_classifier_system",
    "build_continuation_adjunction",
    "build_presheaf_system",
    "build_subset_system",
    "build_trivial_system",
    "check_adjunction",
    "check_beta_eta",
    "check_comparison",
    "check_functor",
    "check_monad_laws",
    "check_monoidal_equations",
    "check_reflected",
    "check_residual_laws",
    "check_retraction",
    "check_section",
    "check_star_wand",
    "check_theorem",
    "check_threeway_adjunction",
    "check_universal",
    "check_vertical_iso",
    "classify",
    "compose_derivations",
    "composite_pullback_witness",
    "composite_pushforward_witness",
    "conversion",
    "day_star",
    "day_star_coend",
    "derivable",
    "derivations_equal",
    "derivations_over",
    "double_negation_etype",
    "enumerate_functors",
    "enumerate_monoid_presheaves",
    "full_subset",
    "identity_adjunction",
    "identity_derivation",
    "load_signature",
    "monoid_category",
    "product_category",
    "pull_compose_iso",
    "pullback",
    "push_compose_iso",
    "pushforward",
    "residual_left",
    "residual_right",
    "search_encodings",
    "star_etype",
    "subset",
    "tensor_derivations",
    "terminal_category",
    "three_way",
    "uniqueness_iso",
    "wand_left_etype",
    "wand_right_etype",
    "well_formed",
    "__version__",
]
