"""Exact calculator for oriented cohomology theories on products of
projective spaces: formal group laws, Gysin direct images, diagonal
kernels, Poincare duality, and a verification suite that checks the
expected identities as exact polynomial equalities.
"""

from .algebra import CoeffRing, RingElem, RingKind
from .errors import (
    CalculatorError,
    InternalConsistencyError,
    ParseError,
    RingMismatchError,
    SpaceMismatchError,
    TruncationUnsoundError,
    UnsupportedConfigurationError,
)
from .fgl import (
    FGL,
    Series,
    additive_law,
    apply_law,
    check_axioms,
    law_for,
    multiplicative_law,
    universal_law,
    with_flipped_coefficient,
)
from .gysin import (
    GysinKernel,
    diag_coefficients,
    diagonal_kernel_class,
    diamond_coh,
    kernel,
    kernel_transposed_invariant,
    pushforward_coh,
)
from .homodual import (
    HomClass,
    cap,
    cross_hom,
    diamond_hom,
    duality_to_coh,
    duality_to_hom,
    fundamental_class,
    pair,
    pbt_section,
    psi,
    pushforward_hom,
    shriek_hom,
    slant_l,
    slant_r,
)
from .spaces import (
    CohClass,
    Composite,
    Diagonal,
    LinearEmbed,
    Morphism,
    Permutation,
    Projection,
    Space,
    basis,
    compose,
    cross_coh,
    euler,
    full_diagonal,
    identity,
    prefix_product,
    product_morphism,
    suffix_product,
    transposition,
)
from .verify import (
    CHECK_IDS,
    CheckConfig,
    CheckReport,
    reports_to_json,
    reports_to_table,
    run_suite,
    sample_class,
    sample_hom,
)

__version__ = "0.1.0"

__all__ = [
    "CHECK_IDS",
    "CalculatorError",
    "CheckConfig",
    "CheckReport",
    "CoeffRing",
    "CohClass",
    "Composite",
    "Diagonal",
    "FGL",
    "GysinKernel",
    "HomClass",
    "InternalConsistencyError",
    "LinearEmbed",
    "Morphism",
    "ParseError",
    "Permutation",
    "Projection",
    "RingElem",
    "RingKind",
    "RingMismatchError",
    "Series",
    "Space",
    "SpaceMismatchError",
    "TruncationUnsoundError",
    "UnsupportedConfigurationError",
    "additive_law",
    "apply_law",
    "basis",
    "cap",
    "check_axioms",
    "compose",
    "cross_coh",
    "cross_hom",
    "diag_coefficients",
    "diagonal_kernel_class",
    "diamond_coh",
    "diamond_hom",
    "duality_to_coh",
    "duality_to_hom",
    "euler",
    "fundamental_class",
    "full_diagonal",
    "identity",
    "kernel",
    "kernel_transposed_invariant",
    "law_for",
    "multiplicative_law",
    "pair",
    "pbt_section",
    "prefix_product",
    "product_morphism",
    "psi",
    "pushforward_coh",
    "pushforward_hom",
    "reports_to_json",
    "reports_to_table",
    "run_suite",
    "sample_class",
    "sample_hom",
    "shriek_hom",
    "slant_l",
    "slant_r",
    "suffix_product",
    "transposition",
    "universal_law",
    "with_flipped_coefficient",
]
