"""tlab: exact Temperley-Lieb diagram calculus, continuant complexes over it,
a concrete two-dimensional fiber-functor model, and a fusion-ring
boundedness classifier, with a command-line front end."""

from .complexes import (
    ChainMap,
    FormalComplex,
    FormalMorphism,
    FormalObject,
    build_continuant,
    cone,
    k0_class,
    shift,
    twinned_subsets,
    validate,
)
from .contpoly import (
    IntPolynomial,
    QuantumTable,
    kappa,
    mu,
    nu,
    qbinom,
    qnum,
)
from .fusion import (
    BoundReport,
    FusionRing,
    builtin_ring,
    classify_all,
    continuant_sequence,
    fpdim,
    load_fusion_ring,
    minimal_bound,
)
from .linalg import ExactMatrix
from .rings import (
    RingValue,
    Triple,
    construct_ring,
    generic_tower,
    invert,
    parse_element,
)
from .sl2model import FiberParams, HomologyReport, homology, realize_morphism, realized_trace
from .tldiag import (
    NotExists,
    PlanarMatching,
    TLMorphism,
    Word,
    compose,
    enumerate_basis,
    is_negligible,
    jw,
    markov_trace,
    partial_trace,
    rescale_transport,
    rotatability,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ChainMap",
    "ExactMatrix",
    "FiberParams",
    "FormalComplex",
    "FormalMorphism",
    "FormalObject",
    "FusionRing",
    "HomologyReport",
    "IntPolynomial",
    "NotExists",
    "PlanarMatching",
    "QuantumTable",
    "RingValue",
    "TLMorphism",
    "Triple",
    "Word",
    "build_continuant",
    "builtin_ring",
    "classify_all",
    "compose",
    "cone",
    "construct_ring",
    "continuant_sequence",
    "enumerate_basis",
    "fpdim",
    "generic_tower",
    "homology",
    "invert",
    "is_negligible",
    "jw",
    "k0_class",
    "kappa",
    "load_fusion_ring",
    "markov_trace",
    "minimal_bound",
    "mu",
    "nu",
    "parse_element",
    "partial_trace",
    "qbinom",
    "qnum",
    "realize_morphism",
    "realized_trace",
    "rescale_transport",
    "rotatability",
    "shift",
    "tensor",
    "twinned_subsets",
    "validate",
]
