"""Engine for tense operators and inexact connectives over finite
orthomodular posets."""

from .backend import BACKEND
from .connectives import (
    adjointness_holds,
    divisibility_holds,
    imp,
    imp_sets,
    imp_setval,
    odot,
    odot_sets,
    odot_setval,
    residuation_bounds_exact,
    residuation_bounds_inexact,
    unit_laws_hold,
)
from .errors import (
    CapacityError,
    EmptyFiberError,
    IdentityError,
    OmqlError,
    ParseError,
    PartialityError,
    PreconditionError,
    ValidationError,
)
from .frames import TimeFrame, chain_frame, load_frame, parse_frame
from .orders import (
    Rel,
    cmp_families,
    cmp_masks,
    cmp_setvals,
    cmp_subsets,
    equiv_masks,
    equiv_setvals,
    equiv_subsets,
)
from .poset import OmpPoset, Subset, load_poset, parse_poset
from .reconstruct import (
    EquivClaim,
    ReconstructionResult,
    build_preference,
    verify_reconstruction,
)
from .tense import (
    Family,
    lift_valuation,
    phi,
    prime_setval,
    prime_valuation,
    star,
    tense,
    tense_family,
    tense_setval,
)
from .verify import (
    LawReport,
    check_adjointness,
    check_composition_laws,
    check_dynamic_pair,
    check_preservation_transfer,
    compare_setvals,
    eval_inequality,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
