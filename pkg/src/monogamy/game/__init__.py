"""Game operators, strategy evaluation, bound checks and see-saw lower bounds."""

from .basis import BasisOverlap, verify_basis_overlap
from .coset import (
    bin_by_coset,
    extended_game_strategy,
    coset_overlap_sweep,
    verify_lemma1,
    verify_lemma3,
    winning_probability_direct_coset,
)
from .ops import operator_norm, psd_sqrt, sum_bound_rhs
from .pipeline import ChainViolation, PipelineReport, norm_bound_pipeline
from .projectors import (
    estimate_winning_probability_enlg,
    expected_projector,
    game_projector_basis,
    game_projector_coset,
    winning_probability_enlg,
)
from .reduction import basis_averaged_value, reduce_coset_to_basis_strategy
from .seesaw import SeesawResult, seesaw_optimize
from .strategy import (
    CosetStrategy,
    ENLGStrategy,
    InvalidStrategy,
    KrausChannel,
    strategy_from_json,
    strategy_to_json,
)
