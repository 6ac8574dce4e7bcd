"""schurcomm: Schur multiplier commutator estimates in symmetric ideals.

Library layout:

symnorm    singular values, rearrangement, submajorization, the symmetric
           gauge norms (Schatten, Ky Fan, Orlicz, Lorentz)
schur      divided-difference multipliers, the commutator identity,
           norm lower bounds and witness transfer
construct  the explicit model matrices and the tensor lifts
funcs      smooth step, growth schedules, the slow-growth envelope and the
           damped absolute value
pipeline   stages, commutator pairs, direct-sum truncations, full runs
cli        command line front end (verify / sweep / theorem)
"""

from .config import get_option, reset_options, set_option
from .errors import (
    DegenerateWitnessError,
    FunctionDomainError,
    InvalidInputError,
    NoWitnessError,
    NumericError,
    ScheduleInfeasibleError,
    SchurCommError,
    SizeLimitError,
)
from .symnorm import (
    SingularValueSequence,
    SymmetricNormSpec,
    decreasing_rearrangement,
    kyfan,
    lorentz,
    orlicz,
    orlicz_exp,
    orlicz_power,
    schatten,
    singular_values,
    spec_from_json,
    spec_to_json,
    submajorizes,
    symmetric_norm,
    verify_block_family,
    verify_norm_axioms,
)
from .schur import (
    BlowupWitness,
    DiagonalOperator,
    DividedDifferenceSymbol,
    commutator,
    divided_difference,
    dual_witness_transfer,
    group_spectrum,
    multiplier_norm_lower_bound,
    schur_apply,
    verify_schur_commutator_identity,
)
from .construct import (
    ModelMatrices,
    TensorLift,
    build_model_matrices,
    commutator_ba,
    make_tensor_lift,
    verify_intertwining,
    verify_norm_sandwich,
)
from .funcs import (
    GrowthSchedule,
    ScalarC1Function,
    build_damped_abs,
    build_schedule,
    build_slow_growth,
    power_function,
    smooth_step,
    verify_c1,
)
from .pipeline import (
    LOWER_BOUND_CONST,
    TRANSFER_CONST,
    CommutatorPair,
    CounterexampleStage,
    PipelineConfig,
    assemble_direct_sum,
    build_commutator_pair,
    build_stage,
    check_commutator_bounds,
    construction_schedule,
    run_construction,
    scaling_sequence,
    sqrt_log_growth,
)

__version__ = "0.1.0"
