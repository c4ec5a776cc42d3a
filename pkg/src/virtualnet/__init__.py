"""Virtual linear-optics networks for multimode squeezed light measured by a pixelated homodyne detector."""

from .errors import (
    ConfigError,
    DegenerateInputError,
    NetworkParseError,
    PreconditionError,
)
from .gaussian import (
    V0,
    QuadratureState,
    SqueezerSpec,
    apply_loss,
    apply_orthogonal,
    db_to_variance,
    experimental_inputs,
    infer_loss,
    input_state,
    vacuum_state,
    variance_to_db,
)
from .network import (
    BeamSplitter,
    PhaseFlip,
    Swap,
    VirtualNetwork,
    compile_cluster,
    compile_recipe,
    gain_basis,
    u_in,
    validate_orthogonal,
)
from .criteria import (
    ClusterSpec,
    InseparabilityReport,
    cluster_inequalities,
    reid_epr,
    vlf_report,
    vlf_value,
)
from .optimize import (
    GaConfig,
    GainSolution,
    closed_form_solution,
    optimal_gains_closed_form,
    optimize_ebs_reflectivity,
    optimize_gains_ga,
)

__version__ = "0.1.0"
