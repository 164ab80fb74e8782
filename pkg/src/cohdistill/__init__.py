"""One-shot probabilistic distillation of quantum coherence.

A d-level pure state is measured by a strictly incoherent channel whose
outcomes are the maximally coherent states of every dimension q <= d;
the best outcome occurs with the optimal conversion probability.  The
package also provides the two-step no-waste variant, the entanglement
analog over Schmidt coefficients, the coherence-loss bookkeeping and
the trade-off curves between input and average output coherence.
"""

from .entanglement import (
    SchmidtState,
    ent_distill,
    ent_intermediate,
    max_distilled_entanglement,
)
from .nowaste import Infeasible, IntermediatePlan, find_intermediate, two_step_distill
from .protocol import (
    ChannelReport,
    DistillationChannel,
    KrausOperator,
    OutcomeEnsemble,
    apply_kraus,
    average_output_coherence,
    build_channel,
    coherence_loss,
    max_success_probability,
    outcome_probabilities,
    verify_sio,
)
from .sampling import sample_outcomes, z_scores
from .states import (
    ATOL,
    INPUT_ATOL,
    PureCoherentState,
    RawPureState,
    canonicalize,
    harmonic_power_state,
    l1_coherence,
    majorizes,
    max_coherent,
)
from .tradeoff import (
    SweepPair,
    TradeoffPoint,
    figure2_sweep,
    harmonic_curve,
    match_harmonic_alpha,
    min_output_coherence,
    sweep_csv_bytes,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ATOL",
    "INPUT_ATOL",
    "ChannelReport",
    "DistillationChannel",
    "Infeasible",
    "IntermediatePlan",
    "KrausOperator",
    "OutcomeEnsemble",
    "PureCoherentState",
    "RawPureState",
    "SchmidtState",
    "SweepPair",
    "TradeoffPoint",
    "apply_kraus",
    "average_output_coherence",
    "build_channel",
    "canonicalize",
    "coherence_loss",
    "ent_distill",
    "ent_intermediate",
    "figure2_sweep",
    "find_intermediate",
    "harmonic_curve",
    "harmonic_power_state",
    "l1_coherence",
    "majorizes",
    "match_harmonic_alpha",
    "max_coherent",
    "max_distilled_entanglement",
    "max_success_probability",
    "min_output_coherence",
    "outcome_probabilities",
    "sample_outcomes",
    "sweep_csv_bytes",
    "two_step_distill",
    "verify_sio",
    "write_sweep_csv",
    "z_scores",
]
