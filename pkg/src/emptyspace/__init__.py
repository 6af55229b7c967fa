"""Empty-space mining for multivariate configuration data.

The pieces, roughly bottom-up: datasets normalize everything onto the unit
box; a kd-tree index answers nearest-neighbor queries; force-driven agents
walk into the gaps between data points; projections (PCA and a
cosine-preserving neighbor embedding) make the results visible; Pareto
analytics turn verified outcomes into a scalar progress readout; a surrogate
network plus phase machine decide how much of the loop may run unattended.
"""

from .dataset import (
    BOX_CONSTRAINT,
    BoxConstraint,
    Configuration,
    Dataset,
    Halfspace,
    IntervalBrush,
    VariableSpec,
    evaluate_constraints,
    violates_any,
)
from .neighbors import NeighborIndex, NeighborSet, brute_force_query
from .pareto import (
    BudgetExhaustedError,
    ObjectivePair,
    ParetoState,
    area_gain,
    dominance_area,
    pareto_front,
)
from .pipeline import (
    RoundReport,
    SearchPipeline,
    compare_methods,
    objective_pair_from_dataset,
    run_extrapolation,
)
from .projection import (
    NeighborEmbedding,
    PcaModel,
    cos_mds,
    fit_pca,
    move_delta,
    project,
    reconstruct,
    scree,
)
from .search import (
    AgentState,
    EsaParams,
    Trajectory,
    effective_sigma,
    lj_force_magnitude,
    lj_potential,
    resultant,
    run_agent,
    run_batch,
    step,
)
from .strategies import (
    ProposalBatch,
    blank_baseline,
    esa_proposals,
    pareto_improvement,
    random_sampling,
    random_walk,
)
from .surrogate import (
    InsufficientDataError,
    MlpModel,
    PhaseState,
    SurrogateConfig,
    advance_phase,
    ape,
    phase_for,
    refine,
    train,
    train_on_dataset,
)

__version__ = "0.1.0"
