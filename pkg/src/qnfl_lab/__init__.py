"""No-free-lunch bounds and training experiments for unitary learning.

The package measures how well a variational circuit can learn a target
unitary from entangled training samples, and compares the measured risk
against analytic lower bounds determined by the samples' entanglement
structure (Schmidt ranks, mutual orthogonality, shared span).

Layout:

    qcore    statevector and unitary primitives, Schmidt decomposition
    haar     reproducible Haar sampling and seed management
    bounds   risk functional, lower bounds, eigenphase readout
    datagen  structured training-set generators and structure checkers
    qnn      hardware-efficient ansatz, loss, analytic gradient, trainer
    exper    experiment grids, aggregation, CSV/SVG reporting
    cli      command-line front end (``qnfl``)
"""

from .bounds import (
    Eigenphase,
    RiskReport,
    bound_average,
    bound_fixed,
    bound_lindep,
    bound_orthogonal,
    eigenphase,
    risk,
)
from .datagen import (
    Structure,
    StructureReport,
    TrainingSet,
    check_li_hx,
    check_opr,
    gen_lindep,
    gen_orthogonal,
    gen_varying_rank,
    load_training_set,
    save_training_set,
)
from .exper import (
    CellSummary,
    ExperimentConfig,
    ExperimentRecord,
    aggregate,
    emit_csv,
    emit_plot,
    experiment_preset,
    phase_report,
    run_experiment,
)
from .haar import SeededRng, derive_seed, haar_unitary, random_schmidt_coeffs
from .qcore import (
    SchmidtDecomposition,
    StateVector,
    UnitaryOperator,
    apply_on_x,
    basis_state,
    extract_unitary,
    inner,
    schmidt,
    tensor,
)
from .qnn import (
    Ansatz,
    TrainConfig,
    TrainResult,
    ansatz_apply,
    ansatz_unitary,
    default_layers,
    loss,
    loss_gradient,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Ansatz",
    "CellSummary",
    "Eigenphase",
    "ExperimentConfig",
    "ExperimentRecord",
    "RiskReport",
    "SchmidtDecomposition",
    "SeededRng",
    "Structure",
    "StructureReport",
    "StateVector",
    "TrainConfig",
    "TrainResult",
    "TrainingSet",
    "UnitaryOperator",
    "aggregate",
    "ansatz_apply",
    "ansatz_unitary",
    "apply_on_x",
    "basis_state",
    "bound_average",
    "bound_fixed",
    "bound_lindep",
    "bound_orthogonal",
    "check_li_hx",
    "check_opr",
    "default_layers",
    "derive_seed",
    "eigenphase",
    "emit_csv",
    "emit_plot",
    "experiment_preset",
    "extract_unitary",
    "gen_lindep",
    "gen_orthogonal",
    "gen_varying_rank",
    "haar_unitary",
    "inner",
    "load_training_set",
    "loss",
    "loss_gradient",
    "phase_report",
    "random_schmidt_coeffs",
    "risk",
    "run_experiment",
    "save_training_set",
    "schmidt",
    "tensor",
    "train",
]
