"""Hand-built fixtures shared across the suite.

Two tiny worked examples appear in many tests:

* the single-qubit pair: inputs |0>|0> and |1>|1> with target H, whose
  best hypothesis after training on both samples still has risk 2/3;
* the two-qubit pair: a product-basis input and a Bell-basis input with
  target Z(x)Z, whose pooled Schmidt X-vectors are linearly dependent
  (four vectors spanning three dimensions).
"""

import numpy as np

from qnfl_lab import (
    StateVector,
    Structure,
    TrainingSet,
    UnitaryOperator,
    apply_on_x,
)

SQ2 = 1.0 / np.sqrt(2.0)

HADAMARD = UnitaryOperator(np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex))
ZZ = UnitaryOperator(np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex))
# Fits both pair outputs of the single-qubit set but is not H.
H_IMPOSTOR = UnitaryOperator(np.array([[SQ2, -SQ2], [SQ2, SQ2]], dtype=complex))
# Fits both pair outputs of the two-qubit set but differs from Z(x)Z.
ZZ_IMPOSTOR = UnitaryOperator(np.diag([1.0, -1.0, 1.0, 1.0]).astype(complex))


def state(amps, dim_x, dim_r) -> StateVector:
    a = np.asarray(amps, dtype=complex)
    return StateVector(a / np.linalg.norm(a), dim_x, dim_r)


def single_qubit_inputs() -> tuple:
    return state([1, 0, 0, 0], 2, 2), state([0, 0, 0, 1], 2, 2)


def single_qubit_set() -> TrainingSet:
    pairs = tuple((psi, apply_on_x(HADAMARD, psi)) for psi in single_qubit_inputs())
    return TrainingSet(2, 2, pairs, HADAMARD, Structure.GENERIC)


def two_qubit_inputs() -> tuple:
    """(|00>|0> + |01>|1>)/sqrt2 and (|Phi+>|0> + |Phi->|1>)/sqrt2."""
    psi1 = state([1, 0, 0, 1, 0, 0, 0, 0], 4, 2)
    # X index order |00>,|01>,|10>,|11>; R index is the low bit.
    phi_plus = np.array([1, 0, 0, 1]) * SQ2
    phi_minus = np.array([1, 0, 0, -1]) * SQ2
    amps = np.zeros(8, dtype=complex)
    amps[0::2] = phi_plus * SQ2
    amps[1::2] = phi_minus * SQ2
    psi2 = StateVector(amps, 4, 2)
    return psi1, psi2


def two_qubit_set() -> TrainingSet:
    pairs = tuple((psi, apply_on_x(ZZ, psi)) for psi in two_qubit_inputs())
    return TrainingSet(4, 2, pairs, ZZ, Structure.GENERIC)


def random_state(dim_x: int, dim_r: int, generator) -> StateVector:
    amps = generator.normal(size=dim_x * dim_r) + 1j * generator.normal(size=dim_x * dim_r)
    return StateVector(amps / np.linalg.norm(amps), dim_x, dim_r)
