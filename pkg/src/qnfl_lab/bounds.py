"""Risk functional and no-free-lunch lower bounds for unitary learning.

The figure of merit throughout is the average-case risk between a target
unitary U and a hypothesis V on a d-dimensional space,

    risk(U, V) = 1 - (d + |Tr[U^dag V]|^2) / (d * (d + 1)),

which is the Haar-averaged infidelity between U|x> and V|x>.  It is zero
iff V equals U up to a global phase and grows as the overlap trace
shrinks.

Training on a size-t set of entangled samples can pin V down only on the
subspace of H_X the samples actually span, and only up to one free phase
per orthogonality class.  That caps the achievable |Tr[U^dag V]| and
yields lower bounds on the expected risk after perfect training.  Four
regimes are exposed here:

* ``bound_fixed``      every sample has Schmidt rank exactly r;
* ``bound_average``    the sample ranks average to r_mean (may be real);
* ``bound_orthogonal`` mutually orthogonal samples with given ranks,
  whose phases stay independent, so the trace adds incoherently and only
  sum(r_j^2) survives in expectation;
* ``bound_lindep``     samples confined to an r_max-dimensional subspace
  of H_X, where extra samples add nothing and r_max alone enters.

All bounds are clamped to [0, 1]; past the point where the samples fix V
completely the raw expression goes negative and the bound is vacuous.

``eigenphase`` reads off the residual phase freedom: after perfect
training each input is an eigenvector of (U^dag V (x) I), and the
argument of <psi|(U^dag V (x) I)|psi> is the phase the hypothesis chose
for that sample's class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .qcore import StateVector, UnitaryOperator

# Below this magnitude the phase of <psi|(U^dag V (x) I)|psi> is noise.
PHASE_MAGNITUDE_FLOOR = 1e-12

MatrixLike = Union[UnitaryOperator, np.ndarray]


@dataclass(frozen=True)
class RiskReport:
    """Risk value together with the overlap trace that produced it."""

    risk: float
    abs_trace: float
    dim: int


class Eigenphase(NamedTuple):
    theta: float
    magnitude: float


def _as_matrix(u: MatrixLike) -> np.ndarray:
    if isinstance(u, UnitaryOperator):
        return u.entries
    return np.asarray(u, dtype=complex)


def risk(u: MatrixLike, v: MatrixLike) -> RiskReport:
    """Average-case risk between target u and hypothesis v."""
    mu, mv = _as_matrix(u), _as_matrix(v)
    if mu.shape != mv.shape:
        raise ValueError(f"shape mismatch {mu.shape} vs {mv.shape}")
    d = mu.shape[0]
    # Tr[U^dag V] as an elementwise sum; no product matrix needed.
    abs_trace = float(abs(np.vdot(mu, mv)))
    value = 1.0 - (d + abs_trace**2) / (d * (d + 1.0))
    return RiskReport(risk=value, abs_trace=abs_trace, dim=d)


def _clamped(d: int, trace_sq: float) -> float:
    if d < 1:
        raise ValueError("dimension must be positive")
    return max(0.0, 1.0 - (trace_sq + d + 1.0) / (d * (d + 1.0)))


def bound_fixed(d: int, r: int, t: int) -> float:
    """Expected-risk floor for t samples of fixed Schmidt rank r."""
    if r < 0 or t < 0:
        raise ValueError("rank and sample count must be non-negative")
    return _clamped(d, float(r * t) ** 2)


def bound_average(d: int, r_mean: float, t: int) -> float:
    """As :func:`bound_fixed` but for a (possibly real) mean rank."""
    if r_mean < 0 or t < 0:
        raise ValueError("mean rank and sample count must be non-negative")
    return _clamped(d, float(r_mean * t) ** 2)


def bound_orthogonal(d: int, ranks: Sequence[int]) -> float:
    """Expected-risk floor for mutually orthogonal samples.

    Independent phases make the per-sample traces add incoherently, so
    only the sum of squared ranks enters.
    """
    ranks = [int(r) for r in ranks]
    if any(r < 0 for r in ranks):
        raise ValueError("ranks must be non-negative")
    return _clamped(d, float(sum(r * r for r in ranks)))


def bound_lindep(d: int, r_max: int) -> float:
    """Expected-risk floor when all samples span <= r_max dims of H_X."""
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    return _clamped(d, float(r_max) ** 2)


def eigenphase(u: MatrixLike, v: MatrixLike, psi: StateVector) -> Eigenphase:
    """Phase and magnitude of <psi|(U^dag V (x) I)|psi>.

    For a perfectly trained hypothesis the magnitude is 1 and theta is
    the phase attached to psi's orthogonality class.  A magnitude at the
    numerical floor means psi carries no phase information and is an
    error.
    """
    mu, mv = _as_matrix(u), _as_matrix(v)
    if mu.shape[0] != psi.dim_x:
        raise ValueError("operator dimension does not match state's X factor")
    w = mu.conj().T @ mv
    z = complex(np.vdot(psi.matrix, w @ psi.matrix))
    magnitude = abs(z)
    if magnitude < PHASE_MAGNITUDE_FLOOR:
        raise ValueError("overlap magnitude is numerically zero; no phase defined")
    # np.angle returns values in (-pi, pi].
    return Eigenphase(theta=float(np.angle(z)), magnitude=magnitude)
