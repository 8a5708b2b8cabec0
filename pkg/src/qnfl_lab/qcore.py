"""Statevector primitives for a bipartite register H_X (x) H_R.

Pure states live on the composite space H_X (x) H_R, where H_X is the
register a unitary acts on and H_R is a reference system that purifies
entangled inputs.  Amplitudes are stored as a flat complex vector with
the X factor as the high-order index:

    index = x * dim_r + r

so reshaping to ``(dim_x, dim_r)`` is a zero-copy view, and any operator
acting on H_X alone is a left matrix action on that view.  This is what
makes :func:`apply_on_x` cheap: a ``(d, d)`` matrix times a ``(d, d_r)``
matrix, never a ``(d * d_r, d * d_r)`` product.

The Schmidt decomposition of a state is exactly the SVD of that reshaped
matrix: the singular values are the Schmidt coefficients (descending,
squares summing to one for a normalized state) and the singular vectors
are the orthonormal Schmidt bases on each factor.  The Schmidt rank of a
state equals the number of singular values above a relative cutoff, and
the X-side Schmidt vectors are what the structure checkers downstream
stack and rank-test.

Everything here is dense numpy at double precision; the regime of
interest is d <= 256 where dense linear algebra is cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

# Validation tolerances.  State norms are checked absolutely; unitarity
# checks scale with dimension because Frobenius error accumulates.
NORM_ATOL = 1e-10
UNITARY_ATOL_PER_DIM = 1e-9
EXTRACT_ATOL = 1e-8
SCHMIDT_REL_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on H_X (x) H_R with the index convention above."""

    amplitudes: np.ndarray
    dim_x: int
    dim_r: int

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.dim_x < 1 or self.dim_r < 1:
            raise ValueError("dimensions must be positive")
        if amps.size != self.dim_x * self.dim_r:
            raise ValueError(
                f"amplitude count {amps.size} != dim_x*dim_r = {self.dim_x * self.dim_r}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {norm!r} departs from 1 beyond {NORM_ATOL}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def matrix(self) -> np.ndarray:
        """Zero-copy (dim_x, dim_r) view of the amplitudes."""
        return self.amplitudes.reshape(self.dim_x, self.dim_r)

    @property
    def dim(self) -> int:
        return self.dim_x * self.dim_r


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Dense unitary matrix; unitarity is validated at construction."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"unitary must be square, got shape {mat.shape}")
        d = mat.shape[0]
        defect = float(np.linalg.norm(mat.conj().T @ mat - np.eye(d)))
        if defect > UNITARY_ATOL_PER_DIM * d:
            raise ValueError(f"matrix is not unitary: defect {defect:.3e}")
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt data of a bipartite state.

    ``coeffs`` are the nonzero Schmidt coefficients in descending order.
    ``x_vectors`` and ``r_vectors`` hold the matching orthonormal Schmidt
    vectors as columns, so the state is sum_k coeffs[k] * x_k (x) r_k.
    """

    coeffs: np.ndarray
    x_vectors: np.ndarray
    r_vectors: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def reconstruct(self) -> np.ndarray:
        """Flat amplitude vector rebuilt from the Schmidt data."""
        mat = (self.x_vectors * self.coeffs[None, :]) @ self.r_vectors.T
        return mat.reshape(-1)


def basis_state(dim_x: int, dim_r: int, x: int, r: int = 0) -> StateVector:
    """Computational basis state |x>_X (x) |r>_R."""
    if not (0 <= x < dim_x and 0 <= r < dim_r):
        raise ValueError("basis index out of range")
    amps = np.zeros(dim_x * dim_r, dtype=complex)
    amps[x * dim_r + r] = 1.0
    return StateVector(amps, dim_x, dim_r)


def tensor(
    a: Union[StateVector, UnitaryOperator], b: Union[StateVector, UnitaryOperator]
) -> Union[StateVector, UnitaryOperator]:
    """Tensor product of two states or two unitaries.

    For states the left operand becomes the X factor and the right the R
    factor of the product, consistent with the high-order-X convention.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dim, b.dim)
    if isinstance(a, UnitaryOperator) and isinstance(b, UnitaryOperator):
        return UnitaryOperator(np.kron(a.entries, b.entries))
    raise TypeError("tensor expects two StateVectors or two UnitaryOperators")


def apply_on_x(u: UnitaryOperator, psi: StateVector) -> StateVector:
    """(U (x) I) |psi> without materializing the composite matrix."""
    if u.dim != psi.dim_x:
        raise ValueError(f"unitary dim {u.dim} != state dim_x {psi.dim_x}")
    out = u.entries @ psi.matrix
    return StateVector(out.reshape(-1), psi.dim_x, psi.dim_r)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim_x != b.dim_x or a.dim_r != b.dim_r:
        raise ValueError("states live on different spaces")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def schmidt(psi: StateVector, tol: float = SCHMIDT_REL_CUTOFF) -> SchmidtDecomposition:
    """Schmidt decomposition via SVD of the (dim_x, dim_r) reshape.

    Coefficients below ``tol`` times the largest one are treated as zero
    and dropped, which sets the reported Schmidt rank.
    """
    u, s, vh = np.linalg.svd(psi.matrix, full_matrices=False)
    keep = int(np.count_nonzero(s > tol * s[0]))
    return SchmidtDecomposition(
        coeffs=s[:keep], x_vectors=u[:, :keep], r_vectors=vh[:keep].T
    )


def extract_unitary(apply: Callable[[np.ndarray], np.ndarray], dim: int) -> UnitaryOperator:
    """Assemble the matrix of a circuit column-by-column from basis images.

    ``apply`` must be linear on H_X vectors of length ``dim``.  The result
    is validated: a non-unitary assembly signals a broken circuit.
    """
    cols = np.empty((dim, dim), dtype=complex)
    for j in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[j] = 1.0
        cols[:, j] = np.asarray(apply(e), dtype=complex).reshape(dim)
    defect = float(np.linalg.norm(cols.conj().T @ cols - np.eye(dim)))
    if defect > EXTRACT_ATOL:
        raise ValueError(
            f"extracted matrix is not unitary (defect {defect:.3e}); broken circuit?"
        )
    return UnitaryOperator(cols)
