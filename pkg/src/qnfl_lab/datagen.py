"""Structured training sets for unitary learning, plus structure checkers.

A training set is a list of (input, output) state pairs on H_X (x) H_R
with output = (U (x) I) input for a single target unitary U.  What a set
can teach a learner about U is governed by three structural properties
of its inputs:

* the Schmidt ranks r_j (how much of H_X each sample touches),
* orthogonal-partitioning resistance, OPR (whether the set can be split
  into two mutually orthogonal halves; if it can, each half keeps an
  independent phase),
* linear independence of the pooled Schmidt vectors in H_X (whether
  samples overlap on the same X-subspace).

Three generators produce sets that hit controlled corners of this space:

``gen_varying_rank``  independent samples whose ranks are drawn in
    offset pairs (r_bar + o, r_bar - o) so the mean rank is exactly
    r_bar; rank-r states are built as sum_k sqrt(c_k) P|k> (x) Q|k> with
    independent Haar P, Q per sample.

``gen_orthogonal``    samples carved out of disjoint blocks of H_X, so
    the Gram matrix is exactly the identity; one shared Haar rotation
    P (x) Q hides the block structure without breaking orthogonality.
    The reference dimension is the smallest power of two holding rank r.

``gen_lindep``        every sample's Schmidt vectors drawn from the same
    r-dimensional subspace of H_X (consecutive basis pairs remixed by
    Haar 2x2 blocks per sample), so the pooled span stays r-dimensional
    while the set remains OPR.  The construction is generically valid
    and verified; on a bad draw the inputs are regenerated.

The checkers are the measurement side: ``check_opr`` tests connectivity
of the non-orthogonality graph (edge iff |<psi_i|psi_j>| > tol), which is
equivalent to resistance to orthogonal 2-partitions, and ``check_li_hx``
Schmidt-decomposes every input and rank-tests the pooled X-side Schmidt
vectors.

Sets round-trip through a small JSON format shared by the command-line
tools; amplitudes are written as (real, imaginary) decimal pairs that
reload bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .haar import SeededRng, haar_unitary, random_schmidt_coeffs
from .qcore import StateVector, UnitaryOperator, apply_on_x, schmidt

# Default threshold for "numerically orthogonal" in the checkers.
ORTHO_TOL = 1e-8
# Generated pairs must satisfy output = (U (x) I) input this tightly.
PAIR_ATOL = 1e-9
DEFAULT_MAX_RETRIES = 100


class Structure(str, Enum):
    """Declared structural family of a training set."""

    VARYING_RANK = "varying-rank"
    ORTHOGONAL = "orthogonal"
    LINDEP = "lindep"
    GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Pairs (input, output) with output = (target (x) I) input."""

    dim_x: int
    dim_r: int
    pairs: tuple
    target: UnitaryOperator
    structure: Structure = Structure.GENERIC
    seed: Union[int, None] = None

    def __post_init__(self) -> None:
        if len(self.pairs) < 1:
            raise ValueError("training set must contain at least one pair")
        if self.target.dim != self.dim_x:
            raise ValueError("target dimension does not match dim_x")
        for inp, out in self.pairs:
            if (inp.dim_x, inp.dim_r) != (self.dim_x, self.dim_r):
                raise ValueError("input state lives on the wrong space")
            if (out.dim_x, out.dim_r) != (self.dim_x, self.dim_r):
                raise ValueError("output state lives on the wrong space")
            expect = apply_on_x(self.target, inp)
            err = float(np.linalg.norm(out.amplitudes - expect.amplitudes))
            if err > PAIR_ATOL:
                raise ValueError(f"output is not the target image (|diff| = {err:.3e})")
        object.__setattr__(self, "pairs", tuple((i, o) for i, o in self.pairs))

    @property
    def t(self) -> int:
        return len(self.pairs)

    @property
    def inputs(self) -> tuple:
        return tuple(inp for inp, _ in self.pairs)

    @property
    def outputs(self) -> tuple:
        return tuple(out for _, out in self.pairs)


@dataclass(frozen=True)
class StructureReport:
    """Measured structure of a set of input states."""

    ranks: tuple
    mean_rank: float
    d_sx: int
    card_sx: int
    is_opr: bool
    is_li_hx: bool


def check_opr(states: Sequence[StateVector], tol: float = ORTHO_TOL) -> bool:
    """True iff no orthogonal 2-partition of the states exists.

    Equivalent formulation: the graph with an edge between i and j iff
    |<psi_i|psi_j>| > tol is connected.  A singleton is trivially OPR.
    """
    m = len(states)
    if m == 0:
        raise ValueError("need at least one state")
    if m == 1:
        return True
    amps = np.stack([s.amplitudes for s in states])
    gram = np.abs(amps.conj() @ amps.T)
    adj = gram > tol
    # Breadth-first search from state 0.
    seen = np.zeros(m, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in np.nonzero(adj[i] & ~seen)[0]:
                seen[j] = True
                nxt.append(int(j))
        frontier = nxt
    return bool(seen.all())


def check_li_hx(states: Sequence[StateVector], tol: float = ORTHO_TOL) -> StructureReport:
    """Schmidt-decompose every input and rank-test the pooled X vectors.

    ``d_sx`` is the numerical rank of the stacked X-side Schmidt vectors
    and ``card_sx`` their count; the set is linearly independent in H_X
    iff the two agree.
    """
    if len(states) == 0:
        raise ValueError("need at least one state")
    decomps = [schmidt(s, tol=tol) for s in states]
    ranks = tuple(dec.rank for dec in decomps)
    pooled = np.concatenate([dec.x_vectors for dec in decomps], axis=1)
    sv = np.linalg.svd(pooled, compute_uv=False)
    d_sx = int(np.count_nonzero(sv > tol * sv[0]))
    card_sx = int(sum(ranks))
    return StructureReport(
        ranks=ranks,
        mean_rank=float(np.mean(ranks)),
        d_sx=d_sx,
        card_sx=card_sx,
        is_opr=check_opr(states, tol=tol),
        is_li_hx=(d_sx == card_sx),
    )


def _rank_r_state(
    d: int, d_r: int, r: int, basis_x: np.ndarray, rng: SeededRng
) -> StateVector:
    """State sum_k coeffs[k] basis_x[:, k] (x) Q|k> with fresh Haar Q."""
    coeffs = random_schmidt_coeffs(r, rng)
    q = haar_unitary(d_r, rng).entries
    mat = (basis_x[:, :r] * coeffs[None, :]) @ q[:, :r].T
    return StateVector(mat.reshape(-1), d, d_r)


def gen_varying_rank(d: int, d_r: int, t: int, r_bar: int, rng: SeededRng) -> TrainingSet:
    """Independent Haar samples whose ranks average exactly to r_bar.

    Ranks come in pairs (r_bar + o, r_bar - o) with o drawn uniformly on
    {0, ..., min(r_bar - 1, d - r_bar)}; an odd trailing sample sits at
    exactly r_bar.  Requires d_r >= r_bar + that maximal offset so every
    drawn rank fits in the reference factor.
    """
    if not (1 <= r_bar <= d):
        raise ValueError("need 1 <= r_bar <= d")
    if t < 1:
        raise ValueError("need at least one sample")
    offset = min(r_bar - 1, d - r_bar)
    if d_r < r_bar + offset:
        raise ValueError(f"d_r must be >= {r_bar + offset} to hold the drawn ranks")
    target = haar_unitary(d, rng)
    ranks = []
    for _ in range(t // 2):
        o = int(rng.generator.integers(0, offset + 1))
        ranks.extend([r_bar + o, r_bar - o])
    if t % 2 == 1:
        ranks.append(r_bar)
    pairs = []
    for r in ranks:
        p = haar_unitary(d, rng).entries
        inp = _rank_r_state(d, d_r, r, p, rng)
        pairs.append((inp, apply_on_x(target, inp)))
    return TrainingSet(d, d_r, tuple(pairs), target, Structure.VARYING_RANK, rng.seed)


def gen_orthogonal(d: int, t: int, r: int, rng: SeededRng) -> TrainingSet:
    """Mutually orthogonal rank-r samples (Gram matrix exactly identity).

    Sample j occupies X-block {r*j, ..., r*j + r - 1}, so r * t <= d is
    required; a single Haar rotation P (x) Q applied to all samples
    preserves the exact orthogonality.  The reference dimension is the
    smallest power of two that is >= r.
    """
    if r < 1 or t < 1:
        raise ValueError("rank and sample count must be positive")
    if r * t > d:
        raise ValueError(f"orthogonal blocks need r*t <= d, got {r}*{t} > {d}")
    d_r = 1 << (r - 1).bit_length()
    target = haar_unitary(d, rng)
    p = haar_unitary(d, rng).entries
    q = haar_unitary(d_r, rng).entries
    pairs = []
    for j in range(t):
        coeffs = random_schmidt_coeffs(r, rng)
        mat = (p[:, r * j : r * j + r] * coeffs[None, :]) @ q[:, :r].T
        inp = StateVector(mat.reshape(-1), d, d_r)
        pairs.append((inp, apply_on_x(target, inp)))
    return TrainingSet(d, d_r, tuple(pairs), target, Structure.ORTHOGONAL, rng.seed)


def gen_lindep(
    d: int,
    t: int,
    r: int,
    rng: SeededRng,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> TrainingSet:
    """Samples confined to one r-dimensional X-subspace, OPR by rejection.

    The first sample uses an orthonormal frame B (the first r columns of
    a Haar unitary); every further sample remixes consecutive column
    pairs of B with independent Haar 2x2 blocks, which keeps the span
    while decorrelating the samples.  An odd trailing column stays
    unmixed.  The pooled span (d_sx = r) and OPR are verified; a failed
    draw regenerates the inputs, up to ``max_retries`` times.
    """
    if not (1 <= r <= d):
        raise ValueError("need 1 <= r <= d")
    if t < 1:
        raise ValueError("need at least one sample")
    target = haar_unitary(d, rng)
    for _ in range(max_retries):
        frame = haar_unitary(d, rng).entries[:, :r]
        pairs = []
        for j in range(t):
            if j == 0:
                basis = frame
            else:
                basis = frame.copy()
                for i in range(0, r - 1, 2):
                    mix = haar_unitary(2, rng).entries
                    basis[:, i : i + 2] = frame[:, i : i + 2] @ mix
            inp = _rank_r_state(d, d, r, basis, rng)
            pairs.append((inp, apply_on_x(target, inp)))
        report = check_li_hx([inp for inp, _ in pairs])
        if report.d_sx == r and report.is_opr:
            return TrainingSet(d, d, tuple(pairs), target, Structure.LINDEP, rng.seed)
    raise RuntimeError(f"no OPR rank-{r} span after {max_retries} attempts")


# --- JSON wire format ------------------------------------------------------


def _amps_to_json(amps: np.ndarray) -> list:
    return [[float(a.real), float(a.imag)] for a in amps]


def _amps_from_json(data: list) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


def training_set_to_dict(s: TrainingSet) -> dict:
    return {
        "d": s.dim_x,
        "d_r": s.dim_r,
        "t": s.t,
        "structure": s.structure.value,
        "seed": s.seed,
        "target": _amps_to_json(s.target.entries.reshape(-1)),
        "pairs": [
            {
                "input": _amps_to_json(inp.amplitudes),
                "output": _amps_to_json(out.amplitudes),
            }
            for inp, out in s.pairs
        ],
    }


def training_set_from_dict(data: dict) -> TrainingSet:
    d, d_r = int(data["d"]), int(data["d_r"])
    target = UnitaryOperator(_amps_from_json(data["target"]).reshape(d, d))
    pairs = tuple(
        (
            StateVector(_amps_from_json(p["input"]), d, d_r),
            StateVector(_amps_from_json(p["output"]), d, d_r),
        )
        for p in data["pairs"]
    )
    if len(pairs) != int(data["t"]):
        raise ValueError("pair count does not match declared t")
    seed = data.get("seed")
    return TrainingSet(
        d,
        d_r,
        pairs,
        target,
        Structure(data.get("structure", "generic")),
        None if seed is None else int(seed),
    )


def save_training_set(s: TrainingSet, path) -> None:
    Path(path).write_text(json.dumps(training_set_to_dict(s)) + "\n")


def load_training_set(path) -> TrainingSet:
    return training_set_from_dict(json.loads(Path(path).read_text()))
