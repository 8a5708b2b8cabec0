"""What the three training-set generators actually produce.

Draws one set from each family at d = 8 and prints the measured
structure: per-sample Schmidt ranks, the pooled X-span dimension d_sx,
and the two boolean properties (orthogonal-partition resistance and
linear independence in H_X).  The applicable risk floor follows from
the printed numbers alone.
"""

import numpy as np

from qnfl_lab import (
    SeededRng,
    bound_average,
    bound_lindep,
    bound_orthogonal,
    check_li_hx,
    gen_lindep,
    gen_orthogonal,
    gen_varying_rank,
)

D = 8
rng = SeededRng(7)


def show(label, s, bound):
    rep = check_li_hx(s.inputs)
    print(f"{label} (d = {s.dim_x}, d_r = {s.dim_r}, t = {s.t})")
    print(f"  ranks      {rep.ranks}  (mean {rep.mean_rank:.2f})")
    print(f"  pooled span d_sx = {rep.d_sx} of card_sx = {rep.card_sx} vectors")
    print(f"  opr = {rep.is_opr}, li_hx = {rep.is_li_hx}")
    print(f"  applicable floor: {bound:.4f}")
    print()
    return rep


# Ranks drawn in symmetric pairs around the requested mean.
s1 = gen_varying_rank(D, D, 2, 2, rng)
rep = show("varying-rank", s1, bound_average(D, 2, 2))

# Disjoint X-blocks: the Gram matrix is the identity by construction.
s2 = gen_orthogonal(D, 2, 4, rng)
show("orthogonal", s2, bound_orthogonal(D, [4, 4]))
amps = np.stack([psi.amplitudes for psi in s2.inputs])
gram = amps.conj() @ amps.T
print(f"  largest off-diagonal Gram entry: {abs(gram[0, 1]):.2e}")
print()

# Every sample lives in the same 2-dimensional slice of H_X, so extra
# samples repeat information the learner already has.
s3 = gen_lindep(D, 4, 2, rng)
rep = show("lindep", s3, bound_lindep(D, 2))
assert rep.d_sx == 2, "span should stay at the requested rank"

print("the lindep floor ignores t: four samples constrain no more than one")
print(f"  bound_lindep(d=8, r_max=2) = {bound_lindep(D, 2):.4f}")
print(f"  one rank-2 sample alone    = {bound_average(D, 2, 1):.4f}")
