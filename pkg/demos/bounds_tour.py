"""Tour of the analytic risk floors.

Evaluates the four lower bounds on a d = 64 target and prints how each
scales with the sample count t and the Schmidt rank r.  The clamp to
zero marks the point where the samples pin the target completely (up
to a global phase) and training can in principle drive the risk all
the way down.
"""

from qnfl_lab import (
    SeededRng,
    bound_average,
    bound_fixed,
    bound_lindep,
    bound_orthogonal,
    haar_unitary,
    risk,
)

D = 64
RANKS = (1, 2, 4, 8)

print(f"risk floors for a d = {D} target")
print()

# --- fixed rank ------------------------------------------------------------

print("fixed rank: t samples of rank r constrain an (r*t)-dimensional slice")
print(" t\\r" + "".join(f"{r:>9}" for r in RANKS))
for t in (1, 2, 4, 8, 16, 32):
    row = (bound_fixed(D, r, t) for r in RANKS)
    print(f"{t:>4}" + "".join(f"{b:9.4f}" for b in row))
print(f"one maximally entangled sample (r = {D}): {bound_fixed(D, D, 1):.4f}")
print()

# --- mean rank -------------------------------------------------------------

print("only the mean rank matters when ranks vary across the set:")
for r_mean in (1.0, 1.5, 2.0):
    print(f"  r_mean = {r_mean:.1f}, t = 16  ->  {bound_average(D, r_mean, 16):.4f}")
print()

# --- orthogonal vs linearly dependent --------------------------------------

# Eight rank-8 samples constrain 64 dimensions either way; what differs
# is how much of the overlap trace survives the residual phase freedom.
ranks = [8] * 8
print("same ranks, different structure (8 samples of rank 8):")
print(f"  mutually orthogonal  ->  {bound_orthogonal(D, ranks):.4f}")
print(f"  one shared 8-dim span ->  {bound_lindep(D, 8):.4f}")
print(f"  generic (coherent)   ->  {bound_fixed(D, 8, 8):.4f}")
print()

# --- the floor is about information, not effort ----------------------------

rng = SeededRng(1)
u = haar_unitary(D, rng)
print("for scale, the risk of concrete hypotheses against a Haar target:")
print(f"  the target itself     ->  {risk(u, u).risk:.4f}")
print(f"  an unrelated Haar draw ->  {risk(u, haar_unitary(D, rng)).risk:.4f}")
