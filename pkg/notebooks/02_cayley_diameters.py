"""
Diameters and injectivity radii mod p
=====================================

Reduce the Sanov generators mod p and walk the Cayley graph of SL_2(p)
breadth first.  The diameter grows like log p, and so does the radius of the
free ball on which reduction mod p stays injective.
"""

import math

import numpy as np

from logwitness.cayley import diameter, explore, fit_log_constant, injectivity_search, product_growth
from logwitness.intmat import sanov_generators
from logwitness.modp import reduce_generators
from logwitness.primes import iter_primes_between

S = sanov_generators()
primes = list(iter_primes_between(4, 60))

rows = []
for p in primes:
    ball = explore(reduce_generators(S, p))
    rec = diameter(ball)
    inj = injectivity_search(p, S)
    rows.append((p, len(ball), rec.diameter, inj.radius))
    print(f"p={p:3d}  |SL2(p)|={len(ball):7d}  diameter={rec.diameter:2d}  injectivity radius={inj.radius}")

table = np.array(rows)
C = fit_log_constant(table[:, 0], table[:, 2])
print(f"diameter <= {C:.3f} log p on every row")

# %%
# the injectivity radius comes with a concrete pair of colliding words
inj = injectivity_search(23, S)
u, v = inj.collision
print("mod 23:", u.render(), "==", v.render())

# %%
# tripling a small ball
ball = explore(reduce_generators(S, 11))
for r in (1, 2):
    g = product_growth(ball, r)
    print(f"|A|={g.size_A}  |AAA|={g.size_AAA}  log|AAA|/log|A|={g.exponent:.3f}  covers={g.covers_group}")
print("log 1320 / log 11 =", round(math.log(1320) / math.log(11), 3))
