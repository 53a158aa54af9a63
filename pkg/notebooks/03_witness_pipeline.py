"""
Short non-solutions through a finite quotient
=============================================

To show that w is not a mixed identity, pick a prime p in (C0 n, C0 n^2],
search SL_2(p) breadth first for a matrix where the word map is non-central,
then lift it to a short word in a, b and check the result exactly.
"""

from logwitness.intmat import sanov_generators
from logwitness.oracle import exact_complexity
from logwitness.pipeline import find_witness
from logwitness.words import GeneratorSet, parse_const_word

gens = GeneratorSet.default(2)
S = sanov_generators()

words = [
    "x",
    "x a x^-1 a^-1",
    "x a x b x^-1 a^-1 x^-1 b^-1",
    "(x a x^-1 a^-1)(x b x^-1 b^-1)(x a x^-1 a^-1)^-1(x b x^-1 b^-1)^-1",
]
for text in words:
    w = parse_const_word(text, gens)
    rep = find_witness(w, S)
    chi = exact_complexity(w, 4, gens).chi
    print(f"n={rep.n:2d} p={rep.p:3d} lift={rep.lift!r:8s} exact chi={chi}  {text}")

# %%
# the report is plain data
rep = find_witness(parse_const_word("x a x^-1 a^-1", gens), S)
for key, value in rep.to_dict(include_timings=False).items():
    print(f"{key:18s} {value}")
