"""
Words with constants and the Sanov representation
=================================================

A word with constants mixes the free generators a, b with a variable x.
Substituting x := g and reducing freely gives an element of F(a, b);
the Sanov matrices give an exact copy of F(a, b) inside SL_2(Z).
"""

from logwitness.intmat import check_height_bound, eval_const_word, eval_free_word, height, sanov_generators
from logwitness.words import GeneratorSet, parse_const_word, parse_free_word, substitute

gens = GeneratorSet.default(2)
S = sanov_generators()

# %%
# parsing: exponents bind to the last atom, parentheses group
w = parse_const_word("(x a x^-1 a^-1)^2 b", gens)
print(w, "| length", len(w), "| constants", [c.render(gens) for c in w.constants])

g = parse_free_word("a b^-1", gens)
print("w(a b^-1) =", substitute(w, g).render(gens))

# %%
# evaluation commutes with substitution
X = eval_free_word(g, S)
print(eval_const_word(w, X, S))
print(eval_free_word(substitute(w, g), S))

# %%
# entries grow at most like 4^|g|
for text in ["a", "a b", "a b a b", "(a b)^8"]:
    u = parse_free_word(text, gens)
    print(f"{text:10s} |g|={len(u):2d}  height={height(eval_free_word(u, S)):8d}  bound={4 ** len(u)}")

rep = check_height_bound(8, S)
print("ball of radius 8:", rep.words_checked, "words, worst ratio", rep.max_ratio)
