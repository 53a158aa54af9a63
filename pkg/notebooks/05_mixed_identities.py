"""
Mixed identities in small finite groups
=======================================

Finite groups always satisfy some law (x^m for the exponent m), and groups
with a big center or small commutator structure satisfy short mixed
identities.  PSL_2(p) has none of small length.
"""

from logwitness.oracle import group_exponent, load_group, mixed_identity_search

for name, L in [("c2", 2), ("c6", 6), ("psl2-5", 3)]:
    G = load_group(name)
    found = mixed_identity_search(G, L)
    print(f"{name:7s} order={G.order:3d} exponent={group_exponent(G):3d}  L={L}:", [w.render(G) for w in found])

G = load_group("psl2-7")
print("PSL2(7) has order", G.order, "and center of size", len(G.center))
print("length <= 2:", mixed_identity_search(G, 2))
