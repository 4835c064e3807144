"""
Lagrangian subgroups and group-theoreticity
===========================================
"""

from tymtc.abelian import make_group
from tymtc.center import equivariantization_is_gt, is_group_theoretical, pointed_nondegenerate
from tymtc.forms import automorphism_from_images, hyperbolic_bicharacter, lagrangian_subgroups, parse_form_spec
from tymtc.ty import TYCategory

g = make_group([3, 3])
hyp = hyperbolic_bicharacter(g)
ell, _ = parse_form_spec(g, "diag:1,-2")
for name, chi in (("hyperbolic", hyp), ("elliptic", ell)):
    Ls = lagrangian_subgroups(chi)
    r = is_group_theoretical(TYCategory(chi))
    print(f"(Z/3)^2 {name}: {len(Ls)} Lagrangians {[str(L) for L in Ls]}, group-theoretical {bool(r)} via {r.method}, witness {r.witness}")

# 2-groups of square order always have one, found by isotropic induction
for G, spec in (([4], "gram:1"), ([2, 2], "hyperbolic"), ([4, 4], "hyperbolic"), ([2, 8], "gram:1,0,0,1")):
    gg = make_group(G)
    chi, _ = parse_form_spec(gg, spec)
    r = is_group_theoretical(TYCategory(chi))
    print(G, spec, bool(r), r.method, r.witness)

# odd cyclic groups never do
for p in (3, 5, 7):
    chi, _ = parse_form_spec(make_group([p]), "gram:1")
    c = TYCategory(chi)
    print(f"Z/{p}: group-theoretical {bool(is_group_theoretical(c))}, pointed part nondegenerate {pointed_nondegenerate(c)}")

# a swap of the two factors moves both Lagrangians of the hyperbolic plane
c = TYCategory(hyp)
ident = automorphism_from_images(g, [(1, 0), (0, 1)], hyp)
swap = automorphism_from_images(g, [(0, 1), (1, 0)], hyp)
neg = automorphism_from_images(g, [(2, 0), (0, 2)], hyp)
print("G = {1, swap}:", equivariantization_is_gt(c, [ident, swap]))
print("G = {1, -1}:  ", equivariantization_is_gt(c, [ident, neg]))
