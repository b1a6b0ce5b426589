"""
Tour of the constructed distribution families.

Each family is built so a quantity of interest has a closed form,
which makes error bounds and search behavior checkable by hand:

  hardness   small dependence but a fixed adjustment gap eps/(16 alpha)
  weak-edge  the adjusted effect is exactly one half for every eps
  xor        pairwise dependence eps, joint dependence 1/2 - eps
  backdoor   random parent CPTs with faithfulness margins enforced
  random     unstructured Dirichlet joints for fuzzing

Run:  python3 demos/gallery_tour.py
"""

from adjustkit import (
    AdjustmentQuery,
    CiQuery,
    Event,
    alpha,
    conditional_prob,
    delta_ci,
    exact_adjustment,
    gallery_backdoor,
    gallery_hardness,
    gallery_random,
    gallery_weak_edge,
    gallery_xor,
)

eps, a = 0.04, 0.4
hard = gallery_hardness(eps, a)
t_full = exact_adjustment(hard, AdjustmentQuery(Event(X=0), Event(Y=1), ("A", "B")))
t_sub = exact_adjustment(hard, AdjustmentQuery(Event(X=0), Event(Y=1), ("A",)))
print("hardness(%.2f, %.2f)" % (eps, a))
print("  Delta(X;B|A) =", round(delta_ci(hard, CiQuery(("X",), ("B",), ("A",))), 10),
      " target eps =", eps)
print("  alpha on {A} =", round(alpha(hard, Event(X=0), ("A",)), 10),
      " target =", a - eps / 4)
print("  |T_A - T_AB| =", round(abs(t_sub - t_full), 10),
      " target eps/(16 alpha) =", eps / (16 * a))

weak = gallery_weak_edge(0.01)
print()
print("weak-edge(0.01)")
print("  adjusted on {Z} =", exact_adjustment(
    weak, AdjustmentQuery(Event(X=0), Event(Y=1), ("Z",))))
print("  naive P(Y=1|X=0) =", conditional_prob(weak, Event(Y=1), Event(X=0)))

xor = gallery_xor(0.1)
print()
print("xor(0.1)")
print("  Delta(X;A)   =", round(delta_ci(xor, CiQuery(("X",), ("A",), ())), 10))
print("  Delta(X;B)   =", round(delta_ci(xor, CiQuery(("X",), ("B",), ())), 10))
print("  Delta(X;A,B) =", round(delta_ci(xor, CiQuery(("X",), ("A", "B"), ())), 10))

bd = gallery_backdoor(2, seed=3)
print()
print("backdoor(2, seed=3) variables:", [v.name for v in bd.variables])
print("  Delta(X ; B | A1,A2) =",
      delta_ci(bd, CiQuery(("X",), ("B",), ("A1", "A2"))))
print("  alpha over parents   =",
      round(alpha(bd, Event(X=0), ("B", "A1", "A2")), 6))

rnd = gallery_random(4, 3, seed=9)
print()
print("random(4 vars, 3 levels, seed=9) cells sum:",
      float(rnd.table.sum()))
