"""
Covariate adjustment on a small discrete table.

Builds a three-variable joint by hand, computes the adjusted effect
T_A = sum_a P(y | a, x) P(a) for several adjustment sets, and shows
how the positivity constant alpha controls which sets are usable.

Run:  python3 demos/adjustment_basics.py
"""

import numpy as np

from adjustkit import (
    AdjustmentQuery,
    CiQuery,
    Event,
    JointDistribution,
    VariableSpec,
    alpha,
    conditional_prob,
    delta_ci,
    exact_adjustment,
)

# A confounded triple: Z influences both X and Y, X influences Y.
# P(z, x, y) = P(z) P(x | z) P(y | x, z), all binary.
variables = (VariableSpec("Z", 2), VariableSpec("X", 2), VariableSpec("Y", 2))
p_z = np.array([0.6, 0.4])
p_x_given_z = np.array([[0.7, 0.3], [0.2, 0.8]])  # rows indexed by z
p_y_given_xz = np.zeros((2, 2, 2))  # [z, x, y]
p_y_given_xz[0, 0] = [0.9, 0.1]
p_y_given_xz[0, 1] = [0.4, 0.6]
p_y_given_xz[1, 0] = [0.7, 0.3]
p_y_given_xz[1, 1] = [0.1, 0.9]

table = np.zeros((2, 2, 2))
for z in range(2):
    for x in range(2):
        for y in range(2):
            table[z, x, y] = p_z[z] * p_x_given_z[z, x] * p_y_given_xz[z, x, y]
dist = JointDistribution(variables, table)

x_event = Event(X=1)
y_event = Event(Y=1)

# The naive conditional ignores the confounder.
naive = conditional_prob(dist, y_event, x_event)
print("P(Y=1 | X=1)            =", round(naive, 6))

# Adjusting for Z recovers the interventional quantity.
q_full = AdjustmentQuery(x_event, y_event, ("Z",))
adjusted = exact_adjustment(dist, q_full)
print("sum_z P(Y=1|z,X=1) P(z) =", round(adjusted, 6))

# The empty set gives back the naive conditional.
q_empty = AdjustmentQuery(x_event, y_event, ())
print("empty-set adjustment    =", round(exact_adjustment(dist, q_empty), 6))

# Positivity: alpha is the smallest P(x | a) over live cells of the set.
# Small alpha means some stratum rarely sees the treatment, so plug-in
# estimates of P(y | a, x) are built from few samples there.
print()
print("alpha with A = {Z}  :", round(alpha(dist, x_event, ("Z",)), 6))
print("alpha with A = {}   :", round(alpha(dist, x_event, ()), 6))

# How far can a subset estimate drift from the full set?  The joint
# dependence Delta_{X _||_ Z | {}} divided by the subset alpha bounds it.
gap = abs(exact_adjustment(dist, q_empty) - adjusted)
dep = delta_ci(dist, CiQuery(("X",), ("Z",), ()))
bound = dep / alpha(dist, x_event, ())
print()
print("|T_empty - T_Z| =", round(gap, 6), " bound Delta/alpha =", round(bound, 6))
assert gap <= bound + 1e-12
