"""
Approximate conditional-independence testing, exact and from samples.

Shows the dependence functional Delta on a distribution where X is
pairwise nearly independent of each of A and B but strongly dependent
on the pair, then runs the finite-sample tester at its stated budget.

Run:  python3 demos/ci_testing.py
"""

from adjustkit import (
    CiQuery,
    CiTester,
    ci_sample_budget,
    ci_test,
    delta_ci,
    delta_ci_empirical,
    gallery_xor,
    sample,
)

eps = 0.1
dist = gallery_xor(eps)

# Pairwise dependence is eps; joint dependence is 1/2 - eps.  A tester
# that only looks at singletons would wrongly call X independent of
# {A, B} here, which is what makes blanket search need joint tests.
q_pair = CiQuery(("X",), ("A", "B"), ())
q_single = CiQuery(("X",), ("A",), ())
print("Delta(X; A)      =", round(delta_ci(dist, q_single), 6))
print("Delta(X; B)      =", round(delta_ci(dist, CiQuery(("X",), ("B",), ())), 6))
print("Delta(X; A, B)   =", round(delta_ci(dist, q_pair), 6))

# Exact-oracle tester: answers YES iff Delta <= eps/2 on the true table.
oracle = CiTester.exact_oracle(dist, eps=0.3)
print()
print("oracle eps=0.3, X vs {A,B}:", ci_test(oracle, dist, q_pair))
print("oracle eps=0.3, X vs {A}  :", ci_test(oracle, dist, q_single))

# Finite-sample tester: needs ceil(c0 (|Sigma| + ln 1/delta) / (eps/4)^2)
# rows, where |Sigma| counts the joint alphabet of the queried variables.
tester = CiTester.empirical(eps=0.3, delta=0.05)
budget = ci_sample_budget(dist, q_pair, eps=0.3, delta=0.05)
print()
print("sample budget for the joint query:", budget)

data = sample(dist, budget, seed=11)
print("empirical X vs {A,B}:", ci_test(tester, data, q_pair),
      " Delta_hat =", round(delta_ci_empirical(data, q_pair), 4))
print("empirical X vs {A}  :", ci_test(tester, data, q_single),
      " Delta_hat =", round(delta_ci_empirical(data, q_single), 4))
