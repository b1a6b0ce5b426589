"""
Blanket and screening-set discovery on a known backdoor graph.

In the backdoor gallery a root cause B drives the parents A1..Ak of X
and also drives Y directly, so the blanket of X is {A1..Ak} while the
singleton {B} screens Y from those parents.  The blanket search should
recover the parents, the screening search should shrink them to {B},
and both should match exhaustive enumeration.

Run:  python3 demos/blanket_search.py
"""

from adjustkit import (
    AdjustmentQuery,
    CiTester,
    Event,
    amba,
    bamba,
    brute_force_min_blanket,
    brute_force_min_screening,
    exact_adjustment,
    gallery_backdoor,
)

k = 3
dist = gallery_backdoor(k, seed=1)
candidates = ("B", "A1", "A2", "A3")
eps = 1e-9

tester = CiTester.exact_oracle(dist, eps=eps)

blanket_report = amba(tester, dist, "X", candidates, eps=eps, delta=0.05)
print("AMBA chose         :", blanket_report.chosen)
print("  level reached    :", blanket_report.level_reached)
print("  tests run        :", blanket_report.tests_run)
print("  tests per level  :", blanket_report.tests_per_level)

screen_report = bamba(tester, dist, "X", "Y", candidates,
                      blanket_report.chosen, eps=eps, delta=0.05)
print("BAMBA chose        :", screen_report.chosen)
print("  fallback used    :", screen_report.fallback_used)

# Exhaustive enumeration over all subsets agrees with both searches.
bf_blanket = brute_force_min_blanket(dist, "X", candidates)
bf_screen = brute_force_min_screening(dist, "X", "Y", candidates,
                                      blanket_report.chosen)
print()
print("brute-force blanket :", bf_blanket)
print("brute-force screen  :", bf_screen)
assert bf_blanket == blanket_report.chosen
assert bf_screen == screen_report.chosen

# Adjusting on the screening set reproduces the full-set answer.
x_event, y_event = Event(X=0), Event(Y=1)
t_full = exact_adjustment(dist, AdjustmentQuery(x_event, y_event, candidates))
t_screen = exact_adjustment(dist, AdjustmentQuery(x_event, y_event,
                                                  screen_report.chosen))
print()
print("T over all parents :", round(t_full, 9))
print("T over screen set  :", round(t_screen, 9))
print("difference         :", abs(t_full - t_screen))
