"""Constructed distributions with known ground truth.

Each builder returns a small JointDistribution whose interesting quantities
(independence distances, positivity margins, adjustment gaps) have closed
forms, so estimator and search behavior can be checked exactly at desk
scale. All of them validate() by construction.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .ci import CiQuery, delta_ci
from .dist import Event, JointDistribution, VariableSpec, rng_for, validate
from .errors import ParamRangeError
from .estimators import alpha

# Non-implied independences must stay at least this far from zero for a
# backdoor draw to be accepted; keeps searches unambiguous for every seed.
FAITHFULNESS_MARGIN = 1e-4
BACKDOOR_ALPHA_FLOOR = 0.01
STRUCTURAL_TOL = 1e-12


def _product(variables: Sequence[VariableSpec], factors) -> JointDistribution:
    """Multiply CPT factors into a full joint table.

    Each factor is (names, array) with array axes in the order of names.
    """
    names = [v.name for v in variables]
    shape = tuple(v.cardinality for v in variables)
    table = np.ones(shape, dtype=np.float64)
    for fnames, arr in factors:
        arr = np.asarray(arr, dtype=np.float64)
        axes = [names.index(n) for n in fnames]
        order = np.argsort(axes)
        arr_t = np.transpose(arr, order)
        full_shape = [1] * len(names)
        for ax, length in zip(sorted(axes), arr_t.shape):
            full_shape[ax] = length
        table = table * arr_t.reshape(full_shape)
    return JointDistribution(variables, table.reshape(-1))


def gallery_hardness(eps: float, alpha_param: float) -> JointDistribution:
    """Four binary variables A, B, X, Y where dropping B from the
    adjustment set looks almost free but costs eps/(16 alpha) exactly.

    B is nearly a complement of A (agreement probability sqrt(eps)/2), X is
    a three-way mixture of A, 1-A, and B, and Y fires only on the single
    pattern (X, A, B) = (0, 1, 0). The mixture weights and P(A=1) are
    solved so that, at x = (X=0), y = (Y=1),

        delta(X, B | A)     = eps
        alpha over {A}      = alpha_param - eps/4
        |T_{A} - T_{A,B}|   = eps / (16 alpha_param)

    hold exactly, not just to leading order: with m = (r/2)/(1 - r/2) for
    r = sqrt(eps), X = A w.p. 1 - a', X = 1-A w.p. a' - m, X = B w.p. m,
    where a' = alpha_param + m*eps/4, and P(A=1) = (alpha_param - eps/4) /
    (4 alpha_param). Requires 0 < sqrt(eps) <= alpha_param <= 1/2.
    """
    if eps <= 0:
        raise ParamRangeError(f"eps must be positive, got {eps}")
    r = math.sqrt(eps)
    if not r <= alpha_param <= 0.5:
        raise ParamRangeError(
            f"need sqrt(eps) <= alpha <= 1/2, got sqrt({eps}) = {r}, alpha = {alpha_param}"
        )
    p_a1 = hardness_marginal_a1(eps, alpha_param)
    m = (r / 2.0) / (1.0 - r / 2.0)
    a_prime = alpha_param + m * eps / 4.0

    p_a = np.array([1.0 - p_a1, p_a1])
    p_b_given_a = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            p_b_given_a[a, b] = 1.0 - r / 2.0 if b == 1 - a else r / 2.0
    p_x_given_ab = np.empty((2, 2, 2))
    for a in range(2):
        for b in range(2):
            x0 = (
                (1.0 - a_prime) * (a == 0)
                + (a_prime - m) * (a == 1)
                + m * (b == 0)
            )
            p_x_given_ab[a, b, 0] = x0
            p_x_given_ab[a, b, 1] = 1.0 - x0
    p_y = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for a in range(2):
            for b in range(2):
                y1 = 1.0 if (x, a, b) == (0, 1, 0) else 0.0
                p_y[x, a, b, 1] = y1
                p_y[x, a, b, 0] = 1.0 - y1

    variables = (
        VariableSpec("A", 2),
        VariableSpec("B", 2),
        VariableSpec("X", 2),
        VariableSpec("Y", 2),
    )
    return _product(
        variables,
        [
            (("A",), p_a),
            (("A", "B"), p_b_given_a),
            (("A", "B", "X"), p_x_given_ab),
            (("X", "A", "B", "Y"), p_y),
        ],
    )


def hardness_marginal_a1(eps: float, alpha_param: float) -> float:
    """Closed form for P(A=1) in the hardness construction."""
    return (alpha_param - eps / 4.0) / (4.0 * alpha_param)


def gallery_weak_edge(eps: float) -> JointDistribution:
    """Binary Z, X, Y where the Z -> X edge has strength eps.

    Z is a fair coin; X copies Z with probability eps and is a fair coin
    otherwise; Y = X xor Z. Adjusting for Z gives exactly 1/2 at
    (X=0, Y=1) for every eps, while the observational P(Y=1 | X=0) is
    (1-eps)/2: an arbitrarily weak edge with a fixed-size effect gap.
    """
    if not 0 <= eps <= 1:
        raise ParamRangeError(f"eps must be in [0, 1], got {eps}")
    p_z = np.array([0.5, 0.5])
    p_x_given_z = np.empty((2, 2))
    for z in range(2):
        for x in range(2):
            p_x_given_z[z, x] = eps * (x == z) + (1.0 - eps) * 0.5
    p_y = np.zeros((2, 2, 2))
    for z in range(2):
        for x in range(2):
            p_y[z, x, x ^ z] = 1.0

    variables = (VariableSpec("Z", 2), VariableSpec("X", 2), VariableSpec("Y", 2))
    return _product(
        variables,
        [(("Z",), p_z), (("Z", "X"), p_x_given_z), (("Z", "X", "Y"), p_y)],
    )


def gallery_xor(eps: float) -> JointDistribution:
    """Binary A, B independent fair coins; X carries softened xor structure.

    P(X=0 | a, b) = 1/2 + d_ab with deviations d = (b0+e, -b0, -b0, b0-e)
    over (a,b) in row-major order, where e = min(eps, 1/2 - eps) and
    b0 = max(0, min((1 - 2 eps)/4, 1/2 - 2 eps)). The piecewise b0 keeps
    every conditional in [0, 1] over the whole range while pinning

        delta(X, A | {})      = eps      (for eps <= 1/4)
        delta(X, B | {})      = eps      (for eps <= 1/4)
        delta(X, {A,B} | {})  = 1/2 - eps

    exactly: pairwise distances hide most of the joint structure. Past
    eps = 1/4 the pairwise value 1/2 - eps is the largest the joint
    distance permits, and at eps = 1/2 the table is fully independent.
    """
    if not 0 < eps <= 0.5:
        raise ParamRangeError(f"eps must be in (0, 1/2], got {eps}")
    e = min(eps, 0.5 - eps)
    b0 = max(0.0, min((1.0 - 2.0 * eps) / 4.0, 0.5 - 2.0 * eps))
    dev = {(0, 0): b0 + e, (0, 1): -b0, (1, 0): -b0, (1, 1): b0 - e}
    p_a = np.array([0.5, 0.5])
    p_b = np.array([0.5, 0.5])
    p_x = np.empty((2, 2, 2))
    for a in range(2):
        for b in range(2):
            p_x[a, b, 0] = 0.5 + dev[(a, b)]
            p_x[a, b, 1] = 0.5 - dev[(a, b)]

    variables = (VariableSpec("A", 2), VariableSpec("B", 2), VariableSpec("X", 2))
    return _product(
        variables,
        [(("A",), p_a), (("B",), p_b), (("A", "B", "X"), p_x)],
    )


def gallery_backdoor(k: int, seed: int) -> JointDistribution:
    """Random backdoor graph B -> A_i -> X -> Y with confounding B -> Y.

    Variables are declared as B, A_1..A_k, X, Y, all binary. CPT entries
    are drawn uniformly from [0.2, 0.8], so nothing is deterministic and
    every conditional stays inside [0.2, 0.8]. X reads only its parents
    A_1..A_k, hence delta(X, B | A_1..A_k) = 0 structurally, and Y reads
    only (X, B), hence delta(Y, A_1..A_k | X, B) = 0 structurally. Draws
    are rejected until every non-implied independence is bounded away from
    zero, so the minimal blanket of X inside {B, A_1..A_k} is exactly
    {A_1..A_k} and {B} is the unique useful screening set, for every seed.
    """
    if not 1 <= k <= 8:
        raise ParamRangeError(f"k must be in 1..8, got {k}")
    rng = rng_for(seed)
    parents = tuple(f"A{i}" for i in range(1, k + 1))
    variables = (
        (VariableSpec("B", 2),)
        + tuple(VariableSpec(p, 2) for p in parents)
        + (VariableSpec("X", 2), VariableSpec("Y", 2))
    )
    pool = ("B",) + parents

    while True:
        p_b1 = rng.uniform(0.2, 0.8)
        factors = [(("B",), np.array([1.0 - p_b1, p_b1]))]
        for p in parents:
            cpt = np.empty((2, 2))
            cpt[:, 1] = rng.uniform(0.2, 0.8, size=2)
            cpt[:, 0] = 1.0 - cpt[:, 1]
            factors.append((("B", p), cpt))
        x_cpt = np.empty((2,) * k + (2,))
        x_cpt[..., 1] = rng.uniform(0.2, 0.8, size=(2,) * k)
        x_cpt[..., 0] = 1.0 - x_cpt[..., 1]
        factors.append((parents + ("X",), x_cpt))
        y_cpt = np.empty((2, 2, 2))
        y_cpt[..., 1] = rng.uniform(0.2, 0.8, size=(2, 2))
        y_cpt[..., 0] = 1.0 - y_cpt[..., 1]
        factors.append((("X", "B", "Y"), y_cpt))

        dist = _product(variables, factors)

        if _backdoor_acceptable(dist, pool, parents):
            validate(dist)
            return dist


def _backdoor_acceptable(
    dist: JointDistribution, pool: tuple[str, ...], parents: tuple[str, ...]
) -> bool:
    from itertools import combinations

    # Graph-implied independences must hold exactly.
    if delta_ci(dist, CiQuery(("X",), ("B",), parents)) > STRUCTURAL_TOL:
        return False
    if delta_ci(dist, CiQuery(("Y",), parents, ("X", "B"))) > STRUCTURAL_TOL:
        return False
    # Everything not implied must be solidly nonzero, so subset searches
    # have a unique answer at tight tolerances.
    parent_set = set(parents)
    for k_level in range(len(pool)):
        for s in combinations(pool, k_level):
            if parent_set <= set(s):
                continue
            rest = tuple(v for v in pool if v not in s)
            if delta_ci(dist, CiQuery(("X",), rest, s)) < FAITHFULNESS_MARGIN:
                return False
    # The empty screening candidate has to fail, otherwise level 0 would
    # shadow {B} in the screening search.
    if delta_ci(dist, CiQuery(("Y",), parents, ("X",))) < FAITHFULNESS_MARGIN:
        return False
    for x_val in (0, 1):
        if alpha(dist, Event({"X": x_val}), pool) < BACKDOOR_ALPHA_FLOOR:
            return False
    return True


def gallery_random(
    num_vars: int,
    max_card: int,
    seed: int,
    positivity_floor: float = 0.0,
) -> JointDistribution:
    """Seeded random joint for property suites.

    Cardinalities are drawn uniformly from {2..max_card}, the table from a
    flat Dirichlet, then mixed with the uniform table at weight
    positivity_floor so every cell is at least positivity_floor/|table|.
    """
    if not 1 <= num_vars <= 6:
        raise ParamRangeError(f"num_vars must be in 1..6, got {num_vars}")
    if not 2 <= max_card <= 4:
        raise ParamRangeError(f"max_card must be in 2..4, got {max_card}")
    if not 0 <= positivity_floor < 1:
        raise ParamRangeError(
            f"positivity_floor must be in [0, 1), got {positivity_floor}"
        )
    rng = rng_for(seed)
    cards = rng.integers(2, max_card + 1, size=num_vars)
    variables = tuple(
        VariableSpec(f"V{i + 1}", int(c)) for i, c in enumerate(cards)
    )
    n_cells = int(np.prod(cards))
    raw = rng.dirichlet(np.ones(n_cells))
    table = (1.0 - positivity_floor) * raw + positivity_floor / n_cells
    table = table / table.sum()
    return JointDistribution(variables, table)
